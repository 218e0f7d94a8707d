#include <reflpos/float128.hpp>
#include <reflpos/scaling.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace reflpos;

namespace {

// Asymmetric mollifier with nonzero first moment.
TestFunction tilted_bump() { return TestFunction::bump(0.0, 1.0, {1.0, 0.9}).normalized(); }

std::vector<double> eps_ladder() {
  std::vector<double> e;
  for (int k = 3; k <= 8; ++k) e.push_back(std::ldexp(1.0, -k));
  return e;
}

}  // namespace

TEST(RepGram, HalfIntegerValues) {
  const RepKernelSpace sp = rep_gram(0.5, 4);
  EXPECT_DOUBLE_EQ(sp.gram(0), 1.0);
  EXPECT_NEAR(sp.gram(1), 2.0, 1e-15);
  EXPECT_NEAR(sp.gram(2), 8.0 / 3.0, 1e-15);
}

TEST(RepGram, EmptyProductForAnyS) {
  for (double s : {0.1, 0.5, 0.99}) EXPECT_EQ(rep_gram(s, 3).gram(0), 1.0);
}

TEST(RepGram, RejectsOutOfRange) {
  for (double s : {0.0, 1.0, -0.5, 1.5}) {
    try {
      rep_gram(s, 4);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParameterOutOfRange);
    }
  }
}

TEST(RepGram, LargeOrderStaysFinite) {
  const RepKernelSpace sp = rep_gram(0.5, 200);
  EXPECT_TRUE(std::isfinite(sp.gram(200)));
  // g_n ~ Gamma(1-s) n^s.
  EXPECT_NEAR(sp.gram(200) / (std::tgamma(0.5) * std::sqrt(200.0)), 1.0, 1e-2);
}

TEST(ScalingOperator, Spectrum) {
  const Matrix d = scaling_operator(2.0, rep_gram(0.5, 2));
  EXPECT_NEAR(d(0, 0).real(), 0.70710678118654752, 1e-15);
  EXPECT_NEAR(d(1, 1).real(), 0.17677669529663688, 1e-15);
  EXPECT_NEAR(d(2, 2).real(), 0.04419417382415922, 1e-15);
}

TEST(ScalingOperator, NearIdentity) {
  const Matrix d = scaling_operator(1.0 + 1e-9, rep_gram(0.5, 3));
  EXPECT_LT((d - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ScalingOperator, RejectsContraction) {
  EXPECT_THROW(scaling_operator(1.0, rep_gram(0.5, 3)), Error);
  EXPECT_THROW(scaling_operator(0.5, rep_gram(0.5, 3)), Error);
}

TEST(ScalingOperator, MultiplicativeInA) {
  const RepKernelSpace sp = rep_gram(0.3, 12);
  const Matrix a = scaling_operator(2.0, sp);
  EXPECT_LT((a * a - scaling_operator(4.0, sp)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((a * scaling_operator(3.0, sp) - scaling_operator(6.0, sp)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ScalingOperator, PurityPowers) {
  const Matrix d = scaling_operator(2.0, rep_gram(0.5, 16));
  Matrix p = Matrix::Identity(17, 17);
  for (int k = 1; k <= 20; ++k) {
    p = p * d;
    EXPECT_NEAR(opnorm(p) / std::pow(2.0, -0.5 * k), 1.0, 1e-13);
  }
}

TEST(DiagonalModel, EigenvaluesExact) {
  const OsrRealization r = osr_construct(scaling_diagonal_system(0.5, 2.0, 16));
  Eigen::SelfAdjointEigenSolver<Matrix> es(r.s, Eigen::EigenvaluesOnly);
  for (int n = 0; n <= 16; ++n) EXPECT_NEAR(es.eigenvalues()(16 - n), std::pow(2.0, -0.5 - 2.0 * n), 1e-12);
}

TEST(WcTransform, ConstantFunction) {
  const WcCoefficients c = wc_transform(TestFunction::constant(), rep_gram(0.5, 4));
  EXPECT_NEAR(c.c(0), 2.0, 1e-14);
  EXPECT_NEAR(c.c(1), 0.0, 1e-14);
  EXPECT_NEAR(c.c(2), 0.25, 1e-14);
}

TEST(WcTransform, OddFunctionHasNoEvenCoefficients) {
  const TestFunction odd = TestFunction::bump(0.0, 0.8, {0.0, 1.0});
  const WcCoefficients c = wc_transform(odd, rep_gram(0.5, 20));
  for (int n = 0; n <= 20; n += 2) EXPECT_NEAR(c.c(n), 0.0, 1e-15);
}

TEST(WcTransform, Underresolved) {
  try {
    wc_transform(TestFunction::constant(1.0, 10), rep_gram(0.5, 40));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::QuadratureUnderresolved);
  }
}

TEST(WcTransform, ReconstructsJForm) {
  for (double s : {0.25, 0.5, 0.75}) {
    const RepKernelSpace sp = rep_gram(s, 90);
    for (const TestFunction& k :
         {TestFunction::bump(0.1, 0.6, {1.0, -0.4}), TestFunction::bump(-0.3, 0.5, {0.2, 0.0, 1.0})}) {
      const double lhs = wc_transform(k, sp).norm_sq(sp);
      const double rhs = j_form(k, k, s);
      EXPECT_NEAR(lhs / rhs, 1.0, 1e-9) << s;
    }
  }
}

TEST(WcTransform, DeltaPairing) {
  const double s = 0.5;
  const RepKernelSpace sp = rep_gram(s, 10);
  const TestFunction k = TestFunction::bump(0.2, 0.5, {1.0, 0.3});
  const WcCoefficients c = wc_transform(k, sp);
  double falling = 1.0;  // (s-1)(s-2)...(s-n)
  for (int n = 0; n <= 10; ++n) {
    if (n > 0) falling *= (s - n);
    EXPECT_NEAR(falling * c.c(n) * sp.gram(n), falling * k.moment(n), 1e-13 * std::max(1.0, std::abs(falling)));
  }
}

TEST(JForm, ConstantSeriesOracle) {
  // sum over even n of (1-s)_n/n! (2/(n+1))^2, summed with an integral tail estimate.
  const double s = 0.5;
  double acc = 0.0, coeff = 1.0;
  const int n_max = 200000;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) coeff *= (n - s) / n;
    if (n % 2 == 0) acc += coeff * 4.0 / ((n + 1.0) * (n + 1.0));
  }
  // Tail: coeff ~ n^{-s}/Gamma(1-s), half the terms, so ~ 2 n^{-1-s}/((1+s) Gamma(1-s)).
  acc += 2.0 * std::pow(n_max, -1.0 - s) / ((1.0 + s) * std::tgamma(1.0 - s));
  // Double integral of (1 - xy)^{-1/2} over [-1,1]^2, computed independently to 30 digits.
  EXPECT_NEAR(acc, 4.2627198028284162, 1e-9);
  EXPECT_NEAR(j_form(TestFunction::constant(1.0, 400), TestFunction::constant(1.0, 400), s), acc, 2e-3);
}

TEST(JForm, ParityZero) {
  const TestFunction even = TestFunction::bump(0.0, 0.9, {1.0, 0.0, 0.5});
  const TestFunction odd = TestFunction::bump(0.0, 0.9, {0.0, 1.0});
  EXPECT_NEAR(j_form(even, odd, 0.5), 0.0, 1e-15);
}

TEST(JForm, SeriesAgreement) {
  const TestFunction a = TestFunction::bump(0.1, 0.7, {1.0, 0.5}), b = TestFunction::bump(-0.2, 0.6);
  EXPECT_NEAR(j_form(a, b, 0.3), j_form_series(a, b, 0.3, 120), 1e-10);
}

TEST(SingularQuadrature, MomentExactness) {
  for (double s : {0.25, 0.5, 0.75}) EXPECT_LT(SingularQuadrature(s).moment_error(60), 1e-12);
}

TEST(HsForm, ParityZero) {
  const SingularQuadrature q(0.5);
  const TestFunction even = TestFunction::bump(0.0, 0.9, {1.0, 0.0, 0.5});
  const TestFunction odd = TestFunction::bump(0.0, 0.9, {0.0, 1.0});
  EXPECT_NEAR(hs_form(even, odd, 0.5, q), 0.0, 1e-12);
}

TEST(HsForm, MatchesBruteForceOnSmoothPair) {
  // Singularity subtraction oracle: int int f(x)|x-y|^{s-1}(f(y)-f(x)) + int f(x)^2 c(x), c(x) = int |x-y|^{s-1} dy.
  const double s = 0.5;
  const TestFunction f = TestFunction::bump(0.0, 0.8, {1.0, 0.3});
  const GaussRule r = gauss_legendre(400).mapped(f.lo, f.hi);
  double acc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double x = r.nodes[i], fx = f(x);
    double row = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j)
      if (i != j) row += r.weights[j] * std::pow(std::abs(x - r.nodes[j]), s - 1.0) * (f(r.nodes[j]) - fx);
    const double c = (std::pow(x - f.lo, s) + std::pow(f.hi - x, s)) / s;
    acc += r.weights[i] * fx * (row + fx * c);
  }
  EXPECT_NEAR(hs_form(f, f, s, SingularQuadrature(s)) / acc, 1.0, 5e-3);
}

TEST(HsForm, DominatesJForm) {
  for (double s : {0.25, 0.5, 0.75}) {
    const SingularQuadrature q(s);
    for (const TestFunction& f : {TestFunction::bump(0.0, 0.9), TestFunction::bump(0.3, 0.5, {1.0, -1.0}),
                                  TestFunction::bump(-0.5, 0.4, {0.0, 1.0})}) {
      const double h = hs_form(f, f, s, q), j = j_form(f, f, s);
      EXPECT_GE(j, 0.0);
      EXPECT_LE(j, h * (1.0 + 1e-8));
    }
  }
}

TEST(HsForm, DilationCovariance) {
  const double s = 0.5;
  const SingularQuadrature q(s);
  const TestFunction f = TestFunction::bump(0.1, 0.8, {1.0, 0.4});
  const double base = hs_form(f, f, s, q);
  for (double a : {1.2, 2.0}) EXPECT_NEAR(hs_form(f.dilation_rep(a, s), f.dilation_rep(a, s), s, q) / base, 1.0, 1e-9);
}

TEST(DeltaNorms, HalfTable) {
  const RVector d = delta_norms(0.5, 4);
  EXPECT_NEAR(d(0), 1.0, 1e-15);
  EXPECT_NEAR(d(1), 0.5, 1e-15);
  EXPECT_NEAR(d(2), 1.5, 1e-14);
  EXPECT_NEAR(d(3), 11.25, 1e-13);
  EXPECT_NEAR(d(4), 157.5, 1e-12);
}

TEST(DeltaNorms, ZerothIsOne) {
  for (double s : {0.2, 0.7}) EXPECT_NEAR(delta_norms(s, 0)(0), 1.0, 1e-15);
}

TEST(DeltaNorms, RepGramConsistency) {
  for (double s : {0.1, 0.5, 0.9}) EXPECT_LT(delta_norm_consistency(s, 20), 1e-12);
}

TEST(EpsilonScaling, HalfSlopes) {
  const EpsilonScaling e = epsilon_scaling_experiment(tilted_bump(), 0.5, eps_ladder());
  EXPECT_NEAR(e.slope_hs, -0.5, 0.05);
  EXPECT_NEAR(e.slope_j, 2.0, 0.05);
  EXPECT_NEAR(e.slope_j_raw, 0.0, 0.05);
}

TEST(EpsilonScaling, NearOneExponent) {
  const EpsilonScaling e = epsilon_scaling_experiment(tilted_bump(), 0.9, eps_ladder());
  EXPECT_NEAR(e.slope_hs, -0.1, 0.05);
}

TEST(EpsilonScaling, DegenerateGrid) {
  try {
    epsilon_scaling_experiment(tilted_bump(), 0.5, {0.1, 0.05});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateGrid);
  }
}

TEST(Mollifier, OriginIsExact) {
  const MollifierReport r = mollifier_limit_check(tilted_bump(), 0.5, {0.0}, eps_ladder());
  for (double d : r.max_deviation) EXPECT_LT(d, 1e-13);
}

TEST(Mollifier, ConvergesAwayFromOrigin) {
  const MollifierReport r = mollifier_limit_check(tilted_bump(), 0.5, {0.5}, {std::ldexp(1.0, -6)});
  EXPECT_LE(r.max_deviation[0], 1e-2);
}

TEST(Mollifier, DerivativeIsFirstOrder) {
  std::vector<double> ys;
  for (int i = -9; i <= 9; ++i) ys.push_back(0.1 * i);
  const MollifierReport r = mollifier_limit_check(tilted_bump(), 0.5, ys, eps_ladder());
  EXPECT_NEAR(r.derivative_slope, 1.0, 0.1);
  for (std::size_t i = 1; i < r.max_deviation.size(); ++i) EXPECT_LT(r.max_deviation[i], r.max_deviation[i - 1]);
}

TEST(QuadratureModel, TopEigenvalues) {
  const ScalingQuadratureSystem q = scaling_osr_quadrature(0.5, 2.0, 64, 0.5, 1e-10);
  const OsrRealization r = osr_construct(q.cs);
  Eigen::SelfAdjointEigenSolver<Matrix> es(r.s, Eigen::EigenvaluesOnly);
  const auto d = es.eigenvalues().size();
  ASSERT_GE(d, 4);
  for (int n = 0; n < 4; ++n) EXPECT_NEAR(es.eigenvalues()(d - 1 - n), std::pow(2.0, -0.5 - 2.0 * n), 1e-6);
  EXPECT_TRUE(r.norm_bound_ok);
}

TEST(QuadratureModel, CoarseGridRejected) {
  try {
    scaling_osr_quadrature(0.5, 2.0, 16);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::QuadratureUnderresolved);
  }
}

TEST(QuadratureModel, RepRealizationReproducesForm) {
  const ScalingQuadratureSystem q = scaling_osr_quadrature(0.5, 2.0, 40);
  const OsrRealization r = scaling_rep_realization(q, 120);
  const Matrix m = r.w.adjoint() * r.hk.gram() * r.w;
  EXPECT_LT(opnorm(m - q.cs.m) / opnorm(q.cs.m), 1e-12);
}

TEST(QuadratureModel, ExtendedPrecisionIntertwiner) {
  const ScalingUniquenessReport r = scaling_uniqueness_check<float128>(0.5, 2.0, 64, 0.5, 1e-20, 60);
  EXPECT_LT(r.form_mismatch, 1e-12);
  EXPECT_LT(r.isometry_residual, 1e-6);
  EXPECT_LT(r.intertwining_residual, 1e-6);
  ASSERT_GE(r.top_eigenvalues.size(), 4u);
  for (int n = 0; n < 4; ++n) EXPECT_NEAR(r.top_eigenvalues[n], std::pow(2.0, -0.5 - 2.0 * n), 1e-12);
}

TEST(FourierNorm, ProportionalAcrossBumps) {
  const double s = 0.5;
  const FourierNormReport a = fourier_norm_check(TestFunction::bump(0.0, 0.6), s);
  const FourierNormReport b = fourier_norm_check(TestFunction::bump(0.2, 0.4, {1.0, 0.7}), s);
  EXPECT_NEAR(a.ratio / b.ratio, 1.0, 1e-2);
  EXPECT_NEAR(a.ratio / a.constant_expected, 1.0, 1e-2);
}

TEST(FourierNorm, TranslationInvariant) {
  const TestFunction f = TestFunction::bump(0.0, 0.4, {1.0, 0.3});
  EXPECT_NEAR(fourier_side_integral(f.translated(0.35), 0.5) / fourier_side_integral(f, 0.5), 1.0, 1e-8);
}

TEST(FourierNorm, DilationExponent) {
  const double s = 0.5, rho = 0.5;
  const TestFunction f = TestFunction::bump(0.0, 0.8);
  EXPECT_NEAR(fourier_side_integral(f.dilated(rho), s) / fourier_side_integral(f, s), std::pow(rho, s - 1.0), 1e-6);
}
