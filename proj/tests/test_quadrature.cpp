#include <reflpos/quadrature.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace reflpos;

TEST(GaussLegendre, ThreePointRule) {
  const GaussRule r = gauss_legendre(3);
  EXPECT_NEAR(r.nodes[0], -std::sqrt(0.6), 1e-15);
  EXPECT_NEAR(r.nodes[1], 0.0, 1e-15);
  EXPECT_NEAR(r.nodes[2], std::sqrt(0.6), 1e-15);
  EXPECT_NEAR(r.weights[0], 5.0 / 9.0, 1e-15);
  EXPECT_NEAR(r.weights[1], 8.0 / 9.0, 1e-15);
}

TEST(GaussLegendre, PolynomialExactness) {
  for (int n : {1, 4, 17, 64}) {
    const GaussRule r = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      const double exact = (k % 2) ? 0.0 : 2.0 / (k + 1);
      EXPECT_NEAR(r.integrate([&](double x) { return std::pow(x, k); }), exact, 1e-13) << n << " " << k;
    }
  }
}

TEST(GaussLegendre, MappedInterval) {
  const GaussRule r = gauss_legendre(10).mapped(0.0, 2.0);
  EXPECT_NEAR(r.integrate([](double x) { return x * x * x; }), 4.0, 1e-13);
}

TEST(GaussLegendre, ExtendedPrecisionAgrees) {
  std::vector<long double> x, w;
  gauss_legendre_nodes<long double>(20, x, w);
  const GaussRule r = gauss_legendre(20);
  for (int i = 0; i < 20; ++i) {
    EXPECT_NEAR(static_cast<double>(x[i]), r.nodes[i], 1e-15);
    EXPECT_NEAR(static_cast<double>(w[i]), r.weights[i], 1e-15);
  }
}

TEST(GaussJacobi, ChebyshevFirstKind) {
  const int n = 7;
  const GaussRule r = gauss_jacobi(n, -0.5, -0.5);
  for (int i = 0; i < n; ++i) {
    const double x = -std::cos((2.0 * (i + 1) - 1.0) * M_PI / (2.0 * n));
    EXPECT_NEAR(r.nodes[i], x, 1e-13);
    EXPECT_NEAR(r.weights[i], M_PI / n, 1e-13);
  }
}

TEST(GaussJacobi, LegendreSpecialCase) {
  const GaussRule a = gauss_jacobi(12, 0.0, 0.0), b = gauss_legendre(12);
  for (int i = 0; i < 12; ++i) {
    EXPECT_NEAR(a.nodes[i], b.nodes[i], 1e-13);
    EXPECT_NEAR(a.weights[i], b.weights[i], 1e-13);
  }
}

TEST(GaussJacobi, BetaMoments) {
  // int (1-x)^a (1+x)^b x^k: moment recursion against the total mass 2^{a+b+1} B(a+1, b+1).
  const double a = 0.3, b = -0.6;
  const GaussRule r = gauss_jacobi(16, a, b);
  const double mass = std::exp((a + b + 1) * std::log(2.0) + std::lgamma(a + 1) + std::lgamma(b + 1) - std::lgamma(a + b + 2));
  EXPECT_NEAR(r.integrate([](double) { return 1.0; }), mass, 1e-13);
  EXPECT_NEAR(r.integrate([](double x) { return x; }), mass * (b - a) / (a + b + 2), 1e-13);
}

TEST(SingularOrigin, PowerMoments) {
  for (double s : {0.25, 0.5, 0.75}) {
    const GaussRule r = gauss_singular_origin(30, s);
    for (int k = 0; k <= 40; ++k)
      EXPECT_NEAR(r.integrate([&](double t) { return std::pow(t, k); }), 1.0 / (s + k), 1e-12);
  }
}
