#include <reflpos/graphspace.hpp>
#include <reflpos/hankel.hpp>
#include <reflpos/hardy.hpp>
#include <reflpos/osr.hpp>
#include <reflpos/scaling.hpp>

#include <gtest/gtest.h>

#include <algorithm>

using namespace reflpos;

namespace {

std::vector<double> sorted_eigs(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(s), Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return v;
}

Matrix random_unitary(CounterRng& rng, int n) {
  Eigen::HouseholderQR<Matrix> qr(rng.cmatrix(n, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

}  // namespace

TEST(Validate, HardyTruncation) {
  const ValidationReport r = validate_system(hardy_system(6));
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.r_sym, 0.0);
  EXPECT_EQ(r.r_inv, 0.0);
  EXPECT_NEAR(r.min_eig_pjp, 0.0, 1e-15);
}

TEST(Validate, IdentityReflectionFails) {
  ReflectionSystem sys = hardy_system(6);
  sys.j = Matrix::Identity(sys.u.rows(), sys.u.cols());
  const ValidationReport r = validate_system(sys);
  EXPECT_FALSE(r.ok);
  EXPECT_NEAR(r.r_sym, opnorm(sys.u - sys.u.adjoint()), 1e-12);
  EXPECT_GT(r.r_sym, 0.5);
}

TEST(Validate, BlockOperatorOnDefiniteSubspace) {
  // Eigenvectors of U(a) with positive J-norm span an invariant J-positive subspace.
  CounterRng rng(11);
  const BlockOperator b = block_reflection_operator(rng.cmatrix(2, 3));
  Eigen::ComplexEigenSolver<Matrix> es(b.u);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Vector v = es.eigenvectors().col(i);
    if (v.dot(b.j * v).real() > 1e-8 && std::abs(es.eigenvalues()(i).imag()) < 1e-10) cols.push_back(i);
  }
  ASSERT_FALSE(cols.empty());
  Matrix k(b.u.rows(), 1);
  k.col(0) = es.eigenvectors().col(cols[0]);
  const ValidationReport r = validate_system({InnerProductSpace::standard(5), b.u, b.j, k, 1e-9});
  EXPECT_TRUE(r.ok) << r.r_sym << " " << r.r_inv << " " << r.min_eig_pjp;
}

TEST(Validate, ShapeMismatch) {
  ReflectionSystem sys = hardy_system(3);
  sys.k_basis = Matrix::Zero(2, 1);
  EXPECT_THROW(validate_system(sys), Error);
}

TEST(Compress, HardyRankOne) {
  const CompressedSystem cs = compress(hardy_system(5));
  Matrix expect = Matrix::Zero(6, 6);
  expect(0, 0) = 1.0;
  EXPECT_EQ((cs.m - expect).norm(), 0.0);
}

TEST(Compress, FullSpaceWithTrivialReflection) {
  CounterRng rng(12);
  const Matrix x = rng.cmatrix(4, 4);
  const Matrix g = x * x.adjoint() + Matrix::Identity(4, 4);
  const Matrix u = hermitian_part(rng.cmatrix(4, 4));
  const Matrix ug = g.llt().solve(u);  // G-selfadjoint
  const ReflectionSystem sys{InnerProductSpace(g), ug, Matrix::Identity(4, 4), Matrix::Identity(4, 4), 1e-9};
  const CompressedSystem cs = compress(sys);
  EXPECT_LT((cs.m - g).norm(), 1e-12);
  EXPECT_LT((*cs.u_k - ug).norm(), 1e-10);
}

TEST(Compress, IllConditionedBasis) {
  ReflectionSystem sys = hardy_system(3);
  sys.k_basis.col(1) = sys.k_basis.col(0) + 1e-6 * sys.k_basis.col(1);
  try {
    compress(sys);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IllConditionedBasis);
  }
}

TEST(Construct, HardyOneDimensionalZeroOperator) {
  for (int n : {1, 4, 9}) {
    const OsrRealization r = osr_construct(compress(hardy_system(n)));
    EXPECT_EQ(r.dim(), 1);
    EXPECT_EQ(r.nullity, n);
    EXPECT_EQ(r.s.norm(), 0.0);
  }
}

TEST(Construct, HankelTwoAtoms) {
  const HankelOsr h = hankel_osr(MomentMeasure::from_atoms({{0.5, 0.5}, {-0.5, 0.5}}), 8);
  EXPECT_EQ(h.realization.dim(), 2);
  EXPECT_EQ(h.realization.nullity, 6);
  ASSERT_EQ(h.atoms_recovered.size(), 2u);
  EXPECT_NEAR(h.atoms_recovered[0], -0.5, 1e-10);
  EXPECT_NEAR(h.atoms_recovered[1], 0.5, 1e-10);
}

TEST(Construct, DefiniteFormIsAlreadyTheSpace) {
  CounterRng rng(13);
  CompressedSystem cs;
  cs.m = Matrix::Identity(4, 4);
  cs.u_k = hermitian_part(rng.cmatrix(4, 4));
  const OsrRealization r = osr_construct(cs);
  EXPECT_EQ(r.nullity, 0);
  EXPECT_LT((r.w.adjoint() * r.w - Matrix::Identity(4, 4)).norm(), 1e-14);
  EXPECT_LT((r.w.adjoint() * r.s * r.w - *cs.u_k).norm(), 1e-13);
}

TEST(Construct, RejectsAsymmetricTransfer) {
  CompressedSystem cs;
  cs.m = Matrix::Identity(2, 2);
  Matrix u = Matrix::Zero(2, 2);
  u(0, 1) = 1.0;
  cs.u_k = u;
  try {
    osr_construct(cs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotReflectionSymmetric);
  }
}

TEST(Construct, RejectsIndefiniteForm) {
  CompressedSystem cs;
  cs.m = Matrix::Identity(2, 2);
  cs.m(1, 1) = -1.0;
  cs.u_k = Matrix::Zero(2, 2);
  try {
    osr_construct(cs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotReflectionPositive);
  }
}

TEST(Construct, RealizationInvariantsOnRandomSystems) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int dim = 2 + 2 * static_cast<int>(seed % 6);
    const ReflectionSystem sys = random_reflection_system(dim, seed);
    const CompressedSystem cs = compress(sys);
    const OsrRealization r = osr_construct(cs);
    EXPECT_EQ(r.dim() + r.nullity, cs.m.rows());
    EXPECT_LE(opnorm(r.w.adjoint() * r.w - cs.m), 1e-10 * opnorm(cs.m));
    EXPECT_LE(r.sw_residual, 1e-8 * std::max(1.0, opnorm(cs.m) * opnorm(*cs.u_k)));
    EXPECT_TRUE(r.norm_bound_ok);
    for (double e : sorted_eigs(r.s)) EXPECT_LE(std::abs(e), r.norm_bound + 1e-8);
  }
}

TEST(Construct, BasisIndependence) {
  CounterRng rng(14);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ReflectionSystem sys = random_reflection_system(8, seed);
    const auto e1 = sorted_eigs(osr_construct(compress(sys)).s);
    const auto r = sys.k_basis.cols();
    sys.k_basis = sys.k_basis * (rng.cmatrix(r, r) + 3.0 * Matrix::Identity(r, r));
    const auto e2 = sorted_eigs(osr_construct(compress(sys)).s);
    ASSERT_EQ(e1.size(), e2.size());
    for (std::size_t i = 0; i < e1.size(); ++i) EXPECT_NEAR(e1[i], e2[i], 1e-9);
  }
}

TEST(Intertwiner, IdenticalRealizations) {
  const CompressedSystem cs = compress(random_reflection_system(8, 3));
  const OsrRealization r = osr_construct(cs);
  const IntertwinerResult t = intertwiner(r, r, cs);
  EXPECT_LT((t.t - Matrix::Identity(r.dim(), r.dim())).norm(), 1e-10);
}

TEST(Intertwiner, RecoversUnitaryConjugation) {
  CounterRng rng(15);
  const CompressedSystem cs = compress(random_reflection_system(10, 4));
  const OsrRealization r1 = osr_construct(cs);
  const Matrix q = random_unitary(rng, static_cast<int>(r1.dim()));
  const OsrRealization r2 = make_realization(r1.hk, q * r1.w, q * r1.s * q.adjoint());
  const IntertwinerResult t = intertwiner(r1, r2, cs);
  EXPECT_LT(opnorm(t.t - q), 1e-8);
  EXPECT_LT(t.isometry_residual, 1e-8);
  EXPECT_LT(t.intertwining_residual, 1e-8);
  // Composition with the reverse intertwiner is the identity.
  const IntertwinerResult back = intertwiner(r2, r1, cs);
  EXPECT_LT(opnorm(back.t * t.t - Matrix::Identity(r1.dim(), r1.dim())), 1e-8);
}

TEST(Intertwiner, NonStandardGram) {
  // Same form realized in a space with metric G: W2 = G^{-1/2} W1.
  CounterRng rng(16);
  const CompressedSystem cs = compress(random_reflection_system(6, 5));
  const OsrRealization r1 = osr_construct(cs);
  const auto d = r1.dim();
  const Matrix x = rng.cmatrix(d, d);
  const Matrix g = x * x.adjoint() + Matrix::Identity(d, d);
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  const Matrix gih = es.operatorInverseSqrt();
  const Matrix gh = es.operatorSqrt();
  const OsrRealization r2 = make_realization(InnerProductSpace(g), gih * r1.w, gih * r1.s * gh);
  const IntertwinerResult t = intertwiner(r1, r2, cs);
  EXPECT_LT(t.isometry_residual, 1e-9);
  EXPECT_LT(t.intertwining_residual, 1e-9);
  EXPECT_LT(t.map_residual, 1e-9);
}

TEST(Intertwiner, IncompatibleRealizations) {
  const CompressedSystem cs = compress(random_reflection_system(6, 6));
  const OsrRealization r1 = osr_construct(cs);
  const OsrRealization r2 = make_realization(r1.hk, 2.0 * r1.w, r1.s);
  try {
    intertwiner(r1, r2, cs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IncompatibleRealizations);
  }
}

TEST(NormBound, HardyTightAtZero) {
  const ReflectionSystem sys = hardy_system(6);
  const NormBoundReport r = verify_norm_bound(compress(sys), sys.u, 200, 1);
  EXPECT_EQ(r.sp_u2, 0.0);
  EXPECT_EQ(r.violations, 0);
  EXPECT_LE(r.max_violation, 0.0);
}

TEST(NormBound, ScalingDiagonalAttainedOnTopMode) {
  const CompressedSystem cs = scaling_diagonal_system(0.5, 2.0, 8);
  const NormBoundReport r = verify_norm_bound(cs, *cs.u_k, 200, 2);
  EXPECT_NEAR(std::sqrt(r.sp_u2), std::sqrt(0.5), 1e-15);
  EXPECT_EQ(r.violations, 0);
  const OsrRealization real = osr_construct(cs);
  EXPECT_NEAR(opnorm(real.s), std::sqrt(0.5), 1e-15);
}

TEST(NormBound, RandomSystems) {
  int violations = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ReflectionSystem sys = random_reflection_system(2 + 2 * static_cast<int>(seed % 6), seed);
    violations += verify_norm_bound(compress(sys), sys.u, 10, seed).violations;
  }
  EXPECT_EQ(violations, 0);
}

TEST(RandomSystem, SmallestCase) {
  const ReflectionSystem sys = random_reflection_system(2, 99);
  EXPECT_EQ(sys.u.rows(), 2);
  EXPECT_TRUE(validate_system(sys).ok);
}

TEST(RandomSystem, AllSeedsValidate) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int dim = 2 + 2 * static_cast<int>(seed % 6);
    const ValidationReport r = validate_system(random_reflection_system(dim, seed));
    EXPECT_TRUE(r.ok) << "seed " << seed << " r_sym " << r.r_sym << " r_inv " << r.r_inv;
  }
}

TEST(RandomSystem, OddDimensionRejected) { EXPECT_THROW(random_reflection_system(3, 0), Error); }

TEST(Semigroup, ScalingDiagonal) {
  const Matrix s2 = osr_construct(scaling_diagonal_system(0.5, 2.0, 10)).s;
  const Matrix s4 = osr_construct(scaling_diagonal_system(0.5, 4.0, 10)).s;
  const Matrix s16 = osr_construct(scaling_diagonal_system(0.5, 16.0, 10)).s;
  const std::vector<Matrix> list{s2, s4, s16};
  const SemigroupReport r = semigroup_check(list, 1e-14);
  EXPECT_EQ(r.status, CheckStatus::Pass);
  EXPECT_TRUE(r.all_psd);
}

TEST(Semigroup, HardyZero) {
  const Matrix s = osr_construct(compress(hardy_system(4))).s;
  const std::vector<Matrix> list{s, s};
  EXPECT_EQ(semigroup_check(list).status, CheckStatus::Pass);
}

TEST(Semigroup, NotApplicableForSingleOperator) {
  const HankelOsr h = hankel_osr(MomentMeasure::from_atoms({{0.5, 0.5}, {-0.5, 0.5}}), 8);
  const std::vector<Matrix> list{h.realization.s};
  EXPECT_EQ(semigroup_check(list).status, CheckStatus::NotApplicable);
}

TEST(Semigroup, DetectsFailure) {
  const Matrix s2 = osr_construct(scaling_diagonal_system(0.5, 2.0, 4)).s;
  const Matrix s3 = osr_construct(scaling_diagonal_system(0.5, 3.0, 4)).s;
  const std::vector<Matrix> list{s2, s3};
  EXPECT_EQ(semigroup_check(list).status, CheckStatus::Fail);
}
