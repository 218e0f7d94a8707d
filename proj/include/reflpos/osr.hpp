#pragma once
// Quotient construction U -> (H(K), W, S) for reflection systems.

#include <reflpos/linops.hpp>

#include <optional>
#include <span>

namespace reflpos {

struct ReflectionSystem {
  InnerProductSpace h0;
  Matrix u;
  Matrix j;
  Matrix k_basis;
  double tol = kDefaultTol;
};

struct ValidationReport {
  double r_sym = 0.0;
  double r_inv = 0.0;
  double min_eig_pjp = 0.0;
  bool ok = false;
};

/// Form M and compressed operator in K coordinates. `ju` holds the JU-form
/// <k_i, J U k_j>; when absent it is M * U_K.
struct CompressedSystem {
  Matrix m;
  std::optional<Matrix> u_k;
  std::optional<Matrix> ju;
  std::optional<double> norm_bound;  // sp(U^2)^{1/2} of the ambient operator, if known
  double tol = kDefaultTol;

  Matrix ju_form() const {
    if (ju) return *ju;
    require(u_k.has_value(), ErrorCode::DimensionMismatch, "compressed system carries neither U_K nor JU-form");
    return m * *u_k;
  }
};

struct OsrRealization {
  InnerProductSpace hk;
  Matrix w;  // dim_HK x r
  Matrix s;  // dim_HK x dim_HK
  Eigen::Index nullity = 0;
  RVector kept_eigenvalues;  // positive eigenvalues of M
  double symmetrization_residual = 0.0;
  double sw_residual = 0.0;       // ||S W - W U_K||, 0 when U_K is absent
  double polar_residual = 0.0;    // ||M U_K - U_K^* M||
  double norm_bound = 0.0;        // bound used for ||S||
  bool norm_bound_ok = true;
  Eigen::Index dim() const { return s.rows(); }
};

inline void check_system_shapes(const ReflectionSystem& sys) {
  const auto n = sys.h0.dim();
  require(sys.u.rows() == n && sys.u.cols() == n && sys.j.rows() == n && sys.j.cols() == n &&
              sys.k_basis.rows() == n,
          ErrorCode::DimensionMismatch, "reflection system: inconsistent dimensions");
}

inline ValidationReport validate_system(const ReflectionSystem& sys) {
  check_system_shapes(sys);
  const Matrix& g = sys.h0.gram();
  ValidationReport r;
  const double nu = opnorm(sys.u);
  r.r_sym = opnorm(sys.j * sys.u * sys.j - adjoint_wrt(sys.u, g));
  const Matrix p = orthogonal_projection(sys.k_basis, g);
  const Matrix id = Matrix::Identity(p.rows(), p.cols());
  r.r_inv = opnorm((id - p) * sys.u * p);
  const Matrix m = hermitian_part(sys.k_basis.adjoint() * g * sys.j * sys.k_basis);
  const PsdReport ps = psd_check(m, sys.tol);
  r.min_eig_pjp = ps.min_eig;
  r.ok = r.r_sym <= sys.tol * std::max(1.0, nu) && r.r_inv <= sys.tol * std::max(1.0, nu) && ps.is_psd;
  return r;
}

inline CompressedSystem compress(const ReflectionSystem& sys) {
  check_system_shapes(sys);
  const Matrix& g = sys.h0.gram();
  const Matrix& c = sys.k_basis;
  const Matrix cgc = hermitian_part(c.adjoint() * g * c);
  Eigen::SelfAdjointEigenSolver<Matrix> es(cgc, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(es.eigenvalues().size() - 1);
  require(lo > 0.0 && hi / lo <= 1e8, ErrorCode::IllConditionedBasis, "K basis Gram condition number exceeds 1e8");
  CompressedSystem cs;
  cs.tol = sys.tol;
  cs.m = hermitian_part(c.adjoint() * g * sys.j * c);
  cs.u_k = cgc.ldlt().solve(c.adjoint() * g * sys.u * c);
  cs.norm_bound = std::sqrt(spectral_radius(sys.u * sys.u));
  return cs;
}

/// Scalar-generic part of the construction: eigendecompose M, keep eigenvalues above tol*||M||,
/// W = Lambda^{1/2} Q_+^*, S = Lambda^{-1/2} Q_+^* (JU) Q_+ Lambda^{-1/2} symmetrized.
template <class Mat>
struct OsrCore {
  using Real = typename Eigen::NumTraits<typename Mat::Scalar>::Real;
  using RealVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  Mat w;
  Mat s;
  Mat q;  // kept eigenvectors of M
  RealVec kept;
  Eigen::Index nullity = 0;
  Real symmetrization_residual = 0;
};

template <class Mat>
typename OsrCore<Mat>::Real generic_opnorm(const Mat& a) {
  using Real = typename OsrCore<Mat>::Real;
  if (a.size() == 0) return Real(0);
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

template <class Mat>
OsrCore<Mat> osr_core(const Mat& m, const Mat& ju, typename OsrCore<Mat>::Real tol) {
  using Real = typename OsrCore<Mat>::Real;
  using Scalar = typename Mat::Scalar;
  const Eigen::Index r = m.rows();
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat((m + m.adjoint()) / Real(2)));
  const auto& lam = es.eigenvalues();
  const Real mnorm = r > 0 ? lam.cwiseAbs().maxCoeff() : Real(0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = r - 1; i >= 0; --i)
    if (mnorm > Real(0) && lam(i) > tol * mnorm) keep.push_back(i);
  const auto d = static_cast<Eigen::Index>(keep.size());
  OsrCore<Mat> out;
  out.q.resize(r, d);
  out.kept.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    out.q.col(i) = es.eigenvectors().col(keep[i]);
    out.kept(i) = lam(keep[i]);
  }
  out.nullity = r - d;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sq(d), isq(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    using std::sqrt;
    sq(i) = Scalar(sqrt(out.kept(i)));
    isq(i) = Scalar(Real(1) / sqrt(out.kept(i)));
  }
  out.w = sq.asDiagonal() * out.q.adjoint();
  const Mat s = isq.asDiagonal() * out.q.adjoint() * ju * out.q * isq.asDiagonal();
  out.symmetrization_residual = generic_opnorm<Mat>(s - s.adjoint());
  out.s = (s + s.adjoint()) / Real(2);
  return out;
}

/// Builds H(K) from the positive eigenspace of M.
inline OsrRealization osr_construct(const CompressedSystem& cs) {
  const double tol = cs.tol;
  const Eigen::Index r = cs.m.rows();
  require(cs.m.cols() == r, ErrorCode::DimensionMismatch, "M not square");
  require(opnorm(cs.m - cs.m.adjoint()) <= tol * std::max(1.0, opnorm(cs.m)), ErrorCode::NotReflectionSymmetric,
          "J-form is not Hermitian");
  const Matrix ju = cs.ju_form();
  require(ju.rows() == r && ju.cols() == r, ErrorCode::DimensionMismatch, "JU-form shape");
  const double mnorm = opnorm(cs.m);
  const double unorm = cs.u_k ? opnorm(*cs.u_k) : 1.0;
  const double sym_scale = cs.u_k ? tol * mnorm * std::max(1.0, unorm) : tol * std::max(mnorm, opnorm(ju));
  require(opnorm(ju - ju.adjoint()) <= std::max(sym_scale, 1e-300), ErrorCode::NotReflectionSymmetric,
          "symmetry transfer M U_K = U_K^* M violated");
  if (r > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(cs.m), Eigen::EigenvaluesOnly);
    require(es.eigenvalues()(0) >= -tol * std::max(1.0, mnorm), ErrorCode::NotReflectionPositive,
            "J-form on K is not positive semidefinite");
  }
  const OsrCore<Matrix> core = osr_core<Matrix>(cs.m, ju, tol);
  OsrRealization out;
  out.hk = InnerProductSpace::standard(core.s.rows());
  out.nullity = core.nullity;
  out.kept_eigenvalues = core.kept;
  out.w = core.w;
  out.s = core.s;
  out.symmetrization_residual = core.symmetrization_residual;
  if (cs.u_k) {
    out.sw_residual = opnorm(out.s * out.w - out.w * *cs.u_k);
    out.polar_residual = opnorm(cs.m * *cs.u_k - cs.u_k->adjoint() * cs.m);
  }
  out.norm_bound = cs.norm_bound ? *cs.norm_bound
                                 : (cs.u_k ? std::sqrt(spectral_radius(*cs.u_k * *cs.u_k)) : opnorm(out.s));
  out.norm_bound_ok = opnorm(out.s) <= out.norm_bound + std::max(tol, 1e-8);
  return out;
}

/// Generic realization (hk Gram may be non-standard).
inline OsrRealization make_realization(InnerProductSpace hk, Matrix w, Matrix s) {
  OsrRealization r;
  r.hk = std::move(hk);
  r.w = std::move(w);
  r.s = std::move(s);
  return r;
}

/// Scalar-generic least-squares intertwiner and its residuals.
template <class Mat>
struct IntertwinerCore {
  using Real = typename Eigen::NumTraits<typename Mat::Scalar>::Real;
  Mat t;
  Real isometry_residual = 0;
  Real coisometry_residual = 0;
  Real intertwining_residual = 0;
  Real map_residual = 0;
};

template <class Mat>
IntertwinerCore<Mat> intertwiner_core(const Mat& w1, const Mat& s1, const Mat& g1, const Mat& w2, const Mat& s2,
                                      const Mat& g2) {
  IntertwinerCore<Mat> res;
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(Mat(w1.adjoint()));
  res.t = Mat(cod.solve(Mat(w2.adjoint())).adjoint());
  const Mat td = g1.ldlt().solve(Mat(res.t.adjoint() * g2));
  res.isometry_residual = generic_opnorm<Mat>(td * res.t - Mat::Identity(res.t.cols(), res.t.cols()));
  res.coisometry_residual = generic_opnorm<Mat>(res.t * td - Mat::Identity(res.t.rows(), res.t.rows()));
  res.intertwining_residual = generic_opnorm<Mat>(res.t * s1 - s2 * res.t);
  res.map_residual = generic_opnorm<Mat>(res.t * w1 - w2);
  return res;
}

struct IntertwinerResult {
  Matrix t;
  double isometry_residual = 0.0;     // ||T^dagger T - I||
  double coisometry_residual = 0.0;   // ||T T^dagger - I||, nonzero when dim H2 > dim H1
  double intertwining_residual = 0.0; // ||T S1 - S2 T||
  double map_residual = 0.0;          // ||T W1 - W2||
};

/// Least-squares T with T W1 = W2.
inline IntertwinerResult intertwiner(const OsrRealization& r1, const OsrRealization& r2, const CompressedSystem& cs,
                                     double tol = 1e-6) {
  const Matrix& g1 = r1.hk.gram();
  const Matrix& g2 = r2.hk.gram();
  const Matrix m1 = r1.w.adjoint() * g1 * r1.w, m2 = r2.w.adjoint() * g2 * r2.w;
  const double scale = std::max(1.0, opnorm(cs.m));
  require(opnorm(m1 - m2) <= tol * scale, ErrorCode::IncompatibleRealizations,
          "realizations induce different forms on K");
  const IntertwinerCore<Matrix> c = intertwiner_core<Matrix>(r1.w, r1.s, g1, r2.w, r2.s, g2);
  return IntertwinerResult{c.t, c.isometry_residual, c.coisometry_residual, c.intertwining_residual, c.map_residual};
}

struct NormBoundReport {
  double sp_u2 = 0.0;
  double max_violation = 0.0;  // max of lhs - sp*rhs, scaled by max(1, rhs)
  int violations = 0;
  int trials = 0;
};

inline NormBoundReport verify_norm_bound(const CompressedSystem& cs, const Matrix& u_full, int trials,
                                         std::uint64_t seed, double tol = 1e-8) {
  require(cs.u_k.has_value(), ErrorCode::DimensionMismatch, "verify_norm_bound requires U_K");
  NormBoundReport rep;
  rep.sp_u2 = spectral_radius(u_full * u_full);
  rep.trials = trials;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  CounterRng rng(seed, 0x6e62);
  const Matrix& uk = *cs.u_k;
  for (int t = 0; t < trials; ++t) {
    const Vector k = rng.cmatrix(cs.m.rows(), 1);
    const Vector uk_k = uk * k;
    const double lhs = uk_k.dot(cs.m * uk_k).real();
    const double rhs = k.dot(cs.m * k).real();
    const double v = (lhs - rep.sp_u2 * rhs) / std::max(1.0, rhs);
    rep.max_violation = std::max(rep.max_violation, v);
    if (v > tol) ++rep.violations;
  }
  return rep;
}

/// J = diag(I_m, -I_m), U = J B with B Hermitian positive definite, K spanned
/// by eigenvectors of U for positive eigenvalues, then mixed by a random invertible matrix.
inline ReflectionSystem random_reflection_system(int dim, std::uint64_t seed) {
  require(dim >= 2 && dim % 2 == 0, ErrorCode::ParameterOutOfRange, "dim must be even and >= 2");
  CounterRng rng(seed, 0x7273);
  const int m = dim / 2;
  Matrix j = Matrix::Identity(dim, dim);
  j.bottomRightCorner(m, m) *= -1.0;
  const Matrix x = rng.cmatrix(dim, dim);
  const Matrix b = x * x.adjoint() / double(dim) + 0.1 * Matrix::Identity(dim, dim);
  const Matrix u = j * b;
  // U = J B is B-selfadjoint, so it diagonalizes with real spectrum; solve via B^{1/2} J B^{1/2}.
  const Matrix bh = hermitian_sqrt(b);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(bh * j * bh));
  // eigenvectors of U: v = B^{-1/2} y for eigvecs y of B^{1/2} J B^{1/2}.
  const Matrix vecs = bh.llt().solve(es.eigenvectors());
  std::vector<Eigen::Index> pos;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (es.eigenvalues()(i) > 0.0) pos.push_back(i);
  const int r = 1 + rng.uniform_int(0, static_cast<int>(pos.size()) - 1);
  Matrix k(dim, r);
  for (int i = 0; i < r; ++i) k.col(i) = vecs.col(pos[pos.size() - 1 - i]);
  Matrix mix = rng.cmatrix(r, r) + 2.0 * Matrix::Identity(r, r);
  ReflectionSystem sys{InnerProductSpace::standard(dim), u, j, k * mix, kDefaultTol};
  return sys;
}

enum class CheckStatus { Pass, Fail, NotApplicable };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

struct SemigroupReport {
  CheckStatus status = CheckStatus::NotApplicable;
  std::vector<double> residuals;  // ||S(a^{2^{i+1}}) - S(a^{2^i})^2||
  bool all_psd = true;
};

/// s_list = S(a), S(a^2), S(a^4), ... in common coordinates.
inline SemigroupReport semigroup_check(std::span<const Matrix> s_list, double tol = kDefaultTol) {
  SemigroupReport rep;
  if (s_list.size() < 2) return rep;
  for (std::size_t i = 0; i + 1 < s_list.size(); ++i) {
    const Matrix& a = s_list[i];
    const Matrix& b = s_list[i + 1];
    require(a.rows() == b.rows() && a.cols() == b.cols() && a.rows() == a.cols(), ErrorCode::DimensionMismatch,
            "semigroup_check: shape mismatch");
    rep.residuals.push_back(opnorm(b - a * a));
    if (!psd_check(hermitian_part(b), tol).is_psd) rep.all_psd = false;
  }
  bool ok = rep.all_psd;
  for (double r : rep.residuals) ok = ok && r <= tol;
  rep.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  return rep;
}

}  // namespace reflpos
