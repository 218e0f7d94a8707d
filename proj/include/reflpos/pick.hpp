#pragma once
// Pick and Caratheodory matrices and the kernel-pair subspaces of H^2 (+) H^2.

#include <reflpos/linops.hpp>

#include <functional>

namespace reflpos {

enum class PickVariant { Pick, Caratheodory };

inline const char* to_string(PickVariant v) { return v == PickVariant::Pick ? "pick" : "caratheodory"; }

struct InterpolationData {
  std::vector<cplx> z;
  std::vector<cplx> w;
  double min_distance = std::numeric_limits<double>::infinity();

  InterpolationData(std::vector<cplx> z_, std::vector<cplx> w_) : z(std::move(z_)), w(std::move(w_)) {
    require(z.size() == w.size() && !z.empty(), ErrorCode::DimensionMismatch, "z and w must have equal length");
    for (const cplx& zi : z) require(std::abs(zi) < 1.0, ErrorCode::OutsideDisk, "nodes must lie in the open disk");
    for (std::size_t i = 0; i < z.size(); ++i)
      for (std::size_t j = i + 1; j < z.size(); ++j) min_distance = std::min(min_distance, std::abs(z[i] - z[j]));
    require(min_distance >= 1e-12, ErrorCode::DuplicateNodes, "coincident interpolation nodes");
  }
  std::size_t size() const { return z.size(); }
  double max_modulus() const {
    double r = 0.0;
    for (const cplx& zi : z) r = std::max(r, std::abs(zi));
    return r;
  }
};

/// (1 - conj(w_i) w_j) / (1 - conj(z_i) z_j).
inline Matrix pick_matrix(const InterpolationData& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  Matrix p(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      p(i, j) = (1.0 - std::conj(d.w[i]) * d.w[j]) / (1.0 - std::conj(d.z[i]) * d.z[j]);
  return p;
}

/// (conj(w_i) + w_j) / (1 - conj(z_i) z_j).
inline Matrix caratheodory_matrix(const InterpolationData& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  Matrix p(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      p(i, j) = (std::conj(d.w[i]) + d.w[j]) / (1.0 - std::conj(d.z[i]) * d.z[j]);
  return p;
}

inline Matrix interpolation_matrix(const InterpolationData& d, PickVariant v) {
  return v == PickVariant::Pick ? pick_matrix(d) : caratheodory_matrix(d);
}

/// Bound on the entrywise error of the truncated form: C r^{2(n+1)} / (1 - r^2) with C the largest numerator.
inline double truncation_tail_bound(const InterpolationData& d, PickVariant v, int n_trunc) {
  const double r2 = d.max_modulus() * d.max_modulus();
  double c = 0.0;
  for (const cplx& wi : d.w)
    for (const cplx& wj : d.w)
      c = std::max(c, v == PickVariant::Pick ? std::abs(1.0 - std::conj(wi) * wj) : std::abs(std::conj(wi) + wj));
  if (r2 == 0.0) return 0.0;
  return static_cast<double>(d.size()) * c * std::pow(r2, n_trunc + 1) / (1.0 - r2);
}

/// Smallest truncation whose tail bound is below target.
inline int auto_truncation(const InterpolationData& d, PickVariant v, double target = 1e-12) {
  int n = 0;
  while (truncation_tail_bound(d, v, n) > target && n < 100000) ++n;
  return n;
}

/// Reflection on C^{2(n+1)}: diag(I, -I) for Pick, the swap for Caratheodory.
inline Matrix kernel_reflection(PickVariant v, int n_trunc) {
  const int m = n_trunc + 1;
  Matrix j = Matrix::Zero(2 * m, 2 * m);
  if (v == PickVariant::Pick) {
    j.topLeftCorner(m, m).setIdentity();
    j.bottomRightCorner(m, m) = -Matrix::Identity(m, m);
  } else {
    j.topRightCorner(m, m).setIdentity();
    j.bottomLeftCorner(m, m).setIdentity();
  }
  return j;
}

/// Columns (v_i, w_i v_i), v_i = (z_i^n)_{n<=n_trunc}, so that <v_i, v_j> = sum (conj(z_i) z_j)^n.
inline Matrix kernel_subspace(const InterpolationData& d, PickVariant v, int n_trunc, double tol = 1e-12) {
  require(n_trunc >= 0, ErrorCode::ParameterOutOfRange, "n_trunc >= 0");
  require(truncation_tail_bound(d, v, n_trunc) <= tol, ErrorCode::TruncationUnderresolved,
          "truncation tail exceeds tolerance");
  const int m = n_trunc + 1;
  const auto n = static_cast<Eigen::Index>(d.size());
  Matrix k(2 * m, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    cplx p = 1.0;
    for (int t = 0; t < m; ++t) {
      k(t, i) = p;
      k(m + t, i) = d.w[i] * p;
      p *= d.z[i];
    }
  }
  return k;
}

inline Matrix kernel_form(const InterpolationData& d, PickVariant v, int n_trunc, double tol = 1e-12) {
  const Matrix k = kernel_subspace(d, v, n_trunc, tol);
  return hermitian_part(k.adjoint() * kernel_reflection(v, n_trunc) * k);
}

enum class Verdict { Agree, Disagree, Indeterminate };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Agree: return "agree";
    case Verdict::Disagree: return "disagree";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

struct PositivityEquivalence {
  bool matrix_psd = false;
  bool subspace_psd = false;
  bool agree = false;
  Verdict verdict = Verdict::Indeterminate;
  double min_eig_matrix = 0.0;
  double min_eig_form = 0.0;
  double band = 0.0;  // indeterminate band half-width
  int n_trunc = 0;
};

/// n_trunc < 0 selects the truncation automatically.
inline PositivityEquivalence positivity_equivalence(const InterpolationData& d, PickVariant v, int n_trunc = -1,
                                                    double tol = 1e-12) {
  PositivityEquivalence r;
  r.n_trunc = n_trunc < 0 ? auto_truncation(d, v, tol) : n_trunc;
  const Matrix p = interpolation_matrix(d, v);
  const Matrix f = kernel_form(d, v, r.n_trunc, std::max(tol, truncation_tail_bound(d, v, r.n_trunc)));
  Eigen::SelfAdjointEigenSolver<Matrix> ep(p, Eigen::EigenvaluesOnly), ef(f, Eigen::EigenvaluesOnly);
  r.min_eig_matrix = ep.eigenvalues()(0);
  r.min_eig_form = ef.eigenvalues()(0);
  const double scale = std::max(1.0, opnorm(p));
  r.band = truncation_tail_bound(d, v, r.n_trunc) + 1e-10 * scale;
  r.matrix_psd = r.min_eig_matrix >= -r.band;
  r.subspace_psd = r.min_eig_form >= -r.band;
  r.agree = r.matrix_psd == r.subspace_psd;
  if (std::abs(r.min_eig_matrix) <= r.band)
    r.verdict = Verdict::Indeterminate;
  else
    r.verdict = r.agree ? Verdict::Agree : Verdict::Disagree;
  return r;
}

using KernelFn = std::function<cplx(cplx, cplx)>;

inline KernelFn szego_kernel() {
  return [](cplx z1, cplx z2) { return 1.0 / (1.0 - std::conj(z1) * z2); };
}

/// (1 - z1 conj(z2))^{s-1} arranged so that entry (i,j) pairs conj(z_i) with z_j.
inline KernelFn rep_kernel(double s) {
  return [s](cplx z1, cplx z2) { return std::pow(1.0 - std::conj(z1) * z2, s - 1.0); };
}

struct KernelPositivity {
  bool is_pd = false;
  double min_eig = 0.0;
};

inline KernelPositivity general_kernel_positivity(const KernelFn& q, const std::vector<cplx>& pts,
                                                  const std::vector<cplx>& phi, PickVariant v,
                                                  double tol = kDefaultTol) {
  require(pts.size() == phi.size() && !pts.empty(), ErrorCode::DimensionMismatch, "points and values differ in length");
  const auto n = static_cast<Eigen::Index>(pts.size());
  Matrix k(n, n), m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = q(pts[i], pts[j]);
  require(opnorm(k - k.adjoint()) <= tol * std::max(1.0, opnorm(k)), ErrorCode::NotAKernel,
          "kernel sample is not Hermitian");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx f = v == PickVariant::Pick ? 1.0 - std::conj(phi[i]) * phi[j] : std::conj(phi[i]) + phi[j];
      m(i, j) = f * k(i, j);
    }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  KernelPositivity r;
  r.min_eig = es.eigenvalues()(0);
  r.is_pd = r.min_eig > tol * std::max(1.0, opnorm(m));
  return r;
}

}  // namespace reflpos
