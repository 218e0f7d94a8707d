#pragma once
// Gram-aware dense linear algebra.

#include <reflpos/core.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace reflpos {

/// Finite-dimensional space with metric G.
class InnerProductSpace {
 public:
  InnerProductSpace() = default;
  explicit InnerProductSpace(Matrix gram, bool metric_pd = true) : gram_(std::move(gram)), pd_(metric_pd) {
    require(gram_.rows() == gram_.cols(), ErrorCode::DimensionMismatch, "Gram must be square");
    const double nrm = opnorm(gram_);
    require(opnorm(gram_ - gram_.adjoint()) <= 1e-12 * std::max(1.0, nrm), ErrorCode::NotHermitian,
            "Gram not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (gram_ + gram_.adjoint()), Eigen::EigenvaluesOnly);
    if (gram_.rows() > 0) {
      const double lo = es.eigenvalues()(0);
      require(lo >= -1e-10 * nrm, ErrorCode::NotPsd, "Gram not PSD");
      if (pd_) require(lo > 0.0, ErrorCode::SingularMetric, "Gram flagged PD is singular");
    }
  }
  static InnerProductSpace standard(Eigen::Index n) { return InnerProductSpace(Matrix::Identity(n, n)); }

  Eigen::Index dim() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }
  bool metric_pd() const { return pd_; }
  cplx inner(const Vector& x, const Vector& y) const { return x.dot(gram_ * y); }
  double norm(const Vector& x) const { return std::sqrt(std::max(0.0, inner(x, x).real())); }

 private:
  Matrix gram_;
  bool pd_ = true;
};

/// Operator with its ambient space.
struct OperatorOnSpace {
  InnerProductSpace space;
  Matrix matrix;
  OperatorOnSpace(InnerProductSpace sp, Matrix m) : space(std::move(sp)), matrix(std::move(m)) {
    require(matrix.rows() == space.dim() && matrix.cols() == space.dim(), ErrorCode::DimensionMismatch,
            "operator size differs from space dimension");
  }
};

/// A^dagger = G^{-1} A^* G.
inline Matrix adjoint_wrt(const Matrix& a, const Matrix& g) {
  require(g.rows() == g.cols() && a.rows() == g.rows() && a.cols() == g.rows(), ErrorCode::DimensionMismatch,
          "adjoint_wrt: shapes");
  Eigen::LLT<Matrix> llt(g);
  require(llt.info() == Eigen::Success && llt.rcond() > 1e-14, ErrorCode::SingularMetric,
          "metric is singular or not positive definite");
  return llt.solve(a.adjoint() * g);
}

struct Period2Report {
  bool ok = false;
  double r_sq = 0.0;
  double r_unit = 0.0;
};

inline Period2Report is_period2_unitary(const Matrix& j, const Matrix& g, double tol = kDefaultTol) {
  require(j.rows() == j.cols() && g.rows() == j.rows() && g.cols() == j.cols(), ErrorCode::DimensionMismatch,
          "is_period2_unitary: shapes");
  const Matrix id = Matrix::Identity(j.rows(), j.cols());
  Period2Report r;
  r.r_sq = opnorm(j * j - id);
  r.r_unit = opnorm(adjoint_wrt(j, g) * j - id);
  r.ok = r.r_sq <= tol && r.r_unit <= tol;
  return r;
}

struct PsdReport {
  bool is_psd = false;
  double min_eig = 0.0;
};

inline Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

inline void require_hermitian(const Matrix& m, double tol, const char* what) {
  require(m.rows() == m.cols(), ErrorCode::DimensionMismatch, std::string(what) + ": not square");
  require(opnorm(m - m.adjoint()) <= tol * std::max(1.0, opnorm(m)), ErrorCode::NotHermitian,
          std::string(what) + ": not Hermitian");
}

inline PsdReport psd_check(const Matrix& m, double tol = kDefaultTol) {
  require_hermitian(m, kDefaultTol, "psd_check");
  PsdReport r;
  if (m.size() == 0) {
    r.is_psd = true;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  r.min_eig = es.eigenvalues()(0);
  r.is_psd = r.min_eig >= -tol * std::max(1.0, opnorm(m));
  return r;
}

inline double spectral_radius(const Matrix& a) {
  require(a.rows() == a.cols(), ErrorCode::DimensionMismatch, "spectral_radius: not square");
  if (a.size() == 0) return 0.0;
  Eigen::ComplexEigenSolver<Matrix> es(a, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// PSD square root; eigenvalues within tolerance below zero are clamped.
inline Matrix hermitian_sqrt(const Matrix& m, double tol = kDefaultTol) {
  const PsdReport p = psd_check(m, tol);
  require(p.is_psd, ErrorCode::NotPsd, "hermitian_sqrt: matrix not PSD");
  if (m.size() == 0) return m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  const RVector lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * lam.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

struct ShiftEigenvector {
  Vector f;
  double residual = 0.0;  // ||V^dagger f - z f||
  double norm_sq = 0.0;
};

/// f = sum_{n<N} z^n V^n l, an approximate eigenvector of V^dagger.
inline ShiftEigenvector shift_eigenvector(const Matrix& v, const Vector& l, cplx z, int n_terms,
                                          const Matrix* g = nullptr, double tol = kDefaultTol) {
  require(std::abs(z) < 1.0, ErrorCode::OutsideDisk, "shift_eigenvector: |z| >= 1");
  require(v.rows() == v.cols() && l.size() == v.rows(), ErrorCode::DimensionMismatch, "shift_eigenvector: shapes");
  const Matrix gm = g ? *g : Matrix::Identity(v.rows(), v.cols());
  const Matrix vd = adjoint_wrt(v, gm);
  auto nrm = [&](const Vector& x) { return std::sqrt(std::max(0.0, x.dot(gm * x).real())); };
  require(nrm(vd * l) <= tol * std::max(1.0, nrm(l)), ErrorCode::ParameterOutOfRange,
          "shift_eigenvector: l is not in K minus VK");
  ShiftEigenvector out;
  out.f = Vector::Zero(l.size());
  Vector term = l;
  cplx zp = 1.0;
  for (int n = 0; n < n_terms; ++n) {
    out.f += zp * term;
    term = v * term;
    zp *= z;
  }
  out.residual = nrm(vd * out.f - z * out.f);
  out.norm_sq = std::pow(nrm(out.f), 2);
  return out;
}

/// (||P U^dagger^k phi||)_{k=0..kmax}.
inline std::vector<double> purity_decay(const Matrix& u, const Matrix& p, const Vector& phi, int kmax,
                                        const Matrix* g = nullptr) {
  const Matrix gm = g ? *g : Matrix::Identity(u.rows(), u.cols());
  const Matrix ud = adjoint_wrt(u, gm);
  std::vector<double> out;
  Vector x = phi;
  for (int k = 0; k <= kmax; ++k) {
    const Vector px = p * x;
    out.push_back(std::sqrt(std::max(0.0, px.dot(gm * px).real())));
    x = ud * x;
  }
  return out;
}

/// G-orthogonal projection onto span(C).
inline Matrix orthogonal_projection(const Matrix& c, const Matrix& g) {
  const Matrix cgc = c.adjoint() * g * c;
  return c * cgc.ldlt().solve(c.adjoint() * g);
}

/// Orthonormal basis (standard metric) of the column span, rank decided by rel_tol.
inline Matrix orthonormal_range(const Matrix& c, double rel_tol = 1e-12) {
  if (c.cols() == 0) return Matrix(c.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinU);
  const RVector& sv = svd.singularValues();
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > rel_tol * std::max(sv(0), 1e-300)) ++r;
  return svd.matrixU().leftCols(r);
}

/// Largest principal angle sine between two column spans.
inline double subspace_distance(const Matrix& a, const Matrix& b) {
  const Matrix qa = orthonormal_range(a), qb = orthonormal_range(b);
  if (qa.cols() != qb.cols()) return 1.0;
  return opnorm(qa * qa.adjoint() - qb * qb.adjoint());
}

}  // namespace reflpos
