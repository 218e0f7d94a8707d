#pragma once
// Positive subspaces as graphs of contractions; Cayley transform; block operators U(a).

#include <reflpos/linops.hpp>

namespace reflpos {

/// lambda maps domain coordinates (columns of domain_basis, orthonormal in H+) into H-.
struct Contraction {
  Matrix domain_basis;  // p x d
  Matrix lambda;        // q x d
  double norm() const { return opnorm(lambda); }
};

/// Columns (D c, Lambda c) in H+ (+) H- with J = diag(I_p, -I_q).
struct GraphSubspace {
  Matrix basis;
  Eigen::Index p = 0;
  Eigen::Index q = 0;
  Matrix j() const {
    Matrix out = Matrix::Identity(p + q, p + q);
    out.bottomRightCorner(q, q) *= -1.0;
    return out;
  }
  Matrix compressed_form() const { return hermitian_part(basis.adjoint() * j() * basis); }
};

/// G-orthonormal eigenframes of J for +1 and -1.
struct ReflectionFrames {
  Matrix plus;
  Matrix minus;
};

inline ReflectionFrames reflection_frames(const Matrix& j, const Matrix& g) {
  Eigen::LLT<Matrix> llt(g);
  require(llt.info() == Eigen::Success, ErrorCode::SingularMetric, "metric not positive definite");
  const Matrix l = llt.matrixL();
  // L^* J L^{-*} is Hermitian and unitary when J is a G-unitary involution.
  const Matrix lt = l.adjoint();
  const Matrix jt = lt * j * lt.triangularView<Eigen::Upper>().solve(Matrix::Identity(j.rows(), j.cols()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(jt));
  std::vector<Eigen::Index> pi, mi;
  for (Eigen::Index i = 0; i < j.rows(); ++i) (es.eigenvalues()(i) > 0.0 ? pi : mi).push_back(i);
  ReflectionFrames f{Matrix(j.rows(), pi.size()), Matrix(j.rows(), mi.size())};
  const Matrix e = lt.triangularView<Eigen::Upper>().solve(es.eigenvectors());
  for (std::size_t i = 0; i < pi.size(); ++i) f.plus.col(i) = e.col(pi[i]);
  for (std::size_t i = 0; i < mi.size(); ++i) f.minus.col(i) = e.col(mi[i]);
  return f;
}

struct Decomposition {
  ReflectionFrames frames;
  Contraction lam;
  Matrix k_plus;  // P+ K in frame coordinates
};

inline Decomposition decompose_positive_subspace(const Matrix& k_basis, const Matrix& j, const Matrix& g,
                                                 double tol = kDefaultTol) {
  require(j.rows() == g.rows() && k_basis.rows() == j.rows(), ErrorCode::DimensionMismatch, "decompose: shapes");
  const Matrix form = hermitian_part(k_basis.adjoint() * g * j * k_basis);
  require(psd_check(form, tol).is_psd, ErrorCode::NotPositive, "subspace is not J-positive");
  Decomposition d;
  d.frames = reflection_frames(j, g);
  const Matrix xp = d.frames.plus.adjoint() * g * k_basis;   // coordinates of P+ k
  const Matrix xm = d.frames.minus.adjoint() * g * k_basis;  // coordinates of P- k
  Eigen::JacobiSVD<Matrix> svd_k(k_basis, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::JacobiSVD<Matrix> svd(xp, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  const double scale = std::max(opnorm(k_basis), 1e-300);
  Eigen::Index rank_p = 0;
  while (rank_p < sv.size() && sv(rank_p) > 1e-8 * scale) ++rank_p;
  Eigen::Index rank_k = 0;
  const RVector& svk = svd_k.singularValues();
  while (rank_k < svk.size() && svk(rank_k) > 1e-12 * scale) ++rank_k;
  require(rank_p == rank_k, ErrorCode::DegenerateProjection, "P+ restricted to K is rank deficient");
  d.k_plus = xp;
  d.lam.domain_basis = svd.matrixU().leftCols(rank_p);
  // Lambda (xp c) = xm c; on the domain basis U_r: Lambda U_r = xm V_r S_r^{-1}.
  const RVector inv = sv.head(rank_p).cwiseInverse();
  d.lam.lambda = xm * svd.matrixV().leftCols(rank_p) * inv.cast<cplx>().asDiagonal();
  require(d.lam.norm() <= 1.0 + 1e-8, ErrorCode::NotPositive, "recovered Lambda is not contractive");
  return d;
}

inline GraphSubspace graph_of(const Contraction& lam, double tol = kDefaultTol) {
  require(lam.norm() <= 1.0 + tol, ErrorCode::NotContractive, "graph_of: ||Lambda|| > 1");
  require(lam.domain_basis.cols() == lam.lambda.cols(), ErrorCode::DimensionMismatch, "graph_of: shapes");
  GraphSubspace gs;
  gs.p = lam.domain_basis.rows();
  gs.q = lam.lambda.rows();
  gs.basis.resize(gs.p + gs.q, lam.lambda.cols());
  gs.basis.topRows(gs.p) = lam.domain_basis;
  gs.basis.bottomRows(gs.q) = lam.lambda;
  return gs;
}

/// Contraction on all of C^p.
inline Contraction full_domain(const Matrix& lam) {
  return Contraction{Matrix::Identity(lam.cols(), lam.cols()), lam};
}

/// Operator H+ -> H- in ambient frame coordinates, zero off the domain.
inline Matrix ambient_lambda(const Contraction& c) { return c.lambda * c.domain_basis.adjoint(); }

/// (I - Lambda^* Lambda)^{1/2} on domain coordinates.
inline Matrix wplus(const Contraction& lam, double tol = kDefaultTol) {
  require(lam.norm() <= 1.0 + tol, ErrorCode::NotContractive, "wplus: ||Lambda|| > 1");
  const Eigen::Index d = lam.lambda.cols();
  return hermitian_sqrt(Matrix::Identity(d, d) - lam.lambda.adjoint() * lam.lambda, tol);
}

/// (I - Gamma)(I + Gamma)^{-1}.
inline Contraction cayley(const Matrix& gamma, double tol = kDefaultTol) {
  require(gamma.rows() == gamma.cols(), ErrorCode::DimensionMismatch, "cayley: not square");
  const Eigen::Index n = gamma.rows();
  const Matrix re = hermitian_part(gamma);
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(re, Eigen::EigenvaluesOnly);
    require(es.eigenvalues()(0) >= -tol * std::max(1.0, opnorm(gamma)), ErrorCode::NotDissipative,
            "Gamma + Gamma^* is not positive semidefinite");
  }
  const Matrix id = Matrix::Identity(n, n);
  // (I-G)(I+G)^{-1} = ((I+G)^{-T}(I-G)^T)^T; solve from the right.
  const Matrix lam = (id + gamma).transpose().partialPivLu().solve((id - gamma).transpose()).transpose();
  return full_domain(lam);
}

struct BlockOperator {
  Matrix u;
  Matrix j;
  double symmetry_residual = 0.0;   // ||J U J - U^*||
  double block_residual = 0.0;      // off-diagonal blocks of U^* U
};

/// U(a) = [[a^* a, a^*], [-a, a a^*]] for a : H+ -> H-.
inline BlockOperator block_reflection_operator(const Matrix& a) {
  const Eigen::Index q = a.rows(), p = a.cols();
  BlockOperator b;
  b.u.resize(p + q, p + q);
  b.u.topLeftCorner(p, p) = a.adjoint() * a;
  b.u.topRightCorner(p, q) = a.adjoint();
  b.u.bottomLeftCorner(q, p) = -a;
  b.u.bottomRightCorner(q, q) = a * a.adjoint();
  b.j = Matrix::Identity(p + q, p + q);
  b.j.bottomRightCorner(q, q) *= -1.0;
  b.symmetry_residual = opnorm(b.j * b.u * b.j - b.u.adjoint());
  const Matrix utu = b.u.adjoint() * b.u;
  b.block_residual = std::max(opnorm(utu.topRightCorner(p, q)), opnorm(utu.bottomLeftCorner(q, p)));
  return b;
}

struct BlockClassification {
  Matrix a;
  Matrix s1;
  Matrix s2;
  double residual = 0.0;  // ||a s1 - s2 a||
};

inline BlockClassification classify_block_symmetric(const Matrix& u, Eigen::Index p, double tol = 1e-10) {
  const Eigen::Index n = u.rows();
  require(u.cols() == n && p >= 0 && p <= n, ErrorCode::DimensionMismatch, "classify: shapes");
  const Eigen::Index q = n - p;
  Matrix j = Matrix::Identity(n, n);
  j.bottomRightCorner(q, q) *= -1.0;
  const double scale = std::max(1.0, opnorm(u));
  require(opnorm(j * u * j - u.adjoint()) <= tol * scale, ErrorCode::NotClassifiable, "J U J != U^*");
  const Matrix utu = u.adjoint() * u;
  require(opnorm(utu.topRightCorner(p, q)) <= tol * scale * scale, ErrorCode::NotClassifiable,
          "U^* U is not block diagonal");
  BlockClassification c;
  c.s1 = u.topLeftCorner(p, p);
  c.s2 = u.bottomRightCorner(q, q);
  c.a = -u.bottomLeftCorner(q, p);
  require(opnorm(c.s1 - c.s1.adjoint()) <= tol * scale && opnorm(c.s2 - c.s2.adjoint()) <= tol * scale,
          ErrorCode::NotClassifiable, "diagonal blocks not Hermitian");
  c.residual = opnorm(c.a * c.s1 - c.s2 * c.a);
  require(c.residual <= tol * scale * scale, ErrorCode::NotClassifiable, "a s1 != s2 a");
  return c;
}

}  // namespace reflpos
