#pragma once
// Truncated L^2(T) with the up-shift and the reflection f(z) -> f(conj z).

#include <reflpos/graphspace.hpp>
#include <reflpos/osr.hpp>

namespace reflpos {

/// Modes -n..n, stored at index mode + n. U e_n = 0.
struct FourierTruncation {
  int n = 0;
  Matrix u;
  Matrix j;
  Eigen::Index dim() const { return 2 * n + 1; }
  Eigen::Index idx(int mode) const { return mode + n; }

  explicit FourierTruncation(int n_) : n(n_) {
    require(n >= 1, ErrorCode::ParameterOutOfRange, "truncation n >= 1");
    const Eigen::Index d = dim();
    u = Matrix::Zero(d, d);
    j = Matrix::Zero(d, d);
    for (int m = -n; m < n; ++m) u(idx(m + 1), idx(m)) = 1.0;
    for (int m = -n; m <= n; ++m) j(idx(-m), idx(m)) = 1.0;
    require((j * u * j - u.adjoint()).norm() == 0.0, ErrorCode::NotReflectionSymmetric, "J U J != U^*");
  }
};

/// Polynomial symbol with grid sup-norm.
struct BoundedSymbol {
  std::vector<cplx> coeffs;
  double sup_estimate = 0.0;

  explicit BoundedSymbol(std::vector<cplx> c) : coeffs(std::move(c)) {
    require(!coeffs.empty(), ErrorCode::InvalidSymbol, "empty symbol");
    while (coeffs.size() > 1 && coeffs.back() == cplx(0.0)) coeffs.pop_back();
    constexpr int kGrid = 4096;
    for (int i = 0; i < kGrid; ++i) sup_estimate = std::max(sup_estimate, std::abs(eval(std::polar(1.0, 2.0 * M_PI * i / kGrid))));
    require(sup_estimate <= 1.0 + 1e-9, ErrorCode::InvalidSymbol, "sup |b| exceeds 1");
  }
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  cplx eval(cplx z) const {
    cplx acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
  }
};

inline ReflectionSystem hardy_system(int n) {
  FourierTruncation ft(n);
  Matrix k = Matrix::Zero(ft.dim(), n + 1);
  for (int m = 0; m <= n; ++m) k(ft.idx(m), m) = 1.0;
  return ReflectionSystem{InnerProductSpace::standard(ft.dim()), ft.u, ft.j, k, kDefaultTol};
}

inline void check_degree(const BoundedSymbol& b, int n) {
  require(2 * b.degree() <= n, ErrorCode::TruncationOverflow, "symbol degree exceeds n/2");
}

/// Columns: (1 - b(conj z)) k(conj z) + (1 + b(z)) k(z) for k = e_0..e_{n-deg b}.
inline Matrix kb_subspace(const BoundedSymbol& b, int n) {
  check_degree(b, n);
  FourierTruncation ft(n);
  const int d = b.degree();
  Matrix k = Matrix::Zero(ft.dim(), n - d + 1);
  for (int m = 0; m <= n - d; ++m) {
    k(ft.idx(m), m) += 1.0;
    k(ft.idx(-m), m) += 1.0;
    for (int i = 0; i <= d; ++i) {
      k(ft.idx(i + m), m) += b.coeffs[i];
      k(ft.idx(-(i + m)), m) -= b.coeffs[i];
    }
  }
  return k;
}

/// Frames of H+ (e_0, (e_j + e_-j)/sqrt2) and H- ((e_j - e_-j)/sqrt2) in the truncation.
inline ReflectionFrames hardy_frames(int n) {
  FourierTruncation ft(n);
  ReflectionFrames f{Matrix::Zero(ft.dim(), n + 1), Matrix::Zero(ft.dim(), n)};
  const double h = std::sqrt(0.5);
  f.plus(ft.idx(0), 0) = 1.0;
  for (int j = 1; j <= n; ++j) {
    f.plus(ft.idx(j), j) = h;
    f.plus(ft.idx(-j), j) = h;
    f.minus(ft.idx(j), j - 1) = h;
    f.minus(ft.idx(-j), j - 1) = -h;
  }
  return f;
}

/// Lambda(P+ k) = P-(b k) in the frames of hardy_frames.
inline Contraction lambda_b(const BoundedSymbol& b, int n, double tol = kDefaultTol) {
  check_degree(b, n);
  const int d = b.degree();
  const int dom = n - d + 1;
  Contraction c{Matrix::Identity(n + 1, dom), Matrix::Zero(n, dom)};
  const double h = std::sqrt(0.5);
  for (int m = 0; m < dom; ++m) {
    const double alpha = (m == 0) ? 1.0 : h;  // P+ e_m = alpha * frame vector m
    for (int i = 0; i <= d; ++i)
      if (i + m >= 1) c.lambda(i + m - 1, m) += b.coeffs[i] * h / alpha;
  }
  require(c.norm() <= 1.0 + std::max(tol, 1e-9), ErrorCode::NotContractive, "Lambda_b not contractive");
  return c;
}

/// Embeds graph coordinates back into the ambient truncation.
inline Matrix hardy_graph_basis(const Contraction& c, int n) {
  const ReflectionFrames f = hardy_frames(n);
  return f.plus * c.domain_basis + f.minus * c.lambda;
}

/// ||(I - P_K) U P_K||.
inline double shift_invariance_defect(const Matrix& k_basis, const Matrix& u) {
  const Matrix q = orthonormal_range(k_basis);
  const Matrix p = q * q.adjoint();
  return opnorm((Matrix::Identity(p.rows(), p.cols()) - p) * u * p);
}

}  // namespace reflpos
