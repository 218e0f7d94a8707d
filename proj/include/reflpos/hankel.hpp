#pragma once
// Moment measures on [-1,1], Hankel symbols gamma_n = m_n / 2, and the construction with
// S acting as multiplication by x.

#include <reflpos/graphspace.hpp>
#include <reflpos/osr.hpp>
#include <reflpos/quadrature.hpp>

#include <functional>
#include <optional>

namespace reflpos {

/// Either atoms (x_i, p_i) or a density smooth(x) (1-x)^alpha (1+x)^beta with a quadrature order.
struct MomentMeasure {
  struct Density {
    std::string name;
    std::function<double(double)> smooth;
    double alpha = 0.0;
    double beta = 0.0;
    int quad_order = 64;
    double eval(double x) const { return smooth(x) * std::pow(1.0 - x, alpha) * std::pow(1.0 + x, beta); }
  };
  std::vector<std::pair<double, double>> atoms;
  std::optional<Density> density;

  static MomentMeasure from_atoms(std::vector<std::pair<double, double>> at) {
    require(!at.empty(), ErrorCode::InvalidMeasure, "no atoms");
    for (const auto& [x, p] : at)
      require(x >= -1.0 && x <= 1.0 && p > 0.0, ErrorCode::InvalidMeasure, "atoms must lie in [-1,1] with p > 0");
    MomentMeasure m;
    m.atoms = std::move(at);
    return m;
  }
  static MomentMeasure from_density(Density d) {
    require(d.alpha > -1.0 && d.beta > -1.0 && d.quad_order >= 1, ErrorCode::InvalidMeasure, "density parameters");
    MomentMeasure m;
    m.density = std::move(d);
    for (const auto& [x, w] : m.discretize())
      require(w >= 0.0, ErrorCode::InvalidMeasure, "density negative at a quadrature node");
    return m;
  }
  /// scale * dx on [-1,1].
  static MomentMeasure lebesgue(double scale = 1.0, int quad_order = 64) {
    return from_density({"lebesgue", [scale](double) { return scale; }, 0.0, 0.0, quad_order});
  }
  /// scale * (1-x)^alpha (1+x)^beta dx.
  static MomentMeasure jacobi(double alpha, double beta, double scale = 1.0, int quad_order = 64) {
    return from_density({"jacobi", [scale](double) { return scale; }, alpha, beta, quad_order});
  }

  bool is_atomic() const { return !density.has_value(); }

  /// Nodes and weights: exact for atoms, Gauss rule adapted to the Jacobi factor for densities.
  std::vector<std::pair<double, double>> discretize() const {
    if (!density) return atoms;
    const GaussRule r = (density->alpha == 0.0 && density->beta == 0.0)
                            ? gauss_legendre(density->quad_order)
                            : gauss_jacobi(density->quad_order, density->alpha, density->beta);
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < r.size(); ++i) out.emplace_back(r.nodes[i], r.weights[i] * density->smooth(r.nodes[i]));
    return out;
  }
  double total_mass() const {
    double acc = 0.0;
    for (const auto& [x, w] : discretize()) acc += w;
    return acc;
  }
  /// Exactness degree of the discretization (unbounded for atoms).
  int exact_degree() const { return density ? 2 * density->quad_order - 1 : std::numeric_limits<int>::max(); }
};

struct Moments {
  RVector m;
  RVector gamma;
};

inline Moments moments(const MomentMeasure& mu, int n_max) {
  require(n_max >= 0, ErrorCode::ParameterOutOfRange, "n_max >= 0");
  require(n_max <= mu.exact_degree(), ErrorCode::QuadratureUnderresolved, "density quadrature order too low");
  Moments out;
  out.m = RVector::Zero(n_max + 1);
  for (const auto& [x, w] : mu.discretize()) {
    double p = w;
    for (int n = 0; n <= n_max; ++n) {
      out.m(n) += p;
      p *= x;
    }
  }
  out.gamma = 0.5 * out.m;
  return out;
}

struct HankelSymbol {
  Vector gamma;
  int n = 0;  // truncation; needs gamma.size() >= 2n - 1

  static HankelSymbol from_measure(const MomentMeasure& mu, int n) {
    const Moments mo = moments(mu, 2 * n - 1);
    return HankelSymbol{mo.gamma.cast<cplx>(), n};
  }
  /// Truncation chosen as the largest n the symbol supports.
  static HankelSymbol from_sequence(Vector g) {
    const int n = static_cast<int>((g.size() + 1) / 2);
    return HankelSymbol{std::move(g), n};
  }
};

inline Matrix hankel_matrix(const HankelSymbol& g) {
  require(g.n >= 1 && g.gamma.size() >= 2 * g.n - 1, ErrorCode::InsufficientSymbol, "symbol shorter than 2N-1");
  Matrix h(g.n, g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) h(i, j) = g.gamma(i + j);
  return h;
}

/// Truncated unilateral shift on C^n.
inline Matrix unilateral_shift(int n) {
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) a(i + 1, i) = 1.0;
  return a;
}

/// ||(Gamma A - A^* Gamma)|| on the leading (N-1)x(N-1) block.
inline double hankel_shift_residual(const Matrix& gamma) {
  const int n = static_cast<int>(gamma.rows());
  if (n < 2) return 0.0;
  const Matrix a = unilateral_shift(n);
  const Matrix d = gamma * a - a.adjoint() * gamma;
  return d.topLeftCorner(n - 1, n - 1).cwiseAbs().maxCoeff();
}

struct DissipativityReport {
  bool is_dissipative = false;
  double min_eig = 0.0;
};

inline DissipativityReport dissipativity_check(const HankelSymbol& g, double tol = kDefaultTol) {
  HankelSymbol re{g.gamma.real().cast<cplx>(), g.n};
  const PsdReport p = psd_check(hankel_matrix(re), tol);
  return {p.is_psd, p.min_eig};
}

struct HankelOsr {
  CompressedSystem cs;
  OsrRealization realization;
  std::vector<double> atoms_recovered;  // eig(S), ascending
};

/// M = [m_{i+j}], JU-form M' = [m_{i+j+1}], bound 1.
inline HankelOsr hankel_osr(const MomentMeasure& mu, int n, double tol = kDefaultTol) {
  require(n >= 1, ErrorCode::ParameterOutOfRange, "n >= 1");
  const Moments mo = moments(mu, 2 * n);
  HankelOsr out;
  out.cs.m.resize(n, n);
  Matrix ju(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.cs.m(i, j) = mo.m(i + j);
      ju(i, j) = mo.m(i + j + 1);
    }
  // Multiplication by z leaves the truncation, so only the JU-form is supplied.
  out.cs.ju = ju;
  out.cs.norm_bound = 1.0;
  out.cs.tol = tol;
  out.realization = osr_construct(out.cs);
  Eigen::SelfAdjointEigenSolver<Matrix> es(out.realization.s, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.atoms_recovered.push_back(es.eigenvalues()(i));
  return out;
}

struct WmuResult {
  std::vector<cplx> values;  // h at nodes
  double norm = 0.0;         // L^2(mu)
  double moment_norm = 0.0;  // <h, M h>^{1/2}
};

inline cplx eval_poly(const Vector& h, double x) {
  cplx acc = 0.0;
  for (Eigen::Index i = h.size() - 1; i >= 0; --i) acc = acc * x + h(i);
  return acc;
}

inline WmuResult w_mu(const Vector& h, const MomentMeasure& mu) {
  WmuResult r;
  double acc = 0.0;
  for (const auto& [x, w] : mu.discretize()) {
    const cplx v = eval_poly(h, x);
    r.values.push_back(v);
    acc += w * std::norm(v);
  }
  r.norm = std::sqrt(acc);
  const int n = static_cast<int>(h.size());
  if (n > 0 && 2 * n - 2 <= mu.exact_degree()) {
    const Moments mo = moments(mu, 2 * n - 2);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = mo.m(i + j);
    r.moment_norm = std::sqrt(std::max(0.0, h.dot(m * h).real()));
  }
  return r;
}

/// c_n = int x^n phi dmu, phi given at the nodes of mu.discretize().
inline Vector w_mu_adjoint(const std::vector<cplx>& phi, const MomentMeasure& mu, int n_max) {
  const auto nodes = mu.discretize();
  require(phi.size() == nodes.size(), ErrorCode::DimensionMismatch, "phi must be sampled at the measure nodes");
  for (const auto& [x, w] : nodes)
    require(std::abs(x) < 1.0, ErrorCode::BoundaryAtom, "mass at +-1 gives non square-summable coefficients");
  Vector c = Vector::Zero(n_max + 1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    cplx p = nodes[i].second * phi[i];
    for (int n = 0; n <= n_max; ++n) {
      c(n) += p;
      p *= nodes[i].first;
    }
  }
  return c;
}

struct KernelDiagnostics {
  Eigen::Index nullity = 0;
  double min_eig_ratio = 0.0;       // smallest eigenvalue of M over largest
  std::optional<Vector> witness;    // coefficients of a polynomial vanishing on the atoms
  double witness_image_norm = 0.0;  // ||W_mu h||
  double witness_norm = 0.0;        // ||h||_{H^2}
};

/// Nullity threshold is tol * ||M||.
inline KernelDiagnostics kernel_diagnostics(const MomentMeasure& mu, int n, double tol = kDefaultTol) {
  const Moments mo = moments(mu, 2 * n - 2);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = mo.m(i + j);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues()(n - 1);
  KernelDiagnostics k;
  for (Eigen::Index i = 0; i < n; ++i)
    if (es.eigenvalues()(i) <= tol * top) ++k.nullity;
  k.min_eig_ratio = es.eigenvalues()(0) / top;
  if (mu.is_atomic() && static_cast<int>(mu.atoms.size()) < n) {
    // prod (z - x_i) over distinct atoms.
    std::vector<double> roots;
    for (const auto& [x, p] : mu.atoms)
      if (std::none_of(roots.begin(), roots.end(), [&](double r) { return std::abs(r - x) < 1e-15; }))
        roots.push_back(x);
    Vector h = Vector::Zero(n);
    h(0) = 1.0;
    int deg = 0;
    for (double r : roots) {
      for (int i = deg + 1; i >= 1; --i) h(i) = h(i - 1) - r * h(i);
      h(0) = -r * h(0);
      ++deg;
    }
    k.witness = h;
    k.witness_image_norm = w_mu(h, mu).norm;
    k.witness_norm = h.norm();
  }
  return k;
}

struct DomainDiagnostics {
  std::vector<double> tail_norms;
  bool tails_nonincreasing = true;
  std::optional<double> arcsine_integral;  // int (1-x^2)^{-1/2} dmu; empty when infinite
  bool integrable = true;
};

inline DomainDiagnostics domain_diagnostics(const HankelSymbol& g) {
  DomainDiagnostics d;
  const Eigen::Index n = g.gamma.size();
  std::vector<double> sq(n + 1, 0.0);
  for (Eigen::Index k = n - 1; k >= 0; --k) sq[k] = sq[k + 1] + std::norm(g.gamma(k));
  for (Eigen::Index k = 0; k < n; ++k) d.tail_norms.push_back(std::sqrt(sq[k]));
  for (std::size_t k = 1; k < d.tail_norms.size(); ++k)
    if (d.tail_norms[k] > d.tail_norms[k - 1] * (1.0 + 1e-15)) d.tails_nonincreasing = false;
  return d;
}

inline DomainDiagnostics domain_diagnostics(const MomentMeasure& mu, int n) {
  DomainDiagnostics d = domain_diagnostics(HankelSymbol::from_measure(mu, n));
  if (mu.is_atomic()) {
    double acc = 0.0;
    for (const auto& [x, p] : mu.atoms) {
      if (std::abs(x) >= 1.0) {
        d.integrable = false;
        break;
      }
      acc += p / std::sqrt(1.0 - x * x);
    }
    if (d.integrable) d.arcsine_integral = acc;
  } else {
    const auto& den = *mu.density;
    const double a = den.alpha - 0.5, b = den.beta - 0.5;
    if (a <= -1.0 || b <= -1.0) {
      d.integrable = false;
    } else {
      const GaussRule r = gauss_jacobi(den.quad_order, a, b);
      d.arcsine_integral = r.integrate([&](double x) { return den.smooth(x); });
    }
  }
  return d;
}

struct ResolventResult {
  Vector x;
  double residual = 0.0;
  double condition_bound = 0.0;  // ||I + Gamma||, since ||(I+Gamma)^{-1}|| <= 1
};

inline ResolventResult resolvent_solve(const HankelSymbol& g, const Vector& b) {
  require(dissipativity_check(g).is_dissipative, ErrorCode::NotDissipative, "Re Gamma is not PSD");
  const Matrix h = hankel_matrix(g);
  require(b.size() == h.rows(), ErrorCode::DimensionMismatch, "rhs size");
  const Matrix a = Matrix::Identity(h.rows(), h.cols()) + h;
  ResolventResult r;
  r.x = a.partialPivLu().solve(b);
  r.residual = (a * r.x - b).norm();
  r.condition_bound = opnorm(a);
  return r;
}

struct BoundednessDiagnostics {
  double carleson_ratio = 0.0;
  double gamma_decay = 0.0;
  std::vector<std::pair<int, double>> op_norms;
};

/// mu({|t| >= x}).
inline double tail_mass(const MomentMeasure& mu, double x) {
  if (mu.is_atomic()) {
    double acc = 0.0;
    for (const auto& [t, p] : mu.atoms)
      if (std::abs(t) >= x) acc += p;
    return acc;
  }
  const auto& den = *mu.density;
  const int q = std::max(den.quad_order, 32);
  const double h = 0.5 * (1.0 - x);
  // Right piece: t = x + h (1 + u); (1 - t)^alpha = h^alpha (1 - u)^alpha.
  const GaussRule right = gauss_jacobi(q, den.alpha, 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < right.size(); ++i) {
    const double t = x + h * (1.0 + right.nodes[i]);
    acc += right.weights[i] * h * std::pow(h, den.alpha) * den.smooth(t) * std::pow(1.0 + t, den.beta);
  }
  const GaussRule left = gauss_jacobi(q, 0.0, den.beta);
  for (std::size_t i = 0; i < left.size(); ++i) {
    const double t = -x - h * (1.0 - left.nodes[i]);
    acc += left.weights[i] * h * std::pow(h, den.beta) * den.smooth(t) * std::pow(1.0 - t, den.alpha);
  }
  return acc;
}

inline BoundednessDiagnostics boundedness_diagnostics(const MomentMeasure& mu, int n, int grid = 200) {
  BoundednessDiagnostics b;
  for (int i = 1; i < grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    b.carleson_ratio = std::max(b.carleson_ratio, tail_mass(mu, x) / (1.0 - x));
  }
  const HankelSymbol g = HankelSymbol::from_measure(mu, n);
  for (Eigen::Index k = 1; k < g.gamma.size(); ++k) b.gamma_decay = std::max(b.gamma_decay, k * std::abs(g.gamma(k)));
  for (int m = 2; m <= n; m *= 2) {
    HankelSymbol gm{g.gamma.head(2 * m - 1), m};
    b.op_norms.emplace_back(m, opnorm(hankel_matrix(gm)));
  }
  return b;
}

}  // namespace reflpos
