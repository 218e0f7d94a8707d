#pragma once
// Rep-kernel space with kernel (1 - z conj(w))^{s-1}, the dilation U(a)f(x) = a^{s+1} f(a^2 x),
// the transform W^C, and the singular form with kernel |x-y|^{s-1}.

#include <reflpos/osr.hpp>
#include <reflpos/quadrature.hpp>

#include <functional>

namespace reflpos {

inline void check_s(double s) {
  require(s > 0.0 && s < 1.0, ErrorCode::ParameterOutOfRange, "s must lie in (0,1)");
}

/// Diagonal Gram g_n = n! / ((1-s)(2-s)...(n-s)), kept in log form as well.
struct RepKernelSpace {
  double s = 0.5;
  int n_max = 32;
  RVector log_gram;
  RVector gram;
  double coeff(int n) const { return std::exp(-log_gram(n)); }  // (1-s)_n / n!
};

inline RepKernelSpace rep_gram(double s, int n_max = 32) {
  check_s(s);
  require(n_max >= 0, ErrorCode::ParameterOutOfRange, "n_max >= 0");
  RepKernelSpace sp;
  sp.s = s;
  sp.n_max = n_max;
  sp.log_gram.resize(n_max + 1);
  sp.log_gram(0) = 0.0;
  for (int n = 1; n <= n_max; ++n) sp.log_gram(n) = sp.log_gram(n - 1) + std::log(n / (n - s));
  sp.gram = sp.log_gram.array().exp();
  return sp;
}

/// log of (1-s)(2-s)...(n-s).
inline double log_rising(double s, int n) {
  double acc = 0.0;
  for (int k = 1; k <= n; ++k) acc += std::log(k - s);
  return acc;
}

inline Matrix scaling_operator(double a, const RepKernelSpace& sp) {
  require(a > 1.0, ErrorCode::ParameterOutOfRange, "a must exceed 1");
  Matrix d = Matrix::Zero(sp.n_max + 1, sp.n_max + 1);
  for (int n = 0; n <= sp.n_max; ++n) d(n, n) = std::pow(a, sp.s - 1.0 - 2.0 * n);
  return d;
}

/// n! (1-s)(2-s)...(n-s).
inline RVector delta_norms(double s, int n_max) {
  check_s(s);
  RVector out(n_max + 1);
  for (int n = 0; n <= n_max; ++n) out(n) = std::exp(std::lgamma(n + 1.0) + log_rising(s, n));
  return out;
}

/// Max relative deviation of log delta_norm_n from log g_n + 2 log (1-s)_n.
inline double delta_norm_consistency(double s, int n_max) {
  const RepKernelSpace sp = rep_gram(s, n_max);
  double worst = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const double lhs = std::lgamma(n + 1.0) + log_rising(s, n);
    const double rhs = sp.log_gram(n) + 2.0 * log_rising(s, n);
    worst = std::max(worst, std::abs(std::expm1(lhs - rhs)));
  }
  return worst;
}

/// Real test function supported on [lo, hi].
struct TestFunction {
  std::function<double(double)> f;
  double lo = -1.0;
  double hi = 1.0;
  int nodes = 200;  // default Gauss-Legendre order over the support

  double operator()(double x) const { return (x <= lo || x >= hi) ? 0.0 : f(x); }
  GaussRule rule(int n = 0) const { return gauss_legendre(n > 0 ? n : nodes).mapped(lo, hi); }
  double integral(int n = 0) const { return rule(n).integrate([&](double x) { return (*this)(x); }); }
  double moment(int k, int n = 0) const {
    return rule(n).integrate([&](double x) { return std::pow(x, k) * (*this)(x); });
  }

  /// P(t) exp(-1/(1-t^2)) with t = (x - center)/radius; P given by coefficients in t.
  static TestFunction bump(double center, double radius, std::vector<double> poly = {1.0}, int nodes = 200) {
    require(radius > 0.0 && center - radius >= -1.0 && center + radius <= 1.0, ErrorCode::ParameterOutOfRange,
            "bump support must lie in [-1,1]");
    TestFunction t;
    t.lo = center - radius;
    t.hi = center + radius;
    t.nodes = nodes;
    t.f = [center, radius, poly](double x) {
      const double u = (x - center) / radius;
      if (std::abs(u) >= 1.0) return 0.0;
      double p = 0.0;
      for (auto it = poly.rbegin(); it != poly.rend(); ++it) p = p * u + *it;
      return p * std::exp(-1.0 / (1.0 - u * u));
    };
    return t;
  }
  static TestFunction constant(double c = 1.0, int nodes = 200) {
    TestFunction t;
    t.f = [c](double) { return c; };
    t.nodes = nodes;
    return t;
  }
  /// Piecewise-linear interpolant of samples (xs increasing, zero outside).
  static TestFunction from_samples(std::vector<double> xs, std::vector<double> ys, int nodes = 400) {
    require(xs.size() == ys.size() && xs.size() >= 2, ErrorCode::DimensionMismatch, "samples: sizes");
    require(xs.front() >= -1.0 && xs.back() <= 1.0, ErrorCode::ParameterOutOfRange, "samples outside [-1,1]");
    TestFunction t;
    t.lo = xs.front();
    t.hi = xs.back();
    t.nodes = nodes;
    t.f = [xs, ys](double x) {
      auto it = std::upper_bound(xs.begin(), xs.end(), x);
      if (it == xs.begin() || it == xs.end()) return 0.0;
      const std::size_t i = static_cast<std::size_t>(it - xs.begin());
      const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
      return (1.0 - w) * ys[i - 1] + w * ys[i];
    };
    return t;
  }

  TestFunction scaled(double factor) const {
    TestFunction t = *this;
    t.f = [g = f, factor](double x) { return factor * g(x); };
    return t;
  }
  TestFunction normalized() const { return scaled(1.0 / integral()); }
  /// f(x/eps)/eps.
  TestFunction dilated(double eps) const {
    TestFunction t = *this;
    t.lo = lo * eps;
    t.hi = hi * eps;
    t.f = [g = f, eps](double x) { return g(x / eps) / eps; };
    return t;
  }
  TestFunction translated(double shift) const {
    require(lo + shift >= -1.0 && hi + shift <= 1.0, ErrorCode::ParameterOutOfRange, "translate leaves [-1,1]");
    TestFunction t = *this;
    t.lo = lo + shift;
    t.hi = hi + shift;
    t.f = [g = f, shift](double x) { return g(x - shift); };
    return t;
  }
  /// (U(a) f)(x) = a^{s+1} f(a^2 x).
  TestFunction dilation_rep(double a, double s) const {
    TestFunction t = *this;
    const double a2 = a * a;
    t.lo = lo / a2;
    t.hi = hi / a2;
    t.f = [g = f, a2, c = std::pow(a, s + 1.0)](double x) { return c * g(a2 * x); };
    return t;
  }
};

struct WcCoefficients {
  RVector c;
  double tail_term = 0.0;  // |c_nmax|^2 g_nmax
  double norm_sq(const RepKernelSpace& sp) const { return (c.array().square() * sp.gram.array()).sum(); }
};

/// c_n = (1-s)_n/n! * int x^n k.
inline WcCoefficients wc_transform(const TestFunction& k, const RepKernelSpace& sp, int quad_nodes = 0) {
  const int nq = quad_nodes > 0 ? quad_nodes : k.nodes;
  require(2 * nq > sp.n_max + 1, ErrorCode::QuadratureUnderresolved, "rule cannot integrate x^n_max");
  const GaussRule r = k.rule(nq);
  WcCoefficients out;
  out.c = RVector::Zero(sp.n_max + 1);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double fx = r.weights[i] * k(r.nodes[i]);
    double p = 1.0;
    for (int n = 0; n <= sp.n_max; ++n) {
      out.c(n) += p * fx;
      p *= r.nodes[i];
    }
  }
  for (int n = 0; n <= sp.n_max; ++n) out.c(n) *= sp.coeff(n);
  out.tail_term = out.c(sp.n_max) * out.c(sp.n_max) * sp.gram(sp.n_max);
  return out;
}

/// int int k1(x) (1 - x y)^{s-1} k2(y) dx dy by tensor Gauss-Legendre.
inline double j_form(const TestFunction& k1, const TestFunction& k2, double s, int quad_nodes = 0) {
  check_s(s);
  const GaussRule r1 = k1.rule(quad_nodes), r2 = k2.rule(quad_nodes);
  require(r1.size() >= 8 && r2.size() >= 8, ErrorCode::QuadratureUnderresolved, "j_form needs >= 8 nodes");
  double acc = 0.0;
  for (std::size_t i = 0; i < r1.size(); ++i) {
    const double fx = r1.weights[i] * k1(r1.nodes[i]);
    if (fx == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < r2.size(); ++j)
      row += r2.weights[j] * k2(r2.nodes[j]) * std::pow(1.0 - r1.nodes[i] * r2.nodes[j], s - 1.0);
    acc += fx * row;
  }
  return acc;
}

/// Same form by its binomial series, summed to n_terms.
inline double j_form_series(const TestFunction& k1, const TestFunction& k2, double s, int n_terms,
                            int quad_nodes = 0) {
  const RepKernelSpace sp = rep_gram(s, n_terms);
  const GaussRule r1 = k1.rule(quad_nodes), r2 = k2.rule(quad_nodes);
  auto moments = [&](const TestFunction& k, const GaussRule& r) {
    RVector m = RVector::Zero(n_terms + 1);
    for (std::size_t i = 0; i < r.size(); ++i) {
      double p = r.weights[i] * k(r.nodes[i]);
      for (int n = 0; n <= n_terms; ++n) {
        m(n) += p;
        p *= r.nodes[i];
      }
    }
    return m;
  };
  const RVector m1 = moments(k1, r1), m2 = moments(k2, r2);
  double acc = 0.0;
  for (int n = 0; n <= n_terms; ++n) acc += sp.coeff(n) * m1(n) * m2(n);
  return acc;
}

/// ||phi - delta||_J^2 = int int phi phi [(1-xy)^{s-1} - 1] + (int phi - 1)^2, evaluated without cancellation.
inline double j_defect_from_delta(const TestFunction& phi, double s, int quad_nodes = 0) {
  check_s(s);
  const GaussRule r = phi.rule(quad_nodes);
  double acc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double fx = r.weights[i] * phi(r.nodes[i]);
    double row = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j)
      row += r.weights[j] * phi(r.nodes[j]) * std::expm1((s - 1.0) * std::log1p(-r.nodes[i] * r.nodes[j]));
    acc += fx * row;
  }
  const double mass = r.integrate([&](double x) { return phi(x); });
  return acc + (mass - 1.0) * (mass - 1.0);
}

/// Difference-variable rule: outer Gauss-Jacobi in |u| with weight |u|^{s-1}, inner Gauss-Legendre
/// for the cross-correlation C(u) = int f1(y+u) f2(y) dy.
struct SingularQuadrature {
  double s = 0.5;
  GaussRule outer;  // on [0,1], weight t^{s-1}
  int inner = 200;

  SingularQuadrature(double s_, int outer_order = 80, int inner_order = 200)
      : s(s_), outer(gauss_singular_origin(outer_order, s_)), inner(inner_order) {
    check_s(s_);
  }
  /// max_k |sum w t^k - 1/(s+k)| for k <= kmax.
  double moment_error(int kmax) const {
    double worst = 0.0;
    for (int k = 0; k <= kmax; ++k) {
      const double q = outer.integrate([&](double t) { return std::pow(t, k); });
      worst = std::max(worst, std::abs(q - 1.0 / (s + k)));
    }
    return worst;
  }
};

inline double cross_correlation(const TestFunction& f1, const TestFunction& f2, double u, int n) {
  const double lo = std::max(f2.lo, f1.lo - u), hi = std::min(f2.hi, f1.hi - u);
  if (hi <= lo) return 0.0;
  const GaussRule r = gauss_legendre(n).mapped(lo, hi);
  return r.integrate([&](double y) { return f1(y + u) * f2(y); });
}

/// int int f1(x) |x-y|^{s-1} f2(y) dx dy.
inline double hs_form(const TestFunction& f1, const TestFunction& f2, double s, const SingularQuadrature& q) {
  check_s(s);
  require(std::abs(q.s - s) < 1e-15, ErrorCode::ParameterOutOfRange, "quadrature built for another s");
  require(q.outer.size() >= 8 && q.inner >= 16, ErrorCode::QuadratureUnderresolved, "singular rule too coarse");
  // x - y = u ranges over [f1.lo - f2.hi, f1.hi - f2.lo].
  const double up = std::max(0.0, f1.hi - f2.lo);
  const double um = std::max(0.0, f2.hi - f1.lo);
  double acc = 0.0;
  if (up > 0.0) {
    const double scale = std::pow(up, s);
    acc += scale * q.outer.integrate([&](double t) { return cross_correlation(f1, f2, up * t, q.inner); });
  }
  if (um > 0.0) {
    const double scale = std::pow(um, s);
    acc += scale * q.outer.integrate([&](double t) { return cross_correlation(f1, f2, -um * t, q.inner); });
  }
  return acc;
}

inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::DegenerateGrid, "slope fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  require(den > 0.0, ErrorCode::DegenerateGrid, "slope fit: constant abscissae");
  return (n * sxy - sx * sy) / den;
}

struct EpsilonScaling {
  std::vector<double> eps;
  std::vector<double> hs;        // hs_form(phi_eps, phi_eps)
  std::vector<double> j;         // j_form(phi_eps, phi_eps)
  std::vector<double> j_defect;  // ||phi_eps - delta||_J^2
  double slope_hs = 0.0;
  double slope_j = 0.0;          // slope of the defect
  double slope_j_raw = 0.0;      // slope of the raw form (tends to 0)
};

/// phi must be normalized with a nonzero first moment for the defect to decay at rate eps^2.
inline EpsilonScaling epsilon_scaling_experiment(const TestFunction& phi, double s, const std::vector<double>& eps_grid,
                                                 const SingularQuadrature* squad = nullptr) {
  check_s(s);
  require(eps_grid.size() >= 4, ErrorCode::DegenerateGrid, "need >= 4 epsilon values");
  for (double e : eps_grid) require(e > 0.0 && e <= 0.25, ErrorCode::DegenerateGrid, "eps outside (0, 1/4]");
  const SingularQuadrature local(s);
  const SingularQuadrature& q = squad ? *squad : local;
  EpsilonScaling out;
  std::vector<double> le, lh, lj, ljr;
  for (double e : eps_grid) {
    const TestFunction pe = phi.dilated(e);
    out.eps.push_back(e);
    out.hs.push_back(hs_form(pe, pe, s, q));
    out.j.push_back(j_form(pe, pe, s));
    out.j_defect.push_back(j_defect_from_delta(pe, s));
    le.push_back(std::log(e));
    lh.push_back(std::log(out.hs.back()));
    lj.push_back(std::log(out.j_defect.back()));
    ljr.push_back(std::log(out.j.back()));
  }
  out.slope_hs = fit_slope(le, lh);
  out.slope_j = fit_slope(le, lj);
  out.slope_j_raw = fit_slope(le, ljr);
  return out;
}

struct MollifierReport {
  std::vector<double> eps;
  std::vector<double> max_deviation;   // max_y |L_eps(y) - 1|
  std::vector<double> max_derivative;  // max_y |L_eps'(y)|
  double deviation_slope = 0.0;
  double derivative_slope = 0.0;
};

/// L_eps(y) = int phi_eps(x) (1 - x y)^{s-1} dx.
inline MollifierReport mollifier_limit_check(const TestFunction& phi, double s, const std::vector<double>& y_grid,
                                             const std::vector<double>& eps_grid) {
  check_s(s);
  MollifierReport rep;
  std::vector<double> le, ld, lv;
  for (double e : eps_grid) {
    const TestFunction pe = phi.dilated(e);
    const GaussRule r = pe.rule();
    double dev = 0.0, der = 0.0;
    for (double y : y_grid) {
      const double val = r.integrate([&](double x) { return pe(x) * std::pow(1.0 - x * y, s - 1.0); });
      const double d =
          r.integrate([&](double x) { return pe(x) * (1.0 - s) * x * std::pow(1.0 - x * y, s - 2.0); });
      dev = std::max(dev, std::abs(val - 1.0));
      der = std::max(der, std::abs(d));
    }
    rep.eps.push_back(e);
    rep.max_deviation.push_back(dev);
    rep.max_derivative.push_back(der);
    le.push_back(std::log(e));
    lv.push_back(std::log(std::max(dev, 1e-300)));
    ld.push_back(std::log(std::max(der, 1e-300)));
  }
  if (eps_grid.size() >= 2) {
    rep.deviation_slope = fit_slope(le, lv);
    rep.derivative_slope = fit_slope(le, ld);
  }
  return rep;
}

/// Compressed system on the normalized derivative basis delta^(n)/||delta^(n)||: M = I, U_K = diag(a^{s-1-2n}).
inline CompressedSystem scaling_diagonal_system(double s, double a, int n_max) {
  const RepKernelSpace sp = rep_gram(s, n_max);
  CompressedSystem cs;
  cs.m = Matrix::Identity(n_max + 1, n_max + 1);
  cs.u_k = scaling_operator(a, sp);
  cs.norm_bound = std::pow(a, s - 1.0);
  return cs;
}

struct ScalingQuadratureSystem {
  CompressedSystem cs;
  GaussRule rule;  // point masses w_i delta_{x_i}
  double s = 0.5;
  double a = 2.0;
};

/// K-basis of weighted point masses at Gauss-Legendre nodes on [-radius, radius].
/// U(a) delta_x = a^{s-1} delta_{x/a^2}, so the JU-form is w_i w_j a^{s-1} (1 - x_i x_j / a^2)^{s-1}.
inline ScalingQuadratureSystem scaling_osr_quadrature(double s, double a, int n_quad, double radius = 0.5,
                                                      double null_tol = 1e-9) {
  check_s(s);
  require(a > 1.0, ErrorCode::ParameterOutOfRange, "a must exceed 1");
  require(n_quad >= 32, ErrorCode::QuadratureUnderresolved, "n_quad must be >= 32");
  require(radius > 0.0 && radius < 1.0, ErrorCode::ParameterOutOfRange, "radius in (0,1)");
  ScalingQuadratureSystem out;
  out.s = s;
  out.a = a;
  out.rule = gauss_legendre(n_quad).mapped(-radius, radius);
  const auto& x = out.rule.nodes;
  const auto& w = out.rule.weights;
  Matrix m(n_quad, n_quad), ju(n_quad, n_quad);
  const double as = std::pow(a, s - 1.0);
  for (int i = 0; i < n_quad; ++i)
    for (int j = 0; j < n_quad; ++j) {
      m(i, j) = w[i] * w[j] * std::pow(1.0 - x[i] * x[j], s - 1.0);
      ju(i, j) = w[i] * w[j] * as * std::pow(1.0 - x[i] * x[j] / (a * a), s - 1.0);
    }
  out.cs.m = m;
  out.cs.ju = ju;
  out.cs.norm_bound = 1.0;  // U(a) is unitary on the ambient space
  out.cs.tol = null_tol;
  return out;
}

/// Realization in the rep space: W = W^C on the point-mass basis, S = diag(a^{s-1-2n}), Gram diag(g_n).
inline OsrRealization scaling_rep_realization(const ScalingQuadratureSystem& q, int n_max) {
  const RepKernelSpace sp = rep_gram(q.s, n_max);
  const auto n = static_cast<Eigen::Index>(q.rule.size());
  Matrix w(n_max + 1, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = 1.0;
    for (int k = 0; k <= n_max; ++k) {
      w(k, i) = q.rule.weights[i] * sp.coeff(k) * p;
      p *= q.rule.nodes[i];
    }
  }
  return make_realization(InnerProductSpace(sp.gram.cast<cplx>().asDiagonal().toDenseMatrix()), w,
                          scaling_operator(q.a, sp));
}

struct FourierNormReport {
  double hs = 0.0;
  double freq = 0.0;           // int_R |xi|^{-s} |f^(xi)|^2 dxi
  double ratio = 0.0;          // hs / freq
  double constant_expected = 0.0;  // Gamma(s) cos(pi s/2) / pi
};

inline double fourier_abs_sq(const TestFunction& f, double xi) {
  const int n = std::max(f.nodes, static_cast<int>(std::abs(xi) * (f.hi - f.lo)) + 64);
  const GaussRule r = f.rule(n);
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double v = r.weights[i] * f(r.nodes[i]);
    re += v * std::cos(xi * r.nodes[i]);
    im -= v * std::sin(xi * r.nodes[i]);
  }
  return re * re + im * im;
}

/// int_R |xi|^{-s} |f^|^2 with Gauss-Jacobi on [0,1] and doubling Gauss-Legendre panels until negligible.
inline double fourier_side_integral(const TestFunction& f, double s) {
  const GaussRule head = gauss_singular_origin(40, 1.0 - s);
  double acc = head.integrate([&](double xi) { return fourier_abs_sq(f, xi); });
  const GaussRule panel = gauss_legendre(64);
  for (double a = 1.0; a < 1e7; a *= 2.0) {
    const GaussRule r = panel.mapped(a, 2.0 * a);
    const double c = r.integrate([&](double xi) { return std::pow(xi, -s) * fourier_abs_sq(f, xi); });
    acc += c;
    if (std::abs(c) < 1e-15 * std::abs(acc) && a > 16.0) break;
  }
  return 2.0 * acc;  // |f^| is even for real f
}

inline FourierNormReport fourier_norm_check(const TestFunction& f, double s, const SingularQuadrature* squad = nullptr) {
  check_s(s);
  const SingularQuadrature local(s);
  const SingularQuadrature& q = squad ? *squad : local;
  FourierNormReport r;
  r.hs = hs_form(f, f, s, q);
  r.freq = fourier_side_integral(f, s);
  r.ratio = r.hs / r.freq;
  r.constant_expected = std::tgamma(s) * std::cos(M_PI * s / 2.0) / M_PI;
  return r;
}

}  // namespace reflpos

namespace reflpos {

struct ScalingUniquenessReport {
  Eigen::Index rank = 0;
  Eigen::Index nullity = 0;
  double form_mismatch = 0.0;       // ||W1^* W1 - W2^* G W2|| / ||M||
  double isometry_residual = 0.0;
  double intertwining_residual = 0.0;
  double map_residual = 0.0;
  std::vector<double> top_eigenvalues;  // of S from the quadrature system, descending
};

/// Quadrature realization vs. rep-space realization of the same point-mass system, evaluated
/// entirely in the scalar type Real. Small eigenvalues of M are needed for an accurate
/// intertwiner, so Real is typically wider than double.
template <class Real>
ScalingUniquenessReport scaling_uniqueness_check(double s_, double a_, int n_quad, double radius_, double null_tol,
                                                 int n_max) {
  using std::exp;
  using std::log;
  using std::pow;
  using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  check_s(s_);
  require(a_ > 1.0, ErrorCode::ParameterOutOfRange, "a must exceed 1");
  require(n_quad >= 32, ErrorCode::QuadratureUnderresolved, "n_quad must be >= 32");
  const Real s = s_, a = a_, radius = radius_;
  std::vector<Real> x, w;
  gauss_legendre_nodes<Real>(n_quad, x, w);
  for (int i = 0; i < n_quad; ++i) {
    x[i] *= radius;
    w[i] *= radius;
  }
  Mat m(n_quad, n_quad), ju(n_quad, n_quad);
  const Real as = pow(a, s - Real(1));
  for (int i = 0; i < n_quad; ++i)
    for (int j = 0; j < n_quad; ++j) {
      m(i, j) = w[i] * w[j] * pow(Real(1) - x[i] * x[j], s - Real(1));
      ju(i, j) = w[i] * w[j] * as * pow(Real(1) - x[i] * x[j] / (a * a), s - Real(1));
    }
  const OsrCore<Mat> core = osr_core<Mat>(m, ju, Real(null_tol));

  std::vector<Real> lg(n_max + 1);
  lg[0] = 0;
  for (int n = 1; n <= n_max; ++n) lg[n] = lg[n - 1] + log(Real(n) / (Real(n) - s));
  Mat g = Mat::Zero(n_max + 1, n_max + 1), s2 = Mat::Zero(n_max + 1, n_max + 1), w2(n_max + 1, n_quad);
  for (int n = 0; n <= n_max; ++n) {
    g(n, n) = exp(lg[n]);
    s2(n, n) = pow(a, s - Real(1) - Real(2 * n));
  }
  for (int i = 0; i < n_quad; ++i) {
    Real p = 1;
    for (int n = 0; n <= n_max; ++n) {
      w2(n, i) = w[i] * exp(-lg[n]) * p;
      p *= x[i];
    }
  }
  const Eigen::Index d = core.s.rows();
  const IntertwinerCore<Mat> ic = intertwiner_core<Mat>(core.w, core.s, Mat::Identity(d, d), w2, s2, g);

  ScalingUniquenessReport rep;
  rep.rank = d;
  rep.nullity = core.nullity;
  const Real mn = generic_opnorm<Mat>(m);
  rep.form_mismatch = static_cast<double>(generic_opnorm<Mat>(Mat(core.w.adjoint() * core.w - w2.adjoint() * g * w2)) / mn);
  rep.isometry_residual = static_cast<double>(ic.isometry_residual);
  rep.intertwining_residual = static_cast<double>(ic.intertwining_residual);
  rep.map_residual = static_cast<double>(ic.map_residual);
  Eigen::SelfAdjointEigenSolver<Mat> es(core.s, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = d - 1; i >= 0; --i) rep.top_eigenvalues.push_back(static_cast<double>(es.eigenvalues()(i)));
  return rep;
}

}  // namespace reflpos
