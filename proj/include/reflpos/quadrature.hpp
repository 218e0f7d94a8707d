#pragma once
// Gauss rules: Legendre by Newton iteration, Jacobi by Golub-Welsch.

#include <reflpos/core.hpp>

#include <cmath>
#include <vector>

namespace reflpos {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }

  /// Affine map of a rule on [-1,1] onto [lo,hi].
  GaussRule mapped(double lo, double hi) const {
    GaussRule r;
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < size(); ++i) {
      r.nodes.push_back(c + h * nodes[i]);
      r.weights.push_back(h * weights[i]);
    }
    return r;
  }
  template <class F>
  auto integrate(F&& f) const {
    decltype(f(0.0)) acc{};
    for (std::size_t i = 0; i < size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

inline GaussRule gauss_legendre(int n) {
  require(n >= 1, ErrorCode::ParameterOutOfRange, "gauss_legendre: n >= 1");
  GaussRule r;
  r.nodes.assign(n, 0.0);
  r.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

/// Gauss-Legendre nodes and weights in an arbitrary real type, Newton-refined from the double rule.
template <class Real>
void gauss_legendre_nodes(int n, std::vector<Real>& nodes, std::vector<Real>& weights) {
  const GaussRule seed = gauss_legendre(n);
  nodes.assign(n, Real(0));
  weights.assign(n, Real(0));
  for (int i = 0; i < n; ++i) {
    Real x = seed.nodes[i], dp = 0;
    for (int it = 0; it < 4; ++it) {
      Real p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Real p2 = (Real(2 * k - 1) * x * p1 - Real(k - 1) * p0) / Real(k);
        p0 = p1;
        p1 = p2;
      }
      dp = Real(n) * (x * p1 - p0) / (x * x - Real(1));
      if (it < 3) x -= p1 / dp;
    }
    nodes[i] = x;
    weights[i] = Real(2) / ((Real(1) - x * x) * dp * dp);
  }
}

/// Rule for weight (1-x)^alpha (1+x)^beta on [-1,1].
inline GaussRule gauss_jacobi(int n, double alpha, double beta) {
  require(n >= 1 && alpha > -1.0 && beta > -1.0, ErrorCode::ParameterOutOfRange, "gauss_jacobi: parameters");
  RVector diag(n), sub(std::max(n - 1, 1));
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double d = 2.0 * k + ab;
    if (k == 0)
      diag(k) = (beta - alpha) / (ab + 2.0);
    else
      diag(k) = (beta * beta - alpha * alpha) / (d * (d + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double d = 2.0 * k + ab;
    if (k == 1) {
      // (1 + alpha + beta) cancels; keeps alpha + beta = -1 finite.
      sub(0) = std::sqrt(4.0 * (1.0 + alpha) * (1.0 + beta) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0)));
      continue;
    }
    const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
    const double den = d * d * (d + 1.0) * (d - 1.0);
    sub(k - 1) = std::sqrt(num / den);
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                              std::lgamma(ab + 2.0));
  GaussRule r;
  if (n == 1) {
    r.nodes = {diag(0)};
    r.weights = {mu0};
    return r;
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> es;
  es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  for (int i = 0; i < n; ++i) {
    r.nodes.push_back(es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    r.weights.push_back(mu0 * v * v);
  }
  return r;
}

/// Rule on [0,1] for the weight u^{s-1}.
inline GaussRule gauss_singular_origin(int n, double s) {
  const GaussRule gj = gauss_jacobi(n, 0.0, s - 1.0);
  GaussRule r;
  const double scale = std::pow(2.0, -s);
  for (std::size_t i = 0; i < gj.size(); ++i) {
    r.nodes.push_back(0.5 * (1.0 + gj.nodes[i]));
    r.weights.push_back(scale * gj.weights[i]);
  }
  return r;
}

}  // namespace reflpos
