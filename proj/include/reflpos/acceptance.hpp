#pragma once
// The twelve acceptance criteria as self-contained checks.

#include <reflpos/float128.hpp>
#include <reflpos/reflpos.hpp>

#include <functional>
#include <sstream>
#include <string>

namespace reflpos::acceptance {

struct Result {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

inline Result guarded(int id, std::string name, const std::function<bool(std::string&)>& body) {
  Result r{id, std::move(name), false, {}};
  try {
    r.passed = body(r.detail);
  } catch (const std::exception& e) {
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

}  // namespace detail

inline Result scaling_spectrum() {
  return detail::guarded(1, "scaling spectrum", [](std::string& msg) {
    const OsrRealization diag = osr_construct(scaling_diagonal_system(0.5, 2.0, 16));
    Eigen::SelfAdjointEigenSolver<Matrix> ed(diag.s, Eigen::EigenvaluesOnly);
    double err_diag = 0.0;
    for (int n = 0; n <= 16; ++n)
      err_diag = std::max(err_diag, std::abs(ed.eigenvalues()(16 - n) - std::pow(2.0, -0.5 - 2.0 * n)));
    const OsrRealization quad = osr_construct(scaling_osr_quadrature(0.5, 2.0, 64, 0.5, 1e-10).cs);
    Eigen::SelfAdjointEigenSolver<Matrix> eq(quad.s, Eigen::EigenvaluesOnly);
    const auto d = eq.eigenvalues().size();
    if (d < 4) {
      msg = "quadrature realization has rank < 4";
      return false;
    }
    double err_quad = 0.0;
    for (int n = 0; n < 4; ++n)
      err_quad = std::max(err_quad, std::abs(eq.eigenvalues()(d - 1 - n) - std::pow(2.0, -0.5 - 2.0 * n)));
    msg = "diagonal err " + detail::fmt(err_diag) + ", quadrature top-4 err " + detail::fmt(err_quad);
    return err_diag <= 1e-12 && err_quad <= 1e-6;
  });
}

inline Result delta_norm_table() {
  return detail::guarded(2, "delta-norm table", [](std::string& msg) {
    const double s = 0.5;
    const RVector d = delta_norms(s, 5);
    double err = 0.0;
    double closed = 1.0;
    for (int n = 0; n <= 5; ++n) {
      if (n > 0) closed *= n * (n - s);
      err = std::max(err, std::abs(d(n) - closed) / closed);
    }
    const double table[] = {1.0, 0.5, 1.5, 11.25};
    for (int n = 0; n < 4; ++n) err = std::max(err, std::abs(d(n) - table[n]) / table[n]);
    const double cons = delta_norm_consistency(s, 5);
    msg = "closed-form err " + detail::fmt(err) + ", rep-gram consistency " + detail::fmt(cons);
    return err <= 1e-12 && cons <= 1e-12;
  });
}

inline Result hankel_atoms() {
  return detail::guarded(3, "hankel atoms", [](std::string& msg) {
    const HankelOsr a = hankel_osr(MomentMeasure::from_atoms({{0.5, 0.5}, {-0.5, 0.5}}), 8);
    bool ok = a.realization.dim() == 2 && a.realization.nullity == 6 && a.atoms_recovered.size() == 2;
    double err_atoms = 1.0;
    if (ok) err_atoms = std::max(std::abs(a.atoms_recovered[0] + 0.5), std::abs(a.atoms_recovered[1] - 0.5));
    const HankelOsr l = hankel_osr(MomentMeasure::lebesgue(), 6);
    const GaussRule g = gauss_legendre(6);
    double err_leb = 1.0;
    if (l.atoms_recovered.size() == 6) {
      err_leb = 0.0;
      for (int i = 0; i < 6; ++i) err_leb = std::max(err_leb, std::abs(l.atoms_recovered[i] - g.nodes[i]));
    }
    msg = "dim " + std::to_string(a.realization.dim()) + ", nullity " + std::to_string(a.realization.nullity) +
          ", atom err " + detail::fmt(err_atoms) + ", Gauss node err " + detail::fmt(err_leb);
    return ok && err_atoms <= 1e-10 && err_leb <= 1e-8;
  });
}

inline Result hardy_rigidity() {
  return detail::guarded(4, "hardy rigidity", [](std::string& msg) {
    bool ok = true;
    for (int n = 1; n <= 32; ++n) {
      const CompressedSystem cs = compress(hardy_system(n));
      Eigen::SelfAdjointEigenSolver<Matrix> es(cs.m, Eigen::EigenvaluesOnly);
      const auto rank = (es.eigenvalues().array() > kDefaultTol).count();
      const OsrRealization r = osr_construct(cs);
      ok = ok && rank == 1 && r.dim() == 1 && r.s.norm() == 0.0;
    }
    const int n = 8;
    const Matrix u = hardy_system(n).u;
    double min_defect = std::numeric_limits<double>::infinity();
    for (const auto& c : std::vector<std::vector<cplx>>{{0.0}, {0.0, 0.5}, {0.0, 0.0, 0.5}})
      min_defect = std::min(min_defect, shift_invariance_defect(kb_subspace(BoundedSymbol(c), n), u));
    const double one = shift_invariance_defect(kb_subspace(BoundedSymbol({1.0}), n), u);
    msg = "n<=32 rank/dim/S ok: " + std::string(ok ? "yes" : "no") + ", min defect " + detail::fmt(min_defect) +
          ", defect(b=1) " + detail::fmt(one);
    return ok && min_defect > 0.05 && one <= 1e-12;
  });
}

inline Result norm_bound(std::uint64_t seed = 2024) {
  return detail::guarded(5, "norm bound", [seed](std::string& msg) {
    int violations = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < 1000; ++t) {
      const int dim = 2 + 2 * (t % 6);
      const ReflectionSystem sys = random_reflection_system(dim, seed * 1000003ULL + static_cast<std::uint64_t>(t));
      const OsrRealization r = osr_construct(compress(sys));
      const double gap = opnorm(r.s) - std::sqrt(spectral_radius(sys.u * sys.u));
      worst = std::max(worst, gap);
      if (gap > 1e-8) ++violations;
    }
    msg = std::to_string(violations) + " violations in 1000 systems, max ||S|| - sp(U^2)^{1/2} = " +
          detail::fmt(worst);
    return violations == 0;
  });
}

inline Result uniqueness() {
  return detail::guarded(6, "uniqueness intertwiner", [](std::string& msg) {
    const ScalingUniquenessReport r = scaling_uniqueness_check<float128>(0.5, 2.0, 64, 0.5, 1e-20, 60);
    msg = "rank " + std::to_string(r.rank) + ", isometry " + detail::fmt(r.isometry_residual) + ", intertwining " +
          detail::fmt(r.intertwining_residual) + ", form mismatch " + detail::fmt(r.form_mismatch);
    return r.isometry_residual <= 1e-6 && r.intertwining_residual <= 1e-6;
  });
}

inline std::vector<TestFunction> random_bumps(int count, std::uint64_t seed) {
  CounterRng rng(seed, 0x6275);
  std::vector<TestFunction> out;
  for (int i = 0; i < count; ++i) {
    const double radius = rng.uniform(0.2, 0.5);
    const double center = rng.uniform(-0.9 + radius, 0.9 - radius);
    out.push_back(TestFunction::bump(center, radius, {1.0, rng.uniform(-0.9, 0.9), rng.uniform(-0.5, 0.5)}));
  }
  return out;
}

inline Result model_identity(std::uint64_t seed = 7) {
  return detail::guarded(7, "W*W = PJP model identity", [seed](std::string& msg) {
    double worst = 0.0;
    const auto bumps = random_bumps(10, seed);
    for (double s : {0.25, 0.5, 0.75}) {
      const RepKernelSpace sp = rep_gram(s, 160);
      for (const auto& k : bumps) {
        const double lhs = wc_transform(k, sp).norm_sq(sp);
        const double rhs = j_form(k, k, s);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
      }
    }
    msg = "max relative mismatch " + detail::fmt(worst);
    return worst <= 1e-6;
  });
}

inline Result epsilon_slopes() {
  return detail::guarded(8, "epsilon scaling slopes", [](std::string& msg) {
    std::vector<double> eps;
    for (int k = 3; k <= 8; ++k) eps.push_back(std::ldexp(1.0, -k));
    const TestFunction phi = TestFunction::bump(0.0, 1.0, {1.0, 0.9}).normalized();
    bool ok = true;
    std::ostringstream os;
    os.precision(4);
    for (double s : {0.25, 0.5, 0.75}) {
      const EpsilonScaling e = epsilon_scaling_experiment(phi, s, eps);
      ok = ok && std::abs(e.slope_hs - (s - 1.0)) <= 0.05 && std::abs(e.slope_j - 2.0) <= 0.05;
      os << "s=" << s << ": hs " << e.slope_hs << ", j " << e.slope_j << "; ";
    }
    msg = os.str();
    return ok;
  });
}

inline Result pick_equivalence(std::uint64_t seed = 9) {
  return detail::guarded(9, "pick equivalence", [seed](std::string& msg) {
    const PositivityEquivalence feas = positivity_equivalence(InterpolationData({0.0, 0.5}, {0.0, 0.5}), PickVariant::Pick);
    const PositivityEquivalence inf = positivity_equivalence(InterpolationData({0.0, 0.5}, {0.0, 0.9}), PickVariant::Pick);
    const bool worked = feas.matrix_psd && feas.subspace_psd && !inf.matrix_psd && !inf.subspace_psd;
    CounterRng rng(seed, 0x7069);
    int decided = 0, agree = 0, indeterminate = 0;
    for (int t = 0; t < 200; ++t) {
      const int n = rng.uniform_int(1, 6);
      std::vector<cplx> z, w;
      for (int i = 0; i < n; ++i) {
        z.push_back(std::polar(0.9 * std::sqrt(rng.uniform()), 2.0 * M_PI * rng.uniform()));
        w.push_back(std::polar(std::sqrt(rng.uniform()), 2.0 * M_PI * rng.uniform()));
      }
      const PickVariant v = (t % 2) ? PickVariant::Pick : PickVariant::Caratheodory;
      const PositivityEquivalence r = positivity_equivalence(InterpolationData(z, w), v);
      if (r.verdict == Verdict::Indeterminate) {
        ++indeterminate;
        continue;
      }
      ++decided;
      agree += r.verdict == Verdict::Agree;
    }
    msg = "worked instances " + std::string(worked ? "ok" : "wrong") + ", agreement " + std::to_string(agree) + "/" +
          std::to_string(decided) + " (" + std::to_string(indeterminate) + " indeterminate)";
    return worked && agree == decided;
  });
}

inline Result graph_cayley(std::uint64_t seed = 10) {
  return detail::guarded(10, "graph/Cayley suite", [seed](std::string& msg) {
    CounterRng rng(seed, 0x6763);
    double w_contr = 0.0, w_round = 0.0, w_iso = 0.0, w_block = 0.0;
    for (int t = 0; t < 200; ++t) {
      const int n = rng.uniform_int(1, 10);
      const Matrix x = rng.cmatrix(n, n), y = rng.cmatrix(n, n);
      const Matrix gamma = x * x.adjoint() * rng.uniform(0.0, 2.0) + 0.5 * (y - y.adjoint());
      const Contraction c = cayley(gamma);
      w_contr = std::max(w_contr, c.norm() - 1.0);
      const GraphSubspace gs = graph_of(c, 1e-10);
      const Matrix mix = rng.cmatrix(n, n) + 3.0 * Matrix::Identity(n, n);
      const Decomposition d = decompose_positive_subspace(gs.basis * mix, gs.j(), Matrix::Identity(2 * n, 2 * n));
      Matrix want = Matrix::Zero(2 * n, 2 * n);
      want.bottomLeftCorner(n, n) = c.lambda;
      const Matrix got = d.frames.minus * ambient_lambda(d.lam) * d.frames.plus.adjoint();
      w_round = std::max(w_round, opnorm(got - want));
      const Matrix wp = wplus(c, 1e-10);
      for (int k = 0; k < 5; ++k) {
        const Vector kp = rng.cmatrix(n, 1);
        const Vector kv = gs.basis * kp;
        w_iso = std::max(w_iso, std::abs((wp * kp).squaredNorm() - kv.dot(gs.j() * kv).real()) / kp.squaredNorm());
      }
      const int q = rng.uniform_int(1, 5), p = rng.uniform_int(1, 5);
      const Matrix a = rng.cmatrix(q, p);
      const BlockOperator b = block_reflection_operator(a);
      const BlockClassification cl = classify_block_symmetric(b.u, p, 1e-10);
      const double scale = std::max(1.0, opnorm(b.u) * opnorm(b.u));
      w_block = std::max({w_block, b.symmetry_residual, b.block_residual / scale, cl.residual / scale});
    }
    msg = "contractivity excess " + detail::fmt(w_contr) + ", round trip " + detail::fmt(w_round) + ", W+ isometry " +
          detail::fmt(w_iso) + ", block " + detail::fmt(w_block);
    return w_contr <= 1e-10 && w_round <= 1e-10 && w_iso <= 1e-10 && w_block <= 1e-12;
  });
}

inline Result kernel_dichotomy() {
  return detail::guarded(11, "kernel of W_mu", [](std::string& msg) {
    const KernelDiagnostics a = kernel_diagnostics(MomentMeasure::from_atoms({{0.5, 0.5}, {-0.5, 0.5}}), 8);
    const KernelDiagnostics l = kernel_diagnostics(MomentMeasure::lebesgue(), 12);
    msg = "atomic witness ||W h|| " + detail::fmt(a.witness_image_norm) + " with ||h|| " +
          detail::fmt(a.witness_norm) + ", Lebesgue nullity " + std::to_string(l.nullity) + " (min eig ratio " +
          detail::fmt(l.min_eig_ratio) + ")";
    return a.witness.has_value() && a.witness_image_norm <= 1e-12 && a.witness_norm >= 0.1 && l.nullity == 0;
  });
}

inline Result purity_decay_check() {
  return detail::guarded(12, "purity/decay", [](std::string& msg) {
    const double a = 2.0, s = 0.5;
    const OsrRealization r = osr_construct(scaling_diagonal_system(s, a, 16));
    Matrix p = Matrix::Identity(r.dim(), r.dim());
    double worst = 0.0;
    for (int k = 1; k <= 20; ++k) {
      p = p * r.s;
      const double expect = std::pow(a, k * (s - 1.0));
      worst = std::max(worst, std::abs(opnorm(p) - expect) / expect);
    }
    const ReflectionSystem h = hardy_system(8);
    const Matrix pk = orthogonal_projection(h.k_basis, h.h0.gram());
    const std::vector<double> seq = purity_decay(h.u, pk, h.k_basis.col(0), 4);
    msg = "max relative ||S^k|| err " + detail::fmt(worst) + ", hardy decay at k=1 " + detail::fmt(seq[1]);
    return worst <= 1e-12 && seq[1] == 0.0;
  });
}

inline std::vector<Result> run_all() {
  return {scaling_spectrum(), delta_norm_table(), hankel_atoms(),    hardy_rigidity(),
          norm_bound(),       uniqueness(),       model_identity(),  epsilon_slopes(),
          pick_equivalence(), graph_cayley(),     kernel_dichotomy(), purity_decay_check()};
}

}  // namespace reflpos::acceptance
