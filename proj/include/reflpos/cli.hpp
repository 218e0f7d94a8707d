#pragma once
// Batch front end: config parsing, command pipelines, JSON/CSV reports.
// Requires nlohmann/json and CLI11 on the include path, and float128 support.

#include <reflpos/acceptance.hpp>
#include <reflpos/reflpos.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace reflpos::cli {

using json = nlohmann::ordered_json;

inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitConfig = 2;

/// Usage or configuration problem (exit 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  json params = json::object();
  std::uint64_t seed = 0;
  std::string output_path;  // empty: stdout
  std::string format;       // empty: command default
};

/// Parameter map that records which keys were read and the effective values.
class Params {
 public:
  explicit Params(json p) : raw_(std::move(p)) {
    if (!raw_.is_object()) throw ConfigError("params must be a JSON object");
  }

  bool has(const std::string& key) const { return raw_.contains(key); }

  template <class T>
  T get(const std::string& key, T fallback) {
    used_.insert(key);
    if (!raw_.contains(key)) {
      effective_[key] = fallback;
      return fallback;
    }
    T v = convert<T>(key, raw_.at(key));
    effective_[key] = raw_.at(key);
    return v;
  }

  template <class T>
  T require(const std::string& key) {
    if (!raw_.contains(key)) throw ConfigError("missing parameter '" + key + "'");
    return get<T>(key, T{});
  }

  const json& raw(const std::string& key) {
    used_.insert(key);
    if (!raw_.contains(key)) throw ConfigError("missing parameter '" + key + "'");
    effective_[key] = raw_.at(key);
    return raw_.at(key);
  }

  void reject_unused() const {
    for (const auto& [k, v] : raw_.items())
      if (!used_.count(k)) throw ConfigError("unknown parameter '" + k + "'");
  }
  const json& effective() const { return effective_; }

 private:
  template <class T>
  static T convert(const std::string& key, const json& v) {
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError("");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number_integer()) throw ConfigError("");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError("");
      }
      return v.get<T>();
    } catch (const std::exception&) {
      throw ConfigError("parameter '" + key + "' has the wrong type: " + v.dump());
    }
  }

  json raw_;
  json effective_ = json::object();
  std::set<std::string> used_;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

struct Report {
  json results = json::object();
  json assertions = json::array();
  Table table;

  void check(const std::string& name, bool passed, json value = nullptr, json threshold = nullptr) {
    assertions.push_back({{"name", name}, {"passed", passed}, {"value", value}, {"threshold", threshold}});
  }
  bool passed() const {
    for (const auto& a : assertions)
      if (!a["passed"].get<bool>()) return false;
    return true;
  }
};

inline json to_json(const RVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}
inline json to_json(const std::vector<double>& v) { return json(v); }

inline std::vector<double> sym_eigenvalues(const Matrix& m, bool descending) {
  std::vector<double> out;
  if (m.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  if (descending) std::reverse(out.begin(), out.end());
  return out;
}

inline cplx parse_complex(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError("expected a number or [re, im], got " + v.dump());
}

inline std::vector<cplx> parse_complex_list(const json& v, const std::string& what) {
  if (!v.is_array()) throw ConfigError(what + " must be an array");
  std::vector<cplx> out;
  for (const auto& e : v) out.push_back(parse_complex(e));
  return out;
}

inline std::vector<double> parse_real_list(const json& v, const std::string& what) {
  if (!v.is_array() || v.empty()) throw ConfigError(what + " must be a nonempty array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(what + " must contain numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
}

/// {"atoms": [[x,p],...]} or {"density": name, "params": {...}, "quad_order": n}.
inline MomentMeasure parse_measure(const json& j) {
  if (!j.is_object()) throw ConfigError("measure must be a JSON object");
  if (j.contains("atoms")) {
    std::vector<std::pair<double, double>> at;
    for (const auto& e : j["atoms"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ConfigError("atoms must be [[x, p], ...]");
      at.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return MomentMeasure::from_atoms(std::move(at));
  }
  if (!j.contains("density") || !j["density"].is_string()) throw ConfigError("measure needs 'atoms' or 'density'");
  const std::string name = j["density"];
  const json p = j.value("params", json::object());
  const int q = j.value("quad_order", 64);
  const double scale = p.value("scale", 1.0);
  if (name == "lebesgue") return MomentMeasure::lebesgue(scale, q);
  if (name == "jacobi") return MomentMeasure::jacobi(p.value("alpha", 0.0), p.value("beta", 0.0), scale, q);
  if (name == "chebyshev") return MomentMeasure::jacobi(-0.5, -0.5, scale, q);
  throw ConfigError("unknown density family '" + name + "' (lebesgue, jacobi, chebyshev)");
}

inline MomentMeasure measure_from(Params& p) {
  if (p.has("measure")) {
    const json& m = p.raw("measure");
    return parse_measure(m.is_string() ? load_json_file(m.get<std::string>()) : m);
  }
  if (p.has("atoms")) return parse_measure(json{{"atoms", p.raw("atoms")}});
  if (p.has("density")) {
    json m{{"density", p.raw("density")}};
    if (p.has("density_params")) m["params"] = p.raw("density_params");
    m["quad_order"] = p.get<int>("quad_order", 64);
    return parse_measure(m);
  }
  throw ConfigError("hankel needs 'measure', 'atoms' or 'density'");
}

inline InterpolationData instance_from(Params& p, PickVariant& variant) {
  json inst = json::object();
  if (p.has("instance")) {
    const json& i = p.raw("instance");
    inst = i.is_string() ? load_json_file(i.get<std::string>()) : i;
  }
  for (const char* k : {"z", "w", "variant"})
    if (p.has(k)) inst[k] = p.raw(k);
  if (!inst.contains("z") || !inst.contains("w")) throw ConfigError("pick needs 'z' and 'w'");
  const std::string v = inst.value("variant", "pick");
  if (v == "pick")
    variant = PickVariant::Pick;
  else if (v == "caratheodory")
    variant = PickVariant::Caratheodory;
  else
    throw ConfigError("variant must be 'pick' or 'caratheodory'");
  return InterpolationData(parse_complex_list(inst["z"], "z"), parse_complex_list(inst["w"], "w"));
}

inline ReflectionSystem system_from(Params& p, const std::string& model, std::uint64_t seed) {
  if (model == "hardy") return hardy_system(p.get<int>("n", 8));
  if (model == "random") return random_reflection_system(p.get<int>("dim", 6), seed);
  throw ConfigError("model '" + model + "' is not a reflection system (hardy, random)");
}

struct Realized {
  CompressedSystem cs;
  OsrRealization r;
  std::optional<ValidationReport> validation;
};

inline Realized realize(Params& p, std::uint64_t seed) {
  const std::string model = p.get<std::string>("model", "scaling");
  Realized out;
  if (model == "hardy" || model == "random") {
    const ReflectionSystem sys = system_from(p, model, seed);
    out.validation = validate_system(sys);
    out.cs = compress(sys);
  } else if (model == "scaling") {
    out.cs = scaling_diagonal_system(p.get<double>("s", 0.5), p.get<double>("a", 2.0), p.get<int>("n", 16));
  } else if (model == "scaling_quadrature") {
    out.cs = scaling_osr_quadrature(p.get<double>("s", 0.5), p.get<double>("a", 2.0), p.get<int>("n_quad", 64),
                                    p.get<double>("radius", 0.5), p.get<double>("null_tol", 1e-10))
                 .cs;
  } else if (model == "hankel") {
    const MomentMeasure mu = measure_from(p);
    out.cs = hankel_osr(mu, p.get<int>("n", 8)).cs;
  } else {
    throw ConfigError("unknown model '" + model + "' (hardy, random, scaling, scaling_quadrature, hankel)");
  }
  out.r = osr_construct(out.cs);
  return out;
}

// ---- commands ----

inline Report cmd_validate(Params& p, std::uint64_t seed) {
  const std::string model = p.get<std::string>("model", "hardy");
  const ValidationReport v = validate_system(system_from(p, model, seed));
  Report rep;
  rep.results = {{"r_sym", v.r_sym}, {"r_inv", v.r_inv}, {"min_eig_pjp", v.min_eig_pjp}, {"ok", v.ok}};
  rep.check("reflection_positive_system", v.ok);
  return rep;
}

inline void describe_realization(Report& rep, const Realized& x) {
  const OsrRealization& r = x.r;
  const auto eig = sym_eigenvalues(r.s, true);
  rep.results["dim_hk"] = r.dim();
  rep.results["nullity"] = r.nullity;
  rep.results["kept_eigenvalues_m"] = to_json(r.kept_eigenvalues);
  rep.results["eigenvalues_s"] = eig;
  rep.results["norm_s"] = opnorm(r.s);
  rep.results["norm_bound"] = r.norm_bound;
  rep.results["residuals"] = {{"symmetrization", r.symmetrization_residual},
                              {"sw", r.sw_residual},
                              {"polar", r.polar_residual}};
  if (x.validation)
    rep.results["validation"] = {{"r_sym", x.validation->r_sym},
                                 {"r_inv", x.validation->r_inv},
                                 {"min_eig_pjp", x.validation->min_eig_pjp},
                                 {"ok", x.validation->ok}};
  rep.check("norm_bound", r.norm_bound_ok, opnorm(r.s), r.norm_bound);
  if (x.validation) rep.check("reflection_positive_system", x.validation->ok);
}

inline Report cmd_construct(Params& p, std::uint64_t seed) {
  Report rep;
  describe_realization(rep, realize(p, seed));
  return rep;
}

inline Report cmd_spectrum(Params& p, std::uint64_t seed) {
  Report rep;
  const Realized x = realize(p, seed);
  describe_realization(rep, x);
  rep.table.columns = {"index", "eigenvalue"};
  const auto eig = sym_eigenvalues(x.r.s, true);
  for (std::size_t i = 0; i < eig.size(); ++i) rep.table.rows.push_back({i, eig[i]});
  // Optional regression check against leading eigenvalues.
  if (p.has("expect")) {
    const std::vector<double> want = parse_real_list(p.raw("expect"), "expect");
    const double tol = p.get<double>("expect_tol", 1e-10);
    if (want.size() > eig.size()) throw ConfigError("expect lists more eigenvalues than the spectrum has");
    double err = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) err = std::max(err, std::abs(eig[i] - want[i]));
    rep.check("expected_eigenvalues", err <= tol, err, tol);
  }
  return rep;
}

inline Report cmd_hardy(Params& p, std::uint64_t) {
  const int n = p.get<int>("n", 16);
  json symbols = p.get<json>("symbols", json::array({json::array({0.0}), json::array({0.0, 0.5}),
                                                     json::array({0.0, 0.0, 0.5}), json::array({1.0})}));
  if (!symbols.is_array() || symbols.empty()) throw ConfigError("symbols must be a nonempty array of coefficient lists");
  Report rep;
  const CompressedSystem cs = compress(hardy_system(n));
  const auto m_eig = sym_eigenvalues(cs.m, false);
  const auto rank = std::count_if(m_eig.begin(), m_eig.end(), [](double e) { return e > kDefaultTol; });
  const OsrRealization r = osr_construct(cs);
  rep.results["n"] = n;
  rep.results["rank_pjp"] = rank;
  rep.results["dim_hk"] = r.dim();
  rep.results["norm_s"] = r.s.norm();
  rep.check("rank_pjp_is_1", rank == 1, rank, 1);
  rep.check("dim_hk_is_1", r.dim() == 1, r.dim(), 1);
  rep.check("s_is_zero", r.s.norm() == 0.0, r.s.norm(), 0.0);
  const Matrix u = hardy_system(n).u;
  const FourierTruncation ft(n);
  json per = json::array();
  for (const auto& c : symbols) {
    const BoundedSymbol b(parse_complex_list(c, "symbol"));
    const Matrix kb = kb_subspace(b, n);
    const double defect = shift_invariance_defect(kb, u);
    const Contraction lam = lambda_b(b, n);
    const Matrix ju = kb.adjoint() * ft.j * kb;
    const auto jeig = sym_eigenvalues(ju, false);
    json coeffs = json::array();
    for (const cplx& z : b.coeffs) coeffs.push_back(json::array({z.real(), z.imag()}));
    per.push_back({{"coefficients", coeffs},
                   {"sup_norm", b.sup_estimate},
                   {"shift_invariance_defect", defect},
                   {"lambda_norm", lam.norm()},
                   {"min_eig_j_form", jeig.empty() ? 0.0 : jeig.front()}});
    rep.check("j_form_psd", jeig.empty() || jeig.front() >= -1e-10 * std::max(1.0, opnorm(ju)),
              jeig.empty() ? 0.0 : jeig.front(), 0.0);
    rep.check("lambda_contractive", lam.norm() <= 1.0 + 1e-9, lam.norm(), 1.0);
    if (b.degree() == 0 && std::abs(b.coeffs[0] - cplx(1.0)) == 0.0)
      rep.check("invariant_for_b_equal_1", defect <= 1e-12, defect, 1e-12);
  }
  rep.results["symbols"] = per;
  return rep;
}

inline std::vector<double> default_eps_grid() {
  std::vector<double> e;
  for (int k = 3; k <= 8; ++k) e.push_back(std::ldexp(1.0, -k));
  return e;
}

inline TestFunction slope_bump() { return TestFunction::bump(0.0, 1.0, {1.0, 0.9}).normalized(); }

inline Report cmd_scaling(Params& p, std::uint64_t) {
  const double s = p.get<double>("s", 0.5);
  const double a = p.get<double>("a", 2.0);
  const int n_max = p.get<int>("n", 16);
  const std::vector<double> eps = parse_real_list(p.get<json>("eps", json(default_eps_grid())), "eps");
  check_s(s);
  Report rep;
  const RVector dn = delta_norms(s, n_max);
  const double consistency = delta_norm_consistency(s, n_max);
  rep.results["delta_norms"] = to_json(dn);
  rep.results["delta_norm_consistency"] = consistency;
  rep.check("delta_norm_consistency", consistency <= 1e-12, consistency, 1e-12);

  const OsrRealization r = osr_construct(scaling_diagonal_system(s, a, n_max));
  const auto eig = sym_eigenvalues(r.s, true);
  double err = 0.0;
  for (int k = 0; k <= n_max; ++k) err = std::max(err, std::abs(eig[k] - std::pow(a, s - 1.0 - 2.0 * k)));
  rep.results["eigenvalues_s"] = eig;
  rep.results["eigenvalue_error"] = err;
  rep.check("diagonal_spectrum", err <= 1e-12, err, 1e-12);

  const EpsilonScaling e = epsilon_scaling_experiment(slope_bump(), s, eps);
  rep.results["epsilon"] = {{"eps", e.eps},         {"hs_norm", e.hs},        {"j_norm", e.j},
                            {"j_defect", e.j_defect}, {"slope_hs", e.slope_hs}, {"slope_j_defect", e.slope_j},
                            {"slope_j_raw", e.slope_j_raw}};
  rep.check("slope_hs", std::abs(e.slope_hs - (s - 1.0)) <= 0.05, e.slope_hs, s - 1.0);
  rep.check("slope_j_defect", std::abs(e.slope_j - 2.0) <= 0.05, e.slope_j, 2.0);
  return rep;
}

inline Report cmd_hankel(Params& p, std::uint64_t) {
  const MomentMeasure mu = measure_from(p);
  const int n = p.get<int>("n", 8);
  const double tol = p.get<double>("tol", kDefaultTol);
  Report rep;
  const HankelOsr h = hankel_osr(mu, n, tol);
  const HankelSymbol g = HankelSymbol::from_measure(mu, n);
  const DissipativityReport dis = dissipativity_check(g);
  const KernelDiagnostics kd = kernel_diagnostics(mu, n, tol);
  const DomainDiagnostics dd = domain_diagnostics(mu, n);
  rep.results["n"] = n;
  rep.results["dim_hk"] = h.realization.dim();
  rep.results["nullity"] = h.realization.nullity;
  rep.results["eigenvalues_s"] = h.atoms_recovered;
  rep.results["total_mass"] = mu.total_mass();
  rep.results["dissipativity_min_eig"] = dis.min_eig;
  rep.results["kernel"] = {{"nullity", kd.nullity},
                           {"min_eig_ratio", kd.min_eig_ratio},
                           {"witness_image_norm", kd.witness_image_norm},
                           {"witness_norm", kd.witness_norm}};
  rep.results["domain"] = {{"tail_norms", dd.tail_norms},
                           {"tails_nonincreasing", dd.tails_nonincreasing},
                           {"integrable", dd.integrable},
                           {"arcsine_integral", dd.arcsine_integral ? json(*dd.arcsine_integral) : json(nullptr)}};
  double spread = 0.0;
  for (double x : h.atoms_recovered) spread = std::max(spread, std::abs(x));
  rep.check("spectrum_in_unit_interval", spread <= 1.0 + 1e-8, spread, 1.0);
  rep.check("hankel_dissipative", dis.is_dissipative, dis.min_eig, 0.0);
  rep.check("dimension_count", h.realization.dim() + h.realization.nullity == n,
            h.realization.dim() + h.realization.nullity, n);
  rep.check("tails_nonincreasing", dd.tails_nonincreasing);
  return rep;
}

inline Report cmd_pick(Params& p, std::uint64_t) {
  PickVariant v = PickVariant::Pick;
  const InterpolationData d = instance_from(p, v);
  const int n_trunc = p.get<int>("n_trunc", -1);
  const double tol = p.get<double>("tol", 1e-12);
  const PositivityEquivalence e = positivity_equivalence(d, v, n_trunc, tol);
  Report rep;
  rep.results = {{"variant", to_string(v)},
                 {"points", d.size()},
                 {"n_trunc", e.n_trunc},
                 {"min_eig_matrix", e.min_eig_matrix},
                 {"min_eig_form", e.min_eig_form},
                 {"band", e.band},
                 {"matrix_psd", e.matrix_psd},
                 {"subspace_psd", e.subspace_psd},
                 {"verdict", to_string(e.verdict)}};
  rep.check("positivity_equivalence", e.verdict != Verdict::Disagree, to_string(e.verdict), "agree|indeterminate");
  return rep;
}

inline Report sweep_eps(Params& p) {
  const std::vector<double> ss = parse_real_list(p.get<json>("s", json::array({0.25, 0.5, 0.75})), "s");
  const std::vector<double> eps = parse_real_list(p.get<json>("eps", json(default_eps_grid())), "eps");
  Report rep;
  rep.table.columns = {"s", "eps", "metric", "value"};
  json slopes = json::array();
  for (double s : ss) {
    const EpsilonScaling e = epsilon_scaling_experiment(slope_bump(), s, eps);
    for (std::size_t i = 0; i < e.eps.size(); ++i) {
      rep.table.rows.push_back({s, e.eps[i], "hs_norm", e.hs[i]});
      rep.table.rows.push_back({s, e.eps[i], "j_norm", e.j[i]});
      rep.table.rows.push_back({s, e.eps[i], "j_defect", e.j_defect[i]});
    }
    slopes.push_back({{"s", s}, {"slope_hs", e.slope_hs}, {"slope_j_defect", e.slope_j}, {"slope_j_raw", e.slope_j_raw}});
    const std::string tag = "(s=" + json(s).dump() + ")";
    rep.check("slope_hs" + tag, std::abs(e.slope_hs - (s - 1.0)) <= 0.05, e.slope_hs, s - 1.0);
    rep.check("slope_j_defect" + tag, std::abs(e.slope_j - 2.0) <= 0.05, e.slope_j, 2.0);
  }
  rep.results["slopes"] = slopes;
  return rep;
}

inline Report sweep_a(Params& p) {
  const double s = p.get<double>("s", 0.5);
  const int n = p.get<int>("n", 4);
  const std::vector<double> as = parse_real_list(p.get<json>("a", json::array({1.5, 2.0, 2.5, 3.0, 4.0})), "a");
  if (as.size() < 2) throw ConfigError("a-sweep needs at least 2 values");
  Report rep;
  rep.table.columns = {"a", "metric", "value"};
  std::vector<double> la, lt;
  for (double a : as) {
    const auto eig = sym_eigenvalues(osr_construct(scaling_diagonal_system(s, a, n)).s, true);
    rep.table.rows.push_back({a, "top_eigenvalue", eig.front()});
    la.push_back(std::log(a));
    lt.push_back(std::log(eig.front()));
  }
  const double slope = fit_slope(la, lt);
  rep.results = {{"s", s}, {"slope", slope}, {"expected", s - 1.0}};
  rep.check("top_eigenvalue_slope", std::abs(slope - (s - 1.0)) <= 1e-10, slope, s - 1.0);
  return rep;
}

inline Report sweep_seed(Params& p, std::uint64_t seed) {
  const int count = p.get<int>("count", 100);
  const int max_dim = p.get<int>("max_dim", 12);
  if (count < 1 || max_dim < 2) throw ConfigError("count >= 1 and max_dim >= 2 required");
  Report rep;
  rep.table.columns = {"seed", "dim", "metric", "value"};
  int passed = 0;
  for (int t = 0; t < count; ++t) {
    const std::uint64_t sd = seed + static_cast<std::uint64_t>(t);
    const int dim = 2 + 2 * (t % (max_dim / 2));
    const ReflectionSystem sys = random_reflection_system(dim, sd);
    const ValidationReport v = validate_system(sys);
    const OsrRealization r = osr_construct(compress(sys));
    const bool ok = v.ok && r.norm_bound_ok;
    passed += ok;
    rep.table.rows.push_back({sd, dim, "valid", v.ok});
    rep.table.rows.push_back({sd, dim, "norm_s", opnorm(r.s)});
    rep.table.rows.push_back({sd, dim, "norm_bound", r.norm_bound});
    rep.table.rows.push_back({sd, dim, "passed", ok});
  }
  const double rate = double(passed) / count;
  rep.results = {{"count", count}, {"passed", passed}, {"pass_rate", rate}};
  rep.check("pass_rate", passed == count, rate, 1.0);
  return rep;
}

inline Report cmd_sweep(Params& p, std::uint64_t seed) {
  const std::string kind = p.get<std::string>("sweep", "eps");
  if (kind == "eps") return sweep_eps(p);
  if (kind == "a") return sweep_a(p);
  if (kind == "seed") return sweep_seed(p, seed);
  throw ConfigError("sweep must be 'eps', 'a' or 'seed'");
}

inline Report cmd_acceptance(Params&, std::uint64_t) {
  Report rep;
  rep.table.columns = {"id", "name", "passed", "detail"};
  json list = json::array();
  for (const auto& r : acceptance::run_all()) {
    list.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    rep.table.rows.push_back({r.id, r.name, r.passed, r.detail});
    rep.check("criterion_" + std::to_string(r.id), r.passed);
  }
  rep.results["criteria"] = list;
  return rep;
}

// ---- output ----

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string csv_cell(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_null()) return "";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

/// Long format (metric, value) for reports without a dedicated table.
inline void flatten(const json& v, const std::string& path, Table& t) {
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) flatten(x, path.empty() ? k : path + "." + k, t);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], path + "[" + std::to_string(i) + "]", t);
  } else {
    t.rows.push_back({path, v});
  }
}

inline std::string render_csv(const Report& rep) {
  Table t = rep.table;
  if (t.columns.empty()) {
    t.columns = {"metric", "value"};
    flatten(rep.results, "", t);
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
  return os.str();
}

inline std::string default_format(const std::string& command) {
  return (command == "spectrum" || command == "sweep") ? "csv" : "json";
}

inline json error_json(const std::string& code, const std::string& message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

struct Outcome {
  int exit_code = kExitPass;
  std::string output;  // rendered report, empty on error
  json error;          // structured error, null on success
};

/// Runs one command and renders its report without touching the filesystem.
inline Outcome execute(const RunConfig& cfg) {
  Outcome out;
  try {
    static const std::map<std::string, Report (*)(Params&, std::uint64_t)> table{
        {"validate", cmd_validate}, {"construct", cmd_construct}, {"spectrum", cmd_spectrum},
        {"hardy", cmd_hardy},       {"scaling", cmd_scaling},     {"hankel", cmd_hankel},
        {"pick", cmd_pick},         {"sweep", cmd_sweep},         {"acceptance", cmd_acceptance}};
    const auto it = table.find(cfg.command);
    if (it == table.end()) throw ConfigError("unknown command '" + cfg.command + "'");
    const std::string fmt = cfg.format.empty() ? default_format(cfg.command) : cfg.format;
    if (fmt != "json" && fmt != "csv") throw ConfigError("format must be 'json' or 'csv'");
    Params params(cfg.params);
    const Report rep = it->second(params, cfg.seed);
    params.reject_unused();
    if (fmt == "csv") {
      out.output = render_csv(rep);
    } else {
      json doc{{"report_version", 1},
               {"command", cfg.command},
               {"inputs", {{"seed", cfg.seed}, {"params", params.effective()}}},
               {"results", rep.results},
               {"assertions", rep.assertions},
               {"passed", rep.passed()}};
      out.output = doc.dump(2) + "\n";
    }
    out.exit_code = rep.passed() ? kExitPass : kExitAssertion;
  } catch (const ConfigError& e) {
    out.exit_code = kExitConfig;
    out.error = error_json("ConfigError", e.what());
  } catch (const Error& e) {
    // Library validation errors stem from the inputs.
    out.exit_code = kExitConfig;
    out.error = error_json(to_string(e.code()), e.what());
  }
  return out;
}

/// execute() plus output to file or stdout and the error document to stderr.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Outcome o = execute(cfg);
  if (!o.error.is_null()) {
    err << o.error.dump() << '\n';
    return o.exit_code;
  }
  if (cfg.output_path.empty()) {
    out << o.output;
  } else {
    std::ofstream f(cfg.output_path, std::ios::binary);
    if (!f) {
      err << error_json("ConfigError", "cannot write '" + cfg.output_path + "'").dump() << '\n';
      return kExitConfig;
    }
    f << o.output;
  }
  return o.exit_code;
}

// ---- argument parsing ----

/// A flag value is JSON when it parses as JSON, a plain string otherwise.
inline json flag_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return text;
  }
}

/// Result of parsing argv: a config, or an exit code with text (help or usage error).
struct ParsedArgs {
  std::optional<RunConfig> config;
  int exit_code = kExitPass;
  std::string message;
};

/// `reflpos <command> [--config FILE] [--seed N] [--output PATH] [--format json|csv] [--<param> VALUE]...`
/// File keys: command, seed, output, format, params. Flags override the file.
inline ParsedArgs parse_args(std::vector<std::string> args) {
  CLI::App app{"Reflection positivity toolkit", "reflpos"};
  std::string command, config_path, output, format;
  std::optional<std::uint64_t> seed;
  app.add_option("command", command, "one of: validate construct spectrum hardy scaling hankel pick sweep acceptance");
  app.add_option("--config,-c", config_path, "JSON config file");
  app.add_option("--seed", seed, "run seed");
  app.add_option("--output,-o", output, "report path (default stdout)");
  app.add_option("--format,-f", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.allow_extras();
  app.positionals_at_end(false);

  // Extra --key value pairs are split off before CLI11 sees them, so values such as -0.5 survive.
  static const std::set<std::string> known{"--config", "-c", "--seed", "--output", "-o", "--format", "-f",
                                           "--help",   "-h"};
  std::vector<std::string> core;
  std::vector<std::pair<std::string, std::string>> extras;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    const std::string head = a.substr(0, a.find('='));
    if (a.rfind("--", 0) == 0 && a.size() > 2 && !known.count(head)) {
      const auto eq = a.find('=');
      if (eq != std::string::npos) {
        extras.emplace_back(a.substr(2, eq - 2), a.substr(eq + 1));
      } else {
        if (i + 1 >= args.size()) return {std::nullopt, kExitConfig, "flag " + a + " needs a value"};
        extras.emplace_back(a.substr(2), args[++i]);
      }
    } else {
      core.push_back(a);
    }
  }
  ParsedArgs out;
  try {
    std::reverse(core.begin(), core.end());
    app.parse(core);
  } catch (const CLI::CallForHelp&) {
    return {std::nullopt, kExitPass, app.help()};
  } catch (const CLI::ParseError& e) {
    return {std::nullopt, kExitConfig, e.what()};
  }
  if (!app.remaining().empty()) return {std::nullopt, kExitConfig, "unexpected argument '" + app.remaining()[0] + "'"};

  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      const json file = load_json_file(config_path);
      if (!file.is_object()) throw ConfigError("config file must hold a JSON object");
      for (const auto& [k, v] : file.items())
        if (k != "command" && k != "seed" && k != "output" && k != "format" && k != "params")
          throw ConfigError("unknown config key '" + k + "'");
      cfg.command = file.value("command", "");
      if (file.contains("seed")) {
        if (!file["seed"].is_number_unsigned()) throw ConfigError("seed must be a nonnegative integer");
        cfg.seed = file["seed"].get<std::uint64_t>();
      }
      cfg.output_path = file.value("output", "");
      cfg.format = file.value("format", "");
      if (file.contains("params")) {
        if (!file["params"].is_object()) throw ConfigError("params must be an object");
        cfg.params = file["params"];
      }
    }
  } catch (const ConfigError& e) {
    return {std::nullopt, kExitConfig, e.what()};
  } catch (const json::exception& e) {
    return {std::nullopt, kExitConfig, e.what()};
  }
  if (!command.empty()) cfg.command = command;
  if (seed) cfg.seed = *seed;
  if (!output.empty()) cfg.output_path = output;
  if (!format.empty()) cfg.format = format;
  for (const auto& [k, v] : extras) cfg.params[k] = flag_value(v);
  if (cfg.command.empty()) return {std::nullopt, kExitConfig, "no command given\n" + app.help()};
  out.config = cfg;
  return out;
}

}  // namespace reflpos::cli
