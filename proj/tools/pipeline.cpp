#include "pipeline.hpp"

#include <boost/crc.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "c60/errors.hpp"

namespace c60::cli {

namespace fs = std::filesystem;

namespace {

const char* kVersion = C60_VERSION;

std::string hex8(std::uint32_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(8) << std::setfill('0') << v;
  return os.str();
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::string term_id(const json& value) { return value.is_string() ? value.get<std::string>() : value.dump(); }

}  // namespace

void RunConfig::validate() const {
  params.validate();
  if (!(min_grad > 0 && eig_cluster_gap > 0 && newton_tol > 0 && ode_tol > 0 && amplitude > 0))
    throw DomainViolation("tolerances and amplitude must be positive");
  if (jobs < 1) throw DomainViolation("jobs must be at least 1");
}

json RunConfig::to_json() const {
  return {{"forcefield",
           {{"E0", params.E0},
            {"beta", params.beta},
            {"r0", params.r0},
            {"k_theta", params.k_theta},
            {"k_phi", params.k_phi},
            {"vdw_enabled", params.vdw_enabled},
            {"vdw_epsilon", params.vdw_epsilon},
            {"vdw_sigma", params.vdw_sigma},
            {"torsion_normals", params.normals == TorsionNormals::Unit ? "unit" : "raw"}}},
          {"tolerances",
           {{"min_grad", min_grad}, {"eig_cluster_gap", eig_cluster_gap}, {"newton_tol", newton_tol}, {"ode_tol", ode_tol}}},
          {"amplitude", amplitude}};
}

std::string RunConfig::hash() const {
  const std::string s = to_json().dump();
  boost::crc_32_type crc;
  crc.process_bytes(s.data(), s.size());
  return hex8(crc.checksum());
}

ContinuationOptions RunConfig::continuation() const {
  ContinuationOptions opt;
  opt.params = params;
  opt.flow.rtol = opt.flow.atol = ode_tol;
  opt.newton_tol = newton_tol;
  opt.jobs = jobs;
  return opt;
}

SpectrumOptions RunConfig::spectrum_options() const {
  SpectrumOptions opt;
  opt.cluster_gap = eig_cluster_gap;
  opt.jobs = jobs;
  return opt;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "forcefield") {
      std::string text;
      for (const auto& [k, v] : value.items()) text += k + " = " + term_id(v) + "\n";
      c.params = ForceFieldParams::parse(text);
    } else if (key == "tolerances") {
      for (const auto& [k, v] : value.items()) {
        if (k == "min_grad") c.min_grad = v.get<double>();
        else if (k == "eig_cluster_gap") c.eig_cluster_gap = v.get<double>();
        else if (k == "newton_tol") c.newton_tol = v.get<double>();
        else if (k == "ode_tol") c.ode_tol = v.get<double>();
        else throw ParseError("unknown tolerance: " + k);
      }
    } else if (key == "amplitude") {
      c.amplitude = value.get<double>();
    } else if (key == "data_dir") {
      c.data_dir = value.get<std::string>();
    } else if (key == "out") {
      c.out = value.get<std::string>();
    } else if (key == "jobs") {
      c.jobs = value.get<int>();
    } else {
      throw ParseError("unknown config key: " + key);
    }
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path);
  try {
    return from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ParseError("config " + path + ": " + e.what());
  }
}

std::string version() { return kVersion; }

json meta(const RunConfig& cfg, const std::string& schema) {
  return {{"version", version()}, {"config_hash", cfg.hash()}, {"schema", schema + "/1"}};
}

std::string csv_header_comment(const RunConfig& cfg, const std::string& schema) {
  return "# c60 " + version() + " config " + cfg.hash() + " schema " + schema + "/1\n";
}

void write_text(const RunConfig& cfg, const std::string& name, const std::string& text) {
  fs::create_directories(cfg.out);
  std::ofstream out(fs::path(cfg.out) / name);
  if (!out) throw StructuralError("cannot write " + name);
  out << text;
}

void write_json(const RunConfig& cfg, const std::string& name, const json& j) { write_text(cfg, name, j.dump(2) + "\n"); }

json read_json(const RunConfig& cfg, const std::string& name, const std::string& stage) {
  std::ifstream in(fs::path(cfg.out) / name);
  if (!in) throw MissingStage(name + " not found in " + cfg.out + "; run `" + stage + "` first");
  return json::parse(in);
}

json checks_json(const std::vector<Check>& checks) {
  json out = json::array();
  for (const auto& c : checks)
    out.push_back({{"name", c.name},
                   {"kind", c.numerical ? "numerical" : "structural"},
                   {"asserted", c.asserted},
                   {"pass", c.pass},
                   {"detail", c.detail}});
  return out;
}

int exit_code(const std::vector<Check>& checks) {
  bool numerical = false;
  for (const auto& c : checks) {
    if (!c.asserted || c.pass) continue;
    if (!c.numerical) return 3;
    numerical = true;
  }
  return numerical ? 2 : 0;
}

const std::vector<std::pair<int, std::string>>& continuation_families() {
  static const std::vector<std::pair<int, std::string>> f{
      {2, "D5pxD1"},                // standing wave
      {3, "D3p^{Z3p}x_{Z2}D2"},     // D2-coupled standing wave
      {4, "A4p^{A4}x_{Z2}D2"},      // tetrahedral
      {4, "V4p^{V4z}x_{Z2}D2"},     // twisted V4
      {5, "D3p^{Z1}x_{D6}D6"},      // D6 rotating wave
      {3, "D3p^{Z1p}x_{D3}D3"},     // D3 rotating wave
  };
  return f;
}

json equilibrium_json(const RunConfig& cfg, const Equilibrium& eq) {
  const BondLengths b = bond_lengths(eq.u0);
  return {{"meta", meta(cfg, "equilibrium")},
          {"x0", eq.xz.x},
          {"z0", eq.xz.z},
          {"dS", b.dS},
          {"dD", b.dD},
          {"spread_S", b.spreadS},
          {"spread_D", b.spreadD},
          {"energy", eq.energy},
          {"grad_inf_norm", eq.grad_inf},
          {"iterations", eq.iterations}};
}

json spectrum_json(const RunConfig& cfg, const Spectrum& s) {
  json modes = json::array();
  for (const auto& m : s.modes)
    modes.push_back({{"j", m.j},
                     {"multiplicity", m.multiplicity},
                     {"mu", m.mu},
                     {"lambda", m.lambda1},
                     {"n", m.label},
                     {"dominance", m.dominance}});
  return {{"meta", meta(cfg, "spectrum")},
          {"modes", modes},
          {"rotation_label", s.rotation_label},
          {"slice_orthogonality", s.slice_orthogonality},
          {"isotypic_leak", s.isotypic_leak}};
}

json resonance_json(const RunConfig& cfg, const ResonanceReport& r) {
  json numbers = json::array();
  for (const auto& c : r.numbers) numbers.push_back({{"lambda", c.lambda}, {"j", c.j}, {"l", c.l}});
  return {{"meta", meta(cfg, "resonance")},
          {"numbers", numbers},
          {"min_gap", r.min_gap},
          {"min_gap_pair", {{{"j", r.gap_lo.j}, {"l", r.gap_lo.l}}, {{"j", r.gap_hi.j}, {"l", r.gap_hi.l}}}},
          {"l_max", r.l_max},
          {"resonant", r.resonant},
          {"tolerance", r.tolerance}};
}

json omega_json(const RunConfig& cfg, const OmegaReport& r) {
  const std::set<std::string> maximal(r.maximal.begin(), r.maximal.end());
  json terms = json::array();
  // The unit type first, then the rest in id order.
  std::vector<std::pair<std::string, long>> ordered(r.element.coeffs.begin(), r.element.coeffs.end());
  std::stable_partition(ordered.begin(), ordered.end(), [](const auto& t) { return t.first == "A5pxO2"; });
  for (const auto& [id, c] : ordered) terms.push_back({{"id", id}, {"coefficient", c}, {"maximal", maximal.count(id) > 0}});
  json factors = json::array();
  for (auto [j, l] : r.factors) factors.push_back({j, l});
  return {{"meta", meta(cfg, "omega")}, {"j", r.j},         {"n", r.n},
          {"factors", factors},         {"terms", terms},   {"maximal_reported", r.reported}};
}

json branch_json(const RunConfig& cfg, const OrbitBranch& b, const std::vector<SymmetryReport>& symmetry) {
  json points = json::array();
  for (std::size_t k = 0; k < b.points.size(); ++k) {
    const auto& p = b.points[k];
    json pt{{"period", p.T},
            {"amplitude", p.amplitude},
            {"energy", p.energy},
            {"residual", p.residual},
            {"multipliers", vector_json(p.multipliers)},
            {"iterations", p.iterations},
            {"step", k == 0 ? 0.0 : b.steps[k - 1]}};
    if (k < symmetry.size()) {
      pt["symmetry_error"] = symmetry[k].max_error;
      pt["brake_error"] = symmetry[k].brake_error;
    }
    points.push_back(pt);
  }
  return {{"meta", meta(cfg, "branch")},
          {"j", b.j},
          {"orbit_type", b.orbit_type},
          {"points", points},
          {"turning_points", b.turning_points},
          {"jacobians", b.stats.jacobians},
          {"residual_evaluations", b.stats.residuals}};
}

std::string branch_csv(const RunConfig& cfg, const OrbitBranch& b) {
  std::ostringstream os;
  os << csv_header_comment(cfg, "trajectory") << "point,t,face,vertex,x,y,z\n";
  os << std::setprecision(12);
  const ContinuationOptions opt = cfg.continuation();
  const auto atoms = enumerate_atoms();
  for (std::size_t k = 0; k < b.points.size(); ++k)
    for (const auto& [t, x] : orbit_trajectory(b.points[k], opt, 64))
      for (int a = 0; a < kAtoms; ++a)
        os << k << ',' << t << ',' << atoms[a].tau().str() << ',' << atoms[a].vertex << ',' << x(3 * a) << ','
           << x(3 * a + 1) << ',' << x(3 * a + 2) << '\n';
  return os.str();
}

std::string branch_stem(int j, const std::string& id) { return "branch_" + std::to_string(j) + "_" + id; }

std::vector<Check> degree_verification(const RunConfig& cfg) {
  std::vector<Check> out;
  const auto table = load_basic_degrees(cfg.data("basic_degrees.txt"));
  for (int n : all_labels()) {
    const StoredDegree& d = table.at(n);
    const OrbitTypeElement stored = pi0(d.element), computed = brouwer_degree_neg_id(n, 1);
    out.push_back({"pi0 n=" + std::to_string(n), false, true, stored == computed,
                   {{"stored", stored.str()}, {"recurrence", computed.str()}}});
    bool red = !d.red.empty();
    for (const auto& id : d.red) red = red && d.element[id] == -1;
    out.push_back({"red coefficients n=" + std::to_string(n), false, true, red, {{"red", d.red}}});
  }
  const OrbitTypeElement psi = psi_homomorphism(table.at(3).element);
  const OrbitTypeElement ref = load_circle_element(cfg.data("psi_v3.txt"));
  out.push_back({"restriction of the n=3 degree", false, true, psi == ref, {{"computed", psi.str()}, {"stored", ref.str()}}});
  return out;
}

std::vector<Check> theorem_checks(const RunConfig& cfg) {
  std::vector<Check> out;
  const auto table = load_basic_degrees(cfg.data("basic_degrees.txt"));
  const auto maximal = load_maximal_types(cfg.data("maximal_types.txt"));
  std::vector<double> mu;
  std::vector<int> labels;
  for (const auto& r : load_reference_spectrum(cfg.data("reference_spectrum.csv"))) {
    mu.push_back(r.mu);
    labels.push_back(r.n);
  }
  const ResonanceReport crit = critical_numbers(mu);
  std::set<int> done;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!done.insert(labels[i]).second) continue;
    const OmegaReport r = omega_invariant(static_cast<int>(i) + 1, labels, crit, table);
    const std::set<std::string> got(r.reported.begin(), r.reported.end());
    out.push_back({"maximal types n=" + std::to_string(r.n), false, true, got == maximal.at(r.n),
                   {{"j", r.j}, {"reported", r.reported}, {"expected", maximal.at(r.n)}}});
  }
  return out;
}

namespace {

template <class Fn>
Check guarded_check(const std::string& name, bool numerical, Fn&& fn) {
  try {
    return fn();
  } catch (const NumericalError& e) {
    return {name, true, true, false, {{"error", e.what()}}};
  } catch (const Error& e) {
    return {name, numerical, true, false, {{"error", e.what()}}};
  }
}

}  // namespace

ReproduceResult reproduce(const RunConfig& cfg, int continuation_steps) {
  ReproduceResult res;
  auto& checks = res.checks;
  const bool paper_params = !cfg.params.vdw_enabled;

  const Equilibrium eq = find_minimizer(cfg.params);
  const BondLengths b = bond_lengths(eq.u0);
  checks.push_back({"bond lengths", true, paper_params,
                    std::abs(b.dS - 1.438084) < 1e-5 && std::abs(b.dD - 1.420845) < 1e-5,
                    {{"dS", b.dS}, {"dD", b.dD}}});
  checks.push_back({"equilibrium gradient", true, true, eq.grad_inf < cfg.min_grad, {{"grad_inf_norm", eq.grad_inf}}});

  const Spectrum s = spectrum(eq.u0, cfg.params, cfg.spectrum_options());
  const auto ref = load_reference_spectrum(cfg.data("reference_spectrum.csv"));
  bool labels = s.modes.size() == ref.size(), mus = labels;
  int mult = 0;
  double worst = 0;
  for (std::size_t i = 0; labels && i < ref.size(); ++i) {
    labels = labels && s.modes[i].label == ref[i].n && s.modes[i].multiplicity == ref[i].multiplicity;
    worst = std::max(worst, std::abs(s.modes[i].mu / ref[i].mu - 1));
  }
  for (const auto& m : s.modes) mult += m.multiplicity;
  mus = mus && worst < 1e-3;
  checks.push_back({"spectrum labels and multiplicities", false, paper_params, labels && mult == 174,
                    {{"modes", s.modes.size()}, {"multiplicity_sum", mult}}});
  checks.push_back({"spectrum eigenvalues", true, paper_params, mus, {{"max_relative_error", worst}}});

  std::vector<double> mu;
  for (const auto& m : s.modes) mu.push_back(m.mu);
  const ResonanceReport crit = critical_numbers(mu);
  const int n = static_cast<int>(crit.numbers.size());
  bool chain = n >= 5;
  const int head[4] = {1, 2, 3, 4};
  for (int k = 0; chain && k < 4; ++k) chain = chain_position(crit, head[k], 1) == k;
  const std::pair<int, int> tail[5] = {{5, 7}, {26, 3}, {21, 4}, {27, 3}, {46, 1}};
  for (int k = 0; chain && k < 5; ++k) chain = chain_position(crit, tail[k].first, tail[k].second) == n - 5 + k;
  checks.push_back({"critical number chain", false, paper_params, chain, {{"count", n}, {"l_max", crit.l_max}}});
  checks.push_back({"critical number separation", true, paper_params, !crit.resonant && crit.min_gap > 1e-5,
                    {{"min_gap", crit.min_gap}}});

  for (auto& c : degree_verification(cfg)) checks.push_back(std::move(c));
  for (auto& c : theorem_checks(cfg)) checks.push_back(std::move(c));

  const ContinuationOptions opt = cfg.continuation();
  const LinearModes lm{eq.u0, s};
  json branches = json::array();
  for (const auto& [j, id] : continuation_families()) {
    const std::string name = "mode " + std::to_string(j) + " " + id;
    OrbitBranch branch;
    std::vector<SymmetryReport> sym;
    checks.push_back(guarded_check("continuation " + name, true, [&]() -> Check {
      const Seed seed = seed_from_mode(lm, j, cfg.amplitude, id);
      branch = arclength_continue(start_branch(seed, newton_correct(seed, opt)), continuation_steps, 1e-3, opt);
      double res = 0, lam = 0, drift = 0;
      for (const auto& p : branch.points) {
        res = std::max(res, p.residual);
        lam = std::max(lam, p.multipliers.cwiseAbs().maxCoeff());
        const auto g0 = conserved_quantities(p.x, cfg.params);
        const auto g1 = conserved_quantities(flow_time_one(p.x, p.T, p.multipliers, cfg.params, opt.flow), cfg.params);
        drift = std::max(drift, ((g1 - g0).array().abs() / g0.array().abs().max(1.0)).maxCoeff());
      }
      return {"continuation " + name, true, paper_params, res < 1e-10 && lam < 1e-8 && drift < 1e-9,
              {{"points", branch.points.size()}, {"max_residual", res}, {"max_multiplier", lam}, {"max_drift", drift}}};
    }));
    if (!checks.back().pass) continue;
    checks.push_back(guarded_check("symmetry " + name, false, [&]() -> Check {
      double err = 0, brake = -1;
      for (const auto& p : branch.points) {
        sym.push_back(verify_symmetry(p, id, opt));
        err = std::max(err, sym.back().max_error);
        brake = std::max(brake, sym.back().brake_error);
      }
      const bool brake_ok = brake < 0 || brake < 1e-8;
      return {"symmetry " + name, false, paper_params, brake_ok, {{"max_error", err}, {"brake_error", brake}}};
    }));
    branches.push_back(branch_json(cfg, branch, sym));
  }

  checks.push_back(guarded_check("small-amplitude period", true, [&]() -> Check {
    std::vector<double> T;
    for (double a : {0.02, 0.01, 0.005}) T.push_back(newton_correct(seed_from_mode(lm, 2, a, "D5pxD1"), opt).T);
    const double r1 = (T[0] - T[1]) / (T[1] - T[2]);
    const double limit = T[2] - (T[1] - T[2]) / 3;
    const double target = 2 * M_PI * 0.075300;
    return {"small-amplitude period", true, paper_params, std::abs(r1 - 4) < 0.5 && std::abs(limit - target) < 2 * M_PI * 5e-7,
            {{"periods", T}, {"difference_ratio", r1}, {"extrapolated", limit}, {"target", target}}};
  }));

  res.report = {{"meta", meta(cfg, "report")},
                {"config", cfg.to_json()},
                {"checks", checks_json(checks)},
                {"branches", branches},
                {"exit_code", exit_code(checks)}};
  return res;
}

}  // namespace c60::cli
