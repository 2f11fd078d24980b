#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "c60/errors.hpp"
#include "pipeline.hpp"

using namespace c60;
using namespace c60::cli;

namespace {

struct Globals {
  std::string config;
  std::string out;
  std::string data;
  int jobs = 0;
  bool vdw = false;
};

RunConfig make_config(const Globals& g) {
  RunConfig cfg = g.config.empty() ? RunConfig{} : RunConfig::load(g.config);
  if (!g.out.empty()) cfg.out = g.out;
  if (!g.data.empty()) cfg.data_dir = g.data;
  if (g.jobs > 0) cfg.jobs = g.jobs;
  if (g.vdw) cfg.params.vdw_enabled = true;
  cfg.validate();
  return cfg;
}

Spectrum compute_spectrum(const RunConfig& cfg, Equilibrium* eq_out = nullptr) {
  const Equilibrium eq = find_minimizer(cfg.params);
  if (eq_out) *eq_out = eq;
  return spectrum(eq.u0, cfg.params, cfg.spectrum_options());
}

void print_checks(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    std::printf("%-6s %-10s %s\n", c.pass ? "PASS" : (c.asserted ? "FAIL" : "REPORT"),
                c.numerical ? "numerical" : "structural", c.name.c_str());
}

int cmd_equilibrate(const RunConfig& cfg) {
  const Equilibrium eq = find_minimizer(cfg.params);
  const json j = equilibrium_json(cfg, eq);
  write_json(cfg, "equilibrium.json", j);
  write_text(cfg, "equilibrium.csv", csv_header_comment(cfg, "configuration") + configuration_csv(eq.u0));
  std::printf("x0 %.10f z0 %.10f dS %.7f dD %.7f grad %.2e\n", eq.xz.x, eq.xz.z, j["dS"].get<double>(),
              j["dD"].get<double>(), eq.grad_inf);
  return eq.grad_inf < cfg.min_grad ? 0 : 2;
}

int cmd_spectrum(const RunConfig& cfg) {
  const Spectrum s = compute_spectrum(cfg);
  std::vector<double> mu;
  for (const auto& m : s.modes) mu.push_back(m.mu);
  const ResonanceReport r = critical_numbers(mu);
  write_json(cfg, "spectrum.json", spectrum_json(cfg, s));
  write_json(cfg, "resonance_report.json", resonance_json(cfg, r));
  std::printf("%zu modes, rotation label %d\n", s.modes.size(), s.rotation_label);
  for (const auto& m : s.modes)
    std::printf("%3d %2d %12.6f %9.6f %3d\n", m.j, m.multiplicity, m.mu, m.lambda1, m.label);
  return 0;
}

int cmd_scan_resonance(const RunConfig& cfg) {
  const Spectrum s = compute_spectrum(cfg);
  std::vector<double> mu;
  for (const auto& m : s.modes) mu.push_back(m.mu);
  const ResonanceReport r = critical_numbers(mu);
  write_json(cfg, "resonance_report.json", resonance_json(cfg, r));
  std::printf("%zu critical numbers up to l = %d, min gap %.3e between (%d,%d) and (%d,%d)%s\n", r.numbers.size(),
              r.l_max, r.min_gap, r.gap_lo.j, r.gap_lo.l, r.gap_hi.j, r.gap_hi.l, r.resonant ? ", RESONANT" : "");
  return r.resonant ? 3 : 0;
}

int cmd_degrees(const RunConfig& cfg, int mode, bool verify) {
  if (verify) {
    const auto checks = degree_verification(cfg);
    print_checks(checks);
    return exit_code(checks);
  }
  if (mode < 1) throw DomainViolation("degrees needs --mode j or --verify");
  const Spectrum s = compute_spectrum(cfg);
  std::vector<double> mu;
  std::vector<int> labels;
  for (const auto& m : s.modes) {
    mu.push_back(m.mu);
    labels.push_back(m.label);
  }
  if (mode > static_cast<int>(labels.size())) throw DomainViolation("mode index out of range");
  const auto table = load_basic_degrees(cfg.data("basic_degrees.txt"));
  const OmegaReport r = omega_invariant(mode, labels, critical_numbers(mu), table);
  write_json(cfg, "omega_" + std::to_string(mode) + ".json", omega_json(cfg, r));
  std::printf("j=%d n=%d, %zu factors\n%s\nmaximal:", r.j, r.n, r.factors.size(), r.element.str().c_str());
  for (const auto& id : r.reported) std::printf(" %s", id.c_str());
  std::printf("\n");
  return 0;
}

int cmd_continue(const RunConfig& cfg, int mode, const std::string& type, int steps, double ds) {
  Equilibrium eq;
  const Spectrum s = compute_spectrum(cfg, &eq);
  const ContinuationOptions opt = cfg.continuation();
  const Seed seed = seed_from_mode({eq.u0, s}, mode, cfg.amplitude, type);
  OrbitBranch b = start_branch(seed, newton_correct(seed, opt));
  if (steps > 0) b = arclength_continue(std::move(b), steps, ds, opt);
  std::vector<SymmetryReport> sym;
  for (const auto& p : b.points) {
    sym.push_back(verify_symmetry(p, type, opt));
    std::printf("T %.10f amplitude %.6f energy %.8f residual %.1e symmetry %.1e\n", p.T, p.amplitude, p.energy,
                p.residual, sym.back().max_error);
  }
  const std::string stem = branch_stem(mode, type);
  write_json(cfg, stem + ".json", branch_json(cfg, b, sym));
  write_text(cfg, stem + ".csv", branch_csv(cfg, b));
  return 0;
}

int cmd_reproduce(const RunConfig& cfg, int steps) {
  const ReproduceResult r = reproduce(cfg, steps);
  write_json(cfg, "report.json", r.report);
  print_checks(r.checks);
  return exit_code(r.checks);
}

int cmd_export(const RunConfig& cfg, const std::string& what, const std::string& index, const std::string& format) {
  if (format != "csv" && format != "json") throw DomainViolation("format must be csv or json");
  json j;
  std::string name;
  if (what == "equilibrium") {
    name = "equilibrium";
    j = read_json(cfg, "equilibrium.json", "equilibrate");
  } else if (what == "spectrum") {
    name = "spectrum";
    j = read_json(cfg, "spectrum.json", "spectrum");
  } else if (what == "resonance") {
    name = "resonance";
    j = read_json(cfg, "resonance_report.json", "scan-resonance");
  } else if (what == "omega") {
    if (index.empty()) throw DomainViolation("export omega needs a mode index");
    name = "omega_" + index;
    j = read_json(cfg, name + ".json", "degrees --mode " + index);
  } else if (what == "branch") {
    namespace fs = std::filesystem;
    std::vector<std::string> found;
    if (fs::is_directory(cfg.out))
      for (const auto& e : fs::directory_iterator(cfg.out)) {
        const std::string f = e.path().filename().string();
        if (f.rfind("branch_" + index, 0) == 0 && e.path().extension() == ".json") found.push_back(f);
      }
    if (found.empty()) throw MissingStage("no branch found in " + cfg.out + "; run `continue` first");
    std::sort(found.begin(), found.end());
    name = found.front().substr(0, found.front().size() - 5);
    j = read_json(cfg, found.front(), "continue");
  } else {
    throw DomainViolation("unknown export target " + what);
  }

  if (format == "json") {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::ostringstream os;
  os << csv_header_comment(cfg, name);
  if (what == "spectrum") {
    os << "j,multiplicity,mu,lambda,n\n";
    for (const auto& m : j["modes"])
      os << m["j"] << ',' << m["multiplicity"] << ',' << m["mu"] << ',' << m["lambda"] << ',' << m["n"] << '\n';
  } else if (what == "resonance") {
    os << "lambda,j,l\n";
    for (const auto& c : j["numbers"]) os << c["lambda"] << ',' << c["j"] << ',' << c["l"] << '\n';
  } else if (what == "omega") {
    os << "id,coefficient,maximal\n";
    for (const auto& t : j["terms"])
      os << t["id"].get<std::string>() << ',' << t["coefficient"] << ',' << (t["maximal"].get<bool>() ? 1 : 0) << '\n';
  } else if (what == "branch") {
    os << "period,amplitude,energy,residual\n";
    for (const auto& p : j["points"]) os << p["period"] << ',' << p["amplitude"] << ',' << p["energy"] << ',' << p["residual"] << '\n';
  } else {
    os << "key,value\n";
    for (const auto& [k, v] : j.items())
      if (k != "meta") os << k << ',' << v << '\n';
  }
  write_text(cfg, name + ".csv", os.str());
  std::cout << os.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium, vibrational spectrum, degree invariants and nonlinear normal modes of C60"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output directory (default out)");
  app.add_option("--data", g.data, "directory of the stored degree and reference tables");
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--vdw", g.vdw, "enable the van der Waals pair term");

  auto* equilibrate = app.add_subcommand("equilibrate", "minimize the symmetric potential; writes equilibrium.json");
  auto* spectrum_cmd = app.add_subcommand("spectrum", "slice Hessian spectrum with isotypical labels");
  auto* scan = app.add_subcommand("scan-resonance", "critical numbers and their minimum separation");

  auto* degrees = app.add_subcommand("degrees", "bifurcation invariant of a mode, or data verification");
  int deg_mode = 0;
  bool verify = false;
  degrees->add_option("--mode", deg_mode, "mode index j");
  degrees->add_flag("--verify", verify, "check the stored degrees against the recurrence");

  auto* cont = app.add_subcommand("continue", "continue the nonlinear normal mode of one orbit type");
  int cont_mode = 0, steps = 20;
  double ds = 1e-3;
  std::string orbit_type;
  cont->add_option("--mode", cont_mode, "mode index j")->required();
  cont->add_option("--orbit-type", orbit_type, "canonical orbit-type id")->required();
  cont->add_option("--steps", steps, "pseudo-arclength steps")->check(CLI::NonNegativeNumber);
  cont->add_option("--ds", ds, "arclength step");

  auto* repro = app.add_subcommand("reproduce-paper", "run every check and write report.json");
  int repro_steps = 2;
  repro->add_option("--steps", repro_steps, "continuation steps per family")->check(CLI::NonNegativeNumber);

  auto* exp = app.add_subcommand("export", "re-export a previous stage as CSV or JSON");
  std::string what, index, format = "csv";
  exp->add_option("what", what, "equilibrium, spectrum, resonance, omega or branch")->required();
  exp->add_option("index", index, "mode index for omega and branch");
  exp->add_option("--format", format, "csv or json");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = make_config(g);
    if (*equilibrate) return cmd_equilibrate(cfg);
    if (*spectrum_cmd) return cmd_spectrum(cfg);
    if (*scan) return cmd_scan_resonance(cfg);
    if (*degrees) return cmd_degrees(cfg, deg_mode, verify);
    if (*cont) return cmd_continue(cfg, cont_mode, orbit_type, steps, ds);
    if (*repro) return cmd_reproduce(cfg, repro_steps);
    if (*exp) return cmd_export(cfg, what, index, format);
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 3;
}
