#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "c60/continuation.hpp"
#include "c60/degrees.hpp"
#include "c60/equilibrium.hpp"
#include "c60/representation.hpp"

namespace c60::cli {

using nlohmann::json;

/// Effective run settings; every output file records the hash of to_json().
struct RunConfig {
  ForceFieldParams params;
  double min_grad = 1e-8;
  double eig_cluster_gap = 1e-6;
  double newton_tol = 1e-10;
  double ode_tol = 1e-12;
  double amplitude = 0.01;
  std::string data_dir = C60_DATA_DIR;
  std::string out = "out";
  int jobs = 1;

  void validate() const;
  /// Settings that influence results (out and jobs excluded).
  json to_json() const;
  /// CRC-32 of the compact dump of to_json(), 8 hex digits.
  std::string hash() const;
  ContinuationOptions continuation() const;
  SpectrumOptions spectrum_options() const;
  std::string data(const std::string& file) const { return data_dir + "/" + file; }
  /// JSON object with optional keys forcefield{...}, tolerances{min_grad, eig_cluster_gap, newton_tol, ode_tol},
  /// amplitude, data_dir, out, jobs; unknown keys are errors.
  static RunConfig from_json(const json& j);
  static RunConfig load(const std::string& path);
};

std::string version();
/// {"version", "config_hash", "schema"} block embedded in every JSON output.
json meta(const RunConfig& cfg, const std::string& schema);
/// First line of every CSV output.
std::string csv_header_comment(const RunConfig& cfg, const std::string& schema);

void write_json(const RunConfig& cfg, const std::string& name, const json& j);
void write_text(const RunConfig& cfg, const std::string& name, const std::string& text);
/// MissingStage when the file is absent.
json read_json(const RunConfig& cfg, const std::string& name, const std::string& stage);

struct Check {
  std::string name;
  bool numerical = false;  // tolerance check (exit 2) rather than a structural one (exit 3)
  bool asserted = true;    // reported only when false
  bool pass = false;
  json detail;
};
json checks_json(const std::vector<Check>& checks);
/// 0 when every asserted check passes, 3 when a structural one fails, else 2.
int exit_code(const std::vector<Check>& checks);

/// The families run by reproduce-paper: (mode, orbit type).
const std::vector<std::pair<int, std::string>>& continuation_families();

json equilibrium_json(const RunConfig& cfg, const Equilibrium& eq);
json spectrum_json(const RunConfig& cfg, const Spectrum& s);
json resonance_json(const RunConfig& cfg, const ResonanceReport& r);
json omega_json(const RunConfig& cfg, const OmegaReport& r);
json branch_json(const RunConfig& cfg, const OrbitBranch& b, const std::vector<SymmetryReport>& symmetry);
/// Rows point,t,face,vertex,x,y,z with 64 samples per period for each branch point.
std::string branch_csv(const RunConfig& cfg, const OrbitBranch& b);

/// File stem branch_<j>_<id>.
std::string branch_stem(int j, const std::string& id);

/// pi0 agreement and red coefficients for the ten stored degrees, then the restriction of the V_{3,1} degree.
std::vector<Check> degree_verification(const RunConfig& cfg);
/// Maximal-type reports of the first critical number of every label against the stored theorem lists.
std::vector<Check> theorem_checks(const RunConfig& cfg);

struct ReproduceResult {
  std::vector<Check> checks;
  json report;
};
ReproduceResult reproduce(const RunConfig& cfg, int continuation_steps);

}  // namespace c60::cli
