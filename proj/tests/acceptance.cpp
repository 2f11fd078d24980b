// One PASS/FAIL line per acceptance criterion; tolerances are fixed here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "c60/continuation.hpp"
#include "c60/degrees.hpp"
#include "c60/equilibrium.hpp"
#include "c60/errors.hpp"
#include "c60/representation.hpp"

using namespace c60;

namespace {

constexpr double kBondTol = 1e-5;
constexpr double kGradTol = 1e-8;
constexpr double kEquilibriumSeconds = 10;
constexpr double kMuRelTol = 1e-3;
constexpr double kSpectrumSeconds = 60;
constexpr double kGapTol = 1e-5;
constexpr double kNewtonTol = 1e-10;
constexpr double kMultiplierTol = 1e-8;
constexpr double kBrakeTol = 1e-8;
constexpr double kConservationTol = 1e-9;
constexpr double kSymmetryTol = 1e-6;
constexpr double kRatioTol = 0.5;          // |ratio - 4|
constexpr double kPeriodTarget = 2 * M_PI * 0.075300;
constexpr double kPeriodTol = 2 * M_PI * 5e-7;  // half a unit in the last printed digit
constexpr double kFdRelTol = 1e-5;
constexpr double kCommutatorTol = 1e-7;
constexpr int kArclengthSteps = 20;
constexpr double kArclengthStep = 1e-3;

const std::string kData = C60_DATA_DIR;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void report(int k, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s %d %s: %s\n", pass ? "PASS" : "FAIL", k, name.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

void criterion(int k, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [pass, detail] = body();
    report(k, name, pass, detail);
  } catch (const std::exception& e) {
    report(k, name, false, std::string("exception: ") + e.what());
  }
}

// Orbits of G on G/A x G/B are the double cosets AxB with isotropy A ∩ xBx^-1.
OrbitTypeElement orbit_count(int a, int b, OrbitRegistry& reg, const DihedralAmbient& amb) {
  const OrbitGroup& A = reg[a].rep;
  const OrbitGroup& B = reg[b].rep;
  std::set<ProductElement> seen;
  OrbitTypeElement out;
  for (int g = 0; g < kGammaOrder; ++g)
    for (const auto& o : amb.all()) {
      const ProductElement x{g, o.flip, o.t};
      if (seen.count(x)) continue;
      for (const auto& p : A.elements)
        for (const auto& q : B.elements) seen.insert(p * x * q);
      out.add(reg[reg.classify(intersect(A, conjugate(B, x)))].id, 1);
    }
  return out;
}

}  // namespace

int main() {
  const int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  Equilibrium eq;
  Spectrum spec;
  ResonanceReport crit;
  std::vector<int> labels;

  criterion(1, "equilibrium", [&]() -> std::pair<bool, std::string> {
    const auto t0 = std::chrono::steady_clock::now();
    eq = find_minimizer();
    const double secs = seconds_since(t0);
    const BondLengths b = bond_lengths(eq.u0);
    const double g = gradient(eq.u0).cwiseAbs().maxCoeff();
    const bool pass = std::abs(b.dS - 1.438084) < kBondTol && std::abs(b.dD - 1.420845) < kBondTol && g < kGradTol &&
                      secs < kEquilibriumSeconds;
    return {pass, fmt("dS=%.7f dD=%.7f |grad|=%.2e time=%.2fs", b.dS, b.dD, g, secs)};
  });

  criterion(2, "spectrum", [&]() -> std::pair<bool, std::string> {
    SpectrumOptions opt;
    opt.jobs = jobs;
    const auto t0 = std::chrono::steady_clock::now();
    spec = spectrum(eq.u0, {}, opt);
    const double secs = seconds_since(t0);
    const auto ref = load_reference_spectrum(kData + "/reference_spectrum.csv");
    bool exact = spec.modes.size() == 46 && ref.size() == 46;
    double worst = 0;
    int sum = 0;
    bool positive_distinct = true;
    for (std::size_t i = 0; exact && i < ref.size(); ++i) {
      const auto& m = spec.modes[i];
      exact = exact && m.multiplicity == ref[i].multiplicity && m.label == ref[i].n;
      worst = std::max(worst, std::abs(m.mu / ref[i].mu - 1));
      positive_distinct = positive_distinct && m.mu > 0 && (i == 0 || m.mu < spec.modes[i - 1].mu);
      sum += m.multiplicity;
    }
    for (const auto& m : spec.modes) labels.push_back(m.label);
    const bool pass = exact && positive_distinct && worst < kMuRelTol && sum == 174 && secs < kSpectrumSeconds;
    return {pass, fmt("modes=%zu labels+multiplicities %s max rel mu err=%.2e sum=%d time=%.2fs", spec.modes.size(),
                      exact ? "exact" : "MISMATCH", worst, sum, secs)};
  });

  criterion(3, "resonance scan", [&]() -> std::pair<bool, std::string> {
    std::vector<double> mu;
    for (const auto& m : spec.modes) mu.push_back(m.mu);
    crit = critical_numbers(mu, kGapTol);
    const int n = static_cast<int>(crit.numbers.size());
    bool chain = n >= 9;
    for (int k = 0; chain && k < 4; ++k) chain = chain_position(crit, k + 1, 1) == k;
    const std::pair<int, int> tail[5] = {{5, 7}, {26, 3}, {21, 4}, {27, 3}, {46, 1}};
    for (int k = 0; chain && k < 5; ++k) chain = chain_position(crit, tail[k].first, tail[k].second) == n - 5 + k;
    const bool pass = chain && !crit.resonant && crit.min_gap > kGapTol;
    return {pass, fmt("%d critical numbers, head/tail %s, min gap %.3e between (%d,%d) and (%d,%d)", n,
                      chain ? "match" : "MISMATCH", crit.min_gap, crit.gap_lo.j, crit.gap_lo.l, crit.gap_hi.j,
                      crit.gap_hi.l)};
  });

  const auto table = load_basic_degrees(kData + "/basic_degrees.txt");

  criterion(4, "stored degrees", [&]() -> std::pair<bool, std::string> {
    int equal = 0, red_ok = 0, red_total = 0;
    for (int n : all_labels()) {
      const StoredDegree& d = table.at(n);
      equal += pi0(d.element) == brouwer_degree_neg_id(n, 1);
      for (const auto& id : d.red) {
        ++red_total;
        red_ok += d.element[id] == -1;
      }
    }
    return {equal == 10 && red_ok == red_total && red_total > 0,
            fmt("pi0 equal %d/10, red coefficients -1: %d/%d", equal, red_ok, red_total)};
  });

  criterion(5, "theorem maximal types", [&]() -> std::pair<bool, std::string> {
    const auto maximal = load_maximal_types(kData + "/maximal_types.txt");
    std::set<int> done;
    int match = 0;
    std::string bad;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!done.insert(labels[i]).second) continue;
      const OmegaReport r = omega_invariant(static_cast<int>(i) + 1, labels, crit, table);
      if (std::set<std::string>(r.reported.begin(), r.reported.end()) == maximal.at(r.n)) ++match;
      else bad += " n=" + std::to_string(r.n);
    }
    return {match == 10 && done.size() == 10, fmt("%d/10 labels match%s", match, bad.c_str())};
  });

  criterion(6, "degree algebra", [&]() -> std::pair<bool, std::string> {
    std::mt19937 rng(20240611);
    int agree = 0;
    for (int trial = 0; trial < 10; ++trial) {
      const int N = 2 + trial % 2;
      auto amb = std::make_shared<DihedralAmbient>(N);
      OrbitRegistry reg(amb);
      std::vector<ProductElement> elems;
      for (int g = 0; g < kGammaOrder; ++g)
        for (const auto& o : amb->all()) elems.push_back({g, o.flip, o.t});
      std::uniform_int_distribution<std::size_t> pick(0, elems.size() - 1);
      auto random_class = [&] {
        for (;;) {
          std::vector<ProductElement> gens{elems[pick(rng)]};
          if (rng() % 2) gens.push_back(elems[pick(rng)]);
          const OrbitGroup s = generate(gens);
          if (s.order() <= 24) return reg.classify(s);
        }
      };
      const int a = random_class(), b = random_class();
      agree += burnside_generators(a, b, reg) == orbit_count(a, b, reg, *amb);
    }
    auto& reg = OrbitRegistry::circle();
    int cancel = 0, total = 0;
    for (int n : all_labels()) {
      const OrbitTypeElement deg = brouwer_degree_neg_id(n, 1);
      for (const auto& t : isotropy_types(n, 1)) {
        if (!t.maximal || !t.finite_weyl) continue;
        ++total;
        const long nh = deg[t.id], mh = burnside_generators(t.cls, t.cls, reg)[t.id];
        cancel += 2 * nh + nh * nh * mh == 0;
      }
    }
    const OrbitTypeElement psi = psi_homomorphism(table.at(3).element);
    const bool psi_ok = psi == load_circle_element(kData + "/psi_v3.txt");
    return {agree == 10 && cancel == total && total > 0 && psi_ok,
            fmt("orbit counting %d/10, cancellation %d/%d, restriction of the n=3 degree %s (%zu terms)", agree,
                cancel, total, psi_ok ? "equal" : "DIFFERENT", psi.coeffs.size())};
  });

  criterion(7, "continuation", [&]() -> std::pair<bool, std::string> {
    ContinuationOptions opt;
    opt.jobs = jobs;
    const LinearModes lm{eq.u0, spec};
    std::ostringstream detail;
    bool pass = true;

    const Seed seed = seed_from_mode(lm, 2, 0.01, "D5pxD1");
    const PeriodicOrbit first = newton_correct(seed, opt);
    const double lam0 = first.multipliers.cwiseAbs().maxCoeff();
    pass = pass && first.residual < kNewtonTol && lam0 < kMultiplierTol;
    detail << fmt("newton residual %.1e |lambda| %.1e; ", first.residual, lam0);

    const OrbitBranch branch = arclength_continue(start_branch(seed, first), kArclengthSteps, kArclengthStep, opt);
    double brake = 0, res = 0, lam = 0;
    for (const auto& p : branch.points) {
      brake = std::max(brake, verify_symmetry(p, "D5pxD1", opt, kSymmetryTol).brake_error);
      res = std::max(res, p.residual);
      lam = std::max(lam, p.multipliers.cwiseAbs().maxCoeff());
    }
    const bool steps_ok = static_cast<int>(branch.points.size()) == kArclengthSteps + 1;
    pass = pass && steps_ok && brake < kBrakeTol && res < kNewtonTol && lam < kMultiplierTol;
    detail << fmt("%zu points, amplitude %.4f -> %.4f, brake %.1e; ", branch.points.size(),
                  branch.points.front().amplitude, branch.points.back().amplitude, brake);

    std::vector<double> T;
    for (double a : {0.02, 0.01, 0.005}) T.push_back(newton_correct(seed_from_mode(lm, 2, a, "D5pxD1"), opt).T);
    const double ratio = (T[0] - T[1]) / (T[1] - T[2]);
    const double limit = T[2] - (T[1] - T[2]) / 3;
    pass = pass && std::abs(ratio - 4) < kRatioTol && std::abs(limit - kPeriodTarget) < kPeriodTol;
    detail << fmt("period ratio %.3f, limit %.8f vs %.8f; ", ratio, limit, kPeriodTarget);

    const std::pair<int, const char*> families[] = {{2, "D5pxD1"},
                                                    {3, "D3p^{Z3p}x_{Z2}D2"},
                                                    {4, "A4p^{A4}x_{Z2}D2"},
                                                    {4, "V4p^{V4z}x_{Z2}D2"},
                                                    {5, "D3p^{Z1}x_{D6}D6"},
                                                    {3, "D3p^{Z1p}x_{D3}D3"}};
    int ok = 0;
    for (const auto& [j, id] : families) {
      bool fam = true;
      try {
        const Seed s = seed_from_mode(lm, j, 0.01, id);
        const OrbitBranch b = arclength_continue(start_branch(s, newton_correct(s, opt)), 1, kArclengthStep, opt);
        for (const auto& p : b.points) {
          const auto g0 = conserved_quantities(p.x);
          const auto g1 = conserved_quantities(flow_time_one(p.x, p.T, p.multipliers, {}, opt.flow));
          const double drift = ((g1 - g0).array().abs() / g0.array().abs().max(1.0)).maxCoeff();
          const SymmetryReport r = verify_symmetry(p, id, opt, kSymmetryTol);
          fam = fam && drift < kConservationTol && p.multipliers.cwiseAbs().maxCoeff() < kMultiplierTol &&
                p.residual < kNewtonTol && (r.brake_error < 0 || r.brake_error < kBrakeTol);
        }
      } catch (const Error& e) {
        fam = false;
        detail << "[" << id << ": " << e.what() << "] ";
      }
      ok += fam;
    }
    pass = pass && ok == 6;
    detail << fmt("families %d/6", ok);
    return {pass, detail.str()};
  });

  criterion(8, "numerical hygiene", [&]() -> std::pair<bool, std::string> {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> d(-0.05, 0.05);
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd u = eq.u0;
      for (int i = 0; i < kDim; ++i) u(i) += d(rng);
      const Eigen::VectorXd g = gradient(u);
      Eigen::VectorXd fd(kDim);
      const double h = 1e-6;
      for (int i = 0; i < kDim; ++i) {
        Eigen::VectorXd a = u, b = u;
        a(i) += h;
        b(i) -= h;
        fd(i) = (energy(a) - energy(b)) / (2 * h);
      }
      worst = std::max(worst, (g - fd).norm() / g.norm());
    }
    const Eigen::MatrixXd H = hessian(eq.u0, {}, 1e-5, jobs);
    double comm = 0;
    for (int g = 0; g < 120; ++g) {
      const Eigen::MatrixXd S = SymmetryTable::get().dense(g);
      comm = std::max(comm, (S * H - H * S).cwiseAbs().maxCoeff());
    }
    return {worst < kFdRelTol && comm < kCommutatorTol,
            fmt("gradient vs central differences max rel err %.2e, Hessian commutator %.2e", worst, comm)};
  });

  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
