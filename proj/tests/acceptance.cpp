// Acceptance harness: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include "levyreg/levy_spec.hpp"
#include "levyreg/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

using namespace levyreg;
using nlohmann::json;

namespace {

int failures = 0;

struct Verdict {
  bool ok = false;
  std::string detail;
};

void report(int id, const std::string& name, const std::function<Verdict()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream line;
  line << (v.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << name << " (" << v.detail << "; "
       << std::fixed;
  line.precision(1);
  line << secs << " s)";
  std::cout << line.str() << std::endl;
  failures += v.ok ? 0 : 1;
}

double elapsed_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

int threads() {
  if (const char* env = std::getenv("LEVYREG_THREADS")) {
    return std::max(1, std::atoi(env));
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

RunOutput run_default(const std::string& id) { return execute_scenario(default_config(id), threads()); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main() {
  json s2;
  report(1, "jump-time derivative vs one-sided re-simulation", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = run_default("S2");
    const double secs = elapsed_since(t0);
    s2 = out.summary.diagnostics;
    const auto& d = s2.at("jump_time_derivative");
    const double right = d.at("max_rel_err_right");
    const double left = d.at("max_rel_err_left");
    const bool ok = out.summary.replicas >= 100 && out.summary.failures == 0 && right <= 1e-4 && left <= 1e-4 &&
                    secs < 60.0;
    return Verdict{ok, std::to_string(out.summary.replicas) + " configs, max rel err right " + fmt(right) +
                           ", left " + fmt(left)};
  });

  report(2, "flow derivative vs central difference and variational ODE", [&] {
    if (s2.is_null()) {
      s2 = run_default("S2").summary.diagnostics;
    }
    const auto& d = s2.at("flow_derivative");
    const double central = d.at("max_rel_err_central_difference");
    const double variational = d.at("max_rel_err_variational");
    return Verdict{central <= 1e-5 && variational <= 1e-8,
                   "max rel err central " + fmt(central) + ", variational " + fmt(variational)};
  });

  report(3, "Doeblin atom at the deterministic skeleton (S1)", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = run_default("S1");
    const double secs = elapsed_since(t0);
    const auto& d = out.summary.diagnostics;
    const double skeleton = d.at("skeleton");
    const double window = d.at("atom").at("window");
    const double mass = d.at("atom_mass");
    const double expected = d.at("expected_mass");
    const double se = d.at("standard_error");
    const bool located = d.at("atom_location").is_number() &&
                         std::abs(d.at("atom_location").get<double>() - skeleton) <= window;
    const bool ok = out.summary.replicas == 100000 && located && std::abs(mass - expected) <= 3.0 * se &&
                    std::abs(expected - std::exp(-2.0)) < 1e-15 && secs < 120.0;
    return Verdict{ok, "location " + d.at("atom_location").dump() + " vs skeleton " + fmt(skeleton) + ", mass " +
                           fmt(mass) + " vs " + fmt(expected) + " (se " + fmt(se) + ")"};
  });

  report(4, "regularization by increasing drift (S3)", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto cfg = default_config("S3");
    const auto out = execute_scenario(cfg, threads());
    const double secs = elapsed_since(t0);
    const auto& d = out.summary.diagnostics;
    const double lz = d.at("lattice_z");
    const double lx = d.at("lattice_x");
    const bool atoms = d.at("atoms_x").at("present");
    const double rate = total_rate(cfg.measure.build(), cfg.truncation);
    const bool ok = cfg.measure.family.levels == 12 && rate == 8190.0 && out.summary.replicas == 10000 &&
                    lz >= 0.999 && lx <= 0.01 && !atoms && secs < 300.0;
    return Verdict{ok, "lattice(Z) " + fmt(lz) + ", lattice(X) " + fmt(lx) + ", atoms " + (atoms ? "yes" : "no")};
  });

  report(5, "flat drift keeps the lattice (S4)", [&] {
    const auto out = run_default("S4");
    const auto& d = out.summary.diagnostics;
    const double shifted = d.at("lattice_x_minus_shift");
    return Verdict{shifted >= 0.95,
                   "lattice(X - shift) " + fmt(shifted) + ", lattice(Z) " + fmt(d.at("lattice_z").get<double>())};
  });

  report(6, "first-jump resampling invariance and monotonicity in T (S5)", [&] {
    const auto out = run_default("S5");
    const auto& d = out.summary.diagnostics;
    const int below = d.at("ks").at("below_critical");
    const int reps = d.at("ks").at("repetitions");
    const int paths = d.at("monotone_in_T").at("paths");
    const int monotone = d.at("monotone_in_T").at("strictly_monotone");
    const int grid = d.at("monotone_in_T").at("grid");
    const bool ok = reps == 100 && below >= 95 && paths == 100 && monotone == 100 && grid == 64;
    return Verdict{ok, "KS below critical in " + std::to_string(below) + "/" + std::to_string(reps) +
                           ", strictly monotone " + std::to_string(monotone) + "/" + std::to_string(paths)};
  });

  report(7, "Marcus reductions, closed form, chain rule, remainder constant (S6)", [&] {
    const auto out = run_default("S6");
    const auto& d = out.summary.diagnostics;
    const double reduction = d.at("unit_diffusion_reduction").at("max_abs_err");
    const double closed = d.at("proportional_closed_form").at("max_abs_err");
    const double conj = d.at("conjugacy").at("max_abs_err");
    const double chain = d.at("chain_rule").at("max_residual");
    const double coarse = d.at("remainder_constant").at("coarse_21");
    const double fine = d.at("remainder_constant").at("fine_201");
    const bool ok = out.summary.replicas >= 50 && out.summary.failures == 0 && reduction <= 1e-10 &&
                    closed <= 1e-6 && conj <= 1e-5 && chain < 1e-5 && std::abs(coarse - fine) <= 0.1 * fine;
    return Verdict{ok, "reduction " + fmt(reduction) + ", closed form " + fmt(closed) + ", conjugacy " +
                           fmt(conj) + ", chain rule " + fmt(chain) + ", K " + fmt(coarse) + "/" + fmt(fine)};
  });

  report(8, "Doss-Sussman vs Marcus in distribution (S7)", [&] {
    const auto out = run_default("S7");
    const auto& ks = out.summary.diagnostics.at("ks");
    const double stat = ks.at("statistic");
    const double crit = ks.at("critical_1pct");
    return Verdict{out.summary.replicas == 10000 && stat < crit,
                   "KS " + fmt(stat) + " vs critical " + fmt(crit)};
  });

  report(9, "byte-identical samples.csv across reruns and thread counts", [&] {
    namespace fs = std::filesystem;
    const auto base = fs::temp_directory_path() / "levyreg_acceptance_c9";
    fs::remove_all(base);
    auto cfg = default_config("S1");
    cfg.replicas = 10000;
    std::string files[3];
    const int pool[3] = {1, 1, 8};
    for (int k = 0; k < 3; ++k) {
      cfg.output_dir = (base / std::to_string(k)).string();
      run_scenario(cfg, pool[k]);
      files[k] = slurp(base / std::to_string(k) / "samples.csv");
    }
    fs::remove_all(base);
    const bool ok = !files[0].empty() && files[0] == files[1] && files[0] == files[2];
    return Verdict{ok, std::to_string(files[0].size()) + " bytes, threads 1/1/8"};
  });

  report(10, "Kallenberg profile of the |z|^-3/2 density", [&] {
    const auto spec = make_power_density(1.0, 1.5, 1.0);
    const double eps = 1e-4;
    const double ratio = kallenberg_b_profile(spec, {eps}).grid[0].ratio;
    const double oracle = 4.0 / 3.0 * std::pow(eps, 1.5) / (eps * eps * std::abs(std::log(eps)));
    const auto profile = kallenberg_b_profile(spec, default_epsilon_grid());
    bool monotone = true;
    for (std::size_t i = 1; i < profile.grid.size(); ++i) {
      monotone = monotone && profile.grid[i].ratio > profile.grid[i - 1].ratio;
    }
    bool zero = true;
    for (const auto& atoms : {std::vector<Atom>{{1.0, 2.0}}, std::vector<Atom>{{0.3, 3.0}, {-0.2, 2.0}, {0.05, 4.0}},
                              std::vector<Atom>{{-0.01, 100.0}, {2.0, 0.5}}}) {
      double smallest = INFINITY;
      for (const auto& a : atoms) {
        smallest = std::min(smallest, std::abs(a.size));
      }
      std::vector<double> grid;
      for (double e : default_epsilon_grid()) {
        if (e <= smallest) {
          grid.push_back(e);
        }
      }
      for (const auto& p : kallenberg_b_profile(make_finite_atomic(atoms), grid).grid) {
        zero = zero && p.ratio == 0.0;
      }
    }
    const bool ok = std::abs(ratio / oracle - 1.0) <= 0.01 && std::abs(ratio / 14.48 - 1.0) <= 0.01 && monotone && zero;
    return Verdict{ok, "ratio " + fmt(ratio) + " vs oracle " + fmt(oracle) + ", monotone " +
                           (monotone ? "yes" : "no") + ", finite-atomic zero " + (zero ? "yes" : "no")};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
