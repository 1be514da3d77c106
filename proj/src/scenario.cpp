#include "levyreg/scenario.hpp"

#include "levyreg/diagnostics.hpp"
#include "levyreg/flow_engine.hpp"
#include "levyreg/marcus.hpp"
#include "levyreg/path_sampler.hpp"
#include "levyreg/rng.hpp"
#include "levyreg/transforms.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace levyreg {
namespace {

using json = nlohmann::json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// JSON cannot hold NaN; non-finite statistics become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Pipeline {
  std::int64_t items = 0;
  std::function<ReplicaResult(std::int64_t)> work;
  std::function<json(const std::vector<ReplicaResult>&)> aggregate;
};

PathSampler make_sampler(const ScenarioConfig& c) {
  return PathSampler(c.triplet(), c.horizon, c.truncation, c.compensate, c.brownian_cells);
}

std::vector<double> collect(const std::vector<ReplicaResult>& rows, const std::function<double(const ReplicaResult&)>& pick) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    if (!r.failed) {
      out.push_back(pick(r));
    }
  }
  return out;
}

double max_metric(const std::vector<ReplicaResult>& rows, std::size_t idx) {
  double worst = 0.0;
  for (const auto& r : rows) {
    if (!r.failed && idx < r.metrics.size()) {
      const double v = r.metrics[idx];
      worst = std::isnan(v) ? std::numeric_limits<double>::infinity() : std::max(worst, v);
    }
  }
  return worst;
}

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double atom_window(const ScenarioConfig& c, const SampleBatch& b) {
  if (c.window > 0.0) {
    return c.window;
  }
  const double w = default_atom_window(b);
  return w > 0.0 ? w : 1e-12 * std::max(1.0, std::abs(b.values.front()));
}

double atom_threshold(const ScenarioConfig& c, const SampleBatch& b) {
  return c.threshold > 0.0 ? c.threshold : default_atom_threshold(b.count);
}

json atom_json(const AtomReport& r) {
  json j{{"present", r.atoms_present}, {"window", r.window}, {"threshold", r.threshold}};
  json cands = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(r.candidates.size(), 5); ++i) {
    cands.push_back({{"location", r.candidates[i].location}, {"mass", r.candidates[i].mass}});
  }
  j["candidates"] = cands;
  return j;
}

json kallenberg_json(const JumpMeasureSpec& spec) {
  const auto profile = kallenberg_b_profile(spec, default_epsilon_grid());
  json grid = json::array();
  for (const auto& e : profile.grid) {
    grid.push_back({{"epsilon", e.epsilon}, {"ratio", num(e.ratio)}});
  }
  return {{"grid", grid}, {"diverging", profile.diverging}, {"condition_a", profile.condition_a}};
}

// Atom at the deterministic skeleton with the no-jump mass.
Pipeline doblin_pipeline(const ScenarioConfig& c) {
  auto sampler = std::make_shared<PathSampler>(make_sampler(c));
  auto a = c.drift_field.scalar();
  const double step = c.effective_step();
  Pipeline p;
  p.items = c.replicas;
  p.work = [=](std::int64_t i) {
    RngStream rng(c.seed, static_cast<std::uint64_t>(i));
    const auto path = sampler->sample(rng);
    const auto sol = solve_random_ode(a, path, c.x0, step);
    return ReplicaResult{sol.terminal_x(), path.terminal(), false, {}, {}};
  };
  p.aggregate = [=](const std::vector<ReplicaResult>& rows) {
    const auto batch = SampleBatch::from(collect(rows, [](const auto& r) { return r.terminal_x; }), "X");
    const double window = atom_window(c, batch);
    const auto report = detect_atoms(batch, window, atom_threshold(c, batch));
    const double skeleton = deterministic_skeleton(a, sampler->drift_rate(), c.x0, c.horizon);
    const double expected = std::exp(-sampler->jump_rate() * c.horizon);
    const double n = static_cast<double>(batch.count);
    const double se = std::sqrt(expected * (1.0 - expected) / n);
    double location = kNaN;
    double mass = 0.0;
    if (!report.candidates.empty()) {
      location = report.candidates.front().location;
      mass = report.candidates.front().mass;
    }
    const bool location_ok = std::abs(location - skeleton) <= window;
    const bool mass_ok = std::abs(mass - expected) <= 3.0 * se;
    const auto spec = c.measure.build();
    return json{{"atom", atom_json(report)},
                {"skeleton", skeleton},
                {"atom_location", num(location)},
                {"atom_mass", mass},
                {"expected_mass", expected},
                {"standard_error", se},
                {"location_ok", location_ok},
                {"mass_ok", mass_ok},
                {"doblin_predicts_atoms", doblin_predicts_atoms(spec)},
                {"kallenberg", kallenberg_json(spec)},
                {"pass", report.atoms_present && location_ok && mass_ok}};
  };
  return p;
}

ScalarField random_field(RngStream& rng) {
  const int kind = static_cast<int>(rng.uniform() * 3.0);
  if (kind == 0) {
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    return make_catalogue_field("logistic", {{"amplitude", sign * rng.uniform(0.5, 2.0)},
                                             {"slope", rng.uniform(0.5, 3.0)},
                                             {"center", rng.uniform(-1.0, 1.0)}});
  }
  if (kind == 1) {
    return make_catalogue_field("sine", {{"amplitude", rng.uniform(0.3, 1.5)},
                                         {"frequency", rng.uniform(0.5, 3.0)},
                                         {"phase", rng.uniform(0.0, 2.0 * std::numbers::pi)}});
  }
  return make_catalogue_field("affine", {{"intercept", rng.uniform(-1.0, 1.0)}, {"slope", rng.uniform(-2.0, 2.0)}});
}

// Derivative in the marked jump time and in x0, against re-simulation.
Pipeline derivative_pipeline(const ScenarioConfig& c) {
  auto sampler = std::make_shared<PathSampler>(make_sampler(c));
  const double step = c.effective_step();
  Pipeline p;
  p.items = c.replicas;
  p.work = [=](std::int64_t i) {
    RngStream rng(c.seed, static_cast<std::uint64_t>(i));
    const auto a = random_field(rng);
    const double x0 = rng.uniform(-1.0, 1.0);
    constexpr double kGap = 1e-3;
    // Path with at least one marked jump well separated from its neighbours.
    LevyPath path;
    std::vector<std::size_t> eligible;
    for (int attempt = 0; attempt < 64 && eligible.empty(); ++attempt) {
      path = sampler->sample(rng);
      for (std::size_t k = 0; k < path.jumps.size(); ++k) {
        const double t = path.jumps[k].time;
        const double before = k == 0 ? 0.0 : path.jumps[k - 1].time;
        const double after = k + 1 < path.jumps.size() ? path.jumps[k + 1].time : path.horizon;
        const double s = std::abs(path.jumps[k].size);
        if (t - before > kGap && after - t > kGap && s >= c.eta && s <= c.upper) {
          eligible.push_back(k);
        }
      }
    }
    if (eligible.empty()) {
      throw std::runtime_error("no path with an isolated marked jump after 64 draws");
    }
    const std::size_t k = eligible[std::min(eligible.size() - 1,
                                            static_cast<std::size_t>(rng.uniform() * static_cast<double>(eligible.size())))];
    const auto sol = solve_random_ode(a, path, x0, step);
    PathDecomposition decomp;
    decomp.T = path.jumps[k].time;
    decomp.marked_size = path.jumps[k].size;
    const double analytic = jump_time_derivative(a, sol, decomp, path.horizon);

    auto y_shifted = [&](double h) { return solve_random_ode(a, shift_jump_time(path, k, h), x0, step).terminal; };
    const double y0 = sol.terminal;
    auto richardson = [](double fine, double coarse) { return (10.0 * fine - coarse) / 9.0; };
    const double right = richardson((y_shifted(1e-5) - y0) / 1e-5, (y_shifted(1e-4) - y0) / 1e-4);
    const double left = richardson((y0 - y_shifted(-1e-5)) / 1e-5, (y0 - y_shifted(-1e-4)) / 1e-4);

    const double h = 1e-5;
    const double central = (solve_random_ode(a, path, x0 + h, step).terminal_x() -
                            solve_random_ode(a, path, x0 - h, step).terminal_x()) /
                           (2.0 * h);
    const double exponential = flow_derivative_exponential(a, sol);
    const double variational = flow_derivative_variational(a, path, x0, step);
    return ReplicaResult{sol.terminal_x(),
                         path.terminal(),
                         false,
                         {},
                         {relative_gap(analytic, right), relative_gap(analytic, left),
                          relative_gap(exponential, central), relative_gap(exponential, variational), analytic}};
  };
  p.aggregate = [](const std::vector<ReplicaResult>& rows) {
    const double right = max_metric(rows, 0);
    const double left = max_metric(rows, 1);
    const double fd = max_metric(rows, 2);
    const double var = max_metric(rows, 3);
    const bool jump_ok = right <= 1e-4 && left <= 1e-4;
    const bool flow_ok = fd <= 1e-5 && var <= 1e-8;
    return json{{"jump_time_derivative", {{"max_rel_err_right", num(right)}, {"max_rel_err_left", num(left)},
                                          {"tolerance", 1e-4}, {"pass", jump_ok}}},
                {"flow_derivative", {{"max_rel_err_central_difference", num(fd)}, {"tolerance_central", 1e-5},
                                     {"max_rel_err_variational", num(var)}, {"tolerance_variational", 1e-8},
                                     {"pass", flow_ok}}},
                {"pass", jump_ok && flow_ok}};
  };
  return p;
}

// Lattice of the driver vs that of the solution. `flat` selects the
// counterexample verdict (constant drift keeps the lattice).
Pipeline lattice_pipeline(const ScenarioConfig& c, bool flat) {
  auto sampler = std::make_shared<PathSampler>(make_sampler(c));
  auto a = c.drift_field.scalar();
  const double step = c.effective_step();
  Pipeline p;
  p.items = c.replicas;
  p.work = [=](std::int64_t i) {
    RngStream rng(c.seed, static_cast<std::uint64_t>(i));
    const auto path = sampler->sample(rng);
    const auto sol = solve_random_ode(a, path, c.x0, step);
    return ReplicaResult{sol.terminal_x(), path.terminal(), false, {}, {}};
  };
  p.aggregate = [=](const std::vector<ReplicaResult>& rows) {
    const double shift = c.x0 + a(c.x0) * c.horizon;
    const auto xs = SampleBatch::from(collect(rows, [](const auto& r) { return r.terminal_x; }), "X");
    const auto zs = SampleBatch::from(collect(rows, [](const auto& r) { return r.terminal_z; }), "Z");
    const auto shifted =
        SampleBatch::from(collect(rows, [shift](const auto& r) { return r.terminal_x - shift; }), "X-shift");
    const double lz = lattice_concentration(zs, c.spacing, c.halfwidth);
    const double lx = lattice_concentration(xs, c.spacing, c.halfwidth);
    const double ls = lattice_concentration_at(shifted, c.spacing, c.halfwidth, 0.0);
    json j{{"spacing", c.spacing}, {"halfwidth", c.halfwidth}, {"lattice_z", lz}, {"lattice_x", lx},
           {"shift", shift}, {"lattice_x_minus_shift", ls}};
    if (xs.count >= 1000) {
      const auto report = detect_atoms(xs, atom_window(c, xs), atom_threshold(c, xs));
      j["atoms_x"] = atom_json(report);
      if (flat) {
        j["pass"] = ls >= 0.95;
      } else {
        j["pass"] = lz >= 0.999 && lx <= 0.01 && !report.atoms_present;
      }
    } else {
      j["pass"] = false;
      j["note"] = "atom detection needs at least 1000 replicas";
    }
    j["kallenberg"] = kallenberg_json(c.measure.build());
    return j;
  };
  return p;
}

constexpr std::int64_t kMonotonePaths = 100;
constexpr int kMonotoneGrid = 64;

// Resampling the first marked jump time; Y monotone in that time.
Pipeline stratification_pipeline(const ScenarioConfig& c) {
  auto sampler = std::make_shared<PathSampler>(make_sampler(c));
  auto a = c.drift_field.scalar();
  const double step = c.effective_step();
  // Monotonicity is checked on the leading paths of the first repetition.
  const std::int64_t probe_items = std::min<std::int64_t>(c.replicas, 2 * kMonotonePaths);
  Pipeline p;
  p.items = c.replicas * c.repetitions;
  p.work = [=](std::int64_t i) {
    RngStream rng(c.seed, static_cast<std::uint64_t>(i));
    const auto path = sampler->sample(rng);
    const auto sol = solve_random_ode(a, path, c.x0, step);
    double resampled = sol.terminal_x();
    double monotone = -1.0;  // not checked
    try {
      const auto decomp = decompose_first_jump(path, c.eta, c.upper);
      auto fresh = rng.substream(1);
      resampled = solve_random_ode(a, resample_first_jump_time(decomp, fresh), c.x0, step).terminal_x();
      if (i < probe_items) {
        int sign = 0;
        bool strict = true;
        double prev = kNaN;
        for (int j = 0; j < kMonotoneGrid; ++j) {
          const double t = decomp.T2 * (j + 0.5) / kMonotoneGrid;
          const double y = solve_random_ode(a, place_marked_jump(decomp, t), c.x0, step).terminal;
          if (j > 0) {
            const int s = y > prev ? 1 : (y < prev ? -1 : 0);
            strict = strict && s != 0 && (sign == 0 || s == sign);
            sign = s;
          }
          prev = y;
        }
        monotone = strict ? 1.0 : 0.0;
      }
    } catch (const NotEnoughMarkedJumps&) {
      // Off the stratified event the law is untouched; keep X as is.
    }
    return ReplicaResult{sol.terminal_x(), path.terminal(), false, {}, {resampled, monotone}};
  };
  p.aggregate = [=](const std::vector<ReplicaResult>& rows) {
    int ks_pass = 0;
    int ks_run = 0;
    double worst = 0.0;
    for (std::int64_t r = 0; r < c.repetitions; ++r) {
      std::vector<double> orig;
      std::vector<double> res;
      for (std::int64_t i = r * c.replicas; i < (r + 1) * c.replicas; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.failed) {
          orig.push_back(row.terminal_x);
          res.push_back(row.metrics[0]);
        }
      }
      if (orig.size() < 1000) {
        continue;
      }
      const auto ks = two_sample_ks(SampleBatch::from(orig), SampleBatch::from(res));
      ++ks_run;
      ks_pass += ks.below_critical() ? 1 : 0;
      worst = std::max(worst, ks.statistic / ks.critical_1pct);
    }
    int checked = 0;
    int monotone = 0;
    for (const auto& row : rows) {
      if (checked == kMonotonePaths) {
        break;
      }
      if (!row.failed && row.metrics.size() > 1 && row.metrics[1] >= 0.0) {
        ++checked;
        monotone += row.metrics[1] > 0.0 ? 1 : 0;
      }
    }
    const int needed = static_cast<int>(std::ceil(0.95 * static_cast<double>(c.repetitions)));
    const bool ks_ok = ks_run == c.repetitions && ks_pass >= needed;
    const bool mono_ok = checked == kMonotonePaths && monotone == checked;
    return json{{"ks", {{"repetitions", c.repetitions}, {"evaluated", ks_run}, {"below_critical", ks_pass},
                        {"required", needed}, {"worst_statistic_over_critical", worst}, {"pass", ks_ok}}},
                {"monotone_in_T", {{"paths", checked}, {"strictly_monotone", monotone}, {"grid", kMonotoneGrid},
                                   {"pass", mono_ok}}},
                {"pass", ks_ok && mono_ok}};
  };
  return p;
}

DiffusionField random_proportional_sigma(RngStream& rng) {
  const int kind = static_cast<int>(rng.uniform() * 3.0);
  if (kind == 0) {
    return make_catalogue_diffusion("arctan-diffusion", {{"scale", rng.uniform(0.2, 0.5)}}, std::nullopt);
  }
  if (kind == 1) {
    return make_catalogue_diffusion("sine", {{"offset", 1.0}, {"amplitude", rng.uniform(0.1, 0.6)}}, std::nullopt);
  }
  return make_catalogue_diffusion("affine", {{"intercept", 1.0}, {"slope", rng.uniform(-0.4, 0.4)}}, std::nullopt);
}

// Marcus reductions: unit diffusion, closed form, conjugacy, chain rule.
Pipeline marcus_pipeline(const ScenarioConfig& c) {
  auto sampler = std::make_shared<PathSampler>(make_sampler(c));
  auto a = c.drift_field.scalar();
  auto sigma = c.diffusion_field.diffusion();
  const double step = c.effective_step();
  Pipeline p;
  p.items = c.replicas;
  p.work = [=](std::int64_t i) {
    RngStream rng(c.seed, static_cast<std::uint64_t>(i));
    const double x0 = c.x0 + rng.uniform(-0.5, 0.5);
    const auto path = sampler->sample(rng);

    const DiffusionField unit = make_catalogue_diffusion("constant", {{"c", 1.0}}, 1.0);
    const double reduction = std::abs(marcus_solve(a, unit, path, x0, step).terminal -
                                      solve_random_ode(a, path, x0, step).terminal_x());

    const auto prop_sigma = random_proportional_sigma(rng);
    const double k = rng.uniform(-1.0, 1.0);
    const double closed = proportional_solution(prop_sigma, k, x0, path);
    const double closed_err =
        std::abs(closed - marcus_solve(proportional_field(prop_sigma, k), prop_sigma, path, x0, step).terminal);

    const auto traj = marcus_solve(a, sigma, path, x0, step);
    const auto [lo, hi] = std::minmax_element(traj.x.begin(), traj.x.end());
    const auto [llo, lhi] = std::minmax_element(traj.x_left.begin(), traj.x_left.end());
    const Interval range{std::min(*lo, *llo) - 1.0, std::max(*hi, *lhi) + 1.0};
    const auto f = unit_diffusion_transform(sigma, x0, range);
    const auto b = reduced_drift(a, sigma, f);
    const double conj_err = std::abs(f.forward(traj.terminal) - solve_random_ode(b, path, 0.0, step).terminal_x());

    // f = arctan against sigma = s (1 + x^2): f' sigma = s.
    const double s = 0.5;
    const auto quad = make_catalogue_diffusion("arctan-diffusion", {{"scale", s}}, s);
    const ScalarField wavy{[](double x) { return 0.2 * (1.0 + x * x) * std::sin(x); },
                           [](double x) { return 0.2 * (2.0 * x * std::sin(x) + (1.0 + x * x) * std::cos(x)); },
                           std::nullopt, std::nullopt};
    const ScalarField arctan{[](double x) { return std::atan(x); }, [](double x) { return 1.0 / (1.0 + x * x); },
                             std::nullopt, std::nullopt};
    const double chain_arctan =
        chain_rule_residual(arctan, wavy, quad, marcus_solve(wavy, quad, path, x0, step), s, path);

    // f = log against sigma = x with zero drift.
    const auto ident = make_catalogue_diffusion("linear", {{"slope", 1.0}}, std::nullopt);
    const auto zero = make_catalogue_field("constant", {{"c", 0.0}});
    const ScalarField logf{[](double x) { return std::log(x); }, [](double x) { return 1.0 / x; }, std::nullopt,
                           std::nullopt};
    const double xp = std::exp(x0);
    const double chain_log = chain_rule_residual(logf, zero, ident, marcus_solve(zero, ident, path, xp, step), 1.0, path);

    return ReplicaResult{traj.terminal, path.terminal(), false, {},
                         {reduction, closed_err, conj_err, chain_arctan, chain_log}};
  };
  p.aggregate = [=](const std::vector<ReplicaResult>& rows) {
    const double reduction = max_metric(rows, 0);
    const double closed = max_metric(rows, 1);
    const double conj = max_metric(rows, 2);
    const double chain = std::max(max_metric(rows, 3), max_metric(rows, 4));
    double zmax = 0.0;
    for (const auto& atom : atoms_above(c.measure.build(), c.truncation)) {
      zmax = std::max(zmax, std::abs(atom.size));
    }
    zmax = zmax > 0.0 ? zmax : 0.2;
    const Interval yr{c.x0 - 1.0, c.x0 + 1.0};
    const double coarse = fit_remainder_constant(sigma, yr, zmax, 21, 21);
    const double fine = fit_remainder_constant(sigma, yr, zmax, 201, 201);
    const bool k_ok = std::abs(coarse / fine - 1.0) <= 0.1;
    json j{{"unit_diffusion_reduction", {{"max_abs_err", num(reduction)}, {"tolerance", 1e-10}, {"pass", reduction <= 1e-10}}},
           {"proportional_closed_form", {{"max_abs_err", num(closed)}, {"tolerance", 1e-6}, {"pass", closed <= 1e-6}}},
           {"conjugacy", {{"max_abs_err", num(conj)}, {"tolerance", 1e-5}, {"pass", conj <= 1e-5}}},
           {"chain_rule", {{"max_residual", num(chain)}, {"tolerance", 1e-5}, {"pass", chain <= 1e-5}}},
           {"remainder_constant", {{"coarse_21", coarse}, {"fine_201", fine}, {"pass", k_ok}}}};
    j["pass"] = reduction <= 1e-10 && closed <= 1e-6 && conj <= 1e-5 && chain <= 1e-5 && k_ok;
    return j;
  };
  return p;
}

// Doss-Sussman and Marcus constructions on independent streams.
Pipeline doss_sussman_pipeline(const ScenarioConfig& c) {
  auto sampler = std::make_shared<PathSampler>(make_sampler(c));
  auto a = c.drift_field.scalar();
  auto sigma = c.diffusion_field.diffusion();
  const double step = c.effective_step();
  Pipeline p;
  p.items = c.replicas;
  p.work = [=](std::int64_t i) {
    RngStream rng(c.seed, static_cast<std::uint64_t>(i));
    auto other = rng.substream(2);
    const auto path = sampler->sample(rng);
    const auto marcus = marcus_solve(a, sigma, path, c.x0, step);
    const double ds = doss_sussman_solve(a, sigma, sampler->sample(other), c.x0, step);
    return ReplicaResult{marcus.terminal, path.terminal(), false, {}, {ds}};
  };
  p.aggregate = [](const std::vector<ReplicaResult>& rows) {
    const auto m = SampleBatch::from(collect(rows, [](const auto& r) { return r.terminal_x; }), "marcus");
    const auto d = SampleBatch::from(collect(rows, [](const auto& r) { return r.metrics[0]; }), "doss-sussman");
    if (m.count < 1000) {
      return json{{"pass", false}, {"note", "KS test needs at least 1000 replicas"}};
    }
    const auto ks = two_sample_ks(m, d);
    return json{{"ks", {{"statistic", ks.statistic}, {"critical_1pct", ks.critical_1pct}, {"pass", ks.below_critical()}}},
                {"pass", ks.below_critical()}};
  };
  return p;
}

Pipeline make_pipeline(const ScenarioConfig& c) {
  const auto& id = c.scenario;
  if (id == "S1") {
    return doblin_pipeline(c);
  }
  if (id == "S2") {
    return derivative_pipeline(c);
  }
  if (id == "S3" || id == "S4") {
    return lattice_pipeline(c, id == "S4");
  }
  if (id == "S5") {
    return stratification_pipeline(c);
  }
  if (id == "S6") {
    return marcus_pipeline(c);
  }
  if (id == "S7") {
    return doss_sussman_pipeline(c);
  }
  throw ConfigError("unknown scenario id '" + id + "'");
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
}

std::string density_plot_script() {
  return "# Kernel density estimate of the terminal value.\n"
         "set datafile separator ','\n"
         "set key off\n"
         "set xlabel 'x'\n"
         "set ylabel 'density'\n"
         "plot '../kde.csv' skip 1 using 1:2 with lines lw 2\n";
}

std::string samples_plot_script() {
  return "# Terminal values of X against the driver Z per replica.\n"
         "set datafile separator ','\n"
         "set key off\n"
         "set xlabel 'Z'\n"
         "set ylabel 'X'\n"
         "plot '../samples.csv' skip 1 using 3:($4 == 0 ? $2 : NaN) with dots\n";
}

}  // namespace

double RunSummary::failure_fraction() const {
  return replicas > 0 ? static_cast<double>(failures) / static_cast<double>(replicas) : 0.0;
}

void to_json(json& j, const RunSummary& s) {
  j = json{{"scenario", s.scenario},   {"seed", s.seed},
           {"replicas", s.replicas},   {"failures", s.failures},
           {"failed_replicas", s.failed_replicas}, {"wall_time", s.wall_time},
           {"version", s.version},     {"diagnostics", s.diagnostics}};
}

void from_json(const json& j, RunSummary& s) {
  j.at("scenario").get_to(s.scenario);
  j.at("seed").get_to(s.seed);
  j.at("replicas").get_to(s.replicas);
  j.at("failures").get_to(s.failures);
  j.at("failed_replicas").get_to(s.failed_replicas);
  j.at("wall_time").get_to(s.wall_time);
  j.at("version").get_to(s.version);
  s.diagnostics = j.at("diagnostics");
}

std::vector<ReplicaResult> run_parallel(std::int64_t count, int threads,
                                        const std::function<ReplicaResult(std::int64_t)>& work) {
  std::vector<ReplicaResult> out(static_cast<std::size_t>(count));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t i = next++; i < count; i = next++) {
      auto& slot = out[static_cast<std::size_t>(i)];
      try {
        slot = work(i);
      } catch (const std::exception& e) {
        slot = ReplicaResult{kNaN, kNaN, true, e.what(), {}};
      }
    }
  };
  const int n = std::max(1, threads);
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& t : pool) {
    t.join();
  }
  return out;
}

RunOutput execute_scenario(const ScenarioConfig& config, int threads) {
  validate_config(config);
  if (threads < 1) {
    throw ConfigError("threads: must be >= 1 (got " + std::to_string(threads) + ")");
  }
  const auto start = std::chrono::steady_clock::now();
  auto pipeline = make_pipeline(config);
  RunOutput out;
  out.replicas = run_parallel(pipeline.items, threads, pipeline.work);
  auto& s = out.summary;
  s.scenario = config.scenario;
  s.seed = config.seed;
  s.replicas = pipeline.items;
  for (std::size_t i = 0; i < out.replicas.size(); ++i) {
    if (out.replicas[i].failed) {
      ++s.failures;
      s.failed_replicas.push_back(static_cast<std::int64_t>(i));
    }
  }
  try {
    s.diagnostics = pipeline.aggregate(out.replicas);
  } catch (const std::exception& e) {
    s.diagnostics = json{{"pass", false}, {"error", e.what()}};
  }
  if (!out.replicas.empty() && s.failures > 0) {
    const auto first = static_cast<std::size_t>(s.failed_replicas.front());
    s.diagnostics["first_failure"] = out.replicas[first].error;
  }
  s.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void write_samples_csv(const std::vector<ReplicaResult>& rows, std::ostream& os) {
  os << "replica,terminal_x,terminal_z,failed\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << i << ',' << shortest(rows[i].terminal_x) << ',' << shortest(rows[i].terminal_z) << ','
       << (rows[i].failed ? 1 : 0) << '\n';
  }
}

RunSummary run_scenario(const ScenarioConfig& config, int threads) {
  validate_config(config);
  namespace fs = std::filesystem;
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir / "plots", ec);
  if (ec) {
    throw IoError("cannot create " + (dir / "plots").string() + ": " + ec.message());
  }
  auto out = execute_scenario(config, threads);

  std::ostringstream samples;
  write_samples_csv(out.replicas, samples);
  write_file(dir / "samples.csv", samples.str());

  std::vector<double> xs;
  for (const auto& r : out.replicas) {
    if (!r.failed) {
      xs.push_back(r.terminal_x);
    }
  }
  if (xs.size() >= 1000) {
    const auto curve = kde(SampleBatch::from(std::move(xs)));
    if (!curve.degenerate) {
      std::ostringstream k;
      write_density_csv(curve, k);
      write_file(dir / "kde.csv", k.str());
      write_file(dir / "plots" / "terminal_density.gp", density_plot_script());
    }
  }
  write_file(dir / "plots" / "terminal_samples.gp", samples_plot_script());
  write_file(dir / "summary.json", json(out.summary).dump(2) + "\n");
  return out.summary;
}

std::string list_scenarios() {
  std::ostringstream os;
  for (const auto& s : scenario_catalogue()) {
    os << s.id << "  " << s.description << "  [" << s.anchor << "]\n";
  }
  return os.str();
}

}  // namespace levyreg
