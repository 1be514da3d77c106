#include "levyreg/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace levyreg {
namespace {

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

std::string at_line(int line, const std::string& msg) { return "line " + std::to_string(line) + ": " + msg; }

double to_double(const Entry& e) {
  double v = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  if (!e.value.empty() && *first == '+') {
    ++first;
  }
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
    throw ConfigError(at_line(e.line, e.key + ": expected a finite number, got '" + e.value + "'"));
  }
  return v;
}

template <class Int>
Int to_int(const Entry& e) {
  Int v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ConfigError(at_line(e.line, e.key + ": expected an integer, got '" + e.value + "'"));
  }
  return v;
}

bool to_bool(const Entry& e) {
  if (e.value == "true" || e.value == "1") {
    return true;
  }
  if (e.value == "false" || e.value == "0") {
    return false;
  }
  throw ConfigError(at_line(e.line, e.key + ": expected true or false, got '" + e.value + "'"));
}

using Section = std::vector<Entry>;

[[noreturn]] void unknown_key(const std::string& section, const Entry& e) {
  throw ConfigError(at_line(e.line, "unknown key '" + e.key + "' in [" + section + "]"));
}

void apply_field(const std::string& section, const Section& entries, FieldConfig& field) {
  for (const auto& e : entries) {
    if (e.key == "field") {
      if (!catalogue_defaults().contains(e.value)) {
        throw ConfigError(at_line(e.line, "field: unknown catalogue field '" + e.value + "'"));
      }
      if (e.value != field.name) {
        field = FieldConfig{e.value, {}, std::nullopt};
      }
    }
  }
  const auto& known = catalogue_defaults().at(field.name);
  for (const auto& e : entries) {
    if (e.key == "field") {
      continue;
    }
    if (e.key == "min_abs") {
      field.min_abs = to_double(e);
    } else if (known.contains(e.key)) {
      field.params[e.key] = to_double(e);
    } else {
      throw ConfigError(at_line(e.line, "unknown key '" + e.key + "' in [" + section + "] for field '" +
                                            field.name + "'"));
    }
  }
}

const char* kind_name(MeasureConfig::Kind k) {
  switch (k) {
    case MeasureConfig::Kind::atoms:
      return "atoms";
    case MeasureConfig::Kind::family:
      return "family";
    case MeasureConfig::Kind::density:
      return "density";
  }
  return "atoms";
}

void range_error(const std::string& key, const std::string& rule, double got) {
  throw ConfigError(key + ": must be " + rule + " (got " + shortest(got) + ")");
}

void check_field_config(const std::string& section, const FieldConfig& f) {
  auto it = catalogue_defaults().find(f.name);
  if (it == catalogue_defaults().end()) {
    throw ConfigError("field: unknown catalogue field '" + f.name + "' in [" + section + "]");
  }
  for (const auto& [k, v] : f.params) {
    if (!it->second.contains(k)) {
      throw ConfigError(k + ": not a parameter of field '" + f.name + "'");
    }
    if (!std::isfinite(v)) {
      range_error(k, "finite", v);
    }
  }
  if (f.min_abs && !(*f.min_abs >= 0.0)) {
    range_error("min_abs", ">= 0", *f.min_abs);
  }
}

}  // namespace

JumpMeasureSpec MeasureConfig::build() const {
  switch (kind) {
    case Kind::family:
      return make_geometric_family(family.size_scale, family.size_ratio, family.rate_scale, family.rate_ratio,
                                   family.levels, family.idealized_infinite);
    case Kind::density: {
      const double s = density.scale;
      const double e = density.exponent;
      return make_density([s, e](double z) { return s * std::pow(std::abs(z), -e); }, density.negative_extent,
                          density.positive_extent);
    }
    case Kind::atoms:
      break;
  }
  return make_finite_atomic(atoms);
}

ScalarField FieldConfig::scalar() const { return make_catalogue_field(name, params); }

DiffusionField FieldConfig::diffusion() const { return make_catalogue_diffusion(name, params, min_abs); }

LevyTriplet ScenarioConfig::triplet() const { return {drift, brownian_variance, measure.build()}; }

double ScenarioConfig::effective_step() const { return step > 0.0 ? step : std::ldexp(horizon, -12); }

const std::vector<ScenarioInfo>& scenario_catalogue() {
  static const std::vector<ScenarioInfo> catalogue = {
      {"S1", "Doeblin atom: finite jump measure, monotone drift; atom at the skeleton with mass exp(-rate t)",
       "Theorem A (finite measure gives an atom)"},
      {"S2", "jump-time derivative formula vs finite-difference re-simulation on random fields",
       "Proposition 2, Lemma 1"},
      {"S3", "regularization: dyadic family, increasing drift; Z on a lattice, X not", "Theorem A"},
      {"S4", "flat-drift counterexample: constant drift keeps the lattice of the driver",
       "Theorem A (necessity of a non-flat drift)"},
      {"S5", "stratification: resampling the first marked jump time preserves the law of X",
       "Theorem A (stratification argument)"},
      {"S6", "Marcus reductions: conjugacy, closed form, chain rule, remainder bound", "Proposition 3"},
      {"S7", "Doss-Sussman construction vs Marcus integration with a Brownian part", "Proposition 4"},
  };
  return catalogue;
}

bool is_known_scenario(const std::string& id) {
  const auto& c = scenario_catalogue();
  return std::any_of(c.begin(), c.end(), [&](const ScenarioInfo& s) { return s.id == id; });
}

ScenarioConfig default_config(const std::string& id) {
  if (!is_known_scenario(id)) {
    throw ConfigError("unknown scenario id '" + id + "'");
  }
  ScenarioConfig c;
  c.scenario = id;
  c.drift_field = {"linear", {{"slope", -1.0}}, std::nullopt};
  c.diffusion_field = {"constant", {{"c", 1.0}}, 1.0};
  if (id == "S1") {
    c.measure.atoms = {{1.0, 2.0}};
    c.x0 = 1.0;
    c.replicas = 100000;
  } else if (id == "S2") {
    c.measure.atoms = {{0.3, 3.0}, {-0.2, 2.0}, {0.05, 4.0}};
    c.drift = 0.2;
    c.drift_field = {"logistic", {}, std::nullopt};
    c.replicas = 100;
    c.eta = 0.01;
    c.upper = 1.0;
  } else if (id == "S3" || id == "S4") {
    c.measure.kind = MeasureConfig::Kind::family;
    c.truncation = 1e-4;
    c.replicas = 10000;
    c.drift_field = id == "S3" ? FieldConfig{"logistic", {{"slope", 2.0}}, std::nullopt}
                               : FieldConfig{"constant", {{"c", 0.5}}, std::nullopt};
  } else if (id == "S5") {
    c.measure.atoms = {{0.05, 20.0}, {0.5, 3.0}, {-0.3, 2.0}};
    c.drift_field = {"logistic", {{"slope", 1.5}}, std::nullopt};
    c.replicas = 1000;
    c.repetitions = 100;
    c.step = 0x1p-8;
  } else if (id == "S6") {
    c.measure.atoms = {{0.2, 2.0}, {-0.15, 2.0}};
    c.drift = 0.1;
    c.replicas = 50;
    c.drift_field = {"sine", {{"amplitude", 0.3}}, std::nullopt};
    c.diffusion_field = {"arctan-diffusion", {{"scale", 0.5}}, 0.5};
    c.step = 0x1p-10;
  } else if (id == "S7") {
    c.measure.atoms = {{0.3, 1.0}, {-0.2, 1.0}};
    c.drift = 0.1;
    c.brownian_variance = 0.25;
    c.replicas = 10000;
    c.brownian_cells = 256;
    c.step = 0x1p-8;
    c.drift_field = {"affine", {{"intercept", 0.2}, {"slope", -0.5}}, std::nullopt};
    c.diffusion_field = {"sine", {{"offset", 1.0}, {"amplitude", 0.5}}, 0.5};
  }
  return c;
}

ScenarioConfig parse_config(std::string_view text) {
  // Pass 1: syntax, sections, duplicates.
  std::vector<std::string> order;
  std::map<std::string, Section> sections;
  std::map<std::string, std::map<std::string, int>> seen;
  std::string current;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) {
      raw.resize(hash);
    }
    const std::string line = trim(raw);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError(at_line(line_no, "malformed section header '" + line + "'"));
      }
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!sections.contains(current)) {
        order.push_back(current);
        sections[current];
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(at_line(line_no, "expected 'key = value', got '" + line + "'"));
    }
    Entry e{trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)), line_no};
    if (e.key.empty() || e.value.empty()) {
      throw ConfigError(at_line(line_no, "empty key or value"));
    }
    if (auto prev = seen[current].find(e.key); prev != seen[current].end()) {
      throw ConfigError("duplicate key '" + e.key + "' on lines " + std::to_string(prev->second) + " and " +
                        std::to_string(line_no));
    }
    seen[current][e.key] = line_no;
    if (!sections.contains(current)) {
      order.push_back(current);
    }
    sections[current].push_back(std::move(e));
  }

  // Scenario id: top-level `scenario = ...` or [scenario] id = ...
  std::optional<Entry> id_entry;
  for (const auto& e : sections[""]) {
    if (e.key != "scenario") {
      unknown_key("top level", e);
    }
    id_entry = e;
  }
  if (sections.contains("scenario")) {
    for (const auto& e : sections["scenario"]) {
      if (e.key != "id") {
        unknown_key("scenario", e);
      }
      if (id_entry) {
        throw ConfigError("duplicate key 'scenario' on lines " + std::to_string(id_entry->line) + " and " +
                          std::to_string(e.line));
      }
      id_entry = e;
    }
  }
  if (!id_entry) {
    throw ConfigError("missing scenario id (scenario = S1..S7)");
  }
  if (!is_known_scenario(id_entry->value)) {
    throw ConfigError(at_line(id_entry->line, "unknown scenario id '" + id_entry->value + "'"));
  }
  ScenarioConfig c = default_config(id_entry->value);

  // Measure: explicit kind, or inferred from the subsections present.
  std::optional<MeasureConfig::Kind> kind;
  auto want_kind = [&](MeasureConfig::Kind k, int line) {
    if (kind && *kind != k) {
      throw ConfigError(at_line(line, std::string("measure section conflicts with kind '") + kind_name(*kind) + "'"));
    }
    kind = k;
  };
  if (sections.contains("measure")) {
    for (const auto& e : sections["measure"]) {
      if (e.key != "kind") {
        unknown_key("measure", e);
      }
      if (e.value == "atoms") {
        want_kind(MeasureConfig::Kind::atoms, e.line);
      } else if (e.value == "family") {
        want_kind(MeasureConfig::Kind::family, e.line);
      } else if (e.value == "density") {
        want_kind(MeasureConfig::Kind::density, e.line);
      } else {
        throw ConfigError(at_line(e.line, "kind: expected atoms, family or density"));
      }
    }
  }
  std::map<long, Atom> atoms;
  for (const auto& name : order) {
    const auto& entries = sections[name];
    const int first_line = entries.empty() ? 0 : entries.front().line;
    if (name.empty() || name == "scenario" || name == "measure") {
      continue;
    }
    if (name.rfind("measure.atom.", 0) == 0) {
      const std::string idx = name.substr(13);
      long k = 0;
      auto res = std::from_chars(idx.data(), idx.data() + idx.size(), k);
      if (res.ec != std::errc() || res.ptr != idx.data() + idx.size() || k < 1) {
        throw ConfigError("unknown section [" + name + "]: atom index must be a positive integer");
      }
      want_kind(MeasureConfig::Kind::atoms, first_line);
      Atom a{0.0, -1.0};
      bool has_size = false;
      for (const auto& e : entries) {
        if (e.key == "size") {
          a.size = to_double(e);
          has_size = true;
        } else if (e.key == "rate") {
          a.rate = to_double(e);
        } else {
          unknown_key(name, e);
        }
      }
      if (!has_size || a.rate < 0.0) {
        throw ConfigError("[" + name + "] needs both size and rate");
      }
      atoms[k] = a;
    } else if (name == "measure.family") {
      want_kind(MeasureConfig::Kind::family, first_line);
      for (const auto& e : entries) {
        auto& f = c.measure.family;
        if (e.key == "levels") {
          f.levels = to_int<int>(e);
        } else if (e.key == "size_scale") {
          f.size_scale = to_double(e);
        } else if (e.key == "size_ratio") {
          f.size_ratio = to_double(e);
        } else if (e.key == "rate_scale") {
          f.rate_scale = to_double(e);
        } else if (e.key == "rate_ratio") {
          f.rate_ratio = to_double(e);
        } else if (e.key == "idealized_infinite") {
          f.idealized_infinite = to_bool(e);
        } else {
          unknown_key(name, e);
        }
      }
    } else if (name == "measure.density") {
      want_kind(MeasureConfig::Kind::density, first_line);
      for (const auto& e : entries) {
        auto& d = c.measure.density;
        if (e.key == "scale") {
          d.scale = to_double(e);
        } else if (e.key == "exponent") {
          d.exponent = to_double(e);
        } else if (e.key == "positive_extent") {
          d.positive_extent = to_double(e);
        } else if (e.key == "negative_extent") {
          d.negative_extent = to_double(e);
        } else {
          unknown_key(name, e);
        }
      }
    } else if (name == "triplet") {
      for (const auto& e : entries) {
        if (e.key == "drift") {
          c.drift = to_double(e);
        } else if (e.key == "brownian_variance") {
          c.brownian_variance = to_double(e);
        } else {
          unknown_key(name, e);
        }
      }
    } else if (name == "drift") {
      apply_field(name, entries, c.drift_field);
    } else if (name == "diffusion") {
      apply_field(name, entries, c.diffusion_field);
    } else if (name == "run") {
      for (const auto& e : entries) {
        if (e.key == "x0") {
          c.x0 = to_double(e);
        } else if (e.key == "horizon") {
          c.horizon = to_double(e);
        } else if (e.key == "truncation") {
          c.truncation = to_double(e);
        } else if (e.key == "compensate") {
          c.compensate = to_bool(e);
        } else if (e.key == "replicas") {
          c.replicas = to_int<std::int64_t>(e);
        } else if (e.key == "step") {
          c.step = to_double(e);
        } else if (e.key == "seed") {
          if (!e.value.empty() && e.value.front() == '-') {
            throw ConfigError(at_line(e.line, "seed: must be >= 0 (got " + e.value + ")"));
          }
          c.seed = to_int<std::uint64_t>(e);
        } else if (e.key == "brownian_cells") {
          c.brownian_cells = to_int<int>(e);
        } else if (e.key == "repetitions") {
          c.repetitions = to_int<int>(e);
        } else if (e.key == "max_failure_fraction") {
          c.max_failure_fraction = to_double(e);
        } else {
          unknown_key(name, e);
        }
      }
    } else if (name == "diagnostics") {
      for (const auto& e : entries) {
        double* target = e.key == "window"      ? &c.window
                         : e.key == "threshold" ? &c.threshold
                         : e.key == "spacing"   ? &c.spacing
                         : e.key == "halfwidth" ? &c.halfwidth
                         : e.key == "eta"       ? &c.eta
                         : e.key == "upper"     ? &c.upper
                                                : nullptr;
        if (target == nullptr) {
          unknown_key(name, e);
        }
        *target = to_double(e);
      }
    } else if (name == "output") {
      for (const auto& e : entries) {
        if (e.key != "dir") {
          unknown_key(name, e);
        }
        c.output_dir = e.value;
      }
    } else {
      throw ConfigError(at_line(first_line, "unknown section [" + name + "]"));
    }
  }
  if (kind) {
    if (*kind != c.measure.kind) {
      // Switching kinds: values of the previous kind are dropped.
      const auto family = c.measure.family;
      const auto density = c.measure.density;
      c.measure = MeasureConfig{};
      c.measure.kind = *kind;
      // Subsection overrides were applied in place; keep them.
      if (sections.contains("measure.family")) {
        c.measure.family = family;
      }
      if (sections.contains("measure.density")) {
        c.measure.density = density;
      }
    }
    if (*kind == MeasureConfig::Kind::atoms) {
      c.measure.atoms.clear();
      for (const auto& [k, a] : atoms) {
        c.measure.atoms.push_back(a);
      }
    }
  }
  validate_config(c);
  return c;
}

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream os;
  auto num = [](double v) { return shortest(v); };
  os << "scenario = " << c.scenario << "\n\n";
  os << "[triplet]\ndrift = " << num(c.drift) << "\nbrownian_variance = " << num(c.brownian_variance) << "\n\n";
  os << "[measure]\nkind = " << kind_name(c.measure.kind) << "\n\n";
  switch (c.measure.kind) {
    case MeasureConfig::Kind::atoms:
      for (std::size_t i = 0; i < c.measure.atoms.size(); ++i) {
        os << "[measure.atom." << i + 1 << "]\nsize = " << num(c.measure.atoms[i].size)
           << "\nrate = " << num(c.measure.atoms[i].rate) << "\n\n";
      }
      break;
    case MeasureConfig::Kind::family: {
      const auto& f = c.measure.family;
      os << "[measure.family]\nlevels = " << f.levels << "\nsize_scale = " << num(f.size_scale)
         << "\nsize_ratio = " << num(f.size_ratio) << "\nrate_scale = " << num(f.rate_scale)
         << "\nrate_ratio = " << num(f.rate_ratio)
         << "\nidealized_infinite = " << (f.idealized_infinite ? "true" : "false") << "\n\n";
      break;
    }
    case MeasureConfig::Kind::density: {
      const auto& d = c.measure.density;
      os << "[measure.density]\nscale = " << num(d.scale) << "\nexponent = " << num(d.exponent)
         << "\npositive_extent = " << num(d.positive_extent) << "\nnegative_extent = " << num(d.negative_extent)
         << "\n\n";
      break;
    }
  }
  auto field = [&](const char* section, const FieldConfig& f) {
    os << '[' << section << "]\nfield = " << f.name << '\n';
    for (const auto& [k, v] : f.params) {
      os << k << " = " << num(v) << '\n';
    }
    if (f.min_abs) {
      os << "min_abs = " << num(*f.min_abs) << '\n';
    }
    os << '\n';
  };
  field("drift", c.drift_field);
  field("diffusion", c.diffusion_field);
  os << "[run]\nx0 = " << num(c.x0) << "\nhorizon = " << num(c.horizon) << "\ntruncation = " << num(c.truncation)
     << "\ncompensate = " << (c.compensate ? "true" : "false") << "\nreplicas = " << c.replicas
     << "\nstep = " << num(c.step) << "\nseed = " << c.seed << "\nbrownian_cells = " << c.brownian_cells
     << "\nrepetitions = " << c.repetitions << "\nmax_failure_fraction = " << num(c.max_failure_fraction) << "\n\n";
  os << "[diagnostics]\nwindow = " << num(c.window) << "\nthreshold = " << num(c.threshold)
     << "\nspacing = " << num(c.spacing) << "\nhalfwidth = " << num(c.halfwidth) << "\neta = " << num(c.eta)
     << "\nupper = " << num(c.upper) << "\n\n";
  os << "[output]\ndir = " << c.output_dir << '\n';
  return os.str();
}

void validate_config(const ScenarioConfig& c) {
  if (!is_known_scenario(c.scenario)) {
    throw ConfigError("unknown scenario id '" + c.scenario + "'");
  }
  auto finite = [](const char* key, double v) {
    if (!std::isfinite(v)) {
      range_error(key, "finite", v);
    }
  };
  finite("drift", c.drift);
  finite("x0", c.x0);
  if (!(c.brownian_variance >= 0.0) || !std::isfinite(c.brownian_variance)) {
    range_error("brownian_variance", ">= 0", c.brownian_variance);
  }
  if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) {
    range_error("horizon", "> 0", c.horizon);
  }
  if (!(c.truncation > 0.0 && c.truncation <= 1.0)) {
    range_error("truncation", "in (0, 1]", c.truncation);
  }
  if (c.replicas < 1 || c.replicas > 100000000) {
    range_error("replicas", ">= 1 and <= 1e8", static_cast<double>(c.replicas));
  }
  if (!(c.step >= 0.0 && c.step <= c.horizon)) {
    range_error("step", "in [0, horizon]", c.step);
  }
  if (c.brownian_cells < 1 || c.brownian_cells > 1 << 20) {
    range_error("brownian_cells", "in [1, 2^20]", c.brownian_cells);
  }
  if (c.repetitions < 1 || c.repetitions > 10000) {
    range_error("repetitions", "in [1, 10000]", c.repetitions);
  }
  if (!(c.max_failure_fraction >= 0.0 && c.max_failure_fraction <= 1.0)) {
    range_error("max_failure_fraction", "in [0, 1]", c.max_failure_fraction);
  }
  if (!(c.window >= 0.0) || !std::isfinite(c.window)) {
    range_error("window", ">= 0", c.window);
  }
  if (!(c.threshold >= 0.0 && c.threshold < 1.0)) {
    range_error("threshold", "in [0, 1)", c.threshold);
  }
  if (!(c.spacing > 0.0) || !std::isfinite(c.spacing)) {
    range_error("spacing", "> 0", c.spacing);
  }
  if (!(c.halfwidth > 0.0 && c.halfwidth < 0.5 * c.spacing)) {
    range_error("halfwidth", "in (0, spacing / 2)", c.halfwidth);
  }
  if (!(c.eta > 0.0) || !std::isfinite(c.eta)) {
    range_error("eta", "> 0", c.eta);
  }
  if (!(c.upper >= c.eta) || !std::isfinite(c.upper)) {
    range_error("upper", ">= eta", c.upper);
  }
  if (c.output_dir.empty()) {
    throw ConfigError("dir: must be nonempty");
  }

  const auto& m = c.measure;
  switch (m.kind) {
    case MeasureConfig::Kind::atoms:
      for (const auto& a : m.atoms) {
        if (a.size == 0.0 || !std::isfinite(a.size)) {
          range_error("size", "finite and nonzero", a.size);
        }
        if (!(a.rate >= 0.0) || !std::isfinite(a.rate)) {
          range_error("rate", ">= 0", a.rate);
        }
      }
      break;
    case MeasureConfig::Kind::family:
      if (m.family.levels < 1 || m.family.levels > 60) {
        range_error("levels", "in [1, 60]", m.family.levels);
      }
      if (!(m.family.size_scale > 0.0) || !std::isfinite(m.family.size_scale)) {
        range_error("size_scale", "> 0", m.family.size_scale);
      }
      if (!(m.family.size_ratio > 0.0 && m.family.size_ratio < 1.0)) {
        range_error("size_ratio", "in (0, 1)", m.family.size_ratio);
      }
      if (!(m.family.rate_scale > 0.0) || !std::isfinite(m.family.rate_scale)) {
        range_error("rate_scale", "> 0", m.family.rate_scale);
      }
      if (!(m.family.rate_ratio > 0.0) || !std::isfinite(m.family.rate_ratio)) {
        range_error("rate_ratio", "> 0", m.family.rate_ratio);
      }
      break;
    case MeasureConfig::Kind::density:
      if (!(m.density.scale > 0.0) || !std::isfinite(m.density.scale)) {
        range_error("scale", "> 0", m.density.scale);
      }
      if (!(m.density.exponent < 3.0)) {
        range_error("exponent", "< 3", m.density.exponent);
      }
      if (!(m.density.positive_extent >= 0.0 && m.density.positive_extent <= 1e6)) {
        range_error("positive_extent", "in [0, 1e6]", m.density.positive_extent);
      }
      if (!(m.density.negative_extent >= 0.0 && m.density.negative_extent <= 1e6)) {
        range_error("negative_extent", "in [0, 1e6]", m.density.negative_extent);
      }
      break;
  }
  check_field_config("drift", c.drift_field);
  check_field_config("diffusion", c.diffusion_field);
  try {
    (void)m.build();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("measure: ") + e.what());
  }
}

}  // namespace levyreg
