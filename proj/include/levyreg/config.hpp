#pragma once

#include "levyreg/fields.hpp"
#include "levyreg/levy_spec.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace levyreg {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct FamilyConfig {
  int levels = 12;
  double size_scale = 1.0;
  double size_ratio = 0.5;
  double rate_scale = 1.0;
  double rate_ratio = 2.0;
  bool idealized_infinite = true;
  bool operator==(const FamilyConfig&) const = default;
};

struct DensityConfig {
  double scale = 1.0;
  double exponent = 1.5;
  double positive_extent = 1.0;
  double negative_extent = 1.0;
  bool operator==(const DensityConfig&) const = default;
};

struct MeasureConfig {
  enum class Kind { atoms, family, density };
  Kind kind = Kind::atoms;
  std::vector<Atom> atoms;  // [measure.atom.k], in k order
  FamilyConfig family;
  DensityConfig density;

  JumpMeasureSpec build() const;
  bool operator==(const MeasureConfig&) const = default;
};

struct FieldConfig {
  std::string name = "constant";
  FieldParams params;
  std::optional<double> min_abs;

  ScalarField scalar() const;
  DiffusionField diffusion() const;
  bool operator==(const FieldConfig&) const = default;
};

struct ScenarioConfig {
  std::string scenario = "S1";
  // [triplet]
  double drift = 0.0;
  double brownian_variance = 0.0;
  MeasureConfig measure;
  FieldConfig drift_field;      // [drift]
  FieldConfig diffusion_field;  // [diffusion]
  // [run]
  double x0 = 0.0;
  double horizon = 1.0;
  double truncation = 1e-3;
  bool compensate = false;
  std::int64_t replicas = 1000;
  double step = 0.0;  // 0: horizon / 2^12
  std::uint64_t seed = 1;
  int brownian_cells = 4096;
  int repetitions = 1;
  double max_failure_fraction = 0.01;
  // [diagnostics]; 0 selects the documented default
  double window = 0.0;
  double threshold = 0.0;
  double spacing = 0x1p-12;
  double halfwidth = 1e-9;
  double eta = 0.01;
  double upper = 0.1;
  // [output]
  std::string output_dir = "out";

  LevyTriplet triplet() const;
  double effective_step() const;
  bool operator==(const ScenarioConfig&) const = default;
};

struct ScenarioInfo {
  std::string id;
  std::string description;
  std::string anchor;
};

// Built-in scenarios S1..S7 in order.
const std::vector<ScenarioInfo>& scenario_catalogue();
bool is_known_scenario(const std::string& id);

// Documented defaults of a built-in scenario.
ScenarioConfig default_config(const std::string& scenario_id);

// `[section]` headers, `key = value` pairs, `#` comments. The [scenario] id
// selects the defaults; every other section overrides them.
ScenarioConfig parse_config(std::string_view text);
std::string serialize_config(const ScenarioConfig& config);

void validate_config(const ScenarioConfig& config);

}  // namespace levyreg
