#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace levyreg {

struct ScalarField {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::optional<double> sup_bound;
  std::optional<double> lipschitz_bound;

  double operator()(double x) const { return value(x); }
  double slope(double x) const { return derivative(x); }
};

struct DiffusionField {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::optional<double> min_abs;  // witness that sigma never vanishes on the range

  double operator()(double x) const { return value(x); }
  double slope(double x) const { return derivative(x); }
  ScalarField as_scalar() const { return {value, derivative, std::nullopt, std::nullopt}; }
};

class AssumptionHViolation : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// 101 equispaced points on [lo, hi].
std::vector<double> probe_grid(Interval range, int points = 101);

// Central-difference check of the stored derivative: throws std::invalid_argument
// naming the first probe point where |fd - d| > 1e-6 (1 + |d|).
void check_derivative(const std::function<double(double)>& value,
                      const std::function<double(double)>& derivative, Interval range);
void check_field(const ScalarField& field, Interval range);
// Also checks |sigma| >= min_abs when min_abs is set; throws AssumptionHViolation.
void check_field(const DiffusionField& field, Interval range);

// Closed-form catalogue with analytic derivatives:
//   constant        c
//   linear          slope * x
//   affine          intercept + slope * x
//   logistic        amplitude / (1 + exp(-slope (x - center)))
//   sine            offset + amplitude * sin(frequency * x + phase)
//   arctan-diffusion scale * (1 + x^2)     (1/sigma integrates to arctan)
// Missing parameters take the defaults listed by catalogue_defaults().
using FieldParams = std::map<std::string, double>;
ScalarField make_catalogue_field(const std::string& name, const FieldParams& params);
DiffusionField make_catalogue_diffusion(const std::string& name, const FieldParams& params,
                                        std::optional<double> min_abs = std::nullopt);
const std::map<std::string, FieldParams>& catalogue_defaults();

// k * sigma as a drift field.
ScalarField proportional_field(const DiffusionField& sigma, double k);

}  // namespace levyreg
