#include "levyreg/fields.hpp"

#include <cmath>
#include <sstream>

namespace levyreg {
namespace {

double param(const FieldParams& given, const FieldParams& defaults, const std::string& key) {
  if (auto it = given.find(key); it != given.end()) {
    return it->second;
  }
  return defaults.at(key);
}

}  // namespace

std::vector<double> probe_grid(Interval range, int points) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid.push_back(range.lo + (range.hi - range.lo) * i / (points - 1));
  }
  return grid;
}

void check_derivative(const std::function<double(double)>& value,
                      const std::function<double(double)>& derivative, Interval range) {
  for (double x : probe_grid(range)) {
    const double h = 1e-5 * std::max(1.0, std::abs(x));
    const double fd = (value(x + h) - value(x - h)) / (2.0 * h);
    const double d = derivative(x);
    if (!(std::abs(fd - d) <= 1e-6 * (1.0 + std::abs(d)))) {
      std::ostringstream msg;
      msg << "derivative mismatch at x=" << x << ": stored " << d << ", finite difference " << fd;
      throw std::invalid_argument(msg.str());
    }
  }
}

void check_field(const ScalarField& field, Interval range) {
  check_derivative(field.value, field.derivative, range);
}

void check_field(const DiffusionField& field, Interval range) {
  check_derivative(field.value, field.derivative, range);
  if (field.min_abs) {
    for (double x : probe_grid(range)) {
      if (std::abs(field.value(x)) < *field.min_abs) {
        std::ostringstream msg;
        msg << "|sigma(" << x << ")| = " << std::abs(field.value(x)) << " below min_abs " << *field.min_abs;
        throw AssumptionHViolation(msg.str());
      }
    }
  }
}

const std::map<std::string, FieldParams>& catalogue_defaults() {
  static const std::map<std::string, FieldParams> defaults = {
      {"constant", {{"c", 1.0}}},
      {"linear", {{"slope", 1.0}}},
      {"affine", {{"intercept", 0.0}, {"slope", 1.0}}},
      {"logistic", {{"amplitude", 1.0}, {"slope", 1.0}, {"center", 0.0}}},
      {"sine", {{"offset", 0.0}, {"amplitude", 1.0}, {"frequency", 1.0}, {"phase", 0.0}}},
      {"arctan-diffusion", {{"scale", 1.0}}},
  };
  return defaults;
}

ScalarField make_catalogue_field(const std::string& name, const FieldParams& params) {
  const auto& all = catalogue_defaults();
  auto it = all.find(name);
  if (it == all.end()) {
    throw std::invalid_argument("unknown catalogue field '" + name + "'");
  }
  const auto& defaults = it->second;
  for (const auto& [key, _] : params) {
    if (!defaults.contains(key)) {
      throw std::invalid_argument("field '" + name + "' has no parameter '" + key + "'");
    }
  }
  auto p = [&](const char* key) { return param(params, defaults, key); };

  if (name == "constant") {
    const double c = p("c");
    return {[c](double) { return c; }, [](double) { return 0.0; }, std::abs(c), 0.0};
  }
  if (name == "linear") {
    const double s = p("slope");
    return {[s](double x) { return s * x; }, [s](double) { return s; }, std::nullopt, std::abs(s)};
  }
  if (name == "affine") {
    const double c = p("intercept");
    const double s = p("slope");
    return {[c, s](double x) { return c + s * x; }, [s](double) { return s; }, std::nullopt, std::abs(s)};
  }
  if (name == "logistic") {
    const double amp = p("amplitude");
    const double s = p("slope");
    const double c = p("center");
    return {[=](double x) { return amp / (1.0 + std::exp(-s * (x - c))); },
            [=](double x) {
              const double e = std::exp(-std::abs(s * (x - c)));
              return amp * s * e / ((1.0 + e) * (1.0 + e));
            },
            std::abs(amp), std::abs(amp * s) / 4.0};
  }
  if (name == "sine") {
    const double amp = p("amplitude");
    const double w = p("frequency");
    const double ph = p("phase");
    const double off = p("offset");
    return {[=](double x) { return off + amp * std::sin(w * x + ph); },
            [=](double x) { return amp * w * std::cos(w * x + ph); }, std::abs(off) + std::abs(amp),
            std::abs(amp * w)};
  }
  // arctan-diffusion
  const double sc = p("scale");
  return {[sc](double x) { return sc * (1.0 + x * x); }, [sc](double x) { return 2.0 * sc * x; },
          std::nullopt, std::nullopt};
}

DiffusionField make_catalogue_diffusion(const std::string& name, const FieldParams& params,
                                        std::optional<double> min_abs) {
  auto f = make_catalogue_field(name, params);
  return {std::move(f.value), std::move(f.derivative), min_abs};
}

ScalarField proportional_field(const DiffusionField& sigma, double k) {
  return {[sigma, k](double x) { return k * sigma.value(x); },
          [sigma, k](double x) { return k * sigma.derivative(x); }, std::nullopt, std::nullopt};
}

}  // namespace levyreg
