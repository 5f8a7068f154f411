#include "adt/gamma_model.hpp"

#include <cmath>
#include <stdexcept>

#include "adt/design.hpp"
#include "adt/specfun.hpp"

namespace adt {

std::vector<std::string> validate(const GammaComponentParams& p) {
  if (!(p.nu > 0.0)) throw std::invalid_argument("gamma component: nu must be positive");
  if (!(p.z0 > 0.0)) throw std::invalid_argument("gamma component: z0 must be positive");
  std::vector<std::string> warnings;
  if (!(p.beta1 > 0.0))
    warnings.push_back("gamma component: beta1 <= 0, stress does not accelerate degradation");
  return warnings;
}

MeasurementSchedule::MeasurementSchedule(std::vector<double> times) : times_(std::move(times)) {
  if (times_.empty()) throw std::invalid_argument("schedule: at least one measurement time");
  double prev = 0.0;
  deltas_.reserve(times_.size());
  for (double t : times_) {
    if (!(t > prev))
      throw std::invalid_argument("schedule: times must be strictly increasing and positive");
    deltas_.push_back(t - prev);
    prev = t;
  }
}

double rate(const GammaComponentParams& p, double x) { return std::exp(p.beta0 + p.beta1 * x); }

double increment_loglik(const GammaComponentParams& p, double x, double delta, double y) {
  if (!(delta > 0.0)) throw std::invalid_argument("increment_loglik: delta must be positive");
  if (!(y > 0.0)) throw std::domain_error("increment_loglik: increment must be positive");
  const double shape = rate(p, x) * delta;
  return (shape - 1.0) * std::log(y) - y / p.nu - ln_gamma(shape) - shape * std::log(p.nu);
}

double q_value(double z) {
  if (z > 700.0) throw std::range_error("q_value: argument overflows");
  if (z > 30.0) {
    // e^{2z} psi_1(e^z) = e^z + 1/2 + e^{-z}/6 - ... ; avoids e^{2z} overflow
    const double ez = std::exp(z);
    return ez + 0.5 + 1.0 / (6.0 * ez);
  }
  const double ez = std::exp(z);
  return std::exp(2.0 * z) * trigamma(ez);
}

double intensity(double z, const MeasurementSchedule& schedule) {
  double sum = 0.0;
  for (double d : schedule.deltas()) sum += q_value(z + std::log(d));
  return sum;
}

Sym2 unit_info(const GammaComponentParams& p, double x, const MeasurementSchedule& schedule) {
  const double lam = intensity(p.beta0 + p.beta1 * x, schedule);
  return Sym2::outer(1.0, x, lam);
}

Sym2 design_info(const GammaComponentParams& p, const Design& design,
                 const MeasurementSchedule& schedule) {
  Sym2 m;
  for (std::size_t i = 0; i < design.size(); ++i)
    m += design.weights()[i] * unit_info(p, design.points()[i], schedule);
  return m;
}

}  // namespace adt
