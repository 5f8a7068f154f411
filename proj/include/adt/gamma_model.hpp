#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "adt/linalg.hpp"

namespace adt {

// One gamma-process failure mode: log-linear rate in the standardized stress,
// fixed known scale, soft-failure threshold.
struct GammaComponentParams {
  double beta0 = 0.0;  // intercept of the log rate
  double beta1 = 0.0;  // slope of the log rate per unit standardized stress
  double nu = 1.0;     // scale of the increments, > 0
  double z0 = 1.0;     // failure threshold, > 0
};

// Throws std::invalid_argument on hard violations (nu, z0), returns warnings
// for soft ones (beta1 <= 0 means no acceleration).
std::vector<std::string> validate(const GammaComponentParams& p);

// Strictly increasing measurement times 0 < t_1 < ... < t_k in standardized
// time; interval lengths are derived with t_0 = 0 implied.
class MeasurementSchedule {
 public:
  explicit MeasurementSchedule(std::vector<double> times);

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& deltas() const { return deltas_; }
  std::size_t intervals() const { return times_.size(); }  // k

 private:
  std::vector<double> times_;
  std::vector<double> deltas_;
};

// gamma(x) = exp(beta0 + beta1 x)
double rate(const GammaComponentParams& p, double x);

// Log density of one increment Y ~ Gamma(shape = rate(x) * delta, scale = nu).
double increment_loglik(const GammaComponentParams& p, double x, double delta, double y);

// q(z) = e^{2z} psi_1(e^z); the per-interval information factor.
double q_value(double z);

// lambda(z) = sum_j q(z + ln(Delta_j))
double intensity(double z, const MeasurementSchedule& schedule);

// Per-unit information for (beta0, beta1): lambda(beta0 + beta1 x) (1,x)(1,x)^T.
Sym2 unit_info(const GammaComponentParams& p, double x, const MeasurementSchedule& schedule);

class Design;  // design.hpp

// Standardized design information M(xi) = sum_i w_i unit_info(x_i).
Sym2 design_info(const GammaComponentParams& p, const Design& design,
                 const MeasurementSchedule& schedule);

}  // namespace adt
