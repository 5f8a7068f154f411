#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "adt/gamma_model.hpp"
#include "adt/linalg.hpp"

namespace adt {

// Linear mixed-effects failure mode: random intercept, fixed stress/time/
// interaction effects, compound-symmetric covariance.
struct LmemComponentParams {
  double beta20 = 0.0;        // aggregate intercept
  double beta21 = 0.0;        // stress slope
  double beta22 = 0.0;        // time slope
  double beta23 = 0.0;        // stress-time interaction
  double sigma0_sq = 1.0;     // random-intercept variance, > 0
  double sigma_eps_sq = 1.0;  // measurement-error variance, > 0
  double y20 = 0.0;           // failure threshold on the mean path
};

std::vector<std::string> validate(const LmemComponentParams& p, double x_u);

// Time design matrix D with rows (1, t_j), j = 0..k, t_0 = 0 prepended.
Matrix time_design_matrix(const MeasurementSchedule& schedule);

// Compound-symmetric covariance V = sigma_eps^2 I + sigma_0^2 11^T of the
// k + 1 repeated measurements of one unit.
Matrix covariance_V(const LmemComponentParams& p, std::size_t k);

// D^T V^-1 D via the rank-one-update closed form for V^-1.
Sym2 time_info(const LmemComponentParams& p, const MeasurementSchedule& schedule);

// Location-parameter information of a design: (D^T V^-1 D) kron M(xi), 4x4.
Matrix lmem_design_info(const LmemComponentParams& p, const Design& design,
                        const MeasurementSchedule& schedule);

// Per-unit information for (sigma_0^2, sigma_eps^2):
//   entries (1/2) tr(V^-1 dV/da V^-1 dV/db), dV/dsigma_0^2 = 11^T,
//   dV/dsigma_eps^2 = I. Does not depend on the stress setting.
Sym2 variance_info(const LmemComponentParams& p, std::size_t k);

// (1, t) (D^T V^-1 D)^-1 (1, t)^T
double time_profile_var(const MeasurementSchedule& schedule, const LmemComponentParams& p,
                        double t);

}  // namespace adt
