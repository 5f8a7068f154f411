#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "adt/gamma_model.hpp"
#include "adt/lmem_model.hpp"

namespace adt {

enum class ModelFamily { Gamma, GammaGamma, GammaLmem };

const char* family_name(ModelFamily family);

// Full planning scenario: model family, component nominal parameters, the
// measurement schedule, the normal use condition and the quantile level.
struct Scenario {
  ModelFamily family = ModelFamily::Gamma;
  GammaComponentParams gamma1;
  std::optional<GammaComponentParams> gamma2;  // GammaGamma only
  std::optional<LmemComponentParams> lmem;     // GammaLmem only
  MeasurementSchedule schedule{{1.0}};
  double use_condition = -0.4;  // x_u, expected < 0
  double alpha = 0.5;           // quantile level in (0, 1)
};

// Hard violations throw std::invalid_argument; returns soft warnings
// (x_u >= 0, beta1 <= 0, non-increasing LMEM mean path).
std::vector<std::string> validate(const Scenario& s);

// Marginal failure-time distributions.
double gamma_cdf_T(const GammaComponentParams& p, double x_u, double t);
double lmem_cdf_T(const LmemComponentParams& p, double x_u, double t);

// Series-system failure-time distribution F_T = 1 - prod_l (1 - F_{T_l}).
double system_cdf(const Scenario& s, double t);
// Analytic density of the system failure time.
double system_pdf(const Scenario& s, double t);

// alpha-quantile of the system failure time by bracketing root solve.
// Throws std::runtime_error if no bracket can be found (no failure region).
double quantile(const Scenario& s);
double quantile(const Scenario& s, double alpha);

// Closed form t_alpha = g^{-1}(alpha) / gamma(x_u) for the univariate family.
double gamma_quantile_closed_form(const GammaComponentParams& p, double x_u, double alpha);

// Gradient constant of a gamma component in the compound c-vector:
//   c_l = kappa_l (1 - F_{T_l'}(t_alpha)) dQ/ds(kappa_l, z_l0 / nu_l),
// kappa_l = gamma_l(x_u) t_alpha. The per-component gradient is c_l (1, x_u)^T.
double grad_const_gamma(const GammaComponentParams& p, double other_survival, double x_u,
                        double t_alpha);

// Gradient constant of the LMEM component:
//   c_2 = (1 - F_{T_1}(t_alpha)) sigma_0^{-1} phi((mu(t_alpha) - y20)/sigma_0)
//         * sqrt((1, t_alpha) (D^T V^-1 D)^-1 (1, t_alpha)^T).
double grad_const_lmem(const Scenario& s, double t_alpha);

// dF_{T2}(t)/dbeta_2 = sigma_0^{-1} phi((mu(t) - y20)/sigma_0) (1,t) kron (1,x_u).
std::array<double, 4> lmem_location_gradient(const LmemComponentParams& p, double x_u, double t);

// Gradient of F_{T2}(t) with respect to (sigma_0^2, sigma_eps^2); the second
// coordinate is identically zero since F_{T2} does not involve sigma_eps.
std::array<double, 2> lmem_variance_gradient(const LmemComponentParams& p, double x_u, double t);

// Standard normal cdf / density helpers used across the failure-time layer.
double normal_cdf(double x);
double normal_pdf(double x);

}  // namespace adt
