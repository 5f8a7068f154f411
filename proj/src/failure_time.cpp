#include "adt/failure_time.hpp"

#include <cmath>
#include <stdexcept>

#include "adt/specfun.hpp"

namespace adt {

const char* family_name(ModelFamily family) {
  switch (family) {
    case ModelFamily::Gamma: return "gamma";
    case ModelFamily::GammaGamma: return "gamma_gamma";
    case ModelFamily::GammaLmem: return "gamma_lmem";
  }
  return "unknown";
}

std::vector<std::string> validate(const Scenario& s) {
  if (!(s.alpha > 0.0 && s.alpha < 1.0))
    throw std::invalid_argument("scenario: alpha must be in (0, 1)");
  if (s.family == ModelFamily::GammaGamma && !s.gamma2)
    throw std::invalid_argument("scenario: gamma_gamma family requires a second gamma component");
  if (s.family == ModelFamily::GammaLmem && !s.lmem)
    throw std::invalid_argument("scenario: gamma_lmem family requires an lmem component");
  if (s.family != ModelFamily::GammaGamma && s.gamma2)
    throw std::invalid_argument("scenario: gamma2 present but family is not gamma_gamma");
  if (s.family != ModelFamily::GammaLmem && s.lmem)
    throw std::invalid_argument("scenario: lmem present but family is not gamma_lmem");

  std::vector<std::string> warnings = validate(s.gamma1);
  if (s.gamma2)
    for (auto& w : validate(*s.gamma2)) warnings.push_back("component 2: " + w);
  if (s.lmem)
    for (auto& w : validate(*s.lmem, s.use_condition)) warnings.push_back(w);
  if (!(s.use_condition < 0.0))
    warnings.push_back("scenario: use condition x_u >= 0 lies inside the stress region");
  return warnings;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

double gamma_cdf_T(const GammaComponentParams& p, double x_u, double t) {
  if (!(t > 0.0)) {
    if (t == 0.0) return 0.0;
    throw std::domain_error("gamma_cdf_T: t must be nonnegative");
  }
  return reg_gamma_q(rate(p, x_u) * t, p.z0 / p.nu);
}

double lmem_cdf_T(const LmemComponentParams& p, double x_u, double t) {
  const double mu = p.beta20 + p.beta21 * x_u + p.beta22 * t + p.beta23 * x_u * t;
  return normal_cdf((mu - p.y20) / std::sqrt(p.sigma0_sq));
}

double system_cdf(const Scenario& s, double t) {
  double survival = 1.0 - gamma_cdf_T(s.gamma1, s.use_condition, t);
  if (s.family == ModelFamily::GammaGamma)
    survival *= 1.0 - gamma_cdf_T(*s.gamma2, s.use_condition, t);
  else if (s.family == ModelFamily::GammaLmem)
    survival *= 1.0 - lmem_cdf_T(*s.lmem, s.use_condition, t);
  return 1.0 - survival;
}

namespace {

double gamma_pdf_T(const GammaComponentParams& p, double x_u, double t) {
  const double g = rate(p, x_u);
  return g * dq_dshape(g * t, p.z0 / p.nu);
}

double lmem_pdf_T(const LmemComponentParams& p, double x_u, double t) {
  const double s0 = std::sqrt(p.sigma0_sq);
  const double mu = p.beta20 + p.beta21 * x_u + p.beta22 * t + p.beta23 * x_u * t;
  return normal_pdf((mu - p.y20) / s0) * (p.beta22 + p.beta23 * x_u) / s0;
}

}  // namespace

double system_pdf(const Scenario& s, double t) {
  if (!(t > 0.0)) throw std::domain_error("system_pdf: t must be positive");
  const double f1 = gamma_pdf_T(s.gamma1, s.use_condition, t);
  if (s.family == ModelFamily::Gamma) return f1;
  const double surv1 = 1.0 - gamma_cdf_T(s.gamma1, s.use_condition, t);
  if (s.family == ModelFamily::GammaGamma) {
    const double f2 = gamma_pdf_T(*s.gamma2, s.use_condition, t);
    const double surv2 = 1.0 - gamma_cdf_T(*s.gamma2, s.use_condition, t);
    return f1 * surv2 + f2 * surv1;
  }
  const double f2 = lmem_pdf_T(*s.lmem, s.use_condition, t);
  const double surv2 = 1.0 - lmem_cdf_T(*s.lmem, s.use_condition, t);
  return f1 * surv2 + f2 * surv1;
}

double quantile(const Scenario& s, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("quantile: alpha must be in (0, 1)");
  double lo = 1e-6;
  double hi = 1.0;
  int doublings = 0;
  while (system_cdf(s, hi) < alpha) {
    hi *= 2.0;
    if (++doublings > 30)
      throw std::runtime_error("quantile: no failure region, bracket expansion exceeded 2^30");
  }
  int halvings = 0;
  while (system_cdf(s, lo) > alpha) {
    lo *= 0.5;
    if (++halvings > 1000)
      throw std::runtime_error("quantile: failure probability exceeds alpha at t = 0");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = system_cdf(s, mid);
    if (std::abs(f - alpha) <= 1e-12 || hi - lo <= 1e-14 * mid) return mid;
    if (f < alpha)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double quantile(const Scenario& s) { return quantile(s, s.alpha); }

double gamma_quantile_closed_form(const GammaComponentParams& p, double x_u, double alpha) {
  return inv_reg_gamma_q_shape(alpha, p.z0 / p.nu) / rate(p, x_u);
}

double grad_const_gamma(const GammaComponentParams& p, double other_survival, double x_u,
                        double t_alpha) {
  if (!(t_alpha > 0.0)) throw std::invalid_argument("grad_const_gamma: t_alpha must be positive");
  const double kappa = rate(p, x_u) * t_alpha;
  if (other_survival == 0.0) return 0.0;
  return kappa * other_survival * dq_dshape(kappa, p.z0 / p.nu);
}

double grad_const_lmem(const Scenario& s, double t_alpha) {
  if (s.family != ModelFamily::GammaLmem)
    throw std::invalid_argument("grad_const_lmem: requires the gamma_lmem family");
  const LmemComponentParams& p = *s.lmem;
  const double s0 = std::sqrt(p.sigma0_sq);
  const double mu = p.beta20 + p.beta21 * s.use_condition + p.beta22 * t_alpha +
                    p.beta23 * s.use_condition * t_alpha;
  const double prof = time_profile_var(s.schedule, p, t_alpha);
  return (1.0 - gamma_cdf_T(s.gamma1, s.use_condition, t_alpha)) / s0 *
         normal_pdf((mu - p.y20) / s0) * std::sqrt(prof);
}

std::array<double, 4> lmem_location_gradient(const LmemComponentParams& p, double x_u, double t) {
  const double s0 = std::sqrt(p.sigma0_sq);
  const double mu = p.beta20 + p.beta21 * x_u + p.beta22 * t + p.beta23 * x_u * t;
  const double g = normal_pdf((mu - p.y20) / s0) / s0;
  return {g, g * x_u, g * t, g * t * x_u};
}

std::array<double, 2> lmem_variance_gradient(const LmemComponentParams& p, double x_u, double t) {
  const double s0 = std::sqrt(p.sigma0_sq);
  const double u = (p.beta20 + p.beta21 * x_u + p.beta22 * t + p.beta23 * x_u * t - p.y20) / s0;
  // dF/dsigma0^2 by chain rule on the standardized argument; F does not
  // involve sigma_eps^2.
  return {-normal_pdf(u) * u / (2.0 * p.sigma0_sq), 0.0};
}

}  // namespace adt
