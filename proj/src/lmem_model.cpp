#include "adt/lmem_model.hpp"

#include <cmath>
#include <stdexcept>

#include "adt/design.hpp"

namespace adt {

std::vector<std::string> validate(const LmemComponentParams& p, double x_u) {
  if (!(p.sigma0_sq > 0.0))
    throw std::invalid_argument("lmem component: sigma0_sq must be positive");
  if (!(p.sigma_eps_sq > 0.0))
    throw std::invalid_argument("lmem component: sigma_eps_sq must be positive");
  std::vector<std::string> warnings;
  if (!(p.beta22 + p.beta23 * x_u > 0.0))
    warnings.push_back(
        "lmem component: beta22 + beta23 * x_u <= 0, mean path does not increase at the use "
        "condition");
  return warnings;
}

Matrix time_design_matrix(const MeasurementSchedule& schedule) {
  const std::size_t k = schedule.intervals();
  Matrix d(k + 1, 2);
  d(0, 0) = 1.0;
  d(0, 1) = 0.0;  // t_0 = 0
  for (std::size_t j = 0; j < k; ++j) {
    d(j + 1, 0) = 1.0;
    d(j + 1, 1) = schedule.times()[j];
  }
  return d;
}

Matrix covariance_V(const LmemComponentParams& p, std::size_t k) {
  if (k < 1) throw std::invalid_argument("covariance_V: k must be >= 1");
  const std::size_t n = k + 1;
  Matrix v(n, n, p.sigma0_sq);
  for (std::size_t i = 0; i < n; ++i) v(i, i) += p.sigma_eps_sq;
  return v;
}

Sym2 time_info(const LmemComponentParams& p, const MeasurementSchedule& schedule) {
  // V^-1 = (1/se) I - (s0 / (se (se + n s0))) 11^T with se = sigma_eps^2,
  // s0 = sigma_0^2, n = k + 1. Then D^T V^-1 D contracts to sums over the
  // time column.
  const std::size_t n = schedule.intervals() + 1;
  const double se = p.sigma_eps_sq;
  const double s0 = p.sigma0_sq;
  const double denom = se + static_cast<double>(n) * s0;
  double sum_t = 0.0, sum_tt = 0.0;
  for (double t : schedule.times()) {
    sum_t += t;
    sum_tt += t * t;
  }
  const double nn = static_cast<double>(n);
  const double corr = s0 / (se * denom);
  Sym2 m;
  m.a = nn / se - corr * nn * nn;
  m.b = sum_t / se - corr * nn * sum_t;
  m.d = sum_tt / se - corr * sum_t * sum_t;
  return m;
}

Matrix lmem_design_info(const LmemComponentParams& p, const Design& design,
                        const MeasurementSchedule& schedule) {
  Sym2 moment;
  for (std::size_t i = 0; i < design.size(); ++i)
    moment += Sym2::outer(1.0, design.points()[i], design.weights()[i]);
  return Matrix::kronecker(Matrix::from_sym2(time_info(p, schedule)),
                           Matrix::from_sym2(moment));
}

Sym2 variance_info(const LmemComponentParams& p, std::size_t k) {
  if (k < 1) throw std::invalid_argument("variance_info: k must be >= 1");
  const double nn = static_cast<double>(k + 1);
  const double se = p.sigma_eps_sq;
  const double denom = se + nn * p.sigma0_sq;
  // Traces of V^-1 dV/da V^-1 dV/db with dV/dsigma0^2 = 11^T, dV/dsigma_eps^2 = I:
  //   V^-1 1 = 1 / denom, so tr over the 11^T pair gives (n / denom)^2,
  //   the mixed pair n / denom^2, and the identity pair uses the spectrum
  //   {1/se (n-1 times), 1/denom}.
  Sym2 m;
  m.a = 0.5 * nn * nn / (denom * denom);
  m.b = 0.5 * nn / (denom * denom);
  m.d = 0.5 * ((nn - 1.0) / (se * se) + 1.0 / (denom * denom));
  return m;
}

double time_profile_var(const MeasurementSchedule& schedule, const LmemComponentParams& p,
                        double t) {
  const Sym2 info = time_info(p, schedule);
  if (!info.invertible())
    throw std::domain_error("time_profile_var: singular time information");
  return info.quad_form_inv(1.0, t);
}

}  // namespace adt
