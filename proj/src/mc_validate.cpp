#include "adt/mc_validate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "adt/parallel.hpp"
#include "adt/specfun.hpp"

namespace adt {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdULL;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ULL;
  z ^= z >> 33;
  return z;
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(mix64(seed + kGolden) ^ (stream * 0xbf58476d1ce4e5b9ULL + 1))) {}

std::uint64_t CounterRng::next_u64() { return mix64(key_ ^ (kGolden * ++counter_)); }

double CounterRng::next_unit() {
  // 53-bit mantissa shifted into (0, 1); never returns an endpoint
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = next_unit();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

double CounterRng::next_gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("next_gamma: shape and scale must be positive");
  if (shape < 1.0) {
    const double u = next_unit();
    return next_gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = next_unit();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

std::vector<int> apportion_largest_remainder(const Design& design, int n) {
  if (n < 1) throw std::invalid_argument("apportion: n must be positive");
  const std::size_t m = design.size();
  std::vector<int> counts(m);
  std::vector<std::pair<double, std::size_t>> rema(m);
  int assigned = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double exact = design.weights()[i] * n;
    counts[i] = static_cast<int>(std::floor(exact));
    assigned += counts[i];
    rema[i] = {exact - std::floor(exact), i};
  }
  std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (int r = 0; r < n - assigned; ++r) counts[rema[r].second] += 1;
  return counts;
}

std::vector<double> simulate_gamma_increments(const GammaComponentParams& params, double x,
                                              const MeasurementSchedule& schedule,
                                              CounterRng& rng) {
  const double g = rate(params, x);
  std::vector<double> y;
  y.reserve(schedule.intervals());
  for (double delta : schedule.deltas()) y.push_back(rng.next_gamma(g * delta, params.nu));
  return y;
}

std::vector<double> simulate_lmem_responses(const LmemComponentParams& params, double x,
                                            const MeasurementSchedule& schedule, CounterRng& rng) {
  const double intercept = params.beta20 + std::sqrt(params.sigma0_sq) * rng.next_normal();
  const double se = std::sqrt(params.sigma_eps_sq);
  std::vector<double> y;
  y.reserve(schedule.intervals() + 1);
  auto mean_at = [&](double t) {
    return intercept + params.beta21 * x + params.beta22 * t + params.beta23 * x * t;
  };
  y.push_back(mean_at(0.0) + se * rng.next_normal());
  for (double t : schedule.times()) y.push_back(mean_at(t) + se * rng.next_normal());
  return y;
}

Dataset simulate_dataset(const Scenario& scenario, const std::vector<double>& unit_stresses,
                         CounterRng& rng) {
  Dataset data;
  data.reserve(unit_stresses.size());
  for (double x : unit_stresses) {
    UnitRecord rec;
    rec.stress = x;
    rec.gamma1_increments = simulate_gamma_increments(scenario.gamma1, x, scenario.schedule, rng);
    if (scenario.family == ModelFamily::GammaGamma)
      rec.gamma2_increments = simulate_gamma_increments(*scenario.gamma2, x, scenario.schedule, rng);
    else if (scenario.family == ModelFamily::GammaLmem)
      rec.lmem_responses = simulate_lmem_responses(*scenario.lmem, x, scenario.schedule, rng);
    data.push_back(std::move(rec));
  }
  return data;
}

namespace {

void check_two_levels(const Dataset& data) {
  if (data.size() < 2) throw std::invalid_argument("fit_mle: need at least two units");
  const double first = data.front().stress;
  for (const auto& rec : data)
    if (rec.stress != first) return;
  throw std::invalid_argument("fit_mle: need at least two distinct stress levels");
}

struct GammaBlockFit {
  GammaComponentParams params;
  bool converged = false;
  int iterations = 0;
};

const std::vector<double>& increments_of(const UnitRecord& rec, bool second) {
  return second ? rec.gamma2_increments : rec.gamma1_increments;
}

// Fisher scoring for (beta0, beta1); nu fixed and known.
GammaBlockFit fit_gamma_block(GammaComponentParams params, const MeasurementSchedule& schedule,
                              const Dataset& data, bool second) {
  // moment start: log of per-level mean increment rate regressed on stress
  {
    double s_w = 0, s_x = 0, s_y = 0, s_xx = 0, s_xy = 0;
    const double total_time = std::accumulate(schedule.deltas().begin(), schedule.deltas().end(), 0.0);
    for (const auto& rec : data) {
      const auto& y = increments_of(rec, second);
      const double sum = std::accumulate(y.begin(), y.end(), 0.0);
      const double lg = std::log(std::max(sum / (params.nu * total_time), 1e-12));
      s_w += 1;
      s_x += rec.stress;
      s_y += lg;
      s_xx += rec.stress * rec.stress;
      s_xy += rec.stress * lg;
    }
    const double det = s_w * s_xx - s_x * s_x;
    if (std::abs(det) > 1e-12) {
      params.beta0 = (s_xx * s_y - s_x * s_xy) / det;
      params.beta1 = (s_w * s_xy - s_x * s_y) / det;
    }
  }

  GammaBlockFit fit{params, false, 0};
  const double lognu = std::log(params.nu);
  for (int it = 1; it <= 100; ++it) {
    fit.iterations = it;
    double g0 = 0, g1 = 0;
    Sym2 info;
    for (const auto& rec : data) {
      const auto& y = increments_of(rec, second);
      const double x = rec.stress;
      const double r = rate(fit.params, x);
      double unit_g = 0, unit_q = 0;
      for (std::size_t j = 0; j < y.size(); ++j) {
        const double shape = r * schedule.deltas()[j];
        unit_g += shape * (std::log(y[j]) - digamma(shape) - lognu);
        unit_q += shape * shape * trigamma(shape);
      }
      g0 += unit_g;
      g1 += unit_g * x;
      info += Sym2::outer(1.0, x, unit_q);
    }
    if (std::max(std::abs(g0), std::abs(g1)) < 1e-9) {
      fit.converged = true;
      break;
    }
    double step0, step1;
    info.solve(g0, g1, step0, step1);
    // conservative step cap keeps early iterations stable
    const double norm = std::max(std::abs(step0), std::abs(step1));
    const double scale = norm > 2.0 ? 2.0 / norm : 1.0;
    fit.params.beta0 += scale * step0;
    fit.params.beta1 += scale * step1;
  }
  return fit;
}

struct LmemBlockFit {
  LmemComponentParams params;
  bool converged = false;
  int iterations = 0;
};

// Profile likelihood: GLS for the location parameters alternated with Fisher
// scoring on the variance components.
LmemBlockFit fit_lmem_block(LmemComponentParams params, const MeasurementSchedule& schedule,
                            const Dataset& data) {
  const std::size_t n_obs = schedule.intervals() + 1;
  const double nn = static_cast<double>(n_obs);
  std::vector<double> times(1, 0.0);
  times.insert(times.end(), schedule.times().begin(), schedule.times().end());

  // start values: OLS residual decomposition into between/within parts
  {
    double mean_all = 0.0;
    for (const auto& rec : data)
      mean_all += std::accumulate(rec.lmem_responses.begin(), rec.lmem_responses.end(), 0.0);
    mean_all /= nn * static_cast<double>(data.size());
    double within = 0.0, between = 0.0;
    for (const auto& rec : data) {
      const double um =
          std::accumulate(rec.lmem_responses.begin(), rec.lmem_responses.end(), 0.0) / nn;
      between += (um - mean_all) * (um - mean_all);
      for (double v : rec.lmem_responses) within += (v - um) * (v - um);
    }
    params.sigma_eps_sq =
        std::max(within / (static_cast<double>(data.size()) * (nn - 1.0)), 1e-10);
    params.sigma0_sq = std::max(between / std::max<double>(data.size() - 1, 1) -
                                    params.sigma_eps_sq / nn,
                                1e-10);
  }

  LmemBlockFit fit{params, false, 0};
  std::array<double, 4> beta{params.beta20, params.beta21, params.beta22, params.beta23};

  for (int it = 1; it <= 200; ++it) {
    fit.iterations = it;
    const double se = fit.params.sigma_eps_sq;
    const double s0 = fit.params.sigma0_sq;
    const double denom = se + nn * s0;

    // GLS location update using the rank-one form of V^-1
    Matrix xtvx(4, 4);
    std::vector<double> xtvy(4, 0.0);
    for (const auto& rec : data) {
      const double x = rec.stress;
      // X row j = (1, x, t_j, t_j x); V^-1 r = r/se - (s0 (1'r) / (se denom)) 1
      double col_sums[4] = {0, 0, 0, 0};
      double sum_y = 0.0;
      for (std::size_t j = 0; j < n_obs; ++j) sum_y += rec.lmem_responses[j];
      for (std::size_t j = 0; j < n_obs; ++j) {
        const double t = times[j];
        const double row[4] = {1.0, x, t, t * x};
        const double vy = rec.lmem_responses[j] / se - s0 * sum_y / (se * denom);
        for (int a = 0; a < 4; ++a) {
          xtvy[a] += row[a] * vy;
          col_sums[a] += row[a];
        }
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) xtvx(a, b) += row[a] * row[b] / se;
      }
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          xtvx(a, b) -= s0 / (se * denom) * col_sums[a] * col_sums[b];
    }
    const std::vector<double> bnew = xtvx.solve(xtvy);
    std::copy(bnew.begin(), bnew.end(), beta.begin());
    fit.params.beta20 = beta[0];
    fit.params.beta21 = beta[1];
    fit.params.beta22 = beta[2];
    fit.params.beta23 = beta[3];

    // scoring step on (sigma0_sq, sigma_eps_sq)
    double score0 = 0.0, score_e = 0.0;
    for (const auto& rec : data) {
      const double x = rec.stress;
      double sum_r = 0.0, sum_rr = 0.0;
      for (std::size_t j = 0; j < n_obs; ++j) {
        const double t = times[j];
        const double mu = beta[0] + beta[1] * x + beta[2] * t + beta[3] * t * x;
        const double r = rec.lmem_responses[j] - mu;
        sum_r += r;
        sum_rr += r * r;
      }
      // V^-1 r pieces: |V^-1 r|^2 and (1' V^-1 r)^2
      const double one_vr = sum_r / denom;
      const double vr_sq =
          sum_rr / (se * se) - 2.0 * s0 * sum_r * sum_r / (se * se * denom) +
          s0 * s0 * nn * sum_r * sum_r / (se * se * denom * denom);
      score0 += -0.5 * (nn / denom - one_vr * one_vr);
      score_e += -0.5 * ((nn - 1.0) / se + 1.0 / denom - vr_sq);
    }
    const double n_units = static_cast<double>(data.size());
    Sym2 vinfo = variance_info(fit.params, schedule.intervals());
    double st0, st1;
    (n_units * vinfo).solve(score0, score_e, st0, st1);

    // keep the variances positive: halve until feasible
    double step_scale = 1.0;
    while (fit.params.sigma0_sq + step_scale * st0 <= 0.0 ||
           fit.params.sigma_eps_sq + step_scale * st1 <= 0.0)
      step_scale *= 0.5;
    fit.params.sigma0_sq += step_scale * st0;
    fit.params.sigma_eps_sq += step_scale * st1;

    if (std::max(std::abs(score0), std::abs(score_e)) < 1e-9 && it > 1) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

}  // namespace

void gamma_loglik_gradient(const GammaComponentParams& params, const MeasurementSchedule& schedule,
                           const Dataset& data, bool second_component, double& d_beta0,
                           double& d_beta1) {
  d_beta0 = 0.0;
  d_beta1 = 0.0;
  const double lognu = std::log(params.nu);
  for (const auto& rec : data) {
    const auto& y = increments_of(rec, second_component);
    const double r = rate(params, rec.stress);
    double unit_g = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double shape = r * schedule.deltas()[j];
      unit_g += shape * (std::log(y[j]) - digamma(shape) - lognu);
    }
    d_beta0 += unit_g;
    d_beta1 += unit_g * rec.stress;
  }
}

FitResult fit_mle(const Scenario& scenario, const Dataset& data) {
  check_two_levels(data);
  FitResult result{scenario, true, 0};
  const GammaBlockFit g1 = fit_gamma_block(scenario.gamma1, scenario.schedule, data, false);
  result.fitted.gamma1 = g1.params;
  result.converged = g1.converged;
  result.iterations = g1.iterations;
  if (scenario.family == ModelFamily::GammaGamma) {
    const GammaBlockFit g2 = fit_gamma_block(*scenario.gamma2, scenario.schedule, data, true);
    result.fitted.gamma2 = g2.params;
    result.converged = result.converged && g2.converged;
    result.iterations = std::max(result.iterations, g2.iterations);
  } else if (scenario.family == ModelFamily::GammaLmem) {
    const LmemBlockFit lm = fit_lmem_block(*scenario.lmem, scenario.schedule, data);
    result.fitted.lmem = lm.params;
    result.converged = result.converged && lm.converged;
    result.iterations = std::max(result.iterations, lm.iterations);
  }
  return result;
}

double predicted_quantile_avar(const Scenario& scenario, const Design& design) {
  const CriterionContext ctx = make_criterion_context(scenario);
  const double criterion = avar(ctx, design);
  switch (scenario.family) {
    case ModelFamily::Gamma:
      // c = -t_alpha (1, x_u): reinstate the t_alpha^2 scale
      return ctx.t_alpha * ctx.t_alpha * criterion;
    case ModelFamily::GammaGamma:
      // criterion carries c_l^2 already; reinstate c_0^2 = f_T(t_alpha)^-2
      return criterion / (ctx.density * ctx.density);
    case ModelFamily::GammaLmem:
      return criterion;  // already absolute
  }
  return criterion;
}

AvarReport empirical_avar_check(const Scenario& scenario, const SimConfig& sim) {
  if (sim.n_units < 4) throw std::invalid_argument("empirical_avar_check: n_units must be >= 4");
  if (sim.replications < 1)
    throw std::invalid_argument("empirical_avar_check: replications must be >= 1");

  AvarReport report;
  report.n_units = sim.n_units;
  report.replications = sim.replications;
  report.seed = sim.seed;
  report.unit_counts = apportion_largest_remainder(sim.design, sim.n_units);

  std::vector<double> stresses;
  stresses.reserve(sim.n_units);
  for (std::size_t i = 0; i < sim.design.size(); ++i)
    stresses.insert(stresses.end(), report.unit_counts[i], sim.design.points()[i]);

  std::vector<double> estimates(sim.replications,
                                std::numeric_limits<double>::quiet_NaN());
  parallel_for(static_cast<std::size_t>(sim.replications), [&](std::size_t rep) {
    try {
      CounterRng rng(sim.seed, rep);
      const Dataset data = simulate_dataset(scenario, stresses, rng);
      const FitResult fit = fit_mle(scenario, data);
      if (!fit.converged) return;
      estimates[rep] = quantile(fit.fitted);
    } catch (const std::exception&) {
      // left as NaN and counted as a fit failure
    }
  });

  double sum = 0.0;
  int good = 0;
  for (double e : estimates)
    if (std::isfinite(e)) {
      sum += e;
      ++good;
    }
  report.fit_failures = sim.replications - good;
  if (good < 2) throw std::runtime_error("empirical_avar_check: too few successful fits");
  const double mean = sum / good;
  double ss = 0.0;
  for (double e : estimates)
    if (std::isfinite(e)) ss += (e - mean) * (e - mean);
  report.mean_estimate = mean;
  report.empirical_variance = ss / (good - 1);
  report.predicted_avar = predicted_quantile_avar(scenario, sim.design);
  report.ratio = report.empirical_variance * sim.n_units / report.predicted_avar;
  return report;
}

}  // namespace adt
