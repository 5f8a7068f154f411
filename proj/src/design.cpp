#include "adt/design.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace adt {

Design::Design(std::vector<double> points, std::vector<double> weights) {
  if (points.size() != weights.size() || points.empty())
    throw std::invalid_argument("design: points and weights must be nonempty and equal length");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  double total = 0.0;
  for (std::size_t idx : order) {
    const double x = points[idx];
    const double w = weights[idx];
    if (!(x >= 0.0 && x <= 1.0))
      throw std::invalid_argument("design: stress levels must lie in [0, 1]");
    if (!(w > 0.0)) throw std::invalid_argument("design: weights must be positive");
    total += w;
    if (!points_.empty() && x == points_.back())
      weights_.back() += w;  // merge duplicate support points
    else {
      points_.push_back(x);
      weights_.push_back(w);
    }
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("design: weights must sum to one");
}

Design Design::two_point(double w0) { return Design({0.0, 1.0}, {w0, 1.0 - w0}); }

Design Design::uniform(std::size_t m) {
  if (m < 1) throw std::invalid_argument("design: m must be >= 1");
  std::vector<double> pts(m), w(m, 1.0 / static_cast<double>(m));
  if (m == 1)
    pts[0] = 0.0;
  else
    for (std::size_t i = 0; i < m; ++i)
      pts[i] = static_cast<double>(i) / static_cast<double>(m - 1);
  return Design(pts, w);
}

CriterionContext make_criterion_context(const Scenario& scenario) {
  CriterionContext ctx{scenario};
  ctx.t_alpha = quantile(scenario);
  switch (scenario.family) {
    case ModelFamily::Gamma:
      // direction-only c-criterion: c = (1, x_u), constants dropped
      ctx.c1 = 1.0;
      ctx.c2 = 0.0;
      ctx.density = system_pdf(scenario, ctx.t_alpha);
      break;
    case ModelFamily::GammaGamma: {
      const double surv2 = 1.0 - gamma_cdf_T(*scenario.gamma2, scenario.use_condition, ctx.t_alpha);
      const double surv1 = 1.0 - gamma_cdf_T(scenario.gamma1, scenario.use_condition, ctx.t_alpha);
      ctx.c1 = grad_const_gamma(scenario.gamma1, surv2, scenario.use_condition, ctx.t_alpha);
      ctx.c2 = grad_const_gamma(*scenario.gamma2, surv1, scenario.use_condition, ctx.t_alpha);
      ctx.density = system_pdf(scenario, ctx.t_alpha);
      break;
    }
    case ModelFamily::GammaLmem: {
      const double surv2 = 1.0 - lmem_cdf_T(*scenario.lmem, scenario.use_condition, ctx.t_alpha);
      ctx.c1 = grad_const_gamma(scenario.gamma1, surv2, scenario.use_condition, ctx.t_alpha);
      ctx.c2 = grad_const_lmem(scenario, ctx.t_alpha);
      ctx.density = system_pdf(scenario, ctx.t_alpha);
      const auto cv = lmem_variance_gradient(*scenario.lmem, scenario.use_condition, ctx.t_alpha);
      const Sym2 m = variance_info(*scenario.lmem, scenario.schedule.intervals());
      ctx.c_varsigma_sq = m.quad_form_inv(cv[0], cv[1]);
      break;
    }
  }
  return ctx;
}

std::vector<CriterionBlock> criterion_blocks(const CriterionContext& ctx) {
  const Scenario& s = ctx.scenario;
  const double xu = s.use_condition;
  std::vector<CriterionBlock> blocks;
  {
    CriterionBlock b;
    b.weight = ctx.c1 * ctx.c1;
    b.c0 = 1.0;
    b.c1 = xu;
    b.intensity = [p = s.gamma1, sched = s.schedule](double x) {
      return intensity(p.beta0 + p.beta1 * x, sched);
    };
    blocks.push_back(std::move(b));
  }
  if (s.family == ModelFamily::GammaGamma) {
    CriterionBlock b;
    b.weight = ctx.c2 * ctx.c2;
    b.c0 = 1.0;
    b.c1 = xu;
    b.intensity = [p = *s.gamma2, sched = s.schedule](double x) {
      return intensity(p.beta0 + p.beta1 * x, sched);
    };
    blocks.push_back(std::move(b));
  } else if (s.family == ModelFamily::GammaLmem) {
    CriterionBlock b;
    b.weight = ctx.c2 * ctx.c2;
    b.c0 = 1.0;
    b.c1 = xu;
    b.intensity = [](double) { return 1.0; };  // plain moment matrix block
    blocks.push_back(std::move(b));
  }
  return blocks;
}

namespace {

void warn_condition(const Sym2& m) {
  static std::atomic<bool> warned{false};
  if (m.condition() > 1e12 && !warned.exchange(true))
    std::cerr << "warning: design information matrix condition number above 1e12\n";
}

}  // namespace

double block_criterion(const std::vector<CriterionBlock>& blocks, const Design& design) {
  double total = 0.0;
  for (const auto& blk : blocks) {
    if (blk.weight == 0.0) continue;
    Sym2 m;
    for (std::size_t i = 0; i < design.size(); ++i) {
      const double x = design.points()[i];
      m += Sym2::outer(1.0, x, design.weights()[i] * blk.intensity(x));
    }
    if (!m.invertible()) return std::numeric_limits<double>::infinity();
    warn_condition(m);
    total += blk.weight * m.quad_form_inv(blk.c0, blk.c1);
  }
  return total;
}

double avar(const CriterionContext& ctx, const Design& design) {
  const double base = block_criterion(criterion_blocks(ctx), design);
  if (!std::isfinite(base)) return base;
  if (ctx.scenario.family == ModelFamily::GammaLmem)
    return (base + ctx.c_varsigma_sq) / (ctx.density * ctx.density);
  return base;
}

double avar(const Scenario& scenario, const Design& design) {
  return avar(make_criterion_context(scenario), design);
}

double efficiency(const Scenario& scenario, const Design& design, const Design& optimal) {
  const CriterionContext ctx = make_criterion_context(scenario);
  const double denom = avar(ctx, design);
  if (!std::isfinite(denom)) return 0.0;
  return avar(ctx, optimal) / denom;
}

}  // namespace adt
