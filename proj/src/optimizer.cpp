#include "adt/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace adt {

namespace {

std::vector<double> make_grid(double step) {
  if (!(step > 0.0 && step <= 0.5))
    throw std::invalid_argument("optimizer: grid step must be in (0, 0.5]");
  const int n = static_cast<int>(std::lround(1.0 / step));
  if (std::abs(n * step - 1.0) > 1e-9)
    throw std::invalid_argument("optimizer: grid step must divide 1 evenly");
  std::vector<double> grid(n + 1);
  for (int i = 0; i <= n; ++i) grid[i] = std::min(1.0, i * step);
  grid.back() = 1.0;
  return grid;
}

struct BlockCache {
  double weight;
  double c0, c1;
  std::vector<double> lam;  // intensity at the grid points
};

// Criterion value and sensitivity d at every grid point for current weights.
// Returns +inf criterion when some block information is singular.
double eval(const std::vector<BlockCache>& blocks, const std::vector<double>& grid,
            const std::vector<double>& w, std::vector<double>& d) {
  std::fill(d.begin(), d.end(), 0.0);
  double phi = 0.0;
  for (const auto& blk : blocks) {
    if (blk.weight == 0.0) continue;
    Sym2 m;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (w[i] > 0.0) m += Sym2::outer(1.0, grid[i], w[i] * blk.lam[i]);
    if (!m.invertible()) return std::numeric_limits<double>::infinity();
    double u0, u1;
    m.solve(blk.c0, blk.c1, u0, u1);
    phi += blk.weight * (blk.c0 * u0 + blk.c1 * u1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double lin = u0 + u1 * grid[i];
      d[i] += blk.weight * blk.lam[i] * lin * lin;
    }
  }
  return phi;
}

}  // namespace

OptimizeResult multiplicative_optimize(const std::vector<CriterionBlock>& blocks,
                                       const OptimizeOptions& opts) {
  const std::vector<double> grid = make_grid(opts.grid_step);
  std::vector<BlockCache> cache;
  cache.reserve(blocks.size());
  for (const auto& blk : blocks) {
    BlockCache c{blk.weight, blk.c0, blk.c1, {}};
    c.lam.reserve(grid.size());
    for (double x : grid) c.lam.push_back(blk.intensity(x));
    cache.push_back(std::move(c));
  }

  std::vector<double> w(grid.size(), 1.0 / static_cast<double>(grid.size()));
  std::vector<double> d(grid.size());
  OptimizeResult result;
  result.criterion_history.reserve(256);

  for (int it = 1; it <= opts.max_iter; ++it) {
    const double phi = eval(cache, grid, w, d);
    result.iterations = it;
    result.criterion_history.push_back(phi);
    if (!std::isfinite(phi))
      throw std::runtime_error("multiplicative_optimize: singular information on the grid");

    double max_viol = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (w[i] > opts.prune) max_viol = std::max(max_viol, std::abs(d[i] / phi - 1.0));
    if (max_viol <= opts.tol) {
      result.converged = true;
      break;
    }

    double total = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      w[i] *= std::sqrt(d[i] / phi);
      total += w[i];
    }
    for (double& wi : w) wi /= total;
  }

  // support extraction: points below the prune threshold are dropped
  std::vector<double> pts, wts;
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (w[i] > opts.prune) total += w[i];
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (w[i] > opts.prune) {
      pts.push_back(grid[i]);
      wts.push_back(w[i] / total);
    }
  result.design = Design(std::move(pts), std::move(wts));
  result.criterion = block_criterion(blocks, result.design);
  return result;
}

OptimizeResult multiplicative_optimize(const Scenario& scenario, const OptimizeOptions& opts) {
  const CriterionContext ctx = make_criterion_context(scenario);
  OptimizeResult result = multiplicative_optimize(criterion_blocks(ctx), opts);
  result.criterion = avar(ctx, result.design);
  return result;
}

double elfving_weight(const GammaComponentParams& params, const MeasurementSchedule& schedule,
                      double x_u) {
  if (!(x_u < 0.0)) throw std::domain_error("elfving_weight: x_u must be negative");
  const double lam_high = std::sqrt(intensity(params.beta0 + params.beta1, schedule));
  const double lam_low = std::sqrt(intensity(params.beta0, schedule));
  const double a = (1.0 + std::abs(x_u)) * lam_high;
  return a / (a + std::abs(x_u) * lam_low);
}

OptimizeResult two_point_search(const Scenario& scenario, double weight_step) {
  if (!(weight_step > 0.0 && weight_step < 0.5))
    throw std::invalid_argument("two_point_search: weight step must be in (0, 0.5)");
  const CriterionContext ctx = make_criterion_context(scenario);
  const std::vector<CriterionBlock> blocks = criterion_blocks(ctx);
  const auto crit = [&](double w) { return block_criterion(blocks, Design::two_point(w)); };

  double best_w = weight_step;
  double best_v = crit(best_w);
  for (double w = weight_step; w < 1.0 - 0.5 * weight_step; w += weight_step) {
    const double v = crit(w);
    if (v < best_v) {
      best_v = v;
      best_w = w;
    }
  }

  // golden-section refinement in the bracketing neighbourhood
  double lo = std::max(1e-9, best_w - weight_step);
  double hi = std::min(1.0 - 1e-9, best_w + weight_step);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = crit(x1), f2 = crit(x2);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = crit(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = crit(x2);
    }
  }
  OptimizeResult result;
  result.design = Design::two_point(0.5 * (lo + hi));
  result.criterion = avar(ctx, result.design);
  result.converged = true;
  result.iterations = 0;
  return result;
}

CertificateReport optimality_certificate(const Scenario& scenario, const Design& design,
                                         double grid_step, double tol) {
  const CriterionContext ctx = make_criterion_context(scenario);
  const std::vector<CriterionBlock> blocks = criterion_blocks(ctx);
  const double phi = block_criterion(blocks, design);
  CertificateReport report;
  report.tol = tol;
  report.criterion = phi;
  if (!std::isfinite(phi))
    throw std::invalid_argument("optimality_certificate: design is not estimable");

  // per-block solves against the candidate design
  struct Solved {
    double weight, u0, u1;
    const CriterionBlock* blk;
  };
  std::vector<Solved> solved;
  for (const auto& blk : blocks) {
    if (blk.weight == 0.0) continue;
    Sym2 m;
    for (std::size_t i = 0; i < design.size(); ++i) {
      const double x = design.points()[i];
      m += Sym2::outer(1.0, x, design.weights()[i] * blk.intensity(x));
    }
    double u0, u1;
    m.solve(blk.c0, blk.c1, u0, u1);
    solved.push_back({blk.weight, u0, u1, &blk});
  }

  const std::vector<double> grid = make_grid(grid_step);
  double max_excess = -std::numeric_limits<double>::infinity();
  double worst_x = grid.front();
  for (double x : grid) {
    double d = 0.0;
    for (const auto& s : solved) {
      const double lin = s.u0 + s.u1 * x;
      d += s.weight * s.blk->intensity(x) * lin * lin;
    }
    const double excess = d / phi - 1.0;
    if (excess > max_excess) {
      max_excess = excess;
      worst_x = x;
    }
  }
  report.max_excess = max_excess;
  report.worst_x = worst_x;
  report.pass = max_excess <= tol;
  return report;
}

}  // namespace adt
