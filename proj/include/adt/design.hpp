#pragma once

#include <functional>
#include <vector>

#include "adt/failure_time.hpp"

namespace adt {

// Approximate design: standardized stress levels in [0, 1] with positive
// weights summing to one. Construction canonicalizes: support is sorted and
// exact duplicate points are merged by summing their weights.
class Design {
 public:
  Design(std::vector<double> points, std::vector<double> weights);

  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return points_.size(); }

  // Two-point design with weight w0 at x = 0 and 1 - w0 at x = 1.
  static Design two_point(double w0);
  // Uniform design on m equidistant levels covering [0, 1].
  static Design uniform(std::size_t m);

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
};

// Scenario-level constants of the c-criterion; they depend on the nominal
// parameters only, never on the design.
struct CriterionContext {
  Scenario scenario;
  double t_alpha = 0.0;
  double c1 = 1.0;               // gradient constant of the first component
  double c2 = 0.0;               // gradient constant of the second component
  double c_varsigma_sq = 0.0;    // additive variance-parameter constant (gamma+LMEM)
  double density = 1.0;          // f_T(t_alpha)
};

CriterionContext make_criterion_context(const Scenario& scenario);

// One quadratic-form block of the (compound) criterion:
//   weight * (c0, c1) M^-1 (c0, c1)^T,  M = sum_i w_i intensity(x_i) (1,x_i)(1,x_i)^T.
struct CriterionBlock {
  double weight = 1.0;
  double c0 = 1.0;
  double c1 = 0.0;
  std::function<double(double)> intensity;  // lambda_l(x); constant 1 for the moment block
};

std::vector<CriterionBlock> criterion_blocks(const CriterionContext& ctx);

// Design-dependent part of the criterion, sum of the weighted quadratic
// forms. Non-estimable designs yield +infinity.
double block_criterion(const std::vector<CriterionBlock>& blocks, const Design& design);

// Family-dispatched asymptotic-variance criterion:
//   Gamma:       (1, x_u) M^-1 (1, x_u)^T                       (direction-only)
//   Gamma+Gamma: c1^2 q1 + c2^2 q2                              (common scale factored out)
//   Gamma+LMEM:  f_T(t_a)^-2 (c1^2 q1 + c2^2 q_m + c_varsigma^2)
// Returns +infinity for non-estimable designs.
double avar(const CriterionContext& ctx, const Design& design);
double avar(const Scenario& scenario, const Design& design);

// eff(design) = avar(optimal) / avar(design), in (0, 1]; 0 if design is not
// estimable.
double efficiency(const Scenario& scenario, const Design& design, const Design& optimal);

}  // namespace adt
