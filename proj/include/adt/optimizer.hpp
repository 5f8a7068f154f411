#pragma once

#include <vector>

#include "adt/design.hpp"

namespace adt {

struct OptimizeOptions {
  double grid_step = 0.01;  // stress grid resolution on [0, 1]
  int max_iter = 50000;
  double tol = 1e-7;     // sensitivity stationarity tolerance over the support
  double prune = 1e-8;   // weights below this are dropped from the support
};

struct OptimizeResult {
  Design design{{0.0, 1.0}, {0.5, 0.5}};
  double criterion = 0.0;  // avar of the returned design
  int iterations = 0;
  bool converged = false;
  std::vector<double> criterion_history;  // criterion value after each iteration
};

// Multiplicative algorithm on an equidistant stress grid. Weights are updated
// with the square-root (Fellman) rule w_i <- w_i (d_i / phi)^{1/2}, which is
// monotone for c-type criteria; the exponent-1 rule oscillates here.
OptimizeResult multiplicative_optimize(const Scenario& scenario, const OptimizeOptions& opts = {});
OptimizeResult multiplicative_optimize(const std::vector<CriterionBlock>& blocks,
                                       const OptimizeOptions& opts = {});

// Closed-form Elfving weight of the two-point design on {0, 1} for a single
// gamma component, x_u < 0 required:
//   w* = (1+|x_u|) sqrt(lambda(b0+b1)) / ((1+|x_u|) sqrt(lambda(b0+b1)) + |x_u| sqrt(lambda(b0)))
double elfving_weight(const GammaComponentParams& params, const MeasurementSchedule& schedule,
                      double x_u);

// Best design of the family {0: w, 1: 1-w}: coarse scan followed by
// golden-section refinement to 1e-6 in w.
OptimizeResult two_point_search(const Scenario& scenario, double weight_step = 1e-3);

struct CertificateReport {
  double criterion = 0.0;   // design-dependent criterion part of the candidate
  double max_excess = 0.0;  // max over the grid of d(x)/criterion - 1
  double worst_x = 0.0;
  double tol = 1e-4;
  bool pass = false;
};

// Equivalence-theorem check: the candidate is optimal on the grid iff the
// sensitivity function nowhere exceeds the criterion value (relative excess
// within tol).
CertificateReport optimality_certificate(const Scenario& scenario, const Design& design,
                                         double grid_step = 0.01, double tol = 1e-4);

}  // namespace adt
