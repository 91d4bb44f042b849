#pragma once

#include <vector>

#include "fleetflow/support.hpp"

namespace fleetflow::value {

// Generalized asymmetric loss |tau - 1{u<0}| * |u|^p. p = 1 is the pinball
// (quantile) loss, p = 2 the expectile loss.
double asymmetric_loss(double u, double tau, int p);

// Direct scalar minimizer of sum_i asymmetric_loss(u_i - v) over v, by
// golden-section search on the convex objective.
double direct_asymmetric_minimizer(const std::vector<double>& samples,
                                   double tau, int p, double tol = 1e-10);

// Categorical fit of an empirical sample set: the average of the per-sample
// two-atom projections.
CategoricalValueDistribution fit_categorical(const std::vector<double>& samples,
                                             const ValueSupport& support);

// Expectile of a categorical distribution, solved by bisection on the
// first-order condition over [v_min, v_max].
double categorical_expectile(const CategoricalValueDistribution& dist,
                             double tau, double tol = 1e-8);

struct StatisticComparison {
  double direct = 0.0;   // scalar asymmetric regression optimum
  double extracted = 0.0;  // distribution fit + statistic extraction
};

// Computes both routes to the same asymmetric statistic: the direct scalar
// minimizer and the fit-then-extract value (quantile for p=1, expectile for
// p=2). Agreement within a couple of atom widths is the correctness oracle
// for the distributional value path.
StatisticComparison compare_asymmetric_routes(const std::vector<double>& samples,
                                              double tau, int p,
                                              const ValueSupport& support);

}  // namespace fleetflow::value
