#include "fleetflow/asymmetric.hpp"

#include <algorithm>
#include <cmath>

namespace fleetflow::value {

double asymmetric_loss(double u, double tau, int p) {
  if (!(tau > 0.0 && tau < 1.0))
    throw ContractError("asymmetric_loss: tau must lie in (0, 1)");
  if (p != 1 && p != 2) throw ContractError("asymmetric_loss: p must be 1 or 2");
  const double w = std::abs(tau - (u < 0.0 ? 1.0 : 0.0));
  return p == 1 ? w * std::abs(u) : w * u * u;
}

double direct_asymmetric_minimizer(const std::vector<double>& samples,
                                   double tau, int p, double tol) {
  if (samples.empty())
    throw ContractError("direct_asymmetric_minimizer: need at least one sample");
  auto objective = [&](double v) {
    double s = 0.0;
    for (double u : samples) s += asymmetric_loss(u - v, tau, p);
    return s;
  };
  double lo = *std::min_element(samples.begin(), samples.end());
  double hi = *std::max_element(samples.begin(), samples.end());
  if (hi - lo < tol) return lo;
  // Golden-section: the objective is convex, hence unimodal.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c), fd = objective(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  return 0.5 * (a + b);
}

CategoricalValueDistribution fit_categorical(const std::vector<double>& samples,
                                             const ValueSupport& support) {
  if (samples.empty())
    throw ContractError("fit_categorical: need at least one sample");
  CategoricalValueDistribution dist;
  dist.support = support;
  dist.probs.assign(support.atoms, 0.0);
  const double w = 1.0 / static_cast<double>(samples.size());
  for (double u : samples) {
    const auto proj = c51_project(u, support);
    // Each projection touches at most two atoms; accumulate sparsely.
    for (int i = 0; i < support.atoms; ++i)
      if (proj.probs[i] != 0.0) dist.probs[i] += w * proj.probs[i];
  }
  return dist;
}

double categorical_expectile(const CategoricalValueDistribution& dist,
                             double tau, double tol) {
  dist.validate();
  if (!(tau > 0.0 && tau < 1.0))
    throw ContractError("categorical_expectile: tau must lie in (0, 1)");
  // First-order condition of E[rho_{tau,2}(U - v)]:
  //   g(v) = sum_i p_i * w_i(v) * (u_i - v),  w_i = tau if u_i >= v else 1-tau.
  // g is continuous and strictly decreasing in v.
  auto g = [&](double v) {
    double s = 0.0;
    for (int i = 0; i < dist.support.atoms; ++i) {
      if (dist.probs[i] == 0.0) continue;
      const double u = dist.support.atom(i);
      const double w = u >= v ? tau : (1.0 - tau);
      s += dist.probs[i] * w * (u - v);
    }
    return s;
  };
  double lo = dist.support.v_min, hi = dist.support.v_max;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

StatisticComparison compare_asymmetric_routes(const std::vector<double>& samples,
                                              double tau, int p,
                                              const ValueSupport& support) {
  StatisticComparison out;
  out.direct = direct_asymmetric_minimizer(samples, tau, p);
  const auto dist = fit_categorical(samples, support);
  out.extracted =
      p == 1 ? quantile(dist, tau) : categorical_expectile(dist, tau);
  return out;
}

}  // namespace fleetflow::value
