#pragma once

#include <map>
#include <string>
#include <vector>

#include "steinbound/moments.hpp"
#include "steinbound/pmf.hpp"

// Total-variation error bounds for approximating a sum of independent
// non-negative-integer components: by a Poisson law (matching the mean) and
// by a Poisson-convoluted-geometric law (matching mean and variance), plus
// the smoothness term of Mattner & Roos (2007) and the comparison bounds of
// Le Cam (1960), Vellaisamy & Upadhye (2009) and Hung & Giang (2016).

namespace steinbound::bounds {

struct Precondition {
  std::string name;
  bool ok = false;
  double margin = 0.0;  // positive iff satisfied
};

struct BoundReport {
  std::string theorem;
  double value = 0.0;  // +infinity when a precondition fails
  double uncertainty = 0.0;
  std::vector<Precondition> preconditions;
  std::map<std::string, double> intermediates;

  bool ok() const;
};

// d_TV(W, Po(mu)) <= |mu2| / max(1, mu).  Convergence-gate failures in the
// coefficient streams propagate as exceptions.
BoundReport poisson_bound(const std::vector<pmf::ComponentFamily>& components);

struct MatchedParameters {
  double lambda = 0.0;
  double p = 0.0;
  bool lambda_positive = false;
};

// Mean/variance matching for the Poisson-geometric target:
// lambda = mu - sqrt(sigma2 - mu), p = 1 / (1 + sqrt(sigma2 - mu)).
// Throws std::domain_error when sigma2 <= mu (under-dispersion).
MatchedParameters match_parameters(const moments::MomentSummary& m);

// d_TV(W, Po(lambda) * Ge(p)) bound with matched parameters:
//   lambda sqrt(2/pi) |mu3 - 2 (q/p)^3| (1/4 + sum_i (1 - d_TV(xi_i, xi_i+1)))^{-1/2}
//   / ((lambda - 2 (q/p)^2) max(1, lambda))
// Requires sigma2 > mu and lambda > 2 (q/p)^2; on failure returns a report
// with infinite value and the violated margin recorded.
BoundReport poisson_geometric_bound(
    const std::vector<pmf::ComponentFamily>& components);

// Smoothness term: upper bound on d_TV(W, W+1),
//   sqrt(2/pi) (1/4 + sum_i (1 - tv_shift(xi_i)))^{-1/2}.
double mattner_roos_term(const std::vector<pmf::ComponentFamily>& components);

// Vellaisamy-Upadhye bound for a sum of n negative binomials:
//   min(1, 1/sqrt(2 lambda e)) sum_i alpha_i q_i^2 / p_i.
// lambda defaults to the per-component mean (sum alpha_i q_i) / n, which is
// the reading that reproduces the published comparison table; pass
// total_mean_lambda to use sum alpha_i q_i instead.  Scalars broadcast to n.
BoundReport vu_bound(long n, std::vector<double> alphas,
                     std::vector<double> ps, bool total_mean_lambda = false);

// Hung-Giang bound for a sum of negative binomials (r_i, p_i):
//   sum_i min{lambda^{-1} (1 - e^{-lambda}) r_i q_i, q_i} q_i / p_i,
// lambda = sum r_i q_i / p_i.  Also reports the simplified O(n) form
// sum q_i^2 / p_i taken when every min resolves to q_i.
BoundReport hung_giang_bound(std::vector<double> rs, std::vector<double> ps);

// Le Cam / Khintchine bound for a sum of Bernoullis: sum p_i^2, reported
// next to the Poisson-bound value sum p_i^2 / max(1, mu).
BoundReport lecam_bound(const std::vector<double>& ps);

}  // namespace steinbound::bounds
