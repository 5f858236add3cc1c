#pragma once

#include <vector>

#include "steinbound/gcoeff.hpp"
#include "steinbound/pmf.hpp"

// Mean, variance and the second/third factorial cumulants of a sum of
// independent components, computed from the log-derivative coefficient
// streams:
//   mu     = sum_i sum_j g_i[j]
//   mu2    = sum_i sum_j j g_i[j]          (= sigma^2 - mu)
//   mu3    = sum_i sum_j j (j-1) g_i[j]
//   sigma2 = mu + mu2
// `uncertainty` bounds the total truncation effect across all four values.

namespace steinbound::moments {

struct MomentSummary {
  double mu = 0.0;
  double sigma2 = 0.0;
  double mu2 = 0.0;
  double mu3 = 0.0;
  double uncertainty = 0.0;
};

// Throws std::domain_error if any stream failed the convergence gate.
MomentSummary moments_of(const std::vector<gcoeff::GCoefficients>& components);

// Independent cross-check from a materialized law: factorial moments
// f_r = E[X(X-1)...(X-r+1)] converted to factorial cumulants
// (mu2 = f2 - f1^2, mu3 = f3 - 3 f1 f2 + 2 f1^3).
MomentSummary moments_from_pmf(const pmf::TruncatedPMF& law);

}  // namespace steinbound::moments
