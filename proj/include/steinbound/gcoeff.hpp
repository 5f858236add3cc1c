#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "steinbound/pmf.hpp"

// Coefficient streams of the logarithmic derivative of a component PGF:
// psi'(w)/psi(w) = sum_{j>=0} g_{j+1} w^j.  These streams are the raw
// material for factorial-cumulant moments and for the convolution Stein
// operator.  Each stream carries certified bounds on the truncated tail,
// both unweighted and weighted by j and j(j-1).

namespace steinbound::gcoeff {

using pmf::ComponentFamily;
using pmf::TruncatedPMF;

inline constexpr std::size_t kDefaultTruncLen = 200;

struct GCoefficients {
  std::vector<double> coeffs;        // coeffs[j] = g_{j+1}
  double remainder_bound = 0.0;      // bound on sum_{j >= len} |g_{j+1}|
  double remainder_bound_j = 0.0;    // ... weighted by j
  double remainder_bound_jj = 0.0;   // ... weighted by j(j-1)
  bool converges_at_one = true;      // empirical ratio test on |g|
};

// Closed-form stream for a parametric family:
//   Poisson(lambda):        lambda, 0, 0, ...
//   Geometric(p):           q^{j+1}
//   Bernoulli/Binomial(n,p): n (-1)^j (p/q)^{j+1}  (requires p < 1/2)
//   NegBinomial(alpha,p):   alpha q^{j+1}
//   TwoRuns(p):             g_1 = 1, g_2 = 1 - 2p^2, g_{j+1} = g_j - p^2 g_{j-1}
// Throws std::domain_error for Bernoulli/Binomial with p >= 1/2 (the
// alternating series has ratio p/q >= 1 and diverges at w = 1) and
// std::invalid_argument for custom families.
GCoefficients g_closed_form(const ComponentFamily& family,
                            std::size_t trunc_len = kDefaultTruncLen);

// Independent oracle: the formal power-series quotient psi'/psi computed by
// long division from the stored PMF,
//   g_{j+1} = ((j+1) probs[j+1] - sum_{k<j} g_{k+1} probs[j-k]) / probs[0].
// Requires probs[0] > 0.
GCoefficients g_from_pmf(const TruncatedPMF& pmf,
                         std::size_t trunc_len = kDefaultTruncLen);

// Closed-form stream grown until the full weighted tail estimate
// (remainder_bound + remainder_bound_j + remainder_bound_jj) drops below
// tol.  Throws std::domain_error when the cap is hit first.
GCoefficients g_auto(const ComponentFamily& family, double tol = 1e-12);

struct GSumCheck {
  double sum = 0.0;            // sum of the stored coefficients
  double analytic_mean = 0.0;  // family mean
  double abs_error = 0.0;
  double allowance = 0.0;      // remainder_bound + 1e-10
  bool ok = false;
};

// Validates sum_j g_{j+1} against the analytic mean of the family.
GSumCheck g_sum_check(const GCoefficients& g, const ComponentFamily& family);

}  // namespace steinbound::gcoeff
