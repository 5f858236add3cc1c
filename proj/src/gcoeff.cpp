#include "steinbound/gcoeff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "steinbound/kernels.hpp"

namespace steinbound::gcoeff {

namespace {

constexpr std::size_t kAutoLenCap = std::size_t{1} << 20;
constexpr double kRatioCap = 0.9999;

// Geometric tail sums for |g_{J+k}| <= a0 * r^k, k >= 0, with polynomial
// weights 1, (J+k), (J+k)(J+k-1).  Writes the three remainder fields.
void set_remainders(GCoefficients& g, double a0, double r) {
  const double J = double(g.coeffs.size());
  if (a0 == 0.0 || r == 0.0) {
    g.remainder_bound = a0;
    g.remainder_bound_j = a0 * J;
    g.remainder_bound_jj = a0 * J * (J - 1);
    return;
  }
  r = std::min(r, kRatioCap);
  const double u = 1.0 / (1.0 - r);
  const double s0 = u;                      // sum r^k
  const double s1 = r * u * u;              // sum k r^k
  const double s2 = r * (1.0 + r) * u * u * u;  // sum k^2 r^k
  g.remainder_bound = a0 * s0;
  g.remainder_bound_j = a0 * (J * s0 + s1);
  g.remainder_bound_jj =
      a0 * (J * (J - 1.0) * s0 + (2.0 * J - 1.0) * s1 + s2);
}

// Empirical decay model for streams without a usable closed-form tail:
// amplitude A and ratio r from the last windows, with a safety factor.
void estimate_remainders(GCoefficients& g) {
  const auto& c = g.coeffs;
  const std::size_t n = c.size();
  const std::size_t w = 16;
  if (n < 2 * w) {
    double amax = 0.0;
    for (double v : c) amax = std::max(amax, std::abs(v));
    set_remainders(g, 2.0 * amax, 0.9);  // too short to estimate; be blunt
    g.converges_at_one = true;
    return;
  }
  double a1 = 0.0, a0 = 0.0;
  for (std::size_t i = n - w; i < n; ++i) a1 = std::max(a1, std::abs(c[i]));
  for (std::size_t i = n - 2 * w; i < n - w; ++i)
    a0 = std::max(a0, std::abs(c[i]));
  if (a1 == 0.0) {  // stream died out entirely
    set_remainders(g, 0.0, 0.0);
    g.converges_at_one = true;
    return;
  }
  double rwin = a0 > 0 ? std::pow(a1 / a0, 1.0 / double(w)) : kRatioCap;
  double rpair = 0.0;
  for (std::size_t i = n - 8; i + 1 < n; ++i)
    if (std::abs(c[i]) > 1e-300)
      rpair = std::max(rpair, std::abs(c[i + 1]) / std::abs(c[i]));
  double r = std::min(kRatioCap, std::max(rpair, rwin * 1.02));
  g.converges_at_one = rwin < 1.0;
  set_remainders(g, 2.0 * a1 * r, r);
}

GCoefficients geometric_like(double scale, double ratio, std::size_t len) {
  GCoefficients g;
  g.coeffs.resize(len);
  double term = scale * ratio;  // g_1 = scale * ratio
  for (std::size_t j = 0; j < len; ++j) {
    g.coeffs[j] = term;
    term *= ratio;
  }
  // after the loop, term is the first omitted coefficient
  set_remainders(g, std::abs(term), std::abs(ratio));
  g.converges_at_one = std::abs(ratio) < 1.0;
  return g;
}

GCoefficients two_runs_stream(double p, std::size_t len) {
  const double p2 = p * p;
  GCoefficients g;
  g.coeffs.resize(len);
  for (std::size_t j = 0; j < len; ++j) {
    if (j == 0)
      g.coeffs[j] = 1.0;
    else if (j == 1)
      g.coeffs[j] = 1.0 - 2.0 * p2;
    else
      g.coeffs[j] = g.coeffs[j - 1] - p2 * g.coeffs[j - 2];
  }
  g.converges_at_one = true;  // root moduli exceed 1 for every p in (0,1)
  if (p <= 0.5) {
    // Real roots: the term ratio increases towards (1 + sqrt(1-4p^2))/2, so
    // that limit bounds every omitted term from the last stored one.
    const double r = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - 4.0 * p2)));
    const double a0 = std::abs(g.coeffs.back()) * r;
    set_remainders(g, a0, r);
  } else {
    // Complex roots: |g_j| <= C p^j with C fitted over the last window (the
    // cosine factor passes near its peak at least once per period).
    const std::size_t w = std::min<std::size_t>(len, 64);
    double cmax = 0.0;
    for (std::size_t i = len - w; i < len; ++i)
      cmax = std::max(cmax, std::abs(g.coeffs[i]) * std::pow(p, -double(i)));
    set_remainders(g, cmax * std::pow(p, double(len)), p);
  }
  return g;
}

}  // namespace

GCoefficients g_closed_form(const ComponentFamily& family,
                            std::size_t trunc_len) {
  family.validate();
  if (trunc_len < 1)
    throw std::invalid_argument("g_closed_form: trunc_len must be >= 1");

  using Kind = ComponentFamily::Kind;
  switch (family.kind) {
    case Kind::poisson: {
      GCoefficients g;
      g.coeffs.assign(trunc_len, 0.0);
      g.coeffs[0] = family.a;
      set_remainders(g, 0.0, 0.0);
      g.converges_at_one = true;
      return g;
    }
    case Kind::geometric:
      return geometric_like(1.0, 1.0 - family.a, trunc_len);
    case Kind::bernoulli:
    case Kind::binomial: {
      const double p = family.a, q = 1.0 - family.a;
      if (p >= 0.5)
        throw std::domain_error(
            family.name() +
            ": log-derivative series has term ratio p/(1-p) >= 1 and "
            "diverges at w = 1; only p < 1/2 is accepted");
      // n (-1)^j (p/q)^{j+1} = (-n) * (-p/q)^{j+1}
      const double n =
          family.kind == Kind::bernoulli ? 1.0 : double(family.n);
      return geometric_like(-n, -p / q, trunc_len);
    }
    case Kind::neg_binomial:
      return geometric_like(family.a, 1.0 - family.b, trunc_len);
    case Kind::two_runs:
      return two_runs_stream(family.a, trunc_len);
    case Kind::custom:
      throw std::invalid_argument(
          "g_closed_form: no closed form for a custom PMF; use g_from_pmf");
  }
  throw std::logic_error("g_closed_form: unhandled family kind");
}

GCoefficients g_from_pmf(const TruncatedPMF& pmf, std::size_t trunc_len) {
  if (pmf.probs.empty() || pmf.probs[0] <= 0)
    throw std::invalid_argument(
        "g_from_pmf: probs[0] must be positive (series quotient is "
        "undefined at the origin)");
  if (trunc_len < 1)
    throw std::invalid_argument("g_from_pmf: trunc_len must be >= 1");

  const auto& P = pmf.probs;
  auto at = [&](std::size_t k) -> double {
    return k < P.size() ? P[k] : 0.0;
  };

  GCoefficients g;
  g.coeffs.resize(trunc_len);
  for (std::size_t j = 0; j < trunc_len; ++j) {
    double acc = double(j + 1) * at(j + 1);
    for (std::size_t k = 0; k < j; ++k) acc -= g.coeffs[k] * at(j - k);
    g.coeffs[j] = acc / P[0];
  }
  estimate_remainders(g);
  return g;
}

GCoefficients g_auto(const ComponentFamily& family, double tol) {
  if (tol <= 0) throw std::invalid_argument("g_auto: tol must be positive");

  // Custom laws have no closed form; their stream comes from the division
  // recurrence, which needs the complete law (a missing tail would silently
  // change every coefficient).
  const bool custom = family.kind == ComponentFamily::Kind::custom;
  TruncatedPMF law;
  if (custom) {
    law = pmf::materialize(family);
    if (law.tail_bound > pmf::kNormTol)
      throw std::domain_error(
          "g_auto: custom component mass sums below 1; the log-derivative "
          "stream requires the complete law");
  }

  std::size_t len = kDefaultTruncLen;
  while (true) {
    GCoefficients g =
        custom ? g_from_pmf(law, len) : g_closed_form(family, len);
    double total =
        g.remainder_bound + g.remainder_bound_j + g.remainder_bound_jj;
    if (g.converges_at_one && total <= tol) return g;
    if (!g.converges_at_one && len >= 4 * kDefaultTruncLen)
      throw std::domain_error(
          "g_auto: series coefficients show no decay for " + family.name() +
          "; the log-derivative stream diverges at w = 1");
    if (len >= kAutoLenCap)
      throw std::domain_error(
          "g_auto: could not certify the series tail below tolerance for " +
          family.name() + " (residual " + std::to_string(total) + ")");
    len *= 2;
  }
}

GSumCheck g_sum_check(const GCoefficients& g, const ComponentFamily& family) {
  GSumCheck out;
  out.sum = kernels::sum(g.coeffs.data(), g.coeffs.size());
  out.analytic_mean = family.mean();
  out.abs_error = std::abs(out.sum - out.analytic_mean);
  out.allowance = g.remainder_bound + 1e-10;
  out.ok = out.abs_error <= out.allowance;
  return out;
}

}  // namespace steinbound::gcoeff
