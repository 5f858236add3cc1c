#include "steinbound/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "steinbound/gcoeff.hpp"

namespace steinbound::bounds {

namespace {

constexpr double kStreamTol = 1e-12;
const double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);

moments::MomentSummary summarize(
    const std::vector<pmf::ComponentFamily>& components) {
  std::vector<gcoeff::GCoefficients> streams;
  streams.reserve(components.size());
  for (const auto& f : components) {
    // A two-runs component with p > 1/2 has a convergent coefficient stream
    // but is not a probability law, so no distance bound is meaningful;
    // materialize throws naming the first negative series coefficient.
    if (f.kind == pmf::ComponentFamily::Kind::two_runs && f.a > 0.5)
      pmf::materialize(f);
    streams.push_back(gcoeff::g_auto(f, kStreamTol));
  }
  return moments::moments_of(streams);
}

double mr_from_laws(const std::vector<pmf::TruncatedPMF>& laws) {
  double s = 0.0;
  for (const auto& law : laws) s += 1.0 - pmf::tv_shift(law);
  return kSqrt2OverPi / std::sqrt(0.25 + s);
}

}  // namespace

bool BoundReport::ok() const {
  for (const auto& pc : preconditions)
    if (!pc.ok) return false;
  return true;
}

BoundReport poisson_bound(
    const std::vector<pmf::ComponentFamily>& components) {
  if (components.empty())
    throw std::invalid_argument("poisson_bound: empty component list");
  const auto m = summarize(components);

  BoundReport r;
  r.theorem = "poisson";
  const double denom = std::max(1.0, m.mu);
  r.value = std::abs(m.mu2) / denom;
  const double d = std::max(1.0, m.mu - m.uncertainty);
  r.uncertainty = m.uncertainty * (1.0 + r.value) / d;
  r.intermediates = {{"mu", m.mu},
                     {"mu2", m.mu2},
                     {"mu3", m.mu3},
                     {"sigma2", m.sigma2},
                     {"numerator", std::abs(m.mu2)},
                     {"denominator", denom}};
  return r;
}

MatchedParameters match_parameters(const moments::MomentSummary& m) {
  if (!(m.sigma2 > m.mu))
    throw std::domain_error(
        "match_parameters: under-dispersion (sigma^2 - mu = " +
        std::to_string(m.sigma2 - m.mu) +
        "); the geometric matching requires sigma^2 > mu");
  const double s = std::sqrt(m.sigma2 - m.mu);
  MatchedParameters mp;
  mp.lambda = m.mu - s;
  mp.p = 1.0 / (1.0 + s);
  mp.lambda_positive = mp.lambda > 0;
  return mp;
}

BoundReport poisson_geometric_bound(
    const std::vector<pmf::ComponentFamily>& components) {
  if (components.empty())
    throw std::invalid_argument(
        "poisson_geometric_bound: empty component list");
  const auto m = summarize(components);

  BoundReport r;
  r.theorem = "poisson-geometric";
  r.intermediates = {{"mu", m.mu},
                     {"mu2", m.mu2},
                     {"mu3", m.mu3},
                     {"sigma2", m.sigma2}};

  const double overdisp = m.sigma2 - m.mu;
  r.preconditions.push_back({"sigma2 > mu", overdisp > 0, overdisp});
  if (!(overdisp > 0)) {
    r.value = kInf;
    return r;
  }

  const double s = std::sqrt(overdisp);
  const double lambda = m.mu - s;
  const double p = 1.0 / (1.0 + s);
  const double qp = s;  // q/p of the matched geometric
  r.intermediates["lambda"] = lambda;
  r.intermediates["p"] = p;
  r.intermediates["q_over_p"] = qp;

  r.intermediates["numerator"] = std::abs(m.mu3 - 2.0 * qp * qp * qp);
  r.intermediates["target_mu3"] = 2.0 * qp * qp * qp;

  const double den = lambda - 2.0 * qp * qp;
  r.preconditions.push_back({"lambda > 2 (q/p)^2", den > 0, den});
  if (!(den > 0)) {
    r.value = kInf;
    return r;
  }

  std::vector<pmf::TruncatedPMF> laws;
  laws.reserve(components.size());
  double tails = 0.0;
  for (const auto& f : components) {
    laws.push_back(pmf::materialize(f));
    tails += laws.back().tail_bound;
  }
  const double smooth = mr_from_laws(laws);
  const double num = r.intermediates.at("numerator");
  const double maxlam = std::max(1.0, lambda);
  r.value = lambda * num * smooth / (den * maxlam);

  r.intermediates["smoothness"] = smooth;
  r.intermediates["denominator"] = den * maxlam;

  // First-order truncation effect, evaluated as a worst-case re-composition.
  const double u = m.uncertainty;
  const double ds = u / s;
  const double dlam = u + ds;
  const double dnum = u + 6.0 * qp * qp * ds;
  const double dden = dlam + 4.0 * qp * ds;
  const double dsm = smooth * 0.5 * tails / 0.25;  // tv_shift tail slack
  if (den - dden > 0) {
    const double hi = (lambda + dlam) * (num + dnum) * (smooth + dsm) /
                      ((den - dden) * std::max(1.0, lambda - dlam));
    r.uncertainty = hi - r.value;
  } else {
    r.uncertainty = kInf;
  }
  return r;
}

double mattner_roos_term(
    const std::vector<pmf::ComponentFamily>& components) {
  if (components.empty())
    throw std::invalid_argument("mattner_roos_term: empty component list");
  std::vector<pmf::TruncatedPMF> laws;
  laws.reserve(components.size());
  for (const auto& f : components) laws.push_back(pmf::materialize(f));
  return mr_from_laws(laws);
}

BoundReport vu_bound(long n, std::vector<double> alphas,
                     std::vector<double> ps, bool total_mean_lambda) {
  if (n < 1) throw std::invalid_argument("vu_bound: n must be >= 1");
  auto broadcast = [n](std::vector<double>& v, const char* what) {
    if (v.size() == 1 && n > 1) v.assign(std::size_t(n), v[0]);
    if (v.size() != std::size_t(n))
      throw std::invalid_argument(std::string("vu_bound: ") + what +
                                  " list does not match n");
  };
  broadcast(alphas, "alpha");
  broadcast(ps, "p");

  double lambda_total = 0.0, sum_term = 0.0;
  for (long i = 0; i < n; ++i) {
    const double a = alphas[std::size_t(i)], p = ps[std::size_t(i)];
    if (a <= 0) throw std::invalid_argument("vu_bound: alpha must be > 0");
    if (p <= 0 || p >= 1)
      throw std::invalid_argument("vu_bound: p must be in (0,1)");
    const double q = 1.0 - p;
    lambda_total += a * q;
    sum_term += a * q * q / p;
  }
  const double lambda =
      total_mean_lambda ? lambda_total : lambda_total / double(n);
  const double prefactor =
      std::min(1.0, 1.0 / std::sqrt(2.0 * lambda * std::numbers::e));

  BoundReport r;
  r.theorem = "vellaisamy-upadhye";
  r.value = prefactor * sum_term;
  r.intermediates = {{"lambda", lambda},
                     {"lambda_total", lambda_total},
                     {"prefactor", prefactor},
                     {"sum_term", sum_term}};
  return r;
}

BoundReport hung_giang_bound(std::vector<double> rs, std::vector<double> ps) {
  if (rs.empty() || rs.size() != ps.size())
    throw std::invalid_argument(
        "hung_giang_bound: r and p lists must be non-empty and equal-sized");
  double lambda = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i] < 0) throw std::invalid_argument("hung_giang_bound: r must be >= 0");
    if (ps[i] <= 0 || ps[i] >= 1)
      throw std::invalid_argument("hung_giang_bound: p must be in (0,1)");
    lambda += rs[i] * (1.0 - ps[i]) / ps[i];
  }
  const double factor = lambda > 0 ? (1.0 - std::exp(-lambda)) / lambda : 1.0;

  double value = 0.0, simplified = 0.0;
  bool all_q = true;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double q = 1.0 - ps[i];
    const double lhs = factor * rs[i] * q;
    value += std::min(lhs, q) * q / ps[i];
    simplified += q * q / ps[i];
    if (lhs < q) all_q = false;
  }

  BoundReport r;
  r.theorem = "hung-giang";
  r.value = value;
  r.intermediates = {{"lambda", lambda},
                     {"damping", factor},
                     {"simplified_value", simplified},
                     {"min_resolves_to_q", all_q ? 1.0 : 0.0}};
  return r;
}

BoundReport lecam_bound(const std::vector<double>& ps) {
  if (ps.empty()) throw std::invalid_argument("lecam_bound: empty p list");
  double sum2 = 0.0, mu = 0.0;
  for (double p : ps) {
    if (p <= 0 || p >= 1)
      throw std::invalid_argument("lecam_bound: p must be in (0,1)");
    sum2 += p * p;
    mu += p;
  }
  BoundReport r;
  r.theorem = "le-cam";
  r.value = sum2;
  r.intermediates = {{"mu", mu},
                     {"poisson_bound_value", sum2 / std::max(1.0, mu)}};
  return r;
}

}  // namespace steinbound::bounds
