#include "steinbound/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "steinbound/kernels.hpp"

namespace steinbound::pmf {

namespace {

constexpr std::size_t kMaxSupport = std::size_t{1} << 22;
constexpr double kClampTol = 1e-14;  // recurrence round-off allowance

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

ComponentFamily ComponentFamily::poisson(double lambda) {
  ComponentFamily f;
  f.kind = Kind::poisson;
  f.a = lambda;
  f.validate();
  return f;
}

ComponentFamily ComponentFamily::geometric(double p) {
  ComponentFamily f;
  f.kind = Kind::geometric;
  f.a = p;
  f.validate();
  return f;
}

ComponentFamily ComponentFamily::bernoulli(double p) {
  ComponentFamily f;
  f.kind = Kind::bernoulli;
  f.a = p;
  f.validate();
  return f;
}

ComponentFamily ComponentFamily::binomial(long n, double p) {
  ComponentFamily f;
  f.kind = Kind::binomial;
  f.n = n;
  f.a = p;
  f.validate();
  return f;
}

ComponentFamily ComponentFamily::neg_binomial(double alpha, double p) {
  ComponentFamily f;
  f.kind = Kind::neg_binomial;
  f.a = alpha;
  f.b = p;
  f.validate();
  return f;
}

ComponentFamily ComponentFamily::two_runs(double p) {
  ComponentFamily f;
  f.kind = Kind::two_runs;
  f.a = p;
  f.validate();
  return f;
}

ComponentFamily ComponentFamily::custom_pmf(std::vector<double> probs) {
  ComponentFamily f;
  f.kind = Kind::custom;
  f.custom = std::move(probs);
  f.validate();
  return f;
}

void ComponentFamily::validate() const {
  switch (kind) {
    case Kind::poisson:
      require(a > 0, "Poisson: lambda must be > 0, got " + fmt(a));
      break;
    case Kind::geometric:
      require(a > 0 && a < 1, "Geometric: p must be in (0,1), got " + fmt(a));
      break;
    case Kind::bernoulli:
      require(a > 0 && a < 1, "Bernoulli: p must be in (0,1), got " + fmt(a));
      break;
    case Kind::binomial:
      require(n >= 1, "Binomial: n must be >= 1, got " + std::to_string(n));
      require(a > 0 && a < 1, "Binomial: p must be in (0,1), got " + fmt(a));
      break;
    case Kind::neg_binomial:
      require(a > 0, "NegBinomial: alpha must be > 0, got " + fmt(a));
      require(b > 0 && b < 1,
              "NegBinomial: p must be in (0,1), got " + fmt(b));
      break;
    case Kind::two_runs:
      require(a > 0 && a < 1, "TwoRuns: p must be in (0,1), got " + fmt(a));
      break;
    case Kind::custom:
      require(!custom.empty(), "Custom: probability vector is empty");
      require(custom[0] > 0, "Custom: probs[0] must be > 0");
      for (std::size_t i = 0; i < custom.size(); ++i)
        require(custom[i] >= 0, "Custom: negative entry at index " +
                                    std::to_string(i));
      require(kernels::sum(custom.data(), custom.size()) <= 1.0 + kNormTol,
              "Custom: entries sum to more than 1");
      break;
  }
}

double ComponentFamily::mean() const {
  switch (kind) {
    case Kind::poisson: return a;
    case Kind::geometric: return (1.0 - a) / a;
    case Kind::bernoulli: return a;
    case Kind::binomial: return static_cast<double>(n) * a;
    case Kind::neg_binomial: return a * (1.0 - b) / b;
    case Kind::two_runs: return (1.0 - 2.0 * a * a) / (a * a);
    case Kind::custom: {
      double m = 0.0;
      for (std::size_t j = 0; j < custom.size(); ++j) m += double(j) * custom[j];
      return m;
    }
  }
  return 0.0;
}

std::string ComponentFamily::name() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::poisson: os << "Poisson(" << a << ")"; break;
    case Kind::geometric: os << "Geometric(" << a << ")"; break;
    case Kind::bernoulli: os << "Bernoulli(" << a << ")"; break;
    case Kind::binomial: os << "Binomial(" << n << "," << a << ")"; break;
    case Kind::neg_binomial: os << "NegBinomial(" << a << "," << b << ")"; break;
    case Kind::two_runs: os << "TwoRuns(" << a << ")"; break;
    case Kind::custom: os << "Custom[" << custom.size() << "]"; break;
  }
  return os.str();
}

double TruncatedPMF::mass() const {
  return kernels::sum(probs.data(), probs.size());
}

namespace {

// Append terms produced by `next` until the cumulative mass reaches
// 1 - tail_tol (or the terms underflow).  Terms must be non-negative.
template <typename Gen>
TruncatedPMF fill_until(Gen next, double tail_tol) {
  TruncatedPMF out;
  double cum = 0.0;
  while (true) {
    double term = next();
    out.probs.push_back(term);
    cum += term;
    if (cum >= 1.0 - tail_tol) break;
    if (term > 0 && term < 1e-306 && out.probs.size() > 8) break;
    if (out.probs.size() >= kMaxSupport)
      throw std::domain_error(
          "materialize: support exceeds limit; loosen tail_tol or shrink "
          "parameters");
  }
  out.tail_bound = std::max(0.0, 1.0 - cum);
  return out;
}

TruncatedPMF materialize_two_runs(double p, double tail_tol) {
  const double p2 = p * p;
  TruncatedPMF out;
  double cum = 0.0;
  double cprev2 = 0.0, cprev = 0.0;  // c_{j-2}, c_{j-1}
  std::size_t j = 0;
  auto step = [&]() {
    double c = j == 0 || j == 1 ? 1.0 : cprev - p2 * cprev2;
    cprev2 = cprev;
    cprev = c;
    ++j;
    return p2 * c;
  };
  while (true) {
    double b = step();
    if (b < -kClampTol)
      throw std::domain_error(
          "TwoRuns(" + fmt(p) +
          "): series coefficient is negative at index " +
          std::to_string(j - 1) + "; no probability law exists for p > 1/2");
    out.probs.push_back(std::max(b, 0.0));
    cum += b;
    if (cum >= 1.0 - tail_tol && j >= 2) break;
    // Underflow escape: once the series has decayed to the denormal floor,
    // cum can stagnate short of 1 - tail_tol and the loop would run to the
    // cap.  Two consecutive vanishing coefficients cannot happen transiently
    // in the oscillating (p > 1/2) regime — the root angle is at most pi/3 —
    // so this only fires when the whole remaining series is negligible.
    if (std::abs(b) < 1e-306 && p2 * std::abs(cprev2) < 1e-306 && j >= 8)
      break;
    if (out.probs.size() >= kMaxSupport)
      throw std::domain_error("TwoRuns: support exceeds limit");
  }
  // The partial sums of a genuine law approach 1 from below.  An overshoot
  // means negative coefficients lie ahead; find the first one and report it.
  if (cum > 1.0 + kNormTol) {
    for (std::size_t ahead = 0; ahead < 65536; ++ahead) {
      double b = step();
      if (b < -kClampTol)
        throw std::domain_error(
            "TwoRuns(" + fmt(p) +
            "): series coefficient is negative at index " +
            std::to_string(j - 1) + "; no probability law exists for p > 1/2");
    }
    throw std::domain_error("TwoRuns(" + fmt(p) +
                            "): series mass exceeds 1; not a probability law");
  }
  out.tail_bound = std::max(0.0, 1.0 - cum);
  return out;
}

}  // namespace

TruncatedPMF materialize(const ComponentFamily& family, double tail_tol) {
  family.validate();
  require(tail_tol > 0 && tail_tol < 1,
          "materialize: tail_tol must be in (0,1), got " + fmt(tail_tol));

  TruncatedPMF out;
  switch (family.kind) {
    case ComponentFamily::Kind::poisson: {
      const double lam = family.a;
      double term = std::exp(-lam);
      if (term == 0)
        throw std::domain_error("Poisson: lambda too large to materialize");
      long k = 0;
      out = fill_until(
          [&]() {
            double t = term;
            ++k;
            term *= lam / double(k);
            return t;
          },
          tail_tol);
      break;
    }
    case ComponentFamily::Kind::geometric: {
      const double p = family.a, q = 1.0 - family.a;
      double term = p;
      out = fill_until(
          [&]() {
            double t = term;
            term *= q;
            return t;
          },
          tail_tol);
      break;
    }
    case ComponentFamily::Kind::bernoulli:
      out.probs = {1.0 - family.a, family.a};
      out.tail_bound = 0.0;
      break;
    case ComponentFamily::Kind::binomial: {
      const long n = family.n;
      const double p = family.a, q = 1.0 - family.a;
      out.probs.resize(std::size_t(n) + 1);
      double term = std::pow(q, double(n));
      if (term == 0)
        throw std::domain_error("Binomial: q^n underflows; parameters too extreme");
      for (long k = 0; k <= n; ++k) {
        out.probs[std::size_t(k)] = term;
        term *= double(n - k) / double(k + 1) * (p / q);
      }
      out.tail_bound = 0.0;
      break;
    }
    case ComponentFamily::Kind::neg_binomial: {
      const double alpha = family.a, p = family.b, q = 1.0 - family.b;
      double term = std::pow(p, alpha);
      if (term == 0)
        throw std::domain_error(
            "NegBinomial: p^alpha underflows; parameters too extreme");
      long k = 0;
      out = fill_until(
          [&]() {
            double t = term;
            term *= q * (double(k) + alpha) / double(k + 1);
            ++k;
            return t;
          },
          tail_tol);
      break;
    }
    case ComponentFamily::Kind::two_runs:
      out = materialize_two_runs(family.a, tail_tol);
      break;
    case ComponentFamily::Kind::custom:
      out.probs = family.custom;
      out.tail_bound = std::max(0.0, 1.0 - out.mass());
      break;
  }
  out.origin = family;
  return out;
}

TruncatedPMF convolve(const TruncatedPMF& a, const TruncatedPMF& b) {
  const std::size_t na = a.probs.size(), nb = b.probs.size();
  TruncatedPMF out;
  out.probs.assign(na + nb - 1, 0.0);
  // out[k..k+nb) += a[k] * b : a row of axpys keeps the inner loop contiguous.
  for (std::size_t k = 0; k < na; ++k)
    kernels::axpy(a.probs[k], b.probs.data(), out.probs.data() + k, nb);
  out.tail_bound = a.tail_bound + b.tail_bound;
  return out;
}

TruncatedPMF convolve_n(const std::vector<ComponentFamily>& families,
                        double tail_tol) {
  require(!families.empty(), "convolve_n: empty component list");
  TruncatedPMF acc = materialize(families[0], tail_tol);
  for (std::size_t i = 1; i < families.size(); ++i)
    acc = convolve(acc, materialize(families[i], tail_tol));
  return acc;
}

TvResult tv_distance(const TruncatedPMF& a, const TruncatedPMF& b) {
  const std::size_t na = a.probs.size(), nb = b.probs.size();
  const std::size_t common = std::min(na, nb);
  double s = kernels::sum_abs_diff(a.probs.data(), b.probs.data(), common);
  if (na > common) s += kernels::sum_abs(a.probs.data() + common, na - common);
  if (nb > common) s += kernels::sum_abs(b.probs.data() + common, nb - common);
  return {0.5 * s, 0.5 * (a.tail_bound + b.tail_bound)};
}

double tv_shift(const TruncatedPMF& a) {
  const std::size_t n = a.probs.size();
  if (n == 0) return 0.0;
  double s = a.probs[0] + a.probs[n - 1];
  if (n > 1)
    s += kernels::sum_abs_diff(a.probs.data() + 1, a.probs.data(), n - 1);
  return 0.5 * s;
}

std::vector<double> two_runs_series(double p, std::size_t len) {
  require(p > 0 && p < 1, "two_runs_series: p must be in (0,1), got " + fmt(p));
  const double p2 = p * p;
  std::vector<double> b(len);
  double cprev2 = 0.0, cprev = 0.0;
  for (std::size_t j = 0; j < len; ++j) {
    double c = j < 2 ? 1.0 : cprev - p2 * cprev2;
    b[j] = p2 * c;
    cprev2 = cprev;
    cprev = c;
  }
  return b;
}

}  // namespace steinbound::pmf
