#include "steinbound/stein.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace steinbound::stein {

TestFunction TestFunction::from_values(std::vector<double> v) {
  if (v.empty())
    throw std::invalid_argument("TestFunction: needs at least h(0)");
  if (v[0] != 0.0)
    throw std::invalid_argument("TestFunction: h(0) must be 0");
  TestFunction h;
  h.values = std::move(v);
  for (double x : h.values) h.sup_norm = std::max(h.sup_norm, std::abs(x));
  for (std::size_t i = 0; i + 1 < h.values.size(); ++i)
    h.delta_sup_norm =
        std::max(h.delta_sup_norm, std::abs(h.values[i + 1] - h.values[i]));
  return h;
}

SteinOperatorSpec SteinOperatorSpec::poisson_op(double lambda) {
  if (lambda <= 0)
    throw std::invalid_argument("poisson_op: lambda must be > 0");
  SteinOperatorSpec op;
  op.kind = Kind::poisson;
  op.lambda = lambda;
  return op;
}

SteinOperatorSpec SteinOperatorSpec::convolution_op(
    std::vector<gcoeff::GCoefficients> streams) {
  if (streams.empty())
    throw std::invalid_argument("convolution_op: no coefficient streams");
  for (const auto& g : streams)
    if (!g.converges_at_one)
      throw std::domain_error(
          "convolution_op: a stream failed the convergence gate");
  SteinOperatorSpec op;
  op.kind = Kind::convolution;
  op.streams = std::move(streams);
  return op;
}

SteinOperatorSpec SteinOperatorSpec::poisson_geometric_op(double lambda,
                                                          double p) {
  if (lambda <= 0)
    throw std::invalid_argument("poisson_geometric_op: lambda must be > 0");
  if (p <= 0 || p >= 1)
    throw std::invalid_argument("poisson_geometric_op: p must be in (0,1)");
  SteinOperatorSpec op;
  op.kind = Kind::poisson_geometric;
  op.lambda = lambda;
  op.p = p;
  return op;
}

namespace {

// sum_k q^{k+1} h(j+k+1), summed exactly: once j+k+1 enters the constant
// region of h the remaining geometric mass is q^{k+1}/p in closed form.
double geometric_series_part(double p, const TestFunction& h, long j) {
  const double q = 1.0 - p;
  const long M = static_cast<long>(h.values.size()) - 1;
  double acc = 0.0;
  double qk1 = q;  // q^{k+1}
  long k = 0;
  for (; j + k + 1 < M; ++k) {
    acc += qk1 * h.values[std::size_t(j + k + 1)];
    qk1 *= q;
  }
  acc += qk1 / p * h.values.back();
  return acc;
}

}  // namespace

double apply_operator(const SteinOperatorSpec& op, const TestFunction& h,
                      long j) {
  if (j < 0) throw std::invalid_argument("apply_operator: j must be >= 0");
  const double base = -double(j) * h.at(j);
  switch (op.kind) {
    case SteinOperatorSpec::Kind::poisson:
      return op.lambda * h.at(j + 1) + base;
    case SteinOperatorSpec::Kind::poisson_geometric:
      return op.lambda * h.at(j + 1) + base +
             geometric_series_part(op.p, h, j);
    case SteinOperatorSpec::Kind::convolution: {
      double acc = base;
      for (const auto& g : op.streams) {
        const long M = static_cast<long>(h.values.size()) - 1;
        const long len = static_cast<long>(g.coeffs.size());
        // split at the point where h goes constant
        const long kc = std::min(len, std::max<long>(0, M - j));
        double s = 0.0;
        for (long k = 0; k < kc; ++k)
          s += g.coeffs[std::size_t(k)] * h.values[std::size_t(j + k + 1)];
        double rest = 0.0;
        for (long k = kc; k < len; ++k) rest += g.coeffs[std::size_t(k)];
        acc += s + rest * h.values.back();
      }
      return acc;
    }
  }
  throw std::logic_error("apply_operator: unhandled kind");
}

double apply_operator_delta_form(const SteinOperatorSpec& op,
                                 const TestFunction& h, long j) {
  if (j < 0) throw std::invalid_argument("apply_operator: j must be >= 0");
  const long M = static_cast<long>(h.values.size()) - 1;
  const double base = -double(j) * h.at(j);
  auto dh = [&](long x) {  // h(x+1) - h(x); zero once x >= M
    return x >= M ? 0.0 : h.values[std::size_t(x + 1)] - h.values[std::size_t(x)];
  };
  switch (op.kind) {
    case SteinOperatorSpec::Kind::poisson:
      return op.lambda * h.at(j + 1) + base;
    case SteinOperatorSpec::Kind::poisson_geometric: {
      const double q = 1.0 - op.p;
      double acc = op.lambda * h.at(j + 1) + base + q / op.p * h.at(j + 1);
      double qm1 = q * q;  // q^{m+1}
      for (long m = 1; j + m < M; ++m) {
        acc += qm1 / op.p * dh(j + m);
        qm1 *= q;
      }
      return acc;
    }
    case SteinOperatorSpec::Kind::convolution: {
      double acc = base;
      for (const auto& g : op.streams) {
        const long len = static_cast<long>(g.coeffs.size());
        // suffix sums S(m) = sum_{k>=m} g[k]
        double suffix = 0.0;
        for (long k = len - 1; k >= 1; --k) suffix += g.coeffs[std::size_t(k)];
        double total = suffix + g.coeffs[0];
        acc += total * h.at(j + 1);
        double s = suffix;
        for (long m = 1; m < len && j + m < M; ++m) {
          acc += s * dh(j + m);
          s -= g.coeffs[std::size_t(m)];
        }
      }
      return acc;
    }
  }
  throw std::logic_error("apply_operator_delta_form: unhandled kind");
}

ValueWithError operator_expectation(const SteinOperatorSpec& op,
                                    const TestFunction& h,
                                    const pmf::TruncatedPMF& law) {
  const std::size_t n = law.probs.size();
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    acc += law.probs[j] * apply_operator(op, h, long(j));

  // Series-part magnitude of |A h| and leftover stream truncation.
  double series_norm = 0.0, stream_rem = 0.0;
  switch (op.kind) {
    case SteinOperatorSpec::Kind::poisson:
      series_norm = op.lambda;
      break;
    case SteinOperatorSpec::Kind::poisson_geometric:
      series_norm = op.lambda + (1.0 - op.p) / op.p;
      break;
    case SteinOperatorSpec::Kind::convolution:
      for (const auto& g : op.streams) {
        for (double v : g.coeffs) series_norm += std::abs(v);
        stream_rem += g.remainder_bound;
      }
      break;
  }
  // Tail of the law: |A h(j)| <= series_norm ||h|| + j ||h||, with the masses
  // past the support modelled by the observed decay of the stored entries.
  double r = 0.5;
  if (n >= 2 && law.probs[n - 2] > 1e-300)
    r = std::min(0.9999,
                 std::max(1e-6, law.probs[n - 1] / law.probs[n - 2]));
  const double horizon = double(n) + 1.0 / (1.0 - r);
  double unc = law.tail_bound * h.sup_norm * (series_norm + horizon) +
               stream_rem * h.sup_norm;
  return {acc, unc};
}

double poisson_solution_bound(double lambda, bool f_norm_form) {
  if (lambda <= 0)
    throw std::invalid_argument("poisson_solution_bound: lambda must be > 0");
  const double inv = 1.0 / std::max(1.0, lambda);
  return f_norm_form ? 2.0 * inv : inv;
}

double perturbation_bound(double alpha, double w1, double w2, double eps,
                          double p2_out, double p3_out) {
  if (alpha <= 0)
    throw std::invalid_argument("perturbation_bound: alpha must be > 0");
  if (w1 <= 0 || w2 < 0 || eps < 0)
    throw std::invalid_argument(
        "perturbation_bound: need w1 > 0, w2 >= 0, eps >= 0");
  if (p2_out < 0 || p2_out > 1 || p3_out < 0 || p3_out > 1)
    throw std::invalid_argument(
        "perturbation_bound: outside-probabilities must lie in [0,1]");
  if (!(w1 * w2 < alpha))
    throw std::domain_error(
        "perturbation_bound: hypothesis w1*w2 < alpha violated");
  return alpha / (2.0 * (alpha - w1 * w2)) *
         (eps * w1 * std::min(1.0, 1.0 / alpha) + 2.0 * p2_out + 2.0 * p3_out);
}

}  // namespace steinbound::stein
