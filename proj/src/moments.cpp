#include "steinbound/moments.hpp"

#include <cmath>
#include <stdexcept>

#include "steinbound/kernels.hpp"

namespace steinbound::moments {

MomentSummary moments_of(
    const std::vector<gcoeff::GCoefficients>& components) {
  MomentSummary m;
  std::vector<double> w1, w2;  // weights j and j(j-1)
  for (const auto& g : components) {
    if (!g.converges_at_one)
      throw std::domain_error(
          "moments_of: a coefficient stream failed the convergence gate");
    const std::size_t n = g.coeffs.size();
    if (w1.size() < n) {
      std::size_t old = w1.size();
      w1.resize(n);
      w2.resize(n);
      for (std::size_t j = old; j < n; ++j) {
        w1[j] = double(j);
        w2[j] = double(j) * (double(j) - 1.0);
      }
    }
    m.mu += kernels::sum(g.coeffs.data(), n);
    m.mu2 += kernels::dot(g.coeffs.data(), w1.data(), n);
    m.mu3 += kernels::dot(g.coeffs.data(), w2.data(), n);
    m.uncertainty +=
        g.remainder_bound + g.remainder_bound_j + g.remainder_bound_jj;
  }
  m.sigma2 = m.mu + m.mu2;
  return m;
}

MomentSummary moments_from_pmf(const pmf::TruncatedPMF& law) {
  const auto& P = law.probs;
  const std::size_t n = P.size();
  double f1 = 0.0, f2 = 0.0, f3 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = double(j);
    f1 += x * P[j];
    f2 += x * (x - 1.0) * P[j];
    f3 += x * (x - 1.0) * (x - 2.0) * P[j];
  }
  MomentSummary m;
  m.mu = f1;
  m.mu2 = f2 - f1 * f1;
  m.sigma2 = m.mu + m.mu2;
  m.mu3 = f3 - 3.0 * f1 * f2 + 2.0 * f1 * f1 * f1;

  // Truncation effect: model the discarded mass as decaying geometrically at
  // the rate observed over the last stored entries.
  double r = 0.5;
  if (n >= 2 && P[n - 2] > 1e-300)
    r = std::min(0.9999, std::max(1e-6, P[n - 1] / P[n - 2]));
  const double horizon = double(n) + 1.0 / (1.0 - r);
  m.uncertainty =
      law.tail_bound * (1.0 + horizon * (1.0 + horizon * (1.0 + horizon)));
  return m;
}

}  // namespace steinbound::moments
