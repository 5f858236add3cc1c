#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "steinbound/gcoeff.hpp"
#include "steinbound/moments.hpp"
#include "steinbound/pmf.hpp"

using namespace steinbound;
using pmf::ComponentFamily;

namespace {

std::vector<gcoeff::GCoefficients> streams(
    const std::vector<ComponentFamily>& fams) {
  std::vector<gcoeff::GCoefficients> out;
  for (const auto& f : fams) out.push_back(gcoeff::g_auto(f));
  return out;
}

}  // namespace

TEST_CASE("poisson components have vanishing higher cumulant terms") {
  auto m = moments::moments_of(streams({ComponentFamily::poisson(2.0),
                                        ComponentFamily::poisson(0.5)}));
  CHECK(m.mu == 2.5);
  CHECK(m.mu2 == 0.0);
  CHECK(m.mu3 == 0.0);
  CHECK(m.sigma2 == 2.5);
  CHECK(m.uncertainty == 0.0);
}

TEST_CASE("geometric component: mu = q/p, mu2 = (q/p)^2, mu3 = 2 (q/p)^3") {
  for (double p : {0.3, 0.5, 0.8}) {
    const double r = (1.0 - p) / p;
    auto m = moments::moments_of(streams({ComponentFamily::geometric(p)}));
    CAPTURE(p);
    CHECK(m.mu == doctest::Approx(r).epsilon(1e-13));
    CHECK(m.mu2 == doctest::Approx(r * r).epsilon(1e-12));
    CHECK(m.mu3 == doctest::Approx(2 * r * r * r).epsilon(1e-12));
    CHECK(m.sigma2 == doctest::Approx(r + r * r).epsilon(1e-12));
    CHECK(m.uncertainty <= 1e-11);
  }
}

TEST_CASE("ten NegBinomial(5, 0.9) components") {
  std::vector<ComponentFamily> fams(10, ComponentFamily::neg_binomial(5, 0.9));
  auto m = moments::moments_of(streams(fams));
  // each: alpha q/p = 5/9, alpha (q/p)^2 = 5/81, 2 alpha (q/p)^3 = 10/729
  CHECK(m.mu == doctest::Approx(50.0 / 9.0).epsilon(1e-13));
  CHECK(m.mu2 == doctest::Approx(50.0 / 81.0).epsilon(1e-13));
  CHECK(m.mu3 == doctest::Approx(100.0 / 729.0).epsilon(1e-13));
  CHECK(m.sigma2 == doctest::Approx(50.0 / 9.0 + 50.0 / 81.0).epsilon(1e-13));
}

TEST_CASE("bernoulli component: mu2 = -p^2, mu3 = 2 p^3") {
  // from the alternating stream: sum g = p, sum j g = -p^2, sum j(j-1) g = 2p^3
  for (double p : {0.1, 0.25, 0.4}) {
    auto m = moments::moments_of(streams({ComponentFamily::bernoulli(p)}));
    CAPTURE(p);
    CHECK(m.mu == doctest::Approx(p).epsilon(1e-12));
    CHECK(m.mu2 == doctest::Approx(-p * p).epsilon(1e-12));
    CHECK(m.mu3 == doctest::Approx(2 * p * p * p).epsilon(1e-11));
    CHECK(m.sigma2 == doctest::Approx(p * (1 - p)).epsilon(1e-12));
  }
}

TEST_CASE("additivity and permutation invariance") {
  std::vector<ComponentFamily> fams = {ComponentFamily::geometric(0.4),
                                       ComponentFamily::poisson(1.5),
                                       ComponentFamily::binomial(6, 0.2),
                                       ComponentFamily::two_runs(0.3)};
  auto whole = moments::moments_of(streams(fams));

  double mu = 0, mu2 = 0, mu3 = 0;
  for (const auto& f : fams) {
    auto m = moments::moments_of(streams({f}));
    mu += m.mu;
    mu2 += m.mu2;
    mu3 += m.mu3;
  }
  CHECK(whole.mu == doctest::Approx(mu).epsilon(1e-13));
  CHECK(whole.mu2 == doctest::Approx(mu2).epsilon(1e-12));
  CHECK(whole.mu3 == doctest::Approx(mu3).epsilon(1e-12));

  std::reverse(fams.begin(), fams.end());
  auto rev = moments::moments_of(streams(fams));
  CHECK(whole.mu == doctest::Approx(rev.mu).epsilon(1e-14));
  CHECK(whole.mu2 == doctest::Approx(rev.mu2).epsilon(1e-14));
  CHECK(whole.mu3 == doctest::Approx(rev.mu3).epsilon(1e-14));
}

TEST_CASE("sigma2 - mu = mu2 exactly as composed") {
  std::vector<std::vector<ComponentFamily>> cases = {
      {ComponentFamily::geometric(0.25)},
      {ComponentFamily::two_runs(0.5), ComponentFamily::two_runs(0.5)},
      {ComponentFamily::neg_binomial(5, 0.9), ComponentFamily::poisson(2.0)},
      {ComponentFamily::bernoulli(0.2), ComponentFamily::binomial(12, 0.05)}};
  for (const auto& fams : cases) {
    auto m = moments::moments_of(streams(fams));
    CHECK(m.sigma2 - m.mu == doctest::Approx(m.mu2).epsilon(1e-13));
  }
}

TEST_CASE("pmf-based cross-check agrees with the stream computation") {
  std::vector<std::vector<ComponentFamily>> cases = {
      {ComponentFamily::poisson(3.0)},
      {ComponentFamily::geometric(0.35)},
      {ComponentFamily::binomial(8, 0.15)},
      {ComponentFamily::neg_binomial(5, 0.9)},
      {ComponentFamily::two_runs(0.4)},
      {ComponentFamily::geometric(0.5), ComponentFamily::poisson(1.0),
       ComponentFamily::two_runs(0.5)}};
  for (const auto& fams : cases) {
    auto from_streams = moments::moments_of(streams(fams));
    auto from_pmf = moments::moments_from_pmf(pmf::convolve_n(fams, 1e-14));
    CAPTURE(fams[0].name());
    auto close = [](double a, double b, double tol) {
      return std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
    };
    CHECK(close(from_streams.mu, from_pmf.mu, 1e-8));
    CHECK(close(from_streams.sigma2, from_pmf.sigma2, 1e-8));
    CHECK(close(from_streams.mu2, from_pmf.mu2, 1e-8));
    CHECK(close(from_streams.mu3, from_pmf.mu3, 1e-8));
  }
}

TEST_CASE("moments_from_pmf on an explicit small law") {
  // X on {0,1,2} with probs 0.2, 0.5, 0.3: f1 = 1.1, f2 = E X(X-1) = 0.6
  auto m = moments::moments_from_pmf(
      pmf::materialize(ComponentFamily::custom_pmf({0.2, 0.5, 0.3})));
  CHECK(m.mu == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(m.mu2 == doctest::Approx(0.6 - 1.1 * 1.1).epsilon(1e-13));
  CHECK(m.sigma2 == doctest::Approx(1.1 + 0.6 - 1.21).epsilon(1e-13));
  // f3 = 0, mu3 = -3 f1 f2 + 2 f1^3
  CHECK(m.mu3 ==
        doctest::Approx(-3 * 1.1 * 0.6 + 2 * std::pow(1.1, 3)).epsilon(1e-12));
}

TEST_CASE("divergent streams are rejected") {
  // fabricate a non-convergent stream
  gcoeff::GCoefficients g;
  g.coeffs = {1.0, 1.0, 1.0};
  g.converges_at_one = false;
  CHECK_THROWS_AS(moments::moments_of({g}), std::domain_error);
}

TEST_CASE("uncertainty dominates deliberate truncation error") {
  // truncate the geometric stream early: the discarded true tail must be
  // covered by the reported uncertainty
  auto g = gcoeff::g_closed_form(ComponentFamily::geometric(0.2), 12);
  auto m = moments::moments_of({g});
  const double r = 0.8 / 0.2;
  CHECK(std::abs(m.mu - r) <= m.uncertainty);
  CHECK(std::abs(m.mu2 - r * r) <= m.uncertainty);
  CHECK(std::abs(m.mu3 - 2 * r * r * r) <= m.uncertainty);
}
