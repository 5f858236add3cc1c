#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

// Finite-precision PMF algebra on the non-negative integers: construction
// from parametric families, convolution, total-variation distances.  Every
// law is stored truncated, with a certified bound on the discarded tail mass
// that is propagated through all operations.

namespace steinbound::pmf {

inline constexpr double kDefaultTailTol = 1e-12;
inline constexpr double kNormTol = 1e-10;  // |sum + tail - 1| allowance

struct ComponentFamily {
  enum class Kind {
    poisson,      // a = lambda
    geometric,    // a = p, P(X=k) = (1-p)^k p
    bernoulli,    // a = p
    binomial,     // n trials, a = p
    neg_binomial, // a = alpha, b = p
    two_runs,     // a = p; waiting-position count for a success pair, shifted to 0
    custom,       // explicit probability vector, custom[0] > 0
  };

  Kind kind = Kind::poisson;
  double a = 0.0;
  double b = 0.0;
  long n = 0;
  std::vector<double> custom;

  static ComponentFamily poisson(double lambda);
  static ComponentFamily geometric(double p);
  static ComponentFamily bernoulli(double p);
  static ComponentFamily binomial(long n, double p);
  static ComponentFamily neg_binomial(double alpha, double p);
  static ComponentFamily two_runs(double p);
  static ComponentFamily custom_pmf(std::vector<double> probs);

  // Throws std::invalid_argument when a parameter is out of range.
  void validate() const;

  double mean() const;  // analytic mean
  std::string name() const;
};

struct TruncatedPMF {
  std::vector<double> probs;   // probs[j] = P(X = j), j = 0..N
  double tail_bound = 0.0;     // certified upper bound on P(X > N)
  std::optional<ComponentFamily> origin;

  double mass() const;  // sum of stored entries
};

struct TvResult {
  double value = 0.0;
  double uncertainty = 0.0;  // from the truncated tails
};

// Build the law of one component, keeping support until the cumulative mass
// reaches 1 - tail_tol.  Throws std::domain_error for a two-runs component
// whose series coefficients go negative (p > 1/2: no law exists), naming the
// first offending index.
TruncatedPMF materialize(const ComponentFamily& family,
                         double tail_tol = kDefaultTailTol);

// Law of the independent sum; tail bounds add.
TruncatedPMF convolve(const TruncatedPMF& a, const TruncatedPMF& b);
TruncatedPMF convolve_n(const std::vector<ComponentFamily>& families,
                        double tail_tol = kDefaultTailTol);

// d_TV(a, b) = 1/2 sum_j |a_j - b_j|, uncertainty (tail_a + tail_b)/2.
TvResult tv_distance(const TruncatedPMF& a, const TruncatedPMF& b);

// d_TV(X, X+1) evaluated on the stored support; includes the trailing
// |0 - probs[N]| term so a point mass yields exactly 1.
double tv_shift(const TruncatedPMF& a);

// Formal series expansion p^2 / (1 - t + p^2 t^2) = sum_j b_j t^j for the
// two-runs component.  For p <= 1/2 these are the PMF probabilities; for
// p > 1/2 the expansion still converges absolutely (|roots| = 1/p > 1) and
// sums to 1, but is not a probability vector.  No sign validation here.
std::vector<double> two_runs_series(double p, std::size_t len);

}  // namespace steinbound::pmf
