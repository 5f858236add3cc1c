#pragma once

#include <cstddef>
#include <vector>

#include "steinbound/gcoeff.hpp"
#include "steinbound/pmf.hpp"

// Stein operators for laws on the non-negative integers, characterized by
// E[A h(X)] = 0 over bounded test functions with h(0) = 0:
//   Poisson(lambda):        A h(j) = lambda h(j+1) - j h(j)
//   convolution of comps:   A h(j) = sum_i sum_k g_i[k] h(j+k+1) - j h(j)
//   Poisson * Geometric:    A h(j) = lambda h(j+1) - j h(j)
//                                     + sum_k q^{k+1} h(j+k+1)
// plus the classical bound on the solution of the Poisson Stein equation and
// a generic operator-perturbation bound.

namespace steinbound::stein {

struct TestFunction {
  std::vector<double> values;   // h(0..M); constant h(M) beyond M
  double sup_norm = 0.0;
  double delta_sup_norm = 0.0;  // sup_j |h(j+1) - h(j)|

  // Validates h(0) = 0 and computes the norms.
  static TestFunction from_values(std::vector<double> v);

  double at(long j) const {
    auto m = static_cast<std::size_t>(j);
    return values[m < values.size() ? m : values.size() - 1];
  }
};

struct SteinOperatorSpec {
  enum class Kind { poisson, convolution, poisson_geometric };

  Kind kind = Kind::poisson;
  double lambda = 0.0;
  double p = 0.0;
  std::vector<gcoeff::GCoefficients> streams;

  static SteinOperatorSpec poisson_op(double lambda);
  static SteinOperatorSpec convolution_op(
      std::vector<gcoeff::GCoefficients> streams);
  static SteinOperatorSpec poisson_geometric_op(double lambda, double p);
};

// (A h)(j).  Geometric series parts are summed exactly (the test function is
// constant beyond its stored range); convolution streams are summed over
// their stored coefficients.
double apply_operator(const SteinOperatorSpec& op, const TestFunction& h,
                      long j);

// Same operator rewritten through forward differences,
//   sum_k g[k] h(j+k+1) = h(j+1) sum g + sum_{m>=1} Dh(j+m) sum_{k>=m} g[k];
// used to cross-check apply_operator (identical up to round-off).
double apply_operator_delta_form(const SteinOperatorSpec& op,
                                 const TestFunction& h, long j);

struct ValueWithError {
  double value = 0.0;
  double uncertainty = 0.0;
};

// E[A h(X)] for X ~ law, summed over the stored support.  The uncertainty
// covers the law's tail and any stream truncation.
ValueWithError operator_expectation(const SteinOperatorSpec& op,
                                    const TestFunction& h,
                                    const pmf::TruncatedPMF& law);

// Bound on the forward difference of the solution of the Poisson Stein
// equation: 1/max(1,lambda), or the coefficient 2/max(1,lambda) to be
// multiplied by ||f|| when f_norm_form is set.
double poisson_solution_bound(double lambda, bool f_norm_form = false);

// Transfer bound for a perturbed Stein operator:
//   alpha / (2 (alpha - w1 w2)) * (eps w1 min(1, 1/alpha) + 2 p2 + 2 p3),
// valid under the hypothesis w1 w2 < alpha (std::domain_error otherwise).
double perturbation_bound(double alpha, double w1, double w2, double eps,
                          double p2_out, double p3_out);

}  // namespace steinbound::stein
