#pragma once

#include <vector>

#include "steinbound/pmf.hpp"

// Reproduction helpers for the published comparison table and figure data:
// sums of n identical NegBinomial(5, p = 1-q) components, n in {10,30,50},
// q in {0.1, 0.2}.

namespace steinbound::tables {

struct Table1Row {
  long n = 0;
  double q = 0.0;
  double poisson_bound = 0.0;  // |mu2| / max(1, mu)
  double vu_bound = 0.0;       // min(1, 1/sqrt(2 lambda e)) sum alpha q^2/p
};

std::vector<Table1Row> table1(double alpha = 5.0);

struct FigurePanel {
  long n = 0;
  double q = 0.0;
  std::vector<double> exact;   // law of the sum, entries for j = 0,1,...
  std::vector<double> approx;  // matched Poisson-geometric law

  double sup_gap() const;  // max_j |exact[j] - approx[j]|
};

// Both columns cover at least `coverage` of their mass.
FigurePanel figure_panel(long n, double q, double alpha = 5.0,
                         double coverage = 0.99995);

// The six standard panels (n, q) as above.
std::vector<FigurePanel> figure_panels(double alpha = 5.0);

}  // namespace steinbound::tables
