#include "steinbound/tables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "steinbound/bounds.hpp"

namespace steinbound::tables {

namespace {

const long kNs[] = {10, 30, 50};
const double kQs[] = {0.1, 0.2};

std::vector<pmf::ComponentFamily> nb_components(long n, double alpha,
                                                double q) {
  return std::vector<pmf::ComponentFamily>(
      std::size_t(n), pmf::ComponentFamily::neg_binomial(alpha, 1.0 - q));
}

}  // namespace

std::vector<Table1Row> table1(double alpha) {
  std::vector<Table1Row> rows;
  for (long n : kNs)
    for (double q : kQs) {
      Table1Row row;
      row.n = n;
      row.q = q;
      row.poisson_bound =
          bounds::poisson_bound(nb_components(n, alpha, q)).value;
      row.vu_bound = bounds::vu_bound(n, {alpha}, {1.0 - q}).value;
      rows.push_back(row);
    }
  return rows;
}

double FigurePanel::sup_gap() const {
  double g = 0.0;
  for (std::size_t j = 0; j < exact.size(); ++j)
    g = std::max(g, std::abs(exact[j] - approx[j]));
  return g;
}

FigurePanel figure_panel(long n, double q, double alpha, double coverage) {
  if (coverage <= 0 || coverage >= 1)
    throw std::invalid_argument("figure_panel: coverage must be in (0,1)");
  const auto comps = nb_components(n, alpha, q);
  const auto W = pmf::convolve_n(comps);

  auto report = bounds::poisson_geometric_bound(comps);
  if (!report.ok())
    throw std::domain_error("figure_panel: matching preconditions failed");
  const double lambda = report.intermediates.at("lambda");
  const double p = report.intermediates.at("p");
  const auto Z =
      pmf::convolve(pmf::materialize(pmf::ComponentFamily::poisson(lambda)),
                    pmf::materialize(pmf::ComponentFamily::geometric(p)));

  auto cover_len = [coverage](const pmf::TruncatedPMF& law) {
    double cum = 0.0;
    for (std::size_t j = 0; j < law.probs.size(); ++j) {
      cum += law.probs[j];
      if (cum >= coverage) return j + 1;
    }
    return law.probs.size();
  };
  const std::size_t len = std::max(cover_len(W), cover_len(Z));

  FigurePanel panel;
  panel.n = n;
  panel.q = q;
  panel.exact.assign(len, 0.0);
  panel.approx.assign(len, 0.0);
  for (std::size_t j = 0; j < len && j < W.probs.size(); ++j)
    panel.exact[j] = W.probs[j];
  for (std::size_t j = 0; j < len && j < Z.probs.size(); ++j)
    panel.approx[j] = Z.probs[j];
  return panel;
}

std::vector<FigurePanel> figure_panels(double alpha) {
  std::vector<FigurePanel> panels;
  for (long n : kNs)
    for (double q : kQs) panels.push_back(figure_panel(n, q, alpha));
  return panels;
}

}  // namespace steinbound::tables
