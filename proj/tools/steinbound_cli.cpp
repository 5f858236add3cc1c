// steinbound: total-variation error bounds for sums of independent
// non-negative-integer random variables, with exact-convolution
// certification, comparison-table and figure-data reproduction.
//
// Exit codes: 0 success, 2 usage error, 3 precondition/budget failure,
// 4 certification failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "steinbound/bounds.hpp"
#include "steinbound/gcoeff.hpp"
#include "steinbound/kernels.hpp"
#include "steinbound/moments.hpp"
#include "steinbound/pmf.hpp"
#include "steinbound/tables.hpp"

namespace {

using json = nlohmann::json;
using steinbound::bounds::BoundReport;
using steinbound::pmf::ComponentFamily;
using steinbound::pmf::TruncatedPMF;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitCertification = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- formatting

std::string fmt4(double v) {
  char buf[64];
  if (!std::isfinite(v)) return v > 0 ? "inf" : "-inf";
  if (v != 0.0 && std::abs(v) < 5e-5)
    std::snprintf(buf, sizeof buf, "%.4e", v);
  else
    std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json report_json(const BoundReport& r) {
  json j;
  j["theorem"] = r.theorem;
  j["value"] = jnum(r.value);
  j["uncertainty"] = jnum(r.uncertainty);
  j["preconditions"] = json::array();
  for (const auto& pc : r.preconditions)
    j["preconditions"].push_back(
        {{"name", pc.name}, {"ok", pc.ok}, {"margin", jnum(pc.margin)}});
  j["intermediates"] = json::object();
  for (const auto& [k, v] : r.intermediates) j["intermediates"][k] = jnum(v);
  return j;
}

void report_text(std::ostream& os, const BoundReport& r) {
  os << "theorem: " << r.theorem << "\n";
  if (std::isfinite(r.value))
    os << "value: " << fmt4(r.value) << "\n"
       << "uncertainty: " << fmt4(r.uncertainty) << "\n";
  else
    os << "value: unavailable (precondition failed)\n";
  for (const auto& pc : r.preconditions)
    os << "precondition " << pc.name << ": " << (pc.ok ? "ok" : "FAILED")
       << " (margin " << fmt4(pc.margin) << ")\n";
  os << "intermediates:\n";
  for (const auto& [k, v] : r.intermediates)
    os << "  " << k << " = " << fmt4(v) << "\n";
}

void report_csv(std::ostream& os, const BoundReport& r, bool header) {
  if (header) os << "key,value\n";
  os << r.theorem << ".value," << fmt_full(r.value) << "\n";
  os << r.theorem << ".uncertainty," << fmt_full(r.uncertainty) << "\n";
  for (const auto& pc : r.preconditions) {
    os << r.theorem << ".precondition." << pc.name << ".ok," << (pc.ok ? 1 : 0)
       << "\n";
    os << r.theorem << ".precondition." << pc.name << ".margin,"
       << fmt_full(pc.margin) << "\n";
  }
  for (const auto& [k, v] : r.intermediates)
    os << r.theorem << "." << k << "," << fmt_full(v) << "\n";
}

// ---------------------------------------------------------------- components

double parse_double(const std::string& tok, const std::string& ctx) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw UsageError("component '" + ctx + "': cannot parse number '" + tok +
                     "'");
  }
}

long parse_long(const std::string& tok, const std::string& ctx) {
  try {
    std::size_t pos = 0;
    long v = std::stol(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw UsageError("component '" + ctx + "': cannot parse integer '" + tok +
                     "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

// family:param[:param] -- po:<lambda> ge:<p> ber:<p> bi:<n>:<p>
// nb:<alpha>:<p> tr:<p> custom:<p0,p1,...>
ComponentFamily parse_component(const std::string& spec) {
  auto parts = split(spec, ':');
  const std::string& fam = parts[0];
  auto arity = [&](std::size_t k) {
    if (parts.size() != k + 1)
      throw UsageError("component '" + spec + "': family '" + fam +
                       "' takes " + std::to_string(k) + " parameter(s)");
  };
  try {
    if (fam == "po") {
      arity(1);
      return ComponentFamily::poisson(parse_double(parts[1], spec));
    }
    if (fam == "ge") {
      arity(1);
      return ComponentFamily::geometric(parse_double(parts[1], spec));
    }
    if (fam == "ber") {
      arity(1);
      return ComponentFamily::bernoulli(parse_double(parts[1], spec));
    }
    if (fam == "bi") {
      arity(2);
      return ComponentFamily::binomial(parse_long(parts[1], spec),
                                       parse_double(parts[2], spec));
    }
    if (fam == "nb") {
      arity(2);
      return ComponentFamily::neg_binomial(parse_double(parts[1], spec),
                                           parse_double(parts[2], spec));
    }
    if (fam == "tr") {
      arity(1);
      return ComponentFamily::two_runs(parse_double(parts[1], spec));
    }
    if (fam == "custom") {
      arity(1);
      std::vector<double> probs;
      for (const auto& tok : split(parts[1], ','))
        probs.push_back(parse_double(tok, spec));
      return ComponentFamily::custom_pmf(std::move(probs));
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError("component '" + spec + "': " + e.what());
  }
  throw UsageError("component '" + spec + "': unknown family '" + fam +
                   "' (expected po, ge, ber, bi, nb, tr or custom)");
}

std::vector<ComponentFamily> build_components(
    const std::vector<std::string>& specs, long count) {
  if (specs.empty()) throw UsageError("at least one --comp is required");
  std::vector<ComponentFamily> comps;
  for (const auto& s : specs) comps.push_back(parse_component(s));
  for (long k = 1; k < count; ++k) comps.push_back(comps.back());
  return comps;
}

// ------------------------------------------------------------------- output

struct Sink {
  std::ostream* os = &std::cout;
  std::ofstream file;

  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw UsageError("cannot write output file '" + path + "'");
    os = &file;
  }
  std::ostream& out() { return *os; }
};

struct Config {
  std::vector<std::string> comps;
  long count = 1;
  std::string target = "both";
  std::string format = "text";
  std::string out_path;
  std::string out_dir = "figures";
  double tail_tol = steinbound::pmf::kDefaultTailTol;
  double p = 0.5;
  bool pg = false;
  double budget = 2e8;
  double force_bound = std::numeric_limits<double>::quiet_NaN();
};

// ------------------------------------------------------------------- bound

int cmd_bound(const Config& cfg) {
  auto comps = build_components(cfg.comps, cfg.count);
  std::vector<BoundReport> reports;
  if (cfg.target == "poisson" || cfg.target == "both")
    reports.push_back(steinbound::bounds::poisson_bound(comps));
  if (cfg.target == "pg" || cfg.target == "both")
    reports.push_back(steinbound::bounds::poisson_geometric_bound(comps));

  Sink sink(cfg.out_path);
  auto& os = sink.out();
  if (cfg.format == "json") {
    if (reports.size() == 1) {
      os << report_json(reports[0]).dump(2) << "\n";
    } else {
      json arr = json::array();
      for (const auto& r : reports) arr.push_back(report_json(r));
      os << arr.dump(2) << "\n";
    }
  } else if (cfg.format == "csv") {
    bool header = true;
    for (const auto& r : reports) {
      report_csv(os, r, header);
      header = false;
    }
  } else {
    bool first = true;
    for (const auto& r : reports) {
      if (!first) os << "\n";
      report_text(os, r);
      first = false;
    }
  }
  for (const auto& r : reports)
    if (!r.ok()) return kExitPrecondition;
  return kExitOk;
}

// ------------------------------------------------------------------- table1

int cmd_table1(const Config& cfg) {
  auto rows = steinbound::tables::table1();
  Sink sink(cfg.out_path);
  auto& os = sink.out();
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"n", r.n},
                     {"q", r.q},
                     {"poisson_bound", r.poisson_bound},
                     {"vu_bound", r.vu_bound}});
    os << arr.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    os << "n,q,poisson_bound,vu_bound\n";
    for (const auto& r : rows)
      os << r.n << "," << r.q << "," << fmt4(r.poisson_bound) << ","
         << fmt4(r.vu_bound) << "\n";
  } else {
    os << "   n     q  poisson_bound  vu_bound\n";
    char buf[96];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%4ld   %.1f  %13s  %8s\n", r.n, r.q,
                    fmt4(r.poisson_bound).c_str(), fmt4(r.vu_bound).c_str());
      os << buf;
    }
  }
  return kExitOk;
}

// ------------------------------------------------------------------ two-runs

int cmd_two_runs(const Config& cfg) {
  auto fam = ComponentFamily::two_runs(cfg.p);  // validates p
  if (cfg.count < 1) throw UsageError("two-runs: --count must be >= 1");

  const auto series = steinbound::pmf::two_runs_series(cfg.p, 3);
  const auto g = steinbound::gcoeff::g_auto(fam, 1e-12);
  const auto m1 = steinbound::moments::moments_of({g});
  const double mu = m1.mu * double(cfg.count);
  const double mu2 = m1.mu2 * double(cfg.count);

  // For p > 1/2 the series is not a probability law; the formal series
  // quantities are still printable, but no distance bound applies.
  const bool is_law = cfg.p <= 0.5;
  std::string law_note;
  if (!is_law) {
    try {
      steinbound::pmf::materialize(fam);
    } catch (const std::domain_error& e) {
      law_note = e.what();
    }
  }

  std::optional<BoundReport> rep, pg_rep;
  std::optional<steinbound::pmf::TvResult> exact;
  if (is_law) {
    std::vector<ComponentFamily> comps(std::size_t(cfg.count), fam);
    rep = steinbound::bounds::poisson_bound(comps);
    auto W = steinbound::pmf::convolve_n(comps, cfg.tail_tol);
    auto X = steinbound::pmf::materialize(ComponentFamily::poisson(mu),
                                          cfg.tail_tol);
    exact = steinbound::pmf::tv_distance(W, X);
    if (cfg.pg) pg_rep = steinbound::bounds::poisson_geometric_bound(comps);
  }

  Sink sink(cfg.out_path);
  auto& os = sink.out();
  if (cfg.format == "json") {
    json j;
    j["p"] = cfg.p;
    j["count"] = cfg.count;
    j["series_head"] = {series[0], series[1], series[2]};
    j["g_head"] = {g.coeffs[0], g.coeffs[1], g.coeffs[2]};
    j["mu"] = mu;
    j["mu2"] = mu2;
    j["law_exists"] = is_law;
    if (!is_law) j["note"] = law_note;
    if (rep) j["poisson"] = report_json(*rep);
    if (exact) {
      j["exact"] = {{"value", exact->value},
                    {"uncertainty", exact->uncertainty}};
      j["ratio"] = exact->value > 0 ? jnum(rep->value / exact->value)
                                    : json(nullptr);
    }
    if (pg_rep) j["poisson_geometric"] = report_json(*pg_rep);
    os << j.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    os << "key,value\n";
    os << "p," << fmt_full(cfg.p) << "\n";
    os << "count," << cfg.count << "\n";
    for (int i = 0; i < 3; ++i)
      os << "series_b" << i << "," << fmt_full(series[std::size_t(i)]) << "\n";
    for (int i = 0; i < 3; ++i)
      os << "g" << i + 1 << "," << fmt_full(g.coeffs[std::size_t(i)]) << "\n";
    os << "mu," << fmt_full(mu) << "\n";
    os << "mu2," << fmt_full(mu2) << "\n";
    os << "law_exists," << (is_law ? 1 : 0) << "\n";
    if (rep) os << "poisson_bound," << fmt_full(rep->value) << "\n";
    if (exact) {
      os << "exact," << fmt_full(exact->value) << "\n";
      os << "exact_uncertainty," << fmt_full(exact->uncertainty) << "\n";
    }
    if (pg_rep) os << "pg_bound," << fmt_full(pg_rep->value) << "\n";
  } else {
    os << "two-runs: p = " << cfg.p << ", components = " << cfg.count << "\n";
    os << "series coefficients b[0..2]: " << fmt4(series[0]) << " "
       << fmt4(series[1]) << " " << fmt4(series[2]) << "\n";
    os << "g-stream head g[1..3]: " << fmt4(g.coeffs[0]) << " "
       << fmt4(g.coeffs[1]) << " " << fmt4(g.coeffs[2]) << "\n";
    os << "mu = " << fmt4(mu) << "\n";
    os << "mu2 = " << fmt4(mu2) << "\n";
    if (!is_law) {
      os << "bounds unavailable: " << law_note << "\n";
    } else {
      os << "poisson bound = " << fmt4(rep->value) << "\n";
      os << "exact d_TV(W, Po(mu)) = " << fmt4(exact->value) << " (+/- "
         << fmt4(exact->uncertainty) << ")\n";
      if (exact->value > 0)
        os << "ratio bound/exact = " << fmt4(rep->value / exact->value)
           << "\n";
      if (pg_rep) {
        os << "\n";
        report_text(os, *pg_rep);
      }
    }
  }
  return is_law ? kExitOk : kExitPrecondition;
}

// ------------------------------------------------------------------- certify

struct CertifyRow {
  std::string theorem;
  double bound = 0.0;
  double uncertainty = 0.0;
  double exact = 0.0;
  double exact_unc = 0.0;
  bool pass = false;
};

int cmd_certify(const Config& cfg) {
  auto comps = build_components(cfg.comps, cfg.count);

  std::vector<TruncatedPMF> laws;
  laws.reserve(comps.size());
  for (const auto& f : comps)
    laws.push_back(steinbound::pmf::materialize(f, cfg.tail_tol));

  // Convolution work estimate (cell updates) against the budget.
  double cost = 0.0, len = double(laws[0].probs.size());
  for (std::size_t i = 1; i < laws.size(); ++i) {
    const double m = double(laws[i].probs.size());
    cost += len * m;
    len += m - 1.0;
  }
  if (cost > cfg.budget)
    throw BudgetError(
        "certification budget exceeded: estimated " + fmt_full(cost) +
        " cell updates > budget " + fmt_full(cfg.budget) +
        "; try fewer components (smaller n) or a looser --tail-tol");

  TruncatedPMF W = laws[0];
  for (std::size_t i = 1; i < laws.size(); ++i)
    W = steinbound::pmf::convolve(W, laws[i]);

  const bool forced = !std::isnan(cfg.force_bound);
  std::vector<CertifyRow> rows;
  std::vector<BoundReport> reports;

  auto add_row = [&](const BoundReport& rep, const TruncatedPMF& approx) {
    auto tv = steinbound::pmf::tv_distance(W, approx);
    CertifyRow row;
    row.theorem = rep.theorem;
    row.bound = forced ? cfg.force_bound : rep.value;
    row.uncertainty = forced ? 0.0 : rep.uncertainty;
    row.exact = tv.value;
    row.exact_unc = tv.uncertainty;
    row.pass = row.bound + row.uncertainty >= row.exact;
    rows.push_back(row);
    reports.push_back(rep);
  };

  if (cfg.target == "poisson" || cfg.target == "both") {
    auto rep = steinbound::bounds::poisson_bound(comps);
    auto X = steinbound::pmf::materialize(
        ComponentFamily::poisson(rep.intermediates.at("mu")), cfg.tail_tol);
    add_row(rep, X);
  }
  if (cfg.target == "pg" || cfg.target == "both") {
    auto rep = steinbound::bounds::poisson_geometric_bound(comps);
    if (!rep.ok()) {
      Sink sink(cfg.out_path);
      report_text(sink.out(), rep);
      return kExitPrecondition;
    }
    auto Z = steinbound::pmf::convolve(
        steinbound::pmf::materialize(
            ComponentFamily::poisson(rep.intermediates.at("lambda")),
            cfg.tail_tol),
        steinbound::pmf::materialize(
            ComponentFamily::geometric(rep.intermediates.at("p")),
            cfg.tail_tol));
    add_row(rep, Z);
  }

  Sink sink(cfg.out_path);
  auto& os = sink.out();
  if (cfg.format == "json") {
    json arr = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      json j;
      j["theorem"] = row.theorem;
      j["bound"] = jnum(row.bound);
      j["uncertainty"] = jnum(row.uncertainty);
      j["exact"] = row.exact;
      j["exact_uncertainty"] = row.exact_unc;
      j["ratio"] = row.exact > 0 ? jnum(row.bound / row.exact) : json(nullptr);
      j["pass"] = row.pass;
      j["report"] = report_json(reports[i]);
      arr.push_back(j);
    }
    os << (arr.size() == 1 ? arr[0] : arr).dump(2) << "\n";
  } else if (cfg.format == "csv") {
    os << "key,value\n";
    for (const auto& row : rows) {
      os << row.theorem << ".bound," << fmt_full(row.bound) << "\n";
      os << row.theorem << ".uncertainty," << fmt_full(row.uncertainty)
         << "\n";
      os << row.theorem << ".exact," << fmt_full(row.exact) << "\n";
      os << row.theorem << ".ratio,"
         << (row.exact > 0 ? fmt_full(row.bound / row.exact) : "inf") << "\n";
      os << row.theorem << ".pass," << (row.pass ? 1 : 0) << "\n";
    }
  } else {
    for (const auto& row : rows) {
      os << "certify " << row.theorem << ":\n";
      os << "  bound = " << fmt4(row.bound) << " (+/- "
         << fmt4(row.uncertainty) << ")\n";
      os << "  exact d_TV = " << fmt4(row.exact) << " (+/- "
         << fmt4(row.exact_unc) << ")\n";
      if (row.exact > 0)
        os << "  ratio bound/exact = " << fmt4(row.bound / row.exact) << "\n";
      os << "  " << (row.pass ? "PASS" : "FAIL") << "\n";
    }
  }
  for (const auto& row : rows)
    if (!row.pass) return kExitCertification;
  return kExitOk;
}

// ------------------------------------------------------------------- figures

int cmd_figures(const Config& cfg) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec)
    throw UsageError("cannot create output directory '" + cfg.out_dir +
                     "': " + ec.message());

  auto panels = steinbound::tables::figure_panels();
  Sink sink(cfg.out_path);
  auto& os = sink.out();
  json summary = json::array();
  for (const auto& panel : panels) {
    std::ostringstream name;
    name << "fig_n" << panel.n << "_q" << panel.q << ".csv";
    fs::path path = fs::path(cfg.out_dir) / name.str();
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write figure file '" + path.string() + "'");
    f << "j,pmf_exact,pmf_approx\n";
    for (std::size_t j = 0; j < panel.exact.size(); ++j)
      f << j << "," << fmt_full(panel.exact[j]) << ","
        << fmt_full(panel.approx[j]) << "\n";
    if (cfg.format == "json") {
      summary.push_back({{"n", panel.n},
                         {"q", panel.q},
                         {"path", path.string()},
                         {"rows", panel.exact.size()},
                         {"sup_gap", panel.sup_gap()}});
    } else {
      os << "wrote " << path.string() << " (" << panel.exact.size()
         << " rows, sup gap " << fmt4(panel.sup_gap()) << ")\n";
    }
  }
  if (cfg.format == "json") os << summary.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Stein-method total-variation bounds for sums of independent "
      "non-negative-integer random variables"};
  app.require_subcommand(1);
  Config cfg;

  auto add_io = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    sub->add_option("--out", cfg.out_path, "Write output to a file");
  };

  auto* bound = app.add_subcommand(
      "bound", "Compute the Poisson / Poisson-geometric bound reports");
  bound->add_option("--comp", cfg.comps,
                    "Component spec family:param[:param] "
                    "(po, ge, ber, bi, nb, tr, custom)")
      ->required();
  bound->add_option("--count", cfg.count,
                    "Repeat the last component this many times")
      ->check(CLI::PositiveNumber);
  bound->add_option("--target", cfg.target, "Which bound(s) to compute")
      ->check(CLI::IsMember({"poisson", "pg", "both"}));
  add_io(bound);

  auto* table1 = app.add_subcommand(
      "table1", "Reproduce the published comparison table (negative "
                "binomial components, alpha = 5)");
  add_io(table1);

  auto* two_runs = app.add_subcommand(
      "two-runs", "Bounds for counts of success pairs in Bernoulli trials");
  two_runs->add_option("--p", cfg.p, "Success probability")->required();
  two_runs->add_option("--count", cfg.count, "Number of components")
      ->check(CLI::PositiveNumber);
  two_runs->add_flag("--pg", cfg.pg,
                     "Also compute the Poisson-geometric bound");
  two_runs->add_option("--tail-tol", cfg.tail_tol,
                       "Truncation tolerance for the exact law");
  add_io(two_runs);

  auto* certify = app.add_subcommand(
      "certify", "Check a bound against the exact total-variation distance");
  certify->add_option("--comp", cfg.comps, "Component spec (see bound)")
      ->required();
  certify->add_option("--count", cfg.count,
                      "Repeat the last component this many times")
      ->check(CLI::PositiveNumber);
  certify->add_option("--target", cfg.target, "Which bound(s) to certify")
      ->check(CLI::IsMember({"poisson", "pg", "both"}));
  certify->add_option("--tail-tol", cfg.tail_tol, "Truncation tolerance");
  certify->add_option("--budget", cfg.budget,
                      "Convolution work budget (cell updates)");
  certify->add_option("--force-bound", cfg.force_bound, "")->group("");
  add_io(certify);

  auto* figures = app.add_subcommand(
      "figures", "Write exact-vs-approximant PMF data files (CSV)");
  figures->add_option("--out-dir", cfg.out_dir, "Output directory");
  add_io(figures);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (bound->parsed()) return cmd_bound(cfg);
    if (table1->parsed()) return cmd_table1(cfg);
    if (two_runs->parsed()) return cmd_two_runs(cfg);
    if (certify->parsed()) return cmd_certify(cfg);
    if (figures->parsed()) return cmd_figures(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
  return kExitOk;
}
