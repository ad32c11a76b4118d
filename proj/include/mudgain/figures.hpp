#pragma once
#ifndef MUDGAIN_FIGURES_HPP
#define MUDGAIN_FIGURES_HPP

#include <mudgain/analytics.hpp>
#include <mudgain/montecarlo.hpp>
#include <mudgain/report.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// CSV pipelines for the outage-vs-power, gain-vs-J, bound comparison and
// gain-vs-eta tables.

namespace mudgain {

enum class FigureId { fig2, fig3, fig4, fig5 };

inline std::optional<FigureId> parse_figure_id(std::string_view name) {
  if (name == "fig2") return FigureId::fig2;
  if (name == "fig3") return FigureId::fig3;
  if (name == "fig4") return FigureId::fig4;
  if (name == "fig5") return FigureId::fig5;
  return std::nullopt;
}

inline std::string_view figure_name(FigureId id) {
  switch (id) {
    case FigureId::fig2: return "fig2";
    case FigureId::fig3: return "fig3";
    case FigureId::fig4: return "fig4";
    case FigureId::fig5: return "fig5";
  }
  return "?";
}

/// Fully resolved inputs of one run. An empty power grid means the
/// per-eta default grid.
struct RunParameters {
  std::vector<double> eta_s;
  std::vector<unsigned> j;
  std::vector<double> power_db;
  double epsilon = 0.01;
  double tol_db = 0.01;
  TrialPlan plan;
};

inline const std::vector<unsigned>& paper_j_set() {
  static const std::vector<unsigned> js{1, 2, 4, 10, 50, 100};
  return js;
}

/// 0.5 dB grid from the infinite-user power at 30% outage to the OMA power
/// at 0.1% outage, widened to whole dB.
inline std::vector<double> default_power_grid(double eta_s) {
  const double first = std::floor(to_db(noma_power_lower_bound(eta_s, 0.3)));
  const double last = std::ceil(to_db(oma_required_power(eta_s, 1e-3)));
  std::vector<double> grid;
  for (int i = 0; first + 0.5 * i <= last + 1e-9; ++i) grid.push_back(first + 0.5 * i);
  return grid;
}

inline RunParameters figure_defaults(FigureId id) {
  RunParameters p;
  switch (id) {
    case FigureId::fig2:
    case FigureId::fig4:
      p.eta_s = {3, 6};
      p.j = paper_j_set();
      break;
    case FigureId::fig3:
      p.eta_s = {3, 6};
      p.j = {1, 2, 3, 4, 5, 6, 8, 10, 15, 20, 25, 30, 40, 50, 60, 70, 80, 90, 100};
      break;
    case FigureId::fig5:
      p.eta_s = {1, 2, 3, 4, 5, 6, 7, 8, 9};
      p.j = {2, 4, 10, 100};
      break;
  }
  return p;
}

inline std::vector<double> power_grid_for(const RunParameters& params, double eta_s) {
  return params.power_db.empty() ? default_power_grid(eta_s) : params.power_db;
}

/// Outage vs power (fig2 schema). With `bound_rows`, each power also gets a
/// `j=inf` row holding the infinite-user lower bound (fig4).
inline std::string outage_table_csv(const RunParameters& params, bool bound_rows) {
  CsvTable csv{{"eta_s", "power_db", "j", "eps_hat", "ci95", "eps_closed_form_or_bound"}};
  for (double eta : params.eta_s) {
    const auto grid = power_grid_for(params, eta);
    const auto rows = bound_comparison_curve(eta, grid, params.j, params.plan);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      csv.add_row({text::real(eta), text::db(r.p_db), std::to_string(r.j_users),
                   text::prob(r.estimate.eps_hat), text::prob(r.estimate.ci_halfwidth_95),
                   r.j_users == 1 ? text::prob(oma_outage(eta, from_db(r.p_db))) : ""});
      const bool last_of_power = (i + 1) % params.j.size() == 0;
      if (bound_rows && last_of_power) {
        csv.add_row({text::real(eta), text::db(r.p_db), "inf", "", "",
                     text::prob(r.eps_lower_bound)});
      }
    }
  }
  return csv.str();
}

/// Direct-simulation variant of the outage table: every (power, J) cell is
/// an independent run of the decodability test on its own draws.
inline std::string simulate_table_csv(const RunParameters& params) {
  CsvTable csv{{"eta_s", "power_db", "j", "eps_hat", "ci95", "eps_closed_form_or_bound"}};
  for (double eta : params.eta_s) {
    for (double p_db : power_grid_for(params, eta)) {
      for (unsigned j : params.j) {
        const auto cfg = ScenarioConfig::from_power_db(eta, j, p_db);
        const auto est = estimate_individual_outage(cfg, params.plan);
        csv.add_row({text::real(eta), text::db(p_db), std::to_string(j), text::prob(est.eps_hat),
                     text::prob(est.ci_halfwidth_95),
                     j == 1 ? text::prob(oma_outage(eta, cfg.p_norm())) : ""});
      }
    }
  }
  return csv.str();
}

/// Gain vs J (fig3 schema).
inline std::string gain_table_csv(const RunParameters& params) {
  CsvTable csv{{"eta_s", "j", "gain_db", "gain_ci_db", "gain_upper_bound_db"}};
  for (double eta : params.eta_s) {
    for (const auto& g : mud_gain_curve(eta, params.epsilon, params.j, params.plan, params.tol_db)) {
      csv.add_row({text::real(eta), std::to_string(static_cast<unsigned>(g.point.abscissa)),
                   text::db(g.point.gain_db), text::db(g.ci_db), text::db(g.upper_bound_db)});
    }
  }
  return csv.str();
}

/// Gain vs eta with the fraction of the upper bound achieved (fig5 schema).
inline std::string fraction_table_csv(const RunParameters& params) {
  CsvTable csv{{"eta_s", "j", "gain_db", "gain_upper_bound_db", "fraction_of_bound"}};
  for (double eta : params.eta_s) {
    for (const auto& g : mud_gain_curve(eta, params.epsilon, params.j, params.plan, params.tol_db)) {
      csv.add_row({text::real(eta), std::to_string(static_cast<unsigned>(g.point.abscissa)),
                   text::db(g.point.gain_db), text::db(g.upper_bound_db),
                   text::prob(g.point.gain_db / g.upper_bound_db)});
    }
  }
  return csv.str();
}

/// Required power per (eta, J).
inline std::string power_search_csv(const RunParameters& params) {
  CsvTable csv{{"eta_s", "epsilon", "j", "power_db", "power_linear", "eps_at_power", "ci95_low_db",
                "ci95_high_db"}};
  for (double eta : params.eta_s) {
    for (unsigned j : params.j) {
      const auto rp = required_power(eta, j, params.epsilon, params.plan, params.tol_db);
      csv.add_row({text::real(eta), text::prob(params.epsilon), std::to_string(j),
                   text::db(rp.power_db), text::printf_string("%.6g", rp.power),
                   text::prob(rp.at_power.eps_hat), text::db(rp.ci_low_db),
                   text::db(rp.ci_high_db)});
    }
  }
  return csv.str();
}

inline std::string run_figure(FigureId id, const RunParameters& params) {
  switch (id) {
    case FigureId::fig2: return outage_table_csv(params, false);
    case FigureId::fig3: return gain_table_csv(params);
    case FigureId::fig4: return outage_table_csv(params, true);
    case FigureId::fig5: return fraction_table_csv(params);
  }
  return {};
}

}  // namespace mudgain

#endif  // MUDGAIN_FIGURES_HPP
