#pragma once
#ifndef MUDGAIN_CLI_HPP
#define MUDGAIN_CLI_HPP

#include <mudgain/analytics.hpp>
#include <mudgain/figures.hpp>
#include <mudgain/report.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mudgain::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw flag values as parsed; resolved against per-command defaults later.
struct Flags {
  std::vector<double> eta_s;
  std::vector<double> power_db;
  std::vector<unsigned> j;
  std::optional<double> epsilon;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 0;
  double tol_db = 0.01;
  unsigned workers = 1;
  std::string out;
  std::string what = "all";
  std::string figure;
  std::string manifest;
};

namespace detail {

inline void check_parameters(const RunParameters& p) {
  if (p.eta_s.empty()) throw UsageError("--eta-s is required");
  for (double e : p.eta_s) {
    if (!(e > 0.0) || !std::isfinite(e)) throw UsageError("--eta-s values must be positive");
  }
  for (unsigned j : p.j) {
    if (j < 1) throw UsageError("--j values must be at least 1");
  }
  if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) throw UsageError("--epsilon must lie in (0, 1)");
  if (!(p.tol_db > 0.0)) throw UsageError("--tol-db must be positive");
  if (p.plan.trials < 1) throw UsageError("--trials must be at least 1");
  if (p.plan.workers < 1) throw UsageError("--workers must be at least 1");
  for (double x : p.power_db) {
    if (!std::isfinite(x)) throw UsageError("--power-db values must be finite");
  }
}

inline std::string linear_line(const std::string& key, double v) {
  return key + "_linear=" + text::printf_string("%.9g", v) + "\n" + key + "_db=" + text::db(to_db(v)) +
         "\n";
}

template <typename T, typename Parse>
std::vector<T> split_list(const std::string& s, Parse&& parse) {
  std::vector<T> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(parse(s.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

/// Closed-form values for one operating point, `key=value` per line.
inline std::string run_analytic(double eta_s, std::optional<double> epsilon,
                                std::optional<double> power_db, const std::string& what) {
  if (!(eta_s > 0.0)) throw UsageError("--eta-s must be positive");
  if (epsilon && !(*epsilon > 0.0 && *epsilon < 1.0)) {
    throw UsageError("--epsilon must lie in (0, 1)");
  }
  const bool all = what == "all";
  const bool needs_eps = what == "oma-power" || what == "noma-power-bound" || what == "gain-bound";
  const bool needs_power = what == "oma-outage" || what == "noma-outage-bound";
  if (!all && !needs_eps && !needs_power) {
    throw UsageError("unknown --what '" + what +
                     "' (oma-power, noma-power-bound, gain-bound, oma-outage, "
                     "noma-outage-bound, all)");
  }
  if (needs_eps && !epsilon) throw UsageError("--what " + what + " requires --epsilon");
  if (needs_power && !power_db) throw UsageError("--what " + what + " requires --power-db");
  if (all && !epsilon && !power_db) throw UsageError("--what all requires --epsilon or --power-db");

  std::string out = "eta_s=" + text::real(eta_s) + "\n";
  if (epsilon && (all || needs_eps)) {
    const double eps = *epsilon;
    out += "epsilon=" + text::prob(eps) + "\n";
    if (all || what == "oma-power") out += detail::linear_line("oma_power", oma_required_power(eta_s, eps));
    if (all || what == "noma-power-bound") {
      out += detail::linear_line("noma_power_bound", noma_power_lower_bound(eta_s, eps));
    }
    if (all || what == "gain-bound") {
      out += "gain_upper_bound_db=" + text::db(mud_gain_upper_bound(eta_s, eps)) + "\n";
    }
  }
  if (power_db && (all || needs_power)) {
    const double p = from_db(*power_db);
    out += "power_db=" + text::db(*power_db) + "\n";
    if (all || what == "oma-outage") out += "oma_outage=" + text::prob(oma_outage(eta_s, p)) + "\n";
    if (all || what == "noma-outage-bound") {
      out += "noma_outage_bound=" + text::prob(noma_outage_lower_bound(eta_s, p)) + "\n";
    }
  }
  return out;
}

inline RunManifest build_manifest(const std::string& command, const std::string& figure,
                                  const RunParameters& p, const std::string& output) {
  RunManifest m;
  m.set("command", command);
  if (!figure.empty()) m.set("figure", figure);
  m.set("eta_s", text::join(p.eta_s, text::exact));
  m.set("j", text::join(p.j, [](unsigned j) { return std::to_string(j); }));
  m.set("power_db", text::join(p.power_db, text::exact));
  m.set("epsilon", text::exact(p.epsilon));
  m.set("tol_db", text::exact(p.tol_db));
  m.set("trials", std::to_string(p.plan.trials));
  m.set("seed", std::to_string(p.plan.seed));
  m.set("workers", std::to_string(p.plan.workers));
  m.set("output", output);
  m.set("tool_version", std::string(kToolVersion));
  return m;
}

inline RunParameters parameters_from_manifest(const RunManifest& m) {
  RunParameters p;
  auto to_double = [](const std::string& s) { return std::stod(s); };
  p.eta_s = detail::split_list<double>(m.at("eta_s"), to_double);
  p.j = detail::split_list<unsigned>(
      m.at("j"), [](const std::string& s) { return static_cast<unsigned>(std::stoul(s)); });
  p.power_db = detail::split_list<double>(m.at("power_db"), to_double);
  p.epsilon = std::stod(m.at("epsilon"));
  p.tol_db = std::stod(m.at("tol_db"));
  p.plan.trials = std::stoull(m.at("trials"));
  p.plan.seed = std::stoull(m.at("seed"));
  if (const auto* w = m.find("workers")) p.plan.workers = static_cast<unsigned>(std::stoul(*w));
  return p;
}

/// Produces the CSV for a table command.
inline std::string execute(const std::string& command, const std::string& figure,
                           const RunParameters& p) {
  detail::check_parameters(p);
  if (command == "simulate") {
    if (p.power_db.empty()) throw UsageError("simulate requires --power-db");
    return simulate_table_csv(p);
  }
  if (command == "power-search") return power_search_csv(p);
  if (command == "gain") return gain_table_csv(p);
  if (command == "figure") {
    const auto id = parse_figure_id(figure);
    if (!id) throw UsageError("unknown figure '" + figure + "' (fig2, fig3, fig4, fig5)");
    return run_figure(*id, p);
  }
  throw UsageError("unknown command '" + command + "'");
}

/// Writes CSV plus `<out>.manifest`, or prints the CSV when out is empty or "-".
inline void emit(const std::string& csv, const RunManifest& manifest, const std::string& out_path,
                 std::ostream& out) {
  if (out_path.empty() || out_path == "-") {
    out << csv;
    return;
  }
  write_text_file(out_path, csv);
  write_text_file(out_path + ".manifest", manifest.str());
  out << "wrote " << out_path << "\n";
}

inline RunParameters resolve(const std::string& command, const std::string& figure,
                             const Flags& f) {
  RunParameters p;
  if (command == "figure") {
    const auto id = parse_figure_id(figure);
    if (!id) throw UsageError("unknown figure '" + figure + "' (fig2, fig3, fig4, fig5)");
    p = figure_defaults(*id);
  } else {
    p.j = paper_j_set();
  }
  if (!f.eta_s.empty()) p.eta_s = f.eta_s;
  if (!f.j.empty()) p.j = f.j;
  if (!f.power_db.empty()) p.power_db = f.power_db;
  if (f.epsilon) p.epsilon = *f.epsilon;
  p.tol_db = f.tol_db;
  p.plan.trials = f.trials;
  p.plan.seed = f.seed;
  p.plan.workers = f.workers;
  return p;
}

namespace detail {

inline void add_table_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--eta-s", f.eta_s, "Sum spectral efficiency in bits/s/Hz (comma list)")
      ->delimiter(',');
  sub->add_option("--j", f.j, "Superposed users per subchannel (comma list)")->delimiter(',');
  sub->add_option("--power-db", f.power_db, "Sum power P_s/(N0 W) in dB (comma list)")
      ->delimiter(',');
  sub->add_option("--epsilon", f.epsilon, "Target individual outage probability");
  sub->add_option("--trials", f.trials, "Channel blocks per evaluation")->capture_default_str();
  sub->add_option("--seed", f.seed, "Generator seed")->capture_default_str();
  sub->add_option("--tol-db", f.tol_db, "Power search resolution in dB")->capture_default_str();
  sub->add_option("--workers", f.workers, "Worker threads; results do not depend on it")
      ->capture_default_str();
  sub->add_option("--out", f.out,
                  "Output CSV path ('-' for stdout); a .manifest sidecar is written next to it");
}

}  // namespace detail

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiuser diversity gain of NOMA over OMA on the Rayleigh block-fading MAC",
               "mudgain"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  Flags f;

  auto* analytic = app.add_subcommand("analytic", "Closed-form outage, power and gain bounds");
  analytic->add_option("--eta-s", f.eta_s, "Sum spectral efficiency in bits/s/Hz")
      ->required()
      ->expected(1);
  analytic->add_option("--epsilon", f.epsilon, "Target individual outage probability");
  analytic->add_option("--power-db", f.power_db, "Sum power in dB")->expected(1);
  analytic->add_option("--what", f.what,
                       "oma-power | noma-power-bound | gain-bound | oma-outage | "
                       "noma-outage-bound | all")
      ->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Simulated individual outage at given powers");
  auto* search = app.add_subcommand("power-search", "Simulated required power per J");
  auto* gain = app.add_subcommand("gain", "Simulated MUD gain per J");
  auto* figure = app.add_subcommand("figure", "Regenerate a figure's data as CSV");
  figure->add_option("figure", f.figure, "fig2 | fig3 | fig4 | fig5")->required();
  for (auto* sub : {simulate, search, gain, figure}) detail::add_table_flags(sub, f);

  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", f.manifest, "Path to a .manifest file")->required();
  replay->add_option("--out", f.out, "Write to this path instead of the recorded one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kUsageError;
  }

  try {
    if (analytic->parsed()) {
      std::optional<double> power;
      if (!f.power_db.empty()) power = f.power_db.front();
      out << run_analytic(f.eta_s.front(), f.epsilon, power, f.what);
      return kOk;
    }
    if (replay->parsed()) {
      const auto manifest = RunManifest::parse(read_text_file(f.manifest));
      const auto& command = manifest.at("command");
      const std::string fig = manifest.find("figure") ? *manifest.find("figure") : "";
      const auto params = parameters_from_manifest(manifest);
      const std::string path = f.out.empty() ? manifest.at("output") : f.out;
      emit(execute(command, fig, params), build_manifest(command, fig, params, path), path, out);
      return kOk;
    }
    const auto* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    std::string out_path = f.out;
    if (command == "figure" && out_path.empty()) out_path = f.figure + ".csv";
    const auto params = resolve(command, f.figure, f);
    emit(execute(command, f.figure, params), build_manifest(command, f.figure, params, out_path),
         out_path, out);
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}

}  // namespace mudgain::cli

#endif  // MUDGAIN_CLI_HPP
