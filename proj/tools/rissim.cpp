// Command-line front end: closed-form vs simulation validation, parameter
// sweeps, and the element-count / aging / element-area studies.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "rissim/analytics.hpp"
#include "rissim/config.hpp"
#include "rissim/experiments.hpp"
#include "rissim/geometry.hpp"
#include "rissim/montecarlo.hpp"

namespace {

using namespace rissim;

void write_file(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << content;
}

SystemConfig resolve_config(const std::string& config_path,
                            const std::vector<std::string>& sets) {
  SystemConfig cfg =
      config_path.empty() ? SystemConfig::defaults() : SystemConfig::from_file(config_path);
  for (const auto& kv : sets) cfg.apply_set(kv);
  cfg.finalize();
  return cfg;
}

std::vector<int> parse_symbol_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) out.push_back(std::stoi(part));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-aided MISO downlink spectral-efficiency simulator"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::vector<std::string> sets;
  std::string dump_corr, dump_stats, breakdown_path;
  app.add_option("--config", config_path, "scenario config file (key = value lines)");
  app.add_option("--set", sets, "override a config key, e.g. --set m_h=4")->take_all();
  app.add_option("--dump-correlation", dump_corr, "write the RIS correlation matrix as CSV");
  app.add_option("--dump-stats", dump_stats, "write per-UE estimator statistics as CSV");
  app.add_option("--breakdown", breakdown_path,
                 "write per-(UE, symbol) SINR decomposition as CSV ('-' for stdout)");

  // validate
  auto* validate_cmd =
      app.add_subcommand("validate", "cross-check closed-form SINR terms against simulation");
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  double tolerance = 0.05;
  int workers = 0;
  std::string symbols_arg, out_path = "-";
  validate_cmd->add_option("--trials", trials, "number of coherence-block trials");
  validate_cmd->add_option("--seed", seed, "master seed");
  validate_cmd->add_option("--tolerance", tolerance, "relative gap gate per term");
  validate_cmd->add_option("--workers", workers, "worker threads (0 = hardware)");
  validate_cmd->add_option("--symbols", symbols_arg, "comma-separated symbol indices");
  validate_cmd->add_option("--out", out_path, "output CSV path ('-' for stdout)");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep from a spec file");
  std::string spec_path, sweep_out;
  sweep_cmd->add_option("--spec", spec_path, "sweep spec file")->required();
  sweep_cmd->add_option("--out", sweep_out, "output CSV path (overrides spec)");

  // figure studies
  struct FigArgs {
    std::string mode = "analytic";
    std::uint64_t seed = 1;
    std::int64_t trials = 2000;
    int workers = 0;
    std::string out_dir = ".";
  };
  FigArgs fig_args;
  auto add_fig = [&](const char* name, const char* desc) {
    auto* cmd = app.add_subcommand(name, desc);
    cmd->add_option("--mode", fig_args.mode, "analytic|mc|both");
    cmd->add_option("--seed", fig_args.seed, "master seed for simulation overlays");
    cmd->add_option("--trials", fig_args.trials, "simulation trials per point");
    cmd->add_option("--workers", fig_args.workers, "worker threads");
    cmd->add_option("--out", fig_args.out_dir, "output directory");
    return cmd;
  };
  auto* fig1_cmd = add_fig("fig1", "sum SE versus element count and Rician factor");
  auto* fig2_cmd = add_fig("fig2", "per-symbol SE versus time instant");
  auto* fig3_cmd = add_fig("fig3", "sum SE versus normalized Doppler and element area");

  CLI11_PARSE(app, argc, argv);

  try {
    SystemConfig cfg = resolve_config(config_path, sets);

    if (!dump_corr.empty()) {
      if (cfg.m() == 0) throw ConfigError("--dump-correlation requires M > 0");
      const auto corr = build_correlation(
          ris_element_positions(cfg.m_h, cfg.m_v, cfg.d_h, cfg.d_v), cfg.lambda);
      corr.write_csv(dump_corr);
      std::cerr << "wrote " << dump_corr << "\n";
    }
    if (!dump_stats.empty()) {
      const auto lsp = LargeScaleParams::derive(cfg);
      EstimationStats::build(cfg, lsp).write_csv(dump_stats);
      std::cerr << "wrote " << dump_stats << "\n";
    }
    if (!breakdown_path.empty()) write_file(breakdown_path, breakdown_csv(cfg));

    if (validate_cmd->parsed()) {
      McOptions opts;
      opts.trials = trials;
      opts.seed = seed;
      opts.tolerance = tolerance;
      opts.workers = workers;
      if (!symbols_arg.empty()) opts.symbols = parse_symbol_list(symbols_arg);
      const ComparisonReport report = validate(cfg, opts);
      write_file(out_path, report.to_csv());
      int failed = 0;
      for (const auto& r : report.rows)
        if (!r.pass) ++failed;
      std::cerr << "validate: " << report.rows.size() - failed << "/" << report.rows.size()
                << " term comparisons within " << tolerance * 100 << "% ("
                << report.trials << " trials)\n";
      return report.all_pass() ? 0 : 1;
    }

    if (sweep_cmd->parsed()) {
      SweepSpec spec = SweepSpec::from_file(spec_path, cfg);
      if (!sweep_out.empty()) spec.output_path = sweep_out;
      const SweepResult result = sweep(spec);
      write_file(spec.output_path.empty() ? "-" : spec.output_path, result.to_csv());
      return 0;
    }

    auto run_fig = [&](int which) -> int {
      const SweepMode mode = parse_mode(fig_args.mode);
      TrendReport rep;
      std::string csv;
      std::string name = "fig" + std::to_string(which);
      if (which == 1) {
        const Fig1Data d = run_fig1(cfg, mode, fig_args.seed, fig_args.trials, fig_args.workers);
        rep = figure1_trend_check(d);
        csv = fig1_csv(cfg, d);
      } else if (which == 2) {
        const Fig2Data d = run_fig2(cfg, mode, fig_args.seed, fig_args.trials, fig_args.workers);
        rep = figure2_trend_check(d);
        csv = fig2_csv(cfg, d);
      } else {
        const Fig3Data d = run_fig3(cfg, mode, fig_args.seed, fig_args.trials, fig_args.workers);
        rep = figure3_trend_check(d);
        csv = fig3_csv(cfg, d);
      }
      write_file((std::filesystem::path(fig_args.out_dir) / (name + ".csv")).string(), csv);
      std::cout << rep.to_text();
      return rep.all_pass() ? 0 : 1;
    };
    if (fig1_cmd->parsed()) return run_fig(1);
    if (fig2_cmd->parsed()) return run_fig(2);
    if (fig3_cmd->parsed()) return run_fig(3);

    if (app.get_subcommands().empty() && dump_corr.empty() && dump_stats.empty() &&
        breakdown_path.empty()) {
      // no action requested: print the resolved scenario summary
      const auto lsp = LargeScaleParams::derive(cfg);
      std::cout << "config_hash=" << std::hex << cfg.hash() << std::dec << "\n"
                << cfg.canonical_string() << "\n"
                << "derived: d_br=" << lsp.d_br << " kappa=" << lsp.kappa
                << " beta_br=" << lsp.beta_br << " sigma_e_sq=" << lsp.sigma_e_sq
                << " rho_db=" << lsp.rho_db << "\n";
      const auto se = analytic_se_per_ue(cfg);
      double sum = 0.0;
      for (std::size_t k = 0; k < se.size(); ++k) {
        std::cout << "SE[ue" << k + 1 << "] = " << se[k] << " bit/s/Hz\n";
        sum += se[k];
      }
      std::cout << "sum SE = " << sum << " bit/s/Hz\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
