#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "ffdyn/compare.hpp"
#include "ffdyn/csv.hpp"
#include "ffdyn/ensemble.hpp"
#include "ffdyn/experiment.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_run(const std::string& config_path, const std::string& output_override) {
  ffdyn::ExperimentConfig cfg = ffdyn::parse_config_file(config_path);
  if (!output_override.empty()) cfg.output_dir = output_override;
  const ffdyn::RunResult result = ffdyn::run_experiment(cfg);
  std::printf("wrote %zu artifacts to %s\n", result.artifacts.size(),
              result.dir.string().c_str());
  return 0;
}

int cmd_kappa(const std::vector<std::string>& trace_files, const std::string& out,
              std::size_t window, double floor, const std::string& mode) {
  std::vector<ffdyn::SpectralTrace> traces;
  traces.reserve(trace_files.size());
  for (const auto& f : trace_files) traces.push_back(ffdyn::read_trace_csv(f));
  const auto kmode = mode == "mean-trace" ? ffdyn::KappaMode::kAverageThenFit
                                          : ffdyn::KappaMode::kPerSeedThenAverage;
  const ffdyn::EnsembleResult ens =
      ffdyn::ensemble_aggregate(traces, {}, kmode, window, floor);
  ffdyn::write_kappa_csv(out, ens.mean_kappa);
  std::printf("wrote %s (%zu valid bins)\n", out.c_str(),
              ens.mean_kappa.valid_count());
  return 0;
}

int cmd_fem(const std::string& config_path, const std::string& output_override) {
  ffdyn::ExperimentConfig cfg = ffdyn::parse_config_file(config_path);
  if (!output_override.empty()) cfg.output_dir = output_override;
  cfg.run_nn = false;
  cfg.run_fem = true;
  const ffdyn::RunResult result = ffdyn::run_experiment(cfg);
  std::printf("wrote %zu artifacts to %s\n", result.artifacts.size(),
              result.dir.string().c_str());
  return 0;
}

int cmd_compare(const std::string& nn_dir, const std::string& fem_dir,
                const std::string& out_dir) {
  const ffdyn::ExperimentConfig cfg = ffdyn::parse_config_file(fs::path(nn_dir) /
                                                               "config_echo.ini");
  const fs::path out = out_dir.empty() ? fs::path(nn_dir) : fs::path(out_dir);
  int produced = 0;
  for (const auto& dist : cfg.dists) {
    const std::string label = dist.label();
    const fs::path mean_path = fs::path(nn_dir) / (label + "_mean_trace.csv");
    const fs::path kappa_path = fs::path(nn_dir) / (label + "_kappa.csv");
    const fs::path fem_path = fs::path(fem_dir) / ("fem_" + label + "_trace.csv");
    if (!fs::exists(mean_path) || !fs::exists(fem_path)) continue;

    ffdyn::EnsembleResult ens;
    ens.mean_spectrum = ffdyn::read_trace_csv(mean_path).snapshots;
    ens.mean_kappa = ffdyn::read_kappa_csv(kappa_path);
    const ffdyn::SpectralTrace model = ffdyn::read_trace_csv(fem_path);
    const ffdyn::ComparisonReport rep =
        ffdyn::compare(ens, model, dist, std::numeric_limits<double>::infinity(),
                       cfg.amplitude_floor);
    ffdyn::write_comparison_csv(out / ("compare_" + label + ".csv"), rep);
    std::printf("%s: time_scale %.6g, spearman %.4f, final rel L2 %.4f\n",
                label.c_str(), rep.time_scale, rep.spearman_kappa_rho,
                rep.rel_l2.empty() ? 0.0 : rep.rel_l2.back());
    ++produced;
  }
  if (produced == 0) {
    std::fprintf(stderr, "no matching trace pairs between %s and %s\n", nn_dir.c_str(),
                 fem_dir.c_str());
    return 1;
  }
  return 0;
}

int cmd_plot(const std::string& result_dir) {
  const auto files = ffdyn::render_plots(result_dir);
  for (const auto& f : files) std::printf("wrote %s\n", f.string().c_str());
  return files.empty() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier-features training dynamics toolkit"};
  app.require_subcommand(1);

  std::string config_path, output_override;
  auto* run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--output-dir", output_override, "override output directory");

  std::vector<std::string> trace_files;
  std::string kappa_out = "kappa.csv", kappa_mode = "per-seed";
  std::size_t kappa_window = 0;
  double kappa_floor = 1e-8;
  auto* kappa = app.add_subcommand("kappa", "estimate learning rates from trace CSVs");
  kappa->add_option("traces", trace_files, "trace CSV files")->required();
  kappa->add_option("--out", kappa_out, "output kappa CSV");
  kappa->add_option("--window", kappa_window, "fit window (snapshots, 0 = first 10%)");
  kappa->add_option("--floor", kappa_floor, "amplitude floor");
  kappa->add_option("--mode", kappa_mode, "per-seed or mean-trace");

  std::string fem_config, fem_output;
  auto* fem = app.add_subcommand("fem", "run only the FEM evolution of a config");
  fem->add_option("config", fem_config, "config file")->required();
  fem->add_option("--output-dir", fem_output, "override output directory");

  std::string nn_dir, fem_dir, compare_out;
  auto* cmp = app.add_subcommand("compare", "compare a training run with a FEM run");
  cmp->add_option("nn_dir", nn_dir, "training result directory")->required();
  cmp->add_option("fem_dir", fem_dir, "FEM result directory")->required();
  cmp->add_option("--out", compare_out, "output directory (default: nn_dir)");

  std::string plot_dir;
  auto* plot = app.add_subcommand("plot", "regenerate figures for a result directory");
  plot->add_option("result_dir", plot_dir, "result directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, output_override);
    if (kappa->parsed())
      return cmd_kappa(trace_files, kappa_out, kappa_window, kappa_floor, kappa_mode);
    if (fem->parsed()) return cmd_fem(fem_config, fem_output);
    if (cmp->parsed()) return cmd_compare(nn_dir, fem_dir, compare_out);
    if (plot->parsed()) return cmd_plot(plot_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
