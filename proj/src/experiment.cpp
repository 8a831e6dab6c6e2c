#include "ffdyn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ffdyn/compare.hpp"
#include "ffdyn/csv.hpp"
#include "ffdyn/fem.hpp"
#include "ffdyn/pde.hpp"
#include "ffdyn/svg.hpp"
#include "ffdyn/train.hpp"

namespace ffdyn {

namespace {

namespace fs = std::filesystem;

template <typename Fn>
void parallel_for(std::size_t count, Fn&& body) {
  const unsigned workers = std::min<unsigned>(worker_thread_count(),
                                              static_cast<unsigned>(count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          body(i);
        } catch (const std::exception& e) {
          std::scoped_lock lock(error_mutex);
          if (!failed.exchange(true)) first_error = e.what();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failed.load()) throw std::runtime_error(first_error);
}

SpectralSnapshot fem_initial_condition(const ExperimentConfig& cfg, const FemMesh& mesh) {
  const std::string& spec = cfg.fem.initial;
  if (spec == "target") {
    // Ensemble-mean initial residual: the network output averages to zero at
    // initialization, so the mean u0 is minus the target spectrum.
    std::vector<double> neg(cfg.train.grid.n);
    for (std::size_t i = 0; i < neg.size(); ++i)
      neg[i] = -cfg.train.target(cfg.train.grid.points[i]);
    return dft_forward(cfg.train.grid, neg);
  }
  SpectralSnapshot snap;
  snap.grid.freqs = mesh.nodes;
  snap.grid.resolution = mesh.h;
  snap.values.resize(mesh.size());
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  if (kind == "gaussian" && colon != std::string::npos) {
    const double s = std::stod(spec.substr(colon + 1));
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      const double xi = mesh.nodes[i];
      snap.values[i] = std::exp(-xi * xi / (2.0 * s * s));
    }
    return snap;
  }
  if (kind == "bumps" && colon != std::string::npos) {
    const auto comma = spec.find(',', colon);
    if (comma == std::string::npos)
      throw std::invalid_argument("fem initial: bumps needs <center>,<s>");
    const double c = std::stod(spec.substr(colon + 1, comma - colon - 1));
    const double s = std::stod(spec.substr(comma + 1));
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      const double xi = mesh.nodes[i];
      snap.values[i] = std::exp(-(xi - c) * (xi - c) / (2.0 * s * s)) +
                       std::exp(-(xi + c) * (xi + c) / (2.0 * s * s));
    }
    return snap;
  }
  throw std::invalid_argument("fem initial: unknown form '" + spec + "'");
}

void add_artifact(RunResult& result, const std::string& name) {
  RunArtifact a;
  a.name = name;
  a.path = result.dir / name;
  a.checksum = fnv1a_file(a.path);
  result.artifacts.push_back(std::move(a));
}

void run_one_setting(const ExperimentConfig& cfg, const DistributionSpec& dist,
                     const std::string& label, RunResult& result) {
  EnsembleResult ens;
  bool have_ens = false;

  if (cfg.run_nn) {
    std::vector<SpectralTrace> traces(cfg.seeds.size());
    parallel_for(cfg.seeds.size(), [&](std::size_t i) {
      TrainConfig tc = cfg.train;
      tc.dist_w = dist;
      tc.seed = cfg.seeds[i];
      traces[i] = train(tc).spectra;
    });
    const std::size_t window =
        default_fit_window(traces.front(), cfg.kappa_window_fraction);
    ens = ensemble_aggregate(traces, cfg.seeds, cfg.kappa_mode, window,
                             cfg.amplitude_floor);
    have_ens = true;
    write_kappa_csv(result.dir / (label + "_kappa.csv"), ens.mean_kappa);
    add_artifact(result, label + "_kappa.csv");
    SpectralTrace mean = ens.mean_trace();
    write_trace_csv(result.dir / (label + "_mean_trace.csv"), mean);
    add_artifact(result, label + "_mean_trace.csv");
  }

  if (cfg.run_fem) {
    const SpectralTrace fem_trace = run_fem_model(cfg, dist);
    write_trace_csv(result.dir / ("fem_" + label + "_trace.csv"), fem_trace);
    add_artifact(result, "fem_" + label + "_trace.csv");
    if (have_ens) {
      const ComparisonReport rep = compare(ens, fem_trace, dist,
                                           std::numeric_limits<double>::infinity(),
                                           cfg.amplitude_floor);
      write_comparison_csv(result.dir / ("compare_" + label + ".csv"), rep);
      add_artifact(result, "compare_" + label + ".csv");
    }
  }

  if (have_ens && cfg.preset == Preset::kFrozenCheck) {
    // Correlation report against the closed-form frozen decay of the mean
    // initial spectrum, evaluated on the network snapshot schedule.
    std::vector<double> offsets;
    const double t0 = ens.mean_spectrum.front().time;
    for (const auto& s : ens.mean_spectrum) offsets.push_back(s.time - t0);
    const SpectralTrace model = frozen_trace(ens.mean_spectrum.front(), dist, offsets);
    const ComparisonReport rep =
        compare(ens, model, dist, std::numeric_limits<double>::infinity(),
                cfg.amplitude_floor);
    write_comparison_csv(result.dir / ("compare_" + label + ".csv"), rep);
    add_artifact(result, "compare_" + label + ".csv");
  }
}

}  // namespace

unsigned worker_thread_count() {
  if (const char* env = std::getenv("FFDYN_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

SpectralTrace run_fem_model(const ExperimentConfig& cfg, const DistributionSpec& dist) {
  const FemMesh mesh = build_mesh(cfg.fem.a, cfg.fem.b, cfg.fem.h);
  const CoefficientField coeffs = build_coefficients(dist, cfg.fem.sigma_a);
  const FemSystem sys = assemble(mesh, coeffs, cfg.fem.dt);
  const SpectralSnapshot u0 = fem_initial_condition(cfg, mesh);
  const FemState state0 = project_initial(u0, mesh);
  return evolve(sys, state0, cfg.fem.dt, cfg.fem.steps, cfg.fem.snapshot_every);
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.dir = cfg.output_dir;
  std::error_code ec;
  fs::create_directories(result.dir, ec);

  try {
    {
      std::ofstream echo(result.dir / "config_echo.ini", std::ios::binary);
      if (!echo) throw std::runtime_error("cannot write " + result.dir.string());
      echo << render_config(cfg);
    }
    add_artifact(result, "config_echo.ini");

    if (cfg.preset == Preset::kRobustnessM) {
      for (std::size_t depth : cfg.depth_list)
        for (std::size_t m : cfg.m_list)
          for (const auto& dist : cfg.dists) {
            ExperimentConfig sub = cfg;
            sub.train.m = m;
            sub.train.depth = depth;
            std::ostringstream label;
            label << dist.label() << "_m" << m << "_depth" << depth;
            run_one_setting(sub, dist, label.str(), result);
          }
    } else {
      for (const auto& dist : cfg.dists) run_one_setting(cfg, dist, dist.label(), result);
    }

    for (const auto& svg : render_plots(result.dir))
      add_artifact(result, svg.filename().string());

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream man(result.dir / "manifest.txt", std::ios::binary);
    if (!man) throw std::runtime_error("cannot write manifest");
    man << "toolkit = ffdyn " << FFDYN_VERSION << '\n';
    man << "preset = " << preset_to_string(cfg.preset) << '\n';
    man << "config = config_echo.ini\n";
    man << "wall_clock_seconds = " << format17(wall) << '\n';
    for (const auto& a : result.artifacts)
      man << "file." << a.name << ".fnv1a = " << to_hex(a.checksum) << '\n';
  } catch (const std::exception& e) {
    std::ofstream fail(result.dir / "FAILED.txt", std::ios::binary);
    fail << e.what() << '\n';
    throw;
  }
  return result;
}

std::vector<std::filesystem::path> render_plots(const std::filesystem::path& dir) {
  std::vector<fs::path> produced;

  std::vector<std::string> kappa_files, mean_traces, fem_traces;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.ends_with("_kappa.csv")) kappa_files.push_back(name);
    else if (name.ends_with("_mean_trace.csv")) mean_traces.push_back(name);
    else if (name.starts_with("fem_") && name.ends_with("_trace.csv"))
      fem_traces.push_back(name);
  }
  std::sort(kappa_files.begin(), kappa_files.end());
  std::sort(mean_traces.begin(), mean_traces.end());
  std::sort(fem_traces.begin(), fem_traces.end());

  if (!kappa_files.empty()) {
    std::vector<PlotSeries> series;
    for (const auto& name : kappa_files) {
      const KappaProfile prof = read_kappa_csv(dir / name);
      PlotSeries s;
      s.label = name.substr(0, name.size() - std::string("_kappa.csv").size());
      for (std::size_t j = 0; j < prof.grid.size(); ++j) {
        if (!prof.valid[j]) continue;
        s.x.push_back(prof.grid.freqs[j]);
        s.y.push_back(prof.kappa[j]);
      }
      series.push_back(std::move(s));
    }
    PlotSpec spec;
    spec.title = "Frequency learning rate";
    spec.xlabel = "xi (cycles/unit)";
    spec.ylabel = "kappa";
    spec.log_y = true;
    write_chart(dir / "kappa_overlay.svg", spec, series);
    produced.push_back(dir / "kappa_overlay.svg");
  }

  // Target function and its spectrum, when the run's config is available.
  const fs::path echo = dir / "config_echo.ini";
  if (fs::exists(echo)) {
    const ExperimentConfig cfg = parse_config_file(echo);
    std::vector<double> vals(cfg.train.grid.n);
    for (std::size_t i = 0; i < vals.size(); ++i)
      vals[i] = cfg.train.target(cfg.train.grid.points[i]);
    const SpectralSnapshot spec_hat = dft_forward(cfg.train.grid, vals);

    PlotSeries left;
    left.label = cfg.train.target.id();
    left.x.assign(cfg.train.grid.points.begin(), cfg.train.grid.points.end());
    left.y = vals;
    PlotSeries right;
    right.label = "|target spectrum|";
    for (std::size_t j = 0; j < spec_hat.grid.size(); ++j) {
      right.x.push_back(spec_hat.grid.freqs[j]);
      right.y.push_back(std::abs(spec_hat.values[j]));
    }
    PlotSpec ls{.title = "Target", .xlabel = "x", .ylabel = "f(x)"};
    PlotSpec rs{.title = "Target spectrum", .xlabel = "xi", .ylabel = "|F|", .log_y = true};
    write_panel_grid(dir / "target_spectrum.svg", "", {ls, rs},
                     {{left}, {right}}, 2);
    produced.push_back(dir / "target_spectrum.svg");
  }

  // Snapshot panels: |mean u| from training next to the FEM curve.
  for (const auto& name : mean_traces) {
    const std::string label =
        name.substr(0, name.size() - std::string("_mean_trace.csv").size());
    const SpectralTrace nn = read_trace_csv(dir / name);
    const std::string fem_name = "fem_" + label + "_trace.csv";
    const bool with_fem =
        std::find(fem_traces.begin(), fem_traces.end(), fem_name) != fem_traces.end();
    SpectralTrace fem;
    if (with_fem) fem = read_trace_csv(dir / fem_name);

    const std::size_t panels = std::min<std::size_t>(nn.snapshots.size(), 12);
    std::vector<PlotSpec> specs;
    std::vector<std::vector<PlotSeries>> all;
    for (std::size_t k = 0; k < panels; ++k) {
      const auto& snap = nn.snapshots[k];
      PlotSeries s;
      s.label = "network";
      for (std::size_t j = 0; j < snap.values.size(); ++j) {
        s.x.push_back(snap.grid.freqs[j]);
        s.y.push_back(std::abs(snap.values[j]));
      }
      std::vector<PlotSeries> panel{std::move(s)};
      if (with_fem && !fem.snapshots.empty()) {
        const std::size_t fk =
            std::min(k * (fem.snapshots.size() - 1) / std::max<std::size_t>(panels - 1, 1),
                     fem.snapshots.size() - 1);
        const auto& fsnap = fem.snapshots[fk];
        PlotSeries f;
        f.label = "model";
        for (std::size_t j = 0; j < fsnap.values.size(); ++j) {
          f.x.push_back(fsnap.grid.freqs[j]);
          f.y.push_back(std::abs(fsnap.values[j]));
        }
        panel.push_back(std::move(f));
      }
      char title[64];
      std::snprintf(title, sizeof(title), "t = %.6g", snap.time);
      PlotSpec ps;
      ps.title = title;
      ps.xlabel = "xi";
      ps.ylabel = "|u|";
      ps.width = 330;
      ps.height = 260;
      specs.push_back(ps);
      all.push_back(std::move(panel));
    }
    if (!specs.empty()) {
      write_panel_grid(dir / ("dynamics_" + label + ".svg"), label, specs, all, 4);
      produced.push_back(dir / ("dynamics_" + label + ".svg"));
    }
  }

  return produced;
}

}  // namespace ffdyn
