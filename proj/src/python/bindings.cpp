#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ffdyn/compare.hpp"
#include "ffdyn/csv.hpp"
#include "ffdyn/distribution.hpp"
#include "ffdyn/ensemble.hpp"
#include "ffdyn/experiment.hpp"
#include "ffdyn/fem.hpp"
#include "ffdyn/pde.hpp"
#include "ffdyn/train.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

ffdyn::SpectralSnapshot dft_forward_vec(const ffdyn::SampleGrid& grid,
                                        const std::vector<double>& signal) {
  return ffdyn::dft_forward(grid, signal);
}

}  // namespace

PYBIND11_MODULE(_ffdyn, m) {
  m.doc() = "Fourier-features training dynamics toolkit";

  py::enum_<ffdyn::DistKind>(m, "DistKind")
      .value("NORMAL", ffdyn::DistKind::kNormal)
      .value("UNIFORM", ffdyn::DistKind::kUniform)
      .value("TABULATED", ffdyn::DistKind::kTabulated);

  py::class_<ffdyn::DistributionSpec>(m, "DistributionSpec")
      .def_static("normal", &ffdyn::DistributionSpec::normal, "sigma"_a)
      .def_static("uniform", &ffdyn::DistributionSpec::uniform, "halfwidth"_a)
      .def_static("tabulated", &ffdyn::DistributionSpec::tabulated, "nodes"_a,
                  "densities"_a)
      .def_property_readonly("kind", &ffdyn::DistributionSpec::kind)
      .def("pdf", &ffdyn::DistributionSpec::pdf, "xi"_a)
      .def("variance", &ffdyn::DistributionSpec::variance)
      .def("sample", &ffdyn::DistributionSpec::sample, "m"_a, "seed"_a)
      .def("label", &ffdyn::DistributionSpec::label);

  m.def("pdf_eval", &ffdyn::pdf_eval, "dist"_a, "xi"_a);
  m.def("sample_weights", &ffdyn::sample_weights, "dist"_a, "m"_a, "seed"_a);

  py::class_<ffdyn::TargetSpec>(m, "TargetSpec")
      .def_static("rounded_sine", &ffdyn::TargetSpec::rounded_sine, "freq_factor"_a)
      .def_static("custom", &ffdyn::TargetSpec::custom, "id"_a, "fn"_a)
      .def("__call__", &ffdyn::TargetSpec::operator(), "x"_a)
      .def_property_readonly("id", &ffdyn::TargetSpec::id);

  m.def("target_eval", &ffdyn::target_eval, "target"_a, "x"_a);

  py::class_<ffdyn::SampleGrid>(m, "SampleGrid")
      .def_readonly("n", &ffdyn::SampleGrid::n)
      .def_readonly("a", &ffdyn::SampleGrid::a)
      .def_readonly("b", &ffdyn::SampleGrid::b)
      .def_readonly("points", &ffdyn::SampleGrid::points)
      .def("spacing", &ffdyn::SampleGrid::spacing)
      .def("length", &ffdyn::SampleGrid::length);
  m.def("make_sample_grid", &ffdyn::make_sample_grid, "n"_a, "a"_a, "b"_a);

  py::class_<ffdyn::FrequencyGrid>(m, "FrequencyGrid")
      .def_readonly("freqs", &ffdyn::FrequencyGrid::freqs)
      .def_readonly("resolution", &ffdyn::FrequencyGrid::resolution)
      .def("index_of", &ffdyn::FrequencyGrid::index_of, "xi"_a);
  m.def("frequency_grid_for", &ffdyn::frequency_grid_for, "grid"_a);

  py::class_<ffdyn::SpectralSnapshot>(m, "SpectralSnapshot")
      .def(py::init<>())
      .def_readwrite("grid", &ffdyn::SpectralSnapshot::grid)
      .def_readwrite("values", &ffdyn::SpectralSnapshot::values)
      .def_readwrite("time", &ffdyn::SpectralSnapshot::time);

  py::class_<ffdyn::SpectralTrace>(m, "SpectralTrace")
      .def(py::init<>())
      .def_readwrite("snapshots", &ffdyn::SpectralTrace::snapshots)
      .def("times", &ffdyn::SpectralTrace::times);

  m.def("dft_forward", &dft_forward_vec, "grid"_a, "signal"_a);
  m.def("dft_inverse", &ffdyn::dft_inverse, "grid"_a, "spectrum"_a);
  m.def("hermitian_asymmetry", &ffdyn::hermitian_asymmetry, "snapshot"_a);

  py::class_<ffdyn::NetworkParams>(m, "NetworkParams")
      .def_readwrite("a", &ffdyn::NetworkParams::a)
      .def_readwrite("b", &ffdyn::NetworkParams::b)
      .def_readwrite("w", &ffdyn::NetworkParams::w)
      .def_readwrite("frozen_w", &ffdyn::NetworkParams::frozen_w)
      .def("forward", &ffdyn::NetworkParams::forward, "x"_a);

  py::class_<ffdyn::MultilayerParams>(m, "MultilayerParams")
      .def_readwrite("w", &ffdyn::MultilayerParams::w)
      .def_readwrite("hidden", &ffdyn::MultilayerParams::hidden)
      .def_readwrite("output", &ffdyn::MultilayerParams::output)
      .def("forward", &ffdyn::MultilayerParams::forward, "x"_a);

  py::class_<ffdyn::TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("m", &ffdyn::TrainConfig::m)
      .def_readwrite("dist_w", &ffdyn::TrainConfig::dist_w)
      .def_readwrite("sigma_a", &ffdyn::TrainConfig::sigma_a)
      .def_readwrite("step_size", &ffdyn::TrainConfig::step_size)
      .def_readwrite("iterations", &ffdyn::TrainConfig::iterations)
      .def_readwrite("snapshot_every", &ffdyn::TrainConfig::snapshot_every)
      .def_readwrite("seed", &ffdyn::TrainConfig::seed)
      .def_readwrite("grid", &ffdyn::TrainConfig::grid)
      .def_readwrite("target", &ffdyn::TrainConfig::target)
      .def_readwrite("frozen_w", &ffdyn::TrainConfig::frozen_w)
      .def_readwrite("depth", &ffdyn::TrainConfig::depth)
      .def_readwrite("hidden_width", &ffdyn::TrainConfig::hidden_width)
      .def_readwrite("time_scale", &ffdyn::TrainConfig::time_scale)
      .def("validate", &ffdyn::TrainConfig::validate);

  m.def("init_network", &ffdyn::init_network, "cfg"_a);
  m.def("forward", py::overload_cast<const ffdyn::NetworkVariant&, double>(&ffdyn::forward),
        "params"_a, "x"_a);
  m.def(
      "loss_and_grad",
      [](const ffdyn::NetworkVariant& params, const ffdyn::SampleGrid& grid,
         const ffdyn::TargetSpec& target) {
        ffdyn::Gradients g;
        const double risk = ffdyn::loss_and_grad(params, grid, target, &g);
        py::dict grads;
        grads["a"] = g.a;
        grads["b"] = g.b;
        grads["w"] = g.w;
        grads["hidden"] = g.hidden;
        grads["output"] = g.output;
        return py::make_tuple(risk, grads);
      },
      "params"_a, "grid"_a, "target"_a);

  py::class_<ffdyn::ResidualTrace>(m, "ResidualTrace")
      .def_readonly("spectra", &ffdyn::ResidualTrace::spectra)
      .def_readonly("iterations", &ffdyn::ResidualTrace::iterations)
      .def_readonly("final_risk", &ffdyn::ResidualTrace::final_risk);

  m.def("train", &ffdyn::train, "cfg"_a,
        py::call_guard<py::gil_scoped_release>());

  py::class_<ffdyn::CoefficientField>(m, "CoefficientField")
      .def_readonly("sigma_a", &ffdyn::CoefficientField::sigma_a)
      .def_readonly("c", &ffdyn::CoefficientField::c)
      .def_readonly("dim", &ffdyn::CoefficientField::dim)
      .def("damping", [](const ffdyn::CoefficientField& f, double xi) { return f.damping(xi); },
           "xi"_a)
      .def("diffusion", &ffdyn::CoefficientField::diffusion, "xi"_a);

  m.def("symmetrize_density",
        [](const ffdyn::DistributionSpec& d) { return ffdyn::symmetrize_density(d); },
        "dist"_a);
  m.def("build_coefficients", &ffdyn::build_coefficients, "dist"_a, "sigma_a"_a,
        "c"_a = 6.283185307179586476925286766559, "dim"_a = 1);
  m.def("field_from_density", &ffdyn::field_from_density, "rho"_a, "sigma_a"_a,
        "breakpoints"_a = std::vector<double>{});
  m.def("frozen_solution", &ffdyn::frozen_solution, "u0"_a, "dist"_a, "t"_a);
  m.def("frozen_trace", &ffdyn::frozen_trace, "u0"_a, "dist"_a, "times"_a);

  py::class_<ffdyn::FemMesh>(m, "FemMesh")
      .def_readonly("a", &ffdyn::FemMesh::a)
      .def_readonly("b", &ffdyn::FemMesh::b)
      .def_readonly("h", &ffdyn::FemMesh::h)
      .def_readonly("nodes", &ffdyn::FemMesh::nodes)
      .def("size", &ffdyn::FemMesh::size);
  m.def("build_mesh", &ffdyn::build_mesh, "a"_a, "b"_a, "h"_a);

  py::class_<ffdyn::FemSystem>(m, "FemSystem")
      .def_readonly("sigma_a", &ffdyn::FemSystem::sigma_a)
      .def_readonly("dt", &ffdyn::FemSystem::dt)
      .def_readonly("mesh", &ffdyn::FemSystem::mesh);
  m.def("assemble", &ffdyn::assemble, "mesh"_a, "coeffs"_a, "dt"_a);

  py::class_<ffdyn::FemState>(m, "FemState")
      .def(py::init<>())
      .def_readwrite("re", &ffdyn::FemState::re)
      .def_readwrite("im", &ffdyn::FemState::im)
      .def_readwrite("time", &ffdyn::FemState::time);
  m.def("project_initial", &ffdyn::project_initial, "u0"_a, "mesh"_a);
  m.def("step", &ffdyn::step, "system"_a, "state"_a, "dt"_a);
  m.def("evolve", &ffdyn::evolve, "system"_a, "state"_a, "dt"_a, "n_steps"_a,
        "snapshot_every"_a, py::call_guard<py::gil_scoped_release>());
  m.def("spectral_energy", &ffdyn::spectral_energy, "system"_a, "state"_a);
  m.def("to_snapshot", &ffdyn::to_snapshot, "mesh"_a, "state"_a);

  py::class_<ffdyn::KappaProfile>(m, "KappaProfile")
      .def_readonly("grid", &ffdyn::KappaProfile::grid)
      .def_readonly("kappa", &ffdyn::KappaProfile::kappa)
      .def_readonly("fit_r2", &ffdyn::KappaProfile::fit_r2)
      .def_readonly("valid", &ffdyn::KappaProfile::valid)
      .def("valid_count", &ffdyn::KappaProfile::valid_count);

  m.def("estimate_kappa", &ffdyn::estimate_kappa, "trace"_a, "window"_a,
        "amplitude_floor"_a = 1e-8);
  m.def("default_fit_window", &ffdyn::default_fit_window, "trace"_a, "fraction"_a = 0.1);

  py::enum_<ffdyn::KappaMode>(m, "KappaMode")
      .value("PER_SEED_THEN_AVERAGE", ffdyn::KappaMode::kPerSeedThenAverage)
      .value("AVERAGE_THEN_FIT", ffdyn::KappaMode::kAverageThenFit);

  py::class_<ffdyn::EnsembleResult>(m, "EnsembleResult")
      .def_readonly("mean_spectrum", &ffdyn::EnsembleResult::mean_spectrum)
      .def_readonly("per_seed_kappa", &ffdyn::EnsembleResult::per_seed_kappa)
      .def_readonly("mean_kappa", &ffdyn::EnsembleResult::mean_kappa)
      .def_readonly("seeds", &ffdyn::EnsembleResult::seeds)
      .def("mean_trace", &ffdyn::EnsembleResult::mean_trace);

  m.def("ensemble_aggregate", &ffdyn::ensemble_aggregate, "traces"_a, "seeds"_a,
        "mode"_a = ffdyn::KappaMode::kPerSeedThenAverage, "window"_a = 0,
        "amplitude_floor"_a = 1e-8);

  py::class_<ffdyn::ComparisonReport>(m, "ComparisonReport")
      .def_readonly("time_scale", &ffdyn::ComparisonReport::time_scale)
      .def_readonly("nn_times", &ffdyn::ComparisonReport::nn_times)
      .def_readonly("rel_l2", &ffdyn::ComparisonReport::rel_l2)
      .def_readonly("spearman_kappa_rho", &ffdyn::ComparisonReport::spearman_kappa_rho)
      .def_readonly("band_lo", &ffdyn::ComparisonReport::band_lo)
      .def_readonly("band_hi", &ffdyn::ComparisonReport::band_hi)
      .def_readonly("band_bins", &ffdyn::ComparisonReport::band_bins);

  m.def("compare", &ffdyn::compare, "nn"_a, "model"_a, "dist"_a,
        "band_limit"_a = std::numeric_limits<double>::infinity(),
        "amplitude_floor"_a = 1e-8);
  m.def("spearman", [](const std::vector<double>& x, const std::vector<double>& y) {
    return ffdyn::spearman(x, y);
  });

  m.def("write_kappa_csv", &ffdyn::write_kappa_csv, "path"_a, "profile"_a);
  m.def("read_kappa_csv", &ffdyn::read_kappa_csv, "path"_a);
  m.def("write_trace_csv", &ffdyn::write_trace_csv, "path"_a, "trace"_a);
  m.def("read_trace_csv", &ffdyn::read_trace_csv, "path"_a);

  m.def("parse_config_file", &ffdyn::parse_config_file, "path"_a);
  m.def("run_experiment", &ffdyn::run_experiment, "cfg"_a,
        py::call_guard<py::gil_scoped_release>());
  m.def("worker_thread_count", &ffdyn::worker_thread_count);

  m.attr("__version__") = FFDYN_VERSION;
}
