#include "ffdyn/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ffdyn/csv.hpp"

namespace ffdyn {

namespace {

constexpr double kSigma300 = 47.746482927568601;  // 300/(2 pi)

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& msg) {
  throw std::invalid_argument(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_num(const std::string& origin, std::size_t line, const std::string& key,
                 const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(origin, line, key + ": expected a number, got '" + v + "'");
  }
}

std::uint64_t parse_uint(const std::string& origin, std::size_t line, const std::string& key,
                         const std::string& v) {
  std::uint64_t x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    fail(origin, line, key + ": expected a nonnegative integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& origin, std::size_t line, const std::string& key,
                const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(origin, line, key + ": expected true/false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

DistributionSpec parse_dist(const std::string& origin, std::size_t line,
                            const std::string& v) {
  const auto colon = v.find(':');
  if (colon == std::string::npos)
    fail(origin, line, "dist: expected normal:<sigma> or uniform:<halfwidth>, got '" + v + "'");
  const std::string kind = v.substr(0, colon);
  const double param = parse_num(origin, line, "dist", v.substr(colon + 1));
  if (kind == "normal") return DistributionSpec::normal(param);
  if (kind == "uniform") return DistributionSpec::uniform(param);
  fail(origin, line, "dist: unknown kind '" + kind + "'");
}

TargetSpec parse_target(const std::string& origin, std::size_t line, const std::string& v) {
  const auto colon = v.find(':');
  if (v.substr(0, colon) == "rounded-sine" && colon != std::string::npos)
    return TargetSpec::rounded_sine(parse_num(origin, line, "target", v.substr(colon + 1)));
  fail(origin, line, "target: expected rounded-sine:<factor>, got '" + v + "'");
}

std::string dist_to_config(const DistributionSpec& d) {
  switch (d.kind()) {
    case DistKind::kNormal: return "normal:" + format17(d.sigma());
    case DistKind::kUniform: return "uniform:" + format17(d.halfwidth());
    case DistKind::kTabulated: break;
  }
  throw std::invalid_argument("tabulated densities are API-only and have no config form");
}

}  // namespace

Preset preset_from_string(const std::string& s) {
  if (s == "kappa-sweep") return Preset::kKappaSweep;
  if (s == "fem-vs-nn") return Preset::kFemVsNn;
  if (s == "frozen-check") return Preset::kFrozenCheck;
  if (s == "multilayer") return Preset::kMultilayer;
  if (s == "robustness-m") return Preset::kRobustnessM;
  if (s == "custom") return Preset::kCustom;
  throw std::invalid_argument("unknown preset '" + s + "'");
}

std::string preset_to_string(Preset p) {
  switch (p) {
    case Preset::kKappaSweep: return "kappa-sweep";
    case Preset::kFemVsNn: return "fem-vs-nn";
    case Preset::kFrozenCheck: return "frozen-check";
    case Preset::kMultilayer: return "multilayer";
    case Preset::kRobustnessM: return "robustness-m";
    case Preset::kCustom: return "custom";
  }
  return "custom";
}

ExperimentConfig config_for_preset(Preset preset) {
  ExperimentConfig cfg;
  cfg.preset = preset;
  cfg.seeds.resize(100);
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) cfg.seeds[i] = i;

  switch (preset) {
    case Preset::kKappaSweep:
      cfg.dists = {DistributionSpec::normal(30.0 / (2.0 * std::numbers::pi)),
                   DistributionSpec::normal(90.0 / (2.0 * std::numbers::pi)),
                   DistributionSpec::normal(300.0 / (2.0 * std::numbers::pi)),
                   DistributionSpec::normal(600.0 / (2.0 * std::numbers::pi))};
      cfg.train.snapshot_every = 100;
      break;
    case Preset::kFemVsNn:
      cfg.dists = {DistributionSpec::normal(kSigma300)};
      cfg.train.snapshot_every = 4000;
      cfg.run_fem = true;
      cfg.kappa_mode = KappaMode::kAverageThenFit;
      break;
    case Preset::kFrozenCheck:
      cfg.dists = {DistributionSpec::uniform(10.0), DistributionSpec::normal(kSigma300)};
      cfg.train.frozen_w = true;
      cfg.train.snapshot_every = 100;
      cfg.seeds.resize(20);
      break;
    case Preset::kMultilayer:
      cfg.dists = {DistributionSpec::normal(kSigma300)};
      cfg.train.depth = 3;
      cfg.train.hidden_width = 4000;
      cfg.train.snapshot_every = 100;
      break;
    case Preset::kRobustnessM:
      cfg.dists = {DistributionSpec::normal(kSigma300)};
      cfg.train.snapshot_every = 100;
      cfg.train.hidden_width = 512;
      cfg.m_list = {50, 500, 2000};
      cfg.depth_list = {2, 4};
      cfg.seeds.resize(20);
      break;
    case Preset::kCustom:
      cfg.dists = {DistributionSpec::normal(kSigma300)};
      break;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  train.validate();
  if (dists.empty()) throw std::invalid_argument("config: [dists] must list at least one dist");
  if (seeds.empty()) throw std::invalid_argument("config: [seeds] must produce at least one seed");
  if (!(kappa_window_fraction > 0.0 && kappa_window_fraction <= 1.0))
    throw std::invalid_argument("config: kappa_window_fraction must be in (0, 1]");
  if (!(amplitude_floor > 0.0))
    throw std::invalid_argument("config: amplitude_floor must be > 0");
  if (output_dir.empty()) throw std::invalid_argument("config: output_dir must be set");
  if (run_fem) {
    if (!(fem.a < fem.b) || !(fem.h > 0.0) || !(fem.dt > 0.0))
      throw std::invalid_argument("config: [fem] needs a < b, h > 0, dt > 0");
    if (fem.steps < 1 || fem.snapshot_every < 1)
      throw std::invalid_argument("config: [fem] steps and snapshot_every must be >= 1");
  }
  if (preset == Preset::kRobustnessM && (m_list.empty() || depth_list.empty()))
    throw std::invalid_argument("config: robustness-m needs m_list and depth_list");
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  // First pass: the preset decides every default the file may then override.
  Preset preset = Preset::kCustom;
  {
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      std::string line = trim(raw.substr(0, raw.find('#')));
      if (line.rfind("preset", 0) == 0) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "preset: expected '='");
        try {
          preset = preset_from_string(trim(line.substr(eq + 1)));
        } catch (const std::invalid_argument& err) {
          fail(origin, lineno, err.what());
        }
        break;
      }
    }
  }

  ExperimentConfig cfg = config_for_preset(preset);
  bool dists_reset = false;
  bool have_seed_list = false;
  std::uint64_t seed_count = cfg.seeds.size(), seed_base = 0;
  bool seeds_touched = false;

  std::istringstream in(text);
  std::string raw, section;
  std::size_t lineno = 0;
  std::size_t grid_n = cfg.train.grid.n;
  double grid_a = cfg.train.grid.a, grid_b = cfg.train.grid.b;
  bool grid_touched = false;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (section.empty()) {
      if (key == "preset") continue;  // handled in the first pass
      else if (key == "output_dir") cfg.output_dir = value;
      else if (key == "kappa_mode") {
        if (value == "per-seed") cfg.kappa_mode = KappaMode::kPerSeedThenAverage;
        else if (value == "mean-trace") cfg.kappa_mode = KappaMode::kAverageThenFit;
        else fail(origin, lineno, "kappa_mode: expected per-seed or mean-trace");
      } else if (key == "kappa_window_fraction")
        cfg.kappa_window_fraction = parse_num(origin, lineno, key, value);
      else if (key == "amplitude_floor")
        cfg.amplitude_floor = parse_num(origin, lineno, key, value);
      else if (key == "run_nn") cfg.run_nn = parse_bool(origin, lineno, key, value);
      else if (key == "run_fem") cfg.run_fem = parse_bool(origin, lineno, key, value);
      else fail(origin, lineno, "unknown top-level key '" + key + "'");
    } else if (section == "train") {
      if (key == "m") cfg.train.m = parse_uint(origin, lineno, key, value);
      else if (key == "sigma_a") cfg.train.sigma_a = parse_num(origin, lineno, key, value);
      else if (key == "step_size") cfg.train.step_size = parse_num(origin, lineno, key, value);
      else if (key == "iterations") cfg.train.iterations = parse_uint(origin, lineno, key, value);
      else if (key == "snapshot_every")
        cfg.train.snapshot_every = parse_uint(origin, lineno, key, value);
      else if (key == "frozen_w") cfg.train.frozen_w = parse_bool(origin, lineno, key, value);
      else if (key == "depth") cfg.train.depth = parse_uint(origin, lineno, key, value);
      else if (key == "hidden_width")
        cfg.train.hidden_width = parse_uint(origin, lineno, key, value);
      else if (key == "time_scale") cfg.train.time_scale = parse_num(origin, lineno, key, value);
      else if (key == "grid_n") { grid_n = parse_uint(origin, lineno, key, value); grid_touched = true; }
      else if (key == "grid_a") { grid_a = parse_num(origin, lineno, key, value); grid_touched = true; }
      else if (key == "grid_b") { grid_b = parse_num(origin, lineno, key, value); grid_touched = true; }
      else if (key == "target") cfg.train.target = parse_target(origin, lineno, value);
      else fail(origin, lineno, "unknown key '" + key + "' in [train]");
    } else if (section == "fem") {
      if (key == "a") cfg.fem.a = parse_num(origin, lineno, key, value);
      else if (key == "b") cfg.fem.b = parse_num(origin, lineno, key, value);
      else if (key == "h") cfg.fem.h = parse_num(origin, lineno, key, value);
      else if (key == "dt") cfg.fem.dt = parse_num(origin, lineno, key, value);
      else if (key == "steps") cfg.fem.steps = parse_uint(origin, lineno, key, value);
      else if (key == "snapshot_every")
        cfg.fem.snapshot_every = parse_uint(origin, lineno, key, value);
      else if (key == "sigma_a") cfg.fem.sigma_a = parse_num(origin, lineno, key, value);
      else if (key == "initial") cfg.fem.initial = value;
      else fail(origin, lineno, "unknown key '" + key + "' in [fem]");
    } else if (section == "dists") {
      if (key != "dist") fail(origin, lineno, "unknown key '" + key + "' in [dists]");
      if (!dists_reset) {
        cfg.dists.clear();
        dists_reset = true;
      }
      try {
        cfg.dists.push_back(parse_dist(origin, lineno, value));
      } catch (const std::invalid_argument& err) {
        fail(origin, lineno, err.what());
      }
    } else if (section == "seeds") {
      seeds_touched = true;
      if (key == "count") seed_count = parse_uint(origin, lineno, key, value);
      else if (key == "base") seed_base = parse_uint(origin, lineno, key, value);
      else if (key == "list") {
        cfg.seeds.clear();
        for (const auto& part : split(value, ','))
          if (!part.empty()) cfg.seeds.push_back(parse_uint(origin, lineno, key, part));
        have_seed_list = true;
      } else fail(origin, lineno, "unknown key '" + key + "' in [seeds]");
    } else if (section == "robustness") {
      if (key == "m_list") {
        cfg.m_list.clear();
        for (const auto& part : split(value, ','))
          cfg.m_list.push_back(parse_uint(origin, lineno, key, part));
      } else if (key == "depth_list") {
        cfg.depth_list.clear();
        for (const auto& part : split(value, ','))
          cfg.depth_list.push_back(parse_uint(origin, lineno, key, part));
      } else fail(origin, lineno, "unknown key '" + key + "' in [robustness]");
    } else {
      fail(origin, lineno, "unknown section [" + section + "]");
    }
  }

  if (grid_touched) cfg.train.grid = make_sample_grid(grid_n, grid_a, grid_b);
  if (seeds_touched && !have_seed_list) {
    cfg.seeds.resize(seed_count);
    for (std::uint64_t i = 0; i < seed_count; ++i) cfg.seeds[i] = seed_base + i;
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.filename().string());
}

std::string render_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "# frequencies are in cycles per unit length\n";
  out << "preset = " << preset_to_string(cfg.preset) << '\n';
  out << "output_dir = " << cfg.output_dir.generic_string() << '\n';
  out << "kappa_mode = "
      << (cfg.kappa_mode == KappaMode::kPerSeedThenAverage ? "per-seed" : "mean-trace")
      << '\n';
  out << "kappa_window_fraction = " << format17(cfg.kappa_window_fraction) << '\n';
  out << "amplitude_floor = " << format17(cfg.amplitude_floor) << '\n';
  out << "run_nn = " << (cfg.run_nn ? "true" : "false") << '\n';
  out << "run_fem = " << (cfg.run_fem ? "true" : "false") << '\n';
  out << "\n[train]\n";
  out << "m = " << cfg.train.m << '\n';
  out << "sigma_a = " << format17(cfg.train.sigma_a) << '\n';
  out << "step_size = " << format17(cfg.train.step_size) << '\n';
  out << "iterations = " << cfg.train.iterations << '\n';
  out << "snapshot_every = " << cfg.train.snapshot_every << '\n';
  out << "frozen_w = " << (cfg.train.frozen_w ? "true" : "false") << '\n';
  out << "depth = " << cfg.train.depth << '\n';
  out << "hidden_width = " << cfg.train.hidden_width << '\n';
  out << "time_scale = " << format17(cfg.train.time_scale) << '\n';
  out << "grid_n = " << cfg.train.grid.n << '\n';
  out << "grid_a = " << format17(cfg.train.grid.a) << '\n';
  out << "grid_b = " << format17(cfg.train.grid.b) << '\n';
  out << "target = " << cfg.train.target.id() << '\n';
  out << "\n[fem]\n";
  out << "a = " << format17(cfg.fem.a) << '\n';
  out << "b = " << format17(cfg.fem.b) << '\n';
  out << "h = " << format17(cfg.fem.h) << '\n';
  out << "dt = " << format17(cfg.fem.dt) << '\n';
  out << "steps = " << cfg.fem.steps << '\n';
  out << "snapshot_every = " << cfg.fem.snapshot_every << '\n';
  out << "sigma_a = " << format17(cfg.fem.sigma_a) << '\n';
  out << "initial = " << cfg.fem.initial << '\n';
  out << "\n[dists]\n";
  for (const auto& d : cfg.dists) out << "dist = " << dist_to_config(d) << '\n';
  out << "\n[seeds]\n";
  out << "list = ";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
    out << (i ? "," : "") << cfg.seeds[i];
  out << '\n';
  if (!cfg.m_list.empty() || !cfg.depth_list.empty()) {
    out << "\n[robustness]\n";
    out << "m_list = ";
    for (std::size_t i = 0; i < cfg.m_list.size(); ++i) out << (i ? "," : "") << cfg.m_list[i];
    out << '\n';
    out << "depth_list = ";
    for (std::size_t i = 0; i < cfg.depth_list.size(); ++i)
      out << (i ? "," : "") << cfg.depth_list[i];
    out << '\n';
  }
  return out.str();
}

}  // namespace ffdyn
