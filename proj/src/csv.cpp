#include "ffdyn/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ffdyn {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(path.string() + ": bad numeric field '" + s + "'");
  }
}

}  // namespace

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_kappa_csv(const std::filesystem::path& path, const KappaProfile& profile) {
  auto out = open_out(path);
  out << "xi,kappa,r2,valid\n";
  for (std::size_t j = 0; j < profile.grid.size(); ++j)
    out << format17(profile.grid.freqs[j]) << ',' << format17(profile.kappa[j]) << ','
        << format17(profile.fit_r2[j]) << ',' << int(profile.valid[j]) << '\n';
}

KappaProfile read_kappa_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line).size() != 4)
    throw std::runtime_error(path.string() + ": not a kappa csv");
  KappaProfile p;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 4) throw std::runtime_error(path.string() + ": malformed row");
    p.grid.freqs.push_back(parse_double(f[0], path));
    p.kappa.push_back(parse_double(f[1], path));
    p.fit_r2.push_back(parse_double(f[2], path));
    p.valid.push_back(f[3] == "1" ? 1 : 0);
  }
  if (p.grid.freqs.size() >= 2)
    p.grid.resolution = p.grid.freqs[1] - p.grid.freqs[0];
  return p;
}

void write_trace_csv(const std::filesystem::path& path, const SpectralTrace& trace) {
  auto out = open_out(path);
  out << "time,xi,re,im,abs\n";
  for (const auto& snap : trace.snapshots)
    for (std::size_t j = 0; j < snap.values.size(); ++j)
      out << format17(snap.time) << ',' << format17(snap.grid.freqs[j]) << ','
          << format17(snap.values[j].real()) << ',' << format17(snap.values[j].imag())
          << ',' << format17(std::abs(snap.values[j])) << '\n';
}

SpectralTrace read_trace_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line).size() != 5)
    throw std::runtime_error(path.string() + ": not a trace csv");
  SpectralTrace trace;
  SpectralSnapshot* cur = nullptr;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5) throw std::runtime_error(path.string() + ": malformed row");
    const double t = parse_double(f[0], path);
    if (!cur || cur->time != t) {
      trace.snapshots.emplace_back();
      cur = &trace.snapshots.back();
      cur->time = t;
    }
    cur->grid.freqs.push_back(parse_double(f[1], path));
    cur->values.emplace_back(parse_double(f[2], path), parse_double(f[3], path));
  }
  if (trace.snapshots.empty()) throw std::runtime_error(path.string() + ": empty trace");
  for (auto& snap : trace.snapshots)
    if (snap.grid.freqs.size() >= 2)
      snap.grid.resolution = snap.grid.freqs[1] - snap.grid.freqs[0];
  return trace;
}

void write_comparison_csv(const std::filesystem::path& path, const ComparisonReport& report) {
  auto out = open_out(path);
  out << "key,value\n";
  out << "time_scale," << format17(report.time_scale) << '\n';
  out << "spearman_kappa_rho," << format17(report.spearman_kappa_rho) << '\n';
  out << "band_lo," << format17(report.band_lo) << '\n';
  out << "band_hi," << format17(report.band_hi) << '\n';
  out << "band_bins," << report.band_bins << '\n';
  out << "snapshot,nn_time,rel_l2\n";
  for (std::size_t k = 0; k < report.rel_l2.size(); ++k)
    out << k << ',' << format17(report.nn_times[k]) << ',' << format17(report.rel_l2[k])
        << '\n';
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const auto got = static_cast<std::size_t>(in.gcount());
    for (std::size_t i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  return h;
}

std::string to_hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace ffdyn
