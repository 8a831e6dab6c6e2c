#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "ffdyn/compare.hpp"
#include "ffdyn/dft.hpp"
#include "ffdyn/kappa.hpp"

namespace ffdyn {

/// 17-significant-digit formatting used by every artifact file; the same
/// doubles always render to the same bytes.
std::string format17(double v);

// KappaProfile: columns (xi, kappa, r2, valid).
void write_kappa_csv(const std::filesystem::path& path, const KappaProfile& profile);
KappaProfile read_kappa_csv(const std::filesystem::path& path);

// SpectralTrace, long format: columns (time, xi, re, im, abs).
void write_trace_csv(const std::filesystem::path& path, const SpectralTrace& trace);
SpectralTrace read_trace_csv(const std::filesystem::path& path);

// ComparisonReport: header key/value rows then per-snapshot distances.
void write_comparison_csv(const std::filesystem::path& path, const ComparisonReport& report);

/// FNV-1a (64-bit) over the file bytes; manifest checksum.
std::uint64_t fnv1a_file(const std::filesystem::path& path);
std::string to_hex(std::uint64_t v);

}  // namespace ffdyn
