#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ffdyn {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_y = false;
  int width = 640;
  int height = 420;
};

/// Self-contained SVG line chart; byte-identical for identical inputs.
std::string render_chart(const PlotSpec& spec, const std::vector<PlotSeries>& series);

/// Writes render_chart output. Throws if no series has a drawable point.
void write_chart(const std::filesystem::path& path, const PlotSpec& spec,
                 const std::vector<PlotSeries>& series);

/// Grid of charts in one SVG document, `cols` panels per row.
std::string render_panel_grid(const std::string& title,
                              const std::vector<PlotSpec>& specs,
                              const std::vector<std::vector<PlotSeries>>& series,
                              int cols);

void write_panel_grid(const std::filesystem::path& path, const std::string& title,
                      const std::vector<PlotSpec>& specs,
                      const std::vector<std::vector<PlotSeries>>& series, int cols);

}  // namespace ffdyn
