#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace divstab {

struct SvgSeries {
  std::vector<std::pair<double, double>> points;
};

// Minimal static plot: axes, min/max tick labels, one polyline per series.
void write_svg_plot(std::ostream& out, const std::vector<SvgSeries>& series,
                    const std::string& x_label, const std::string& y_label);

// Loads a trajectory CSV (header traj_id,t,x1..xn) and projects the state
// columns (1-based) xi vs xj into per-trajectory series.
std::vector<SvgSeries> csv_to_series(const std::string& csv_text, int coord_i,
                                     int coord_j);

}  // namespace divstab
