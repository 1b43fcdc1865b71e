#include "divstab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace divstab {

namespace {
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kW = 800, kH = 600, kMargin = 60;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}
}  // namespace

void write_svg_plot(std::ostream& out, const std::vector<SvgSeries>& series,
                    const std::string& x_label, const std::string& y_label) {
  if (series.empty()) throw std::invalid_argument("nothing to plot");
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmin > xmax) throw std::invalid_argument("nothing to plot");
  if (xmax - xmin < 1e-12) {
    xmin -= 1.0;
    xmax += 1.0;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  auto px = [&](double x) {
    return kMargin + (x - xmin) / (xmax - xmin) * (kW - 2 * kMargin);
  };
  auto py = [&](double y) {
    return kH - kMargin - (y - ymin) / (ymax - ymin) * (kH - 2 * kMargin);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << " " << kH
      << "\">\n";
  out << "<rect width=\"" << kW << "\" height=\"" << kH
      << "\" fill=\"white\"/>\n";
  // axes
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kH - kMargin << "\" x2=\""
      << kW - kMargin << "\" y2=\"" << kH - kMargin
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\""
      << kMargin << "\" y2=\"" << kH - kMargin << "\" stroke=\"black\"/>\n";
  // tick labels
  out << "<text x=\"" << kMargin << "\" y=\"" << kH - kMargin + 20
      << "\" font-size=\"12\">" << fmt(xmin) << "</text>\n";
  out << "<text x=\"" << kW - kMargin - 30 << "\" y=\"" << kH - kMargin + 20
      << "\" font-size=\"12\">" << fmt(xmax) << "</text>\n";
  out << "<text x=\"" << 8 << "\" y=\"" << kH - kMargin
      << "\" font-size=\"12\">" << fmt(ymin) << "</text>\n";
  out << "<text x=\"" << 8 << "\" y=\"" << kMargin + 12
      << "\" font-size=\"12\">" << fmt(ymax) << "</text>\n";
  // axis labels
  out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 15
      << "\" font-size=\"14\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  out << "<text x=\"15\" y=\"" << kH / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 "
         "15 "
      << kH / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    if (series[s].points.empty()) continue;
    out << "<polyline fill=\"none\" stroke=\"" << kPalette[s % 8]
        << "\" stroke-width=\"1\" points=\"";
    for (const auto& [x, y] : series[s].points) {
      out << fmt(px(x)) << "," << fmt(py(y)) << " ";
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

std::vector<SvgSeries> csv_to_series(const std::string& csv_text, int coord_i,
                                     int coord_j) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  // header: traj_id,t,x1,...,xn
  std::vector<std::string> cols;
  {
    std::stringstream hs(line);
    std::string tok;
    while (std::getline(hs, tok, ',')) cols.push_back(tok);
  }
  if (cols.size() < 3 || cols[0] != "traj_id" || cols[1] != "t") {
    throw std::invalid_argument("not a trajectory CSV");
  }
  int n = static_cast<int>(cols.size()) - 2;
  if (coord_i < 1 || coord_i > n || coord_j < 1 || coord_j > n) {
    throw std::invalid_argument("coordinate index out of range");
  }

  std::vector<SvgSeries> series;
  long last_id = -1;
  bool any = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string tok;
    std::vector<double> row;
    std::getline(ls, tok, ',');
    long id = std::stol(tok);
    while (std::getline(ls, tok, ',')) row.push_back(std::stod(tok));
    if (static_cast<int>(row.size()) != n + 1) {
      throw std::invalid_argument("bad CSV row");
    }
    if (id != last_id) {
      series.emplace_back();
      last_id = id;
    }
    series.back().points.emplace_back(row[coord_i], row[coord_j]);
    any = true;
  }
  if (!any) throw std::invalid_argument("CSV has no data rows");
  return series;
}

}  // namespace divstab
