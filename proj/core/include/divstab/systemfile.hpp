#pragma once

#include <Eigen/Dense>

#include <optional>

#include "divstab/control.hpp"
#include "divstab/density.hpp"
#include "divstab/vectorfield.hpp"

namespace divstab {

class SystemFileError : public std::runtime_error {
 public:
  SystemFileError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line(line) {}
  int line;
};

// Parsed analysis input. Plain mode carries f1..fn; control mode carries
// xi / g / u (or a synthesis template). Keys may appear in any order;
// comments start with '#'.
struct SystemFile {
  std::vector<std::string> vars;
  bool control_mode = false;

  std::vector<Polynomial> f;
  std::vector<Polynomial> xi;
  std::vector<std::vector<Polynomial>> g;
  std::vector<Polynomial> u;
  std::optional<SynthesisTemplate> u_template;

  std::optional<DensitySpec> rho;
  bool rho_pd = false;

  double region_radius = 1.0;
  double instability_r = 1.0;
  std::vector<double> levels;
  Rational beta = 1;
  int alpha_lo = 1, alpha_hi = 8;
  bool alpha_set = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::vector<std::vector<double>> x0s;
  std::optional<double> T;
  std::optional<double> tol;

  std::string raw;  // original text, for the input digest

  VectorField field() const;
  ControlSystem control_system() const;
};

SystemFile parse_system_file(const std::string& text);
SystemFile load_system_file(const std::string& path);

// Matrix files: one row per line, whitespace-separated rationals or floats.
Eigen::MatrixXd parse_matrix_file(const std::string& text);
Eigen::MatrixXd load_matrix_file(const std::string& path);

}  // namespace divstab
