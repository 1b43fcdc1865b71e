#include "divstab/systemfile.hpp"

#include <fstream>
#include <sstream>

#include "divstab/parser.hpp"

namespace divstab {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_number(const std::string& tok, int line) {
  try {
    if (tok.find_first_of(".eE") == std::string::npos ||
        tok.find('/') != std::string::npos) {
      return rational_parse(tok).get_d();
    }
  } catch (const std::exception&) {
    // fall through to float parsing
  }
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw SystemFileError(line, "bad numeric value '" + tok + "'");
  }
}

struct RawEntry {
  int line;
  std::string key;
  std::string value;
};

DensitySpec parse_rho(const std::string& value, int line,
                      const std::vector<std::string>& vars, bool rho_pd) {
  int n = static_cast<int>(vars.size());
  if (value.rfind("norm^", 0) == 0) {
    int p;
    try {
      p = std::stoi(value.substr(5));
    } catch (const std::exception&) {
      throw SystemFileError(line, "bad norm power in '" + value + "'");
    }
    if (p < 2 || p % 2 != 0) {
      throw SystemFileError(line, "norm power must be an even integer >= 2");
    }
    return DensitySpec::norm_power(n, p / 2);
  }
  if (value.rfind("quadform ", 0) == 0) {
    std::string body = value.substr(9);
    std::size_t caret = body.rfind('^');
    if (caret == std::string::npos) {
      throw SystemFileError(line, "quadform density needs a trailing ^alpha");
    }
    int alpha;
    try {
      alpha = std::stoi(trim(body.substr(caret + 1)));
    } catch (const std::exception&) {
      throw SystemFileError(line, "bad quadform power");
    }
    std::string rows_text = body.substr(0, caret);
    std::vector<std::vector<Rational>> rows;
    std::stringstream rs(rows_text);
    std::string row;
    while (std::getline(rs, row, ';')) {
      row = trim(row);
      if (row.empty()) continue;
      std::vector<Rational> r;
      for (const auto& tok : split_ws(row)) {
        try {
          r.push_back(rational_parse(tok));
        } catch (const std::exception&) {
          throw SystemFileError(line, "bad matrix entry '" + tok + "'");
        }
      }
      rows.push_back(std::move(r));
    }
    if (static_cast<int>(rows.size()) != n) {
      throw SystemFileError(line, "quadform matrix dimension mismatch");
    }
    try {
      return DensitySpec::quad_form_power(SymMatrixQ::from_rows(rows), alpha);
    } catch (const std::exception& e) {
      throw SystemFileError(line, e.what());
    }
  }
  if (value.rfind("expr ", 0) == 0) {
    try {
      Polynomial p = parse_polynomial(value.substr(5), vars);
      return DensitySpec::explicit_density(std::move(p), rho_pd);
    } catch (const ParseError& e) {
      throw SystemFileError(line, std::string("bad density polynomial: ") +
                                      e.what());
    }
  }
  throw SystemFileError(line, "density must be norm^<2a>, quadform .. ^a, or "
                              "expr <polynomial>");
}

// "c1*x2 + c2*x2^3 ; grid: -2..2"
SynthesisTemplate parse_template(const std::string& value, int line,
                                 const std::vector<std::string>& vars) {
  std::size_t semi = value.find(';');
  if (semi == std::string::npos) {
    throw SystemFileError(line, "template needs '; grid: lo..hi'");
  }
  std::string terms_text = trim(value.substr(0, semi));
  std::string grid_text = trim(value.substr(semi + 1));
  if (grid_text.rfind("grid:", 0) != 0) {
    throw SystemFileError(line, "template needs 'grid: lo..hi' after ';'");
  }
  grid_text = trim(grid_text.substr(5));
  std::size_t dots = grid_text.find("..");
  if (dots == std::string::npos) {
    throw SystemFileError(line, "grid must be of the form lo..hi");
  }
  long lo, hi;
  try {
    lo = std::stol(trim(grid_text.substr(0, dots)));
    hi = std::stol(trim(grid_text.substr(dots + 2)));
  } catch (const std::exception&) {
    throw SystemFileError(line, "bad grid bounds");
  }
  if (lo > hi) throw SystemFileError(line, "grid lower bound exceeds upper");

  SynthesisTemplate tmpl;
  for (long v = lo; v <= hi; ++v) tmpl.grid.push_back(Rational(v));

  std::vector<Polynomial> basis;
  std::stringstream ts(terms_text);
  std::string term;
  while (std::getline(ts, term, '+')) {
    term = trim(term);
    if (term.empty()) continue;
    std::size_t star = term.find('*');
    if (star == std::string::npos || term[0] != 'c') {
      throw SystemFileError(line,
                            "template terms must look like cK*<polynomial>");
    }
    std::string poly_text = term.substr(star + 1);
    try {
      basis.push_back(parse_polynomial(poly_text, vars));
    } catch (const ParseError& e) {
      throw SystemFileError(line, std::string("bad template monomial: ") +
                                      e.what());
    }
  }
  if (basis.empty()) throw SystemFileError(line, "empty template");
  tmpl.basis.push_back(std::move(basis));
  return tmpl;
}

}  // namespace

VectorField SystemFile::field() const {
  if (control_mode) return control_system().closed_loop();
  return VectorField(vars, f);
}

ControlSystem SystemFile::control_system() const {
  if (!control_mode) {
    throw std::logic_error("plain system has no control structure");
  }
  return ControlSystem(vars, xi, g, u);
}

SystemFile parse_system_file(const std::string& text) {
  SystemFile sf;
  sf.raw = text;

  std::vector<RawEntry> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t colon = line.find(':');
    if (colon == std::string::npos) {
      throw SystemFileError(lineno, "expected 'key: value'");
    }
    entries.push_back(RawEntry{lineno, trim(line.substr(0, colon)),
                               trim(line.substr(colon + 1))});
  }

  for (const auto& e : entries) {
    if (e.key == "vars") {
      sf.vars = split_ws(e.value);
      if (sf.vars.empty()) throw SystemFileError(e.line, "empty vars list");
    }
  }
  if (sf.vars.empty()) throw SystemFileError(1, "missing vars line");
  const int n = static_cast<int>(sf.vars.size());

  auto parse_poly = [&](const std::string& src, int line) {
    try {
      return parse_polynomial(src, sf.vars);
    } catch (const ParseError& e) {
      throw SystemFileError(line, e.what());
    }
  };

  std::map<int, Polynomial> f_map, xi_map, u_map;
  std::map<std::pair<int, int>, Polynomial> g_map;
  bool rho_pd = false;
  std::optional<RawEntry> rho_entry;

  for (const auto& e : entries) {
    if (e.key == "vars") continue;
    if (e.key.size() >= 2 && e.key[0] == 'f' &&
        std::isdigit(static_cast<unsigned char>(e.key[1]))) {
      f_map.emplace(std::stoi(e.key.substr(1)), parse_poly(e.value, e.line));
    } else if (e.key.size() >= 3 && e.key.rfind("xi", 0) == 0 &&
               std::isdigit(static_cast<unsigned char>(e.key[2]))) {
      xi_map.emplace(std::stoi(e.key.substr(2)), parse_poly(e.value, e.line));
    } else if (e.key.size() >= 3 && e.key[0] == 'g' &&
               std::isdigit(static_cast<unsigned char>(e.key[1]))) {
      int i = e.key[1] - '0';
      int j = std::stoi(e.key.substr(2));
      g_map.emplace(std::make_pair(i, j), parse_poly(e.value, e.line));
    } else if (e.key == "u_template") {
      sf.u_template = parse_template(e.value, e.line, sf.vars);
    } else if (e.key.size() >= 2 && e.key[0] == 'u' &&
               std::isdigit(static_cast<unsigned char>(e.key[1]))) {
      u_map.emplace(std::stoi(e.key.substr(1)), parse_poly(e.value, e.line));
    } else if (e.key == "rho") {
      rho_entry = e;
    } else if (e.key == "rho_pd") {
      rho_pd = (e.value == "true" || e.value == "1");
    } else if (e.key == "region") {
      sf.region_radius = parse_number(e.value, e.line);
    } else if (e.key == "r") {
      sf.instability_r = parse_number(e.value, e.line);
    } else if (e.key == "levels") {
      std::stringstream ls(e.value);
      std::string tok;
      while (std::getline(ls, tok, ',')) {
        sf.levels.push_back(parse_number(trim(tok), e.line));
      }
    } else if (e.key == "beta") {
      try {
        sf.beta = rational_parse(e.value);
      } catch (const std::exception&) {
        throw SystemFileError(e.line, "bad beta");
      }
    } else if (e.key == "alpha") {
      std::size_t dots = e.value.find("..");
      try {
        if (dots == std::string::npos) {
          sf.alpha_lo = sf.alpha_hi = std::stoi(e.value);
        } else {
          sf.alpha_lo = std::stoi(e.value.substr(0, dots));
          sf.alpha_hi = std::stoi(e.value.substr(dots + 2));
        }
      } catch (const std::exception&) {
        throw SystemFileError(e.line, "bad alpha");
      }
      sf.alpha_set = true;
    } else if (e.key == "seed") {
      sf.seed = std::stoull(e.value);
    } else if (e.key == "samples") {
      sf.samples = std::stoull(e.value);
    } else if (e.key == "x0") {
      std::vector<double> pt;
      std::stringstream xs(e.value);
      std::string tok;
      while (std::getline(xs, tok, ',')) {
        pt.push_back(parse_number(trim(tok), e.line));
      }
      if (static_cast<int>(pt.size()) != n) {
        throw SystemFileError(e.line, "x0 arity mismatch");
      }
      sf.x0s.push_back(std::move(pt));
    } else if (e.key == "T") {
      sf.T = parse_number(e.value, e.line);
    } else if (e.key == "tol") {
      sf.tol = parse_number(e.value, e.line);
    } else {
      throw SystemFileError(e.line, "unknown key '" + e.key + "'");
    }
  }

  sf.rho_pd = rho_pd;
  if (rho_entry) {
    sf.rho = parse_rho(rho_entry->value, rho_entry->line, sf.vars, rho_pd);
  }

  sf.control_mode = !xi_map.empty();
  if (sf.control_mode) {
    if (!f_map.empty()) {
      throw SystemFileError(entries.front().line,
                            "mix of f and xi lines; use one mode");
    }
    for (int i = 1; i <= n; ++i) {
      auto it = xi_map.find(i);
      if (it == xi_map.end()) {
        throw SystemFileError(1, "missing xi" + std::to_string(i));
      }
      sf.xi.push_back(it->second);
    }
    int m = 0;
    for (const auto& [ij, p] : g_map) m = std::max(m, ij.second);
    if (m == 0) throw SystemFileError(1, "control mode needs g entries");
    sf.g.assign(n, std::vector<Polynomial>(m, Polynomial::zero(n)));
    for (const auto& [ij, p] : g_map) {
      if (ij.first < 1 || ij.first > n || ij.second < 1) {
        throw SystemFileError(1, "bad g index");
      }
      sf.g[ij.first - 1][ij.second - 1] = p;
    }
    for (int j = 1; j <= m; ++j) {
      auto it = u_map.find(j);
      if (it != u_map.end()) sf.u.push_back(it->second);
    }
    if (!sf.u.empty() && static_cast<int>(sf.u.size()) != m) {
      throw SystemFileError(1, "incomplete control law");
    }
  } else {
    for (int i = 1; i <= n; ++i) {
      auto it = f_map.find(i);
      if (it == f_map.end()) {
        throw SystemFileError(1, "missing f" + std::to_string(i));
      }
      sf.f.push_back(it->second);
    }
  }
  return sf;
}

SystemFile load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system_file(buf.str());
}

Eigen::MatrixXd parse_matrix_file(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& tok : split_ws(line)) {
      row.push_back(parse_number(tok, lineno));
    }
    if (!rows.empty() && row.size() != rows[0].size()) {
      throw SystemFileError(lineno, "ragged matrix");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw SystemFileError(1, "empty matrix file");
  Eigen::MatrixXd M(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) M(i, j) = rows[i][j];
  }
  return M;
}

Eigen::MatrixXd load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix_file(buf.str());
}

}  // namespace divstab
