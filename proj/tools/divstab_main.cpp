// divstab: certify stability/instability of polynomial dynamical systems
// from divergence-based conditions, cross-checked by Monte-Carlo flux
// estimation and numerical simulation.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <divstab/control.hpp>
#include <divstab/flux.hpp>
#include <divstab/invariantset.hpp>
#include <divstab/linstab.hpp>
#include <divstab/parser.hpp>
#include <divstab/report.hpp>
#include <divstab/svg.hpp>
#include <divstab/systemfile.hpp>

using namespace divstab;

namespace {

struct CommonFlags {
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::uint64_t samples = 10000;
  bool samples_set = false;
  int workers = 0;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonFlags* cf) {
  auto* s = cmd->add_option("--seed", cf->seed, "RNG seed (default 0)");
  s->each([cf](const std::string&) { cf->seed_set = true; });
  auto* n = cmd->add_option("--samples", cf->samples,
                            "sample budget per sign check (default 10000)");
  n->each([cf](const std::string&) { cf->samples_set = true; });
  cmd->add_option("--workers", cf->workers,
                  "worker threads (0 = hardware, result-identical)");
  cmd->add_option("--out", cf->out_path, "write the report to this file");
}

void apply_env_seed(CommonFlags* cf) {
  if (cf->seed_set) return;
  if (const char* env = std::getenv("SEED")) {
    cf->seed = std::strtoull(env, nullptr, 10);
    cf->seed_set = true;
  }
}

void emit(const CommonFlags& cf, const std::string& text) {
  if (cf.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cf.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + cf.out_path + "'");
  out << text;
}

std::vector<int> parse_cases(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    int c = std::stoi(tok);
    if (c < 1 || c > 4) throw std::invalid_argument("cases must be in 1..4");
    out.push_back(c);
  }
  if (out.empty()) throw std::invalid_argument("empty case list");
  return out;
}

void parse_alpha_range(const std::string& s, int* lo, int* hi) {
  std::size_t dots = s.find("..");
  if (dots == std::string::npos) {
    *lo = *hi = std::stoi(s);
  } else {
    *lo = std::stoi(s.substr(0, dots));
    *hi = std::stoi(s.substr(dots + 2));
  }
  if (*lo < 1 || *hi < *lo) throw std::invalid_argument("bad alpha range");
}

void write_system_section(ReportWriter& w, const SystemFile& sf) {
  w.section("system");
  std::string vars;
  for (std::size_t i = 0; i < sf.vars.size(); ++i) {
    if (i) vars += " ";
    vars += sf.vars[i];
  }
  w.kv("vars", vars);
  if (sf.control_mode) {
    for (std::size_t i = 0; i < sf.xi.size(); ++i) {
      w.kv("xi" + std::to_string(i + 1), sf.xi[i].to_string(sf.vars));
    }
    for (std::size_t i = 0; i < sf.u.size(); ++i) {
      w.kv("u" + std::to_string(i + 1), sf.u[i].to_string(sf.vars));
    }
  } else {
    for (std::size_t i = 0; i < sf.f.size(); ++i) {
      w.kv("f" + std::to_string(i + 1), sf.f[i].to_string(sf.vars));
    }
  }
  if (sf.rho) w.kv("rho", sf.rho->describe(sf.vars));
}

int rollup_exit(const std::vector<ConditionReport>& reports) {
  bool any_holds = false, all_fail = true;
  for (const auto& r : reports) {
    if (r.overall == Overall::Holds) any_holds = true;
    if (r.overall != Overall::Fails) all_fail = false;
  }
  if (any_holds) return 0;
  if (all_fail) return 1;
  return 2;
}

// Per-case alpha sweep summary: which alphas hold, which fail.
void write_sweep_summary(ReportWriter& w,
                         const std::map<int, std::vector<ConditionReport>>& by_case) {
  w.section("summary");
  for (const auto& [case_id, reps] : by_case) {
    std::string holds, fails, undet;
    for (const auto& r : reps) {
      std::string a = std::to_string(r.alpha);
      switch (r.overall) {
        case Overall::Holds: holds += holds.empty() ? a : "," + a; break;
        case Overall::Fails: fails += fails.empty() ? a : "," + a; break;
        case Overall::Undetermined: undet += undet.empty() ? a : "," + a; break;
      }
    }
    std::string key = case_id == 0 ? "rantzer" : "case" + std::to_string(case_id);
    w.kv(key + ".holds_for_alpha", holds.empty() ? "none" : holds);
    if (!fails.empty()) w.kv(key + ".fails_for_alpha", fails);
    if (!undet.empty()) w.kv(key + ".undetermined_for_alpha", undet);
  }
}

int cmd_analyze(const std::string& path, const std::string& cases_str,
                const std::string& alpha_str, const std::string& beta_str,
                double radius, bool instability, double r_ball, bool empirical,
                CommonFlags cf) {
  apply_env_seed(&cf);
  SystemFile sf = load_system_file(path);
  if (!sf.rho) throw std::runtime_error("analysis needs a rho line");
  VectorField f = sf.field();

  AnalysisOptions opts;
  opts.check.seed = cf.seed_set ? cf.seed : sf.seed.value_or(0);
  opts.check.samples = cf.samples_set ? cf.samples : sf.samples.value_or(10000);
  opts.check.workers = cf.workers;
  opts.region_radius = radius > 0 ? radius : sf.region_radius;
  opts.empirical = empirical;

  std::vector<int> cases = parse_cases(cases_str);
  int alo = sf.alpha_lo, ahi = sf.alpha_hi;
  if (!alpha_str.empty()) parse_alpha_range(alpha_str, &alo, &ahi);
  Rational beta = beta_str.empty() ? sf.beta : rational_parse(beta_str);

  bool sweep = sf.rho->kind() != DensitySpec::Kind::Explicit;
  std::vector<int> alphas;
  if (sweep) {
    for (int a = alo; a <= ahi; ++a) alphas.push_back(a);
  } else {
    alphas.push_back(0);
  }

  ReportWriter w;
  write_header(w, instability ? "analyze --instability" : "analyze", sf.raw);
  w.kv("seed", opts.check.seed);
  w.kv("samples", opts.check.samples);
  write_system_section(w, sf);

  std::map<int, std::vector<ConditionReport>> by_case;
  std::vector<ConditionReport> all;

  for (int a : alphas) {
    DensitySpec rho = sweep ? sf.rho->with_alpha(a) : *sf.rho;
    if (!instability) {
      ConditionReport rz = rantzer_baseline(f, rho, opts);
      write_condition_report(w, rz, sf.vars);
      by_case[0].push_back(rz);
    }
    for (int c : cases) {
      ConditionSpec spec;
      spec.case_id = c;
      spec.beta = beta;
      ConditionReport rep;
      if (instability) {
        InstabilityRegion region;
        region.r = r_ball > 0 ? r_ball : sf.instability_r;
        region.rho = rho;
        spec.theorem = ConditionSpec::Theorem::Instability;
        rep = evaluate_instability(f, region, spec, opts);
      } else {
        rep = evaluate_stability(f, rho, spec, opts);
      }
      write_condition_report(w, rep, sf.vars);
      by_case[c].push_back(rep);
      all.push_back(rep);
    }
  }
  write_sweep_summary(w, by_case);
  int code = rollup_exit(all);
  w.kv("exit_code", code);
  emit(cf, w.str());
  return code;
}

int cmd_flux(const std::string& path, const std::string& levels_str,
             std::uint64_t n, int alpha_flag, double rout_factor,
             CommonFlags cf) {
  apply_env_seed(&cf);
  SystemFile sf = load_system_file(path);
  if (!sf.rho) throw std::runtime_error("flux needs a rho line");
  VectorField f = sf.field();

  std::vector<double> levels = sf.levels;
  if (!levels_str.empty()) {
    levels.clear();
    std::stringstream ls(levels_str);
    std::string tok;
    while (std::getline(ls, tok, ',')) levels.push_back(std::stod(tok));
  }
  if (levels.empty()) levels = {0.25, 1.0, 4.0};

  DensitySpec rho = *sf.rho;
  if (alpha_flag > 0 && rho.kind() != DensitySpec::Kind::Explicit) {
    rho = rho.with_alpha(alpha_flag);
  }

  FluxOptions fo;
  fo.n = n;
  fo.seed = cf.seed_set ? cf.seed : sf.seed.value_or(0);
  fo.workers = cf.workers;

  ReportWriter w;
  write_header(w, "flux", sf.raw);
  w.kv("seed", fo.seed);
  w.kv("n", fo.n);
  write_system_section(w, sf);

  NormExpr drf = div_rho_f(f, rho, false);
  bool have_inverse = rho.kind() != DensitySpec::Kind::Explicit;

  for (double C : levels) {
    w.section("level C=" + format_double(C));
    RegionSpec region = RegionSpec::norm_sq(C);
    IntegralEstimate vol = volume_integral(drf, region, fo);
    write_estimate(w, "volume_div_rho_f", vol);
    IntegralEstimate surf = surface_flux(f, rho, region, fo);
    write_estimate(w, "surface_flux_rho_f", surf);
    double gap = std::abs(vol.mean - surf.mean);
    double band = 3.0 * std::sqrt(vol.std_error * vol.std_error +
                                  surf.std_error * surf.std_error);
    w.kv("divergence_theorem.gap", gap);
    w.kv("divergence_theorem.band_3se", band);
    w.kv("divergence_theorem.consistent", gap <= band ? "true" : "false");
    if (have_inverse) {
      NormExpr dri = div_rho_f(f, rho, true);
      IntegralEstimate shell = shell_integral(dri, region, rout_factor, fo);
      write_estimate(w, "shell_div_rho_inv_f", shell);
    }
  }
  emit(cf, w.str());
  return 0;
}

int cmd_linear(const std::string& path, double alpha, const std::string& beta,
               const std::string& p_path, const std::string& which,
               CommonFlags cf) {
  apply_env_seed(&cf);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  Eigen::MatrixXd A = parse_matrix_file(buf.str());

  std::optional<Eigen::MatrixXd> P;
  if (!p_path.empty()) P = load_matrix_file(p_path);

  double beta_v = beta.empty() ? 1.0 : rational_parse(beta).get_d();

  ReportWriter w;
  write_header(w, "linear", buf.str());
  w.kv("alpha", alpha);
  w.kv("beta", beta_v);

  std::vector<LinearVerdict> verdicts;
  if (which == "1" || which == "both") {
    w.section("case 1");
    LinearVerdict v = check_case1(A, alpha, beta_v, P);
    write_linear_verdict(w, v);
    verdicts.push_back(v);
  }
  if (which == "2" || which == "both") {
    w.section("case 2");
    LinearVerdict v = check_case2(A, alpha, P);
    write_linear_verdict(w, v);
    verdicts.push_back(v);
  }
  bool any = false;
  for (const auto& v : verdicts) any |= v.holds();
  w.section("summary");
  w.kv("any_holds", any ? "true" : "false");
  emit(cf, w.str());
  return any ? 0 : 2;
}

int cmd_bendixson(const std::string& path, double radius, CommonFlags cf) {
  apply_env_seed(&cf);
  SystemFile sf = load_system_file(path);
  VectorField f = sf.field();
  CheckOptions opts;
  opts.seed = cf.seed_set ? cf.seed : sf.seed.value_or(0);
  opts.samples = cf.samples_set ? cf.samples : sf.samples.value_or(10000);
  opts.workers = cf.workers;
  double r = radius > 0 ? radius : sf.region_radius;

  ReportWriter w;
  write_header(w, "bendixson", sf.raw);
  write_system_section(w, sf);
  w.section("divergence test");
  write_exclusion(w, bendixson_check(f, r, opts), sf.vars);
  if (sf.rho) {
    w.section("weighted divergence test");
    write_exclusion(w, dulac_check(f, *sf.rho, r, opts), sf.vars);
  }
  emit(cf, w.str());
  return 0;
}

int cmd_control(const std::string& path, const std::string& mode,
                const std::string& alpha_str, const std::string& beta_str,
                int case_id, CommonFlags cf) {
  apply_env_seed(&cf);
  SystemFile sf = load_system_file(path);
  if (!sf.control_mode) throw std::runtime_error("file is not in control mode");
  if (!sf.rho) throw std::runtime_error("control analysis needs a rho line");

  AnalysisOptions opts;
  opts.check.seed = cf.seed_set ? cf.seed : sf.seed.value_or(0);
  opts.check.samples = cf.samples_set ? cf.samples : sf.samples.value_or(10000);
  opts.check.workers = cf.workers;
  opts.region_radius = sf.region_radius;

  int alo = sf.alpha_lo, ahi = sf.alpha_hi;
  if (!alpha_str.empty()) parse_alpha_range(alpha_str, &alo, &ahi);
  Rational beta = beta_str.empty() ? sf.beta : rational_parse(beta_str);

  ConditionSpec spec;
  spec.theorem = ConditionSpec::Theorem::Control;
  spec.case_id = case_id;
  spec.beta = beta;

  bool sweep = sf.rho->kind() != DensitySpec::Kind::Explicit;

  ReportWriter w;
  write_header(w, "control " + mode, sf.raw);
  write_system_section(w, sf);

  if (mode == "verify") {
    ControlSystem sys = sf.control_system();
    if (sys.u.empty()) throw std::runtime_error("verify needs u lines");
    std::map<int, std::vector<ConditionReport>> by_case;
    std::vector<ConditionReport> all;
    for (int a = alo; a <= (sweep ? ahi : alo); ++a) {
      DensitySpec rho = sweep ? sf.rho->with_alpha(a) : *sf.rho;
      ConditionReport rep = verify_control(sys, rho, spec, opts);
      write_condition_report(w, rep, sf.vars);
      by_case[case_id].push_back(rep);
      all.push_back(rep);
    }
    write_sweep_summary(w, by_case);
    int code = rollup_exit(all);
    w.kv("exit_code", code);
    emit(cf, w.str());
    return code;
  }
  if (mode == "synth") {
    if (!sf.u_template) throw std::runtime_error("synth needs a u_template");
    ControlSystem sys(sf.vars, sf.xi, sf.g, {});
    DensitySpec rho = sweep ? sf.rho->with_alpha(alo) : *sf.rho;
    SynthesisResult res = synthesize(sys, *sf.u_template, rho, spec, opts);
    w.section("synthesis");
    w.kv("candidates", res.candidates_tried);
    if (res.found) {
      w.kv("found", "true");
      for (std::size_t j = 0; j < res.u.size(); ++j) {
        w.kv("u" + std::to_string(j + 1), res.u[j].to_string(sf.vars));
      }
      w.kv("enumeration_index", res.enumeration_index);
      write_condition_report(w, res.report, sf.vars);
      emit(cf, w.str());
      return 0;
    }
    w.kv("found", "false");
    emit(cf, w.str());
    return 1;
  }
  throw std::runtime_error("control mode must be verify or synth");
}

int cmd_simulate(const std::string& path, std::vector<std::string> x0_flags,
                 double T_flag, double tol_flag, const std::string& csv_path,
                 CommonFlags cf) {
  apply_env_seed(&cf);
  SystemFile sf = load_system_file(path);
  VectorField f = sf.field();

  std::vector<std::vector<double>> starts = sf.x0s;
  if (!x0_flags.empty()) {
    starts.clear();
    for (const auto& s : x0_flags) {
      std::vector<double> pt;
      std::stringstream ss(s);
      std::string tok;
      while (std::getline(ss, tok, ',')) pt.push_back(std::stod(tok));
      if (static_cast<int>(pt.size()) != f.dim()) {
        throw std::runtime_error("--x0 arity mismatch");
      }
      starts.push_back(std::move(pt));
    }
  }
  if (starts.empty()) throw std::runtime_error("no initial conditions given");

  SimSettings settings;
  settings.T = T_flag > 0 ? T_flag : sf.T.value_or(100.0);
  settings.tol = tol_flag > 0 ? tol_flag : sf.tol.value_or(1e-9);

  std::vector<TrajectoryRecord> records = portrait(f, starts, settings);

  ReportWriter w;
  write_header(w, "simulate", sf.raw);
  write_system_section(w, sf);
  w.kv("T", settings.T);
  w.kv("tol", settings.tol);
  for (std::size_t i = 0; i < records.size(); ++i) {
    w.section("trajectory " + std::to_string(i));
    write_classification(w, records[i]);
  }
  emit(cf, w.str());

  if (!csv_path.empty()) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + csv_path + "'");
    write_portrait_csv(out, records);
  }
  return 0;
}

int cmd_plot(const std::string& csv_path, const std::string& out_path,
             const std::string& coords) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open '" + csv_path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();

  int ci = 1, cj = 2;
  if (!coords.empty()) {
    std::size_t comma = coords.find(',');
    if (comma == std::string::npos) throw std::runtime_error("bad --coords");
    ci = std::stoi(coords.substr(0, comma));
    cj = std::stoi(coords.substr(comma + 1));
  }
  std::vector<SvgSeries> series = csv_to_series(buf.str(), ci, cj);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  write_svg_plot(out, series, "x" + std::to_string(ci),
                 "x" + std::to_string(cj));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"divergence-based stability analysis for polynomial systems"};
  app.require_subcommand(1);

  // analyze
  std::string an_file, an_cases = "1,2,3,4", an_alpha, an_beta;
  double an_radius = 0.0, an_r = 0.0;
  bool an_instab = false, an_empirical = false;
  CommonFlags an_cf;
  auto* an = app.add_subcommand("analyze", "evaluate the divergence conditions");
  an->add_option("file", an_file, "system file")->required();
  an->add_option("--cases", an_cases, "comma list of cases (default 1,2,3,4)");
  an->add_option("--alpha", an_alpha, "density power or range lo..hi");
  an->add_option("--beta", an_beta, "constant beta >= 1 (case 3)");
  an->add_option("--radius", an_radius, "sampling ball radius (default 1)");
  an->add_flag("--instability", an_instab, "evaluate the instability conditions");
  an->add_option("--r", an_r, "instability ball radius");
  an->add_flag("--empirical", an_empirical,
               "grant Holds on unrefuted samples (flagged in the report)");
  add_common(an, &an_cf);

  // flux
  std::string fx_file, fx_levels;
  std::uint64_t fx_n = 100000;
  int fx_alpha = 0;
  double fx_rout = 10.0;
  CommonFlags fx_cf;
  auto* fx = app.add_subcommand("flux", "Monte-Carlo integral conditions");
  fx->add_option("file", fx_file, "system file")->required();
  fx->add_option("--levels", fx_levels, "comma list of levels C");
  fx->add_option("--n", fx_n, "samples per integral (default 100000)");
  fx->add_option("--alpha", fx_alpha, "density power override");
  fx->add_option("--rout", fx_rout, "exterior truncation factor (default 10)");
  add_common(fx, &fx_cf);

  // linear
  std::string ln_file, ln_beta, ln_p, ln_case = "both";
  double ln_alpha = 1.0;
  CommonFlags ln_cf;
  auto* ln = app.add_subcommand("linear", "trace-shifted matrix inequalities");
  ln->add_option("matrix", ln_file, "matrix file (rows of A)")->required();
  ln->add_option("--alpha", ln_alpha, "alpha > 0 (default 1)");
  ln->add_option("--beta", ln_beta, "beta >= 1 (default 1)");
  ln->add_option("--P", ln_p, "matrix file with a candidate P");
  ln->add_option("--case", ln_case, "1, 2 or both (default both)");
  add_common(ln, &ln_cf);

  // bendixson
  std::string bd_file;
  double bd_radius = 0.0;
  CommonFlags bd_cf;
  auto* bd = app.add_subcommand("bendixson", "invariant-set exclusion checks");
  bd->add_option("file", bd_file, "system file")->required();
  bd->add_option("--radius", bd_radius, "ball radius (default 1)");
  add_common(bd, &bd_cf);

  // control
  std::string ct_file, ct_mode, ct_alpha, ct_beta;
  int ct_case = 3;
  CommonFlags ct_cf;
  auto* ct = app.add_subcommand("control", "verify or synthesize a control law");
  ct->add_option("file", ct_file, "control system file")->required();
  ct->add_option("mode", ct_mode, "verify | synth")->required();
  ct->add_option("--alpha", ct_alpha, "density power or range lo..hi");
  ct->add_option("--beta", ct_beta, "constant beta >= 1");
  ct->add_option("--case", ct_case, "condition case (default 3)");
  add_common(ct, &ct_cf);

  // simulate
  std::string sm_file, sm_csv;
  std::vector<std::string> sm_x0;
  double sm_T = 0.0, sm_tol = 0.0;
  CommonFlags sm_cf;
  auto* sm = app.add_subcommand("simulate", "integrate trajectories");
  sm->add_option("file", sm_file, "system file")->required();
  sm->add_option("--x0", sm_x0, "initial condition a,b,... (repeatable)");
  sm->add_option("--T", sm_T, "horizon (default 100)");
  sm->add_option("--tol", sm_tol, "local error tolerance (default 1e-9)");
  sm->add_option("--csv", sm_csv, "write the trajectory bundle CSV here");
  add_common(sm, &sm_cf);

  // plot
  std::string pl_csv, pl_out, pl_coords;
  auto* pl = app.add_subcommand("plot", "render a trajectory CSV to SVG");
  pl->add_option("csv", pl_csv, "trajectory CSV")->required();
  pl->add_option("--out", pl_out, "output SVG path")->required();
  pl->add_option("--coords", pl_coords, "coordinate pair i,j (default 1,2)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (an->parsed()) {
      return cmd_analyze(an_file, an_cases, an_alpha, an_beta, an_radius,
                         an_instab, an_r, an_empirical, an_cf);
    }
    if (fx->parsed()) {
      return cmd_flux(fx_file, fx_levels, fx_n, fx_alpha, fx_rout, fx_cf);
    }
    if (ln->parsed()) {
      return cmd_linear(ln_file, ln_alpha, ln_beta, ln_p, ln_case, ln_cf);
    }
    if (bd->parsed()) return cmd_bendixson(bd_file, bd_radius, bd_cf);
    if (ct->parsed()) {
      return cmd_control(ct_file, ct_mode, ct_alpha, ct_beta, ct_case, ct_cf);
    }
    if (sm->parsed()) {
      return cmd_simulate(sm_file, sm_x0, sm_T, sm_tol, sm_csv, sm_cf);
    }
    if (pl->parsed()) return cmd_plot(pl_csv, pl_out, pl_coords);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
