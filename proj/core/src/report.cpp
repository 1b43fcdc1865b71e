#include "divstab/report.hpp"

#include <cstdio>

namespace divstab {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ReportWriter::kv(const std::string& key, double value) {
  out_ << key << ": " << format_double(value) << "\n";
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string digest_hex(std::string_view bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string("fnv1a64:") + buf;
}

void write_header(ReportWriter& w, const std::string& command,
                  const std::string& input_text) {
  w.section("divstab");
  w.kv("tool_version", kToolVersion);
  w.kv("command", command);
  w.kv("input_digest", digest_hex(input_text));
}

namespace {

std::string theorem_name(const ConditionSpec& spec) {
  switch (spec.theorem) {
    case ConditionSpec::Theorem::Stability:
      return spec.case_id == 0 ? "rantzer-baseline" : "stability";
    case ConditionSpec::Theorem::Instability:
      return "instability";
    case ConditionSpec::Theorem::Control:
      return "control";
  }
  return "";
}

}  // namespace

void write_condition_report(ReportWriter& w, const ConditionReport& rep,
                            const std::vector<std::string>& vars) {
  std::string head = theorem_name(rep.spec);
  if (rep.spec.case_id > 0) {
    head += " case=" + std::to_string(rep.spec.case_id);
  }
  if (rep.alpha > 0) head += " alpha=" + std::to_string(rep.alpha);
  w.section(head);
  if (rep.spec.case_id == 3) w.kv("beta", rep.spec.beta);
  for (const auto& c : rep.clauses) {
    w.kv("clause", c.name + " " + sign_req_to_string(c.required) + " on " +
                       c.region_desc);
    w.kv("  expression", c.expr.normalized().to_string(vars));
    w.kv("  verdict", c.verdict.to_string(vars));
  }
  for (const auto& ob : rep.origin_checks) {
    std::string v = ob.holds ? "Proven" : "Fails";
    if (ob.min_degree != INT_MAX) {
      v += " (origin degree " + std::to_string(ob.min_degree) + ")";
    }
    if (!ob.note.empty()) v += " [" + ob.note + "]";
    w.kv("origin." + ob.name, v);
  }
  for (const auto& ob : rep.advisory_checks) {
    std::string v = ob.holds ? "Proven" : "Fails";
    if (ob.min_degree != INT_MAX) {
      v += " (origin degree " + std::to_string(ob.min_degree) + ")";
    }
    if (!ob.note.empty()) v += " [" + ob.note + "]";
    w.kv("advisory." + ob.name, v);
  }
  w.kv("overall", rep.verdict_text(vars));
  if (!rep.exceptional_set.empty()) {
    w.kv("zero_set", rep.exceptional_set.describe(vars));
    w.kv("on_zero_set", "stable (not asymptotically stable)");
  }
  if (rep.empirical) w.kv("empirical", "true");
  if (!rep.note.empty()) w.kv("note", rep.note);
}

void write_estimate(ReportWriter& w, const std::string& name,
                    const IntegralEstimate& est) {
  w.kv(name + ".mean", est.mean);
  w.kv(name + ".std_error", est.std_error);
  w.kv(name + ".n", est.n_samples);
  w.kv(name + ".sign", est.sign_string() + " (99% confidence)");
  if (est.origin_excluded) w.kv(name + ".origin_excluded", "true");
  if (!est.note.empty()) w.kv(name + ".note", est.note);
}

void write_linear_verdict(ReportWriter& w, const LinearVerdict& v) {
  w.kv("status", v.status_string());
  w.kv("hurwitz", v.hurwitz ? "true" : "false");
  if (v.status == LinearVerdict::Status::Holds ||
      v.status == LinearVerdict::Status::FailsWithSuppliedP) {
    w.kv("p_source", v.p_supplied ? "supplied" : "lyapunov_solve");
    w.kv("max_eig_form1", v.max_eig_form1);
    if (v.max_eig_form2 != 0.0) w.kv("max_eig_form2", v.max_eig_form2);
    std::ostringstream p;
    p << "[";
    for (int i = 0; i < v.P.rows(); ++i) {
      if (i) p << "; ";
      for (int j = 0; j < v.P.cols(); ++j) {
        if (j) p << " ";
        p << format_double(v.P(i, j));
      }
    }
    p << "]";
    w.kv("P", p.str());
  }
  if (!v.note.empty()) w.kv("note", v.note);
}

void write_exclusion(ReportWriter& w, const ExclusionVerdict& v,
                     const std::vector<std::string>& vars) {
  w.kv("verdict", v.kind_string());
  if (v.excluded()) {
    w.kv("certificate", v.sign.to_string(vars));
    w.kv("tested_expression", v.tested.to_string(vars));
  }
  if (!v.reason.empty()) w.kv("reason", v.reason);
}

void write_classification(ReportWriter& w, const TrajectoryRecord& rec) {
  w.kv("classification", rec.classification.to_string());
  w.kv("steps", static_cast<std::uint64_t>(rec.steps));
  w.kv("t_stop", rec.t_stop);
  if (!rec.x.empty()) {
    std::ostringstream fin;
    for (std::size_t i = 0; i < rec.x.back().size(); ++i) {
      if (i) fin << ",";
      fin << format_double(rec.x.back()[i]);
    }
    w.kv("final_state", fin.str());
  }
}

}  // namespace divstab
