#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

#include "divstab/conditions.hpp"
#include "divstab/flux.hpp"
#include "divstab/invariantset.hpp"
#include "divstab/linstab.hpp"
#include "divstab/sim.hpp"

namespace divstab {

inline constexpr const char* kToolVersion = "0.1.0";

// Line-oriented "key: value" report with [section] headers; key order is
// fixed by construction, floats always print with 17 significant digits, so
// identical inputs and seeds give byte-identical output.
class ReportWriter {
 public:
  void section(const std::string& name) { out_ << "[" << name << "]\n"; }
  void kv(const std::string& key, const std::string& value) {
    out_ << key << ": " << value << "\n";
  }
  void kv(const std::string& key, const char* value) {
    out_ << key << ": " << value << "\n";
  }
  void kv(const std::string& key, double value);
  void kv(const std::string& key, std::uint64_t value) {
    out_ << key << ": " << value << "\n";
  }
  void kv(const std::string& key, int value) {
    out_ << key << ": " << value << "\n";
  }
  void kv(const std::string& key, const Rational& value) {
    out_ << key << ": " << to_string(value) << "\n";
  }
  void blank() { out_ << "\n"; }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string format_double(double v);
std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_hex(std::string_view bytes);

void write_header(ReportWriter& w, const std::string& command,
                  const std::string& input_text);
void write_condition_report(ReportWriter& w, const ConditionReport& rep,
                            const std::vector<std::string>& vars);
void write_estimate(ReportWriter& w, const std::string& name,
                    const IntegralEstimate& est);
void write_linear_verdict(ReportWriter& w, const LinearVerdict& v);
void write_exclusion(ReportWriter& w, const ExclusionVerdict& v,
                     const std::vector<std::string>& vars);
void write_classification(ReportWriter& w, const TrajectoryRecord& rec);

}  // namespace divstab
