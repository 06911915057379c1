#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "blab/error.hpp"
#include "blab/harness.hpp"
#include "json.hpp"

namespace blab {

namespace {

std::string format_value(double v) {
  if (std::isnan(v)) return "undefined";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// CSV field; quoted only if it would break the row
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

void Report::add(std::string parameters, int resolution, std::string metric, double value, std::string text) {
  rows.push_back({experiment, std::move(parameters), resolution, std::move(metric), value, std::move(text)});
}

void Report::check(std::string name, bool ok, std::string detail) {
  checks.push_back({std::move(name), ok, std::move(detail)});
}

bool Report::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

const ReportRow* Report::find(const std::string& metric, std::initializer_list<std::string> fragments) const {
  for (const auto& r : rows) {
    if (r.metric != metric) continue;
    bool all = true;
    for (const auto& f : fragments) all = all && r.parameters.find(f) != std::string::npos;
    if (all) return &r;
  }
  return nullptr;
}

void write_csv(std::ostream& os, const Report& report) {
  os << "experiment,parameters,resolution,metric,value\n";
  for (const auto& r : report.rows)
    os << field(r.experiment) << ',' << field(r.parameters) << ',' << r.resolution << ',' << field(r.metric) << ','
       << field(r.text.empty() ? format_value(r.value) : r.text) << '\n';
}

void write_summary_json(std::ostream& os, const Report& report, const ExperimentConfig& config) {
  nlohmann::ordered_json j;
  j["experiment"] = report.experiment;
  j["passed"] = report.passed();
  j["runtime_seconds"] = report.runtime_seconds;
  j["rows"] = report.rows.size();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["config"] = nlohmann::ordered_json::parse(serialize_config(config));
  os << j.dump(2) << '\n';
}

std::string write_report(const std::string& dir, const std::string& name, const Report& report,
                         const ExperimentConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, "cannot create output directory " + dir + ": " + ec.message());
  const std::string csv = (std::filesystem::path(dir) / (name + ".csv")).string();
  const std::string summary = (std::filesystem::path(dir) / (name + "_summary.json")).string();
  std::ofstream a(csv);
  if (!a) fail(ErrorKind::io, "cannot write " + csv);
  write_csv(a, report);
  std::ofstream b(summary);
  if (!b) fail(ErrorKind::io, "cannot write " + summary);
  write_summary_json(b, report, config);
  return csv;
}

std::string growth_verdict(std::span<const double> values, const VerdictConfig& v) {
  if (values.empty()) return "undetermined";
  bool zero = true;
  for (double x : values) zero = zero && x == 0.0;
  if (zero) return "zero";
  const std::size_t n = values.size();
  if (n >= static_cast<std::size_t>(v.steps) + 1) {
    bool grows = true;
    for (std::size_t i = n - v.steps; i < n; ++i) grows = grows && values[i - 1] > 0.0 && values[i] >= (1.0 + v.diverging) * values[i - 1];
    if (grows) return "diverging";
  }
  if (n >= 2) {
    const double a = values[n - 2], b = values[n - 1];
    if (a != 0.0 && std::abs(b - a) <= v.stable * std::abs(a)) return "stable";
  }
  return "undetermined";
}

}  // namespace blab
