#include "angio/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "angio/error.hpp"

namespace angio {

namespace {

double number(const json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorKind::ConfigError, std::string("missing field \"") + key + "\"");
  const json& v = j.at(key);
  if (v.is_string() && v.get<std::string>() == "inf") return INFINITY;
  if (!v.is_number()) fail(ErrorKind::ConfigError, std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

json number_json(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

ModelSpec parse_model(const json& j) {
  if (!j.is_object()) fail(ErrorKind::ConfigError, "parameter file must be a JSON object");
  ModelSpec spec;
  spec.params.r = number(j, "r");
  spec.params.b = number(j, "b");
  spec.params.a_H = number(j, "a_H");
  spec.params.mu = number(j, "mu");
  spec.params.alpha = number(j, "alpha");
  if (j.contains("h")) {
    if (!j.at("h").is_string()) fail(ErrorKind::ConfigError, "field \"h\" must be a string");
    spec.growth = j.at("h").get<std::string>();
  }
  spec.params.validate();
  GrowthFunction::from_label(spec.growth);
  return spec;
}

json to_json(const ModelSpec& spec) {
  return {{"r", spec.params.r},     {"b", spec.params.b},         {"a_H", spec.params.a_H},
          {"mu", spec.params.mu},   {"alpha", spec.params.alpha}, {"h", spec.growth}};
}

DelayKernel parse_kernel(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    fail(ErrorKind::ConfigError, "kernel must be an object with a string \"type\"");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "dirac") return DelayKernel::dirac(number(j, "sigma"));
  if (type == "tent") return DelayKernel::tent(number(j, "sigma"), number(j, "epsilon"));
  if (type == "erlang") {
    const double m = number(j, "m");
    if (m != std::floor(m)) fail(ErrorKind::ConfigError, "erlang shape m must be an integer");
    return DelayKernel::erlang(static_cast<int>(m), number(j, "a"), number_or(j, "sigma", 0.0));
  }
  fail(ErrorKind::ConfigError, "unknown kernel type \"" + type + "\"");
}

json to_json(const DelayKernel& kernel) {
  if (const auto* d = kernel.as_dirac()) return {{"type", "dirac"}, {"sigma", d->sigma}};
  if (const auto* e = kernel.as_erlang()) {
    return {{"type", "erlang"}, {"m", e->m}, {"a", e->a}, {"sigma", e->sigma}};
  }
  const auto* t = kernel.as_tent();
  return {{"type", "tent"}, {"sigma", t->sigma}, {"epsilon", t->epsilon}};
}

json to_json(const StabilityReport& report) {
  json j{{"verdict", std::string(to_string(report.verdict))}};
  j["rhp_root_count"] = report.rhp_root_count ? json(*report.rhp_root_count) : json(nullptr);
  if (report.critical_value) {
    j["critical_value"] = {{"name", report.critical_value->name},
                           {"value", number_json(report.critical_value->value)}};
  } else {
    j["critical_value"] = nullptr;
  }
  j["omega0"] = report.omega0 ? number_json(*report.omega0) : json(nullptr);
  j["transversal"] = report.transversal ? json(*report.transversal) : json(nullptr);
  return j;
}

json to_json(const SimConfig& cfg) {
  return {{"dt", cfg.dt}, {"T", cfg.T}, {"tail_tol", cfg.tail_tol}, {"quad_order", cfg.quad_order},
          {"method", "rk4"}};
}

json to_json(const Classification& c) {
  json j{{"kind", std::string(to_string(c.kind))}};
  if (c.kind == TrajectoryKind::Oscillating) {
    j["period"] = c.period;
    j["amplitude"] = c.amplitude;
  }
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ConfigError, path + ": " + e.what());
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header)
    : out_(out), width_(header.size()) {
  row(header);
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) fail(ErrorKind::InvalidParameter, "CSV row width does not match header");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

}  // namespace angio
