#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "angio/kernels.hpp"
#include "angio/model.hpp"
#include "angio/simulator.hpp"
#include "angio/stability.hpp"

namespace angio {

using nlohmann::json;

/// Parameter file contents: {"r", "b", "a_H", "mu", "alpha", "h"}.
struct ModelSpec {
  ModelParams params;
  std::string growth = "log";
};

ModelSpec parse_model(const json& j);
json to_json(const ModelSpec& spec);

/// {"type": "erlang", "m", "a", "sigma"} | {"type": "tent", "sigma", "epsilon"} | {"type": "dirac", "sigma"}
DelayKernel parse_kernel(const json& j);
json to_json(const DelayKernel& kernel);

json to_json(const StabilityReport& report);
json to_json(const SimConfig& cfg);
json to_json(const Classification& c);

/// Reads and parses a JSON file; ConfigError on missing file or bad syntax.
json read_json_file(const std::string& path);

/// Shortest round-trip decimal; infinities as "inf" / "-inf".
std::string format_number(double v);

/// Comma-separated table with a mandatory header row.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
  size_t width_;
};

}  // namespace angio
