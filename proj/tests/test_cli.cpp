#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into stdout.
Result run(const std::string& args) {
  const std::string cmd = std::string(ANGIO_CLI) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const std::string kTmp = std::string(TEST_TMP_DIR) + "/";

}  // namespace

TEST_CASE("table1 command", "[cli]") {
  const Result r = run("table1");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 25);
  CHECK(rows[0] == std::vector<std::string>{"alpha", "mu", "m", "a_cr", "tau_cr"});
  auto find = [&](const std::string& alpha, const std::string& mu, const std::string& m) {
    for (const auto& row : rows) {
      if (row[0] == alpha && row[1] == mu && row[2] == m) return row[4];
    }
    return std::string("missing");
  };
  CHECK(std::abs(std::stod(find("1", "0", "1")) - 8.069) < 8.069 * 5e-3);
  CHECK(std::abs(std::stod(find("0", "5.85", "2")) - 20.833) < 20.833 * 5e-3);
  CHECK(find("1", "5.85", "1") == "inf");
}

TEST_CASE("outputs are deterministic", "[cli]") {
  const std::string a = kTmp + "sc_a.csv", b = kTmp + "sc_b.csv";
  REQUIRE(run("switch-curve --alpha 0 --mu 3 --grid 0.01:0.5:0.01 --out " + a).code == 0);
  REQUIRE(run("switch-curve --alpha 0 --mu 3 --grid 0.01:0.5:0.01 --out " + b).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(run("fig-akr").out == run("fig-akr").out);
}

TEST_CASE("switch-curve default grid reaches both endpoints", "[cli]") {
  const Result r = run("switch-curve --alpha 0 --mu 5.7");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() > 10);
  const double last = std::stod(rows.back()[1]);
  CHECK(std::abs(last - 5.632) < 5.632 * 1e-2);
  CHECK(std::abs(std::stod(rows[1][1]) - 5.326) < 5.326 * 1e-2);
}

TEST_CASE("hodograph of the ODE limit", "[cli]") {
  const std::string out = kTmp + "hodo.csv";
  const Result r = run(R"(hodograph --kernel1 '{"type":"dirac","sigma":0}' --kernel2 '{"type":"dirac","sigma":0}' --out )" + out);
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["rhp_root_count"] == 0);
  CHECK(std::abs(j["arg_change"].get<double>() - 3.141592653589793) < 1e-12);
  CHECK(parse_csv(slurp(out))[0] == std::vector<std::string>{"omega", "re_W", "im_W"});
}

TEST_CASE("simulate writes the trajectory and metadata", "[cli]") {
  const std::string out = kTmp + "sim.csv";
  const Result r =
      run(R"(simulate --kernel1 '{"type":"erlang","m":1,"a":1.0}' --kernel2 '{"type":"erlang","m":1,"a":1.0}' --T 150 --window 20 --out )" + out);
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(slurp(out));
  CHECK(rows[0] == std::vector<std::string>{"t", "x", "y", "p", "q"});
  CHECK(rows.size() > 1000);
  const json meta = json::parse(slurp(out + ".json"));
  CHECK(meta["classification"]["kind"] == "Converging");
  CHECK(meta["kernel1"]["type"] == "erlang");
  CHECK(meta["blowup_time"].is_null());
}

TEST_CASE("parameter files and kernel files", "[cli]") {
  const std::string params = kTmp + "params.json", kern = kTmp + "kern.json";
  std::ofstream(params) << R"({"r":0.192,"b":5.85,"a_H":0.00873,"mu":0,"alpha":1,"h":"log"})";
  std::ofstream(kern) << R"({"type":"erlang","m":1,"a":4,"sigma":0})";
  const Result r = run("critical-sigma --params " + params + " --kernel1 @" + kern + " --kernel2 @" + kern);
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["status"] == "Switch");
  CHECK(std::abs(j["sigma0"].get<double>() - 0.17558) < 1e-4);
}

TEST_CASE("error reporting and exit codes", "[cli]") {
  Result r = run("table1 --bogus");
  CHECK(r.code == 2);
  CHECK(json::parse(r.out)["error"] == "ConfigError");
  r = run("steady --params /nonexistent.json");
  CHECK(r.code == 2);
  r = run("steady --mu 7");
  CHECK(r.code == 2);
  CHECK(json::parse(r.out)["error"] == "NoPositiveSteadyState");
  r = run(R"(hodograph --kernel1 '{"type":"dirac","sigma":0}' --kernel2 'not json')");
  CHECK(r.code == 2);
  r = run("critical-a --m1 4 --m2 4");
  CHECK(r.code == 2);
  CHECK(json::parse(r.out)["error"] == "Unsupported");
  // gamma = 0 puts a zero of W at the origin
  r = run(R"(hodograph --mu 5.85 --kernel1 '{"type":"dirac","sigma":0}' --kernel2 '{"type":"dirac","sigma":0}' --out )" + kTmp + "h0.csv");
  CHECK(r.code == 3);
  CHECK(json::parse(r.out)["error"] == "OnAxisZero");
}
