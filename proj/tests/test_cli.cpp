// End-to-end tests that drive the installed binary: output schemas,
// determinism of payload bytes, exit codes, and the check mode.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "compdist/metrics.hpp"
#include "compdist/rng.hpp"

#ifndef COMPDIST_CLI_PATH
#error "COMPDIST_CLI_PATH must be defined by the build"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args, bool raw_command = false) {
  const fs::path dir = fs::temp_directory_path() / "compdist_cli_capture";
  fs::create_directories(dir);
  const fs::path capture = dir / "out.txt";
  const std::string invocation =
      raw_command ? args : std::string(COMPDIST_CLI_PATH) + " " + args;
  const std::string cmd = invocation + " > " + capture.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(capture);
  std::stringstream ss;
  ss << in.rdbuf();
  res.output = ss.str();
  return res;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& payload) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(payload);
  std::string line;
  bool seen_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      seen_header = true;  // column names
      continue;
    }
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        cells.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    cells.push_back(cur);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("gfun emits the closed-form Laplace curve") {
  const RunResult r = run_cli("gfun laplace --q 2");
  REQUIRE(r.exit_code == 0);
  const auto rows = csv_rows(r.output);
  REQUIRE(rows.size() == 101);
  for (const auto& row : rows) {
    const double kappa = std::stod(row[0]);
    const double g = std::stod(row[1]);
    const double expected =
        kappa == 0.0 ? 1.0
                     : (kappa == 1.0 ? 0.0 : compdist::g_fun_laplace_closed(2, kappa));
    CHECK(g == Catch::Approx(expected).margin(1e-12));
  }
}

TEST_CASE("gfun matches the boundary identity for pzero") {
  const RunResult r = run_cli("gfun pzero --q 2 --grid 0.02:0.98:25");
  REQUIRE(r.exit_code == 0);
  for (const auto& row : csv_rows(r.output)) {
    const double kappa = std::stod(row[0]);
    const double g = std::stod(row[1]);
    const double bound = (1.0 - std::sqrt(kappa)) * (1.0 - std::sqrt(kappa));
    CHECK(g == Catch::Approx(bound).margin(1e-6));
  }
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("gfun nosuchdist").exit_code == 2);
  CHECK(run_cli("gfun laplace --grid nonsense").exit_code == 2);
  CHECK(run_cli("gfun laplace --grid ''").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("report ts:1:0.5").exit_code == 2);  // s must exceed 1
}

TEST_CASE("reports carry the moment verdicts") {
  const RunResult gpd = run_cli("report ts:1:2.69 --grid 0.3:0.6:2 --format json");
  REQUIRE(gpd.exit_code == 0);
  const auto j1 = nlohmann::json::parse(gpd.output);
  CHECK(j1["summary"]["verdict"] == "compressible_infinite_variance");

  const RunResult steep = run_cli("report ts:1:6 --grid 0.3:0.6:2 --format json");
  REQUIRE(steep.exit_code == 0);
  CHECK(nlohmann::json::parse(steep.output)["summary"]["verdict"] ==
        "incompressible_finite_fourth");

  const RunResult ggd = run_cli("report ggd:0.7 --grid 0.3:0.6:2 --format json");
  REQUIRE(ggd.exit_code == 0);
  const auto j3 = nlohmann::json::parse(ggd.output);
  CHECK(j3["summary"]["verdict"] == "incompressible_finite_fourth");
  CHECK(std::fabs(j3["summary"]["delta0"].get<double>() - 0.04) < 0.01);
}

TEST_CASE("payloads are byte-identical across reruns") {
  const fs::path dir = fs::temp_directory_path() / "compdist_cli_determinism";
  fs::create_directories(dir);
  const std::string a = (dir / "a.csv").string();
  const std::string b = (dir / "b.csv").string();
  REQUIRE(run_cli("simulate --dist laplace --N 32 --deltas 0.25:0.75:3 "
                  "--decoders ls,oracle --trials 4 --seed 99 --out " + a)
              .exit_code == 0);
  REQUIRE(run_cli("simulate --dist laplace --N 32 --deltas 0.25:0.75:3 "
                  "--decoders ls,oracle --trials 4 --seed 99 --out " + b)
              .exit_code == 0);
  std::ifstream fa(a), fb(b);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().find("master_seed\":99") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("check revalidates stored outputs") {
  const fs::path dir = fs::temp_directory_path() / "compdist_cli_check";
  fs::create_directories(dir);
  const std::string file = (dir / "g.csv").string();
  REQUIRE(run_cli("gfun ggd:1.5 --q 1 --grid 0.1:0.9:9 --out " + file).exit_code == 0);
  const RunResult ok = run_cli("check " + file);
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("check ok") != std::string::npos);

  // Tamper with a data cell: check must fail.
  std::ifstream in(file);
  std::stringstream buf;
  buf << in.rdbuf();
  in.close();
  std::string payload = buf.str();
  const auto pos = payload.rfind("0.");
  payload[pos + 2] = payload[pos + 2] == '9' ? '8' : '9';
  std::ofstream(file, std::ios::binary) << payload;
  CHECK(run_cli("check " + file).exit_code == 1);

  // JSON documents are checkable too.
  const std::string jfile = (dir / "g.json").string();
  REQUIRE(run_cli("hfun pzero --grid 0.2:0.8:4 --format json --out " + jfile)
              .exit_code == 0);
  CHECK(run_cli("check " + jfile).exit_code == 0);
  fs::remove_all(dir);
}

TEST_CASE("fig4 matches the step bound description") {
  const RunResult r = run_cli("fig4 --grid 0:0.36:10");
  REQUIRE(r.exit_code == 0);
  const auto rows = csv_rows(r.output);
  for (const auto& row : rows) {
    const double kappa = std::stod(row[0]);
    const double g1 = std::stod(row[1]);
    const double step = std::stod(row[2]);
    if (kappa <= 0.18) {
      CHECK(step == 0.5);
      CHECK(g1 >= 0.5);  // the curve dominates the bound on [0, kappa0]
    } else {
      CHECK(step == 0.0);
    }
  }
}

TEST_CASE("fig5 reproduces the running delta0 values") {
  const RunResult r = run_cli("fig5 --grid 0.7:1:2");
  REQUIRE(r.exit_code == 0);
  const auto rows = csv_rows(r.output);
  REQUIRE(rows.size() == 2);
  CHECK(std::stod(rows[0][1]) == Catch::Approx(0.04).margin(0.01));
  CHECK(std::stod(rows[1][1]) == Catch::Approx(0.15).margin(0.01));
  CHECK(rows[0][2] == "found");
}

TEST_CASE("imgstats consumes a directory of pgm files") {
  const fs::path dir = fs::temp_directory_path() / "compdist_cli_img";
  fs::create_directories(dir);
  // Two small synthetic images.
  compdist::SplitMix64 gen(12);
  for (int i = 0; i < 2; ++i) {
    std::ofstream out(dir / ("i" + std::to_string(i) + ".pgm"), std::ios::binary);
    out << "P5\n64 48\n255\n";
    for (int p = 0; p < 64 * 48; ++p) {
      out.put(static_cast<char>(gen() % 256));
    }
  }
  const std::string file = (dir / "stats.csv").string();
  const RunResult r = run_cli("imgstats --dir " + dir.string() +
                              " --size 8 --count 6 --transform dct "
                              "--overlay ts:1:2.69:8 --seed 3 --out " + file);
  REQUIRE(r.exit_code == 0);
  std::ifstream in(file);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto rows = csv_rows(buf.str());
  REQUIRE(rows.size() == 64);
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    const double v = std::stod(row[1]);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
  CHECK(run_cli("check " + file).exit_code == 0);
  CHECK(run_cli("imgstats --dir " + dir.string() + " --size 7 --count 2").exit_code == 2);
  fs::remove_all(dir);
}

TEST_CASE("seed falls back to the environment variable") {
  const fs::path dir = fs::temp_directory_path() / "compdist_cli_env";
  fs::create_directories(dir);
  const std::string file = (dir / "n.json").string();
  const std::string base = "nspfuzz --m 12 --N 24 --k 2 --eta 0.9 --directions 5";
  REQUIRE(run_cli("env COMPDIST_SEED=777 " + std::string(COMPDIST_CLI_PATH) +
                          " " + base + " --out " + file,
                  true)
              .exit_code == 0);
  const auto j = nlohmann::json::parse(std::ifstream(file));
  CHECK(j["config"]["seed"] == 777);
  fs::remove_all(dir);
}
