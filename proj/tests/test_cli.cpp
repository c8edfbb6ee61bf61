#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "tsra");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = tsra::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const char* name) {
  auto p = fs::temp_directory_path() / "tsra_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

const std::string kPreset = std::string(TSRA_CONFIG_DIR) + "/tableII.cfg";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("run writes the three outputs") {
  const auto dir = scratch("run");
  const auto r = invoke({"run", "--config", kPreset, "--controller", "proposed", "--slots", "50",
                         "--out", dir.string()});
  CHECK(r.code == 0);
  for (const char* f : {"slots.csv", "frames.csv", "summary.json"}) CHECK(fs::exists(dir / f));
}

TEST_CASE("compare reports the relative deltas") {
  const auto a = scratch("cmp_a"), b = scratch("cmp_b");
  REQUIRE(invoke({"run", "--slots", "100", "--out", a.string()}).code == 0);
  REQUIRE(invoke({"run", "--slots", "100", "--controller", "baseline2", "--out", b.string()}).code == 0);
  const auto r = invoke({"compare", a.string(), (b / "summary.json").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("cost_reduction_pct") != std::string::npos);
  CHECK(r.out.find("backlog_par_reduction_pct") != std::string::npos);
  CHECK(r.out.find("qoe_delta_pct") != std::string::npos);
}

TEST_CASE("sweep writes one row per run") {
  const auto dir = scratch("sweep");
  const auto r = invoke({"sweep", "--slots", "25", "--v-grid", "10,100", "--controllers",
                         "proposed,baseline1", "--seeds", "1,2", "--out", dir.string()});
  CHECK(r.code == 0);
  std::ifstream csv(dir / "sweep.csv");
  int lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  CHECK(lines == 1 + 2 * 2 * 2);
}

TEST_CASE("configuration problems exit with code 1 and a line number") {
  const auto dir = scratch("bad");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "neg.cfg");
    cfg << "energy.e_max_j = -5\n";
  }
  CHECK(invoke({"run", "--config", (dir / "neg.cfg").string(), "--out", (dir / "o").string()}).code == 1);
  {
    std::ofstream cfg(dir / "typo.cfg");
    cfg << "control.V = 100\ncontrol.vv = 3\n";
  }
  const auto r = invoke({"run", "--config", (dir / "typo.cfg").string(), "--out", (dir / "o").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find(":2:") != std::string::npos);
  CHECK(invoke({"run", "--controller", "nope", "--out", (dir / "o").string()}).code == 1);
  CHECK(invoke({"run", "--slots", "7", "--out", (dir / "o").string()}).code == 1);
  CHECK(invoke({"frobnicate"}).code == 1);
  CHECK(invoke({}).code == 1);
}

TEST_CASE("check runs a selected criterion") {
  const auto r = invoke({"check", "--only", "1", "--work-dir", scratch("check").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("criterion 1") != std::string::npos);
  CHECK(r.out.find("PASS") != std::string::npos);
}

}
