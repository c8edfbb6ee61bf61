#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tsra/errors.hpp"
#include "tsra/orchestrator.hpp"
#include "tsra/report.hpp"

using namespace tsra;

namespace {

RunResult small_run() {
  SimConfig c;
  c.frames = 4;
  expand_defaults(c);
  return run(c, ControllerKind::proposed);
}

std::vector<std::string> header(const std::string& csv) {
  std::vector<std::string> cols;
  std::stringstream line(csv.substr(0, csv.find('\n')));
  std::string col;
  while (std::getline(line, col, ',')) cols.push_back(col);
  return cols;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("every column names its unit") {
  const auto r = small_run();
  std::ostringstream slots, frames;
  write_slot_csv(slots, r);
  write_frame_csv(frames, r);
  const char* units[] = {"_mbit", "_mbps", "_j", "_rmb", "_rmb_per_kwh", "_unitless", "_flag",
                         "_index", "_count", "_w", "_ratio", "_s"};
  for (const auto& text : {slots.str(), frames.str()}) {
    for (const auto& col : header(text)) {
      bool ok = false;
      for (const char* u : units) {
        const std::string suffix(u);
        ok = ok || (col.size() > suffix.size() && col.compare(col.size() - suffix.size(), suffix.size(), suffix) == 0);
      }
      CHECK_MESSAGE(ok, col);
    }
  }
  const std::string s = slots.str(), f = frames.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == 1 + 20);
  CHECK(std::count(f.begin(), f.end(), '\n') == 1 + 4);
}

TEST_CASE("summary survives a write and read") {
  const auto s = summarize(small_run());
  std::stringstream io;
  write_summary(io, s);
  CHECK(read_summary(io) == s);
}

TEST_CASE("write_run creates the three files") {
  const auto dir = std::filesystem::temp_directory_path() / "tsra_report_test";
  std::filesystem::remove_all(dir);
  const auto r = small_run();
  write_run(dir, r);
  for (const char* f : {"slots.csv", "frames.csv", "summary.json"}) CHECK(std::filesystem::exists(dir / f));
  CHECK(read_summary(dir / "summary.json") == summarize(r));
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed summaries are reported") {
  std::istringstream junk("{not json");
  CHECK_THROWS_AS(read_summary(junk), ConfigError);
  CHECK_THROWS_AS(read_summary(std::filesystem::path("/nonexistent/summary.json")), ConfigError);
}

}
