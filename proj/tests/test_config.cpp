#include <doctest.h>

#include <sstream>

#include "tsra/config.hpp"
#include "tsra/errors.hpp"

using namespace tsra;

namespace {

SimConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults reproduce the parameter table") {
  SimConfig c;
  expand_defaults(c);
  CHECK(c.devices == 5);
  CHECK(c.channels == 12);
  CHECK(c.V == 100.0);
  CHECK(c.frames == 200);
  CHECK(c.slots_per_frame == 5);
  CHECK(c.slot_duration == 1.0);
  CHECK(c.g_max == 2.5);
  CHECK(c.e_max == 5.0);
  CHECK(c.r_max == 20.0);
  CHECK(c.beta == 5000.0);
  CHECK(c.data_init == 3.0);
  CHECK(c.energy_init == 2.0);
  CHECK(c.quota == 3);
  CHECK(c.priority == std::vector<double>{0.1, 0.15, 0.2, 0.25, 0.3});
  CHECK(c.delay_bound == std::vector<double>(5, 1e-5));
  CHECK(c.bandwidth == std::vector<double>(12, 1.0));
  CHECK(c.grid_price.min_price == 1.8);
  CHECK(c.grid_price.max_price == 9.0);
  CHECK(c.p_max.rows() == 5);
  CHECK(c.p_max.cols() == 12);
  CHECK(validate(c).empty());
}

TEST_CASE("expand_defaults is idempotent") {
  SimConfig c;
  expand_defaults(c);
  const auto once = to_text(c);
  expand_defaults(c);
  CHECK(to_text(c) == once);
}

TEST_CASE("text form round-trips") {
  SimConfig c;
  c.V = 37.5;
  c.seed = 99;
  c.quota = 1;
  c.grid_price.kind = PriceKind::two_tier;
  c.admm_adaptive_rho = false;
  expand_defaults(c);
  const auto text = to_text(c);
  auto back = parse(text);
  expand_defaults(back);
  CHECK(to_text(back) == text);
}

TEST_CASE("comments, blank lines and broadcast lists") {
  const auto c = parse("# scenario\n\nsystem.devices = 3  # three\ndevices.priority = 1, 2, 3\n"
                       "radio.p_max_w = 0.02\n");
  auto e = c;
  expand_defaults(e);
  CHECK(e.devices == 3);
  CHECK(e.priority == std::vector<double>{1, 2, 3});
  for (double p : e.p_max.flat()) CHECK(p == 0.02);
}

TEST_CASE("parse errors carry the line number") {
  CHECK(error_line("control.V = 1\nbogus.key = 2\n") == 2);
  CHECK(error_line("control.V = 1\ncontrol.V = 2\n") == 2);
  CHECK(error_line("\n\ncontrol.V = abc\n") == 3);
  CHECK(error_line("no equals sign\n") == 1);
  CHECK(error_line("price.grid.model = hourly\n") == 1);
  CHECK(error_line("admm.adaptive_rho = maybe\n") == 1);
  CHECK(error_line("run.seed = -3\n") == 1);
}

TEST_CASE("validation rejects inconsistent scenarios") {
  auto bad = [](auto mutate) {
    SimConfig c;
    expand_defaults(c);
    mutate(c);
    CHECK_THROWS_AS(validate(c), ConfigError);
  };
  bad([](SimConfig& c) { c.e_max = -5; });
  bad([](SimConfig& c) { c.energy_init = 6; });
  bad([](SimConfig& c) { c.quota = 0; });
  bad([](SimConfig& c) { c.priority.pop_back(); });
  bad([](SimConfig& c) { c.admm_split = 5; });
  bad([](SimConfig& c) { c.grid_price.min_price = 10; });
  bad([](SimConfig& c) { c.noise_power = 0; });
}

TEST_CASE("harvest price at or above the grid price is a warning") {
  SimConfig c;
  c.harvest_price = 2.0;
  expand_defaults(c);
  CHECK(validate(c).size() == 1);
}

TEST_CASE("priority vector of the wrong length is rejected") {
  auto c = parse("system.devices = 4\n");
  CHECK_NOTHROW(expand_defaults(c));
  CHECK(c.priority.size() == 4);
  CHECK_THROWS_AS(parse("system.devices = 4\ndevices.priority = 1, 2\n"), ConfigError);
}

TEST_CASE("load_config reads the shipped presets") {
  const auto c = load_config(std::string(TSRA_CONFIG_DIR) + "/tableII.cfg");
  const auto q1 = load_config(std::string(TSRA_CONFIG_DIR) + "/tableII_q1.cfg");
  SimConfig d;
  expand_defaults(d);
  auto e = c;
  expand_defaults(e);
  CHECK(to_text(e) == to_text(d));
  CHECK(q1.quota == 1);
  CHECK_THROWS_AS(load_config("/nonexistent/x.cfg"), ConfigError);
}

}
