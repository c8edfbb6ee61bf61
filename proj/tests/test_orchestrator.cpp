#include <doctest.h>

#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "tsra/errors.hpp"
#include "tsra/metrics.hpp"
#include "tsra/orchestrator.hpp"
#include "tsra/rate_control.hpp"
#include "tsra/report.hpp"

using namespace tsra;

namespace {

SimConfig short_run(std::int64_t frames = 20, std::uint64_t seed = 1) {
  SimConfig c;
  c.frames = frames;
  c.seed = seed;
  expand_defaults(c);
  return c;
}

std::string slot_csv(const RunResult& r) {
  std::ostringstream os;
  write_slot_csv(os, r);
  return os.str();
}

}  // namespace

TEST_SUITE("orchestrator") {

TEST_CASE("record counts and constraint audit on the default horizon") {
  const auto c = short_run(200);
  const auto r = run(c, ControllerKind::proposed);
  CHECK(r.slots.size() == 1000);
  CHECK(r.frames.size() == 200);
  CHECK(audit(r).empty());
  for (std::size_t t = 0; t < r.slots.size(); ++t) CHECK(r.slots[t].slot == static_cast<std::int64_t>(t) + 1);
}

TEST_CASE("degenerate horizon with empty queues and prohibitive prices") {
  SimConfig c;
  c.frames = 1;
  c.slots_per_frame = 1;
  c.eh_max = 0.0;
  c.data_init = 0.0;
  c.grid_price = {PriceKind::constant, 1e9, 1e9, 1};
  expand_defaults(c);
  const auto r = run(c, ControllerKind::proposed);
  REQUIRE(r.slots.size() == 1);
  const auto& s = r.slots[0];
  CHECK(s.purchased == 0.0);
  CHECK(s.harvested == 0.0);
  RateProblem p;
  p.queue_weight.assign(5, 0.0);
  for (double chi : c.priority) p.utility_weight.push_back(c.V * chi);
  p.sum_cap = c.r_max;
  const auto ref = oracle_rates(p);
  for (std::size_t i = 0; i < 5; ++i) CHECK(s.rate[i] == doctest::Approx(ref[i]).epsilon(1e-3));
  for (int x : s.assigned.flat()) CHECK(x == 0);
  CHECK(s.consumed == 0.0);
}

TEST_CASE("identical seeds give identical trajectories") {
  const auto c = short_run();
  CHECK(slot_csv(run(c, ControllerKind::proposed)) == slot_csv(run(c, ControllerKind::proposed)));
  const auto other = short_run(20, 2);
  CHECK(slot_csv(run(c, ControllerKind::proposed)) != slot_csv(run(other, ControllerKind::proposed)));
}

TEST_CASE("energy is only bought and harvested on frame boundaries") {
  const auto r = run(short_run(), ControllerKind::proposed);
  for (const auto& s : r.slots) {
    if (!s.frame_boundary) {
      CHECK(s.purchased == 0.0);
      CHECK(s.harvested == 0.0);
    }
  }
}

TEST_CASE("zero beta makes the proposed controller identical to baseline2") {
  auto c = short_run();
  c.beta = 0.0;
  CHECK(slot_csv(run(c, ControllerKind::proposed)) == slot_csv(run(c, ControllerKind::baseline2_no_cost)));
}

TEST_CASE("proposed rates stay within the ADMM gap of the KKT rates") {
  const auto c = short_run(50);
  const auto r = run(c, ControllerKind::proposed);
  for (const auto& s : r.slots) {
    std::vector<double> a, b;
    for (std::size_t i = 0; i < 5; ++i) {
      a.push_back(s.backlog[i] * c.slot_duration);
      b.push_back(c.V * c.priority[i]);
    }
    const auto ref = oracle::kkt_rates(a, b, c.r_max, c.utility_rate_scale);
    const double ours = oracle::rate_objective(a, b, s.rate, c.utility_rate_scale);
    const double best = oracle::rate_objective(a, b, ref, c.utility_rate_scale);
    CHECK(std::abs(ours - best) <= 1e-2 * std::abs(best));
  }
  const auto b3 = summarize(run(c, ControllerKind::baseline3_oracle_rates));
  CHECK(summarize(r).avg_qoe == doctest::Approx(b3.avg_qoe).epsilon(1e-2));
}

TEST_CASE("random channels respect quota and uniqueness") {
  auto c = short_run();
  c.quota = 1;
  const auto r = run(c, ControllerKind::baseline1_random_channels);
  CHECK(audit(r).empty());
  std::size_t assigned = 0;
  for (const auto& s : r.slots)
    for (int x : s.assigned.flat()) assigned += static_cast<std::size_t>(x);
  CHECK(assigned == 5 * r.slots.size());
}

TEST_CASE("the audit catches tampered records") {
  auto r = run(short_run(2), ControllerKind::proposed);
  auto bad = r;
  bad.slots[3].assigned(0, 0) = 1;
  bad.slots[3].assigned(1, 0) = 1;
  bool c8 = false;
  for (const auto& issue : audit(bad)) c8 = c8 || (issue.constraint == "C8" && issue.slot == 4);
  CHECK(c8);
  auto over = r;
  over.slots[0].purchased = 10.0;
  CHECK_FALSE(audit(over).empty());
  auto rates = r;
  rates.slots[1].rate[0] = 100.0;
  CHECK_FALSE(audit(rates).empty());
}

TEST_CASE("drift constant by direct substitution") {
  const double B = drift_constant_B(5, 20.0, 7.0, 1.0, 5.0, 2.5, 2.5);
  CHECK(B == doctest::Approx(5.0 * (400.0 + 49.0) + 25.0 + 25.0));
}

TEST_CASE("drift bound holds on every frame of a default run") {
  const auto check = drift_bound_check(run(short_run(200, 3), ControllerKind::proposed));
  CHECK(check.holds.size() == 200);
  CHECK(check.all());
  CHECK(check.v_max > 0.0);
}

TEST_CASE("tradeoff sweep") {
  const auto c = short_run(40);
  const double single[] = {100.0};
  CHECK_THROWS_AS(tradeoff_sweep(c, single), ContractViolation);
  const double grid[] = {0.0, 10.0, 1000.0};
  const auto rows = tradeoff_sweep(c, grid);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].avg_backlog <= rows[2].avg_backlog);
}

TEST_CASE("V = 0 ignores utility and only stabilises queues") {
  auto c = short_run(10);
  c.V = 0.0;
  const auto r = run(c, ControllerKind::proposed);
  for (const auto& s : r.slots)
    for (double x : s.rate) CHECK(x == 0.0);
}

TEST_CASE("invalid configurations are rejected before running") {
  auto c = short_run();
  c.e_max = -5.0;
  CHECK_THROWS_AS(run(c, ControllerKind::proposed), ConfigError);
}

}
