#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tsra/config.hpp"
#include "tsra/energy_mgmt.hpp"
#include "tsra/errors.hpp"

using namespace tsra;

namespace {

const EnergyParams kTable{100.0, 5.0, 5000.0, 2.5, 5.0};

double per_joule(double rmb_per_kwh) { return rmb_per_kwh / kJoulesPerKwh; }

}  // namespace

TEST_SUITE("energy_mgmt") {

TEST_CASE("harvest fills the headroom up to the cap") {
  const auto d = schedule_energy(2.0, 10.0, per_joule(1.8), 0.0, kTable);
  CHECK(d.harvested == 3.0);
  CHECK(d.purchased == 0.0);
}

TEST_CASE("without harvest the grid tops up when the weighted price is below the headroom") {
  const double eta = 1e-6;  // V T beta eta = 2.5 < headroom 3
  const auto d = schedule_energy(2.0, 0.0, eta, 0.0, kTable);
  CHECK(d.harvested == 0.0);
  CHECK(d.psi < 0.0);
  CHECK(d.purchased == doctest::Approx(2.5));
  const auto small = schedule_energy(4.0, 0.0, 1e-7, 0.0, kTable);
  CHECK(small.purchased == doctest::Approx(1.0));
}

TEST_CASE("no purchase once psi is nonnegative") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double E = 5.0 * u(rng);
    const double eta = per_joule(1.8 + 7.2 * u(rng)) * 3.0 * u(rng);
    const auto d = schedule_energy(E, 2.5 * u(rng), eta, 0.0, kTable);
    CHECK(d.psi == doctest::Approx(100.0 * 5.0 * 5000.0 * eta - (5.0 - E)));
    if (d.psi >= 0.0) CHECK(d.purchased == 0.0);
  }
}

TEST_CASE("eta sweep matches the brute-force grid minimum of D1") {
  for (double phi : {0.0, 1.0}) {
    for (int i = 0; i <= 60; ++i) {
      const double eta = per_joule(0.1 * i);
      const auto d = schedule_energy(2.0, phi, eta, 0.0, kTable);
      const double ours = d1_value(d.purchased, d.harvested, 2.0, eta, 0.0, kTable);
      const auto grid = oracle::d1_grid_min(2.0, phi, eta, 0.0, 100, 5, 5000, 2.5, 5.0, 1e-3);
      CHECK(ours <= grid.value + 1e-9);
      CHECK(grid.value - ours <= 3.0 * 1e-3 + std::abs(2.5e6 * eta - 3.0) * 1e-3);
    }
  }
}

TEST_CASE("d1 closed form") {
  CHECK(d1_value(0.0, 0.0, 2.0, 1e-6, 0.0, kTable) == 0.0);
  CHECK(d1_value(0.0, 1.0, 2.0, 1e-6, 0.0, kTable) == doctest::Approx(-3.0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double E = 5.0 * u(rng), g = 2.5 * u(rng), th = (5.0 - E) * u(rng);
    const double eta = per_joule(9.0 * u(rng)), kappa = eta * u(rng);
    CHECK(d1_value(g, th, E, eta, kappa, kTable) ==
          doctest::Approx(oracle::d1(g, th, E, eta, kappa, 100, 5, 5000, 5)).epsilon(1e-12));
  }
}

TEST_CASE("random draws respect the harvest cap, grid cap and battery capacity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const double E = 5.0 * u(rng), phi = 2.5 * u(rng);
    const double eta = per_joule(1.8 + 7.2 * u(rng)) * u(rng);
    const auto d = schedule_energy(E, phi, eta, eta * u(rng), kTable);
    CHECK(d.harvested >= 0.0);
    CHECK(d.harvested <= phi);
    CHECK(d.purchased >= 0.0);
    CHECK(d.purchased <= 2.5);
    CHECK(E + d.purchased + d.harvested <= 5.0 + 1e-12);
  }
}

TEST_CASE("harvested energy does not depend on the grid price") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double E = 5.0 * u(rng), phi = 2.5 * u(rng);
    const double a = schedule_energy(E, phi, per_joule(1.8), 0.0, kTable).harvested;
    const double b = schedule_energy(E, phi, per_joule(9.0 * u(rng)), 0.0, kTable).harvested;
    CHECK(a == b);
  }
}

TEST_CASE("decisions do not move with kappa below eta while purchasing is worthwhile") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const double E = 5.0 * u(rng), phi = 2.5 * u(rng);
    const double eta = per_joule(1.8 + 7.2 * u(rng)) * u(rng);
    const auto base = schedule_energy(E, phi, eta, 0.0, kTable);
    if (base.psi >= 0.0) continue;
    ++checked;
    const auto other = schedule_energy(E, phi, eta, eta * u(rng), kTable);
    CHECK(other.harvested == base.harvested);
    CHECK(other.purchased == base.purchased);
  }
  CHECK(checked > 100);
}

TEST_CASE("harvesting stops when its weighted price reaches the headroom") {
  const double kappa = 4.0 / (100.0 * 5.0 * 5000.0);  // weighted price 4 > headroom 3
  const auto d = schedule_energy(2.0, 2.0, 2.0 * kappa, kappa, kTable);
  CHECK(d.harvested == 0.0);
  CHECK(d.purchased == 0.0);
}

TEST_CASE("battery above capacity is rejected") {
  CHECK_THROWS_AS(schedule_energy(5.5, 1.0, 1e-6, 0.0, kTable), ContractViolation);
}

}
