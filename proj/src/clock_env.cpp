#include "tsra/clock_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tsra/errors.hpp"

namespace tsra {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Clock make_clock(const SimConfig& config) {
  require(config.slots_per_frame >= 1 && config.frames >= 1, "clock needs T >= 1 and M >= 1");
  return Clock{1, config.slots_per_frame, config.frames, config.slot_duration};
}

Clock advance(const Clock& clock) {
  if (clock.at_end()) throw ContractViolation("advance past the end of the horizon");
  Clock next = clock;
  ++next.slot;
  return next;
}

std::mt19937_64 stream_engine(std::uint64_t seed, Stream stream, std::uint64_t index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  h = splitmix64(h ^ index);
  return std::mt19937_64(h);
}

double uniform_open(std::mt19937_64& engine) {
  return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

double exponential_unit(std::mt19937_64& engine) { return -std::log1p(-uniform_open(engine)); }

double grid_price_kwh(const PriceModel& model, std::int64_t frame, std::uint64_t seed) {
  const double lo = model.min_price;
  const double hi = model.max_price;
  switch (model.kind) {
    case PriceKind::constant:
      return lo;
    case PriceKind::two_tier: {
      const std::int64_t pos = (frame - 1) % model.period;
      return 2 * pos < model.period ? hi : lo;
    }
    case PriceKind::sinusoid: {
      auto engine = stream_engine(seed, Stream::price, 0);
      const double phase = 2 * std::numbers::pi * uniform_open(engine);
      const double angle =
          2 * std::numbers::pi * static_cast<double>(frame - 1) / static_cast<double>(model.period);
      const double unit = 0.5 * (1.0 + std::sin(angle + phase));
      return std::clamp(lo + (hi - lo) * unit, lo, hi);
    }
  }
  return lo;
}

EnvSample sample_env(const Clock& clock, const SimConfig& config) {
  require(clock.slot >= 1 && clock.slot <= clock.horizon(), "clock outside the horizon");
  const auto n = static_cast<std::size_t>(config.devices);
  const auto k = static_cast<std::size_t>(config.channels);
  const auto frame = clock.frame();

  EnvSample env;
  env.gain = Grid<double>(n, k);
  auto fading = stream_engine(config.seed, Stream::fading, static_cast<std::uint64_t>(clock.slot));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j)
      env.gain(i, j) = config.path_gain[i] * exponential_unit(fading);

  auto harvest = stream_engine(config.seed, Stream::harvest, static_cast<std::uint64_t>(frame));
  env.eh_cap = config.eh_max * (static_cast<double>(harvest() >> 11) * 0x1.0p-53);

  env.grid_price = grid_price_kwh(config.grid_price, frame, config.seed) / kJoulesPerKwh;
  env.harvest_price = config.harvest_price / kJoulesPerKwh;
  env.bandwidth = config.bandwidth;
  return env;
}

}  // namespace tsra
