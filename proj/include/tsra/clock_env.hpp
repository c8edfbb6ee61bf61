#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tsra/config.hpp"
#include "tsra/grid.hpp"

namespace tsra {

/// Slot/frame position. Slots and frames are 1-based.
struct Clock {
  std::int64_t slot = 1;
  std::int64_t slots_per_frame = 1;
  std::int64_t frames = 1;
  double slot_duration = 1.0;

  std::int64_t frame() const { return (slot + slots_per_frame - 1) / slots_per_frame; }
  std::int64_t horizon() const { return slots_per_frame * frames; }
  bool frame_boundary() const { return slot % slots_per_frame == 1 % slots_per_frame; }
  bool at_end() const { return slot >= horizon(); }
};

Clock make_clock(const SimConfig& config);

/// Throws ContractViolation when the clock already sits on the last slot.
Clock advance(const Clock& clock);

/// Exogenous state of one slot. Prices are RMB per joule.
struct EnvSample {
  Grid<double> gain;               // linear power gain, device x channel
  double eh_cap = 0.0;             // J available for harvesting this frame
  double grid_price = 0.0;         // eta
  double harvest_price = 0.0;      // kappa
  std::vector<double> bandwidth;   // MHz
};

// Independent random streams derived from the master seed.
enum class Stream : std::uint64_t { fading = 1, harvest = 2, price = 3, baseline = 4 };

/// Engine for (seed, stream, index). Same triple, same sequence.
std::mt19937_64 stream_engine(std::uint64_t seed, Stream stream, std::uint64_t index);

/// Uniform on the open interval (0, 1), built from 53 raw bits so results do
/// not depend on the standard library's distribution implementations.
double uniform_open(std::mt19937_64& engine);
double exponential_unit(std::mt19937_64& engine);

/// Grid price of frame m in RMB/kWh.
double grid_price_kwh(const PriceModel& model, std::int64_t frame, std::uint64_t seed);

/// Pure function of (config, clock): frame-scale quantities depend only on the
/// frame index, gains only on the slot index.
EnvSample sample_env(const Clock& clock, const SimConfig& config);

}  // namespace tsra
