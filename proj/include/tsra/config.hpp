#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tsra/grid.hpp"

namespace tsra {

// Unit conventions used everywhere in the library:
//   data volume  megabit (Mbit)       rate       megabit per second (Mbps)
//   bandwidth    MHz                  power      watt
//   energy       joule                time       second
//   price        RMB per joule internally, RMB per kWh in configuration files

inline constexpr double kJoulesPerKwh = 3.6e6;

enum class PriceKind { sinusoid, two_tier, constant };

std::string_view to_string(PriceKind kind);

/// Frame-scale grid electricity price, in RMB/kWh.
struct PriceModel {
  PriceKind kind = PriceKind::sinusoid;
  double min_price = 1.8;
  double max_price = 9.0;
  std::int64_t period = 24;  // frames
};

/// Every scenario parameter. Defaults reproduce the reference parameter table;
/// the stochastic-model defaults (fading, harvesting, price period, radio
/// constants) are this library's own choices and are listed in the README.
struct SimConfig {
  // system
  int devices = 5;
  int channels = 12;
  std::int64_t slots_per_frame = 5;
  std::int64_t frames = 200;
  double slot_duration = 1.0;

  // control
  double V = 100.0;
  double beta = 5000.0;
  int quota = 3;

  // devices
  std::vector<double> priority{0.1, 0.15, 0.2, 0.25, 0.3};
  std::vector<double> path_gain;    // large-scale gain per device, defaults to 1e-10
  std::vector<double> delay_bound;  // seconds per device, defaults to 10 us

  // queues
  double data_init = 3.0;      // Mbit per device
  double energy_init = 2.0;    // J
  double storage_cap = 4.0e6;  // Mbit (500 GB)

  // energy
  double g_max = 2.5;
  double e_max = 5.0;
  double eh_max = 2.5;

  // radio
  std::vector<double> bandwidth;  // MHz per channel, defaults to 1
  double noise_power = 1e-13;     // W
  Grid<double> p_max;             // W per (device, channel), defaults to 0.01

  // rate control
  double r_max = 20.0;             // Mbps
  double utility_rate_scale = 1.0; // U = chi * log2(1 + scale * r[Mbps])
  int admm_split = 0;              // 0 selects floor(N/2)
  double admm_rho = 1.0;           // initial penalty when adaptive
  bool admm_adaptive_rho = true;
  double admm_eps_pri = 1e-4;
  double admm_eps_dual = 1e-4;
  int admm_max_iter = 500;

  // matching
  double price_step_fraction = 0.01;

  // exogenous processes
  PriceModel grid_price{};
  double harvest_price = 0.0;  // RMB/kWh
  std::uint64_t seed = 1;

  std::int64_t horizon() const { return slots_per_frame * frames; }
  int split() const { return admm_split > 0 ? admm_split : devices / 2; }
  double eta_per_joule_min() const { return grid_price.min_price / kJoulesPerKwh; }
};

/// Fills per-device and per-channel vectors left empty with their defaults
/// and broadcasts scalars. Idempotent.
void expand_defaults(SimConfig& config);

/// Throws ConfigError on the first violated constraint. Returns warnings for
/// regimes that are legal but outside the closed-form derivation.
std::vector<std::string> validate(const SimConfig& config);

/// Parses `key = value` lines with dotted section names. `#` starts a comment.
/// Errors carry the offending line number.
SimConfig parse_config(std::istream& in, const std::string& source = "<config>");
SimConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(to_text(c)) == c after expand_defaults.
std::string to_text(const SimConfig& config);

}  // namespace tsra
