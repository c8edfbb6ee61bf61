#pragma once

#include <cstdint>
#include <string_view>
#include <optional>
#include <vector>

#include "tsra/config.hpp"
#include "tsra/grid.hpp"

namespace tsra {

enum class ControllerKind { proposed, baseline1_random_channels, baseline2_no_cost, baseline3_oracle_rates };

std::string_view to_string(ControllerKind kind);
/// Accepts the full names and the short forms proposed, baseline1..3.
std::optional<ControllerKind> parse_controller(std::string_view name);

/// Everything observed in one slot. Queue levels are taken at the start of
/// the slot, before the slot's decisions are applied.
struct SlotRecord {
  std::int64_t slot = 0;
  std::int64_t frame = 0;
  bool frame_boundary = false;

  std::vector<double> backlog;    // Q_n, Mbit
  std::vector<double> rate;       // r_n, Mbps
  std::vector<double> service;    // v_n, Mbps
  std::vector<double> target;     // v*_n, Mbps
  std::vector<double> utility;    // U_n
  std::vector<bool> c12_ok;

  Grid<int> assigned;             // x_{n,k}
  Grid<double> power;             // W, after C4 scaling

  double energy = 0.0;            // E, J
  double purchased = 0.0;         // g, J (nonzero only on frame boundaries)
  double harvested = 0.0;         // theta, J
  double eh_cap = 0.0;            // Phi, J
  double grid_price = 0.0;        // RMB/J
  double harvest_price = 0.0;     // RMB/J
  double consumed = 0.0;          // p_c, J
  double power_scale = 1.0;       // < 1 when C4 scaling was active

  double utility_total = 0.0;
  double energy_cost = 0.0;       // RMB
  double objective = 0.0;         // f = sum U - beta cost

  int admm_iterations = 0;
  bool admm_converged = true;
  double residual_pri = 0.0;
  double residual_dual = 0.0;
  int match_rounds = 0;
  double price_step = 0.0;
  double price_increments = 0.0;  // sum of final channel prices
};

struct FrameRecord {
  std::int64_t frame = 0;
  std::int64_t first_slot = 0;
  double energy = 0.0;
  double eh_cap = 0.0;
  double grid_price = 0.0;
  double harvest_price = 0.0;
  double purchased = 0.0;
  double harvested = 0.0;
  double psi = 0.0;
  double d1 = 0.0;
  double cost = 0.0;  // RMB
};

struct RunResult {
  SimConfig config;
  ControllerKind controller = ControllerKind::proposed;
  double beta_used = 0.0;  // beta seen by energy management
  std::vector<SlotRecord> slots;
  std::vector<FrameRecord> frames;
  std::vector<double> final_backlog;
  double final_energy = 0.0;
};

}  // namespace tsra
