#pragma once

namespace tsra {

struct EnergyParams {
  double V = 0.0;
  double T = 1.0;     // slots per frame
  double beta = 0.0;
  double g_max = 0.0;  // J
  double e_max = 0.0;  // J
};

struct EnergyDecision {
  double harvested = 0.0;  // theta, J
  double purchased = 0.0;  // g, J
  double psi = 0.0;        // V T beta eta - headroom
};

/// Frame-boundary energy schedule. Harvested energy fills the headroom up to
/// the harvest cap, and grid energy tops it up only while the weighted grid
/// price stays below the remaining headroom. Harvesting is skipped when its
/// weighted price reaches the headroom. Prices are per joule.
EnergyDecision schedule_energy(double energy, double eh_cap, double grid_price,
                               double harvest_price, const EnergyParams& params);

/// VT beta eta g - H g + VT beta kappa theta - H theta, with H = E_max - E.
double d1_value(double purchased, double harvested, double energy, double grid_price,
                double harvest_price, const EnergyParams& params);

}  // namespace tsra
