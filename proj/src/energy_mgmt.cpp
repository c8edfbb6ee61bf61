#include "tsra/energy_mgmt.hpp"

#include <algorithm>

#include "tsra/errors.hpp"

namespace tsra {

EnergyDecision schedule_energy(double energy, double eh_cap, double grid_price,
                               double harvest_price, const EnergyParams& p) {
  require(energy >= 0 && energy <= p.e_max, "battery level outside [0, E_max]");
  require(eh_cap >= 0 && grid_price >= 0 && harvest_price >= 0,
          "harvest cap and prices must be nonnegative");
  const double headroom = p.e_max - energy;
  const double weight = p.V * p.T * p.beta;

  EnergyDecision d;
  d.harvested = weight * harvest_price - headroom < 0 ? std::min(eh_cap, headroom) : 0.0;
  d.psi = weight * grid_price - headroom;
  d.purchased = d.psi < 0 ? std::min(headroom - d.harvested, p.g_max) : 0.0;
  d.purchased = std::max(d.purchased, 0.0);
  require(energy + d.purchased + d.harvested <= p.e_max * (1 + 1e-12),
          "energy schedule overflows the battery");
  return d;
}

double d1_value(double purchased, double harvested, double energy, double grid_price,
                double harvest_price, const EnergyParams& p) {
  const double headroom = p.e_max - energy;
  const double weight = p.V * p.T * p.beta;
  return (weight * grid_price - headroom) * purchased +
         (weight * harvest_price - headroom) * harvested;
}

}  // namespace tsra
