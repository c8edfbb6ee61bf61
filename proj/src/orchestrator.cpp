#include "tsra/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tsra/clock_env.hpp"
#include "tsra/energy_mgmt.hpp"
#include "tsra/errors.hpp"
#include "tsra/matching.hpp"
#include "tsra/metrics.hpp"
#include "tsra/queueing.hpp"
#include "tsra/rate_control.hpp"

namespace tsra {

std::string_view to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::proposed:
      return "proposed";
    case ControllerKind::baseline1_random_channels:
      return "baseline1_random_channels";
    case ControllerKind::baseline2_no_cost:
      return "baseline2_no_cost";
    case ControllerKind::baseline3_oracle_rates:
      return "baseline3_oracle_rates";
  }
  return "unknown";
}

std::optional<ControllerKind> parse_controller(std::string_view name) {
  for (auto kind : {ControllerKind::proposed, ControllerKind::baseline1_random_channels,
                    ControllerKind::baseline2_no_cost, ControllerKind::baseline3_oracle_rates}) {
    auto full = to_string(kind);
    if (name == full || name == full.substr(0, full.find('_'))) return kind;
  }
  return std::nullopt;
}

namespace {

constexpr double kMbps = 1e6;

[[noreturn]] void slot_failure(std::int64_t slot, const std::string& what) {
  throw ContractViolation("slot " + std::to_string(slot) + ": " + what);
}

// Random feasible assignment: channels in random order, each handed to a
// random device that still has quota left.
Grid<int> random_assignment(const SimConfig& c, std::int64_t slot) {
  const auto n = static_cast<std::size_t>(c.devices);
  const auto k = static_cast<std::size_t>(c.channels);
  Grid<int> x(n, k, 0);
  auto engine = stream_engine(c.seed, Stream::baseline, static_cast<std::uint64_t>(slot));
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = k; i > 1; --i) {
    auto j = static_cast<std::size_t>(uniform_open(engine) * static_cast<double>(i));
    std::swap(order[i - 1], order[std::min(j, i - 1)]);
  }
  std::vector<int> held(n, 0);
  for (std::size_t ch : order) {
    std::vector<std::size_t> open;
    for (std::size_t d = 0; d < n; ++d)
      if (held[d] < c.quota) open.push_back(d);
    if (open.empty()) break;
    auto pick = static_cast<std::size_t>(uniform_open(engine) * static_cast<double>(open.size()));
    const std::size_t d = open[std::min(pick, open.size() - 1)];
    x(d, ch) = 1;
    ++held[d];
  }
  return x;
}

}  // namespace

RunResult run(const SimConfig& input, ControllerKind controller) {
  SimConfig c = input;
  expand_defaults(c);
  validate(c);

  const auto n = static_cast<std::size_t>(c.devices);
  const auto k = static_cast<std::size_t>(c.channels);
  const double T0 = c.slot_duration;

  RunResult out;
  out.config = c;
  out.controller = controller;
  out.beta_used = controller == ControllerKind::baseline2_no_cost ? 0.0 : c.beta;
  out.slots.reserve(static_cast<std::size_t>(c.horizon()));
  out.frames.reserve(static_cast<std::size_t>(c.frames));

  std::vector<DataQueue> queues;
  for (std::size_t i = 0; i < n; ++i)
    queues.push_back(make_data_queue(c.data_init, c.priority[i], c.storage_cap));
  EnergyQueue battery{c.energy_init, c.e_max};

  const EnergyParams eparams{c.V, static_cast<double>(c.slots_per_frame), out.beta_used, c.g_max,
                             c.e_max};
  AdmmState admm;
  Clock clock = make_clock(c);

  for (;;) {
    const EnvSample env = sample_env(clock, c);
    SlotRecord rec;
    rec.slot = clock.slot;
    rec.frame = clock.frame();
    rec.frame_boundary = clock.frame_boundary();
    rec.energy = battery.backlog;
    rec.eh_cap = env.eh_cap;
    rec.grid_price = env.grid_price;
    rec.harvest_price = env.harvest_price;
    rec.backlog.resize(n);
    for (std::size_t i = 0; i < n; ++i) rec.backlog[i] = queues[i].backlog;

    // energy management
    if (rec.frame_boundary) {
      const auto d = schedule_energy(battery.backlog, env.eh_cap, env.grid_price, env.harvest_price,
                                     eparams);
      rec.purchased = d.purchased;
      rec.harvested = d.harvested;
      FrameRecord fr;
      fr.frame = rec.frame;
      fr.first_slot = rec.slot;
      fr.energy = battery.backlog;
      fr.eh_cap = env.eh_cap;
      fr.grid_price = env.grid_price;
      fr.harvest_price = env.harvest_price;
      fr.purchased = d.purchased;
      fr.harvested = d.harvested;
      fr.psi = d.psi;
      fr.d1 = d1_value(d.purchased, d.harvested, battery.backlog, env.grid_price,
                       env.harvest_price, eparams);
      fr.cost = env.grid_price * d.purchased + env.harvest_price * d.harvested;
      out.frames.push_back(fr);
    }

    // rate control
    RateProblem rp;
    rp.queue_weight.resize(n);
    rp.utility_weight.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      rp.queue_weight[i] = queues[i].backlog * T0;
      rp.utility_weight[i] = c.V * c.priority[i];
    }
    rp.sum_cap = c.r_max;
    rp.rate_scale = c.utility_rate_scale;
    rp.split = c.split();
    rp.rho = c.admm_rho;
    rp.adaptive_rho = c.admm_adaptive_rho;
    rp.eps_pri = c.admm_eps_pri;
    rp.eps_dual = c.admm_eps_dual;
    rp.max_iter = c.admm_max_iter;
    if (controller == ControllerKind::baseline3_oracle_rates) {
      rec.rate = oracle_rates(rp);
    } else {
      auto sol = solve_rates_admm(rp, admm);
      rec.rate = std::move(sol.rates);
      rec.admm_iterations = sol.iterations;
      rec.admm_converged = sol.converged;
      if (!sol.trace.empty()) {
        rec.residual_pri = sol.trace.back().primal;
        rec.residual_dual = sol.trace.back().dual;
      }
    }
    rec.target.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      rec.target[i] = delay_to_rate(rec.rate[i] * kMbps, c.delay_bound[i]) / kMbps;
    }

    // channel selection and power allocation
    const double headroom = battery.headroom();
    Grid<double> best_power(n, k);
    Grid<double> value(n, k);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        PairInput in{queues[i].backlog, headroom,     env.bandwidth[j], env.gain(i, j),
                     c.noise_power,     T0,           c.p_max(i, j)};
        best_power(i, j) = optimal_power(in);
        value(i, j) = pair_utility(in, best_power(i, j));
      }
    }
    rec.assigned = Grid<int>(n, k, 0);
    if (controller == ControllerKind::baseline1_random_channels) {
      rec.assigned = random_assignment(c, rec.slot);
    } else {
      const double step = default_price_step(value, c.price_step_fraction);
      const Matching m = match(value, c.quota, step);
      for (std::size_t i = 0; i < n; ++i)
        for (int j : m.channels_of[i]) rec.assigned(i, static_cast<std::size_t>(j)) = 1;
      rec.match_rounds = m.rounds;
      rec.price_step = step;
      rec.price_increments = std::accumulate(m.prices.begin(), m.prices.end(), 0.0);
    }
    rec.power = Grid<double>(n, k, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (rec.assigned(i, j)) rec.power(i, j) = best_power(i, j);
    rec.power_scale = enforce_energy_causality(rec.power, battery.backlog, T0);
    auto flat = rec.power.flat();
    rec.consumed = std::accumulate(flat.begin(), flat.end(), 0.0) * T0;
    rec.consumed = std::min(rec.consumed, battery.backlog);

    rec.service.resize(n);
    rec.utility.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> gain_row(env.gain.row(i).begin(), env.gain.row(i).end());
      rec.service[i] =
          shannon_rate(rec.assigned.row(i), rec.power.row(i), gain_row, env.bandwidth, c.noise_power);
      rec.utility[i] = qoe(rec.rate[i], c.priority[i], c.utility_rate_scale);
    }
    rec.c12_ok = check_c12(rec.service, rec.target);

    rec.utility_total = std::accumulate(rec.utility.begin(), rec.utility.end(), 0.0);
    rec.energy_cost = rec.grid_price * rec.purchased + rec.harvest_price * rec.harvested;
    rec.objective = rec.utility_total - c.beta * rec.energy_cost;

    // queue updates
    try {
      for (std::size_t i = 0; i < n; ++i)
        queues[i] = update_data_queue(queues[i], rec.rate[i], rec.service[i], T0);
      battery = update_energy_queue(battery, rec.consumed, rec.purchased, rec.harvested);
    } catch (const ContractViolation& e) {
      slot_failure(rec.slot, e.what());
    }

    out.slots.push_back(std::move(rec));
    if (clock.at_end()) break;
    clock = advance(clock);
  }

  out.final_backlog.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.final_backlog[i] = queues[i].backlog;
  out.final_energy = battery.backlog;

  auto issues = audit(out);
  if (!issues.empty()) {
    const auto& first = issues.front();
    slot_failure(first.slot, first.constraint + " " + first.detail);
  }
  return out;
}

std::vector<AuditIssue> audit(const RunResult& r) {
  const SimConfig& c = r.config;
  const auto n = static_cast<std::size_t>(c.devices);
  const auto k = static_cast<std::size_t>(c.channels);
  const double tol = 1e-9;
  std::vector<AuditIssue> issues;
  auto flag = [&](std::int64_t slot, const char* constraint, double a, double b) {
    std::ostringstream detail;
    detail.precision(17);
    detail << a << " vs " << b;
    issues.push_back({slot, constraint, detail.str()});
  };

  for (const auto& s : r.slots) {
    if (s.harvested < 0 || s.harvested > s.eh_cap + tol) flag(s.slot, "C1", s.harvested, s.eh_cap);
    if (!s.frame_boundary && s.harvested != 0) flag(s.slot, "C1", s.harvested, 0.0);
    if (s.purchased < 0 || s.purchased > c.g_max + tol) flag(s.slot, "C2", s.purchased, c.g_max);
    if (!s.frame_boundary && s.purchased != 0) flag(s.slot, "C2", s.purchased, 0.0);
    const double fill = s.energy + s.purchased + s.harvested;
    if (s.energy < -tol || fill > c.e_max + tol) flag(s.slot, "C3", fill, c.e_max);

    double pc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      int held = 0;
      for (std::size_t j = 0; j < k; ++j) {
        const int x = s.assigned(i, j);
        const double p = s.power(i, j);
        if (x != 0 && x != 1) flag(s.slot, "C6", x, 1);
        if (p < 0 || p > c.p_max(i, j) * (1 + tol)) flag(s.slot, "C5", p, c.p_max(i, j));
        if (!x && p != 0) flag(s.slot, "C5", p, 0.0);
        held += x;
        pc += x * p * c.slot_duration;
      }
      if (held > c.quota) flag(s.slot, "C7", held, c.quota);
    }
    if (pc > s.energy * (1 + tol) + tol) flag(s.slot, "C4", pc, s.energy);
    for (std::size_t j = 0; j < k; ++j) {
      int owners = 0;
      for (std::size_t i = 0; i < n; ++i) owners += s.assigned(i, j);
      if (owners > 1) flag(s.slot, "C8", owners, 1);
    }
    double sum_r = 0.0;
    for (double x : s.rate) {
      if (x < 0) flag(s.slot, "C9", x, 0.0);
      sum_r += x;
    }
    if (sum_r > c.r_max + c.admm_eps_pri + tol) flag(s.slot, "C9", sum_r, c.r_max);
  }
  return issues;
}

double drift_constant_B(int devices, double r_max, double v_max, double slot, double e_max,
                        double g_max, double theta_max) {
  return devices * (r_max * r_max + v_max * v_max) * slot * slot + e_max * e_max +
         (g_max + theta_max) * (g_max + theta_max);
}

bool DriftCheck::all() const { return std::all_of(holds.begin(), holds.end(), [](bool b) { return b; }); }

DriftCheck drift_bound_check(const RunResult& r) {
  const SimConfig& c = r.config;
  const auto n = static_cast<std::size_t>(c.devices);
  const auto T = static_cast<std::size_t>(c.slots_per_frame);
  const double T0 = c.slot_duration;
  const double beta = r.beta_used;

  DriftCheck out;
  for (const auto& s : r.slots)
    for (double v : s.service) out.v_max = std::max(out.v_max, v);
  out.B = drift_constant_B(c.devices, c.r_max, out.v_max, T0, c.e_max, c.g_max, c.eh_max);
  const double gt = c.g_max + c.eh_max;
  const double constant =
      0.5 * (out.B + 0.5 * static_cast<double>(T - 1) * gt * gt) * static_cast<double>(T);

  auto lyapunov = [&](std::span<const double> q, double energy) {
    double acc = 0.0;
    for (double x : q) acc += x * x;
    const double h = c.e_max - energy;
    return 0.5 * (acc + h * h);
  };

  const EnergyParams ep{c.V, static_cast<double>(T), beta, c.g_max, c.e_max};
  for (std::size_t f = 0; f * T < r.slots.size(); ++f) {
    const std::size_t first = f * T;
    const std::size_t last = std::min(first + T, r.slots.size());
    const SlotRecord& s0 = r.slots[first];
    double l_end;
    if (last < r.slots.size()) {
      l_end = lyapunov(r.slots[last].backlog, r.slots[last].energy);
    } else {
      l_end = lyapunov(r.final_backlog, r.final_energy);
    }
    const double l_start = lyapunov(s0.backlog, s0.energy);

    double utility = 0.0;
    double d23 = 0.0;
    for (std::size_t t = first; t < last; ++t) {
      const SlotRecord& s = r.slots[t];
      utility += s.utility_total - beta * s.energy_cost;
      const double headroom = c.e_max - s.energy;
      for (std::size_t i = 0; i < n; ++i) {
        d23 += s.backlog[i] * s.rate[i] * T0 - c.V * s.utility[i];
        d23 -= s.backlog[i] * s.service[i] * T0;
      }
      d23 += headroom * s.consumed;
    }
    const double d1 =
        d1_value(s0.purchased, s0.harvested, s0.energy, s0.grid_price, s0.harvest_price, ep);
    const double lhs = l_end - l_start - c.V * utility;
    const double rhs = constant + d1 + d23;
    out.lhs.push_back(lhs);
    out.rhs.push_back(rhs);
    out.holds.push_back(lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs)));
  }
  return out;
}

std::vector<TradeoffRow> tradeoff_sweep(const SimConfig& config, std::span<const double> v_grid,
                                        ControllerKind controller) {
  require(v_grid.size() >= 3, "tradeoff sweep needs at least three values of V");
  std::vector<TradeoffRow> rows;
  for (double V : v_grid) {
    require(V >= 0, "V must be nonnegative");
    SimConfig c = config;
    c.V = V;
    const RunResult res = run(c, controller);
    TradeoffRow row;
    row.V = V;
    for (const auto& s : res.slots) {
      row.avg_backlog += std::accumulate(s.backlog.begin(), s.backlog.end(), 0.0);
      row.avg_objective += s.objective;
    }
    const auto count = static_cast<double>(res.slots.size());
    row.avg_backlog /= count;
    row.avg_objective /= count;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tsra
