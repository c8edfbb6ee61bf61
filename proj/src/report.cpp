#include "tsra/report.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <string>

#include "tsra/errors.hpp"

namespace tsra {

namespace {

// Shortest round-trip form, independent of locale and stream state.
std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void put(std::ostream& out, const std::string& field, bool& first) {
  if (!first) out << ',';
  out << field;
  first = false;
}

}  // namespace

void write_slot_csv(std::ostream& out, const RunResult& r) {
  const auto n = static_cast<std::size_t>(r.config.devices);
  bool first = true;
  for (const char* h : {"slot_index", "frame_index", "frame_boundary_flag"}) put(out, h, first);
  const std::pair<const char*, const char*> per_device[] = {
      {"q", "_mbit"}, {"r", "_mbps"}, {"v", "_mbps"}, {"vstar", "_mbps"}, {"u", "_unitless"}, {"c12_ok", "_flag"}};
  for (const auto& [name, unit] : per_device)
    for (std::size_t i = 0; i < n; ++i) put(out, name + std::to_string(i) + unit, first);
  for (const char* h :
       {"energy_j", "purchased_j", "harvested_j", "eh_cap_j", "grid_price_rmb_per_kwh",
        "harvest_price_rmb_per_kwh", "consumed_j", "power_scale_ratio", "channels_used_count",
        "utility_unitless", "energy_cost_rmb", "objective_unitless", "admm_iterations_count",
        "admm_converged_flag", "residual_pri_mbps", "residual_dual_mbps", "match_rounds_count",
        "price_step_unitless", "price_total_unitless"})
    put(out, h, first);
  out << '\n';

  for (const auto& s : r.slots) {
    first = true;
    put(out, std::to_string(s.slot), first);
    put(out, std::to_string(s.frame), first);
    put(out, s.frame_boundary ? "1" : "0", first);
    for (const auto* v : {&s.backlog, &s.rate, &s.service, &s.target, &s.utility})
      for (double x : *v) put(out, num(x), first);
    for (bool ok : s.c12_ok) put(out, ok ? "1" : "0", first);
    int used = 0;
    for (int x : s.assigned.flat()) used += x;
    for (double x : {s.energy, s.purchased, s.harvested, s.eh_cap, s.grid_price * kJoulesPerKwh,
                     s.harvest_price * kJoulesPerKwh, s.consumed, s.power_scale})
      put(out, num(x), first);
    put(out, std::to_string(used), first);
    for (double x : {s.utility_total, s.energy_cost, s.objective}) put(out, num(x), first);
    put(out, std::to_string(s.admm_iterations), first);
    put(out, s.admm_converged ? "1" : "0", first);
    for (double x : {s.residual_pri, s.residual_dual}) put(out, num(x), first);
    put(out, std::to_string(s.match_rounds), first);
    for (double x : {s.price_step, s.price_increments}) put(out, num(x), first);
    out << '\n';
  }
}

void write_frame_csv(std::ostream& out, const RunResult& r) {
  out << "frame_index,first_slot_index,energy_j,eh_cap_j,grid_price_rmb_per_kwh,harvest_price_rmb_per_kwh,"
         "purchased_j,harvested_j,psi_j,d1_j,cost_rmb\n";
  for (const auto& f : r.frames) {
    bool first = true;
    put(out, std::to_string(f.frame), first);
    put(out, std::to_string(f.first_slot), first);
    for (double x : {f.energy, f.eh_cap, f.grid_price * kJoulesPerKwh, f.harvest_price * kJoulesPerKwh,
                     f.purchased, f.harvested, f.psi, f.d1, f.cost})
      put(out, num(x), first);
    out << '\n';
  }
}

void write_summary(std::ostream& out, const Summary& summary) {
  out << nlohmann::json(summary).dump(2) << '\n';
}

Summary read_summary(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
    return j.get<Summary>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed summary: ") + e.what());
  }
}

Summary read_summary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open summary '" + path.string() + "'");
  return read_summary(in);
}

void write_run(const std::filesystem::path& dir, const RunResult& result) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + (dir / name).string() + "'");
    return f;
  };
  {
    auto f = open("slots.csv");
    write_slot_csv(f, result);
  }
  {
    auto f = open("frames.csv");
    write_frame_csv(f, result);
  }
  {
    auto f = open("summary.json");
    write_summary(f, summarize(result));
  }
}

}  // namespace tsra
