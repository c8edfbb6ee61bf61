#pragma once

#include <filesystem>
#include <iosfwd>

#include "tsra/metrics.hpp"
#include "tsra/records.hpp"

namespace tsra {

/// One row per slot. Every header names its unit, e.g. `q0_mbit`.
void write_slot_csv(std::ostream& out, const RunResult& result);
/// One row per frame.
void write_frame_csv(std::ostream& out, const RunResult& result);

void write_summary(std::ostream& out, const Summary& summary);
Summary read_summary(std::istream& in);
Summary read_summary(const std::filesystem::path& path);

/// Writes slots.csv, frames.csv and summary.json into `dir`, creating it.
void write_run(const std::filesystem::path& dir, const RunResult& result);

}  // namespace tsra
