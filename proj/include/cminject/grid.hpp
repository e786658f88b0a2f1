#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cminject/attacker.hpp"

namespace cminject {

/// One measured operating point: an attacking signal and its flip rates.
struct GridRow {
  double freq_hz = 0.0;
  double amplitude_vpp = 0.0;
  double u = 0.0;
  double v = 0.0;
  std::uint64_t n = 0;  // bits measured behind this row
};

/// CSV-backed susceptibility table, columns freq_hz,amplitude_vpp,u,v,n.
/// Leading '#' comment lines are preserved verbatim so a load/save round
/// trip is byte-identical.
struct SusceptibilityGrid {
  std::vector<std::string> comments;
  std::vector<GridRow> rows;
};

struct GridFormatError : std::runtime_error {
  GridFormatError(const std::string& what, int line) : std::runtime_error(what), line(line) {}
  int line;
};

SusceptibilityGrid parse_grid(std::istream& in, const std::string& name);
SusceptibilityGrid load_grid(const std::string& path);
std::string format_grid(const SusceptibilityGrid& grid);
void save_grid(const SusceptibilityGrid& grid, const std::string& path);

/// One FlipPair per row, meta = (freq, amplitude), SendNothing appended.
FeasibleSet grid_to_feasible(const SusceptibilityGrid& grid);

}  // namespace cminject
