#include "cminject/grid.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

namespace cminject {

namespace {

constexpr const char* kHeader = "freq_hz,amplitude_vpp,u,v,n";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& s, const std::string& name, const std::string& field,
                    int line_no) {
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(begin, &end);
  if (end != begin + s.size() || s.empty() || errno == ERANGE)
    throw GridFormatError(name + ":" + std::to_string(line_no) + ": malformed " + field + " '" +
                              s + "'",
                          line_no);
  return value;
}

std::uint64_t parse_count(const std::string& s, const std::string& name, int line_no) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw GridFormatError(name + ":" + std::to_string(line_no) + ": malformed n '" + s + "'",
                          line_no);
  return value;
}

std::string format_double(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

}  // namespace

SusceptibilityGrid parse_grid(std::istream& in, const std::string& name) {
  SusceptibilityGrid grid;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  std::vector<std::pair<double, double>> keys;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (!line.empty() && line[0] == '#') {
        grid.comments.push_back(line);
        continue;
      }
      if (line != kHeader)
        throw GridFormatError(
            name + ":" + std::to_string(line_no) + ": expected header '" + kHeader + "'",
            line_no);
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 5)
      throw GridFormatError(name + ":" + std::to_string(line_no) + ": expected 5 columns, got " +
                                std::to_string(fields.size()),
                            line_no);
    GridRow row;
    row.freq_hz = parse_double(fields[0], name, "freq_hz", line_no);
    row.amplitude_vpp = parse_double(fields[1], name, "amplitude_vpp", line_no);
    row.u = parse_double(fields[2], name, "u", line_no);
    row.v = parse_double(fields[3], name, "v", line_no);
    row.n = parse_count(fields[4], name, line_no);
    if (!(row.freq_hz > 0.0))
      throw GridFormatError(name + ":" + std::to_string(line_no) + ": freq_hz must be > 0",
                            line_no);
    if (!(row.amplitude_vpp > 0.0))
      throw GridFormatError(
          name + ":" + std::to_string(line_no) + ": amplitude_vpp must be > 0", line_no);
    if (!(row.u >= 0.0 && row.u <= 1.0))
      throw GridFormatError(name + ":" + std::to_string(line_no) + ": u out of range [0, 1]",
                            line_no);
    if (!(row.v >= 0.0 && row.v <= 1.0))
      throw GridFormatError(name + ":" + std::to_string(line_no) + ": v out of range [0, 1]",
                            line_no);
    const std::pair<double, double> key{row.freq_hz, row.amplitude_vpp};
    for (const auto& seen : keys) {
      if (seen == key)
        throw GridFormatError(name + ":" + std::to_string(line_no) +
                                  ": duplicate (freq_hz, amplitude_vpp) key",
                              line_no);
    }
    keys.push_back(key);
    grid.rows.push_back(row);
  }
  if (!header_seen)
    throw GridFormatError(name + ": missing header '" + std::string(kHeader) + "'", line_no);
  return grid;
}

SusceptibilityGrid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GridFormatError(path + ": cannot open", 0);
  return parse_grid(in, path);
}

std::string format_grid(const SusceptibilityGrid& grid) {
  std::ostringstream out;
  for (const auto& c : grid.comments) out << c << '\n';
  out << kHeader << '\n';
  for (const auto& row : grid.rows) {
    out << format_double(row.freq_hz) << ',' << format_double(row.amplitude_vpp) << ','
        << format_double(row.u) << ',' << format_double(row.v) << ',' << row.n << '\n';
  }
  return out.str();
}

void save_grid(const SusceptibilityGrid& grid, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GridFormatError(path + ": cannot open for writing", 0);
  out << format_grid(grid);
}

FeasibleSet grid_to_feasible(const SusceptibilityGrid& grid) {
  FeasibleSet fs;
  fs.pairs.reserve(grid.rows.size() + 1);
  for (const auto& row : grid.rows) {
    FlipPair pair;
    pair.u = row.u;
    pair.v = row.v;
    pair.meta = AttackMeta{row.freq_hz, row.amplitude_vpp};
    fs.pairs.push_back(pair);
  }
  fs.pairs.push_back(send_nothing());
  return fs;
}

}  // namespace cminject
