#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "ramaniton/cli.hpp"

namespace ramaniton::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view text, std::string_view what) {
  const std::string_view t = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || end != t.data() + t.size() || !std::isfinite(value)) {
    throw Error(ErrorKind::InvalidConfig, std::string(what) + ": not a finite number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split_colons(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = text.find(':', pos);
    parts.push_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

}  // namespace

GridSpec parse_grid(std::string_view text) {
  const auto parts = split_colons(text);
  GridSpec grid;
  if (parts.size() == 1) {
    grid.start = grid.stop = parse_number(parts[0], "grid");
  } else if (parts.size() == 3) {
    grid.start = parse_number(parts[0], "grid start");
    grid.stop = parse_number(parts[1], "grid stop");
    grid.step = parse_number(parts[2], "grid step");
  } else {
    throw Error(ErrorKind::InvalidConfig, "grid must be start:stop:step or a single value, got '" + std::string(text) + "'");
  }
  if (grid.stop < grid.start) throw Error(ErrorKind::InvalidConfig, "grid stop below start in '" + std::string(text) + "'");
  if (grid.stop > grid.start && !(grid.step > 0)) {
    throw Error(ErrorKind::InvalidConfig, "grid step must be positive in '" + std::string(text) + "'");
  }
  return grid;
}

std::pair<double, double> parse_range(std::string_view text) {
  const auto parts = split_colons(text);
  if (parts.size() != 2) throw Error(ErrorKind::InvalidConfig, "range must be lo:hi, got '" + std::string(text) + "'");
  const double lo = parse_number(parts[0], "range lo");
  const double hi = parse_number(parts[1], "range hi");
  if (hi < lo) throw Error(ErrorKind::InvalidConfig, "range hi below lo in '" + std::string(text) + "'");
  return {lo, hi};
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

PhysicalConstants RunConfig::constants() const {
  PhysicalConstants c;
  if (omega_hz) c.omega = 2.0 * std::numbers::pi * *omega_hz;
  c.n0 = n0.value_or(0.0);
  c.n2 = n2.value_or(0.0);
  c.intensity = intensity.value_or(0.0);
  return c;
}

void apply_overrides(RunConfig& config, const ParameterOverrides& o) {
  if (o.omega_ratio) config.params.omega_ratio = *o.omega_ratio;
  if (o.eta) config.params.eta = *o.eta;
  if (o.q) config.params.q = *o.q;
  if (o.omega_hz) config.omega_hz = o.omega_hz;
  if (o.n0) config.n0 = o.n0;
  if (o.n2) config.n2 = o.n2;
  if (o.intensity) config.intensity = o.intensity;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameters:
    case ErrorKind::InvalidConfig:
    case ErrorKind::DegenerateModes:
    case ErrorKind::Singularity:
      return kExitUsage;
    case ErrorKind::TruncationInadequate:
    case ErrorKind::InternalConsistency:
      return kExitVerification;
    default:
      return kExitFailure;
  }
}

}  // namespace ramaniton::cli
