#include "ramaniton/model.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>

#include "ramaniton/error.hpp"

namespace ramaniton {

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorKind::InvalidParameters, what);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

void ModelParams::validate() const {
  if (!std::isfinite(omega_ratio) || omega_ratio <= 0.0) invalid("omega_ratio must be positive and finite");
  if (!std::isfinite(eta) || eta < 0.0) invalid("eta must be finite and non-negative");
  if (!std::isfinite(q) || q < 0.0 || q > omega_ratio) invalid("q must lie in [0, omega_ratio]");
}

Couplings derive_couplings(const ModelParams& params) {
  params.validate();
  const double scale = params.eta / 4.0;
  return {scale * std::sqrt(params.omega_ratio - params.q), scale * std::sqrt(params.omega_ratio + params.q)};
}

void PhysicalConstants::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) invalid("Omega must be positive");
  if (!(n0 > 0.0) || !std::isfinite(n0)) invalid("n0 must be positive");
  if (!(n2 > 0.0) || !std::isfinite(n2)) invalid("n2 must be positive");
  if (!(intensity > 0.0) || !std::isfinite(intensity)) invalid("intensity must be positive");
}

double PhysicalConstants::light_speed() const {
  if (!(n0 > 0.0) || !std::isfinite(n0)) invalid("n0 must be positive");
  return kVacuumLightSpeed / n0;
}

double estimate_eta(const PhysicalConstants& constants) {
  // n2 = 0 and zero intensity are meaningful limits here (no Kerr response).
  if (!(constants.n0 > 0.0)) invalid("n0 must be positive");
  if (!(constants.n2 >= 0.0) || !(constants.intensity >= 0.0)) invalid("n2 and intensity must be non-negative");
  return std::sqrt(8.0 * constants.n2 * constants.intensity / constants.n0);
}

double dimensionless_length_to_physical(double tau, const PhysicalConstants& constants) {
  if (!(tau >= 0.0)) invalid("tau must be non-negative");
  if (!(constants.omega > 0.0)) invalid("Omega must be positive");
  return tau * constants.light_speed() / constants.omega;
}

ModelParams silicon_preset(double q) { return {12.4, 1e-3, q}; }

PhysicalConstants silicon_constants() {
  return {2.0 * std::numbers::pi * 15.6e12, 3.42, 4.5e-18, 1e11};
}

ModelParams verification_preset() { return {12.4, 0.2, 1.0}; }

ParameterOverrides parse_parameter_file(std::istream& in) {
  ParameterOverrides out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    const auto where = "line " + std::to_string(line_no);
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidConfig, where + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string text = trim(line.substr(eq + 1));

    double value = 0.0;
    std::istringstream number(text);
    number >> value;
    if (text.empty() || number.fail() || !number.eof()) {
      throw Error(ErrorKind::InvalidConfig, where + ": malformed number '" + text + "'");
    }

    std::optional<double>* slot = nullptr;
    if (key == "omega_ratio") slot = &out.omega_ratio;
    else if (key == "eta") slot = &out.eta;
    else if (key == "q") slot = &out.q;
    else if (key == "Omega_hz") slot = &out.omega_hz;
    else if (key == "n0") slot = &out.n0;
    else if (key == "n2") slot = &out.n2;
    else if (key == "intensity") slot = &out.intensity;
    else throw Error(ErrorKind::InvalidConfig, where + ": unknown key '" + key + "'");

    if (slot->has_value()) throw Error(ErrorKind::InvalidConfig, where + ": duplicate key '" + key + "'");
    *slot = value;
  }
  return out;
}

}  // namespace ramaniton
