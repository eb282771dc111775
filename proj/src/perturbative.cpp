#include "ramaniton/perturbative.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ramaniton/error.hpp"

namespace ramaniton {

double sw_coupling(const ModelParams& params) {
  const Couplings g = derive_couplings(params);
  const double detuning = 1.0 - params.q;
  if (std::abs(detuning) <= kResonanceExclusion) {
    std::ostringstream os;
    os << "perturbative series diverges at the phonon resonance (q=" << params.q << ")";
    throw Error(ErrorKind::Singularity, os.str());
  }
  return g.eta_plus * g.eta_minus / detuning;
}

double sw_squeezing_db(const ModelParams& params, double tau) {
  return sw_predict(params, tau).s_db;
}

SwPrediction sw_predict(const ModelParams& params, double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw Error(ErrorKind::InvalidParameters, "tau must be non-negative");
  SwPrediction out;
  out.g_sw = sw_coupling(params);
  out.squeeze_parameter = std::abs(out.g_sw) * tau;
  // Two-mode squeezed vacuum: optimal quadrature variance scales as e^{-2r}.
  out.s_db = 20.0 / std::numbers::ln10 * out.squeeze_parameter;
  return out;
}

}  // namespace ramaniton
