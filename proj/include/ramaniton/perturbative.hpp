#pragma once

#include "ramaniton/model.hpp"

namespace ramaniton {

/// Leading-order Schrieffer-Wolff prediction: the phonon is eliminated and
/// leaves an effective Stokes/anti-Stokes pairing g (b_S^dag b_aS^dag + h.c.).
struct SwPrediction {
  double g_sw = 0.0;            ///< effective pairing, units of Omega
  double squeeze_parameter = 0.0;  ///< r = |g_sw| tau
  double s_db = 0.0;            ///< two-mode squeezed vacuum, optimal quadrature
};

/// eta_+ eta_- / (1 - q). Throws Error(Singularity) for |1 - q| <= 1e-9.
double sw_coupling(const ModelParams& params);

/// (20 / ln 10) |g_sw| tau.
double sw_squeezing_db(const ModelParams& params, double tau);

SwPrediction sw_predict(const ModelParams& params, double tau);

inline constexpr double kResonanceExclusion = 1e-9;

}  // namespace ramaniton
