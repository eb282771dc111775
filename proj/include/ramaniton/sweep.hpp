#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ramaniton/dynamics.hpp"
#include "ramaniton/model.hpp"

namespace ramaniton {

/// Inclusive grid start, start+step, ... up to stop (within 1e-9 steps).
/// start == stop gives a single point.
std::vector<double> make_grid(double start, double stop, double step);

/// Throws Error(InvalidParameters) unless the grid is nonempty, finite and
/// strictly ascending.
void validate_grid(std::span<const double> grid, std::string_view name);

struct SweepSpec {
  ModelParams base;
  std::vector<double> q_grid;
  double tau = 0.0;
  std::optional<double> phi;  ///< empty: optimal quadrature per point

  void validate() const;
};

struct DispersionRow {
  double q = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega3 = 0.0;
};

std::vector<DispersionRow> sweep_dispersion(const ModelParams& params, std::span<const double> q_grid);

struct SweepRow {
  double q = 0.0;
  double s_db = 0.0;
  double n_stokes = 0.0;
  double n_anti_stokes = 0.0;
  double phi = 0.0;
  std::optional<double> g2;
};

/// Observables at fixed tau across a q grid, one diagonalization per q.
std::vector<SweepRow> sweep_q(const SweepSpec& spec);
std::vector<SweepRow> sweep_q(const ModelParams& params, std::span<const double> q_grid, double tau,
                              std::optional<double> phi);

struct ResonancePoint {
  double tau_star = 0.0;
  double q = 0.0;
  double n_c_min = 0.0;
  double s_db = 0.0;  ///< at the optimal phase
  double phi = 0.0;
  double n_stokes = 0.0;
  double n_anti_stokes = 0.0;
  bool is_global = false;  ///< largest squeezing among the reported nodes
};

inline constexpr double kNodeThreshold = 1e-3;

/// Phonon-occupation nodes of a sampled series computed with `params`.
/// Each sampled local minimum of N_c is refined by golden-section search on
/// its bracketing interval; it is kept when the refined value is at most
/// 1e-3 of the running maximum of N_c up to that point and that maximum is
/// positive. Throws Error(NoResonance) when nothing qualifies.
std::vector<ResonancePoint> find_resonances(const ModelParams& params, std::span<const ObservablePoint> series);

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
};

/// Minimizes f on [lo, hi]: stops after `iterations` steps or once the
/// bracket is narrower than rel_width * |x|.
GoldenResult golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                     int iterations = 60, double rel_width = 1e-6);

struct OptimizeOptions {
  std::size_t q_points = 2001;
  std::size_t tau_points = 281;
  int refinement_rounds = 3;
};

struct GlobalOptimum {
  double q_star = 0.0;
  double tau_star = 0.0;
  double s_db = 0.0;
  double phi = 0.0;
  double coarse_s_db = 0.0;  ///< best value on the coarse grid
};

/// Maximizes S(q, tau) at the optimal phase: exhaustive coarse grid, then
/// alternating golden-section refinement in tau and q. Refinement only
/// accepts improvements, so s_db >= coarse_s_db.
GlobalOptimum optimize_global(const ModelParams& params, std::pair<double, double> q_range,
                              std::pair<double, double> tau_range, const OptimizeOptions& options = {});

}  // namespace ramaniton
