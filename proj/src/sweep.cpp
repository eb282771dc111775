#include "ramaniton/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "ramaniton/error.hpp"
#include "ramaniton/nambu.hpp"
#include "ramaniton/parallel.hpp"

namespace ramaniton {

namespace {

ModelParams with_q(ModelParams params, double q) {
  params.q = q;
  params.validate();
  return params;
}

BogoliubovBasis basis_at(const ModelParams& params) { return bogoliubov_basis(params); }

void require_range(std::pair<double, double> range, const char* name) {
  if (!std::isfinite(range.first) || !std::isfinite(range.second) || range.first > range.second) {
    throw Error(ErrorKind::InvalidParameters, std::string(name) + " range must be finite with lo <= hi");
  }
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 1 || lo == hi) return {lo};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = hi;
  return out;
}

}  // namespace

std::vector<double> make_grid(double start, double stop, double step) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) {
    throw Error(ErrorKind::InvalidParameters, "grid bounds and step must be finite");
  }
  if (stop < start) throw Error(ErrorKind::InvalidParameters, "grid stop must not be below start");
  if (start == stop) return {start};
  if (!(step > 0)) throw Error(ErrorKind::InvalidParameters, "grid step must be positive");
  const double span = (stop - start) / step;
  if (span > 1e8) throw Error(ErrorKind::InvalidParameters, "grid has too many points");
  const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = start + static_cast<double>(i) * step;
  return grid;
}

void validate_grid(std::span<const double> grid, std::string_view name) {
  const std::string label(name);
  if (grid.empty()) throw Error(ErrorKind::InvalidParameters, label + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw Error(ErrorKind::InvalidParameters, label + " grid has a non-finite value");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw Error(ErrorKind::InvalidParameters, label + " grid must be strictly ascending");
    }
  }
}

void SweepSpec::validate() const {
  base.validate();
  validate_grid(q_grid, "q");
  for (const double q : q_grid) with_q(base, q);
  if (!std::isfinite(tau) || tau < 0) throw Error(ErrorKind::InvalidParameters, "tau must be finite and >= 0");
  if (phi && !std::isfinite(*phi)) throw Error(ErrorKind::InvalidParameters, "phi must be finite");
}

std::vector<DispersionRow> sweep_dispersion(const ModelParams& params, std::span<const double> q_grid) {
  validate_grid(q_grid, "q");
  std::vector<DispersionRow> rows;
  rows.reserve(q_grid.size());
  for (const double q : q_grid) {
    const Dispersion d = analytic_dispersion(with_q(params, q));
    rows.push_back({q, static_cast<double>(d.omega1), static_cast<double>(d.omega2), static_cast<double>(d.omega3)});
  }
  return rows;
}

std::vector<SweepRow> sweep_q(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepRow> rows(spec.q_grid.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const double q = spec.q_grid[i];
    const ObservablePoint p = observe(basis_at(with_q(spec.base, q)), spec.tau, spec.phi);
    rows[i] = {q, p.s_db, p.n_stokes, p.n_anti_stokes, p.phi, p.g2};
  });
  return rows;
}

std::vector<SweepRow> sweep_q(const ModelParams& params, std::span<const double> q_grid, double tau,
                              std::optional<double> phi) {
  return sweep_q(SweepSpec{params, {q_grid.begin(), q_grid.end()}, tau, phi});
}

GoldenResult golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, int iterations,
                                     double rel_width) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw Error(ErrorKind::InvalidParameters, "golden section needs a finite bracket with lo <= hi");
  }
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < iterations; ++it) {
    if (b - a <= rel_width * std::abs(0.5 * (a + b))) break;
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? GoldenResult{c, fc} : GoldenResult{d, fd};
}

std::vector<ResonancePoint> find_resonances(const ModelParams& params, std::span<const ObservablePoint> series) {
  params.validate();
  if (series.size() < 3) throw Error(ErrorKind::InvalidParameters, "series needs at least 3 points");
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (!(series[i].tau > series[i - 1].tau)) {
      throw Error(ErrorKind::InvalidParameters, "series must be ascending in tau");
    }
  }

  const BogoliubovBasis basis = basis_at(params);
  auto phonons = [&](double tau) { return observe(basis, tau, 0.0).n_phonon; };

  std::vector<ResonancePoint> nodes;
  double running_max = series[0].n_phonon;
  for (std::size_t i = 1; i + 1 < series.size(); ++i) {
    running_max = std::max(running_max, series[i].n_phonon);
    const double here = series[i].n_phonon;
    if (!(here < series[i - 1].n_phonon && here <= series[i + 1].n_phonon)) continue;
    if (!(running_max > 0)) continue;

    GoldenResult refined = golden_section_minimize(phonons, series[i - 1].tau, series[i + 1].tau);
    if (here < refined.value) refined = {series[i].tau, here};
    if (refined.value > kNodeThreshold * running_max) continue;
    if (!nodes.empty() && std::abs(refined.x - nodes.back().tau_star) <= 1e-6 * std::abs(refined.x)) continue;

    const ObservablePoint at = observe(basis, refined.x, std::nullopt);
    nodes.push_back({refined.x, params.q, std::max(refined.value, 0.0), at.s_db, at.phi, at.n_stokes,
                     at.n_anti_stokes, false});
  }

  if (nodes.empty()) {
    std::ostringstream os;
    os << "no phonon-occupation node below " << kNodeThreshold << " of the running maximum in tau ["
       << series.front().tau << ", " << series.back().tau << "]";
    throw Error(ErrorKind::NoResonance, os.str());
  }
  auto best = std::max_element(nodes.begin(), nodes.end(),
                               [](const ResonancePoint& a, const ResonancePoint& b) { return a.s_db < b.s_db; });
  best->is_global = true;
  return nodes;
}

GlobalOptimum optimize_global(const ModelParams& params, std::pair<double, double> q_range,
                              std::pair<double, double> tau_range, const OptimizeOptions& options) {
  params.validate();
  require_range(q_range, "q");
  require_range(tau_range, "tau");
  if (tau_range.first < 0) throw Error(ErrorKind::InvalidParameters, "tau range must be >= 0");
  if (options.q_points == 0 || options.tau_points == 0) {
    throw Error(ErrorKind::InvalidParameters, "optimizer grids need at least one point");
  }
  with_q(params, q_range.first);
  with_q(params, q_range.second);

  const std::vector<double> qs = linspace(q_range.first, q_range.second, options.q_points);
  const std::vector<double> taus = linspace(tau_range.first, tau_range.second, options.tau_points);

  struct Best {
    std::size_t tau_index = 0;
    double s_db = 0.0;
  };
  std::vector<Best> per_q(qs.size());
  parallel_for(qs.size(), [&](std::size_t i) {
    const BogoliubovBasis basis = basis_at(with_q(params, qs[i]));
    Best best{0, observe(basis, taus[0], std::nullopt).s_db};
    for (std::size_t j = 1; j < taus.size(); ++j) {
      const double s = observe(basis, taus[j], std::nullopt).s_db;
      if (s > best.s_db) best = {j, s};
    }
    per_q[i] = best;
  });

  std::size_t qi = 0;
  for (std::size_t i = 1; i < qs.size(); ++i) {
    if (per_q[i].s_db > per_q[qi].s_db) qi = i;
  }

  GlobalOptimum result;
  result.q_star = qs[qi];
  result.tau_star = taus[per_q[qi].tau_index];
  result.coarse_s_db = per_q[qi].s_db;
  result.s_db = result.coarse_s_db;

  const double dq = qs.size() > 1 ? qs[1] - qs[0] : 0.0;
  const double dtau = taus.size() > 1 ? taus[1] - taus[0] : 0.0;
  for (int round = 0; round < options.refinement_rounds; ++round) {
    if (dtau > 0) {
      const BogoliubovBasis basis = basis_at(with_q(params, result.q_star));
      const GoldenResult r = golden_section_minimize(
          [&](double tau) { return -observe(basis, tau, std::nullopt).s_db; },
          std::max(tau_range.first, result.tau_star - dtau), std::min(tau_range.second, result.tau_star + dtau));
      if (-r.value > result.s_db) {
        result.tau_star = r.x;
        result.s_db = -r.value;
      }
    }
    if (dq > 0) {
      const double tau = result.tau_star;
      const GoldenResult r = golden_section_minimize(
          [&](double q) { return -observe(basis_at(with_q(params, q)), tau, std::nullopt).s_db; },
          std::max(q_range.first, result.q_star - dq), std::min(q_range.second, result.q_star + dq));
      if (-r.value > result.s_db) {
        result.q_star = r.x;
        result.s_db = -r.value;
      }
    }
  }

  result.phi = observe(basis_at(with_q(params, result.q_star)), result.tau_star, std::nullopt).phi;
  return result;
}

}  // namespace ramaniton
