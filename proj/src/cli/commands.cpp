#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ramaniton/cli.hpp"
#include "ramaniton/dynamics.hpp"
#include "ramaniton/oracle.hpp"
#include "ramaniton/sweep.hpp"

namespace ramaniton::cli {

namespace {

using Json = nlohmann::ordered_json;

// Flag values as typed; interpreted once the subcommand is known.
struct RawFlags {
  std::string config_file;
  std::string preset;
  std::string format;
  std::string output;
  std::optional<double> omega_ratio, eta, phi, omega_hz, n0, n2, intensity;
  std::string q;
  std::string tau;
  std::string q_range;
  std::string tau_range;
  std::optional<std::size_t> q_points, tau_points, oracle_points;
  std::optional<int> cutoff;
  std::optional<double> max_stokes;
};

double rounded(double value) { return std::stod(format_number(value)); }

Json number_or_null(const std::optional<double>& v) { return v ? Json(rounded(*v)) : Json(nullptr); }

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<std::optional<double>> row) { rows_.push_back(std::move(row)); }

  std::string render(Format format) const {
    std::ostringstream os;
    if (format == Format::Csv) {
      for (std::size_t c = 0; c < columns_.size(); ++c) os << (c ? "," : "") << columns_[c];
      os << '\n';
      for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
          if (c) os << ',';
          if (row[c]) os << format_number(*row[c]);
        }
        os << '\n';
      }
    } else {
      Json rows = Json::array();
      for (const auto& row : rows_) {
        Json obj = Json::object();
        for (std::size_t c = 0; c < row.size(); ++c) obj[columns_[c]] = number_or_null(row[c]);
        rows.push_back(std::move(obj));
      }
      os << rows.dump(2) << '\n';
    }
    return os.str();
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::optional<double>>> rows_;
};

Json deviation_json(const oracle::Deviation& d) {
  Json j = Json::object();
  j["N_S"] = rounded(d.n_stokes);
  j["N_aS"] = rounded(d.n_anti_stokes);
  j["N_c"] = rounded(d.n_phonon);
  j["variance"] = rounded(d.variance);
  j["g2"] = rounded(d.g2);
  j["max"] = rounded(d.max());
  return j;
}

double parse_scalar(const std::string& text, const char* what) {
  const GridSpec g = parse_grid(text);
  if (g.start != g.stop) throw Error(ErrorKind::InvalidConfig, std::string(what) + " takes a single value here");
  return g.start;
}

void apply_preset(RunConfig& config, const std::string& preset) {
  if (preset.empty()) return;
  if (preset == "silicon") {
    config.params = silicon_preset();
    const PhysicalConstants c = silicon_constants();
    config.omega_hz = c.omega / (2.0 * std::numbers::pi);
    config.n0 = c.n0;
    config.n2 = c.n2;
    config.intensity = c.intensity;
  } else if (preset == "verification") {
    config.params = verification_preset();
  } else {
    throw Error(ErrorKind::InvalidConfig, "unknown preset '" + preset + "' (expected silicon or verification)");
  }
}

RunConfig resolve(const std::string& subcommand, const RawFlags& raw) {
  RunConfig config;
  config.subcommand = subcommand;
  if (subcommand == "oracle") config.params = verification_preset();
  apply_preset(config, raw.preset);

  if (!raw.config_file.empty()) {
    std::ifstream in(raw.config_file);
    if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open config file '" + raw.config_file + "'");
    apply_overrides(config, parse_parameter_file(in));
  }

  if (raw.omega_ratio) config.params.omega_ratio = *raw.omega_ratio;
  if (raw.eta) config.params.eta = *raw.eta;
  if (raw.omega_hz) config.omega_hz = raw.omega_hz;
  if (raw.n0) config.n0 = raw.n0;
  if (raw.n2) config.n2 = raw.n2;
  if (raw.intensity) config.intensity = raw.intensity;
  config.phi = raw.phi;
  config.output = raw.output;

  const bool q_is_grid = subcommand == "dispersion" || subcommand == "sweep";
  const bool tau_is_grid = subcommand == "evolve" || subcommand == "oracle";
  if (!raw.q.empty()) {
    if (q_is_grid) {
      config.q_grid = parse_grid(raw.q);
    } else {
      config.params.q = parse_scalar(raw.q, "--q");
    }
  }
  if (!raw.tau.empty()) {
    if (tau_is_grid) {
      config.tau_grid = parse_grid(raw.tau);
    } else {
      config.tau = parse_scalar(raw.tau, "--tau");
    }
  }
  if (!raw.q_range.empty()) config.q_range = parse_range(raw.q_range);
  if (!raw.tau_range.empty()) config.tau_range = parse_range(raw.tau_range);
  if (raw.q_points) config.optimize.q_points = *raw.q_points;
  if (raw.tau_points) config.optimize.tau_points = *raw.tau_points;
  if (raw.cutoff) config.cutoff = *raw.cutoff;
  if (raw.max_stokes) config.max_stokes = *raw.max_stokes;
  if (raw.oracle_points) config.oracle_points = *raw.oracle_points;

  const bool json_default = subcommand == "optimize" || subcommand == "oracle" || subcommand == "kerr-eta";
  if (raw.format.empty()) {
    config.format = json_default ? Format::Json : Format::Csv;
  } else if (raw.format == "csv") {
    config.format = Format::Csv;
  } else if (raw.format == "json") {
    config.format = Format::Json;
  } else {
    throw Error(ErrorKind::InvalidConfig, "--format must be csv or json");
  }
  if (subcommand == "oracle" && config.format != Format::Json) {
    throw Error(ErrorKind::InvalidConfig, "oracle reports are JSON only");
  }
  if (raw.omega_hz && !(*raw.omega_hz > 0)) throw Error(ErrorKind::InvalidConfig, "--omega-hz must be positive");

  config.params.validate();
  return config;
}

struct Outcome {
  Outcome() = default;
  Outcome(std::string rendered) : text(std::move(rendered)) {}

  std::string text;
  int code = kExitOk;
  std::string diagnostic;
};

Outcome cmd_dispersion(const RunConfig& config) {
  Table table({"q", "omega1", "omega2", "omega3"});
  for (const DispersionRow& r : sweep_dispersion(config.params, config.q_grid->values())) {
    table.add({r.q, r.omega1, r.omega2, r.omega3});
  }
  return {table.render(config.format)};
}

Outcome cmd_evolve(const RunConfig& config) {
  const std::vector<double> taus = config.tau_grid->values();
  Table table({"tau", "N_S", "N_aS", "N_c", "S_db", "g2"});
  for (const ObservablePoint& p : evolve_series(config.params, taus, config.phi)) {
    table.add({p.tau, p.n_stokes, p.n_anti_stokes, p.n_phonon, p.s_db, p.g2});
  }
  return {table.render(config.format)};
}

Outcome cmd_sweep(const RunConfig& config) {
  Table table({"q", "S_db", "N_S", "N_aS", "g2"});
  for (const SweepRow& r : sweep_q(config.params, config.q_grid->values(), *config.tau, config.phi)) {
    table.add({r.q, r.s_db, r.n_stokes, r.n_anti_stokes, r.g2});
  }
  return {table.render(config.format)};
}

Outcome cmd_optimize(const RunConfig& config) {
  const GlobalOptimum best = optimize_global(config.params, config.q_range, config.tau_range, config.optimize);
  std::optional<double> length_mm;
  if (config.has_length_scale()) {
    length_mm = 1e3 * dimensionless_length_to_physical(best.tau_star, config.constants());
  }
  if (config.format == Format::Csv) {
    std::vector<std::string> columns{"q_star", "tau_star", "S_db"};
    std::vector<std::optional<double>> row{best.q_star, best.tau_star, best.s_db};
    if (length_mm) {
      columns.push_back("L_mm");
      row.push_back(length_mm);
    }
    Table table(columns);
    table.add(row);
    return {table.render(Format::Csv)};
  }
  Json j = Json::object();
  j["q_star"] = rounded(best.q_star);
  j["tau_star"] = rounded(best.tau_star);
  j["S_db"] = rounded(best.s_db);
  if (length_mm) j["L_mm"] = rounded(*length_mm);
  return {j.dump(2) + "\n"};
}

Outcome cmd_oracle(const RunConfig& config) {
  const std::vector<double> taus = config.tau_grid
                                       ? config.tau_grid->values()
                                       : oracle::verification_window(config.params, config.max_stokes,
                                                                     config.oracle_points);
  const oracle::OracleReport report = oracle::run_comparison(config.params, taus, config.phi, config.cutoff);

  Json j = Json::object();
  j["omega_ratio"] = rounded(report.params.omega_ratio);
  j["eta"] = rounded(report.params.eta);
  j["q"] = rounded(report.params.q);
  j["cutoff"] = report.cutoff;
  j["reference_cutoff"] = 2 * report.cutoff;
  j["points"] = report.points;
  j["tau_min"] = rounded(report.tau_min);
  j["tau_max"] = rounded(report.tau_max);
  j["max_N_S"] = rounded(report.max_stokes);
  j["tolerance"] = oracle::OracleReport::kAgreementTolerance;
  j["doubling_tolerance"] = oracle::kDoublingTolerance;
  j["deviation"] = deviation_json(report.deviation);
  j["reference_deviation"] = deviation_json(report.reference_deviation);
  j["doubling_shift"] = deviation_json(report.doubling_shift);
  j["truncation_adequate"] = report.truncation_adequate;
  j["passed"] = report.passed();
  j["diagnostic"] = report.diagnostic;

  Outcome outcome{j.dump(2) + "\n"};
  if (!report.truncation_adequate) {
    outcome.code = kExitVerification;
    outcome.diagnostic = "truncation inadequate: " + report.diagnostic;
  } else if (!report.passed()) {
    outcome.code = kExitVerification;
    outcome.diagnostic = "Nambu and Fock paths disagree by " + format_number(report.deviation.max());
  }
  return outcome;
}

Outcome cmd_kerr_eta(const RunConfig& config) {
  if (!config.n0 || !config.n2 || !config.intensity) {
    throw Error(ErrorKind::InvalidConfig, "kerr-eta needs n0, n2 and intensity (flags, config file or --preset silicon)");
  }
  const double eta = estimate_eta(config.constants());
  if (config.format == Format::Csv) {
    Table table({"n0", "n2", "intensity", "eta"});
    table.add({*config.n0, *config.n2, *config.intensity, eta});
    return {table.render(Format::Csv)};
  }
  Json j = Json::object();
  j["n0"] = rounded(*config.n0);
  j["n2"] = rounded(*config.n2);
  j["intensity"] = rounded(*config.intensity);
  j["eta"] = rounded(eta);
  return {j.dump(2) + "\n"};
}

void add_common(CLI::App* sub, RawFlags& raw) {
  sub->add_option("--config", raw.config_file, "key = value parameter file (flags take precedence)");
  sub->add_option("--preset", raw.preset, "silicon | verification");
  sub->add_option("--omega-ratio", raw.omega_ratio, "pump over phonon frequency");
  sub->add_option("--eta", raw.eta, "photon-phonon coupling");
  sub->add_option("--omega-hz", raw.omega_hz, "phonon frequency Omega/2pi in Hz");
  sub->add_option("--n0", raw.n0, "linear refractive index");
  sub->add_option("--n2", raw.n2, "nonlinear index in m^2/W");
  sub->add_option("--intensity", raw.intensity, "pump intensity in W/m^2");
  sub->add_option("--format", raw.format, "csv | json");
  sub->add_option("--output,-o", raw.output, "output file (default: stdout)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Raman photon-pair squeezing simulator", "ramaniton"};
  app.require_subcommand(1, 1);
  RawFlags raw;

  auto* dispersion = app.add_subcommand("dispersion", "analytic mode frequencies over a q grid");
  add_common(dispersion, raw);
  dispersion->add_option("--q", raw.q, "q grid start:stop:step")->required();

  auto* evolve = app.add_subcommand("evolve", "observables of the evolved vacuum over a tau grid");
  add_common(evolve, raw);
  evolve->add_option("--q", raw.q, "Raman shift");
  evolve->add_option("--tau", raw.tau, "tau grid start:stop:step")->required();
  evolve->add_option("--phi", raw.phi, "fixed quadrature phase (default: optimal per point)");

  auto* sweep = app.add_subcommand("sweep", "observables at fixed tau over a q grid");
  add_common(sweep, raw);
  sweep->add_option("--q", raw.q, "q grid start:stop:step")->required();
  sweep->add_option("--tau", raw.tau, "propagation time")->required();
  sweep->add_option("--phi", raw.phi, "fixed quadrature phase (default: optimal per point)");

  auto* optimize = app.add_subcommand("optimize", "global squeezing maximum over (q, tau)");
  add_common(optimize, raw);
  optimize->add_option("--q-range", raw.q_range, "lo:hi (default 0.99:1.01)");
  optimize->add_option("--tau-range", raw.tau_range, "lo:hi (default 5000:12000)");
  optimize->add_option("--q-points", raw.q_points, "coarse q grid size (default 2001)");
  optimize->add_option("--tau-points", raw.tau_points, "coarse tau grid size (default 281)");

  auto* oracle_cmd = app.add_subcommand("oracle", "cross-check against truncated Fock-space evolution");
  add_common(oracle_cmd, raw);
  oracle_cmd->add_option("--q", raw.q, "Raman shift");
  oracle_cmd->add_option("--tau", raw.tau, "tau grid (default: window up to --max-ns)");
  oracle_cmd->add_option("--cutoff", raw.cutoff, "Stokes-number cutoff (default 16)");
  oracle_cmd->add_option("--max-ns", raw.max_stokes, "largest N_S in the default window (default 0.75)");
  oracle_cmd->add_option("--points", raw.oracle_points, "points in the default window (default 41)");
  oracle_cmd->add_option("--phi", raw.phi, "fixed quadrature phase (default: optimal per point)");

  auto* kerr = app.add_subcommand("kerr-eta", "coupling estimate from the Kerr nonlinearity");
  add_common(kerr, raw);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const RunConfig config = resolve(name, raw);
    Outcome outcome;
    if (name == "dispersion") {
      outcome = cmd_dispersion(config);
    } else if (name == "evolve") {
      outcome = cmd_evolve(config);
    } else if (name == "sweep") {
      outcome = cmd_sweep(config);
    } else if (name == "optimize") {
      outcome = cmd_optimize(config);
    } else if (name == "oracle") {
      outcome = cmd_oracle(config);
    } else {
      outcome = cmd_kerr_eta(config);
    }

    if (config.output.empty()) {
      out << outcome.text;
    } else {
      std::ofstream file(config.output, std::ios::binary);
      if (!file) throw Error(ErrorKind::InvalidConfig, "cannot write '" + config.output + "'");
      file << outcome.text;
    }
    if (!outcome.diagnostic.empty()) err << name << ": " << outcome.diagnostic << '\n';
    return outcome.code;
  } catch (const Error& e) {
    err << name << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << name << ": " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace ramaniton::cli
