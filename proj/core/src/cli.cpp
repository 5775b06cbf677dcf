#include "phs/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <utility>

namespace phs {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + path + ": " + what);
}

const json& require_key(const json& j, const std::string& path,
                        const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing key \"") + key + "\"");
  return *it;
}

double read_real(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Index read_count(const json& j, const std::string& path, Index min_value) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < min_value) {
    fail(path, "must be at least " + std::to_string(min_value));
  }
  return static_cast<Index>(v);
}

/// A complex scalar: either a plain number or a [re, im] pair.
Complex read_complex(const json& j, const std::string& path) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  fail(path, "expected a number or a [re, im] pair");
}

ComplexMatrix read_matrix(const json& j, const std::string& path, Index rows,
                          Index cols) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
    fail(path, "expected an array of " + std::to_string(rows) + " rows");
  }
  ComplexMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      fail(row_path, "expected a row of " + std::to_string(cols) + " entries");
    }
    for (Index c = 0; c < cols; ++c) {
      m(r, c) = read_complex(row[static_cast<std::size_t>(c)],
                             row_path + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

/// Spectral range of the Hermitian parts across all field values; used to
/// derive bounds when the config does not state them.
std::pair<double, double> spectral_range(
    const std::vector<ComplexMatrix>& values) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& v : values) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(v),
                                                    Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
    hi = std::max(hi, es.eigenvalues().maxCoeff());
  }
  return {lo, hi};
}

HamiltonianField read_hamiltonian(const json& j, const std::string& path,
                                  Index d) {
  const json& kind_j = require_key(j, path, "kind");
  if (!kind_j.is_string()) fail(path + ".kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();

  std::vector<ComplexMatrix> values;
  if (kind == "constant") {
    values.push_back(read_matrix(require_key(j, path, "value"),
                                 path + ".value", d, d));
  } else if (kind == "cells") {
    const json& vj = require_key(j, path, "values");
    if (!vj.is_array() || vj.empty()) {
      fail(path + ".values", "expected a non-empty array of matrices");
    }
    for (std::size_t i = 0; i < vj.size(); ++i) {
      values.push_back(read_matrix(
          vj[i], path + ".values[" + std::to_string(i) + "]", d, d));
    }
  } else {
    fail(path + ".kind", "expected \"constant\" or \"cells\"");
  }

  double m, M;
  if (j.contains("m") || j.contains("M")) {
    m = read_real(require_key(j, path, "m"), path + ".m");
    M = read_real(require_key(j, path, "M"), path + ".M");
  } else {
    std::tie(m, M) = spectral_range(values);
  }
  if (!(m > 0.0) || !(m <= M)) {
    fail(path, "spectral bounds must satisfy 0 < m <= M");
  }

  try {
    if (kind == "constant") {
      return HamiltonianField::constant(std::move(values.front()), m, M);
    }
    return HamiltonianField::cells(std::move(values), m, M);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

InitialCondition read_initial(const json& j, const std::string& path,
                              Index d) {
  InitialCondition init;
  const json& kind_j = require_key(j, path, "kind");
  if (!kind_j.is_string()) fail(path + ".kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();
  if (kind == "gaussian") {
    init.kind = InitialCondition::Kind::gaussian;
  } else if (kind == "sine") {
    init.kind = InitialCondition::Kind::sine;
  } else if (kind == "constant") {
    init.kind = InitialCondition::Kind::constant;
  } else {
    fail(path + ".kind", "expected \"gaussian\", \"sine\" or \"constant\"");
  }
  if (j.contains("center")) init.center = read_real(j["center"], path + ".center");
  if (j.contains("width")) {
    init.width = read_real(j["width"], path + ".width");
    if (!(init.width > 0.0)) fail(path + ".width", "must be positive");
  }
  if (j.contains("amplitude")) {
    init.amplitude = read_real(j["amplitude"], path + ".amplitude");
  }
  if (j.contains("mode")) {
    init.mode = static_cast<int>(read_count(j["mode"], path + ".mode", 1));
  }
  if (j.contains("component")) {
    init.component = read_count(j["component"], path + ".component", 0);
    if (init.component >= d) {
      fail(path + ".component", "must be smaller than d");
    }
  }
  return init;
}

SimulationParams read_simulation(const json& j, const std::string& path,
                                 Index d) {
  SimulationParams p;
  p.n = read_count(require_key(j, path, "n"), path + ".n", 8);
  p.dt = read_real(require_key(j, path, "dt"), path + ".dt");
  if (!(p.dt > 0.0)) fail(path + ".dt", "must be positive");
  p.t_final = read_real(require_key(j, path, "T"), path + ".T");
  if (!(p.t_final >= 0.0)) fail(path + ".T", "must be non-negative");
  p.initial = read_initial(require_key(j, path, "initial"), path + ".initial", d);
  return p;
}

// ---------------------------------------------------------------------------
// Record serialization helpers
// ---------------------------------------------------------------------------

json complex_to_json(const Complex& z) {
  return json::array({z.real(), z.imag()});
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json tolerances_to_json(const Tolerances& tol) {
  return json{{"rank_rel", tol.rank_rel},
              {"psd_abs", tol.psd_abs},
              {"eq_abs", tol.eq_abs}};
}

json base_record(const std::string& command, const CliOptions& opt,
                 const SystemConfig& config) {
  json record;
  record["command"] = command;
  record["seed"] = opt.seed;
  record["tolerances"] = tolerances_to_json(opt.tol);
  record["system"] = {{"d", config.system.d},
                      {"interval", {config.system.a, config.system.b}}};
  return record;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

json run_check(const SystemConfig& config, const CliOptions& opt) {
  const PHSystem& sys = config.system;
  const SystemReport report = validate_system(sys, opt.tol);

  json record;
  record["structure"] = {{"p0_skew", report.p0_skew},
                         {"p1_hermitian", report.p1_hermitian},
                         {"p1_invertible", report.p1_invertible},
                         {"h_bounds_ok", report.h_ok}};
  record["w"] = {{"rank_ok", report.w.rank_ok},
                 {"psd_ok", report.w.psd_ok},
                 {"admissible", report.w.admissible()}};

  // The contraction encoded by W, when W1 + W2 is invertible.
  try {
    const ContractionK k = theta(sys.w, opt.tol);
    record["contraction"] = {{"available", true},
                             {"norm", k.norm()},
                             {"matrix", matrix_to_json(k.matrix())}};
  } catch (const std::exception&) {
    record["contraction"] = {{"available", false}};
  }

  const Index n = opt.n.value_or(64);
  record["n"] = n;
  if (report.structure_ok() && report.w.rank_ok) {
    const DiscreteGenerator gen = assemble(sys, n, opt.tol);
    record["margin"] = dissipativity_margin(gen);
  } else {
    record["margin"] = nullptr;
  }
  record["admissible"] = report.ok();
  return record;
}

json run_simulate(const SystemConfig& config, const CliOptions& opt) {
  if (!config.simulation) {
    throw ConfigError(
        "config error at $.simulation: the simulate command requires a "
        "simulation block");
  }
  SimulationParams p = *config.simulation;
  if (opt.n) p.n = *opt.n;
  if (opt.dt) p.dt = *opt.dt;
  if (opt.t_final) p.t_final = *opt.t_final;

  const PHSystem& sys = config.system;
  const DiscreteGenerator gen = assemble(sys, p.n, opt.tol);
  const GridFunction x0 = p.initial.sample(sys.d, gen.grid);
  const Trajectory traj = simulate(gen, x0, p.t_final, p.dt);

  std::vector<std::string> header{"t", "energy", "boundary_power"};
  if (opt.include_state) {
    for (Index i = 0; i < gen.grid.nodes(); ++i) {
      for (Index c = 0; c < sys.d; ++c) {
        const std::string suffix =
            "_n" + std::to_string(i) + "_c" + std::to_string(c);
        header.push_back("re" + suffix);
        header.push_back("im" + suffix);
      }
    }
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(traj.times.size());
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    std::vector<double> row{traj.times[k], traj.energies[k],
                            traj.boundary_powers[k]};
    if (opt.include_state) {
      const ComplexMatrix& v = traj.states[k].values;
      for (Index i = 0; i < v.cols(); ++i) {
        for (Index c = 0; c < v.rows(); ++c) {
          row.push_back(v(c, i).real());
          row.push_back(v(c, i).imag());
        }
      }
    }
    rows.push_back(std::move(row));
  }
  const std::string path = opt.out.value_or("trajectory.csv");
  write_csv(header, rows, path);

  double max_step_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < traj.energies.size(); ++k) {
    max_step_increase =
        std::max(max_step_increase, traj.energies[k + 1] - traj.energies[k]);
  }

  json record;
  record["n"] = p.n;
  record["dt"] = p.dt;
  record["T"] = p.t_final;
  record["margin"] = dissipativity_margin(gen);
  record["projection_defect"] = traj.projection_defect;
  record["energy_initial"] = traj.energies.front();
  record["energy_final"] = traj.energies.back();
  record["max_step_energy_increase"] = max_step_increase;
  record["power_balance_residual"] = power_balance_residual(traj);
  record["csv"] = {{"path", path}, {"rows", rows.size()}};
  return record;
}

json run_spectrum(const SystemConfig& config, const CliOptions& opt) {
  const Index n = opt.n.value_or(
      config.simulation ? config.simulation->n : Index{64});
  const DiscreteGenerator gen = assemble(config.system, n, opt.tol);
  const ComplexVector eigs = spectrum(gen);
  const double margin = dissipativity_margin(gen);

  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(eigs.size()));
  for (Index i = 0; i < eigs.size(); ++i) {
    rows.push_back({eigs(i).real(), eigs(i).imag()});
  }
  const std::string path = opt.out.value_or("spectrum.csv");
  write_csv({"re", "im"}, rows, path);

  json record;
  record["n"] = n;
  record["margin"] = margin;
  record["count"] = eigs.size();
  record["max_re"] = eigs.size() > 0 ? eigs(0).real() : 0.0;
  record["csv"] = {{"path", path}, {"rows", rows.size()}};
  return record;
}

json run_deficiency(const SystemConfig& config, const CliOptions& opt) {
  const Index n = opt.n.value_or(200);
  json record;
  record["n"] = n;
  for (const int eps : {+1, -1}) {
    const DeficiencyBasis basis = deficiency_basis(config.system, eps, n);
    json entry;
    entry["dim"] = basis.dim();
    entry["max_residual"] = basis.dim() > 0 ? basis.residuals.maxCoeff() : 0.0;
    entry["endpoint_matrix"] = matrix_to_json(basis.endpoint_matrix);
    record[eps > 0 ? "plus" : "minus"] = std::move(entry);
  }
  return record;
}

json run_green(const SystemConfig& config, const CliOptions& opt) {
  const PHSystem& sys = config.system;
  const Index n = opt.n.value_or(100);
  const SpatialGrid coarse = sys.grid(n);
  const SpatialGrid fine = sys.grid(2 * n);

  constexpr int kPairs = 8;
  constexpr int kModes = 4;
  Rng rng(opt.seed);
  double res_coarse = 0.0;
  double res_fine = 0.0;
  for (int p = 0; p < kPairs; ++p) {
    // The same pair of smooth fields is sampled on both grids, so the two
    // residuals measure the same continuous quantity at two resolutions.
    const SmoothField fx = random_smooth_field(sys.d, sys.a, sys.b, kModes, rng);
    const SmoothField fy = random_smooth_field(sys.d, sys.a, sys.b, kModes, rng);
    res_coarse = std::max(
        res_coarse,
        green_identity_residual(fx.sample(coarse), fy.sample(coarse), sys));
    res_fine = std::max(
        res_fine,
        green_identity_residual(fx.sample(fine), fy.sample(fine), sys));
  }

  json record;
  record["n_coarse"] = n;
  record["n_fine"] = 2 * n;
  record["pairs"] = kPairs;
  record["residual_coarse"] = res_coarse;
  record["residual_fine"] = res_fine;
  record["ratio"] = res_fine > 0.0 ? res_coarse / res_fine : 0.0;
  return record;
}

}  // namespace

// ===========================================================================
// Public surface
// ===========================================================================

GridFunction InitialCondition::sample(Index d, const SpatialGrid& g) const {
  if (component < 0 || component >= d) {
    throw std::invalid_argument("InitialCondition: component out of range");
  }
  ComplexMatrix values = ComplexMatrix::Zero(d, g.nodes());
  for (Index i = 0; i < g.nodes(); ++i) {
    const double xi = g.node(i);
    double v = 0.0;
    switch (kind) {
      case Kind::gaussian: {
        const double t = (xi - center) / width;
        v = amplitude * std::exp(-0.5 * t * t);
        break;
      }
      case Kind::sine: {
        const double tau = (xi - g.a) / (g.b - g.a);
        v = amplitude *
            std::sin(std::numbers::pi * static_cast<double>(mode) * tau);
        break;
      }
      case Kind::constant:
        v = amplitude;
        break;
    }
    values(component, i) = v;
  }
  return GridFunction(g, std::move(values));
}

SystemConfig parse_config(const std::string& text, const Tolerances& tol) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config error: JSON syntax error at byte " +
                      std::to_string(e.byte) + ": " + e.what());
  }
  const std::string root = "$";
  const Index d = read_count(require_key(doc, root, "d"), "$.d", 1);

  const json& interval = require_key(doc, root, "interval");
  if (!interval.is_array() || interval.size() != 2) {
    fail("$.interval", "expected [a, b]");
  }
  const double a = read_real(interval[0], "$.interval[0]");
  const double b = read_real(interval[1], "$.interval[1]");
  if (!(a < b)) fail("$.interval", "must satisfy a < b");

  const ComplexMatrix p0 =
      read_matrix(require_key(doc, root, "P0"), "$.P0", d, d);
  const ComplexMatrix p1 =
      read_matrix(require_key(doc, root, "P1"), "$.P1", d, d);
  HamiltonianField h =
      read_hamiltonian(require_key(doc, root, "hamiltonian"), "$.hamiltonian", d);
  const ComplexMatrix w =
      read_matrix(require_key(doc, root, "W"), "$.W", d, 2 * d);

  SystemConfig config{
      PHSystem{d, a, b, p0, p1, std::move(h), BoundaryMatrixW(w)},
      std::nullopt};
  if (doc.contains("simulation")) {
    config.simulation = read_simulation(doc["simulation"], "$.simulation", d);
  }
  (void)tol;
  return config;
}

ResultRecord run_command(const std::string& command,
                         const SystemConfig& config, const CliOptions& opt) {
  if (!opt.tol.valid()) {
    throw std::invalid_argument("run_command: tolerances must be positive");
  }
  json record = base_record(command, opt, config);
  if (command == "check") {
    record.update(run_check(config, opt));
  } else if (command == "simulate") {
    record.update(run_simulate(config, opt));
  } else if (command == "spectrum") {
    record.update(run_spectrum(config, opt));
  } else if (command == "deficiency") {
    record.update(run_deficiency(config, opt));
  } else if (command == "green") {
    record.update(run_green(config, opt));
  } else {
    throw std::invalid_argument("run_command: unknown command \"" + command +
                                "\"");
  }
  return record;
}

void write_csv(const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows,
               const std::string& path) {
  if (header.empty()) {
    throw std::invalid_argument("write_csv: header must not be empty");
  }
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw std::invalid_argument("write_csv: rows must match header length");
    }
  }

  std::ofstream out(path, std::ios::binary);  // binary: keep LF endings
  if (!out) {
    throw std::runtime_error("write_csv: cannot open \"" + path +
                             "\" for writing");
  }

  const auto quote = [](const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string quoted = "\"";
    for (const char c : field) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    quoted += '"';
    return quoted;
  };

  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out << ',';
    out << quote(header[i]);
  }
  out << '\n';

  char buffer[64];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      std::snprintf(buffer, sizeof(buffer), "%.17g", row[i]);
      out << buffer;
    }
    out << '\n';
  }
  if (!out) {
    throw std::runtime_error("write_csv: failed writing \"" + path + "\"");
  }
}

}  // namespace phs
