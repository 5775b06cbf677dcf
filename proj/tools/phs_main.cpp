#include "phs/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

namespace {

/// Raw option storage shared by all subcommands (only one runs per
/// invocation).  Presence is checked via option counts so that absent flags
/// leave the config-file values untouched.
struct RawOptions {
  std::string config_path;
  long long n = 0;
  double dt = 0.0;
  double t_final = 0.0;
  std::string out;
  unsigned long long seed = 0;
  phs::Tolerances tol;
  bool include_state = false;
};

void add_common_options(CLI::App* sub, RawOptions* raw) {
  sub->add_option("config", raw->config_path,
                  "Path to a JSON system description")
      ->required();
  sub->add_option("--n", raw->n, "Override the number of grid cells");
  sub->add_option("--dt", raw->dt, "Override the time step");
  sub->add_option("--T", raw->t_final, "Override the final time");
  sub->add_option("--out", raw->out, "Output path for CSV results");
  sub->add_option("--seed", raw->seed, "Seed for randomized diagnostics");
  sub->add_option("--tol-rank-rel", raw->tol.rank_rel,
                  "Relative singular-value cutoff for rank decisions");
  sub->add_option("--tol-psd-abs", raw->tol.psd_abs,
                  "Absolute slack for positive-semidefinite verdicts");
  sub->add_option("--tol-eq-abs", raw->tol.eq_abs,
                  "Absolute slack for equality verdicts");
  sub->add_flag("--state", raw->include_state,
                "Include flattened state columns in trajectory CSV");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Classify boundary conditions of 1-D port-Hamiltonian systems and "
      "simulate them with structure-preserving discretizations"};
  app.require_subcommand(1);

  RawOptions raw;
  add_common_options(
      app.add_subcommand("check",
                         "Validate the system and classify its boundary "
                         "condition matrix"),
      &raw);
  add_common_options(
      app.add_subcommand("simulate",
                         "Run a Crank-Nicolson simulation and write the "
                         "trajectory CSV"),
      &raw);
  add_common_options(
      app.add_subcommand("spectrum",
                         "Write the eigenvalues of the reduced generator"),
      &raw);
  add_common_options(
      app.add_subcommand("deficiency",
                         "Report the +1/-1 boundary-solution bases"),
      &raw);
  add_common_options(
      app.add_subcommand("green",
                         "Measure the boundary pairing residual at two "
                         "resolutions"),
      &raw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit code 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error
  }

  CLI::App* sub = app.get_subcommands().front();

  phs::CliOptions opt;
  if (sub->count("--n") > 0) opt.n = static_cast<phs::Index>(raw.n);
  if (sub->count("--dt") > 0) opt.dt = raw.dt;
  if (sub->count("--T") > 0) opt.t_final = raw.t_final;
  if (sub->count("--out") > 0) opt.out = raw.out;
  opt.seed = raw.seed;
  opt.tol = raw.tol;
  opt.include_state = raw.include_state;

  std::ifstream file(raw.config_path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot read config file \"" << raw.config_path
              << "\"\n";
    return 1;
  }
  const std::string text((std::istreambuf_iterator<char>(file)),
                         std::istreambuf_iterator<char>());

  try {
    const phs::SystemConfig config = phs::parse_config(text, opt.tol);
    const phs::ResultRecord record =
        phs::run_command(sub->get_name(), config, opt);
    std::cout << record.dump(2) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
