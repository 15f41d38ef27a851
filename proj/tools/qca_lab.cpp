// Command-line front end: verify, classify, weights, solitons, expect,
// certify. Exit codes: 0 success, 1 negative verdict, 2 input error.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "qca/cli.hpp"

namespace {

struct QcaSource {
  std::string registry;
  std::string config_path;

  qca::QcaConfig load() const {
    if (!registry.empty() && !config_path.empty())
      throw std::invalid_argument("pass either --name or --config, not both");
    qca::QcaConfig cfg;
    if (!registry.empty())
      cfg = qca::QcaConfig::from_registry(registry);
    else if (!config_path.empty())
      cfg = qca::QcaConfig::load(config_path);
    else
      throw std::invalid_argument("pass --name <registry entry> or --config <file>");
    qca::cli::print_warnings(cfg, std::cerr);
    return cfg;
  }
};

void add_source_opts(CLI::App* cmd, QcaSource& src) {
  cmd->add_option("--name", src.registry,
                  "built-in QCA (glider, fractal, shift, f, g, double-f, double-g)");
  cmd->add_option("--config", src.config_path, "QCA definition file (.toml or .json)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact toolkit for translationally invariant Clifford QCAs"};
  app.require_subcommand(1);

  QcaSource src;

  auto* verify = app.add_subcommand("verify", "check pseudo-unitarity and invertibility");
  add_source_opts(verify, src);

  long horizon = 16;
  auto* classify = app.add_subcommand("classify", "periodic / glider / fractal-like");
  add_source_opts(classify, src);
  classify->add_option("--horizon", horizon, "search horizon in time steps")
      ->capture_default_str();

  std::string initial = "X0";
  long steps = 100;
  std::string out_path, svg_path;
  auto* weights = app.add_subcommand("weights", "Hamming weight and support trajectory CSV");
  add_source_opts(weights, src);
  weights->add_option("--initial", initial, "initial Pauli string, e.g. X0 or X0*Z2")
      ->capture_default_str();
  weights->add_option("--steps", steps, "number of time steps")->capture_default_str();
  weights->add_option("--out", out_path, "output CSV path")->required();
  weights->add_option("--svg", svg_path, "optional SVG line plot path");

  long n_max = 8;
  long window = 4;
  auto* solitons = app.add_subcommand("solitons", "search for solitons up to a horizon");
  add_source_opts(solitons, src);
  solitons->add_option("--n-max", n_max, "largest period to scan")->capture_default_str();
  solitons->add_option("--window", window, "initial kernel window half-width")
      ->capture_default_str();

  std::string state_str = "p=0,theta=0,phi=0";
  std::string beta_str = "xx:g=0,R=1";
  std::string expect_initials = "X0";
  long expect_steps = 10;
  std::string expect_out;
  auto* expect = app.add_subcommand("expect", "evolved expectation values |omega(beta(P_n))|");
  add_source_opts(expect, src);
  expect->add_option("--state", state_str, "product state, e.g. p=0.1,theta=30,phi=45")
      ->capture_default_str();
  expect->add_option("--beta", beta_str, "coupling, e.g. xx:g=0.7,R=1")
      ->capture_default_str();
  expect->add_option("--initial", expect_initials,
                     "comma-separated initial observables, e.g. X0,Y0,Z0")
      ->capture_default_str();
  expect->add_option("--steps", expect_steps, "number of time steps")->capture_default_str();
  expect->add_option("--out", expect_out, "output CSV path")->required();

  std::string certify_state = "p=0.5";
  int certify_range = 1, certify_n = 1, certify_d = 1;
  auto* certify = app.add_subcommand("certify", "thermalization certificate lambda*C < 1");
  certify->add_option("--state", certify_state, "product state parameters")
      ->capture_default_str();
  certify->add_option("--range", certify_range, "range R of the preparation QCA")
      ->capture_default_str();
  certify->add_option("--cell-qubits", certify_n, "qubits per unit cell N")
      ->capture_default_str();
  certify->add_option("--dims", certify_d, "lattice dimension d")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) return qca::cli::cmd_verify(src.load(), std::cout);
    if (classify->parsed()) return qca::cli::cmd_classify(src.load(), horizon, std::cout);
    if (weights->parsed())
      return qca::cli::cmd_weights(src.load(), initial, steps, out_path, svg_path,
                                   std::cout);
    if (solitons->parsed())
      return qca::cli::cmd_solitons(src.load(), n_max, window, std::cout);
    if (expect->parsed())
      return qca::cli::cmd_expect(src.load(), state_str, beta_str, expect_initials,
                                  expect_steps, expect_out, std::cout);
    if (certify->parsed())
      return qca::cli::cmd_certify(certify_state, certify_range, certify_n,
                                   certify_d, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
