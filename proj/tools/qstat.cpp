#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qstat/cli.hpp"
#include "qstat/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generalized quantum statistics checker"};
  std::string config_path;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::string out_dir = "fock_export";
  app.add_option("--config", config_path, "system configuration file")->required()->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomized checks");
  auto* tol_opt = app.add_option("--tolerance", tolerance, "numerical tolerance");
  app.add_option("--out", out_dir, "output directory for fock-export");
  std::string command;
  std::vector<std::string> args;
  app.add_option("command", command, "subcommand")->required();
  app.add_option("args", args, "subcommand arguments");
  app.footer("commands: check-bicharacter, check-hopf, check-twist, normal-order <expr>, gram <max_degree>,\n"
             "          fock-export <cutoff>, verify-all");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto& known = qstat::cli::commands();
    if (std::find(known.begin(), known.end(), command) == known.end())
      throw qstat::Error(qstat::ErrorCode::unknown_command, "unknown subcommand '" + command + "'");
    std::ifstream in(config_path);
    if (!in) throw qstat::Error(qstat::ErrorCode::io, "cannot read " + config_path);
    std::stringstream text;
    text << in.rdbuf();

    qstat::ConfigOptions opts;
    opts.fock_requested = qstat::cli::needs_fock(command);
    if (*seed_opt) opts.seed = seed;
    if (*tol_opt) opts.tolerance = tolerance;
    qstat::SystemConfig cfg = qstat::parse_config(text.str(), opts);

    qstat::cli::Invocation inv{command, args, out_dir};
    return qstat::cli::run_subcommand(inv, cfg, std::cout);
  } catch (const qstat::Error& e) {
    std::cout << std::flush;
    std::cerr << "error[" << qstat::error_code_name(e.code()) << "]: " << e.what() << '\n';
    return qstat::cli::exit_code(e);
  }
}
