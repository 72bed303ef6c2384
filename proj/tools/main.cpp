#include <string>

#include "CLI11.hpp"
#include "subheat/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite-difference laboratory for degenerate reaction-diffusion "
               "equations on stratified groups"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run = app.add_subcommand(
      "run", "Run one scenario from a key=value config file");
  run->add_option("config", config_path, "Path to the config file")
      ->required();

  subheat::VerifyOptions opts;
  CLI::App* verify = app.add_subcommand(
      "verify", "Certify all closed-form constructions without time stepping");
  verify->add_option("--samples", opts.samples,
                     "Random sweep draws; also caps certificate samples per axis");
  verify->add_option("--seed", opts.seed, "Random sweep seed");
  verify->add_option("--scale-k1", opts.scale_k1,
                     "Scale the exponential barrier constant (fault injection)");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return subheat::run_command(config_path);
  return subheat::verify_command(opts);
}
