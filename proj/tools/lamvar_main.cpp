// lamvar: command line front end for the experiment runner.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lamvar/experiment.hpp"

int main(int argc, char** argv) {
  lamvar::ExperimentConfig config;
  std::string levels = "4:10";
  std::string function_path, sequence_path, out_path;

  CLI::App app{"Generalized variation, embedding criteria and extremal witnesses"};
  app.add_option("--command", config.command, "variation | criterion | sharpness | wang-demo | perlman-demo | hardy-demo")
      ->required();
  app.add_option("--function", function_path, "function JSON file");
  app.add_option("--sequence", sequence_path, "weight sequence JSON file");
  app.add_option("--p", config.p, "integrability exponent");
  app.add_option("--alpha", config.alpha, "smoothness exponent");
  app.add_option("--delta-depth", config.delta_depth, "delta grid 2^-j for j = 0..depth");
  app.add_option("--refine", config.refine, "extra grid points per segment for the p-continuity modulus");
  app.add_option("--levels", levels, "witness levels, N or LO:HI");
  app.add_option("--blocks", config.blocks, "last dyadic block of the series");
  app.add_option("--out", out_path, "CSV output path; the summary goes to <out>.json");
  app.add_option("--seed", config.seed, "seed for randomized runs");
  app.add_option("--s", config.s, "exponent of the wang-demo family");
  app.add_option("--terms", config.terms, "length of the perlman-demo sequence");
  app.add_option("--instances", config.instances, "random instances per parameter pair in hardy-demo");
  app.add_option("--h-samples", config.h_samples, "shift grid size for the L^p modulus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lamvar::kExitInvalid;
  }
  if (!function_path.empty()) config.function_path = function_path;
  if (!sequence_path.empty()) config.sequence_path = sequence_path;
  if (!out_path.empty()) config.out_path = out_path;
  try {
    config.levels = lamvar::parse_level_range(levels);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return lamvar::kExitInvalid;
  }

  const auto result = lamvar::run(config);
  try {
    return lamvar::write_outputs(config, result, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
}
