#include "prodint/experiment.hpp"
#include "prodint/version.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Product integrals and Trotter experiments on matrix Lie groups", "prodint"};
  app.set_version_flag("--version", prodint::kVersion);
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run->add_option("config", config, "Path to the config file")->required();
  auto* list = app.add_subcommand("list", "List registered groups, curves, seminorms and schemes");
  auto* selftest = app.add_subcommand("selftest", "Run the built-in trivial-example suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*run) return prodint::run(config, std::cout, std::cerr);
  if (*list) {
    std::cout << prodint::list_registry();
    return 0;
  }
  if (*selftest) return prodint::selftest(std::cout);
  return 1;
}
