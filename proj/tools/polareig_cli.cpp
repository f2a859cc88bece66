// Command-line front end; talks to the library exclusively through the C API.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "polareig.h"

namespace {

int fail_with(pe_status s) {
  std::fprintf(stderr, "error: %s: %s\n", pe_status_name(s), pe_last_error());
  switch (s) {
    case PE_ERR_CONFIG: return 2;
    case PE_ERR_NON_COERCIVE:
    case PE_ERR_SOLVER: return 3;
    default: return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polareig: first-eigenvalue optimization over rearrangement classes"};
  app.set_version_flag("--version", std::string(pe_version()));
  app.require_subcommand(1);

  // run <config>
  std::string run_config, run_out;
  long long run_seed = -1;
  CLI::App* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", run_config, "scenario config file")->required();
  run->add_option("--out", run_out, "output directory (default: <name>_out)");
  run->add_option("--seed", run_seed, "override the config seed");

  // suite
  unsigned long long suite_seed = 2024;
  int suite_counts = 1000;
  CLI::App* suite = app.add_subcommand("suite", "run the randomized property batteries");
  suite->add_option("--seed", suite_seed, "battery seed");
  suite->add_option("--counts", suite_counts, "trials per battery");

  // mask gen <spec>
  CLI::App* mask = app.add_subcommand("mask", "mask utilities");
  std::string gen_spec, gen_out = "mask.txt";
  CLI::App* gen = mask->add_subcommand("gen", "generate a mask file from a domain spec");
  gen->add_option("spec", gen_spec, "config file with the domain keys")->required();
  gen->add_option("--out", gen_out, "output mask file");
  mask->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    int scenario_exit = 0;
    pe_status s = pe_run_scenario(run_config.c_str(), run_out.empty() ? nullptr : run_out.c_str(),
                                  run_seed, &scenario_exit);
    if (s != PE_OK) return fail_with(s);
    if (scenario_exit != 0) {
      std::fprintf(stderr, "scenario checks failed (see report.json)\n");
      return 1;
    }
    return 0;
  }
  if (suite->parsed()) {
    int suite_exit = 0;
    pe_status s = pe_run_suite(suite_seed, suite_counts, &suite_exit);
    if (s != PE_OK) return fail_with(s);
    return suite_exit == 0 ? 0 : 1;
  }
  if (mask->parsed() && gen->parsed()) {
    pe_status s = pe_generate_mask(gen_spec.c_str(), gen_out.c_str());
    if (s != PE_OK) return fail_with(s);
    std::printf("wrote %s\n", gen_out.c_str());
    return 0;
  }
  return 2;
}
