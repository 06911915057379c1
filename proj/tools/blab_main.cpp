#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "blab/error.hpp"
#include "blab/harness.hpp"

namespace {

// 1: a contract check failed, 2: bad configuration or usage, 3: any other error
int run(const std::string& verb, const std::string& what, const std::string& config_path, std::string out,
        int threads, long long seed, bool has_seed) {
  blab::ExperimentConfig cfg = blab::load_config(config_path);
  if (out.empty()) out = cfg.output.empty() ? "out" : cfg.output;
  if (threads >= 0) cfg.threads = threads;
  if (has_seed) cfg.seed = static_cast<std::uint64_t>(seed);

  blab::Report report;
  std::string name = verb;
  if (verb == "kernel") {
    if (!what.empty()) cfg.kernel.type = what;
    report = blab::run_kernel(cfg, out);
    name = "kernel_" + cfg.kernel.type + "_report";
  } else if (verb == "wavelet") {
    if (!what.empty() && what != "build" && what != "check")
      blab::fail(blab::ErrorKind::config, "wavelet takes build or check, not '" + what + "'");
    report = blab::run_wavelet(cfg, out);
  } else if (verb == "norm") {
    report = blab::run_norm(cfg, out);
  } else if (verb == "operator") {
    report = blab::run_operator(cfg, out);
  } else {
    if (!what.empty()) cfg.experiment = what;
    report = blab::run_experiment(cfg);
    name = cfg.experiment;
  }
  const std::string csv = blab::write_report(out, name, report, cfg);
  for (const auto& c : report.checks)
    std::printf("%s %s%s%s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.empty() ? "" : "  ", c.detail.c_str());
  std::printf("wrote %s (%zu rows, %.2f s)\n", csv.c_str(), report.rows.size(), report.runtime_seconds);
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bessel-setting kernels, norms and commutator experiments"};
  app.require_subcommand(1);
  std::string config, out, what;
  int threads = -1;
  long long seed = 0;

  struct Verb {
    const char* name;
    const char* help;
    const char* what_help;
  };
  const Verb verbs[] = {
      {"kernel", "tabulate the heat or Riesz kernel at random points", "heat or riesz (overrides kernel.type)"},
      {"wavelet", "build an Alpert basis and check it", "build or check"},
      {"norm", "oscillation and Besov norms of the configured symbols", nullptr},
      {"operator", "assemble commutators, export matrices and singular values", nullptr},
      {"experiment", "run a configured experiment", "experiment name (overrides the config)"},
  };
  std::vector<CLI::Option*> seed_options;
  for (const auto& v : verbs) {
    auto* sub = app.add_subcommand(v.name, v.help);
    if (v.what_help) sub->add_option("what", what, v.what_help);
    sub->add_option("--config", config, "JSON configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (default: the config's output, else ./out)");
    sub->add_option("--threads", threads, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
    seed_options.push_back(sub->add_option("--seed", seed, "random seed")->check(CLI::NonNegativeNumber));
  }
  CLI11_PARSE(app, argc, argv);

  const std::string verb = app.get_subcommands().front()->get_name();
  bool has_seed = false;
  for (auto* o : seed_options) has_seed = has_seed || o->count() > 0;
  try {
    return run(verb, what, config, out, threads, seed, has_seed);
  } catch (const blab::Error& e) {
    std::fprintf(stderr, "blab: %s error: %s\n", std::string(blab::to_string(e.kind())).c_str(), e.what());
    return e.kind() == blab::ErrorKind::config ? 2 : 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "blab: %s\n", e.what());
    return 3;
  }
}
