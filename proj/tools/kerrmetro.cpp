// Command-line driver for the named experiments.

#include "kerr/errors.hpp"
#include "kerr/harness/config.hpp"
#include "kerr/harness/emit.hpp"
#include "kerr/harness/experiments.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw kerr::ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace kerr::harness;

  CLI::App app{"Displacement-sensing figures of merit for a squeezed Kerr oscillator"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_path;
  std::string format;
  std::string dim;
  int threads = 1;
  bool with_k3 = false;

  for (const char* name : {"fig1", "fig2", "fig3", "scaling", "loss-robustness",
                           "custom", "wigner"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name +
                                                 " experiment");
    sub->add_option("--config", config_path, "key = value config file")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output file");
    sub->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--dim", dim, "Fock dimension or 'auto'");
    sub->add_option("--threads", threads, "worker threads")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--with-k3", with_k3, "also compute third-order moments");
  }
  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const Experiment experiment = *experiment_from_string(name);
    ExperimentConfig cfg = config_path.empty()
                               ? defaults_for(experiment)
                               : parse_config(read_file(config_path), experiment);
    if (!format.empty()) cfg.format = *format_from_string(format);
    if (!dim.empty()) {
      if (dim == "auto") {
        cfg.dim.reset();
      } else {
        try {
          cfg.dim = std::stoi(dim);
        } catch (const std::exception&) {
          throw kerr::ConfigError("--dim expects an integer or 'auto'");
        }
        if (*cfg.dim < 2) throw kerr::ConfigError("--dim must be >= 2");
      }
    }
    if (with_k3) cfg.with_k3 = true;
    if (!out_path.empty()) cfg.output = out_path;
    if (cfg.output.empty()) {
      cfg.output = name + (cfg.experiment == Experiment::Wigner
                               ? std::string(".json")
                               : "." + std::string(to_string(cfg.format)));
    }

    RunOptions opts;
    opts.threads = threads;
    const ExperimentOutput result = run_experiment(cfg, opts);
    for (const auto& p : emit(result, cfg.output, cfg.format, cfg.experiment)) {
      std::cerr << "wrote " << p.string() << '\n';
    }
  } catch (const kerr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
