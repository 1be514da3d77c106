// levyreg command-line front end.
#include "levyreg/config.hpp"
#include "levyreg/scenario.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

enum Exit { kOk = 0, kConfig = 1, kNumeric = 2, kIo = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw levyreg::IoError("cannot read " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int default_threads() {
  if (const char* env = std::getenv("LEVYREG_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) {
        return n;
      }
    } catch (const std::exception&) {
    }
    throw levyreg::ConfigError(std::string("LEVYREG_THREADS: must be an integer >= 1 (got '") + env + "')");
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levyreg: Levy-driven SDE toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> replicas;
  std::optional<int> threads;

  auto* run = app.add_subcommand("run", "run a scenario and write samples.csv, summary.json, plots/");
  run->add_option("--config", config_path, "configuration file")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--seed", seed, "override the configured seed");
  run->add_option("--replicas", replicas, "override the configured replica count");
  run->add_option("--threads", threads, "worker threads (default: LEVYREG_THREADS or 1)");

  auto* list = app.add_subcommand("list-scenarios", "print the built-in scenarios");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "parse and check a configuration file");
  validate->add_option("--config", validate_path, "configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (list->parsed()) {
      std::cout << levyreg::list_scenarios();
      return kOk;
    }
    if (validate->parsed()) {
      const auto config = levyreg::parse_config(read_file(validate_path));
      std::cout << "ok: scenario " << config.scenario << ", " << config.replicas << " replicas\n";
      return kOk;
    }
    auto config = levyreg::parse_config(read_file(config_path));
    config.output_dir = out_dir;
    if (seed) {
      config.seed = *seed;
    }
    if (replicas) {
      config.replicas = *replicas;
    }
    const int nthreads = threads ? *threads : default_threads();
    const auto summary = levyreg::run_scenario(config, nthreads);
    std::cout << "scenario " << summary.scenario << ": " << summary.replicas << " replicas, " << summary.failures
              << " failed, " << summary.wall_time << " s\n";
    if (summary.diagnostics.contains("pass")) {
      std::cout << "diagnostics: " << (summary.diagnostics["pass"].get<bool>() ? "pass" : "fail") << '\n';
    }
    if (summary.failure_fraction() > config.max_failure_fraction) {
      std::cerr << "error: failure fraction " << summary.failure_fraction() << " exceeds "
                << config.max_failure_fraction << '\n';
      return kNumeric;
    }
    return kOk;
  } catch (const levyreg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const levyreg::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
}
