#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "capdens/cli.hpp"
#include "capdens/errors.hpp"
#include "capdens/kernels.hpp"

int main(int argc, char** argv) {
  CLI::App app{"capdens: variational p-capacity and capacity-density experiments on grid graphs"};

  std::string config_path;
  std::string out_dir;
  std::string format;
  int threads = 0;
  long long seed = -1;
  bool verbose = false;
  app.add_option("--config", config_path, "experiment config file (JSON)")->required();
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--format", format, "json|csv|both (overrides config)")
      ->check(CLI::IsMember({"json", "csv", "both"}));
  app.add_option("--threads", threads, "worker thread cap (overrides config)");
  app.add_option("--seed", seed, "seed (overrides config)");
  app.add_flag("--verbose", verbose, "print a run summary to stderr");

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = capdens::parse_config_file(config_path);
    if (!out_dir.empty()) {
      cfg.output.dir = out_dir;
      cfg.echo["output"]["dir"] = out_dir;
    }
    if (!format.empty()) {
      cfg.output.format = format;
      cfg.echo["output"]["format"] = format;
    }
    if (threads > 0) {
      cfg.threads = threads;
      cfg.echo["threads"] = threads;
    }
    if (seed >= 0) {
      cfg.seed = static_cast<uint64_t>(seed);
      cfg.echo["seed"] = cfg.seed;
    }

    if (verbose) {
      std::cerr << "capdens: variant=" << cfg.variant
                << " kernels=" << capdens::kern::backend_name(capdens::kern::active_backend())
                << " threads=" << cfg.threads << "\n";
    }

    const auto report = capdens::run_config(cfg);
    const auto files = capdens::emit_report(report, cfg.output);
    if (verbose) {
      std::cerr << "capdens: done in " << report.wall_seconds << " s\n";
      for (const auto& f : files) std::cerr << "capdens: wrote " << f << "\n";
      for (const auto& w : report.warnings) std::cerr << "capdens: warning: " << w << "\n";
    }
    return 0;
  } catch (const capdens::Error& e) {
    std::cerr << "capdens: error: " << e.what() << "\n";
    switch (e.kind()) {
      case capdens::ErrorKind::config:
        return 1;
      case capdens::ErrorKind::numeric:
        return 2;
      case capdens::ErrorKind::io:
        return 3;
    }
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "capdens: error: " << e.what() << "\n";
    return 2;
  }
}
