#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pwave/commands.hpp"
#include "pwave/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"p-wave dilute Fermi gas toolkit"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_dir;
  bool quiet = false;
  app.add_option("-c,--config", config_path, "key = value configuration file");
  app.add_option("--set", overrides, "override a key, key=value (repeatable)")->take_all();
  app.add_option("-o,--output", output_dir, "output directory");
  app.add_flag("-q,--quiet", quiet, "suppress the terminal summary");
  for (const auto& name : pwave::subcommands()) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : pwave::kExitConfig;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  pwave::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = pwave::RunConfig::load(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw pwave::Error(pwave::ErrorCode::ConfigError, "cli", "--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
  } catch (const pwave::Error& e) {
    std::cerr << e.what() << "\n";
    return pwave::kExitConfig;
  }
  pwave::RunOptions opts;
  if (!output_dir.empty()) opts.output_dir = output_dir;
  opts.quiet = quiet;
  return pwave::execute(sub, cfg, opts, std::cout, std::cerr);
}
