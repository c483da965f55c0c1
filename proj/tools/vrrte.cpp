#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "vrrte/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Steady-state polarized radiative transfer in a stratified column with a refractive interface"};
  std::string config_path, preset, out_dir = "vrrte_out", fresnel, mode, log_level = "info";
  std::vector<std::string> sets;
  bool list_keys = false;
  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--preset", preset, "case1, case2, water_air or custom");
  app.add_option("--set", sets, "override one key, key=value (repeatable)");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--fresnel", fresnel, "interface conditions")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--mode", mode, "iteration mode")->check(CLI::IsMember({"up", "down", "both"}));
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error")->capture_default_str();
  app.add_flag("--list-keys", list_keys, "print the resolved configuration and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));

  vrrte::ScenarioConfig config;
  try {
    vrrte::ConfigEntries entries;
    if (!config_path.empty()) entries = vrrte::read_config_file(config_path);
    for (const auto& s : sets) entries.push_back(vrrte::parse_assignment(s));
    if (!fresnel.empty()) entries.emplace_back("fresnel", fresnel);
    if (!mode.empty()) entries.emplace_back("mode", mode);
    config = vrrte::parse_config(entries, preset.empty() ? std::nullopt : std::optional<std::string>(preset));
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }
  if (list_keys) {
    std::cout << vrrte::describe(config);
    return 0;
  }

  try {
    const auto result = vrrte::run_scenario(config);
    vrrte::write_outputs(result, out_dir);
    for (const auto& run : result.runs)
      std::cout << (run.mode == vrrte::IterationMode::Increasing ? "up" : "down") << ": "
                << (run.converged ? "converged" : "NOT converged") << " after " << run.iterations
                << " iterations, residual " << run.residual << '\n';
    std::cout << "wrote " << out_dir << " in " << result.seconds << " s\n";
    return result.converged() ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
