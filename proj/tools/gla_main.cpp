#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "gla/cli.hpp"

int main(int argc, char** argv) {
  using gla::cli::Invocation;
  CLI::App app{"Maximal-weight lattice animals: sampling, solving, estimation and checks"};
  app.require_subcommand(1);

  Invocation inv;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out, mode;

  std::vector<CLI::App*> subs;
  for (const auto& name : gla::cli::commands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file (or a manifest.json to rerun)");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--out", out, "output root directory");
    sub->add_option("--mode", mode, "exact or heuristic")->check(CLI::IsMember({"exact", "heuristic"}));
    sub->add_option("--jobs", inv.jobs, "worker threads")->check(CLI::Range(1, 1024));
    sub->add_flag("--plot-data", inv.plot_data, "also write (x, y, ci) plot rows");
    if (name == "verify")
      sub->add_option("check", inv.check, "lipschitz, origin, g_le_ln, coverage, concavity, separation or all");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return gla::cli::kBadConfig;
  }

  for (auto* sub : subs) {
    if (!sub->parsed()) continue;
    inv.command = sub->get_name();
    if (sub->count("--seed")) inv.seed = seed;
    if (sub->count("--out")) inv.out = out;
    if (sub->count("--mode")) inv.mode = mode;
  }

  if (!config_path.empty()) {
    std::ifstream is(config_path);
    if (!is) {
      std::cerr << "cannot open config " << config_path << '\n';
      return gla::cli::kBadConfig;
    }
    try {
      inv.config = gla::Json::parse(is);
    } catch (const std::exception& e) {
      std::cerr << "invalid config: " << e.what() << '\n';
      return gla::cli::kBadConfig;
    }
  }

  const auto res = gla::cli::run(inv, std::cout);
  if (res.exit_code == gla::cli::kOk || res.exit_code == gla::cli::kViolated) {
    std::cout << "wrote " << res.out_dir << '\n';
  }
  if (res.exit_code != gla::cli::kOk) std::cerr << res.message << '\n';
  return res.exit_code;
}
