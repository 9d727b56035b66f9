#include "freqgate/app/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "freqgate/app/bundle.hpp"
#include "freqgate/app/config.hpp"
#include "freqgate/app/report.hpp"
#include "freqgate/app/scenarios.hpp"

namespace freqgate::app {
namespace {

namespace fs = std::filesystem;

struct RunArgs {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
  bool force = false;
  bool dump_config = false;
};

fs::path resolve_output(const ScenarioConfig& c, const std::string& flag, const std::string& config_text) {
  if (!flag.empty()) return flag;
  if (c.output) return *c.output;
  const char* env = std::getenv(kOutputRootEnv);
  const fs::path root = (env && *env) ? fs::path(env) : fs::path("freqgate-runs");
  return root / (command_name(c.kind) + "-" + hash_label(config_text).substr(8, 12));
}

int run_command(ScenarioKind kind, const RunArgs& args, std::ostream& out, std::ostream& err) {
  ScenarioConfig config;
  try {
    if (!args.config_path.empty()) {
      std::ifstream is(args.config_path, std::ios::binary);
      if (!is) throw ConfigError("cannot open config '" + args.config_path + "'");
      std::ostringstream ss;
      ss << is.rdbuf();
      config = config_from_text(ss.str());
      if (config.kind != kind) {
        throw ConfigError("config describes a '" + to_string(config.kind) + "' scenario, not '" + to_string(kind) + "'");
      }
    } else {
      config = ScenarioConfig::defaults(kind);
    }
    if (args.seed_given) config.apply_seed(args.seed);
    if (args.threads < 0) throw ConfigError("--threads must be >= 0");
    config.validate();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const std::string config_text = serialize(config);
  if (args.dump_config) {
    out << config_text;
    return kExitOk;
  }
  const fs::path target = resolve_output(config, args.out, config_text);
  if (fs::exists(target) && !args.force) {
    err << "runtime error: output path '" << target.string() << "' already exists (use --force to replace a bundle)\n";
    return kExitRuntime;
  }

  try {
    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    RunOutput result = run_scenario(config, args.threads);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    result.files["config.json"] = config_text;
    json hashes = json::object();
    for (const auto& [name, content] : result.files) hashes[name] = hash_label(content);
    const json manifest = {{"version", kVersion},
                           {"scenario", to_string(config.kind)},
                           {"config_hash", hash_label(config_text)},
                           {"seed", config.primary_seed()},
                           {"started_utc", started},
                           {"finished_utc", utc_now()},
                           {"wall_time_s", wall},
                           {"threads", args.threads},
                           {"converged", result.converged},
                           {"summary", result.summary},
                           {"files", hashes}};
    result.files["manifest.json"] = manifest.dump(2) + "\n";
    write_bundle_atomically(target, result.files, args.force);

    out << to_string(config.kind) << ": " << result.summary.dump() << '\n' << "bundle: " << target.string() << '\n';
    if (!result.converged) {
      err << "warning: result did not reach its target (see manifest summary)\n";
      return kExitUnconverged;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frequency-bin gate design and virtual-lab experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  const std::vector<std::pair<ScenarioKind, std::string>> kinds = {
      {ScenarioKind::design, "Optimize an EOM-shaper-EOM cascade for a target gate"},
      {ScenarioKind::characterize, "Reconstruct a hidden multiport from virtual spectrum-analyzer data"},
      {ScenarioKind::guardband, "Collective fidelity of two parallel gates versus separation"},
      {ScenarioKind::visibility, "Monte Carlo photon-counting fringes and visibilities"},
      {ScenarioKind::scaling, "DFT gates for d = 2..max_dim with d - 1 harmonics"},
      {ScenarioKind::bound_check, "Best balanced single-EOM mixers against the d / (2d - 1) ceiling"},
      {ScenarioKind::bessel_check, "Single-tone EOM matrix entries against Bessel functions"}};

  RunArgs args;
  std::vector<std::pair<CLI::App*, ScenarioKind>> subs;
  for (const auto& [kind, help] : kinds) {
    CLI::App* sub = app.add_subcommand(command_name(kind), help);
    sub->add_option("--config", args.config_path, "Scenario config (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, std::string("Bundle directory (default: $") + kOutputRootEnv + "/<scenario>-<hash>)");
    sub->add_option("--seed", args.seed, "Override every seed in the config");
    sub->add_option("--threads", args.threads, "Worker threads, 0 for one per core");
    sub->add_flag("--force", args.force, "Replace an existing bundle at the output path");
    sub->add_flag("--dump-config", args.dump_config, "Print the resolved config and exit");
    subs.emplace_back(sub, kind);
  }

  std::string bundle_dir, report_out;
  CLI::App* rep = app.add_subcommand("report", "Summarize a result bundle next to published values");
  rep->add_option("bundle", bundle_dir, "Bundle directory")->required();
  rep->add_option("--out", report_out, "Directory for plot-ready CSVs (default: <bundle>/report)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (rep->parsed()) {
    try {
      report(bundle_dir, report_out.empty() ? fs::path(bundle_dir) / "report" : fs::path(report_out), out);
      return kExitOk;
    } catch (const BundleError& e) {
      err << "bundle error: " << e.what() << '\n';
      return kExitConfig;
    } catch (const std::exception& e) {
      err << "runtime error: " << e.what() << '\n';
      return kExitRuntime;
    }
  }
  for (const auto& [sub, kind] : subs) {
    if (sub->parsed()) {
      args.seed_given = sub->count("--seed") > 0;
      return run_command(kind, args, out, err);
    }
  }
  return kExitConfig;
}

}  // namespace freqgate::app
