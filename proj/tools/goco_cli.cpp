// Command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "goco/goco.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int report_failure(goco_status st) {
  std::fprintf(stderr, "error (%s): %s\n", goco_status_string(st), goco_last_error());
  return 2;
}

std::string config_text(const std::string& path, const std::string& preset) {
  if (preset.empty()) return read_file(path);
  char* text = nullptr;
  const goco_status st = goco_builtin_config(preset.c_str(), &text);
  if (st != GOCO_OK) throw std::runtime_error(goco_last_error());
  std::string out(text);
  goco_string_free(text);
  return out;
}

void check_callback(const char* name, int passed, const char* detail, void* user) {
  auto* counts = static_cast<std::pair<int, int>*>(user);
  ++(passed ? counts->first : counts->second);
  std::printf("%s  %s  [%s]\n", passed ? "PASS" : "FAIL", name, detail);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projection-free online convex optimization with membership oracles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(goco_version()));

  std::string config_path;
  std::string preset;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool full_scan = false;

  CLI::App* run = app.add_subcommand("run", "Run one experiment and write its CSV and summary JSON");
  auto* run_cfg = run->add_option("--config", config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
  auto* run_preset = run->add_option("--preset", preset, "Built-in config: negative_control or smoke");
  run_cfg->excludes(run_preset);
  auto* seed_opt = run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_dir, "Output directory (default: config output.dir, else .)");
  run->add_flag("--full-interval-scan", full_scan, "Scan every interval instead of the dyadic grid (T <= 2000)");

  std::vector<int> horizons;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a config at several horizons and fit the regret slope");
  sweep->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--horizons", horizons, "Comma-separated horizons, e.g. 100,1000,10000")
      ->required()
      ->delimiter(',');
  auto* sweep_seed = sweep->add_option("--seed", seed, "Override the config seed");
  sweep->add_option("--out", out_dir, "Output directory");

  std::uint64_t verify_seed = 20240601;
  CLI::App* verify = app.add_subcommand("verify", "Run the invariant and property suite");
  verify->add_option("--seed", verify_seed, "Seed for the sampled checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (config_path.empty() && preset.empty()) throw std::runtime_error("run needs --config or --preset");
      const std::string text = config_text(config_path, preset);
      goco_run_options opts{};
      opts.has_seed = seed_opt->count() > 0;
      opts.seed = seed;
      opts.out_dir = out_dir.empty() ? nullptr : out_dir.c_str();
      opts.full_interval_scan = full_scan ? 1 : 0;
      opts.write_artifacts = 1;
      goco_report* report = nullptr;
      const goco_status st = goco_run(text.c_str(), &opts, &report);
      if (st != GOCO_OK) return report_failure(st);
      int T = 0, s = 0, e = 0;
      double regret = 0.0, worst = 0.0;
      std::uint64_t calls = 0;
      goco_report_horizon(report, &T);
      goco_report_cumulative_regret(report, &regret);
      goco_report_worst_interval(report, &s, &e, &worst);
      goco_report_total_calls(report, &calls);
      std::printf("T=%d  cumulative regret %.6g  worst interval [%d, %d] regret %.6g  membership calls %llu\n", T,
                  regret, s, e, worst, static_cast<unsigned long long>(calls));
      goco_report_free(report);
      return 0;
    }
    if (sweep->parsed()) {
      const std::string text = read_file(config_path);
      goco_run_options opts{};
      opts.has_seed = sweep_seed->count() > 0;
      opts.seed = seed;
      opts.out_dir = out_dir.empty() ? nullptr : out_dir.c_str();
      opts.write_artifacts = 1;
      char* summary = nullptr;
      const goco_status st = goco_sweep(text.c_str(), horizons.data(), horizons.size(), &opts, &summary);
      if (st != GOCO_OK) return report_failure(st);
      const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(out_dir);
      std::filesystem::create_directories(dir);
      std::ofstream(dir / "sweep.summary.json", std::ios::binary) << summary << "\n";
      std::printf("%s\n", summary);
      goco_string_free(summary);
      return 0;
    }
    if (verify->parsed()) {
      std::pair<int, int> counts{0, 0};
      int failures = 0;
      const goco_status st = goco_verify(verify_seed, check_callback, &counts, &failures);
      if (st != GOCO_OK) return report_failure(st);
      std::printf("%d passed, %d failed\n", counts.first, counts.second);
      return failures == 0 ? 0 : 1;
    }
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
  return 0;
}
