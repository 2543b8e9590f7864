#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "goco/bench/config.hpp"
#include "goco/bench/regret.hpp"

namespace goco::bench {

inline constexpr int kSummaryVersion = 1;

struct RoundRow {
  int t = 0;
  double player_loss = 0.0;
  double cum_loss = 0.0;
  std::uint64_t oracle_calls = 0;
  std::uint32_t events = 0;
};

struct SegmentRegret {
  int start = 1;
  int end = 1;
  double regret = 0.0;
};

struct RegretReport {
  ExperimentConfig config;
  std::string config_hash;
  std::vector<RoundRow> rows;

  double cumulative_regret = 0.0;
  ComparatorResult comparator;
  IntervalScan scan;
  std::vector<SegmentRegret> segments;

  std::uint64_t total_calls = 0;   // counter delta over the whole run
  std::uint64_t row_evals = 0;
  double mean_calls_per_round = 0.0;
  std::uint64_t max_calls_per_round = 0;
  double max_lazy_norm = 0.0;      // base learner only
  std::size_t max_live_experts = 0;
  double min_factor = 1.0;         // EFLH weight factors
  double max_factor = 1.0;
  std::uint64_t event_rounds = 0;  // rounds with any estimator event
  bool feasible = true;            // every played point passed membership
};

/// Runs the configured algorithm against the generated losses.
RegretReport run_experiment(const ExperimentConfig& cfg);

std::string csv_text(const RegretReport& report);
Json summary_json(const RegretReport& report);

/// Writes <dir>/<name>.csv and <dir>/<name>.summary.json through temporary
/// files; on failure neither file is left behind.
void write_artifacts(const RegretReport& report, const std::string& dir);

struct SweepResult {
  std::vector<int> horizons;
  std::vector<RegretReport> reports;
  FitResult cumulative_fit;  // log-log slope of cumulative regret
  FitResult worst_fit;       // log-log slope of worst dyadic-interval regret
};

/// Runs one experiment per horizon concurrently.
SweepResult run_sweep(const ExperimentConfig& cfg, const std::vector<int>& horizons);
Json sweep_json(const SweepResult& sweep);

}  // namespace goco::bench
