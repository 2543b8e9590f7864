#pragma once

#include <span>
#include <vector>

#include "goco/bench/comparator.hpp"

namespace goco::bench {

struct IntervalRegret {
  int start = 1;
  int end = 1;
  double regret = 0.0;
  double comparator_value = 0.0;
  double comparator_gap = 0.0;
};

struct IntervalScan {
  IntervalRegret worst;
  std::vector<IntervalRegret> intervals;  // every interval evaluated
};

/// Cumulative player loss and interval regret helper.
class RegretLedger {
 public:
  RegretLedger(const ConvexBody& body, std::span<const LossFunction> losses, std::span<const double> player_losses);

  IntervalRegret interval(int s, int t) const;
  const LossPrefix& prefix() const { return prefix_; }
  int horizon() const { return prefix_.horizon(); }

 private:
  const ConvexBody& body_;
  LossPrefix prefix_;
  std::vector<double> player_prefix_;
};

/// Dyadic intervals [q 2^k + 1, (q + 1) 2^k] inside [1, T] plus [1, T].
std::vector<std::pair<int, int>> dyadic_intervals(int horizon);

/// Worst regret over the dyadic grid, or over every interval when `full`
/// is set (only allowed for T <= 2000).
IntervalScan interval_regret_scan(const RegretLedger& ledger, bool full = false);

/// Largest regret among scanned intervals of exactly `length` rounds.
double max_regret_of_length(const IntervalScan& scan, int length);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int used = 0;
  int excluded = 0;  // non-positive regrets dropped from a log-log fit
};

/// Least squares of log(regret) on log(T); needs at least 4 usable points.
FitResult slope_fit(std::span<const double> horizons, std::span<const double> regrets);
/// Least squares of regret on log(T); R^2 measures linearity in log T.
FitResult log_linear_fit(std::span<const double> horizons, std::span<const double> regrets);

}  // namespace goco::bench
