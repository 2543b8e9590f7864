#include "goco/bench/regret.hpp"

#include <cmath>

#include "goco/error.hpp"

namespace goco::bench {

RegretLedger::RegretLedger(const ConvexBody& body, std::span<const LossFunction> losses,
                           std::span<const double> player_losses)
    : body_(body), prefix_(losses) {
  if (losses.size() != player_losses.size())
    throw Error(ErrorCode::invalid_argument, "one player loss per round is required");
  player_prefix_.assign(player_losses.size() + 1, 0.0);
  for (std::size_t i = 0; i < player_losses.size(); ++i) player_prefix_[i + 1] = player_prefix_[i] + player_losses[i];
}

IntervalRegret RegretLedger::interval(int s, int t) const {
  const ComparatorResult c = offline_comparator(body_, prefix_, s, t);
  IntervalRegret r;
  r.start = s;
  r.end = t;
  r.comparator_value = c.value;
  r.comparator_gap = c.gap;
  r.regret = (player_prefix_[t] - player_prefix_[s - 1]) - c.value;
  return r;
}

std::vector<std::pair<int, int>> dyadic_intervals(int horizon) {
  std::vector<std::pair<int, int>> out;
  if (horizon < 1) return out;
  for (long long len = 1; len <= horizon; len *= 2)
    for (long long q = 0; (q + 1) * len <= horizon; ++q)
      out.emplace_back(static_cast<int>(q * len + 1), static_cast<int>((q + 1) * len));
  const bool has_full = (horizon & (horizon - 1)) == 0;  // power of two: [1, T] is already on the grid
  if (!has_full) out.emplace_back(1, horizon);
  return out;
}

IntervalScan interval_regret_scan(const RegretLedger& ledger, bool full) {
  const int T = ledger.horizon();
  if (T < 1) throw Error(ErrorCode::invalid_argument, "empty trajectory");
  IntervalScan scan;
  auto consider = [&](int s, int t) {
    IntervalRegret r = ledger.interval(s, t);
    if (scan.intervals.empty() || r.regret > scan.worst.regret) scan.worst = r;
    scan.intervals.push_back(r);
  };
  if (full) {
    if (T > 2000) throw Error(ErrorCode::invalid_argument, "full interval scan is limited to T <= 2000");
    scan.intervals.reserve(static_cast<std::size_t>(T) * (T + 1) / 2);
    for (int s = 1; s <= T; ++s)
      for (int t = s; t <= T; ++t) consider(s, t);
  } else {
    for (const auto& [s, t] : dyadic_intervals(T)) consider(s, t);
  }
  return scan;
}

double max_regret_of_length(const IntervalScan& scan, int length) {
  double best = -std::numeric_limits<double>::infinity();
  for (const IntervalRegret& r : scan.intervals)
    if (r.end - r.start + 1 == length) best = std::max(best, r.regret);
  if (!std::isfinite(best)) throw Error(ErrorCode::invalid_argument, "no scanned interval has that length");
  return best;
}

namespace {

FitResult least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::invalid_argument, "fit needs distinct horizons");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    sse += e * e;
  }
  fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.used = static_cast<int>(x.size());
  return fit;
}

void check_sizes(std::span<const double> h, std::span<const double> r) {
  if (h.size() != r.size()) throw Error(ErrorCode::invalid_argument, "one regret per horizon is required");
  for (double v : h)
    if (!(v > 0.0)) throw Error(ErrorCode::invalid_argument, "horizons must be positive");
}

}  // namespace

FitResult slope_fit(std::span<const double> horizons, std::span<const double> regrets) {
  check_sizes(horizons, regrets);
  std::vector<double> x, y;
  int excluded = 0;
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (!(regrets[i] > 0.0)) {
      ++excluded;
      continue;
    }
    x.push_back(std::log(horizons[i]));
    y.push_back(std::log(regrets[i]));
  }
  if (x.size() < 4) throw Error(ErrorCode::invalid_argument, "slope fit needs at least four positive regrets");
  FitResult fit = least_squares(x, y);
  fit.excluded = excluded;
  return fit;
}

FitResult log_linear_fit(std::span<const double> horizons, std::span<const double> regrets) {
  check_sizes(horizons, regrets);
  if (horizons.size() < 2) throw Error(ErrorCode::invalid_argument, "fit needs at least two points");
  std::vector<double> x, y(regrets.begin(), regrets.end());
  for (double h : horizons) x.push_back(std::log(h));
  return least_squares(x, y);
}

}  // namespace goco::bench
