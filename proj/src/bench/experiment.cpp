#include "goco/bench/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <thread>

#include "goco/bench/baseline.hpp"
#include "goco/bench/generate.hpp"
#include "goco/error.hpp"
#include "goco/meta.hpp"

namespace goco::bench {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One round of whichever algorithm the config selects.
class Player {
 public:
  struct Round {
    Vec played;
    double loss = 0.0;
    std::uint32_t events = 0;
  };

  Player(const ExperimentConfig& cfg, std::shared_ptr<const ConvexBody> body, double G, CounterRng rng) {
    LearnerConfig base;
    base.body = body;
    base.horizon = cfg.horizon;
    base.lipschitz = G;
    base.strong_convexity = cfg.loss.family == "quadratic" ? cfg.loss.lambda : 0.0;
    base.schedule = cfg.algorithm.schedule;
    base.estimator = cfg.estimator;
    const std::string& name = cfg.algorithm.name;
    if (name == "algorithm1") {
      learner_.emplace(base, rng.split("algorithm1"));
    } else if (name == "flh") {
      flh_.emplace(base, rng.split("flh"));
    } else if (name == "eflh") {
      eflh_.emplace(base, effective_epsilon(cfg.algorithm, cfg.horizon), rng.split("eflh"),
                    cfg.algorithm.normalization.value_or(0.0));
    } else if (name == "baseline_projected_ogd") {
      ogd_.emplace(body, cfg.horizon, G, cfg.algorithm.schedule, base.strong_convexity);
    } else {
      throw Error(ErrorCode::config, "unknown algorithm '" + name + "'");
    }
  }

  Round step(const LossFunction& f) {
    Round r;
    if (learner_) {
      r.played = learner_->play();
      const Learner::StepResult res = learner_->step(f);
      r.loss = res.loss;
      r.events = res.events;
      max_lazy_norm_ = std::max({max_lazy_norm_, learner_->lazy_iterate().norm()});
    } else if (flh_ || eflh_) {
      const MetaRound m = flh_ ? flh_->round(f) : eflh_->round(f);
      r.played = m.played;
      r.loss = m.loss;
      r.events = m.events;
      max_live_ = std::max(max_live_, m.live_experts);
    } else {
      r.played = ogd_->play();
      r.loss = ogd_->step(f);
    }
    return r;
  }

  double max_lazy_norm() const { return max_lazy_norm_; }
  std::size_t max_live() const { return max_live_; }
  const Eflh* eflh() const { return eflh_ ? &*eflh_ : nullptr; }

 private:
  std::optional<Learner> learner_;
  std::optional<Flh> flh_;
  std::optional<Eflh> eflh_;
  std::optional<ProjectedOgd> ogd_;
  double max_lazy_norm_ = 0.0;
  std::size_t max_live_ = 0;
};

void remove_quietly(const std::filesystem::path& p) {
  std::error_code ec;
  std::filesystem::remove(p, ec);
}

void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot open '" + p.string() + "' for writing");
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::io, "write to '" + p.string() + "' failed");
}

}  // namespace

RegretReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.horizon < 1) throw Error(ErrorCode::config, "T must be at least 1");
  if (cfg.output.full_interval_scan && cfg.horizon > 2000)
    throw Error(ErrorCode::config, "full interval scan is limited to T <= 2000");

  RegretReport report;
  report.config = cfg;
  report.config_hash = config_hash(cfg);

  const CounterRng root(cfg.seed);
  const std::shared_ptr<const ConvexBody> body = build_body(cfg.body, cfg.horizon, cfg.seed);
  const std::vector<LossFunction> losses = generate_losses(cfg.loss, *body, cfg.horizon, root.split("adversary"));
  const double G = certified_lipschitz(cfg.loss, *body);
  Player player(cfg, body, G, root.split("player"));

  OracleCounter& counter = body->counter();
  const std::uint64_t calls0 = counter.calls();
  const std::uint64_t rows0 = counter.rows();
  const double T = cfg.horizon;
  const double inward = std::max(0.0, 1.0 - 1.0 / (T * T * body->inner_radius()));

  std::vector<double> player_losses;
  player_losses.reserve(losses.size());
  report.rows.reserve(losses.size());
  double cum = 0.0;
  for (int t = 1; t <= cfg.horizon; ++t) {
    const std::uint64_t before = counter.calls();
    const Player::Round r = player.step(losses[static_cast<std::size_t>(t - 1)]);
    const std::uint64_t used = counter.calls() - before;
    if (!body->satisfies(inward * r.played)) report.feasible = false;
    cum += r.loss;
    player_losses.push_back(r.loss);
    report.rows.push_back(RoundRow{t, r.loss, cum, used, r.events});
    report.max_calls_per_round = std::max(report.max_calls_per_round, used);
    if (r.events != 0) ++report.event_rounds;
  }
  report.total_calls = counter.calls() - calls0;
  report.row_evals = counter.rows() - rows0;
  report.mean_calls_per_round = static_cast<double>(report.total_calls) / T;
  report.max_lazy_norm = player.max_lazy_norm();
  report.max_live_experts = player.max_live();
  if (const Eflh* e = player.eflh()) {
    report.min_factor = e->min_factor();
    report.max_factor = e->max_factor();
  }

  const RegretLedger ledger(*body, losses, player_losses);
  report.comparator = offline_comparator(*body, ledger.prefix(), 1, cfg.horizon);
  report.cumulative_regret = cum - report.comparator.value;
  report.scan = interval_regret_scan(ledger, cfg.output.full_interval_scan);
  const std::vector<int> starts = segment_starts(cfg.loss, cfg.horizon);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const int s = starts[i];
    const int e = i + 1 < starts.size() ? starts[i + 1] - 1 : cfg.horizon;
    report.segments.push_back(SegmentRegret{s, e, ledger.interval(s, e).regret});
  }
  return report;
}

std::string csv_text(const RegretReport& report) {
  std::string out = "t,player_loss,cum_loss,oracle_calls_round,estimator_events\n";
  out.reserve(out.size() + report.rows.size() * 64);
  for (const RoundRow& r : report.rows) {
    out += std::to_string(r.t);
    out += ',';
    out += fmt(r.player_loss);
    out += ',';
    out += fmt(r.cum_loss);
    out += ',';
    out += std::to_string(r.oracle_calls);
    out += ',';
    out += std::to_string(r.events);
    out += '\n';
  }
  return out;
}

Json summary_json(const RegretReport& report) {
  Json j;
  j["version"] = kSummaryVersion;
  j["name"] = report.config.name;
  j["config_hash"] = report.config_hash;
  j["seed"] = report.config.seed;
  j["T"] = report.config.horizon;
  j["algorithm"] = report.config.algorithm.name;
  j["config"] = to_json(report.config);
  j["cumulative_regret"] = report.cumulative_regret;
  j["player_loss"] = report.rows.empty() ? 0.0 : report.rows.back().cum_loss;
  j["comparator"] = Json{{"method", report.comparator.method},
                         {"value", report.comparator.value},
                         {"gap", report.comparator.gap},
                         {"point", std::vector<double>(report.comparator.point.data(),
                                                       report.comparator.point.data() +
                                                           report.comparator.point.size())}};
  const IntervalRegret& w = report.scan.worst;
  j["worst_interval"] = Json{{"start", w.start}, {"end", w.end}, {"regret", w.regret},
                             {"grid", report.config.output.full_interval_scan ? "full" : "dyadic"},
                             {"intervals_scanned", report.scan.intervals.size()}};
  Json segs = Json::array();
  for (const SegmentRegret& s : report.segments) segs.push_back(Json{{"start", s.start}, {"end", s.end}, {"regret", s.regret}});
  j["segments"] = segs;
  j["oracle"] = Json{{"total_calls", report.total_calls},
                     {"row_evals", report.row_evals},
                     {"mean_calls_per_round", report.mean_calls_per_round},
                     {"max_calls_per_round", report.max_calls_per_round},
                     {"event_rounds", report.event_rounds}};
  j["feasible"] = report.feasible;
  if (report.config.algorithm.name == "algorithm1") j["max_lazy_norm"] = report.max_lazy_norm;
  if (report.config.algorithm.name == "flh" || report.config.algorithm.name == "eflh") {
    Json meta{{"max_live_experts", report.max_live_experts}};
    if (report.config.algorithm.name == "eflh") {
      meta["min_factor"] = report.min_factor;
      meta["max_factor"] = report.max_factor;
    }
    j["meta"] = meta;
  }
  return j;
}

void write_artifacts(const RegretReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root = dir.empty() ? fs::path(".") : fs::path(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create output directory '" + root.string() + "': " + ec.message());

  const std::string stem = report.config.name;
  const fs::path csv = root / (stem + ".csv");
  const fs::path summary = root / (stem + ".summary.json");
  const fs::path csv_tmp = root / (stem + ".csv.tmp");
  const fs::path summary_tmp = root / (stem + ".summary.json.tmp");
  bool csv_placed = false;
  try {
    write_file(csv_tmp, csv_text(report));
    write_file(summary_tmp, summary_json(report).dump(2) + "\n");
    fs::rename(csv_tmp, csv);
    csv_placed = true;
    fs::rename(summary_tmp, summary);
  } catch (const fs::filesystem_error& e) {
    remove_quietly(csv_tmp);
    remove_quietly(summary_tmp);
    if (csv_placed) remove_quietly(csv);
    throw Error(ErrorCode::io, std::string("writing artifacts failed: ") + e.what());
  } catch (...) {
    remove_quietly(csv_tmp);
    remove_quietly(summary_tmp);
    if (csv_placed) remove_quietly(csv);
    throw;
  }
}

SweepResult run_sweep(const ExperimentConfig& cfg, const std::vector<int>& horizons) {
  if (horizons.empty()) throw Error(ErrorCode::config, "sweep needs at least one horizon");
  SweepResult sweep;
  sweep.horizons = horizons;
  sweep.reports.resize(horizons.size());
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t begin = 0; begin < horizons.size(); begin += width) {
    const std::size_t end = std::min(horizons.size(), begin + width);
    std::vector<std::future<RegretReport>> jobs;
    for (std::size_t i = begin; i < end; ++i) {
      ExperimentConfig c = cfg;
      c.horizon = horizons[i];
      c.name = cfg.name + "_T" + std::to_string(horizons[i]);
      jobs.push_back(std::async(std::launch::async, [c] { return run_experiment(c); }));
    }
    for (std::size_t i = begin; i < end; ++i) sweep.reports[i] = jobs[i - begin].get();
  }
  if (horizons.size() >= 4) {
    std::vector<double> h, cum, worst;
    for (std::size_t i = 0; i < horizons.size(); ++i) {
      h.push_back(horizons[i]);
      cum.push_back(sweep.reports[i].cumulative_regret);
      worst.push_back(sweep.reports[i].scan.worst.regret);
    }
    // A fit can fail when too many regrets are non-positive; report that as zero points used.
    try {
      sweep.cumulative_fit = slope_fit(h, cum);
    } catch (const Error&) {
    }
    try {
      sweep.worst_fit = slope_fit(h, worst);
    } catch (const Error&) {
    }
  }
  return sweep;
}

Json sweep_json(const SweepResult& sweep) {
  Json runs = Json::array();
  for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
    const RegretReport& r = sweep.reports[i];
    runs.push_back(Json{{"T", sweep.horizons[i]},
                        {"config_hash", r.config_hash},
                        {"cumulative_regret", r.cumulative_regret},
                        {"worst_interval_regret", r.scan.worst.regret},
                        {"mean_calls_per_round", r.mean_calls_per_round}});
  }
  auto fit = [](const FitResult& f) {
    return Json{{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"used", f.used}, {"excluded", f.excluded}};
  };
  return Json{{"version", kSummaryVersion},
              {"runs", runs},
              {"cumulative_slope", fit(sweep.cumulative_fit)},
              {"worst_interval_slope", fit(sweep.worst_fit)}};
}

}  // namespace goco::bench
