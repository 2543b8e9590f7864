// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "goco/bench/experiment.hpp"
#include "goco/gauge.hpp"
#include "goco/grad.hpp"
#include "goco/verify.hpp"

using namespace goco;
using namespace goco::bench;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

// Every experiment run is remembered so criterion 11 can repeat it.
std::vector<std::pair<ExperimentConfig, std::string>> g_runs;

void remember(const RegretReport& r) { g_runs.emplace_back(r.config, csv_text(r)); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void add(Outcome& o, bool ok, const std::string& what) {
  if (!ok) o.passed = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += (ok ? "" : "FAILED ") + what;
}

void add_check(Outcome& o, const CheckResult& c) {
  if (!c.passed) {
    o.passed = false;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += "FAILED " + c.name + " (" + c.detail + ")";
  }
}

ExperimentConfig config(const std::string& text) { return parse_config(Json::parse(text)); }

SweepResult sweep(const ExperimentConfig& cfg, const std::vector<int>& horizons) {
  SweepResult s = run_sweep(cfg, horizons);
  for (const auto& r : s.reports) remember(r);
  return s;
}

RegretReport run(const ExperimentConfig& cfg) {
  RegretReport r = run_experiment(cfg);
  remember(r);
  return r;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::shared_ptr<const ConvexBody>> gauge_zoo() {
  return {make_ball(2),
          make_ball(10),
          make_ellipsoid((Vec(2) << 4.0, 1.0).finished()),
          make_ellipsoid((Vec(10) << 4.0, 1.0, 2.0, 0.5, 3.0, 1.5, 0.25, 2.5, 1.0, 0.75).finished()),
          make_box(2),
          make_box(10)};
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const CounterRng root(101);
  std::uint64_t i = 0;
  int checks = 0;
  for (const auto& body : gauge_zoo())
    for (double tol : {1e-3, 1e-6}) {
      add_check(o, check_gauge_accuracy(*body, tol, 1000, root.split(++i)));
      ++checks;
    }
  const double secs = elapsed(t0);
  add(o, secs < 10.0, fmt("%d body/tolerance pairs x 1000 points in %.2f s (limit 10 s)", checks, secs));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const CounterRng root(202);
  std::uint64_t i = 0;
  int checks = 0;
  for (const auto& body : gauge_zoo()) {
    add_check(o, check_gauge_convexity(*body, 1e-6, 1000, root.split(++i)));
    add_check(o, check_gauge_lipschitz(*body, 1e-6, 1000, root.split(++i)));
    checks += 2;
  }
  add(o, true, fmt("%d sampled checks, 1000 samples each", checks));
  return o;
}

// Exact gauge gradient of a polytope {a_i . x + b_i <= 0} outside K: a_i / (-b_i) on the active row.
Vec polytope_gradient(const PolytopeBody& p, const Vec& x, double* margin) {
  int best = -1;
  double top = -1e300, second = -1e300;
  for (int i = 0; i < p.rows(); ++i) {
    const double v = p.normals().row(i).dot(x) / -p.offsets()[i];
    if (v > top) {
      second = top;
      top = v;
      best = i;
    } else if (v > second) {
      second = v;
    }
  }
  if (margin) *margin = (top - second) / top;
  return p.normals().row(best).transpose() / -p.offsets()[best];
}

Outcome criterion3() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const CounterRng root(303);

  // Forward differences against their stated error bound.
  for (const auto& body : {std::shared_ptr<const ConvexBody>(make_ball(2)), std::shared_ptr<const ConvexBody>(make_ellipsoid((Vec(2) << 4.0, 1.0).finished()))})
    for (int T : {10, 100}) add_check(o, check_fd_gradient(*body, T, 200, root.split("fd").split(static_cast<std::uint64_t>(T) * 7 + body->dim())));
  add(o, true, "fd within error_bound on 200 exterior points (ball, ellipsoid; T=10, 100)");

  // Face estimator: exact up to the projection accuracy, away from edges.
  const int T = 100;
  for (const auto& poly : {make_box(2), make_box(5), make_simplex(2), make_simplex(5)}) {
    CounterRng rng = root.split("face").split(poly->dim() * 10 + poly->rows());
    int tested = 0;
    double worst = 0.0, worst_allowed = 0.0;
    bool ok = true;
    while (tested < 200) {
      const Vec u = random_unit_vector(rng, poly->dim());
      const Vec x = u / *poly->exact_gauge(u * 1e6) * 1e6 * (1.05 + rng.uniform());
      double margin = 0.0;
      const Vec exact = polytope_gradient(*poly, x, &margin);
      if (margin < 1e-3) continue;
      const GradientEstimate est = estimate_grad_polytope_face(*poly, x, T, rng);
      const double allowed = est.error_bound.value_or(0.0);
      const double err = (est.vector - exact).norm();
      if (!est.error_bound || err > allowed) ok = false;
      worst = std::max(worst, err);
      worst_allowed = std::max(worst_allowed, allowed);
      ++tested;
    }
    add(o, ok, fmt("face estimator %s d=%d: worst error %.2e (allowed %.2e)", to_string(poly->kind()).c_str(),
                   poly->dim(), worst, worst_allowed));
  }

  // Randomized estimator: unbiased and second moment within 2/r^2.
  const int draws = 100000;
  std::uint64_t stream = 0;
  for (const auto& body : {std::shared_ptr<const ConvexBody>(make_ball(2)), std::shared_ptr<const ConvexBody>(make_ellipsoid((Vec(2) << 4.0, 1.0).finished()))}) {
    CounterRng rng = root.split("randomized").split(++stream);
    const Vec x = (Vec(2) << 1.1, 0.9).finished();
    const Vec g = analytic_gauge_grad(*body, x).vector;
    const int d = body->dim();
    Vec mean = Vec::Zero(d), sq = Vec::Zero(d);
    double norm_mean = 0.0, norm_sq = 0.0;
    for (int k = 0; k < draws; ++k) {
      const Vec s = estimate_grad_randomized(*body, x, FdConfig::kMinGaugeTol, rng).vector;
      mean += s;
      sq += s.cwiseProduct(s);
      const double n2 = s.squaredNorm();
      norm_mean += n2;
      norm_sq += n2 * n2;
    }
    mean /= draws;
    sq /= draws;
    norm_mean /= draws;
    norm_sq /= draws;
    bool mean_ok = true;
    double worst_z = 0.0;
    for (int i = 0; i < d; ++i) {
      const double se = std::sqrt(std::max(sq[i] - mean[i] * mean[i], 0.0) / draws);
      const double z = std::abs(mean[i] - g[i]) / std::max(se, 1e-300);
      worst_z = std::max(worst_z, z);
      if (std::abs(mean[i] - g[i]) > 3.0 * se) mean_ok = false;
    }
    const double r = body->inner_radius();
    const double se2 = std::sqrt(std::max(norm_sq - norm_mean * norm_mean, 0.0) / draws);
    add(o, mean_ok, fmt("randomized %s: mean within %.2f SE of analytic", to_string(body->kind()).c_str(), worst_z));
    add(o, norm_mean <= 2.0 / (r * r) + 3.0 * se2,
        fmt("randomized %s: E|s|^2 = %.4f vs 2/r^2 + 3 SE = %.4f", to_string(body->kind()).c_str(), norm_mean,
            2.0 / (r * r) + 3.0 * se2));
  }
  const double secs = elapsed(t0);
  add(o, secs < 60.0, fmt("%.2f s (limit 60 s)", secs));
  return o;
}

const std::vector<int> kSweep{100, 1000, 10000, 100000};

std::string slope_text(const FitResult& f) { return fmt("slope %.3f (r2 %.3f)", f.slope, f.r2); }

Outcome criterion4() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto stationary = config(R"({"name": "c4_stationary", "seed": 41,
    "body": {"kind": "ball", "dim": 2},
    "loss": {"family": "linear", "mode": "stationary", "directions": [[1, 0]]},
    "algorithm": {"name": "algorithm1", "schedule": "convex"}, "estimator": {"kind": "finite_difference"}})");
  const auto piecewise = config(R"({"name": "c4_piecewise", "seed": 42,
    "body": {"kind": "ball", "dim": 2},
    "loss": {"family": "linear", "mode": "piecewise", "directions": [[1, 0], [-1, 0]], "num_segments": 2},
    "algorithm": {"name": "algorithm1", "schedule": "convex"}, "estimator": {"kind": "finite_difference"}})");
  const SweepResult s = sweep(stationary, kSweep);
  const SweepResult p = sweep(piecewise, kSweep);
  const auto in_band = [](const FitResult& f) { return f.used >= 4 && f.slope >= 0.35 && f.slope <= 0.65; };
  add(o, in_band(s.cumulative_fit), "stationary cumulative regret " + slope_text(s.cumulative_fit));
  add(o, in_band(p.worst_fit), "piecewise worst dyadic-interval regret " + slope_text(p.worst_fit));
  const double secs = elapsed(t0);
  add(o, secs < 300.0, fmt("%.1f s (limit 300 s)", secs));
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = config(R"({"name": "c5_quadratic", "seed": 51,
    "body": {"kind": "ball", "dim": 2},
    "loss": {"family": "quadratic", "mode": "stationary", "lambda": 1.0, "centers": [[0.5, 0]], "noise": 0.1},
    "algorithm": {"name": "algorithm1", "schedule": "strongly_convex"}, "estimator": {"kind": "finite_difference"}})");
  const SweepResult s = sweep(cfg, kSweep);
  std::vector<double> hs, regrets;
  double lo = 1e300, hi = -1e300;
  std::string per;
  for (const auto& r : s.reports) {
    const double ratio = r.cumulative_regret / std::log(static_cast<double>(r.config.horizon));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    hs.push_back(r.config.horizon);
    regrets.push_back(r.cumulative_regret);
    per += fmt(" %.4g", ratio);
  }
  const FitResult fit = log_linear_fit(hs, regrets);
  add(o, lo > 0.0 && hi / lo <= 3.0, fmt("regret/log T:%s, max/min %.3f (limit 3)", per.c_str(), hi / lo));
  add(o, fit.r2 >= 0.9, fmt("linear-in-log-T fit r2 %.4f (limit 0.9)", fit.r2));
  const double secs = elapsed(t0);
  add(o, secs < 300.0, fmt("%.1f s (limit 300 s)", secs));
  return o;
}

std::string c6_config(const std::string& name, const std::string& alg, int T) {
  return fmt(R"({"name": "%s", "T": %d, "seed": 61,
    "body": {"kind": "ball", "dim": 2},
    "loss": {"family": "quadratic", "mode": "piecewise", "lambda": 1.0, "num_segments": 4,
             "centers": [[1, 0], [0, 1], [-1, 0], [0, -1]]},
    "algorithm": {"name": "%s", "schedule": "strongly_convex"}, "estimator": {"kind": "finite_difference"}})",
             name.c_str(), T, alg.c_str());
}

Outcome criterion6() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const RegretReport flh = run(config(c6_config("c6_flh", "flh", 8192)));
  const RegretReport control = run(config(c6_config("c6_control", "algorithm1", 8192)));
  for (std::size_t k = 1; k < flh.segments.size(); ++k) {
    const double a = flh.segments[k].regret, b = control.segments[k].regret;
    add(o, b > 0.0 && a <= 0.2 * b,
        fmt("segment [%d, %d]: FLH %.1f vs control %.1f (ratio %.3f, limit 0.2)", flh.segments[k].start,
            flh.segments[k].end, a, b, a / b));
  }
  const RegretReport small = run(config(c6_config("c6_flh_fit", "flh", 1024)));
  const double c = small.scan.worst.regret / std::pow(std::log(1024.0), 2);
  const double bound = c * std::pow(std::log(8192.0), 2);
  add(o, flh.scan.worst.regret <= bound,
      fmt("max dyadic regret %.1f <= c log^2 T = %.1f (c = %.4f fitted at T=1024)", flh.scan.worst.regret, bound, c));
  const double secs = elapsed(t0);
  add(o, secs < 600.0, fmt("%.1f s (limit 600 s)", secs));
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const int T = 8192;
  const RegretReport r = run(config(fmt(R"({"name": "c7_eflh", "T": %d, "seed": 71,
    "body": {"kind": "ball", "dim": 2},
    "loss": {"family": "linear", "mode": "piecewise", "directions": [[1, 0], [-1, 0]], "num_segments": 8},
    "algorithm": {"name": "eflh", "schedule": "convex", "epsilon": "1/logT"},
    "estimator": {"kind": "finite_difference"}})", T)));
  double lo = 1e300, hi = -1e300;
  std::string per;
  for (int len : {64, 256, 1024}) {
    const double reg = max_regret_of_length(r.scan, len);
    const double ratio = reg / std::sqrt(len * std::log(static_cast<double>(T)));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    per += fmt(" I=%d: %.3f", len, ratio);
  }
  add(o, lo > 0.0 && hi / lo <= 4.0, fmt("regret/sqrt(I log T):%s, max/min %.3f (limit 4)", per.c_str(), hi / lo));
  const double secs = elapsed(t0);
  add(o, secs < 600.0, fmt("%.1f s (limit 600 s)", secs));
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto alg1 = config(R"({"name": "c8_calls", "seed": 81,
    "body": {"kind": "ball", "dim": 5},
    "loss": {"family": "linear", "mode": "piecewise", "num_segments": 4},
    "algorithm": {"name": "algorithm1", "schedule": "convex"}, "estimator": {"kind": "finite_difference"}})");
  const SweepResult s = sweep(alg1, {100, 10000, 100000});
  const auto per_round = [](const RegretReport& r) { return static_cast<double>(r.max_calls_per_round); };
  const double C = per_round(s.reports[0]) / std::log(100.0);
  for (const auto& r : s.reports) {
    const double lt = std::log(static_cast<double>(r.config.horizon));
    add(o, per_round(r) <= C * lt + 1e-9,
        fmt("algorithm1 d=5 T=%d: max %llu calls/round <= C log T = %.1f", r.config.horizon,
            static_cast<unsigned long long>(r.max_calls_per_round), C * lt));
  }
  const auto flh = config(R"({"name": "c8_flh_calls", "seed": 82,
    "body": {"kind": "ball", "dim": 5},
    "loss": {"family": "quadratic", "mode": "piecewise", "num_segments": 4, "lambda": 1.0},
    "algorithm": {"name": "flh", "schedule": "strongly_convex"}, "estimator": {"kind": "finite_difference"}})");
  const SweepResult f = sweep(flh, {100, 10000, 100000});
  const double C2 = f.reports[0].max_calls_per_round / std::pow(std::log(100.0), 2);
  for (const auto& r : f.reports) {
    const double lt = std::log(static_cast<double>(r.config.horizon));
    add(o, r.max_calls_per_round <= C2 * lt * lt + 1e-9,
        fmt("FLH d=5 T=%d: max %llu calls/round <= C' log^2 T = %.1f", r.config.horizon,
            static_cast<unsigned long long>(r.max_calls_per_round), C2 * lt * lt));
  }
  return o;
}

Outcome criterion9() {
  Outcome o;
  const int T = 10;
  const double a = std::pow(static_cast<double>(T), 3);
  const CounterRng root(909);
  std::vector<std::shared_ptr<const PolytopeBody>> bases;
  std::vector<std::string> names;
  for (int d : {2, 5}) {
    CounterRng rng = root.split("bodies").split(d);
    Vec lower(d), upper(d);
    for (int i = 0; i < d; ++i) {
      lower[i] = -(0.5 + rng.uniform());
      upper[i] = 0.5 + rng.uniform();
    }
    bases.push_back(make_rotated(*make_box(lower, upper), random_rotation(rng, d)));
    bases.push_back(make_rotated(*make_simplex(d, 0.5 + rng.uniform()), random_rotation(rng, d)));
    names.push_back("rotated box d=" + std::to_string(d));
    names.push_back("rotated simplex d=" + std::to_string(d));
  }
  std::uint64_t k = 0;
  for (const auto& base : bases) {
    const auto smoothed = make_smoothed(base, a);
    add_check(o, check_smoothing_sandwich(*smoothed, 10000, root.split("sandwich").split(++k)));

    CounterRng rng = root.split("gradient").split(k);
    int tested = 0;
    double worst = 0.0;
    while (tested < 200) {
      const Vec u = random_unit_vector(rng, base->dim());
      const Vec x = u / *base->exact_gauge(u * 1e6) * 1e6 * (1.1 + rng.uniform());
      const Vec exact = polytope_gradient(*base, x, nullptr);
      // Away from edges: at x / gamma(x) the runner-up row sits well below the smoothing slack.
      const Vec p = x / *base->exact_gauge(x);
      Vec h = base->normals() * p + base->offsets();
      std::sort(h.data(), h.data() + h.size(), std::greater<>());
      if (h[1] > -10.0 * std::log(static_cast<double>(base->rows())) / a) continue;
      const Vec est = estimate_grad_smoothed_polytope(*smoothed, x, T).vector;
      worst = std::max(worst, (est - exact).norm());
      ++tested;
    }
    add(o, worst <= 0.02,
        fmt("%s smoothed fd vs face normal: worst %.2e (limit 0.02)", names[k - 1].c_str(), worst));
  }
  add(o, true, fmt("sandwich and subset chain at a=%g, 10000 samples per body", a));
  return o;
}

Outcome criterion10() {
  Outcome o;
  const auto cfg = config(R"({"name": "c10_adaptive_smooth", "seed": 101,
    "body": {"kind": "ellipsoid", "dim": 2, "diag": [4, 1]},
    "loss": {"family": "linear", "mode": "piecewise", "directions": [[1, 0.5], [-1, -0.5]], "num_segments": 2},
    "algorithm": {"name": "algorithm1", "schedule": "adaptive_smooth"}, "estimator": {"kind": "finite_difference"}})");
  const SweepResult s = sweep(cfg, kSweep);
  const auto body = build_body(cfg.body, 10000, cfg.seed);
  const double r = body->inner_radius(), D = body->diameter();
  const double bound = lazy_iterate_bound(r, D);
  for (const auto& rep : s.reports)
    if (rep.config.horizon == 10000)
      add(o, rep.max_lazy_norm <= bound, fmt("T=10000 max |y_t| %.4f <= %.4f", rep.max_lazy_norm, bound));
  const FitResult& f = s.worst_fit;
  add(o, f.used >= 4 && f.slope >= 0.35 && f.slope <= 0.65, "worst dyadic-interval regret " + slope_text(f));
  return o;
}

Outcome criterion11() {
  Outcome o;
  std::size_t same = 0;
  for (const auto& [cfg, csv] : g_runs) {
    const std::string again = csv_text(run_experiment(cfg));
    if (again == csv) {
      ++same;
    } else {
      add(o, false, cfg.name + fmt(" T=%d differs on rerun", cfg.horizon));
    }
  }
  add(o, !g_runs.empty() && same == g_runs.size(), fmt("%zu of %zu runs byte-identical", same, g_runs.size()));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"gauge accuracy and call budget", criterion1},
      {"gauge convexity and 1/r-Lipschitz", criterion2},
      {"gradient estimators vs analytic", criterion3},
      {"convex regret slope", criterion4},
      {"strongly convex regret ~ log T", criterion5},
      {"FLH adaptive regret", criterion6},
      {"EFLH strongly adaptive regret", criterion7},
      {"oracle complexity", criterion8},
      {"polytope smoothing", criterion9},
      {"adaptive_smooth iterate bound", criterion10},
      {"determinism", criterion11},
  };
  int failures = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = fn();
    } catch (const std::exception& ex) {
      o.passed = false;
      o.detail = std::string("exception: ") + ex.what();
    }
    if (!o.passed) ++failures;
    std::printf("%s criterion %d (%s) [%.1f s]: %s\n", o.passed ? "PASS" : "FAIL", n, name.c_str(), elapsed(t0),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", n - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
