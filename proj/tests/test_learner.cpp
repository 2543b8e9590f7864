#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "goco/error.hpp"
#include "goco/gauge.hpp"
#include "goco/learner.hpp"

using namespace goco;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

LearnerConfig ball_config(int T, EstimatorKind kind = EstimatorKind::finite_difference) {
  LearnerConfig cfg;
  cfg.body = make_ball(2);
  cfg.horizon = T;
  cfg.lipschitz = 1.0;
  cfg.estimator.kind = kind;
  return cfg;
}

}  // namespace

TEST_CASE("step sizes") {
  CHECK(step_size(Schedule::convex, 1, 100, 1.0, 2.0, 1.0, 0.0) == doctest::Approx(0.1));
  CHECK(step_size(Schedule::strongly_convex, 5, 100, 1.0, 2.0, 1.0, 2.0) == doctest::Approx(0.1));
  CHECK(step_size(Schedule::adaptive_smooth, 1, 100, 1.0, 2.0, 1.0, 0.0) == doctest::Approx(0.2));
  CHECK_THROWS_AS(step_size(Schedule::strongly_convex, 1, 100, 1.0, 2.0, 1.0, 0.0), Error);
  CHECK(schedule_from_string("adaptive_smooth") == Schedule::adaptive_smooth);
  CHECK_THROWS(schedule_from_string("fast"));
}

TEST_CASE("first step from the origin") {
  Learner learner(ball_config(100), CounterRng(1));
  CHECK(learner.play().isZero());
  const Learner::StepResult r = learner.step(LossFunction::linear(v2(1.0, 0.0), 0.0, 1.0));
  CHECK(r.step == doctest::Approx(0.1));
  CHECK(r.loss == 0.0);
  CHECK((learner.lazy_iterate() - v2(-0.1, 0.0)).norm() < 1e-15);
  CHECK((learner.play() - v2(-0.1, 0.0)).norm() < 1e-15);
  CHECK(learner.round() == 1);
  CHECK(learner.delta() == doctest::Approx(1e-4));
}

TEST_CASE("exterior lazy iterate") {
  Learner learner(ball_config(100, EstimatorKind::analytic), CounterRng(1));
  const LossFunction f = LossFunction::linear(v2(1.0, 0.0), 0.0, 1.0);
  const Vec g = learner.regularized_gradient(f, v2(2.0, 0.0));
  CHECK((g - v2(7.0, 0.0)).norm() < 1e-12);
  const Vec y = v2(2.0, 0.0) - 0.1 * g;
  CHECK((y - v2(1.3, 0.0)).norm() < 1e-12);
  CHECK((minkowski_project(*make_ball(2), y, learner.delta()) - v2(1.0, 0.0)).norm() <= learner.delta());

  // The fd estimator gives the same gradient within its accuracy.
  Learner fd(ball_config(100), CounterRng(1));
  CHECK((fd.regularized_gradient(f, v2(2.0, 0.0)) - v2(7.0, 0.0)).norm() <= 6.0 * 1e-4);
}

TEST_CASE("zero loss never moves") {
  Learner learner(ball_config(50), CounterRng(2));
  const LossFunction zero = LossFunction::linear(v2(0.0, 0.0), 0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    learner.step(zero);
    CHECK(learner.play().isZero());
  }
}

TEST_CASE("empty run") {
  const std::vector<LossFunction> none;
  const Trajectory tr = run_learner(ball_config(1), none, CounterRng(3));
  CHECK(tr.played.empty());
  CHECK(tr.losses.empty());
  CHECK(tr.calls.empty());
}

TEST_CASE("strongly convex run converges to an interior optimum") {
  const Vec theta = v2(0.5, 0.0);
  const int T = 2000;
  LearnerConfig cfg = ball_config(T);
  cfg.schedule = Schedule::strongly_convex;
  cfg.strong_convexity = 1.0;
  cfg.lipschitz = 5.5;  // lambda (2 D + |theta|) on the 2D-ball
  const std::vector<LossFunction> losses(T, LossFunction::quadratic(1.0, theta, 1.0, cfg.lipschitz));
  const Trajectory tr = run_learner(cfg, losses, CounterRng(4));
  REQUIRE(tr.played.size() == static_cast<std::size_t>(T));
  CHECK((tr.played.back() - theta).norm() <= 0.05);
}

TEST_CASE("played points stay feasible and calls stay in budget") {
  const int T = 400;
  for (EstimatorKind kind : {EstimatorKind::finite_difference, EstimatorKind::randomized}) {
    LearnerConfig cfg = ball_config(T, kind);
    std::vector<LossFunction> losses;
    for (int t = 1; t <= T; ++t) losses.push_back(LossFunction::linear(t <= T / 2 ? v2(0.6, 0.8) : v2(-0.8, 0.6), 2.0, 1.0));
    const Trajectory tr = run_learner(cfg, losses, CounterRng(5));
    const FdConfig fd = FdConfig::for_horizon(2, T);
    const double shrink = 1.0 - 1.0 / (static_cast<double>(T) * T * cfg.body->inner_radius());
    for (int t = 0; t < T; ++t) {
      CHECK(cfg.body->satisfies(tr.played[t] * shrink));
      // estimator plus the projection of the new iterate
      CHECK(tr.calls[t] <= fd_call_budget(*cfg.body, fd) + projection_call_budget(*cfg.body, 1.0 / (double(T) * T)));
    }
  }
}

TEST_CASE("runs are deterministic per seed") {
  const int T = 200;
  LearnerConfig cfg = ball_config(T, EstimatorKind::randomized);
  std::vector<LossFunction> losses(T, LossFunction::linear(v2(0.6, -0.8), 2.0, 1.0));
  const Trajectory a = run_learner(cfg, losses, CounterRng(9));
  const Trajectory b = run_learner(cfg, losses, CounterRng(9));
  for (int t = 0; t < T; ++t) CHECK(a.played[t] == b.played[t]);
  CHECK(a.calls == b.calls);
}

TEST_CASE("adaptive_smooth keeps the lazy iterate bounded") {
  const int T = 2000;
  LearnerConfig cfg;
  cfg.body = make_ellipsoid(v2(4.0, 1.0));
  cfg.horizon = T;
  cfg.schedule = Schedule::adaptive_smooth;
  std::vector<LossFunction> losses;
  for (int t = 1; t <= T; ++t) losses.push_back(LossFunction::linear(t % 300 < 150 ? v2(1.0, 0.0) : v2(0.0, -1.0), 2.0, 1.0));
  const Trajectory tr = run_learner(cfg, losses, CounterRng(6));
  CHECK(tr.max_lazy_norm <= lazy_iterate_bound(cfg.body->inner_radius(), cfg.body->diameter()));
  CHECK(lazy_iterate_bound(1.0, 2.0) == doctest::Approx(64.0 / 3.0 + 8.0));
}

TEST_CASE("polytope face estimator inside the learner") {
  // The best point is the corner (-1, -1) with loss 0.6. Each time the lazy
  // iterate crosses a face the penalty pushes it back by eta 3GD, so the mean
  // excess loss is of order eta and must shrink like 1/sqrt(T).
  const auto mean_excess = [](int T) {
    LearnerConfig cfg;
    cfg.body = make_box(2);
    cfg.horizon = T;
    cfg.estimator.kind = EstimatorKind::polytope_face;
    const std::vector<LossFunction> losses(T, LossFunction::linear(v2(0.6, 0.8), 2.0, 1.0));
    const Trajectory tr = run_learner(cfg, losses, CounterRng(10));
    double excess = 0.0;
    for (int t = T / 2; t < T; ++t) excess += tr.losses[t] - 0.6;
    return excess / (T / 2);
  };
  const double coarse = mean_excess(300);
  const double fine = mean_excess(4800);
  MESSAGE("mean excess " << coarse << " at T=300, " << fine << " at T=4800");
  CHECK(fine > 0.0);
  CHECK(fine <= 0.5 * coarse);
}

TEST_CASE("invalid learner configs") {
  LearnerConfig cfg = ball_config(10);
  cfg.body = nullptr;
  CHECK_THROWS_AS(Learner(cfg, CounterRng(1)), Error);
  cfg = ball_config(10);
  cfg.estimator.kind = EstimatorKind::polytope_face;
  CHECK_THROWS_AS(Learner(cfg, CounterRng(1)), Error);
  Learner ok(ball_config(10), CounterRng(1));
  CHECK_THROWS_AS(ok.step(LossFunction::linear(Vec::Zero(3), 0.0, 1.0)), Error);
}
