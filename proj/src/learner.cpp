#include "goco/learner.hpp"

#include <cmath>

#include "goco/error.hpp"
#include "goco/gauge.hpp"

namespace goco {

std::string to_string(Schedule s) {
  switch (s) {
    case Schedule::convex: return "convex";
    case Schedule::strongly_convex: return "strongly_convex";
    case Schedule::adaptive_smooth: return "adaptive_smooth";
  }
  return "unknown";
}

Schedule schedule_from_string(const std::string& name) {
  if (name == "convex") return Schedule::convex;
  if (name == "strongly_convex") return Schedule::strongly_convex;
  if (name == "adaptive_smooth") return Schedule::adaptive_smooth;
  throw Error(ErrorCode::config, "unknown schedule '" + name + "'");
}

double step_size(Schedule schedule, int t, int horizon, double G, double D, double r, double lambda_sc) {
  if (t < 1 || t > horizon) throw Error(ErrorCode::invalid_argument, "round index outside [1, T]");
  switch (schedule) {
    case Schedule::convex: return r / (std::sqrt(static_cast<double>(horizon)) * G);
    case Schedule::strongly_convex:
      if (!(lambda_sc > 0.0))
        throw Error(ErrorCode::invalid_argument, "strongly convex schedule needs lambda > 0");
      return 1.0 / (lambda_sc * t);
    case Schedule::adaptive_smooth: return D / (std::sqrt(static_cast<double>(horizon)) * G);
  }
  throw Error(ErrorCode::internal, "unhandled schedule");
}

std::string events_to_string(std::uint32_t events) {
  if (events == kEventNone) return "-";
  std::string out;
  auto add = [&](std::uint32_t bit, const char* name) {
    if (!(events & bit)) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(kEventDegenerate, "degenerate");
  add(kEventTie, "tie");
  add(kEventFallback, "fallback");
  return out;
}

double lazy_iterate_bound(double r, double D) {
  const double k = 2.0 + 3.0 * D / r;
  return (r / 3.0) * k * k + 3.0 * D + 2.0 * r;
}

Learner::Learner(LearnerConfig cfg, CounterRng rng) : cfg_(std::move(cfg)), rng_(rng) {
  if (!cfg_.body) throw Error(ErrorCode::invalid_argument, "learner needs a body");
  if (cfg_.horizon < 1) throw Error(ErrorCode::invalid_argument, "learner horizon must be at least 1");
  if (!(cfg_.lipschitz > 0.0)) throw Error(ErrorCode::invalid_argument, "Lipschitz constant must be positive");
  if (cfg_.schedule == Schedule::strongly_convex && !(cfg_.strong_convexity > 0.0))
    throw Error(ErrorCode::invalid_argument, "strongly convex schedule needs lambda > 0");
  if (cfg_.fixed_step && !(*cfg_.fixed_step > 0.0))
    throw Error(ErrorCode::invalid_argument, "fixed step must be positive");
  if (cfg_.accuracy_horizon < 0) throw Error(ErrorCode::invalid_argument, "accuracy horizon must be non-negative");
  const ConvexBody* body = cfg_.body.get();
  if (cfg_.estimator.kind == EstimatorKind::polytope_face && !dynamic_cast<const PolytopeBody*>(body))
    throw Error(ErrorCode::config, "polytope_face estimator needs a polytope body");
  if (cfg_.estimator.kind == EstimatorKind::smoothed_polytope && !dynamic_cast<const SmoothedPolytopeBody*>(body))
    throw Error(ErrorCode::config, "smoothed_polytope estimator needs a smoothed polytope body");
  if (cfg_.estimator.kind == EstimatorKind::analytic && !dynamic_cast<const BallBody*>(body) &&
      !dynamic_cast<const EllipsoidBody*>(body))
    throw Error(ErrorCode::config, "analytic estimator needs a ball or an ellipsoid");
  const auto T = static_cast<double>(accuracy_horizon());
  delta_ = 1.0 / (T * T);
  y_ = Vec::Zero(cfg_.body->dim());
  x_ = y_;
}

GradientEstimate Learner::estimate(const Vec& y) {
  const ConvexBody& body = *cfg_.body;
  const double T = accuracy_horizon();
  switch (cfg_.estimator.kind) {
    case EstimatorKind::finite_difference:
      return estimate_grad_fd(body, y, FdConfig::for_horizon(body.dim(), T, cfg_.estimator.beta));
    case EstimatorKind::randomized: return estimate_grad_randomized(body, y, delta_, rng_);
    case EstimatorKind::polytope_face: {
      const auto* poly = dynamic_cast<const PolytopeBody*>(&body);
      if (!poly) throw Error(ErrorCode::config, "polytope_face estimator needs a polytope body");
      return estimate_grad_polytope_face(*poly, y, T, rng_);
    }
    case EstimatorKind::smoothed_polytope: {
      const auto* sm = dynamic_cast<const SmoothedPolytopeBody*>(&body);
      if (!sm) throw Error(ErrorCode::config, "smoothed_polytope estimator needs a smoothed polytope body");
      return estimate_grad_smoothed_polytope(*sm, y, T);
    }
    case EstimatorKind::analytic: return analytic_gauge_grad(body, y);
  }
  throw Error(ErrorCode::internal, "unhandled estimator");
}

Vec Learner::regularized_gradient(const LossFunction& f, const Vec& y, GradientEstimate* out) {
  GradientEstimate est = estimate(y);
  const double weight = 3.0 * cfg_.lipschitz * cfg_.body->diameter();
  Vec g = f.gradient(y) + weight * est.vector;
  if (out) *out = std::move(est);
  return g;
}

Learner::StepResult Learner::step(const LossFunction& f) {
  if (t_ >= cfg_.horizon) throw Error(ErrorCode::invalid_argument, "learner ran past its horizon");
  if (f.dim() != cfg_.body->dim()) throw Error(ErrorCode::dimension_mismatch, "loss dimension mismatch");
  ++t_;
  StepResult res;
  res.loss = f.value(x_);

  GradientEstimate est;
  const Vec g = regularized_gradient(f, y_, &est);
  if (!g.allFinite()) throw Error(ErrorCode::numeric, "regularized gradient is not finite");
  if (est.degenerate) res.events |= kEventDegenerate;
  if (est.tie) res.events |= kEventTie;
  if (est.fell_back) res.events |= kEventFallback;

  const ConvexBody& body = *cfg_.body;
  res.step = cfg_.fixed_step ? *cfg_.fixed_step
                             : step_size(cfg_.schedule, t_, cfg_.horizon, cfg_.lipschitz, body.diameter(),
                                         body.inner_radius(), cfg_.strong_convexity);
  y_ -= res.step * g;
  const GaugeEvaluation proj = minkowski_projection(body, y_, delta_);
  x_ = proj.projection;
  res.calls = est.calls_used + proj.calls_used;
  return res;
}

Trajectory run_learner(const LearnerConfig& cfg, std::span<const LossFunction> losses, CounterRng rng) {
  Trajectory traj;
  if (losses.empty()) return traj;
  LearnerConfig c = cfg;
  c.horizon = static_cast<int>(losses.size());
  Learner learner(std::move(c), rng);
  traj.played.reserve(losses.size());
  traj.losses.reserve(losses.size());
  traj.calls.reserve(losses.size());
  traj.events.reserve(losses.size());
  for (const LossFunction& f : losses) {
    traj.played.push_back(learner.play());
    traj.max_lazy_norm = std::max(traj.max_lazy_norm, learner.lazy_iterate().norm());
    const Learner::StepResult res = learner.step(f);
    traj.losses.push_back(res.loss);
    traj.calls.push_back(res.calls);
    traj.events.push_back(res.events);
  }
  traj.max_lazy_norm = std::max(traj.max_lazy_norm, learner.lazy_iterate().norm());
  return traj;
}

}  // namespace goco
