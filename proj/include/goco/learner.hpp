#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "goco/body.hpp"
#include "goco/grad.hpp"
#include "goco/loss.hpp"
#include "goco/rng.hpp"

namespace goco {

enum class Schedule { convex, strongly_convex, adaptive_smooth };

std::string to_string(Schedule s);
Schedule schedule_from_string(const std::string& name);

/// convex: r/(sqrt(T) G); strongly_convex: 1/(lambda t); adaptive_smooth: D/(sqrt(T) G).
double step_size(Schedule schedule, int t, int horizon, double G, double D, double r, double lambda_sc);

/// Bit flags describing estimator incidents in a round.
enum EstimatorEvent : std::uint32_t {
  kEventNone = 0,
  kEventDegenerate = 1u << 0,
  kEventTie = 1u << 1,
  kEventFallback = 1u << 2,
};

std::string events_to_string(std::uint32_t events);

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::finite_difference;
  double beta = 0.0;  // fd smoothness override; <= 0 uses the body's value
};

struct LearnerConfig {
  std::shared_ptr<const ConvexBody> body;
  int horizon = 1;
  double lipschitz = 1.0;        // G
  double strong_convexity = 0.0; // lambda_sc
  Schedule schedule = Schedule::convex;
  EstimatorConfig estimator;
  std::optional<double> fixed_step;  // overrides the schedule when set
  // Horizon used for the accuracy targets (delta = 1/T^2, estimator tolerances).
  // 0 means "same as horizon"; meta experts live shorter than the run they serve.
  int accuracy_horizon = 0;
};

/// Lazy online gradient descent on f_hat = f + 3GD(gamma - 1): the unconstrained
/// iterate y is updated with the regularized gradient and the played point is
/// its Minkowski projection at accuracy 1/T^2.
class Learner {
 public:
  struct StepResult {
    double loss = 0.0;                 // f_t(x_t)
    std::uint64_t calls = 0;           // membership calls this round
    std::uint32_t events = kEventNone;
    double step = 0.0;
  };

  Learner(LearnerConfig cfg, CounterRng rng);

  /// x_t, the point played in the current round.
  const Vec& play() const { return x_; }
  /// y_t, the lazy iterate.
  const Vec& lazy_iterate() const { return y_; }
  /// Rounds completed so far (the next step is round t = round() + 1).
  int round() const { return t_; }
  int horizon() const { return cfg_.horizon; }
  double delta() const { return delta_; }
  int accuracy_horizon() const { return cfg_.accuracy_horizon > 0 ? cfg_.accuracy_horizon : cfg_.horizon; }
  const LearnerConfig& config() const { return cfg_; }

  /// Suffers f_t(x_t), then moves y along the regularized gradient at y_t and
  /// re-projects.
  StepResult step(const LossFunction& f);

  /// Regularized gradient at y as used by step(); exposed for tests.
  Vec regularized_gradient(const LossFunction& f, const Vec& y, GradientEstimate* est = nullptr);

 private:
  GradientEstimate estimate(const Vec& y);

  LearnerConfig cfg_;
  CounterRng rng_;
  Vec y_;
  Vec x_;
  int t_ = 0;
  double delta_;
};

struct Trajectory {
  std::vector<Vec> played;
  std::vector<double> losses;
  std::vector<std::uint64_t> calls;
  std::vector<std::uint32_t> events;
  double max_lazy_norm = 0.0;
};

/// Runs the lazy gauge learner over the whole loss sequence; |losses| is the horizon.
Trajectory run_learner(const LearnerConfig& cfg, std::span<const LossFunction> losses, CounterRng rng);

/// Bound on |y_t| for the adaptive_smooth schedule: (r/3)(2 + 3D/r)^2 + 3D + 2r.
double lazy_iterate_bound(double r, double D);

}  // namespace goco
