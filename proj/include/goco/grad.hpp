#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "goco/body.hpp"
#include "goco/rng.hpp"

namespace goco {

enum class EstimatorKind { randomized, finite_difference, polytope_face, smoothed_polytope, analytic };

std::string to_string(EstimatorKind kind);
EstimatorKind estimator_from_string(const std::string& name);

/// Estimate of the gauge gradient plus the bookkeeping the learner logs.
struct GradientEstimate {
  Vec vector;
  std::uint64_t calls_used = 0;
  std::uint64_t row_evals = 0;
  EstimatorKind kind = EstimatorKind::finite_difference;
  std::optional<double> error_bound;
  bool inside = false;       // x in K, vector is zero
  bool degenerate = false;   // an FD probe landed inside K
  bool tie = false;          // polytope face tie survived
  int retries = 0;           // polytope face re-perturbations
  bool fell_back = false;    // polytope face handed over to smoothed FD
  int face = -1;
};

/// Forward-difference parameters. fd_step is the difference step, gauge_tol the
/// accuracy of each gauge evaluation, beta the smoothness constant (beta^2
/// bounds the gauge Hessian; <= 0 means "take it from the body").
struct FdConfig {
  double fd_step = 1e-6;
  double gauge_tol = 1e-12;
  double beta = 0.0;

  /// Smallest gauge accuracy the bisection can deliver reliably in double precision.
  static constexpr double kMinGaugeTol = 1e-12;

  /// fd_step = 1/(sqrt(d) T^2.5), gauge_tol = 1/(d T^5); clamped to kMinGaugeTol,
  /// in which case fd_step is raised to 2 sqrt(gauge_tol) to balance the error terms.
  static FdConfig for_horizon(int dim, double horizon, double beta = 0.0);
  /// fd_step = 1/(sqrt(d) T^5.5), gauge_tol = 1/(d T^11), same clamping rule.
  static FdConfig for_smoothed(int dim, double horizon, double beta = 0.0);
};

/// sqrt(d) (fd_step beta^2 / 2 + 2 gauge_tol / fd_step).
double fd_error_bound(int dim, const FdConfig& cfg, double beta);
/// (d + 1) (ceil(log2(2 D^2 / (r^2 gauge_tol))) + 1).
std::uint64_t fd_call_budget(const ConvexBody& body, const FdConfig& cfg);

/// Coordinate i is (gamma(x + h e_i) - gamma(x)) / h, with gamma(x) evaluated once.
GradientEstimate estimate_grad_fd(const ConvexBody& body, const Vec& x, const FdConfig& cfg);

/// One random coordinate, scaled by d: s = d (gamma(x + mu e_i) - gamma(x)) / mu e_i
/// with mu = sqrt(gauge_tol) r. Unbiased for the full forward difference.
GradientEstimate estimate_grad_randomized(const ConvexBody& body, const Vec& x, double gauge_tol,
                                          CounterRng& rng);

struct FaceOptions {
  bool perturb = true;
};

/// Perturbs x by D/T^3 in a uniform direction, projects with accuracy 1/T^4,
/// reads the active face i* and returns alpha_i* / (p . alpha_i*).
/// A surviving tie is retried once, then handed to the smoothed-polytope
/// estimator. Without perturbation a tie is reported, not retried.
GradientEstimate estimate_grad_polytope_face(const PolytopeBody& body, const Vec& x, double horizon,
                                             CounterRng& rng, FaceOptions opts = {});

/// Forward differences against K_a with the smoothed-body step sizes.
GradientEstimate estimate_grad_smoothed_polytope(const SmoothedPolytopeBody& body, const Vec& x,
                                                 double horizon);

/// Closed-form gradient for balls (x/(R|x|)) and axis ellipsoids (Ax/sqrt(x'Ax)).
GradientEstimate analytic_gauge_grad(const ConvexBody& body, const Vec& x);

}  // namespace goco
