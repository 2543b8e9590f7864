#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "goco/body.hpp"
#include "goco/rng.hpp"

namespace goco {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  double worst = 0.0;  // largest excess over the allowed slack (<= 0 when passing)
  std::string detail;
};

/// Uniform point in the ball of radius `radius`, oversampling the shell
/// just outside K so boundary behaviour is exercised.
Vec sample_point(CounterRng& rng, const ConvexBody& body, double radius);

/// contains(x) versus the defining analytic condition.
CheckResult check_membership(const ConvexBody& body, int samples, CounterRng rng);
/// h <= h_a <= h + log(m)/a, and h <= -log(m)/a  =>  h_a <= 0  =>  h <= 0.
CheckResult check_smoothing_sandwich(const SmoothedPolytopeBody& body, int samples, CounterRng rng);
/// |gamma~ - gamma| <= tol and calls <= ceil(log2(2 D^2 / (r^2 tol))) + 1, for |x| <= 2D.
CheckResult check_gauge_accuracy(const ConvexBody& body, double tol, int samples, CounterRng rng);
/// gamma~(t x1 + (1-t) x2) <= t gamma~(x1) + (1-t) gamma~(x2) + 3 tol.
CheckResult check_gauge_convexity(const ConvexBody& body, double tol, int samples, CounterRng rng);
/// |gamma~(x1) - gamma~(x2)| <= |x1 - x2| / r + 2 tol.
CheckResult check_gauge_lipschitz(const ConvexBody& body, double tol, int samples, CounterRng rng);
/// f^(proj(y)) <= f^(y) + (G r + 3 G D) / (r T^2) for exterior y and linear losses.
CheckResult check_projection_decrease(const ConvexBody& body, int horizon, int samples, CounterRng rng);
/// Finite-difference gradient within its error bound at exterior points.
CheckResult check_fd_gradient(const ConvexBody& body, int horizon, int samples, CounterRng rng);
/// Projected point is inside K after inward rounding, and within tol of x / gamma.
CheckResult check_projection_feasible(const ConvexBody& body, double tol, int samples, CounterRng rng);
/// FLH working set |S_t| <= 4 log2(t) + 4 for every t up to `horizon`.
CheckResult check_flh_working_set(int horizon);
/// Loss gradients bounded by G on the 2D-ball, non-negative values on K and
/// gradients matching central differences.
CheckResult check_losses(const ConvexBody& body, int samples, CounterRng rng);

/// The full invariant suite on the built-in body zoo.
std::vector<CheckResult> run_verification(std::uint64_t seed);

}  // namespace goco
