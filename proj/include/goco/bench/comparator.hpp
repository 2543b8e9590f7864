#pragma once

#include <span>
#include <string>
#include <vector>

#include "goco/body.hpp"
#include "goco/loss.hpp"

namespace goco::bench {

/// Prefix sums of the loss coefficients, so any interval sum
/// sum_{s..t} f_tau(x) = (C/2)|x|^2 + B.x + K is available in O(d).
class LossPrefix {
 public:
  explicit LossPrefix(std::span<const LossFunction> losses);

  struct Sum {
    double curvature = 0.0;
    Vec linear;
    double constant = 0.0;
    double value(const Vec& x) const { return 0.5 * curvature * x.squaredNorm() + linear.dot(x) + constant; }
    Vec gradient(const Vec& x) const { return curvature * x + linear; }
  };

  /// Rounds s..t, 1-based and inclusive.
  Sum interval(int s, int t) const;
  int horizon() const { return static_cast<int>(curvature_.size()) - 1; }
  int dim() const { return dim_; }

 private:
  int dim_ = 0;
  std::vector<double> curvature_;
  std::vector<Vec> linear_;
  std::vector<double> constant_;
};

struct ComparatorResult {
  Vec point;
  double value = 0.0;  // interval loss of `point`, evaluated from the prefix sums
  double gap = 0.0;    // certified: value - optimum <= gap
  std::string method;
};

/// Exact Euclidean projection for bodies where it has a closed form or a
/// certified one-dimensional reduction (ball, ellipsoid, box, simplex, polygon).
/// Anything else is rejected.
Vec euclidean_projection(const ConvexBody& body, const Vec& z);
bool has_euclidean_projection(const ConvexBody& body);

/// argmin over K of g.x, by closed form or vertex enumeration.
Vec linear_minimizer(const ConvexBody& body, const Vec& g);

/// Best fixed point in hindsight for an interval sum. A smoothed polytope is
/// compared against its base polytope. Never uses the gauge
/// machinery. The gap is the linear-minimization certificate
/// grad.(x - argmin grad.z), which bounds the suboptimality of any feasible x.
ComparatorResult offline_comparator(const ConvexBody& body, const LossPrefix::Sum& sum);
ComparatorResult offline_comparator(const ConvexBody& body, const LossPrefix& prefix, int s, int t);

}  // namespace goco::bench
