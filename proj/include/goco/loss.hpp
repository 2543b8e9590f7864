#pragma once

#include <Eigen/Core>

namespace goco {

using Vec = Eigen::VectorXd;

/// Loss of the form f(x) = (c/2)|x|^2 + b.x + k, defined on all of R^d.
/// Covers linear losses (c = 0) and isotropic quadratics (lambda/2)|x - theta|^2 + offset,
/// and keeps interval sums in closed form for the comparators.
class LossFunction {
 public:
  LossFunction() = default;

  /// g.x + c with declared Lipschitz constant G >= |g|.
  static LossFunction linear(Vec g, double c, double lipschitz);
  /// (lambda/2)|x - center|^2 + offset with declared Lipschitz constant G on
  /// the region the caller cares about.
  static LossFunction quadratic(double lambda, const Vec& center, double offset, double lipschitz);

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;

  int dim() const { return static_cast<int>(linear_.size()); }
  double lipschitz() const { return lipschitz_; }
  /// Strong-convexity modulus; 0 for linear losses.
  double strong_convexity() const { return curvature_; }

  double curvature() const { return curvature_; }
  const Vec& linear_term() const { return linear_; }
  double constant_term() const { return constant_; }

 private:
  double curvature_ = 0.0;
  Vec linear_;
  double constant_ = 0.0;
  double lipschitz_ = 0.0;
};

}  // namespace goco
