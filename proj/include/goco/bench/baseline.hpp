#pragma once

#include <optional>
#include <span>

#include "goco/learner.hpp"

namespace goco::bench {

/// Online gradient descent with exact Euclidean projection, used as a
/// reference learner. Step D/(G sqrt(T)) for convex runs, 1/(lambda t) for
/// strongly convex ones.
class ProjectedOgd {
 public:
  ProjectedOgd(std::shared_ptr<const ConvexBody> body, int horizon, double lipschitz, Schedule schedule,
               double strong_convexity = 0.0);

  const Vec& play() const { return x_; }
  double step(const LossFunction& f);
  int round() const { return t_; }

 private:
  std::shared_ptr<const ConvexBody> body_;
  int horizon_;
  double lipschitz_;
  Schedule schedule_;
  double lambda_;
  Vec x_;
  int t_ = 0;
};

}  // namespace goco::bench
