#include "goco/bench/baseline.hpp"

#include <cmath>

#include "goco/bench/comparator.hpp"
#include "goco/error.hpp"

namespace goco::bench {

ProjectedOgd::ProjectedOgd(std::shared_ptr<const ConvexBody> body, int horizon, double lipschitz, Schedule schedule,
                           double strong_convexity)
    : body_(std::move(body)), horizon_(horizon), lipschitz_(lipschitz), schedule_(schedule), lambda_(strong_convexity) {
  if (!body_) throw Error(ErrorCode::invalid_argument, "baseline needs a body");
  if (!has_euclidean_projection(*body_))
    throw Error(ErrorCode::unsupported, "projected OGD needs an exact Euclidean projection");
  if (horizon_ < 1 || !(lipschitz_ > 0.0)) throw Error(ErrorCode::invalid_argument, "invalid baseline constants");
  if (schedule_ == Schedule::strongly_convex && !(lambda_ > 0.0))
    throw Error(ErrorCode::invalid_argument, "strongly convex schedule needs lambda > 0");
  x_ = Vec::Zero(body_->dim());
}

double ProjectedOgd::step(const LossFunction& f) {
  if (t_ >= horizon_) throw Error(ErrorCode::invalid_argument, "baseline ran past its horizon");
  ++t_;
  const double loss = f.value(x_);
  const double eta = schedule_ == Schedule::strongly_convex
                         ? 1.0 / (lambda_ * t_)
                         : body_->diameter() / (lipschitz_ * std::sqrt(static_cast<double>(horizon_)));
  x_ = euclidean_projection(*body_, x_ - eta * f.gradient(x_));
  return loss;
}

}  // namespace goco::bench
