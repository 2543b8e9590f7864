#include "goco/loss.hpp"

#include <cmath>

#include "goco/error.hpp"

namespace goco {

LossFunction LossFunction::linear(Vec g, double c, double lipschitz) {
  if (!g.allFinite() || !std::isfinite(c)) throw Error(ErrorCode::invalid_argument, "linear loss must be finite");
  if (!(lipschitz >= g.norm() * (1.0 - 1e-12)))
    throw Error(ErrorCode::invalid_argument, "declared Lipschitz constant is below |g|");
  LossFunction f;
  f.linear_ = std::move(g);
  f.constant_ = c;
  f.lipschitz_ = lipschitz;
  return f;
}

LossFunction LossFunction::quadratic(double lambda, const Vec& center, double offset, double lipschitz) {
  if (!(lambda > 0.0) || !center.allFinite() || !std::isfinite(offset))
    throw Error(ErrorCode::invalid_argument, "quadratic loss needs lambda > 0 and finite parameters");
  if (!(lipschitz > 0.0)) throw Error(ErrorCode::invalid_argument, "Lipschitz constant must be positive");
  LossFunction f;
  f.curvature_ = lambda;
  f.linear_ = -lambda * center;
  f.constant_ = 0.5 * lambda * center.squaredNorm() + offset;
  f.lipschitz_ = lipschitz;
  return f;
}

double LossFunction::value(const Vec& x) const {
  if (x.size() != linear_.size()) throw Error(ErrorCode::dimension_mismatch, "loss dimension mismatch");
  return 0.5 * curvature_ * x.squaredNorm() + linear_.dot(x) + constant_;
}

Vec LossFunction::gradient(const Vec& x) const {
  if (x.size() != linear_.size()) throw Error(ErrorCode::dimension_mismatch, "loss dimension mismatch");
  return curvature_ * x + linear_;
}

}  // namespace goco
