#pragma once

#include <cstdint>
#include <memory>

#include "goco/body.hpp"
#include "goco/loss.hpp"

namespace goco {

/// Which accuracy criterion ends the bisection: width of the gauge interval
/// (gauge) or Euclidean width of the bracket along the ray (projection).
enum class GaugeMode { gauge, projection };

/// gamma is always reported from the inner bracket end, so gamma >= gamma(x)
/// and projection = x / gamma has been certified inside K by the oracle (or by
/// the inner ball).
struct GaugeEvaluation {
  double gamma = 1.0;
  double gamma_lower = 1.0;
  Vec projection;
  std::uint64_t calls_used = 0;
  double tolerance = 0.0;
  bool inside = false;
};

/// Approximates the floored gauge inf{c >= 1 : x/c in K} by bisection along
/// the ray through x. One membership call short-circuits interior points.
GaugeEvaluation gauge_bisect(const ConvexBody& body, const Vec& x, double tolerance,
                             GaugeMode mode = GaugeMode::gauge);

/// x / gamma with the bracket run to Euclidean accuracy `tolerance`.
GaugeEvaluation minkowski_projection(const ConvexBody& body, const Vec& x, double tolerance);
Vec minkowski_project(const ConvexBody& body, const Vec& x, double tolerance);

/// ceil(log2(2 D^2 / (r^2 tol))) + 1; holds for every x with |x| <= 2D.
std::uint64_t gauge_call_budget(const ConvexBody& body, double tolerance);
/// ceil(log2(2 D / tol)) + 1; holds for every x.
std::uint64_t projection_call_budget(const ConvexBody& body, double tolerance);

/// f_hat(x) = f(x) + 3 G D (gamma(x) - 1).
class RegularizedLoss {
 public:
  RegularizedLoss(LossFunction loss, std::shared_ptr<const ConvexBody> body, double tolerance);

  double value(const Vec& x) const;
  double penalty_weight() const;
  const LossFunction& base() const { return loss_; }

 private:
  LossFunction loss_;
  std::shared_ptr<const ConvexBody> body_;
  double tolerance_;
};

}  // namespace goco
