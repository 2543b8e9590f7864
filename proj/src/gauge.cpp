#include "goco/gauge.hpp"

#include <algorithm>
#include <cmath>

#include "goco/error.hpp"

namespace goco {

namespace {

void check_tolerance(double tolerance) {
  if (!(tolerance > 0.0) || !std::isfinite(tolerance))
    throw Error(ErrorCode::invalid_argument, "gauge tolerance must be positive and finite");
}

std::uint64_t ceil_log2(double v) {
  return v <= 1.0 ? 0 : static_cast<std::uint64_t>(std::ceil(std::log2(v)));
}

}  // namespace

GaugeEvaluation gauge_bisect(const ConvexBody& body, const Vec& x, double tolerance, GaugeMode mode) {
  check_tolerance(tolerance);
  if (x.size() != body.dim())
    throw Error(ErrorCode::dimension_mismatch, "gauge point dimension does not match the body");
  if (!x.allFinite()) throw Error(ErrorCode::invalid_argument, "gauge point is not finite");

  GaugeEvaluation out;
  out.tolerance = tolerance;
  out.calls_used = 1;
  if (body.contains(x)) {
    out.inside = true;
    out.projection = x;
    return out;
  }

  // Bracket along the ray s -> s x: x_in = 0 (s = 0) and x_out = x (s = 1),
  // tightened by the geometry: r B inside K puts s = r/|x| inside, and every
  // point of K is within D of the origin so s > D/|x| is outside.
  const double len = x.norm();
  double s_in = 0.0;
  double s_out = 1.0;
  s_in = std::max(s_in, body.inner_radius() / len);
  s_out = std::min(s_out, body.diameter() / len);
  s_in = std::min(s_in, s_out);

  auto resolved = [&] {
    if (mode == GaugeMode::projection) return len * (s_out - s_in) <= tolerance;
    return 1.0 / s_in - 1.0 / s_out <= tolerance;
  };
  while (!resolved()) {
    const double mid = 0.5 * (s_in + s_out);
    if (mid <= s_in || mid >= s_out) break;  // bracket at machine resolution
    ++out.calls_used;
    if (body.contains(mid * x))
      s_in = mid;
    else
      s_out = mid;
  }
  out.gamma = 1.0 / s_in;
  out.gamma_lower = 1.0 / s_out;
  out.projection = x / out.gamma;
  return out;
}

GaugeEvaluation minkowski_projection(const ConvexBody& body, const Vec& x, double tolerance) {
  return gauge_bisect(body, x, tolerance, GaugeMode::projection);
}

Vec minkowski_project(const ConvexBody& body, const Vec& x, double tolerance) {
  return minkowski_projection(body, x, tolerance).projection;
}

std::uint64_t gauge_call_budget(const ConvexBody& body, double tolerance) {
  check_tolerance(tolerance);
  const double r = body.inner_radius();
  const double D = body.diameter();
  return ceil_log2(2.0 * D * D / (r * r * tolerance)) + 1;
}

std::uint64_t projection_call_budget(const ConvexBody& body, double tolerance) {
  check_tolerance(tolerance);
  return ceil_log2(2.0 * body.diameter() / tolerance) + 1;
}

RegularizedLoss::RegularizedLoss(LossFunction loss, std::shared_ptr<const ConvexBody> body, double tolerance)
    : loss_(std::move(loss)), body_(std::move(body)), tolerance_(tolerance) {
  if (!body_) throw Error(ErrorCode::invalid_argument, "regularized loss needs a body");
  check_tolerance(tolerance_);
}

double RegularizedLoss::penalty_weight() const { return 3.0 * loss_.lipschitz() * body_->diameter(); }

double RegularizedLoss::value(const Vec& x) const {
  const GaugeEvaluation g = gauge_bisect(*body_, x, tolerance_);
  return loss_.value(x) + penalty_weight() * (g.gamma - 1.0);
}

}  // namespace goco
