#include "goco/grad.hpp"

#include <cmath>

#include "goco/error.hpp"
#include "goco/gauge.hpp"

namespace goco {

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::randomized: return "randomized";
    case EstimatorKind::finite_difference: return "finite_difference";
    case EstimatorKind::polytope_face: return "polytope_face";
    case EstimatorKind::smoothed_polytope: return "smoothed_polytope";
    case EstimatorKind::analytic: return "analytic";
  }
  return "unknown";
}

EstimatorKind estimator_from_string(const std::string& name) {
  if (name == "randomized") return EstimatorKind::randomized;
  if (name == "finite_difference" || name == "fd") return EstimatorKind::finite_difference;
  if (name == "polytope_face") return EstimatorKind::polytope_face;
  if (name == "smoothed_polytope") return EstimatorKind::smoothed_polytope;
  if (name == "analytic") return EstimatorKind::analytic;
  throw Error(ErrorCode::config, "unknown estimator '" + name + "'");
}

namespace {

FdConfig clamped(double tol, double step, double beta) {
  FdConfig cfg;
  cfg.beta = beta;
  if (tol < FdConfig::kMinGaugeTol) {
    tol = FdConfig::kMinGaugeTol;
    step = std::max(step, 2.0 * std::sqrt(tol));
  }
  cfg.gauge_tol = tol;
  cfg.fd_step = step;
  return cfg;
}

void check_horizon(double horizon) {
  if (!(horizon >= 1.0) || !std::isfinite(horizon))
    throw Error(ErrorCode::invalid_argument, "horizon must be at least 1");
}

GradientEstimate zero_estimate(int dim, EstimatorKind kind, std::uint64_t calls) {
  GradientEstimate est;
  est.vector = Vec::Zero(dim);
  est.kind = kind;
  est.calls_used = calls;
  est.inside = true;
  est.error_bound = 0.0;
  return est;
}

}  // namespace

FdConfig FdConfig::for_horizon(int dim, double horizon, double beta) {
  check_horizon(horizon);
  const double d = dim;
  return clamped(1.0 / (d * std::pow(horizon, 5.0)), 1.0 / (std::sqrt(d) * std::pow(horizon, 2.5)), beta);
}

FdConfig FdConfig::for_smoothed(int dim, double horizon, double beta) {
  check_horizon(horizon);
  const double d = dim;
  return clamped(1.0 / (d * std::pow(horizon, 11.0)), 1.0 / (std::sqrt(d) * std::pow(horizon, 5.5)), beta);
}

double fd_error_bound(int dim, const FdConfig& cfg, double beta) {
  return std::sqrt(static_cast<double>(dim)) *
         (cfg.fd_step * beta * beta / 2.0 + 2.0 * cfg.gauge_tol / cfg.fd_step);
}

std::uint64_t fd_call_budget(const ConvexBody& body, const FdConfig& cfg) {
  return static_cast<std::uint64_t>(body.dim() + 1) * gauge_call_budget(body, cfg.gauge_tol);
}

GradientEstimate estimate_grad_fd(const ConvexBody& body, const Vec& x, const FdConfig& cfg) {
  if (!(cfg.fd_step > 0.0) || !(cfg.gauge_tol > 0.0))
    throw Error(ErrorCode::invalid_argument, "fd_step and gauge_tol must be positive");
  const int d = body.dim();
  const GaugeEvaluation base = gauge_bisect(body, x, cfg.gauge_tol);
  if (base.inside) return zero_estimate(d, EstimatorKind::finite_difference, base.calls_used);

  GradientEstimate est;
  est.kind = EstimatorKind::finite_difference;
  est.vector = Vec::Zero(d);
  est.calls_used = base.calls_used;
  Vec probe = x;
  for (int i = 0; i < d; ++i) {
    probe[i] = x[i] + cfg.fd_step;
    const GaugeEvaluation g = gauge_bisect(body, probe, cfg.gauge_tol);
    probe[i] = x[i];
    est.calls_used += g.calls_used;
    if (g.inside) est.degenerate = true;
    est.vector[i] = (g.gamma - base.gamma) / cfg.fd_step;
  }
  const std::optional<double> beta = cfg.beta > 0.0 ? std::optional<double>(cfg.beta) : body.gauge_smoothness();
  if (beta) est.error_bound = fd_error_bound(d, cfg, *beta);
  return est;
}

GradientEstimate estimate_grad_randomized(const ConvexBody& body, const Vec& x, double gauge_tol,
                                          CounterRng& rng) {
  if (!(gauge_tol > 0.0)) throw Error(ErrorCode::invalid_argument, "gauge_tol must be positive");
  const int d = body.dim();
  const GaugeEvaluation base = gauge_bisect(body, x, gauge_tol);
  if (base.inside) return zero_estimate(d, EstimatorKind::randomized, base.calls_used);

  const std::size_t i = rng.index(static_cast<std::size_t>(d));
  const double mu = std::sqrt(gauge_tol) * body.inner_radius();
  Vec probe = x;
  probe[static_cast<Eigen::Index>(i)] += mu;
  const GaugeEvaluation g = gauge_bisect(body, probe, gauge_tol);

  GradientEstimate est;
  est.kind = EstimatorKind::randomized;
  est.vector = Vec::Zero(d);
  est.vector[static_cast<Eigen::Index>(i)] = d * (g.gamma - base.gamma) / mu;
  est.calls_used = base.calls_used + g.calls_used;
  est.degenerate = g.inside;
  return est;
}

GradientEstimate estimate_grad_polytope_face(const PolytopeBody& body, const Vec& x, double horizon,
                                             CounterRng& rng, FaceOptions opts) {
  check_horizon(horizon);
  const int d = body.dim();
  const double D = body.diameter();
  const double r = body.inner_radius();
  const double tol = std::max(1.0 / std::pow(horizon, 4.0), 1e-13 * std::max(1.0, D));
  const double rho = D / std::pow(horizon, 3.0);

  GradientEstimate est;
  est.kind = EstimatorKind::polytope_face;
  const int attempts = opts.perturb ? 2 : 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    Vec z = x;
    if (opts.perturb) z += rho * random_unit_vector(rng, d);
    const GaugeEvaluation g = minkowski_projection(body, z, tol);
    est.calls_used += g.calls_used;
    if (g.inside) {
      GradientEstimate zero = zero_estimate(d, EstimatorKind::polytope_face, est.calls_used);
      zero.retries = est.retries;
      zero.row_evals = est.row_evals;
      return zero;
    }
    const ActiveFace face = body.active_face(g.projection);
    est.row_evals += static_cast<std::uint64_t>(body.rows());
    if (!face.tied || !opts.perturb) {
      const Vec alpha = body.normals().row(face.index).transpose();
      est.vector = alpha / g.projection.dot(alpha);
      est.face = face.index;
      est.tie = face.tied;
      if (!face.tied) est.error_bound = tol / (r * (r - tol));
      return est;
    }
    ++est.retries;
  }

  // Two perturbations both landed on an edge: fall back to the smoothed body.
  std::shared_ptr<const PolytopeBody> self;
  try {
    self = body.shared_from_this();
  } catch (const std::bad_weak_ptr&) {
    throw Error(ErrorCode::unsupported, "polytope fallback needs a shared_ptr-owned body");
  }
  const double m = body.rows();
  const double a = std::max(std::pow(horizon, 3.0), 2.0 * std::log(m) / r);
  const auto smoothed = make_smoothed(self, a, /*share_counter=*/true);
  GradientEstimate fb = estimate_grad_smoothed_polytope(*smoothed, x, horizon);
  fb.calls_used += est.calls_used;
  fb.row_evals += est.row_evals;
  fb.retries = est.retries;
  fb.tie = true;
  fb.fell_back = true;
  return fb;
}

GradientEstimate estimate_grad_smoothed_polytope(const SmoothedPolytopeBody& body, const Vec& x,
                                                 double horizon) {
  const FdConfig cfg = FdConfig::for_smoothed(body.dim(), horizon);
  GradientEstimate est = estimate_grad_fd(body, x, cfg);
  est.kind = EstimatorKind::smoothed_polytope;
  // Each smoothed membership query evaluates every constraint row.
  est.row_evals = est.calls_used * static_cast<std::uint64_t>(body.base().rows());
  return est;
}

GradientEstimate analytic_gauge_grad(const ConvexBody& body, const Vec& x) {
  if (x.size() != body.dim()) throw Error(ErrorCode::dimension_mismatch, "gradient point dimension mismatch");
  GradientEstimate est;
  est.kind = EstimatorKind::analytic;
  est.error_bound = 0.0;
  if (const auto* ball = dynamic_cast<const BallBody*>(&body)) {
    const double n = x.norm();
    if (n <= ball->radius()) {
      est.vector = Vec::Zero(x.size());
      est.inside = true;
    } else {
      est.vector = x / (ball->radius() * n);
    }
    return est;
  }
  if (const auto* ell = dynamic_cast<const EllipsoidBody*>(&body)) {
    const double q = std::sqrt(ell->quadratic_form(x));
    if (q <= 1.0) {
      est.vector = Vec::Zero(x.size());
      est.inside = true;
    } else {
      est.vector = ell->diag().cwiseProduct(x) / q;
    }
    return est;
  }
  throw Error(ErrorCode::unsupported, "analytic gauge gradient is only available for balls and ellipsoids");
}

}  // namespace goco
