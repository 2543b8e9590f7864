#include "goco/bench/comparator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "goco/error.hpp"

namespace goco::bench {

LossPrefix::LossPrefix(std::span<const LossFunction> losses) {
  dim_ = losses.empty() ? 0 : losses.front().dim();
  const std::size_t n = losses.size();
  curvature_.assign(n + 1, 0.0);
  constant_.assign(n + 1, 0.0);
  linear_.assign(n + 1, Vec::Zero(dim_));
  for (std::size_t i = 0; i < n; ++i) {
    const LossFunction& f = losses[i];
    if (f.dim() != dim_) throw Error(ErrorCode::dimension_mismatch, "losses must share one dimension");
    curvature_[i + 1] = curvature_[i] + f.curvature();
    linear_[i + 1] = linear_[i] + f.linear_term();
    constant_[i + 1] = constant_[i] + f.constant_term();
  }
}

LossPrefix::Sum LossPrefix::interval(int s, int t) const {
  if (s < 1 || t < s || t > horizon()) throw Error(ErrorCode::invalid_argument, "interval outside [1, T]");
  Sum sum;
  sum.curvature = curvature_[t] - curvature_[s - 1];
  sum.linear = linear_[t] - linear_[s - 1];
  sum.constant = constant_[t] - constant_[s - 1];
  return sum;
}

namespace {

const PolytopeBody* as_polytope(const ConvexBody& body) { return dynamic_cast<const PolytopeBody*>(&body); }

Vec project_ellipsoid(const EllipsoidBody& ell, const Vec& z) {
  const Vec& a = ell.diag();
  if (ell.quadratic_form(z) <= 1.0) return z;
  // x(mu) = z / (1 + mu a) leaves the ellipsoid boundary monotonically as mu grows.
  auto point = [&](double mu) { return Vec(z.array() / (1.0 + mu * a.array())); };
  double lo = 0.0;
  double hi = 1.0;
  while (ell.quadratic_form(point(hi)) > 1.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (ell.quadratic_form(point(mid)) > 1.0 ? lo : hi) = mid;
  }
  return point(hi);
}

// Projection onto {u >= 0, sum u <= s}.
Vec project_corner_simplex(const Vec& u, double s) {
  Vec v = u.cwiseMax(0.0);
  if (v.sum() <= s) return v;
  std::vector<double> sorted(u.data(), u.data() + u.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cum += sorted[i];
    const double candidate = (cum - s) / static_cast<double>(i + 1);
    if (sorted[i] - candidate > 0.0) theta = candidate;
  }
  return (u.array() - theta).cwiseMax(0.0);
}

Vec project_polygon(const PolytopeBody& poly, const Vec& z) {
  if (poly.h_value(z) <= 0.0) return z;
  const auto& vs = poly.vertices();
  Vec best = vs.front();
  double best_dist = (z - best).squaredNorm();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const Vec& p = vs[i];
    const Vec& q = vs[(i + 1) % vs.size()];
    const Vec e = q - p;
    const double len2 = e.squaredNorm();
    const double s = len2 > 0.0 ? std::clamp((z - p).dot(e) / len2, 0.0, 1.0) : 0.0;
    const Vec c = p + s * e;
    const double dist = (z - c).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = c;
    }
  }
  return best;
}

// Away-step conditional gradient for (L/2)|x|^2 + B.x over conv(vertices).
// Returns the iterate; the caller certifies it.
Vec conditional_gradient(const std::vector<Vec>& vs, double L, const Vec& B, double tol) {
  const std::size_t n = vs.size();
  std::vector<double> w(n, 0.0);
  auto linear_argmin = [&](const Vec& g) {
    std::size_t best = 0;
    double val = g.dot(vs[0]);
    for (std::size_t i = 1; i < n; ++i) {
      const double v = g.dot(vs[i]);
      if (v < val) {
        val = v;
        best = i;
      }
    }
    return best;
  };
  std::size_t start = linear_argmin(B);
  w[start] = 1.0;
  Vec x = vs[start];
  for (int it = 0; it < 100000; ++it) {
    const Vec g = L * x + B;
    const std::size_t s = linear_argmin(g);
    const double fw_gap = g.dot(x - vs[s]);
    if (fw_gap <= tol) break;
    std::size_t a = s;
    double a_val = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (w[i] <= 0.0) continue;
      const double v = g.dot(vs[i]);
      if (v > a_val) {
        a_val = v;
        a = i;
      }
    }
    Vec dir;
    double max_step;
    bool toward = g.dot(x - vs[s]) >= g.dot(vs[a] - x);
    if (toward) {
      dir = vs[s] - x;
      max_step = 1.0;
    } else {
      dir = x - vs[a];
      max_step = w[a] < 1.0 ? w[a] / (1.0 - w[a]) : std::numeric_limits<double>::infinity();
    }
    const double dd = dir.squaredNorm();
    if (!(dd > 0.0)) break;
    double step = L > 0.0 ? -g.dot(dir) / (L * dd) : max_step;
    step = std::clamp(step, 0.0, max_step);
    if (!(step > 0.0)) break;
    x += step * dir;
    if (toward) {
      for (double& wi : w) wi *= (1.0 - step);
      w[s] += step;
    } else {
      for (double& wi : w) wi *= (1.0 + step);
      w[a] -= step;
      if (w[a] < 1e-15) w[a] = 0.0;
    }
  }
  return x;
}

}  // namespace

bool has_euclidean_projection(const ConvexBody& body) {
  if (dynamic_cast<const BallBody*>(&body) || dynamic_cast<const EllipsoidBody*>(&body)) return true;
  if (const auto* p = as_polytope(body)) {
    return p->shape() == PolytopeShape::box || p->shape() == PolytopeShape::simplex ||
           p->shape() == PolytopeShape::polygon;
  }
  return false;
}

Vec euclidean_projection(const ConvexBody& body, const Vec& z) {
  if (z.size() != body.dim()) throw Error(ErrorCode::dimension_mismatch, "projection point dimension mismatch");
  if (const auto* ball = dynamic_cast<const BallBody*>(&body)) {
    const double n = z.norm();
    return n <= ball->radius() ? z : Vec(z * (ball->radius() / n));
  }
  if (const auto* ell = dynamic_cast<const EllipsoidBody*>(&body)) return project_ellipsoid(*ell, z);
  if (const auto* p = as_polytope(body)) {
    switch (p->shape()) {
      case PolytopeShape::box: return z.cwiseMax(p->box_lower()).cwiseMin(p->box_upper());
      case PolytopeShape::simplex: {
        const double r = p->inner_radius();
        const Vec shift = Vec::Constant(z.size(), r);
        return project_corner_simplex(z + shift, p->simplex_scale()) - shift;
      }
      case PolytopeShape::polygon: return project_polygon(*p, z);
      case PolytopeShape::general: break;
    }
  }
  throw Error(ErrorCode::unsupported, "no exact Euclidean projection for body kind " + to_string(body.kind()));
}

Vec linear_minimizer(const ConvexBody& body, const Vec& g) {
  if (g.size() != body.dim()) throw Error(ErrorCode::dimension_mismatch, "direction dimension mismatch");
  const double gn = g.norm();
  if (gn == 0.0) return Vec::Zero(g.size());
  if (const auto* ball = dynamic_cast<const BallBody*>(&body)) return -ball->radius() * g / gn;
  if (const auto* ell = dynamic_cast<const EllipsoidBody*>(&body)) {
    const Vec ainv_g = g.array() / ell->diag().array();
    return -ainv_g / std::sqrt(g.dot(ainv_g));
  }
  if (const auto* p = as_polytope(body)) {
    if (p->shape() == PolytopeShape::box) {
      Vec x(g.size());
      for (Eigen::Index i = 0; i < g.size(); ++i) x[i] = g[i] > 0.0 ? p->box_lower()[i] : p->box_upper()[i];
      return x;
    }
    const auto& vs = p->vertices();
    if (!vs.empty()) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < vs.size(); ++i)
        if (g.dot(vs[i]) < g.dot(vs[best])) best = i;
      return vs[best];
    }
  }
  throw Error(ErrorCode::unsupported, "no exact linear minimization for body kind " + to_string(body.kind()));
}

ComparatorResult offline_comparator(const ConvexBody& body, const LossPrefix::Sum& sum) {
  if (sum.linear.size() != body.dim()) throw Error(ErrorCode::dimension_mismatch, "comparator dimension mismatch");
  // Smoothing only shrinks the set the learner plays in; regret is still
  // measured against the original polytope, which contains K_a.
  if (const auto* sm = dynamic_cast<const SmoothedPolytopeBody*>(&body)) {
    ComparatorResult res = offline_comparator(sm->base(), sum);
    res.method += " (base polytope)";
    return res;
  }
  ComparatorResult res;
  if (sum.curvature > 0.0) {
    const Vec target = -sum.linear / sum.curvature;
    if (has_euclidean_projection(body)) {
      res.point = euclidean_projection(body, target);
      res.method = "exact_projection";
    } else if (const auto* p = as_polytope(body); p && !p->vertices().empty()) {
      const double scale = std::max(1.0, sum.curvature * body.diameter() * body.diameter() + sum.linear.norm() * body.diameter());
      res.point = conditional_gradient(p->vertices(), sum.curvature, sum.linear, 1e-12 * scale);
      res.method = "conditional_gradient";
    } else {
      throw Error(ErrorCode::unsupported, "no certified comparator for quadratic losses on " + to_string(body.kind()));
    }
  } else {
    res.point = linear_minimizer(body, sum.linear);
    res.method = "linear_minimization";
  }
  res.value = sum.value(res.point);
  const Vec grad = sum.gradient(res.point);
  const Vec s = linear_minimizer(body, grad);
  res.gap = std::max(0.0, grad.dot(res.point - s));
  return res;
}

ComparatorResult offline_comparator(const ConvexBody& body, const LossPrefix& prefix, int s, int t) {
  return offline_comparator(body, prefix.interval(s, t));
}

}  // namespace goco::bench
