#include "goco/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "goco/bench/comparator.hpp"
#include "goco/bench/config.hpp"
#include "goco/bench/generate.hpp"
#include "goco/error.hpp"
#include "goco/gauge.hpp"
#include "goco/grad.hpp"
#include "goco/meta.hpp"

namespace goco {

namespace {

// Reference membership, written out independently of the body classes.
bool reference_member(const ConvexBody& body, const Vec& x) {
  if (const auto* ball = dynamic_cast<const BallBody*>(&body)) {
    long double s = 0.0L;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += static_cast<long double>(x[i]) * x[i];
    return s <= static_cast<long double>(ball->radius()) * ball->radius();
  }
  if (const auto* ell = dynamic_cast<const EllipsoidBody*>(&body)) {
    long double s = 0.0L;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += static_cast<long double>(ell->diag()[i]) * x[i] * x[i];
    return s <= 1.0L;
  }
  if (const auto* poly = dynamic_cast<const PolytopeBody*>(&body)) {
    for (int i = 0; i < poly->rows(); ++i) {
      long double v = poly->offsets()[i];
      for (Eigen::Index k = 0; k < x.size(); ++k) v += static_cast<long double>(poly->normals()(i, k)) * x[k];
      if (v > 0.0L) return false;
    }
    return true;
  }
  if (const auto* sm = dynamic_cast<const SmoothedPolytopeBody*>(&body)) {
    const PolytopeBody& base = sm->base();
    std::vector<long double> v(static_cast<std::size_t>(base.rows()));
    for (int i = 0; i < base.rows(); ++i) {
      v[i] = base.offsets()[i];
      for (Eigen::Index k = 0; k < x.size(); ++k) v[i] += static_cast<long double>(base.normals()(i, k)) * x[k];
    }
    const long double top = *std::max_element(v.begin(), v.end());
    long double s = 0.0L;
    for (long double e : v) s += std::exp(static_cast<long double>(sm->scale()) * (e - top));
    return top + std::log(s) / sm->scale() <= 0.0L;
  }
  throw Error(ErrorCode::unsupported, "no reference membership for this body");
}

CheckResult start(std::string name) {
  CheckResult r;
  r.name = std::move(name);
  r.worst = -std::numeric_limits<double>::infinity();
  return r;
}

void record(CheckResult& r, double excess) {
  ++r.samples;
  r.worst = std::max(r.worst, excess);
  if (excess > 0.0) {
    ++r.violations;
    r.passed = false;
  }
}

void finish(CheckResult& r) {
  if (r.samples == 0) r.worst = 0.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%llu samples, %llu violations, worst excess %.3g",
                static_cast<unsigned long long>(r.samples), static_cast<unsigned long long>(r.violations), r.worst);
  if (r.detail.empty()) {
    r.detail = buf;
  } else {
    r.detail = std::string(buf) + "; " + r.detail;
  }
}

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string label(const ConvexBody& body) { return to_string(body.kind()) + " d=" + std::to_string(body.dim()); }

// Exterior point with gauge in [lo, hi], along a uniform direction.
Vec exterior_point(CounterRng& rng, const ConvexBody& body, double lo, double hi) {
  const Vec u = random_unit_vector(rng, body.dim());
  const auto unit = body.exact_gauge(u);
  if (!unit) throw Error(ErrorCode::unsupported, "exterior sampling needs an exact gauge");
  // gauge is positively homogeneous outside K: gamma(s u) = s * gamma_raw(u).
  double raw = *unit;
  if (raw <= 1.0) {
    // u may be inside K; scale it out until the floor no longer applies.
    double s = 1.0;
    while (*body.exact_gauge(s * u) <= 1.0) s *= 2.0;
    raw = *body.exact_gauge(s * u) / s;
  }
  const double target = lo + (hi - lo) * rng.uniform();
  return (target / raw) * u;
}

}  // namespace

Vec sample_point(CounterRng& rng, const ConvexBody& body, double radius) {
  // Half the samples come from a thin shell around K's outer extent so that both
  // sides of the boundary are hit regularly.
  if (rng.uniform() < 0.5) return random_in_ball(rng, body.dim(), radius);
  const Vec u = random_unit_vector(rng, body.dim());
  if (const auto g = body.exact_gauge(u); g && *g > 1.0) return (1.0 + 0.2 * (rng.uniform() - 0.5)) * (u / *g);
  return random_in_ball(rng, body.dim(), radius);
}

CheckResult check_membership(const ConvexBody& body, int samples, CounterRng rng) {
  CheckResult r = start("membership agrees with the analytic condition (" + label(body) + ")");
  const std::uint64_t before = body.counter().calls();
  for (int i = 0; i < samples; ++i) {
    const Vec x = sample_point(rng, body, 1.5 * body.diameter());
    record(r, body.contains(x) == reference_member(body, x) ? -1.0 : 1.0);
  }
  const std::uint64_t used = body.counter().calls() - before;
  if (used != static_cast<std::uint64_t>(samples)) {
    r.passed = false;
    r.detail = "counter moved by " + std::to_string(used) + " for " + std::to_string(samples) + " queries";
  }
  // Every point of the inner ball is inside.
  for (int i = 0; i < samples / 4; ++i) record(r, body.contains(random_in_ball(rng, body.dim(), body.inner_radius())) ? -1.0 : 1.0);
  finish(r);
  return r;
}

CheckResult check_smoothing_sandwich(const SmoothedPolytopeBody& body, int samples, CounterRng rng) {
  CheckResult r = start("smoothing sandwich and subset chain (" + label(body.base()) + ", a=" +
                        fmt_g(body.scale()) + ")");
  const PolytopeBody& base = body.base();
  const double slack = std::log(static_cast<double>(base.rows())) / body.scale();
  const double fp = 1e-12;
  for (int i = 0; i < samples; ++i) {
    Vec x;
    if (i % 2 == 0) {
      x = random_in_ball(rng, base.dim(), 1.5 * base.diameter());
    } else {
      // Points whose h sits within a few log(m)/a of zero exercise the chain.
      const Vec u = random_unit_vector(rng, base.dim());
      const double g = *base.exact_gauge(u * 1e6) / 1e6;
      x = u / g * (1.0 + 4.0 * slack * (2.0 * rng.uniform() - 1.0) / base.inner_radius());
    }
    const double h = base.h_value(x);
    const double ha = body.h_smooth_value(x);
    record(r, std::max(h - ha, ha - (h + slack)) - fp * std::max(1.0, std::abs(h)));
    if (h <= -slack - fp) record(r, ha <= 0.0 ? -1.0 : 1.0);
    if (ha <= 0.0) record(r, h <= 0.0 ? -1.0 : 1.0);
  }
  finish(r);
  return r;
}

CheckResult check_gauge_accuracy(const ConvexBody& body, double tol, int samples, CounterRng rng) {
  char name[128];
  std::snprintf(name, sizeof name, "gauge accuracy and call budget (%s, tol=%g)", label(body).c_str(), tol);
  CheckResult r = start(name);
  const std::uint64_t budget = gauge_call_budget(body, tol);
  std::uint64_t max_calls = 0;
  for (int i = 0; i < samples; ++i) {
    const Vec x = random_in_ball(rng, body.dim(), 2.0 * body.diameter());
    const std::uint64_t before = body.counter().calls();
    const GaugeEvaluation g = gauge_bisect(body, x, tol);
    const std::uint64_t used = body.counter().calls() - before;
    max_calls = std::max(max_calls, used);
    record(r, std::abs(g.gamma - *body.exact_gauge(x)) - tol);
    record(r, used <= budget && used == g.calls_used ? -1.0 : 1.0);
  }
  r.detail = "max calls " + std::to_string(max_calls) + " of budget " + std::to_string(budget);
  finish(r);
  return r;
}

CheckResult check_gauge_convexity(const ConvexBody& body, double tol, int samples, CounterRng rng) {
  CheckResult r = start("gauge convexity (" + label(body) + ")");
  for (int i = 0; i < samples; ++i) {
    const Vec a = random_in_ball(rng, body.dim(), 2.0 * body.diameter());
    const Vec b = random_in_ball(rng, body.dim(), 2.0 * body.diameter());
    const double t = rng.uniform();
    const double mid = gauge_bisect(body, t * a + (1.0 - t) * b, tol).gamma;
    const double chord = t * gauge_bisect(body, a, tol).gamma + (1.0 - t) * gauge_bisect(body, b, tol).gamma;
    record(r, mid - chord - 3.0 * tol);
  }
  finish(r);
  return r;
}

CheckResult check_gauge_lipschitz(const ConvexBody& body, double tol, int samples, CounterRng rng) {
  CheckResult r = start("gauge 1/r-Lipschitz (" + label(body) + ")");
  for (int i = 0; i < samples; ++i) {
    const Vec a = random_in_ball(rng, body.dim(), 2.0 * body.diameter());
    // Mix far pairs with close pairs, where the Lipschitz constant bites.
    const Vec b = i % 2 == 0 ? random_in_ball(rng, body.dim(), 2.0 * body.diameter())
                             : Vec(a + random_in_ball(rng, body.dim(), 0.05 * body.inner_radius()));
    const double diff = std::abs(gauge_bisect(body, a, tol).gamma - gauge_bisect(body, b, tol).gamma);
    record(r, diff - (a - b).norm() / body.inner_radius() - 2.0 * tol);
  }
  finish(r);
  return r;
}

CheckResult check_projection_decrease(const ConvexBody& body, int horizon, int samples, CounterRng rng) {
  CheckResult r = start("projection only reduces the regularized loss (" + label(body) + ", T=" +
                        std::to_string(horizon) + ")");
  const double T = horizon;
  const double delta = 1.0 / (T * T);
  const double G = 1.0;
  const double D = body.diameter();
  const double rr = body.inner_radius();
  const double allowance = (G * rr + 3.0 * G * D) / (rr * T * T);
  std::shared_ptr<const ConvexBody> view(std::shared_ptr<const ConvexBody>{}, &body);
  for (int i = 0; i < samples; ++i) {
    const Vec y = exterior_point(rng, body, 1.0 + 1e-3, 3.0);
    const Vec g = random_in_ball(rng, body.dim(), G);
    const RegularizedLoss f(LossFunction::linear(g, G * D, G), view, delta);
    const Vec p = minkowski_project(body, y, delta);
    record(r, f.value(p) - f.value(y) - allowance);
  }
  finish(r);
  return r;
}

CheckResult check_fd_gradient(const ConvexBody& body, int horizon, int samples, CounterRng rng) {
  CheckResult r = start("finite-difference gradient within its error bound (" + label(body) + ", T=" +
                        std::to_string(horizon) + ")");
  const FdConfig cfg = FdConfig::for_horizon(body.dim(), horizon);
  for (int i = 0; i < samples; ++i) {
    const Vec x = exterior_point(rng, body, 1.05, 3.0);
    const GradientEstimate est = estimate_grad_fd(body, x, cfg);
    const GradientEstimate exact = analytic_gauge_grad(body, x);
    if (!est.error_bound) throw Error(ErrorCode::unsupported, "body has no smoothness constant");
    record(r, (est.vector - exact.vector).norm() - *est.error_bound);
  }
  finish(r);
  return r;
}

CheckResult check_projection_feasible(const ConvexBody& body, double tol, int samples, CounterRng rng) {
  CheckResult r = start("Minkowski projection is feasible and tol-accurate (" + label(body) + ")");
  const double inward = 1.0 - tol / body.inner_radius();
  for (int i = 0; i < samples; ++i) {
    const Vec x = random_in_ball(rng, body.dim(), 2.0 * body.diameter());
    const Vec p = minkowski_project(body, x, tol);
    record(r, body.satisfies(inward * p) ? -1.0 : 1.0);
    record(r, (p - x / *body.exact_gauge(x)).norm() - tol);
  }
  finish(r);
  return r;
}

CheckResult check_flh_working_set(int horizon) {
  CheckResult r = start("FLH working set within 4 log2(t) + 4 (t <= " + std::to_string(horizon) + ")");
  // Experts alive at round t are exactly the ids j <= t with j + lifetime(j) - 1 >= t.
  // Expert j = q 2^k lives 2^(k+2) + 1 rounds, so only ids within 2^(k+2) of t can
  // be alive; walk each power-of-two class instead of every id.
  int worst_t = 1;
  std::size_t worst_size = 0;
  for (int t = 1; t <= horizon; ++t) {
    std::size_t size = 0;
    for (int k = 0; (1LL << k) <= t; ++k) {
      const long long step = 1LL << (k + 1);
      const long long life = (1LL << (k + 2)) + 1;
      long long lo = std::max<long long>(1, t - life + 1);
      // smallest j >= lo with j = 2^k mod 2^(k+1)
      long long j = lo + (((1LL << k) - lo) % step + step) % step;
      for (; j <= t; j += step) ++size;
    }
    const double limit = 4.0 * std::log2(static_cast<double>(t)) + 4.0;
    record(r, static_cast<double>(size) - limit);
    if (size > worst_size) {
      worst_size = size;
      worst_t = t;
    }
  }
  r.detail = "largest working set " + std::to_string(worst_size) + " at t=" + std::to_string(worst_t);
  finish(r);
  return r;
}

CheckResult check_losses(const ConvexBody& body, int samples, CounterRng rng) {
  CheckResult r = start("generated losses are G-Lipschitz, non-negative and differentiable (" + label(body) + ")");
  const double D = body.diameter();
  for (const char* family : {"linear", "quadratic"}) {
    bench::LossSpec spec;
    spec.family = family;
    spec.mode = "piecewise";
    spec.num_segments = 3;
    spec.noise = 0.2;
    const auto losses = bench::generate_losses(spec, body, 30, rng.split(family));
    for (const LossFunction& f : losses) {
      for (int i = 0; i < samples / 30 + 1; ++i) {
        const Vec x = random_in_ball(rng, body.dim(), 2.0 * D);
        record(r, f.gradient(x).norm() - f.lipschitz() * (1.0 + 1e-12));
        const Vec k = bench::euclidean_projection(body, x);
        record(r, -f.value(k) - 1e-12);
        const double h = 1e-5;
        for (int c = 0; c < body.dim(); ++c) {
          Vec e = Vec::Zero(body.dim());
          e[c] = h;
          const double fd = (f.value(x + e) - f.value(x - e)) / (2.0 * h);
          const double g = f.gradient(x)[c];
          record(r, std::abs(fd - g) - 1e-5 * std::max(1.0, std::abs(g)));
        }
      }
    }
  }
  finish(r);
  return r;
}

std::vector<CheckResult> run_verification(std::uint64_t seed) {
  const CounterRng root(seed);
  std::vector<std::shared_ptr<const ConvexBody>> bodies{
      make_ball(2), make_ball(10), make_ellipsoid((Vec(2) << 4.0, 1.0).finished()),
      make_ellipsoid((Vec(5) << 4.0, 1.0, 2.0, 0.5, 3.0).finished()), make_box(2), make_box(5), make_simplex(3)};
  {
    CounterRng prng = root.split("polygon");
    bodies.push_back(make_random_polygon(7, prng));
  }
  std::vector<CheckResult> out;
  std::uint64_t i = 0;
  for (const auto& body : bodies) {
    const CounterRng rng = root.split(++i);
    out.push_back(check_membership(*body, 1000, rng.split("membership")));
    for (double tol : {1e-3, 1e-6}) out.push_back(check_gauge_accuracy(*body, tol, 1000, rng.split("accuracy")));
    out.push_back(check_gauge_convexity(*body, 1e-6, 1000, rng.split("convexity")));
    out.push_back(check_gauge_lipschitz(*body, 1e-6, 1000, rng.split("lipschitz")));
    out.push_back(check_projection_decrease(*body, 100, 1000, rng.split("decrease")));
    out.push_back(check_projection_feasible(*body, 1e-4, 1000, rng.split("feasible")));
    if (body->gauge_smoothness()) {
      out.push_back(check_fd_gradient(*body, 10, 200, rng.split("fd10")));
      out.push_back(check_fd_gradient(*body, 100, 200, rng.split("fd100")));
    }
    if (bench::has_euclidean_projection(*body)) out.push_back(check_losses(*body, 300, rng.split("losses")));
  }
  for (const auto& base : {make_box(2), make_box(5), make_simplex(2), make_simplex(5)}) {
    const auto smoothed = make_smoothed(base, 1000.0);
    out.push_back(check_membership(*smoothed, 1000, root.split("smoothed-membership").split(base->dim())));
    out.push_back(check_smoothing_sandwich(*smoothed, 10000, root.split("sandwich").split(base->dim())));
  }
  out.push_back(check_flh_working_set(100000));
  return out;
}

}  // namespace goco
