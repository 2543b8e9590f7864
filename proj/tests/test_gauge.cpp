#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "goco/gauge.hpp"
#include "goco/verify.hpp"

using namespace goco;

namespace {
Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
}  // namespace

TEST_CASE("ball gauge to 1e-6") {
  const auto ball = make_ball(2);
  const GaugeEvaluation g = gauge_bisect(*ball, v2(2.0, 0.0), 1e-6);
  CHECK(std::abs(g.gamma - 2.0) <= 1e-6);
  CHECK(g.calls_used <= 24);
  CHECK(gauge_call_budget(*ball, 1e-6) == 24);
  CHECK(ball->counter().calls() == g.calls_used);
}

TEST_CASE("interior points cost one call") {
  const auto ball = make_ball(2);
  const GaugeEvaluation g = gauge_bisect(*ball, v2(0.5, 0.0), 1e-6);
  CHECK(g.gamma == 1.0);
  CHECK(g.inside);
  CHECK(g.calls_used == 1);
}

TEST_CASE("ellipsoid gauge") {
  const auto e = make_ellipsoid(v2(4.0, 1.0));
  const GaugeEvaluation g = gauge_bisect(*e, v2(1.0, 1.0), 1e-6);
  CHECK(std::abs(g.gamma - std::sqrt(5.0)) <= 1e-6);
  // Dense scan over c in [1, 10]: the first c whose scaled point is inside.
  double first = 0.0;
  for (double c = 2.2360; c <= 2.2362; c += 1e-7)
    if (e->satisfies(v2(1.0, 1.0) / c)) {
      first = c;
      break;
    }
  CHECK(std::abs(g.gamma - first) <= 1e-6 + 1e-7);
}

TEST_CASE("reported gamma is conservative") {
  const auto box = make_box(3);
  CounterRng rng(11);
  for (int i = 0; i < 200; ++i) {
    const Vec x = random_in_ball(rng, 3, 6.0);
    const GaugeEvaluation g = gauge_bisect(*box, x, 1e-4);
    CHECK(g.gamma >= *box->exact_gauge(x) - 1e-15);
    CHECK(box->satisfies(g.projection));
  }
}

TEST_CASE("minkowski projection") {
  const auto ball = make_ball(2);
  const Vec p = minkowski_project(*ball, v2(2.0, 0.0), 1e-6);
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(p[1] == 0.0);
  CHECK(ball->satisfies(p));

  const Vec q = minkowski_project(*ball, v2(0.3, 0.1), 1e-6);
  CHECK(q == v2(0.3, 0.1));

  const auto e = make_ellipsoid(v2(4.0, 1.0));
  const GaugeEvaluation pe = minkowski_projection(*e, v2(1.0, 1.0), 1e-6);
  CHECK((pe.projection - v2(0.4472136, 0.4472136)).norm() <= 1e-6);
  CHECK(pe.calls_used <= projection_call_budget(*e, 1e-6));
  CHECK(e->contains(pe.projection * (1.0 - 1e-6 / e->inner_radius())));
}

TEST_CASE("regularized values") {
  const auto ball = make_ball(2);
  const LossFunction f = LossFunction::linear(v2(1.0, 0.0), 0.0, 1.0);
  const RegularizedLoss reg(f, ball, 1e-9);
  CHECK(reg.penalty_weight() == doctest::Approx(6.0));
  CHECK(reg.value(v2(2.0, 0.0)) == doctest::Approx(8.0).epsilon(1e-7));
  CHECK(reg.value(v2(0.5, 0.0)) == doctest::Approx(0.5));

  const RegularizedLoss zero(LossFunction::linear(v2(0.0, 0.0), 0.0, 1.0), ball, 1e-9);
  CHECK(zero.value(v2(1.5, 0.0)) == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("invalid tolerance") {
  const auto ball = make_ball(2);
  CHECK_THROWS(gauge_bisect(*ball, v2(2.0, 0.0), 0.0));
  CHECK_THROWS(gauge_bisect(*ball, v2(2.0, 0.0), -1.0));
}

TEST_CASE("gauge invariants") {
  const CounterRng root(5);
  std::uint64_t i = 0;
  for (const std::shared_ptr<const ConvexBody>& body :
       {std::shared_ptr<const ConvexBody>(make_ball(3)), std::shared_ptr<const ConvexBody>(make_ellipsoid(v2(4.0, 1.0))),
        std::shared_ptr<const ConvexBody>(make_box(2)), std::shared_ptr<const ConvexBody>(make_simplex(3))}) {
    for (const CheckResult& r :
         {check_gauge_accuracy(*body, 1e-6, 300, root.split(++i)), check_gauge_convexity(*body, 1e-6, 300, root.split(++i)),
          check_gauge_lipschitz(*body, 1e-6, 300, root.split(++i)),
          check_projection_decrease(*body, 100, 300, root.split(++i)),
          check_projection_feasible(*body, 1e-4, 300, root.split(++i))}) {
      INFO(r.name << ": " << r.detail);
      CHECK(r.passed);
    }
  }
}
