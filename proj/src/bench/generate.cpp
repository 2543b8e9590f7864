#include "goco/bench/generate.hpp"

#include <algorithm>
#include <cmath>

#include "goco/error.hpp"

namespace goco::bench {

namespace {

Vec axis(int d, double sign) {
  Vec v = Vec::Zero(d);
  v[0] = sign;
  return v;
}

std::vector<Vec> anchors(const std::vector<std::vector<double>>& given, int d, bool piecewise, double first,
                         double second) {
  std::vector<Vec> out;
  for (const auto& row : given) {
    if (static_cast<int>(row.size()) != d) throw Error(ErrorCode::config, "loss vectors must match the body dimension");
    out.push_back(Eigen::Map<const Vec>(row.data(), d));
  }
  if (out.empty()) {
    out.push_back(axis(d, first));
    if (piecewise) out.push_back(axis(d, second));
  }
  return out;
}

double max_norm(const std::vector<Vec>& vs) {
  double m = 0.0;
  for (const Vec& v : vs) m = std::max(m, v.norm());
  return m;
}

}  // namespace

std::vector<int> segment_starts(const LossSpec& spec, int horizon) {
  if (horizon < 1) throw Error(ErrorCode::invalid_argument, "horizon must be at least 1");
  std::vector<int> starts{1};
  if (spec.mode != "piecewise") return starts;
  if (!spec.boundaries.empty()) {
    for (int b : spec.boundaries) {
      if (b <= starts.back() || b > horizon)
        throw Error(ErrorCode::config, "segment boundaries must be strictly increasing within [2, T]");
      starts.push_back(b);
    }
    return starts;
  }
  const int n = spec.num_segments > 0 ? spec.num_segments : 2;
  for (int k = 1; k < n; ++k) {
    const int s = 1 + static_cast<int>((static_cast<long long>(k) * horizon) / n);
    if (s > starts.back() && s <= horizon) starts.push_back(s);
  }
  return starts;
}

double certified_lipschitz(const LossSpec& spec, const ConvexBody& body) {
  const int d = body.dim();
  const double D = body.diameter();
  if (spec.family == "linear") return spec.lipschitz.value_or(1.0);
  const std::vector<Vec> centers = anchors(spec.centers, d, spec.mode == "piecewise", 0.5, -0.5);
  const double needed = spec.lambda * (2.0 * D + max_norm(centers) + spec.noise);
  if (spec.lipschitz) {
    if (*spec.lipschitz < needed)
      throw Error(ErrorCode::config, "declared G is below the gradient norm on the 2D-ball");
    return *spec.lipschitz;
  }
  return needed;
}

std::vector<LossFunction> generate_losses(const LossSpec& spec, const ConvexBody& body, int horizon,
                                          CounterRng rng) {
  std::vector<LossFunction> out;
  if (horizon <= 0) return out;
  const int d = body.dim();
  const double D = body.diameter();
  const bool piecewise = spec.mode == "piecewise";
  const std::vector<int> starts = segment_starts(spec, horizon);
  const double G = certified_lipschitz(spec, body);
  out.reserve(static_cast<std::size_t>(horizon));

  if (spec.family == "linear") {
    std::vector<Vec> dirs = anchors(spec.directions, d, piecewise, 1.0, -1.0);
    for (Vec& v : dirs) {
      const double n = v.norm();
      if (!(n > 0.0)) throw Error(ErrorCode::config, "loss directions must be non-zero");
      v /= n;
    }
    // f >= 0 on K needs c >= max_K (-g.x), and every point of K is within D of the origin.
    const double c = spec.offset.value_or(G * D);
    if (c < G * D) throw Error(ErrorCode::config, "linear offset below G D cannot guarantee non-negative losses");
    std::size_t seg = 0;
    for (int t = 1; t <= horizon; ++t) {
      while (seg + 1 < starts.size() && t >= starts[seg + 1]) ++seg;
      Vec g = dirs[seg % dirs.size()];
      if (spec.noise > 0.0) g = (g + random_in_ball(rng, d, spec.noise)) / (1.0 + spec.noise);
      out.push_back(LossFunction::linear(G * g, c, G));
    }
    return out;
  }

  const std::vector<Vec> centers = anchors(spec.centers, d, piecewise, 0.5, -0.5);
  const double offset = spec.offset.value_or(0.0);
  if (offset < 0.0) throw Error(ErrorCode::config, "quadratic offset must be non-negative");
  std::size_t seg = 0;
  for (int t = 1; t <= horizon; ++t) {
    while (seg + 1 < starts.size() && t >= starts[seg + 1]) ++seg;
    Vec theta = centers[seg % centers.size()];
    if (spec.noise > 0.0) theta += random_in_ball(rng, d, spec.noise);
    out.push_back(LossFunction::quadratic(spec.lambda, theta, offset, G));
  }
  return out;
}

}  // namespace goco::bench
