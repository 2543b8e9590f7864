#include "goco/body.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "goco/error.hpp"

namespace goco {

std::string to_string(BodyKind kind) {
  switch (kind) {
    case BodyKind::ball: return "ball";
    case BodyKind::ellipsoid: return "ellipsoid";
    case BodyKind::box: return "box";
    case BodyKind::simplex: return "simplex";
    case BodyKind::polytope: return "polytope";
    case BodyKind::smoothed_polytope: return "smoothed_polytope";
  }
  return "unknown";
}

ConvexBody::ConvexBody(int dim, double inner_radius, double diameter,
                       std::shared_ptr<OracleCounter> counter)
    : dim_(dim),
      inner_radius_(inner_radius),
      diameter_(diameter),
      counter_(counter ? std::move(counter) : std::make_shared<OracleCounter>()) {
  if (dim <= 0) throw Error(ErrorCode::invalid_argument, "body dimension must be positive");
  if (!(inner_radius > 0.0) || !std::isfinite(inner_radius))
    throw Error(ErrorCode::invalid_argument, "inner radius must be positive and finite");
  if (!(diameter >= inner_radius) || !std::isfinite(diameter))
    throw Error(ErrorCode::invalid_argument, "diameter must be finite and at least the inner radius");
}

void ConvexBody::check_point(const Vec& x) const {
  if (x.size() != dim_)
    throw Error(ErrorCode::dimension_mismatch,
                "point has dimension " + std::to_string(x.size()) + ", body has " +
                    std::to_string(dim_));
  if (!x.allFinite()) throw Error(ErrorCode::invalid_argument, "point has non-finite entries");
}

bool ConvexBody::contains(const Vec& x) const {
  check_point(x);
  counter_->membership.fetch_add(1, std::memory_order_relaxed);
  return member(x);
}

bool ConvexBody::satisfies(const Vec& x) const {
  check_point(x);
  return member(x);
}

std::optional<double> ConvexBody::exact_gauge(const Vec&) const { return std::nullopt; }

// ---------------------------------------------------------------------------

BallBody::BallBody(int dim, double radius) : ConvexBody(dim, radius, 2.0 * radius), radius_(radius) {}

bool BallBody::member(const Vec& x) const { return x.squaredNorm() <= radius_ * radius_; }

std::optional<double> BallBody::exact_gauge(const Vec& x) const {
  return std::max(1.0, x.norm() / radius_);
}

// ---------------------------------------------------------------------------

namespace {

double checked_min(const Vec& v) {
  if (v.size() == 0) throw Error(ErrorCode::invalid_argument, "empty vector");
  return v.minCoeff();
}

}  // namespace

EllipsoidBody::EllipsoidBody(Vec diag)
    : ConvexBody(static_cast<int>(diag.size()), 1.0 / std::sqrt(diag.size() ? diag.maxCoeff() : 1.0),
                 2.0 / std::sqrt(diag.size() ? checked_min(diag) : 1.0)),
      diag_(std::move(diag)) {
  if (!(diag_.minCoeff() > 0.0) || !diag_.allFinite())
    throw Error(ErrorCode::invalid_argument, "ellipsoid diagonal entries must be positive");
}

bool EllipsoidBody::member(const Vec& x) const { return quadratic_form(x) <= 1.0; }

std::optional<double> EllipsoidBody::exact_gauge(const Vec& x) const {
  return std::max(1.0, std::sqrt(quadratic_form(x)));
}

std::optional<double> EllipsoidBody::gauge_smoothness() const {
  // Hessian of sqrt(x'Ax) is bounded by lambda_max(A)/gamma <= lambda_max(A) outside K.
  return std::sqrt(diag_.maxCoeff());
}

// ---------------------------------------------------------------------------

PolytopeBody::PolytopeBody(Mat normals, Vec offsets, double inner_radius, double diameter,
                           Options opts)
    : ConvexBody(static_cast<int>(normals.cols()), inner_radius, diameter),
      normals_(std::move(normals)),
      offsets_(std::move(offsets)),
      kind_(opts.kind),
      shape_(opts.shape),
      vertices_(std::move(opts.vertices)),
      box_lower_(std::move(opts.box_lower)),
      box_upper_(std::move(opts.box_upper)),
      simplex_scale_(opts.simplex_scale) {
  const int m = static_cast<int>(normals_.rows());
  if (m == 0) throw Error(ErrorCode::invalid_argument, "polytope needs at least one row");
  if (offsets_.size() != m)
    throw Error(ErrorCode::dimension_mismatch, "polytope offsets do not match the number of rows");
  if (!normals_.allFinite() || !offsets_.allFinite())
    throw Error(ErrorCode::invalid_argument, "polytope rows must be finite");
  const double r = inner_radius;
  for (int i = 0; i < m; ++i) {
    if (std::abs(normals_.row(i).norm() - 1.0) > 1e-12)
      throw Error(ErrorCode::invalid_argument, "polytope row " + std::to_string(i) + " is not a unit vector");
    // max of alpha_i . x + b_i over the ball r*B is r + b_i.
    if (offsets_[i] > -r + 1e-12 * std::max(1.0, r))
      throw Error(ErrorCode::invalid_argument,
                  "inner radius " + std::to_string(r) + " violates row " + std::to_string(i));
  }
  const double D = diameter;
  const double slack = 1e-9 * std::max(1.0, D);
  for (const Vec& v : vertices_) {
    if (v.size() != dim()) throw Error(ErrorCode::dimension_mismatch, "vertex dimension mismatch");
    if (h_value(v) > 1e-9) throw Error(ErrorCode::invalid_argument, "vertex lies outside the polytope");
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j)
      if ((vertices_[i] - vertices_[j]).norm() > D + slack)
        throw Error(ErrorCode::invalid_argument, "diameter is smaller than a vertex distance");

  if (opts.check_bounded) {
    // Sampled extent check: every boundary point along a ray must lie within D of the origin.
    CounterRng rng(0x5eed);
    auto extent = [&](const Vec& u) {
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double s = normals_.row(i).dot(u);
        if (s > 1e-15) best = std::min(best, -offsets_[i] / s);
      }
      return best;
    };
    for (int k = 0; k < 256 + 2 * dim(); ++k) {
      Vec u;
      if (k < 2 * dim()) {
        u = Vec::Zero(dim());
        u[k / 2] = (k % 2 == 0) ? 1.0 : -1.0;
      } else {
        u = random_unit_vector(rng, dim());
      }
      const double e = extent(u);
      if (!std::isfinite(e)) throw Error(ErrorCode::invalid_argument, "polytope is unbounded");
      if (e > D + slack) throw Error(ErrorCode::invalid_argument, "diameter is smaller than the sampled extent");
    }
  }
}

double PolytopeBody::h_value(const Vec& x) const { return (normals_ * x + offsets_).maxCoeff(); }

bool PolytopeBody::member(const Vec& x) const { return h_value(x) <= 0.0; }

double PolytopeBody::h_eval(const Vec& x) const {
  check_point(x);
  count_rows(static_cast<std::uint64_t>(rows()));
  return h_value(x);
}

ActiveFace PolytopeBody::active_face(const Vec& x) const {
  check_point(x);
  count_rows(static_cast<std::uint64_t>(rows()));
  const Vec v = normals_ * x + offsets_;
  ActiveFace face;
  Eigen::Index best = 0;
  face.value = v.maxCoeff(&best);
  face.index = static_cast<int>(best);
  // maxCoeff returns the first maximizer; look for near-ties at any index.
  for (int i = 0; i < rows(); ++i) {
    if (i == face.index) continue;
    if (face.value - v[i] <= kTieSlack) {
      face.tied = true;
      if (i < face.index) face.index = i;
    }
  }
  return face;
}

std::optional<double> PolytopeBody::exact_gauge(const Vec& x) const {
  // b_i <= -r < 0, so x/c in K iff alpha_i . x <= -b_i c for all i.
  const Vec ratios = (normals_ * x).cwiseQuotient(-offsets_);
  return std::max(1.0, ratios.maxCoeff());
}

// ---------------------------------------------------------------------------

SmoothedPolytopeBody::SmoothedPolytopeBody(std::shared_ptr<const PolytopeBody> base, double a,
                                           std::shared_ptr<OracleCounter> counter)
    : ConvexBody(base->dim(), base->inner_radius() - std::log(static_cast<double>(base->rows())) / a,
                 base->diameter(), std::move(counter)),
      base_(std::move(base)),
      a_(a) {
  if (!(a_ > 0.0) || !std::isfinite(a_))
    throw Error(ErrorCode::invalid_argument, "smoothing scale must be positive");
}

double SmoothedPolytopeBody::h_smooth_value(const Vec& x) const {
  const Vec v = base_->normals() * x + base_->offsets();
  const double top = v.maxCoeff();
  const double sum = (a_ * (v.array() - top)).exp().sum();
  return top + std::log(sum) / a_;
}

double SmoothedPolytopeBody::h_smooth_eval(const Vec& x) const {
  check_point(x);
  count_rows(static_cast<std::uint64_t>(base_->rows()));
  return h_smooth_value(x);
}

bool SmoothedPolytopeBody::member(const Vec& x) const { return h_smooth_value(x) <= 0.0; }

// ---------------------------------------------------------------------------

std::shared_ptr<const BallBody> make_ball(int dim, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::invalid_argument, "ball radius must be positive");
  return std::make_shared<const BallBody>(dim, radius);
}

std::shared_ptr<const EllipsoidBody> make_ellipsoid(Vec diag) {
  if (diag.size() == 0) throw Error(ErrorCode::invalid_argument, "ellipsoid needs at least one axis");
  if (!(diag.minCoeff() > 0.0))
    throw Error(ErrorCode::invalid_argument, "ellipsoid diagonal entries must be positive");
  return std::make_shared<const EllipsoidBody>(std::move(diag));
}

std::shared_ptr<const PolytopeBody> make_box(const Vec& lower, const Vec& upper) {
  const int d = static_cast<int>(lower.size());
  if (d == 0 || upper.size() != d) throw Error(ErrorCode::dimension_mismatch, "box bounds mismatch");
  if (!(lower.maxCoeff() < 0.0) || !(upper.minCoeff() > 0.0))
    throw Error(ErrorCode::invalid_argument, "box must contain the origin in its interior");
  Mat normals = Mat::Zero(2 * d, d);
  Vec offsets(2 * d);
  for (int i = 0; i < d; ++i) {
    normals(2 * i, i) = 1.0;
    offsets[2 * i] = -upper[i];
    normals(2 * i + 1, i) = -1.0;
    offsets[2 * i + 1] = lower[i];
  }
  const double r = std::min(upper.minCoeff(), (-lower).minCoeff());
  const double D = (upper - lower).norm();
  PolytopeBody::Options opts;
  opts.shape = PolytopeShape::box;
  opts.kind = BodyKind::box;
  opts.box_lower = lower;
  opts.box_upper = upper;
  if (d <= 10) {
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      Vec v(d);
      for (int i = 0; i < d; ++i) v[i] = (mask >> i) & 1u ? upper[i] : lower[i];
      opts.vertices.push_back(std::move(v));
    }
  }
  // Vertex checks already certify D; skip the sampled check for large d.
  opts.check_bounded = d <= 10;
  return std::make_shared<const PolytopeBody>(std::move(normals), std::move(offsets), r, D, std::move(opts));
}

std::shared_ptr<const PolytopeBody> make_box(int dim, double half_width) {
  if (dim <= 0 || !(half_width > 0.0)) throw Error(ErrorCode::invalid_argument, "invalid box");
  return make_box(Vec::Constant(dim, -half_width), Vec::Constant(dim, half_width));
}

std::shared_ptr<const PolytopeBody> make_simplex(int dim, double scale) {
  if (dim <= 0 || !(scale > 0.0)) throw Error(ErrorCode::invalid_argument, "invalid simplex");
  const double d = dim;
  const double rho = 1.0 / (d + std::sqrt(d));
  const double r = scale * rho;
  Mat normals = Mat::Zero(dim + 1, dim);
  Vec offsets = Vec::Constant(dim + 1, -r);
  for (int i = 0; i < dim; ++i) normals(i, i) = -1.0;
  normals.row(dim).setConstant(1.0 / std::sqrt(d));
  PolytopeBody::Options opts;
  opts.shape = PolytopeShape::simplex;
  opts.kind = BodyKind::simplex;
  opts.simplex_scale = scale;
  const Vec shift = Vec::Constant(dim, r);
  opts.vertices.push_back(-shift);
  for (int i = 0; i < dim; ++i) {
    Vec v = -shift;
    v[i] += scale;
    opts.vertices.push_back(std::move(v));
  }
  const double D = dim >= 2 ? scale * std::sqrt(2.0) : scale;
  return std::make_shared<const PolytopeBody>(std::move(normals), std::move(offsets), r, D, std::move(opts));
}

std::shared_ptr<const PolytopeBody> make_rotated(const PolytopeBody& body, const Mat& rotation) {
  const int d = body.dim();
  if (rotation.rows() != d || rotation.cols() != d)
    throw Error(ErrorCode::dimension_mismatch, "rotation has the wrong shape");
  if (!(rotation.transpose() * rotation).isApprox(Mat::Identity(d, d), 1e-12))
    throw Error(ErrorCode::invalid_argument, "rotation is not orthogonal");
  Mat normals = body.normals() * rotation.transpose();
  for (int i = 0; i < normals.rows(); ++i) normals.row(i).normalize();
  PolytopeBody::Options opts;
  for (const Vec& v : body.vertices()) opts.vertices.push_back(rotation * v);
  return std::make_shared<const PolytopeBody>(std::move(normals), body.offsets(), body.inner_radius(),
                                              body.diameter(), std::move(opts));
}

namespace {

double cross(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; returns the hull counter-clockwise.
std::vector<Vec> convex_hull_2d(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  std::vector<Vec> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Vec& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

std::shared_ptr<const PolytopeBody> make_random_polygon(int n, CounterRng& rng) {
  if (n < 3) throw Error(ErrorCode::invalid_argument, "polygon needs at least three points");
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Vec> pts;
    for (int k = 0; k < n; ++k) {
      const double angle = 2.0 * std::numbers::pi * (k + 0.4 * (rng.uniform() - 0.5)) / n;
      const double radius = 0.6 + 0.8 * rng.uniform();
      Vec p(2);
      p << radius * std::cos(angle), radius * std::sin(angle);
      pts.push_back(std::move(p));
    }
    std::vector<Vec> hull = convex_hull_2d(pts);
    const int m = static_cast<int>(hull.size());
    Mat normals(m, 2);
    Vec offsets(m);
    for (int i = 0; i < m; ++i) {
      const Vec& p = hull[i];
      const Vec& q = hull[(i + 1) % m];
      Vec nrm(2);
      nrm << q[1] - p[1], p[0] - q[0];
      nrm.normalize();
      normals.row(i) = nrm.transpose();
      offsets[i] = -nrm.dot(p);
    }
    const double r = (-offsets).minCoeff();
    if (r < 0.1) continue;
    double D = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) D = std::max(D, (hull[i] - hull[j]).norm());
    PolytopeBody::Options opts;
    opts.shape = PolytopeShape::polygon;
    opts.vertices = hull;
    return std::make_shared<const PolytopeBody>(std::move(normals), std::move(offsets), r, D, std::move(opts));
  }
  throw Error(ErrorCode::internal, "could not sample a polygon around the origin");
}

std::shared_ptr<const PolytopeBody> make_polytope(Mat normals, Vec offsets, double inner_radius,
                                                  double diameter, PolytopeBody::Options opts) {
  return std::make_shared<const PolytopeBody>(std::move(normals), std::move(offsets), inner_radius,
                                              diameter, std::move(opts));
}

std::shared_ptr<const SmoothedPolytopeBody> make_smoothed(std::shared_ptr<const PolytopeBody> base,
                                                          double a, bool share_counter) {
  if (!base) throw Error(ErrorCode::invalid_argument, "smoothed polytope needs a base");
  const double shrink = std::log(static_cast<double>(base->rows())) / a;
  if (!(base->inner_radius() - shrink > 0.0))
    throw Error(ErrorCode::invalid_argument, "smoothing scale too small: log(m)/a exceeds the inner radius");
  auto counter = share_counter ? base->shared_counter() : nullptr;
  return std::make_shared<const SmoothedPolytopeBody>(std::move(base), a, std::move(counter));
}

Mat random_rotation(CounterRng& rng, int d) {
  Mat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace goco
