#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "goco/rng.hpp"

namespace goco {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Membership-call accounting attached to a body. Row evaluations (explicit
/// access to a polytope's linear constraints) are tallied separately from
/// membership queries.
struct OracleCounter {
  std::atomic<std::uint64_t> membership{0};
  std::atomic<std::uint64_t> row_evals{0};

  std::uint64_t calls() const { return membership.load(std::memory_order_relaxed); }
  std::uint64_t rows() const { return row_evals.load(std::memory_order_relaxed); }
  void reset() {
    membership.store(0, std::memory_order_relaxed);
    row_evals.store(0, std::memory_order_relaxed);
  }
};

enum class BodyKind { ball, ellipsoid, box, simplex, polytope, smoothed_polytope };

std::string to_string(BodyKind kind);

/// A convex set K in R^d known only through membership queries, plus the
/// geometry constants: r with r*B_d inside K, and diameter D.
///
/// Bodies are immutable after construction. The counter is the only mutable
/// state; it is atomic so concurrent queries from several learners are safe.
class ConvexBody {
 public:
  virtual ~ConvexBody() = default;
  ConvexBody(const ConvexBody&) = delete;
  ConvexBody& operator=(const ConvexBody&) = delete;

  int dim() const { return dim_; }
  double inner_radius() const { return inner_radius_; }
  double diameter() const { return diameter_; }
  virtual BodyKind kind() const = 0;

  /// Membership oracle. Closed set: boundary points are inside. Counts one call.
  bool contains(const Vec& x) const;

  /// The defining analytic condition, without touching the counter.
  bool satisfies(const Vec& x) const;

  OracleCounter& counter() const { return *counter_; }
  std::shared_ptr<OracleCounter> shared_counter() const { return counter_; }

  /// Closed-form floored gauge, when the body has one.
  virtual std::optional<double> exact_gauge(const Vec& x) const;

  /// beta such that beta^2 bounds the Hessian norm of the gauge outside K.
  virtual std::optional<double> gauge_smoothness() const { return std::nullopt; }

 protected:
  ConvexBody(int dim, double inner_radius, double diameter,
             std::shared_ptr<OracleCounter> counter = nullptr);

  virtual bool member(const Vec& x) const = 0;
  void check_point(const Vec& x) const;
  void count_rows(std::uint64_t n) const {
    counter_->row_evals.fetch_add(n, std::memory_order_relaxed);
  }

 private:
  int dim_;
  double inner_radius_;
  double diameter_;
  std::shared_ptr<OracleCounter> counter_;
};

/// Origin-centred Euclidean ball of radius R.
class BallBody final : public ConvexBody {
 public:
  BallBody(int dim, double radius);
  BodyKind kind() const override { return BodyKind::ball; }
  double radius() const { return radius_; }
  std::optional<double> exact_gauge(const Vec& x) const override;
  std::optional<double> gauge_smoothness() const override { return 1.0 / radius_; }

 private:
  bool member(const Vec& x) const override;
  double radius_;
};

/// Axis-aligned ellipsoid {x : sum_i a_i x_i^2 <= 1} with a_i > 0.
class EllipsoidBody final : public ConvexBody {
 public:
  explicit EllipsoidBody(Vec diag);
  BodyKind kind() const override { return BodyKind::ellipsoid; }
  const Vec& diag() const { return diag_; }
  double quadratic_form(const Vec& x) const { return x.dot(diag_.cwiseProduct(x)); }
  std::optional<double> exact_gauge(const Vec& x) const override;
  std::optional<double> gauge_smoothness() const override;

 private:
  bool member(const Vec& x) const override;
  Vec diag_;
};

/// Result of identifying the maximizing constraint row.
struct ActiveFace {
  int index = -1;
  double value = 0.0;
  bool tied = false;
};

/// Extra structure a polytope may carry; comparators need it for exact
/// Euclidean projection.
enum class PolytopeShape { general, box, simplex, polygon };

struct PolytopeOptions {
  PolytopeShape shape = PolytopeShape::general;
  BodyKind kind = BodyKind::polytope;
  std::vector<Vec> vertices;
  Vec box_lower, box_upper;          // shape == box
  double simplex_scale = 0.0;        // shape == simplex
  bool check_bounded = true;
};

/// K = {x : h(x) <= 0}, h(x) = max_i (alpha_i . x + b_i) with unit alpha_i.
class PolytopeBody : public ConvexBody, public std::enable_shared_from_this<PolytopeBody> {
 public:
  using Options = PolytopeOptions;

  /// Rows of `normals` must be unit length (1e-12). r and D are user supplied
  /// and validated: b_i <= -r exactly, and a sampled extent check against D.
  PolytopeBody(Mat normals, Vec offsets, double inner_radius, double diameter, Options opts = {});

  BodyKind kind() const override { return kind_; }
  int rows() const { return static_cast<int>(offsets_.size()); }
  const Mat& normals() const { return normals_; }
  const Vec& offsets() const { return offsets_; }
  PolytopeShape shape() const { return shape_; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const Vec& box_lower() const { return box_lower_; }
  const Vec& box_upper() const { return box_upper_; }
  double simplex_scale() const { return simplex_scale_; }

  /// max_i (alpha_i . x + b_i); counts m row evaluations.
  double h_eval(const Vec& x) const;
  /// argmax row; ties (within 1e-9) resolved to the lowest index and flagged.
  ActiveFace active_face(const Vec& x) const;

  /// Uncounted evaluation of h, for internal use and tests.
  double h_value(const Vec& x) const;

  std::optional<double> exact_gauge(const Vec& x) const override;

  static constexpr double kTieSlack = 1e-9;

 private:
  bool member(const Vec& x) const override;

  Mat normals_;
  Vec offsets_;
  BodyKind kind_;
  PolytopeShape shape_;
  std::vector<Vec> vertices_;
  Vec box_lower_, box_upper_;
  double simplex_scale_ = 0.0;
};

/// K_a = {x : h_a(x) <= 0} with h_a the log-sum-exp of the base rows at scale a.
/// K_a is contained in the base polytope; its inner radius is r - log(m)/a.
class SmoothedPolytopeBody final : public ConvexBody {
 public:
  SmoothedPolytopeBody(std::shared_ptr<const PolytopeBody> base, double a,
                       std::shared_ptr<OracleCounter> counter = nullptr);

  BodyKind kind() const override { return BodyKind::smoothed_polytope; }
  const PolytopeBody& base() const { return *base_; }
  std::shared_ptr<const PolytopeBody> base_ptr() const { return base_; }
  double scale() const { return a_; }

  /// (1/a) log sum_i exp(a (alpha_i . x + b_i)), evaluated with max-subtraction.
  /// Counts m row evaluations.
  double h_smooth_eval(const Vec& x) const;
  double h_smooth_value(const Vec& x) const;

 private:
  bool member(const Vec& x) const override;

  std::shared_ptr<const PolytopeBody> base_;
  double a_;
};

// Body zoo.
std::shared_ptr<const BallBody> make_ball(int dim, double radius = 1.0);
std::shared_ptr<const EllipsoidBody> make_ellipsoid(Vec diag);
/// Box [lower, upper]; requires lower < 0 < upper componentwise.
std::shared_ptr<const PolytopeBody> make_box(const Vec& lower, const Vec& upper);
std::shared_ptr<const PolytopeBody> make_box(int dim, double half_width = 1.0);
/// Corner simplex {z >= 0, sum z <= scale} translated so its incentre sits at
/// the origin; every facet is at distance scale/(d + sqrt(d)).
std::shared_ptr<const PolytopeBody> make_simplex(int dim, double scale = 1.0);
/// Rotates any polytope (with vertices) by an orthogonal matrix.
std::shared_ptr<const PolytopeBody> make_rotated(const PolytopeBody& body, const Mat& rotation);
/// Convex polygon in R^2 from n random points around the origin.
std::shared_ptr<const PolytopeBody> make_random_polygon(int n, CounterRng& rng);
std::shared_ptr<const PolytopeBody> make_polytope(Mat normals, Vec offsets, double inner_radius,
                                                  double diameter,
                                                  PolytopeBody::Options opts = {});
std::shared_ptr<const SmoothedPolytopeBody> make_smoothed(std::shared_ptr<const PolytopeBody> base,
                                                          double a, bool share_counter = false);

/// Random orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
Mat random_rotation(CounterRng& rng, int d);

}  // namespace goco
