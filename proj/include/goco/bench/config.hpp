#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "goco/body.hpp"
#include "goco/learner.hpp"

namespace goco::bench {

using Json = nlohmann::json;

struct BodySpec {
  std::string kind = "ball";  // ball | ellipsoid | box | simplex | polytope | smoothed_polytope
  int dim = 2;
  double radius = 1.0;                // ball
  std::vector<double> diag;           // ellipsoid
  std::vector<double> lower, upper;   // box; empty means [-half_width, half_width]^d
  double half_width = 1.0;            // box
  double scale = 1.0;                 // simplex
  // polytope: either explicit rows or a random polygon with `polygon_points` points
  std::vector<std::vector<double>> normals;
  std::vector<double> offsets;
  std::vector<std::vector<double>> vertices;
  double inner_radius = 0.0;
  double diameter = 0.0;
  int polygon_points = 0;
  // smoothed_polytope
  std::shared_ptr<BodySpec> base;
  double smoothing = 0.0;             // a; 0 means T^3
};

struct LossSpec {
  std::string family = "linear";      // linear | quadratic
  std::string mode = "stationary";    // stationary | piecewise
  std::optional<double> lipschitz;    // G; derived from the body when absent
  std::vector<std::vector<double>> directions;  // linear: one per segment, cycled
  std::vector<std::vector<double>> centers;     // quadratic: one per segment, cycled
  std::vector<int> boundaries;        // first round of each new segment
  int num_segments = 0;               // equal segments when boundaries are absent
  double lambda = 1.0;                // quadratic curvature
  double noise = 0.0;                 // radius of the uniform perturbation of g_t or theta_t
  std::optional<double> offset;       // linear c (default G D); quadratic offset (default 0)
};

struct AlgorithmSpec {
  std::string name = "algorithm1";    // algorithm1 | flh | eflh | baseline_projected_ogd
  Schedule schedule = Schedule::convex;
  double epsilon = 1.0;
  bool epsilon_log_t = false;         // epsilon = 1 / ln T
  std::optional<double> normalization;  // EFLH loss scale override
};

struct OutputSpec {
  std::string dir;
  bool full_interval_scan = false;
};

struct ExperimentConfig {
  BodySpec body;
  LossSpec loss;
  AlgorithmSpec algorithm;
  EstimatorConfig estimator;
  int horizon = 100;
  std::uint64_t seed = 0;
  OutputSpec output;
  std::string name = "experiment";
};

/// Parses and validates a config document. Unknown keys are rejected so typos
/// do not silently fall back to defaults.
ExperimentConfig parse_config(const Json& doc);
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON for a config (sorted keys, effective values).
Json to_json(const ExperimentConfig& cfg);
/// FNV-1a of the canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

/// Builds the body with a fresh call counter. `horizon` feeds defaults such as a = T^3.
std::shared_ptr<const ConvexBody> build_body(const BodySpec& spec, int horizon, std::uint64_t seed);

/// Configs compiled into the library, by name ("negative_control", ...).
std::vector<std::string> builtin_config_names();
/// Throws a config error for unknown names.
Json builtin_config(const std::string& name);

/// Effective epsilon for EFLH.
double effective_epsilon(const AlgorithmSpec& spec, int horizon);

}  // namespace goco::bench
