#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

#include <Eigen/Core>

namespace goco {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

/// Counter-based generator: draw i of a stream is a splitmix64 finalization of
/// (key, i), so streams are splittable by name without shared state. Satisfies
/// UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed = 0);

  /// Independent child stream. Splitting does not advance the parent.
  CounterRng split(std::string_view name) const;
  CounterRng split(std::uint64_t index) const;

  result_type operator()() { return mix(key_ + (counter_++) * kGolden); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller, one draw per call).
  double normal();
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static std::uint64_t mix(std::uint64_t z);

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Uniform direction on the unit sphere in R^d.
Eigen::VectorXd random_unit_vector(CounterRng& rng, int d);

/// Uniform point in the ball of the given radius.
Eigen::VectorXd random_in_ball(CounterRng& rng, int d, double radius);

}  // namespace goco
