#include "goco/rng.hpp"

#include <cmath>
#include <numbers>

namespace goco {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed) : key_(mix(seed)) {}

CounterRng CounterRng::split(std::string_view name) const {
  CounterRng child(0);
  child.key_ = mix(key_ ^ fnv1a64(name));
  return child;
}

CounterRng CounterRng::split(std::uint64_t index) const {
  CounterRng child(0);
  child.key_ = mix(mix(key_) + index * kGolden);
  return child;
}

double CounterRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t CounterRng::index(std::size_t n) {
  if (n == 0) return 0;
  const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return i < n ? i : n - 1;
}

Eigen::VectorXd random_unit_vector(CounterRng& rng, int d) {
  Eigen::VectorXd v(d);
  double n = 0.0;
  do {
    for (int i = 0; i < d; ++i) v[i] = rng.normal();
    n = v.norm();
  } while (n < 1e-12);
  return v / n;
}

Eigen::VectorXd random_in_ball(CounterRng& rng, int d, double radius) {
  const Eigen::VectorXd u = random_unit_vector(rng, d);
  return u * (radius * std::pow(rng.uniform(), 1.0 / d));
}

}  // namespace goco
