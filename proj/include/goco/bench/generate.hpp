#pragma once

#include <vector>

#include "goco/bench/config.hpp"
#include "goco/body.hpp"
#include "goco/loss.hpp"
#include "goco/rng.hpp"

namespace goco::bench {

/// First round of every segment, starting with 1.
std::vector<int> segment_starts(const LossSpec& spec, int horizon);

/// Lipschitz constant certified on the ball of radius 2D for this spec.
double certified_lipschitz(const LossSpec& spec, const ConvexBody& body);

/// Adversary for the configured family. Linear losses are g_t.x + c with
/// |g_t| <= G and c = G D by default (non-negative on K); quadratic losses are
/// (lambda/2)|x - theta_t|^2 + offset with G = lambda (2D + max |theta_t|).
std::vector<LossFunction> generate_losses(const LossSpec& spec, const ConvexBody& body, int horizon,
                                          CounterRng rng);

}  // namespace goco::bench
