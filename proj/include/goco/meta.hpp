#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "goco/learner.hpp"

namespace goco {

/// Fresh base learner for a meta-algorithm. `base` supplies the body,
/// constants and estimator; `lifetime` is the number of rounds the expert
/// lives; tolerances keep the accuracy of the base horizon.
Learner build_expert(const LearnerConfig& base, int birth, int lifetime, Schedule schedule,
                     const CounterRng& stream);

/// Round summary shared by both meta-algorithms.
struct MetaRound {
  Vec played;
  double loss = 0.0;
  std::uint64_t calls = 0;
  std::uint32_t events = kEventNone;
  std::size_t live_experts = 0;
};

/// Follow-the-Leading-History for strongly convex losses. Expert j is an
/// Base learner run with the 1/(lambda tau) schedule started at round j.
class Flh {
 public:
  Flh(LearnerConfig base, CounterRng rng);

  /// Plays the weighted average of the live experts, feeds `loss` to each of
  /// them, reweights, prunes and admits the next expert.
  MetaRound round(const LossFunction& loss);

  /// 2^(k+2) + 1 for j = q 2^k with q odd.
  static int expert_lifetime(int j);

  int t() const { return t_; }
  double alpha() const { return alpha_; }
  std::size_t working_set() const { return experts_.size(); }
  std::vector<int> expert_ids() const;
  /// Normalized weights in expert-id order.
  std::vector<double> weights() const;

 private:
  struct Expert {
    int id;
    int expires;  // last round the expert plays
    double log_weight;
    Learner learner;
  };

  void admit(int id, double log_weight);

  LearnerConfig base_;
  CounterRng rng_;
  double alpha_;
  int t_ = 0;
  std::vector<Expert> experts_;
};

/// One EFLH level: experts born every `length` rounds live 4 * length rounds.
struct EflhLevel {
  int k = 0;
  int length = 1;     // l_k = floor(2^((1+eps)^k) / 2) + 1
  int lifespan = 4;   // 4 l_k
  double rate = 0.5;  // min{1/2, sqrt(ln T / l_k)}
};

/// Levels k = 0, 1, ... while 2^((1+eps)^k) / 2 <= T.
std::vector<EflhLevel> make_eflh_levels(int horizon, double epsilon);

/// Birth rounds of level `level` within [1, horizon]: every s with l_k | s - 1.
std::vector<int> eflh_birth_times(const EflhLevel& level, int horizon);

/// Efficient FLH for general convex losses with geometric lifespans.
class Eflh {
 public:
  /// `loss_scale` bounds max f - min f over K per round; it defaults to G D.
  Eflh(LearnerConfig base, double epsilon, CounterRng rng, double loss_scale = 0.0);

  MetaRound round(const LossFunction& loss);

  int t() const { return t_; }
  const std::vector<EflhLevel>& levels() const { return levels_; }
  std::size_t live_experts() const { return experts_.size(); }
  double min_factor() const { return min_factor_; }
  double max_factor() const { return max_factor_; }
  double loss_scale() const { return loss_scale_; }
  /// Raw weights in (birth, level) order.
  std::vector<double> weights() const;

 private:
  struct Expert {
    int birth;
    int level;
    int expires;
    double log_weight;
    Learner learner;
  };

  void admit_births(int s);

  LearnerConfig base_;
  CounterRng rng_;
  std::vector<EflhLevel> levels_;
  double loss_scale_;
  int t_ = 0;
  std::vector<Expert> experts_;
  double min_factor_ = 1.0;
  double max_factor_ = 1.0;
};

}  // namespace goco
