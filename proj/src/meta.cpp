#include "goco/meta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "goco/error.hpp"

namespace goco {

Learner build_expert(const LearnerConfig& base, int birth, int lifetime, Schedule schedule,
                     const CounterRng& stream) {
  if (lifetime < 1) throw Error(ErrorCode::invalid_argument, "expert lifetime must be at least 1");
  if (birth < 1) throw Error(ErrorCode::invalid_argument, "expert birth round must be at least 1");
  LearnerConfig cfg = base;
  cfg.accuracy_horizon = base.accuracy_horizon > 0 ? base.accuracy_horizon : base.horizon;
  cfg.horizon = lifetime;
  cfg.schedule = schedule;
  cfg.fixed_step.reset();
  return Learner(std::move(cfg), stream);
}

namespace {

int trailing_zeros(int j) {
  int k = 0;
  while ((j & 1) == 0) {
    j >>= 1;
    ++k;
  }
  return k;
}

void check_base(const LearnerConfig& base) {
  if (!base.body) throw Error(ErrorCode::invalid_argument, "meta-algorithm needs a body");
  if (base.horizon < 1) throw Error(ErrorCode::invalid_argument, "meta-algorithm horizon must be at least 1");
  if (!(base.lipschitz > 0.0)) throw Error(ErrorCode::invalid_argument, "Lipschitz constant must be positive");
}

}  // namespace

int Flh::expert_lifetime(int j) {
  if (j < 1) throw Error(ErrorCode::invalid_argument, "expert id must be positive");
  const int k = trailing_zeros(j);
  if (k + 2 >= 30) return std::numeric_limits<int>::max();
  return (1 << (k + 2)) + 1;
}

Flh::Flh(LearnerConfig base, CounterRng rng) : base_(std::move(base)), rng_(rng) {
  check_base(base_);
  if (!(base_.strong_convexity > 0.0)) throw Error(ErrorCode::invalid_argument, "FLH needs strongly convex losses");
  alpha_ = base_.strong_convexity / (base_.lipschitz * base_.lipschitz);
  admit(1, 0.0);
}

void Flh::admit(int id, double log_weight) {
  const int life = expert_lifetime(id);
  const int expires = life > std::numeric_limits<int>::max() - id ? std::numeric_limits<int>::max() : id + life - 1;
  // Experts never outlive the run, so their learners can be sized to what is left.
  const int remaining = base_.horizon - id + 1;
  const int lifetime = std::min(life, remaining);
  experts_.push_back(Expert{id, expires, log_weight,
                            build_expert(base_, id, lifetime, Schedule::strongly_convex,
                                         rng_.split(static_cast<std::uint64_t>(id)))});
}

std::vector<int> Flh::expert_ids() const {
  std::vector<int> ids;
  ids.reserve(experts_.size());
  for (const Expert& e : experts_) ids.push_back(e.id);
  return ids;
}

std::vector<double> Flh::weights() const {
  double top = -std::numeric_limits<double>::infinity();
  for (const Expert& e : experts_) top = std::max(top, e.log_weight);
  std::vector<double> w;
  w.reserve(experts_.size());
  double total = 0.0;
  for (const Expert& e : experts_) {
    w.push_back(std::exp(e.log_weight - top));
    total += w.back();
  }
  for (double& v : w) v /= total;
  return w;
}

MetaRound Flh::round(const LossFunction& loss) {
  if (t_ >= base_.horizon) throw Error(ErrorCode::invalid_argument, "FLH ran past its horizon");
  if (experts_.empty()) throw Error(ErrorCode::internal, "FLH has no live experts");
  ++t_;
  const std::vector<double> p = weights();

  MetaRound out;
  out.played = Vec::Zero(base_.body->dim());
  for (std::size_t i = 0; i < experts_.size(); ++i) out.played += p[i] * experts_[i].learner.play();
  out.loss = loss.value(out.played);
  out.live_experts = experts_.size();

  // Experts advance in id order so the merge below is deterministic.
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < experts_.size(); ++i) {
    const Learner::StepResult res = experts_[i].learner.step(loss);
    out.calls += res.calls;
    out.events |= res.events;
    experts_[i].log_weight = std::log(p[i]) - alpha_ * res.loss;
    top = std::max(top, experts_[i].log_weight);
  }
  double total = 0.0;
  for (const Expert& e : experts_) total += std::exp(e.log_weight - top);
  const double log_norm = top + std::log(total);
  for (Expert& e : experts_) e.log_weight -= log_norm;

  std::erase_if(experts_, [&](const Expert& e) { return e.expires < t_ + 1; });
  if (t_ < base_.horizon) admit(t_ + 1, -std::log(static_cast<double>(t_)));
  if (experts_.empty()) throw Error(ErrorCode::internal, "FLH pruned every expert");
  return out;
}

std::vector<EflhLevel> make_eflh_levels(int horizon, double epsilon) {
  if (horizon < 1) throw Error(ErrorCode::invalid_argument, "EFLH horizon must be at least 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw Error(ErrorCode::invalid_argument, "epsilon must be positive");
  const double T = horizon;
  const double log_t = std::log(T);
  std::vector<EflhLevel> levels;
  for (int k = 0;; ++k) {
    const double half = std::exp2(std::pow(1.0 + epsilon, k)) / 2.0;
    if (half > T) break;
    EflhLevel lv;
    lv.k = k;
    lv.length = static_cast<int>(std::floor(half)) + 1;
    lv.lifespan = 4 * lv.length;
    lv.rate = std::min(0.5, std::sqrt(log_t / lv.length));
    levels.push_back(lv);
  }
  return levels;
}

std::vector<int> eflh_birth_times(const EflhLevel& level, int horizon) {
  std::vector<int> out;
  for (int s = 1; s <= horizon; s += level.length) out.push_back(s);
  return out;
}

Eflh::Eflh(LearnerConfig base, double epsilon, CounterRng rng, double loss_scale)
    : base_(std::move(base)), rng_(rng) {
  check_base(base_);
  levels_ = make_eflh_levels(base_.horizon, epsilon);
  if (levels_.empty()) throw Error(ErrorCode::internal, "EFLH produced no levels");
  if (loss_scale < 0.0 || !std::isfinite(loss_scale))
    throw Error(ErrorCode::invalid_argument, "loss scale must be finite and non-negative");
  loss_scale_ = loss_scale > 0.0 ? loss_scale : base_.lipschitz * base_.body->diameter();
  admit_births(1);
}

void Eflh::admit_births(int s) {
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const EflhLevel& lv = levels_[i];
    if ((s - 1) % lv.length != 0) continue;
    const int lifetime = std::min(lv.lifespan, base_.horizon - s + 1);
    const CounterRng stream = rng_.split(static_cast<std::uint64_t>(s)).split(static_cast<std::uint64_t>(lv.k));
    // The learner keeps the full lifespan as its horizon so its step size is r/(2 sqrt(l_k) G).
    Learner learner = build_expert(base_, s, lv.lifespan, Schedule::convex, stream);
    experts_.push_back(Expert{s, static_cast<int>(i), s + lifetime - 1, std::log(lv.rate), std::move(learner)});
  }
}

std::vector<double> Eflh::weights() const {
  std::vector<double> w;
  w.reserve(experts_.size());
  for (const Expert& e : experts_) w.push_back(std::exp(e.log_weight));
  return w;
}

MetaRound Eflh::round(const LossFunction& loss) {
  if (t_ >= base_.horizon) throw Error(ErrorCode::invalid_argument, "EFLH ran past its horizon");
  if (experts_.empty()) throw Error(ErrorCode::internal, "EFLH has no live experts");
  ++t_;

  double top = -std::numeric_limits<double>::infinity();
  for (const Expert& e : experts_) top = std::max(top, e.log_weight);
  MetaRound out;
  out.played = Vec::Zero(base_.body->dim());
  double total = 0.0;
  for (const Expert& e : experts_) {
    const double w = std::exp(e.log_weight - top);
    out.played += w * e.learner.play();
    total += w;
  }
  out.played /= total;
  out.loss = loss.value(out.played);
  out.live_experts = experts_.size();

  for (Expert& e : experts_) {
    const Learner::StepResult res = e.learner.step(loss);
    out.calls += res.calls;
    out.events |= res.events;
    const double rate = levels_[static_cast<std::size_t>(e.level)].rate;
    const double factor = 1.0 + rate * (out.loss - res.loss) / loss_scale_;
    if (!(factor > 0.0)) throw Error(ErrorCode::numeric, "EFLH weight update left the positive range");
    min_factor_ = std::min(min_factor_, factor);
    max_factor_ = std::max(max_factor_, factor);
    e.log_weight += std::log(factor);
  }

  std::erase_if(experts_, [&](const Expert& e) { return e.expires < t_ + 1; });
  if (t_ < base_.horizon) admit_births(t_ + 1);
  if (experts_.empty() && t_ < base_.horizon) throw Error(ErrorCode::internal, "EFLH pruned every expert");
  return out;
}

}  // namespace goco
