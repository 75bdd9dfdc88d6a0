#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "opg/policy.hpp"
#include "opg/rng.hpp"
#include "opg/trajectory.hpp"

namespace opg {

/// Finite-horizon MDP with H decision steps t = 0..H-1. Transitions and
/// rewards are deterministic functions of (state, action, rng draw), so
/// replaying the same stream reproduces a trajectory bit-exactly.
struct EnvSpec {
  int horizon = 0;
  std::function<State(Rng&)> initial_state;
  std::function<State(const State&, double, Rng&)> transition;
  std::function<double(const State&, double, Rng&)> reward;

  void validate() const {
    if (horizon < 1) throw std::invalid_argument("EnvSpec: horizon must be >= 1");
    if (!initial_state || !transition || !reward) {
      throw std::invalid_argument("EnvSpec: missing initial_state/transition/reward");
    }
  }
};

/// Diagnostic caps on reward magnitude, score norm, per-step ratio and
/// cumulative ratio. Reporting only; estimators never clip with these.
struct BoundsProfile {
  double reward_max = 0.0;
  double score_max = 0.0;
  double step_ratio_max = 0.0;
  double marginal_ratio_max = 0.0;
};

template <typename TP, typename BP>
BoundsProfile measure_bounds(const Dataset& data, const TP& target, const BP& behavior) {
  BoundsProfile out;
  for (const Trajectory& traj : data.trajectories) {
    const RatioSeries ratios = ratio_series(target, behavior, traj);
    for (int t = 0; t < traj.horizon(); ++t) {
      out.reward_max = std::max(out.reward_max, std::abs(traj.rewards[t]));
      out.score_max = std::max(out.score_max, target.score(traj.states[t], traj.actions[t]).norm());
      out.step_ratio_max = std::max(out.step_ratio_max, std::exp(ratios.log_step(t)));
      out.marginal_ratio_max = std::max(out.marginal_ratio_max, ratios.prefix(t));
    }
  }
  return out;
}

template <PolicyLike P>
Trajectory sample_trajectory(const EnvSpec& env, const P& policy, Rng& rng) {
  env.validate();
  Trajectory traj;
  traj.states.reserve(env.horizon + 1);
  traj.actions.reserve(env.horizon);
  traj.rewards.reserve(env.horizon);
  traj.states.push_back(env.initial_state(rng));
  for (int t = 0; t < env.horizon; ++t) {
    const State& s = traj.states.back();
    const double a = policy.sample(s, rng);
    traj.actions.push_back(a);
    traj.rewards.push_back(env.reward(s, a, rng));
    traj.states.push_back(env.transition(s, a, rng));
  }
  return traj;
}

/// n independent rollouts. Trajectory i draws only from the substream
/// (seed, i), so the result is identical for any worker count.
template <PolicyLike P>
Dataset sample_dataset(const EnvSpec& env, const P& policy, int n, std::uint64_t seed,
                       int workers = 1) {
  if (n < 1) throw std::invalid_argument("sample_dataset: n must be >= 1");
  env.validate();
  Dataset data;
  data.trajectories.resize(n);
  auto fill = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      Rng rng = Rng::from(seed, "traj", i);
      data.trajectories[i] = sample_trajectory(env, policy, rng);
    }
  };
  if (workers <= 1) {
    fill(0, n);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(fill, begin, end);
    }
    for (std::thread& t : pool) t.join();
  }
  return data;
}

/// The scalar linear-quadratic benchmark: s_0 = 0, s_{t+1} = a_t - s_t,
/// r_t = -s_t^2, behavior policy N(b s, noise^2) and target class
/// N(theta s, noise^2). All randomness enters through the policy.
struct LqBenchmark {
  int horizon = 50;
  double noise = 0.2;
  double behavior_coef = 0.8;

  EnvSpec make_env() const {
    EnvSpec env;
    env.horizon = horizon;
    env.initial_state = [](Rng&) { return State::Zero(1); };
    env.transition = [](const State& s, double a, Rng&) {
      return State::Constant(1, a - s(0));
    };
    env.reward = [](const State& s, double, Rng&) { return -s(0) * s(0); };
    return env;
  }

  GaussianLinearPolicy behavior_policy() const {
    return GaussianLinearPolicy(behavior_coef, noise);
  }

  GaussianLinearPolicy target_policy(double theta) const {
    return GaussianLinearPolicy(theta, noise);
  }
};

/// Exact J(theta) for the LQ benchmark. With s_{t+1} = (theta - 1) s_t + eps,
/// eps ~ N(0, noise^2), the second moments follow
///   V_0 = 0,  V_{t+1} = (theta - 1)^2 V_t + noise^2,
/// and J(theta) = -sum_{t=0}^{H-1} V_t. At theta = 1 this is
/// -noise^2 (H - 1), the value that pins the 0..H-1 decision-step
/// convention (r_0 = 0 because s_0 = 0).
inline double analytic_value(double theta, const LqBenchmark& bench) {
  const double contraction = (theta - 1.0) * (theta - 1.0);
  const double drive = bench.noise * bench.noise;
  double second_moment = 0.0;
  double total = 0.0;
  for (int t = 0; t < bench.horizon; ++t) {
    total -= second_moment;
    second_moment = contraction * second_moment + drive;
  }
  return total;
}

/// dJ/dtheta by differentiating the second-moment recursion.
inline double analytic_gradient(double theta, const LqBenchmark& bench) {
  const double contraction = (theta - 1.0) * (theta - 1.0);
  const double drive = bench.noise * bench.noise;
  double second_moment = 0.0;
  double d_second_moment = 0.0;
  double total = 0.0;
  for (int t = 0; t < bench.horizon; ++t) {
    total -= d_second_moment;
    d_second_moment = contraction * d_second_moment + 2.0 * (theta - 1.0) * second_moment;
    second_moment = contraction * second_moment + drive;
  }
  return total;
}

}  // namespace opg
