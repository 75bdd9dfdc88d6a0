#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <concepts>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "opg/quadrature.hpp"
#include "opg/rng.hpp"
#include "opg/trajectory.hpp"

namespace opg {

/// Anything that can act, report its own densities and scores, and expose a
/// finite node set that integrates exactly against its action distribution.
template <typename P>
concept PolicyLike = requires(const P& p, const State& s, double a, Rng& rng) {
  { p.dim() } -> std::convertible_to<int>;
  { p.log_density(s, a) } -> std::convertible_to<double>;
  { p.score(s, a) } -> std::convertible_to<Eigen::VectorXd>;
  { p.sample(s, rng) } -> std::convertible_to<double>;
  { p.node_count() } -> std::convertible_to<int>;
  { p.action_nodes(s, static_cast<double*>(nullptr), static_cast<double*>(nullptr)) };
};

/// Gaussian policy with a linear mean: a | s ~ N(coef . basis(s), scale^2).
/// The scale is fixed, so scores are taken with respect to the mean
/// coefficients only.
class GaussianLinearPolicy {
 public:
  using Basis = std::function<Eigen::VectorXd(const State&)>;

  GaussianLinearPolicy(Eigen::VectorXd coef, double scale,
                       Basis basis = {}, int quadrature_nodes = 20)
      : coef_(std::move(coef)),
        scale_(scale),
        basis_(basis ? std::move(basis) : Basis([](const State& s) { return s; })),
        quad_(quadrature_nodes) {
    if (!(scale_ > 0.0)) throw std::invalid_argument("GaussianLinearPolicy: scale must be positive");
  }

  /// Scalar-state convenience: mean = theta * s.
  GaussianLinearPolicy(double theta, double scale)
      : GaussianLinearPolicy(Eigen::VectorXd::Constant(1, theta), scale) {}

  int dim() const { return static_cast<int>(coef_.size()); }
  double scale() const { return scale_; }
  const Eigen::VectorXd& coef() const { return coef_; }

  double mean(const State& s) const { return coef_.dot(basis_(s)); }

  double log_density(const State& s, double a) const {
    const double z = (a - mean(s)) / scale_;
    return -0.5 * z * z - std::log(scale_) - 0.5 * std::log(2.0 * std::numbers::pi);
  }

  /// Gradient of log_density in the mean coefficients: basis(s) (a - mean) / scale^2.
  Eigen::VectorXd score(const State& s, double a) const {
    return basis_(s) * ((a - mean(s)) / (scale_ * scale_));
  }

  double sample(const State& s, Rng& rng) const { return rng.normal(mean(s), scale_); }

  int node_count() const { return quad_.size(); }

  /// Gauss-Hermite nodes of the conditional action law at s.
  void action_nodes(const State& s, double* actions, double* weights) const {
    const double m = mean(s);
    for (int i = 0; i < quad_.size(); ++i) {
      if (actions) actions[i] = quad_.point(i, m, scale_);
      if (weights) weights[i] = quad_.weight(i);
    }
  }

  template <typename F>
  double expect(const State& s, F&& f) const {
    return quad_.expect(std::forward<F>(f), mean(s), scale_);
  }

 private:
  Eigen::VectorXd coef_;
  double scale_;
  Basis basis_;
  GaussHermite quad_;
};

/// Type-erased policy handle for layers that must store policies of unknown
/// concrete type (fitted nuisances keep one for re-deriving v from q).
struct PolicyView {
  int dim = 0;
  int node_count = 0;
  std::function<double(const State&, double)> log_density;
  std::function<Eigen::VectorXd(const State&, double)> score;
  std::function<double(const State&, Rng&)> sample;
  std::function<void(const State&, double*, double*)> action_nodes;

  bool valid() const { return static_cast<bool>(score) && static_cast<bool>(action_nodes); }
};

template <PolicyLike P>
PolicyView view(P policy) {
  PolicyView out;
  out.dim = policy.dim();
  out.node_count = policy.node_count();
  out.log_density = [policy](const State& s, double a) { return policy.log_density(s, a); };
  out.score = [policy](const State& s, double a) { return policy.score(s, a); };
  out.sample = [policy](const State& s, Rng& rng) { return policy.sample(s, rng); };
  out.action_nodes = [policy](const State& s, double* acts, double* wts) {
    policy.action_nodes(s, acts, wts);
  };
  return out;
}

/// log pi_target(a|s) - log pi_behavior(a|s); finite whenever both densities
/// are positive at (s, a).
template <typename TP, typename BP>
double log_step_ratio(const TP& target, const BP& behavior, const State& s, double a) {
  return target.log_density(s, a) - behavior.log_density(s, a);
}

/// Per-step log density ratios of one trajectory together with their prefix
/// sums. Everything stays in log space; products are exponentiated only at
/// the final use site, since the raw cumulative ratio under/overflows double
/// precision at moderate horizons.
class RatioSeries {
 public:
  RatioSeries() = default;
  explicit RatioSeries(std::vector<double> step_logs) : step_(std::move(step_logs)) {
    prefix_.resize(step_.size());
    double acc = 0.0;
    for (std::size_t t = 0; t < step_.size(); ++t) {
      acc += step_[t];
      prefix_[t] = acc;
    }
  }

  int horizon() const { return static_cast<int>(step_.size()); }

  double log_step(int t) const { return step_[t]; }

  /// log of the cumulative ratio over steps 0..t; t = -1 gives the empty
  /// product (0).
  double log_prefix(int t) const { return t < 0 ? 0.0 : prefix_[t]; }

  /// log of the cumulative ratio over steps t1..t2; empty ranges (t1 > t2)
  /// give 0, i.e. a ratio of one.
  double log_range(int t1, int t2) const {
    if (t1 > t2) return 0.0;
    return log_prefix(t2) - log_prefix(t1 - 1);
  }

  double prefix(int t) const { return std::exp(log_prefix(t)); }
  double range(int t1, int t2) const { return std::exp(log_range(t1, t2)); }

 private:
  std::vector<double> step_;
  std::vector<double> prefix_;
};

template <typename TP, typename BP>
RatioSeries ratio_series(const TP& target, const BP& behavior, const Trajectory& traj) {
  std::vector<double> logs(traj.horizon());
  for (int t = 0; t < traj.horizon(); ++t) {
    logs[t] = log_step_ratio(target, behavior, traj.states[t], traj.actions[t]);
  }
  return RatioSeries(std::move(logs));
}

}  // namespace opg
