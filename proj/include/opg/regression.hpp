#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "opg/rng.hpp"
#include "opg/trajectory.hpp"

namespace opg {

/// Raised when an unpenalised least-squares system is rank deficient; the
/// caller should raise the ridge penalty.
struct RankDeficientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// All monomials of total degree <= degree over the inputs, which are either
/// the state alone or the state with the action appended. The constant
/// monomial is emitted first when an intercept is requested, so evaluating at
/// the zero input yields (1, 0, ..., 0).
class FeatureMap {
 public:
  enum class Inputs { StateOnly, StateAction };

  FeatureMap(Inputs inputs, int state_dim, int degree, bool intercept = true)
      : inputs_(inputs), state_dim_(state_dim), degree_(degree), intercept_(intercept) {
    if (state_dim < 1) throw std::invalid_argument("FeatureMap: state_dim must be >= 1");
    if (degree < 0) throw std::invalid_argument("FeatureMap: degree must be >= 0");
    std::vector<int> exponent(input_dim(), 0);
    for (int total = intercept ? 0 : 1; total <= degree; ++total) {
      enumerate(exponent, 0, total);
    }
  }

  Inputs inputs() const { return inputs_; }
  int state_dim() const { return state_dim_; }
  int degree() const { return degree_; }
  bool has_intercept() const { return intercept_; }
  int input_dim() const { return state_dim_ + (inputs_ == Inputs::StateAction ? 1 : 0); }
  int size() const { return static_cast<int>(monomials_.size()); }

  Eigen::VectorXd eval_packed(const Eigen::VectorXd& x) const {
    if (x.size() != input_dim()) throw std::invalid_argument("FeatureMap: input arity mismatch");
    Eigen::VectorXd phi(size());
    for (int m = 0; m < size(); ++m) {
      double value = 1.0;
      for (int v = 0; v < input_dim(); ++v) {
        for (int k = 0; k < monomials_[m][v]; ++k) value *= x(v);
      }
      phi(m) = value;
    }
    return phi;
  }

  Eigen::VectorXd operator()(const State& s) const {
    if (inputs_ != Inputs::StateOnly) throw std::invalid_argument("FeatureMap: expects an action");
    return eval_packed(s);
  }

  Eigen::VectorXd operator()(const State& s, double a) const {
    if (inputs_ != Inputs::StateAction) throw std::invalid_argument("FeatureMap: state-only map");
    Eigen::VectorXd packed(state_dim_ + 1);
    packed.head(state_dim_) = s;
    packed(state_dim_) = a;
    return eval_packed(packed);
  }

 private:
  void enumerate(std::vector<int>& exponent, int var, int remaining) {
    if (var == input_dim() - 1) {
      exponent[var] = remaining;
      monomials_.push_back(exponent);
      exponent[var] = 0;
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      exponent[var] = k;
      enumerate(exponent, var + 1, remaining - k);
    }
    exponent[var] = 0;
  }

  Inputs inputs_;
  int state_dim_;
  int degree_;
  bool intercept_;
  std::vector<std::vector<int>> monomials_;
};

/// Solves (X^T X + lambda P) B = X^T Y where P is the identity with the
/// first diagonal entry zeroed when the intercept is unpenalised.
inline Eigen::MatrixXd ridge_solve(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                                   double lambda, bool skip_first_penalty) {
  if (X.rows() != Y.rows()) throw std::invalid_argument("ridge_solve: row mismatch");
  if (X.rows() < 1) throw std::invalid_argument("ridge_solve: empty system");
  if (lambda < 0.0) throw std::invalid_argument("ridge_solve: negative penalty");
  Eigen::MatrixXd normal = X.transpose() * X;
  for (int i = skip_first_penalty ? 1 : 0; i < normal.cols(); ++i) normal(i, i) += lambda;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(normal);
  qr.setThreshold(1e-12);
  if (qr.rank() < normal.cols()) {
    throw RankDeficientError("ridge_solve: singular system; raise lambda");
  }
  return qr.solve(X.transpose() * Y);
}

/// Penalised least squares over a feature map; outputs may be vector valued
/// (one coefficient column per output, columns fit independently).
class RidgeModel {
 public:
  RidgeModel() = default;
  RidgeModel(FeatureMap features, Eigen::MatrixXd coef, double lambda)
      : features_(std::move(features)), coef_(std::move(coef)), lambda_(lambda) {}

  const FeatureMap& features() const { return features_.value(); }
  const Eigen::MatrixXd& coef() const { return coef_; }
  double lambda() const { return lambda_; }
  int outputs() const { return static_cast<int>(coef_.cols()); }

  Eigen::VectorXd predict(const State& s) const {
    return coef_.transpose() * features()(s);
  }
  Eigen::VectorXd predict(const State& s, double a) const {
    return coef_.transpose() * features()(s, a);
  }
  double predict_scalar(const State& s) const { return predict(s)(0); }
  double predict_scalar(const State& s, double a) const { return predict(s, a)(0); }

 private:
  std::optional<FeatureMap> features_;
  Eigen::MatrixXd coef_;
  double lambda_ = 0.0;
};

/// Fits a RidgeModel from a pre-built design matrix whose rows are fmap
/// evaluations. The intercept column, when present, is not penalised.
inline RidgeModel fit_ridge(const FeatureMap& fmap, const Eigen::MatrixXd& design,
                            const Eigen::MatrixXd& targets, double lambda) {
  if (design.cols() != fmap.size()) throw std::invalid_argument("fit_ridge: design width mismatch");
  Eigen::MatrixXd coef = ridge_solve(design, targets, lambda, fmap.has_intercept());
  return RidgeModel(fmap, std::move(coef), lambda);
}

/// Random K-fold split of 0..n-1 with every fold size within one of n / K.
struct FoldPartition {
  int folds = 0;
  std::vector<int> assignment;  // trajectory index -> fold index

  std::vector<std::vector<int>> fold_indices() const {
    std::vector<std::vector<int>> out(folds);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      out[assignment[i]].push_back(static_cast<int>(i));
    }
    return out;
  }
};

inline FoldPartition random_partition(int n, int folds, Rng& rng) {
  if (folds < 2) throw std::invalid_argument("random_partition: need at least two folds");
  if (n < folds) throw std::invalid_argument("random_partition: need n >= folds");
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }
  FoldPartition part;
  part.folds = folds;
  part.assignment.resize(n);
  for (int pos = 0; pos < n; ++pos) part.assignment[order[pos]] = pos % folds;
  return part;
}

}  // namespace opg
