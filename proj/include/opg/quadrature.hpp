#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace opg {

/// Gauss-Hermite rule specialised to expectations under a normal law:
///   E_{a ~ N(mean, sd^2)}[f(a)] ~= sum_i p_i f(mean + sqrt(2) sd x_i),
/// where x_i are Hermite abscissas and the p_i sum to one. Exact for
/// polynomial integrands of degree <= 2m - 1.
class GaussHermite {
 public:
  explicit GaussHermite(int nodes = 20) {
    if (nodes < 1) throw std::invalid_argument("GaussHermite: need at least one node");
    // Golub-Welsch: eigen-decompose the Jacobi matrix of the Hermite family.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(nodes, nodes);
    for (int i = 1; i < nodes; ++i) {
      const double off = std::sqrt(i / 2.0);
      jacobi(i, i - 1) = off;
      jacobi(i - 1, i) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve(jacobi);
    abscissa_.resize(nodes);
    weight_.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
      abscissa_[i] = solve.eigenvalues()(i);
      const double v0 = solve.eigenvectors()(0, i);
      weight_[i] = v0 * v0;  // already normalised: sum of squares of first row is 1
    }
  }

  int size() const { return static_cast<int>(abscissa_.size()); }

  /// i-th evaluation point for N(mean, sd^2).
  double point(int i, double mean, double sd) const {
    return mean + std::numbers::sqrt2 * sd * abscissa_[i];
  }

  /// Probability weight of the i-th point (weights sum to 1).
  double weight(int i) const { return weight_[i]; }

  template <typename F>
  double expect(F&& f, double mean, double sd) const {
    double acc = 0.0;
    for (int i = 0; i < size(); ++i) acc += weight_[i] * f(point(i, mean, sd));
    return acc;
  }

  template <typename F>
  Eigen::VectorXd expect_vector(F&& f, double mean, double sd, int dim) const {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < size(); ++i) acc += weight_[i] * f(point(i, mean, sd));
    return acc;
  }

 private:
  std::vector<double> abscissa_;
  std::vector<double> weight_;
};

}  // namespace opg
