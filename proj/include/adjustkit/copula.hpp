#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "adjustkit/dataset.hpp"

namespace adjustkit {

/// Standard normal quantile and CDF (Boost.Math, full double precision).
double normal_quantile(double prob);
double normal_cdf(double x);

/// Normal scores of `column` restricted to the rows of `group`: the midrank
/// empirical CDF shrunk by n_s/(n_s+1), mapped through the normal quantile.
/// Output is aligned with group.rows.
Eigen::VectorXd normal_scores(const Eigen::VectorXd& column, const GroupView& group);

/// Step function from data values to normal scores for one arm.
class ScoreTable {
 public:
  ScoreTable() = default;
  /// knots strictly increasing, scores nondecreasing, same length (>= 1).
  ScoreTable(std::vector<double> knots, std::vector<double> scores);

  /// Build from one arm's column values.
  static ScoreTable fit(const Eigen::VectorXd& column, const GroupView& group);

  /// Score at the largest knot <= value; values below the first knot take the first score.
  double operator()(double value) const;

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& scores() const { return scores_; }

 private:
  std::vector<double> knots_;
  std::vector<double> scores_;
};

struct PoolResult {
  double a = 1.0;
  double b = 0.0;
  Eigen::Index survivors = 0;
  /// Fewer than kMinPoolSurvivors survivors or zero regressor variance; (a, b) = (1, 0).
  bool degenerate = false;
};

inline constexpr Eigen::Index kMinPoolSurvivors = 10;

/// Truncation point for the pooling fit: the 0.975 standard normal quantile.
double pool_truncation();

/// Least squares of z0 on a*z1 + b over observations with max(|z0|, |z1|) below
/// the truncation point.
PoolResult pool_scores(std::span<const double> z0, std::span<const double> z1);

/// Evaluate both arm score tables on every observation's value and pool.
PoolResult pool_transforms(const ScoreTable& scores0, const ScoreTable& scores1,
                           const Eigen::VectorXd& column);

struct CopulaTransform {
  ScoreTable arm0;
  ScoreTable arm1;
  PoolResult pool;
};

struct CopulaResult {
  Dataset data;
  std::vector<CopulaTransform> coordinates;
};

/// Replace each X_i by (1-T) z0(X_i) + T (a z1(X_i) + b). T and Y untouched.
/// Depends on X only through within-arm ranks, so any strictly increasing
/// per-coordinate transform of X yields a bit-identical result.
CopulaResult transform_dataset(const Dataset& d);

}  // namespace adjustkit
