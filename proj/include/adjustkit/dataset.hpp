#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

#include "adjustkit/subset.hpp"

namespace adjustkit {

/// Observational sample: predictors x (n x p), binary treatment t, observed outcome y = Y(t).
///
/// Validated at construction and immutable afterwards.
class Dataset {
 public:
  Dataset(Eigen::MatrixXd x, std::vector<int> t, Eigen::VectorXd y,
          std::vector<std::string> column_names = {});

  const Eigen::MatrixXd& x() const { return x_; }
  const std::vector<int>& t() const { return t_; }
  const Eigen::VectorXd& y() const { return y_; }
  const std::vector<std::string>& column_names() const { return names_; }

  Eigen::Index n() const { return x_.rows(); }
  int p() const { return static_cast<int>(x_.cols()); }

  /// Same treatment and outcome with a replacement predictor matrix of identical shape.
  Dataset with_predictors(Eigen::MatrixXd x) const;

 private:
  Eigen::MatrixXd x_;
  std::vector<int> t_;
  Eigen::VectorXd y_;
  std::vector<std::string> names_;
};

/// Rows with T = label.
struct GroupView {
  std::vector<Eigen::Index> rows;
  int label = 0;

  Eigen::Index size() const { return static_cast<Eigen::Index>(rows.size()); }
};

/// Disjoint, exhaustive partition of the rows by treatment. Throws EmptyGroup if an arm is empty.
std::pair<GroupView, GroupView> split_by_treatment(const Dataset& d);

/// Rows of one arm only; no emptiness check.
GroupView group_rows(const Dataset& d, int label);

/// Columns of m indexed by a, ascending.
Eigen::MatrixXd subset_columns(const Eigen::MatrixXd& m, SubsetId a);

/// Rows of m listed in `rows`.
Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows);
Eigen::VectorXd take_rows(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& rows);

}  // namespace adjustkit
