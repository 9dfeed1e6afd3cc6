#include "adjustkit/dataset.hpp"

#include "adjustkit/error.hpp"

namespace adjustkit {

Dataset::Dataset(Eigen::MatrixXd x, std::vector<int> t, Eigen::VectorXd y,
                 std::vector<std::string> column_names)
    : x_(std::move(x)), t_(std::move(t)), y_(std::move(y)), names_(std::move(column_names)) {
  if (x_.rows() < 2) throw Error(ErrorKind::Schema, "need at least 2 observations");
  if (x_.cols() < 1) throw Error(ErrorKind::Schema, "need at least 1 predictor");
  if (static_cast<Eigen::Index>(t_.size()) != x_.rows() || y_.size() != x_.rows()) {
    throw Error(ErrorKind::Schema, "x, t, y lengths disagree");
  }
  for (int v : t_) {
    if (v != 0 && v != 1) throw Error(ErrorKind::Schema, "treatment values must be 0 or 1");
  }
  if (!x_.allFinite()) throw Error(ErrorKind::Schema, "predictor matrix has non-finite entries");
  if (!y_.allFinite()) throw Error(ErrorKind::Schema, "outcome has non-finite entries");
  if (names_.empty()) {
    for (int j = 1; j <= p(); ++j) names_.push_back("X" + std::to_string(j));
  }
  if (static_cast<int>(names_.size()) != p()) throw Error(ErrorKind::Schema, "column name count mismatch");
}

Dataset Dataset::with_predictors(Eigen::MatrixXd x) const {
  return Dataset(std::move(x), t_, y_, names_);
}

GroupView group_rows(const Dataset& d, int label) {
  GroupView g;
  g.label = label;
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    if (d.t()[static_cast<std::size_t>(i)] == label) g.rows.push_back(i);
  }
  return g;
}

std::pair<GroupView, GroupView> split_by_treatment(const Dataset& d) {
  GroupView g0 = group_rows(d, 0);
  GroupView g1 = group_rows(d, 1);
  if (g0.rows.empty() || g1.rows.empty()) {
    throw Error(ErrorKind::EmptyGroup, "both treatment arms must be present");
  }
  return {std::move(g0), std::move(g1)};
}

Eigen::MatrixXd subset_columns(const Eigen::MatrixXd& m, SubsetId a) {
  const std::vector<int> cols = a.positions();
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = m.col(cols[j]);
  return out;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

Eigen::VectorXd take_rows(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(rows[i]);
  return out;
}

}  // namespace adjustkit
