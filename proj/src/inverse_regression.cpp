#include "adjustkit/inverse_regression.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "adjustkit/error.hpp"

namespace adjustkit {

namespace {

Eigen::LDLT<Eigen::MatrixXd> checked_factor(const Eigen::MatrixXd& sigma, double ridge) {
  Eigen::MatrixXd s = sigma;
  if (ridge > 0.0) s.diagonal().array() += ridge;
  const double lo = min_eigenvalue(s);
  if (!(lo > kSingularThreshold)) {
    throw Error(ErrorKind::SingularCovariance,
                "smallest covariance eigenvalue " + std::to_string(lo) + " <= 1e-10");
  }
  return s.ldlt();
}

SliceAssignment compress(std::vector<int> labels, int h, SliceKind kind) {
  std::vector<int> remap(static_cast<std::size_t>(h), -1);
  std::vector<char> used(static_cast<std::size_t>(h), 0);
  for (int l : labels) used[static_cast<std::size_t>(l)] = 1;
  int next = 0;
  for (int k = 0; k < h; ++k) {
    if (used[static_cast<std::size_t>(k)]) remap[static_cast<std::size_t>(k)] = next++;
  }
  for (int& l : labels) l = remap[static_cast<std::size_t>(l)];
  SliceAssignment out{std::move(labels), next, kind, next == 1};
  return out;
}

}  // namespace

std::vector<Eigen::Index> SliceAssignment::count() const {
  std::vector<Eigen::Index> c(static_cast<std::size_t>(h), 0);
  for (int l : labels) ++c[static_cast<std::size_t>(l)];
  return c;
}

std::string_view to_string(Method m) { return m == Method::SIR ? "sir" : "save"; }

Method parse_method(std::string_view text) {
  if (text == "sir" || text == "SIR") return Method::SIR;
  if (text == "save" || text == "SAVE") return Method::SAVE;
  throw Error(ErrorKind::Schema, "unknown estimator '" + std::string(text) + "'");
}

SliceAssignment slice_response(const Eigen::VectorXd& values, int h) {
  const Eigen::Index m = values.size();
  if (h < 1) throw Error(ErrorKind::TooFewObservations, "slice count must be positive");
  if (m == 0) throw Error(ErrorKind::TooFewObservations, "no observations to slice");
  std::vector<double> distinct(values.data(), values.data() + m);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  if (static_cast<int>(distinct.size()) <= kDiscreteThreshold) {
    std::vector<int> labels(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto it = std::lower_bound(distinct.begin(), distinct.end(), values(i));
      labels[static_cast<std::size_t>(i)] = static_cast<int>(it - distinct.begin());
    }
    return compress(std::move(labels), static_cast<int>(distinct.size()), SliceKind::Discrete);
  }

  if (m < h) {
    throw Error(ErrorKind::TooFewObservations,
                std::to_string(m) + " observations for " + std::to_string(h) + " slices");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });

  std::vector<int> labels(static_cast<std::size_t>(m));
  Eigen::Index r = 0;
  while (r < m) {
    // A run of tied values takes the slice of its first sorted position.
    Eigen::Index end = r + 1;
    while (end < m && values(order[static_cast<std::size_t>(end)]) == values(order[static_cast<std::size_t>(r)])) ++end;
    const int label = static_cast<int>((r * h) / m);
    for (Eigen::Index k = r; k < end; ++k) labels[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = label;
    r = end;
  }
  return compress(std::move(labels), h, SliceKind::Quantile);
}

SliceAssignment slices_from_labels(const std::vector<int>& labels) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) v(static_cast<Eigen::Index>(i)) = labels[i];
  std::vector<int> distinct = labels;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[i] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), labels[i]) - distinct.begin());
  }
  return compress(std::move(out), static_cast<int>(distinct.size()), SliceKind::Discrete);
}

CandidateMatrix sir_matrix(const Eigen::MatrixXd& xc, const SliceAssignment& slices,
                           const Eigen::MatrixXd& sigma, double ridge) {
  const auto factor = checked_factor(sigma, ridge);
  const Eigen::Index p = xc.cols();
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(p, slices.h);
  const auto counts = slices.count();
  for (Eigen::Index i = 0; i < xc.rows(); ++i) {
    means.col(slices.labels[static_cast<std::size_t>(i)]) += xc.row(i).transpose();
  }
  for (int k = 0; k < slices.h; ++k) means.col(k) /= static_cast<double>(counts[static_cast<std::size_t>(k)]);
  return {factor.solve(means), Method::SIR, Target::OutcomeInArm, slices.h};
}

CandidateMatrix save_matrix(const Eigen::MatrixXd& xc, const SliceAssignment& slices,
                            const Eigen::MatrixXd& sigma, double ridge) {
  const auto factor = checked_factor(sigma, ridge);
  const Eigen::Index p = xc.cols();
  const auto counts = slices.count();
  for (int k = 0; k < slices.h; ++k) {
    if (counts[static_cast<std::size_t>(k)] < 2) {
      throw Error(ErrorKind::SliceTooSmall, "slice " + std::to_string(k + 1) + " has fewer than 2 rows");
    }
  }
  Eigen::MatrixXd blocks(p, p * slices.h);
  std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(slices.h));
  for (Eigen::Index i = 0; i < xc.rows(); ++i) members[static_cast<std::size_t>(slices.labels[static_cast<std::size_t>(i)])].push_back(i);
  for (int k = 0; k < slices.h; ++k) {
    const Eigen::MatrixXd within = covariance(take_rows(xc, members[static_cast<std::size_t>(k)]));
    blocks.middleCols(k * p, p) = sigma - within;
  }
  return {factor.solve(blocks), Method::SAVE, Target::OutcomeInArm, slices.h};
}

CandidateMatrix outcome_candidate(const Dataset& d, int arm, Method method, int h, double ridge) {
  const GroupView g = group_rows(d, arm);
  if (g.size() == 0) throw Error(ErrorKind::EmptyGroup, "arm " + std::to_string(arm) + " is empty");
  if (g.size() < 2 * static_cast<Eigen::Index>(h)) {
    throw Error(ErrorKind::TooFewObservations,
                "arm " + std::to_string(arm) + " has " + std::to_string(g.size()) +
                    " rows, need at least " + std::to_string(2 * h));
  }
  const Eigen::MatrixXd xs = take_rows(d.x(), g.rows);
  const Eigen::VectorXd ys = take_rows(d.y(), g.rows);
  const Eigen::MatrixXd xc = xs.rowwise() - column_means(xs).transpose();
  const Eigen::MatrixXd sigma = covariance(xs);
  const SliceAssignment slices = slice_response(ys, h);
  CandidateMatrix out = method == Method::SIR ? sir_matrix(xc, slices, sigma, ridge)
                                              : save_matrix(xc, slices, sigma, ridge);
  out.target = Target::OutcomeInArm;
  return out;
}

CandidateMatrix treatment_candidate(const Dataset& d, Method method, double ridge) {
  split_by_treatment(d);
  const Eigen::MatrixXd xc = d.x().rowwise() - column_means(d.x()).transpose();
  const Eigen::MatrixXd sigma = covariance(d.x());
  const SliceAssignment slices = slices_from_labels(d.t());
  CandidateMatrix out = method == Method::SIR ? sir_matrix(xc, slices, sigma, ridge)
                                              : save_matrix(xc, slices, sigma, ridge);
  out.target = Target::Treatment;
  return out;
}

Eigen::VectorXd column_means(const Eigen::MatrixXd& x) { return x.colwise().mean().transpose(); }

Eigen::MatrixXd covariance(const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd xc = x.rowwise() - x.colwise().mean();
  Eigen::MatrixXd cov = (xc.transpose() * xc) / static_cast<double>(x.rows() - 1);
  return (cov + cov.transpose()) * 0.5;
}

std::pair<GroupMoments, GroupMoments> group_moments(const Dataset& d) {
  const auto [g0, g1] = split_by_treatment(d);
  const Eigen::MatrixXd marginal = covariance(d.x());
  auto one = [&](const GroupView& g) {
    if (g.size() < 2) {
      throw Error(ErrorKind::TooFewObservations, "arm " + std::to_string(g.label) + " has fewer than 2 rows");
    }
    const Eigen::MatrixXd xs = take_rows(d.x(), g.rows);
    GroupMoments m;
    m.mu = column_means(xs);
    m.sigma = covariance(xs);
    m.sigma_marginal = marginal;
    m.n_s = g.size();
    m.degenerate = m.sigma.isZero(0.0);
    return m;
  };
  return {one(g0), one(g1)};
}

double min_eigenvalue(const Eigen::MatrixXd& sym) {
  if (sym.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace adjustkit
