#include "adjustkit/copula.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "adjustkit/error.hpp"

namespace adjustkit {

double normal_quantile(double prob) {
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, prob);
}

double normal_cdf(double x) {
  static const boost::math::normal_distribution<double> standard;
  return boost::math::cdf(standard, x);
}

double pool_truncation() {
  static const double q = normal_quantile(0.975);
  return q;
}

namespace {

// Midranks of v (1-based), ties share the average rank.
std::vector<double> midranks(const std::vector<double>& v) {
  const std::size_t m = v.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(m);
  std::size_t r = 0;
  while (r < m) {
    std::size_t end = r + 1;
    while (end < m && v[order[end]] == v[order[r]]) ++end;
    const double mid = 0.5 * static_cast<double>(r + 1 + end);
    for (std::size_t k = r; k < end; ++k) ranks[order[k]] = mid;
    r = end;
  }
  return ranks;
}

}  // namespace

Eigen::VectorXd normal_scores(const Eigen::VectorXd& column, const GroupView& group) {
  std::vector<double> v;
  v.reserve(group.rows.size());
  for (Eigen::Index i : group.rows) v.push_back(column(i));
  const std::vector<double> ranks = midranks(v);
  const double denom = static_cast<double>(v.size()) + 1.0;
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) out(static_cast<Eigen::Index>(k)) = normal_quantile(ranks[k] / denom);
  return out;
}

ScoreTable::ScoreTable(std::vector<double> knots, std::vector<double> scores)
    : knots_(std::move(knots)), scores_(std::move(scores)) {
  if (knots_.empty() || knots_.size() != scores_.size()) {
    throw Error(ErrorKind::Schema, "score table needs matching, nonempty knots and scores");
  }
}

ScoreTable ScoreTable::fit(const Eigen::VectorXd& column, const GroupView& group) {
  if (group.rows.empty()) throw Error(ErrorKind::EmptyGroup, "cannot score an empty arm");
  const Eigen::VectorXd z = normal_scores(column, group);
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(group.rows.size());
  for (std::size_t k = 0; k < group.rows.size(); ++k) pairs.emplace_back(column(group.rows[k]), z(static_cast<Eigen::Index>(k)));
  std::sort(pairs.begin(), pairs.end());
  std::vector<double> knots, scores;
  for (const auto& [x, s] : pairs) {
    if (knots.empty() || x != knots.back()) {
      knots.push_back(x);
      scores.push_back(s);
    }
  }
  return ScoreTable(std::move(knots), std::move(scores));
}

double ScoreTable::operator()(double value) const {
  auto it = std::upper_bound(knots_.begin(), knots_.end(), value);
  if (it == knots_.begin()) return scores_.front();
  return scores_[static_cast<std::size_t>(it - knots_.begin()) - 1];
}

PoolResult pool_scores(std::span<const double> z0, std::span<const double> z1) {
  const double q = pool_truncation();
  double s0 = 0, s1 = 0;
  Eigen::Index m = 0;
  for (std::size_t i = 0; i < z0.size(); ++i) {
    if (std::max(std::abs(z0[i]), std::abs(z1[i])) < q) {
      s0 += z0[i];
      s1 += z1[i];
      ++m;
    }
  }
  PoolResult out;
  out.survivors = m;
  if (m < kMinPoolSurvivors) {
    out.degenerate = true;
    return out;
  }
  const double mean0 = s0 / static_cast<double>(m);
  const double mean1 = s1 / static_cast<double>(m);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < z0.size(); ++i) {
    if (std::max(std::abs(z0[i]), std::abs(z1[i])) < q) {
      sxy += (z1[i] - mean1) * (z0[i] - mean0);
      sxx += (z1[i] - mean1) * (z1[i] - mean1);
    }
  }
  if (!(sxx > 0.0)) {
    out.degenerate = true;
    return out;
  }
  out.a = sxy / sxx;
  out.b = mean0 - out.a * mean1;
  return out;
}

PoolResult pool_transforms(const ScoreTable& scores0, const ScoreTable& scores1,
                           const Eigen::VectorXd& column) {
  std::vector<double> z0(static_cast<std::size_t>(column.size()));
  std::vector<double> z1(z0.size());
  for (Eigen::Index i = 0; i < column.size(); ++i) {
    z0[static_cast<std::size_t>(i)] = scores0(column(i));
    z1[static_cast<std::size_t>(i)] = scores1(column(i));
  }
  return pool_scores(z0, z1);
}

CopulaResult transform_dataset(const Dataset& d) {
  const auto [g0, g1] = split_by_treatment(d);
  Eigen::MatrixXd z(d.n(), d.p());
  std::vector<CopulaTransform> coords;
  coords.reserve(static_cast<std::size_t>(d.p()));
  for (int j = 0; j < d.p(); ++j) {
    const Eigen::VectorXd column = d.x().col(j);
    CopulaTransform ct{ScoreTable::fit(column, g0), ScoreTable::fit(column, g1), {}};
    ct.pool = pool_transforms(ct.arm0, ct.arm1, column);
    for (Eigen::Index i = 0; i < d.n(); ++i) {
      const double v = column(i);
      z(i, j) = d.t()[static_cast<std::size_t>(i)] == 0 ? ct.arm0(v) : ct.pool.a * ct.arm1(v) + ct.pool.b;
    }
    coords.push_back(std::move(ct));
  }
  return {d.with_predictors(std::move(z)), std::move(coords)};
}

}  // namespace adjustkit
