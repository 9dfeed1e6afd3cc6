#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "adjustkit/collection.hpp"
#include "adjustkit/dag.hpp"
#include "adjustkit/subset.hpp"

namespace testing {

using adjustkit::AdjustmentCollection;
using adjustkit::Source;
using adjustkit::SubsetId;

inline SubsetId S(std::initializer_list<int> idx, int p) { return SubsetId::from_indices(idx, p); }

// singles: exact members; ups: every superset of each listed set
inline AdjustmentCollection closed_form(int p, std::initializer_list<std::initializer_list<int>> singles,
                                        std::initializer_list<std::initializer_list<int>> ups) {
  AdjustmentCollection c(p, Source::Oracle);
  for (auto s : singles) c.insert(S(s, p).mask);
  for (auto u : ups) {
    const auto base = S(u, p);
    for (auto a : adjustkit::enumerate_subsets(p))
      if (base.is_subset_of(a)) c.insert(a.mask);
  }
  return c;
}

inline adjustkit::Dag load_dag(const std::string& name) {
  return adjustkit::Dag::load(std::string(ADJUSTKIT_DATA_DIR) + "/dags/" + name + ".txt");
}

inline std::vector<SubsetId> sets(int p, std::initializer_list<std::initializer_list<int>> lists) {
  std::vector<SubsetId> out;
  for (auto l : lists) out.push_back(S(l, p));
  return out;
}

}  // namespace testing

#include <random>

namespace testing {

// Random DAG over {Y, T, X1..Xp}: X edges follow index order, Y is a sink,
// T either has X parents or X children (never both), Y and T not adjacent.
struct RandomDesign {
  adjustkit::Dag dag;
  adjustkit::LinearSem sem;
};

inline RandomDesign random_design(std::mt19937_64& rng, int p, double density = 0.35) {
  using namespace adjustkit;
  std::bernoulli_distribution edge(density);
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> mag(0.5, 1.5);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int i = 1; i <= p; ++i)
    for (int j = i + 1; j <= p; ++j)
      if (edge(rng)) edges.emplace_back(x_node(i), x_node(j));
  const bool t_parents = coin(rng);
  for (int i = 1; i <= p; ++i) {
    if (edge(rng)) edges.emplace_back(x_node(i), kOutcome);
    if (edge(rng)) {
      if (t_parents) edges.emplace_back(x_node(i), kTreatment);
      else edges.emplace_back(kTreatment, x_node(i));
    }
  }
  LinearSem sem;
  for (auto e : edges) sem.weights[e] = (coin(rng) ? 1.0 : -1.0) * mag(rng);
  for (int i = 0; i < p; ++i) sem.noise_variances.push_back(mag(rng));
  return {Dag(p, edges), sem};
}

}  // namespace testing

#include "adjustkit/dataset.hpp"

namespace testing {

// Draw from a population design: T ~ Bernoulli(1/2), X | T ~ N(mu_T, Sigma_T),
// Y = beta_y' X + noise.
inline adjustkit::Dataset sample_population(const adjustkit::PopulationSpec& pop, Eigen::Index n,
                                            std::uint64_t seed, double noise_sd = 0.5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::bernoulli_distribution coin(0.5);
  const int p = pop.p();
  const Eigen::MatrixXd l0 = pop.sigma0.llt().matrixL();
  const Eigen::MatrixXd l1 = pop.sigma1.llt().matrixL();
  Eigen::MatrixXd x(n, p);
  std::vector<int> t(static_cast<std::size_t>(n));
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int s = coin(rng);
    t[static_cast<std::size_t>(i)] = s;
    Eigen::VectorXd e(p);
    for (int j = 0; j < p; ++j) e(j) = z(rng);
    const Eigen::VectorXd row = (s ? pop.mu1 : pop.mu0) + (s ? l1 : l0) * e;
    x.row(i) = row.transpose();
    y(i) = pop.beta_y.col(0).dot(row) + noise_sd * z(rng);
  }
  return adjustkit::Dataset(std::move(x), std::move(t), std::move(y));
}

}  // namespace testing
