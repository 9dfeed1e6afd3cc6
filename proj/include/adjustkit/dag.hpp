#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adjustkit/collection.hpp"
#include "adjustkit/subset.hpp"

namespace adjustkit {

/// Node numbering: 0 = Y, 1 = T, i + 1 = X_i.
using NodeId = int;
inline constexpr NodeId kOutcome = 0;
inline constexpr NodeId kTreatment = 1;
constexpr NodeId x_node(int index) { return index + 1; }
constexpr int x_index(NodeId node) { return node - 1; }

using NodeMask = std::uint64_t;

/// Directed acyclic graph over {Y, T, X_1..X_p}; validated at construction.
class Dag {
 public:
  Dag(int p, std::vector<std::pair<NodeId, NodeId>> edges);

  /// Edge-list text: one "A -> B" per line with nodes Y, T, X<i>; a lone node
  /// name declares it; blank lines and '#' comments are ignored. p is the
  /// largest X index mentioned unless `p` is given.
  static Dag parse(std::string_view text, int p = 0);
  static Dag load(const std::string& path, int p = 0);

  int p() const { return p_; }
  int node_count() const { return p_ + 2; }
  const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }

  NodeMask parents(NodeId v) const { return parents_[static_cast<std::size_t>(v)]; }
  NodeMask children(NodeId v) const { return children_[static_cast<std::size_t>(v)]; }
  /// Strict descendants.
  NodeMask descendants(NodeId v) const { return descendants_[static_cast<std::size_t>(v)]; }
  /// Ancestors of the set, the set included.
  NodeMask ancestral_closure(NodeMask set) const;
  bool has_edge(NodeId from, NodeId to) const { return (children(from) >> to) & 1u; }

  static std::string node_name(NodeId v);
  static NodeId parse_node(std::string_view name);

 private:
  int p_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::vector<NodeMask> parents_;
  std::vector<NodeMask> children_;
  std::vector<NodeMask> descendants_;
};

/// When a collider on a path counts as conditioned on.
enum class ColliderRule {
  /// The collider or any of its descendants is in the conditioning set (standard d-separation).
  Descendants,
  /// Only the collider itself is in the conditioning set.
  SelfOnly,
};

std::string_view to_string(ColliderRule rule);
ColliderRule parse_collider_rule(std::string_view text);

/// Conditioning set over X indices as a node mask.
NodeMask conditioning_nodes(SubsetId z);

/// True iff every path between u and v is blocked by X_z. The standard rule
/// uses the moralized ancestral graph; SelfOnly uses path enumeration.
bool d_separated(const Dag& g, NodeId u, NodeId v, SubsetId z,
                 ColliderRule rule = ColliderRule::Descendants);

/// Literal enumeration of simple paths with the blocking rules applied per path.
bool d_separated_by_paths(const Dag& g, NodeId u, NodeId v, SubsetId z, ColliderRule rule);

/// Every A with Y and T d-separated by X_A. p <= 20.
AdjustmentCollection true_collection(const Dag& g, ColliderRule rule = ColliderRule::Descendants);

/// Smallest C over X (excluding the node itself) with node d-separated from every
/// other X_j given X_C; ties broken by ascending mask.
SubsetId markov_boundary(const Dag& g, NodeId node);

/// Population-level moments and central-subspace bases of a design.
struct PopulationSpec {
  Eigen::MatrixXd sigma0;
  Eigen::MatrixXd sigma1;
  Eigen::MatrixXd beta_y;
  Eigen::MatrixXd beta_t;
  Eigen::VectorXd mu0;
  Eigen::VectorXd mu1;
  std::string provenance;

  int p() const { return static_cast<int>(sigma0.rows()); }
};

/// Linear-Gaussian structural weights for a Dag. Missing edge weights default
/// to 1 and missing noise variances to 1.
struct LinearSem {
  std::map<std::pair<NodeId, NodeId>, double> weights;
  std::vector<double> noise_variances;
  /// Scales the treatment mean contrast.
  double treatment_strength = 1.0;

  double weight(NodeId from, NodeId to) const;
};

/// Discriminant-type design: X | T = s ~ N(mu_s, Sigma) with Sigma from the
/// X-only structural equations. If T has X parents, beta_t is their weight
/// vector and mu_1 - mu_0 = Sigma beta_t; if T has X children with weights
/// gamma, mu_1 - mu_0 = (I - B)^{-1} gamma. beta_y holds the weights into Y.
/// Throws InvalidMechanism when Y has children, Y and T are adjacent, or T
/// has both parents and children.
PopulationSpec linear_sem_population(const Dag& g, const LinearSem& sem);

}  // namespace adjustkit
