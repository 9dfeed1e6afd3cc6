#include "adjustkit/dag.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "adjustkit/error.hpp"

namespace adjustkit {

namespace {

constexpr NodeMask bit(NodeId v) { return NodeMask{1} << v; }

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class F>
void for_each_bit(NodeMask m, F&& f) {
  while (m) {
    const int v = std::countr_zero(m);
    f(v);
    m &= m - 1;
  }
}

}  // namespace

Dag::Dag(int p, std::vector<std::pair<NodeId, NodeId>> edges) : p_(p), edges_(std::move(edges)) {
  if (p < 0 || p + 2 > 62) throw Error(ErrorKind::InvalidGraph, "too many nodes");
  const auto nodes = static_cast<std::size_t>(node_count());
  parents_.assign(nodes, 0);
  children_.assign(nodes, 0);
  for (auto [from, to] : edges_) {
    if (from < 0 || to < 0 || from >= node_count() || to >= node_count())
      throw Error(ErrorKind::InvalidGraph, "edge endpoint outside the node set");
    if (from == to) throw Error(ErrorKind::InvalidGraph, "self-loop at " + node_name(from));
    if (has_edge(from, to))
      throw Error(ErrorKind::InvalidGraph, "duplicate edge " + node_name(from) + " -> " + node_name(to));
    children_[static_cast<std::size_t>(from)] |= bit(to);
    parents_[static_cast<std::size_t>(to)] |= bit(from);
  }

  // Kahn order; leftovers mean a cycle.
  std::vector<int> indegree(nodes);
  for (std::size_t v = 0; v < nodes; ++v) indegree[v] = std::popcount(parents_[v]);
  std::vector<NodeId> order;
  for (std::size_t v = 0; v < nodes; ++v)
    if (indegree[v] == 0) order.push_back(static_cast<NodeId>(v));
  for (std::size_t k = 0; k < order.size(); ++k) {
    for_each_bit(children_[static_cast<std::size_t>(order[k])], [&](int c) {
      if (--indegree[static_cast<std::size_t>(c)] == 0) order.push_back(c);
    });
  }
  if (order.size() != nodes) throw Error(ErrorKind::CyclicGraph, "graph has a directed cycle");

  descendants_.assign(nodes, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto v = static_cast<std::size_t>(*it);
    for_each_bit(children_[v], [&](int c) { descendants_[v] |= bit(c) | descendants_[static_cast<std::size_t>(c)]; });
  }
}

std::string Dag::node_name(NodeId v) {
  if (v == kOutcome) return "Y";
  if (v == kTreatment) return "T";
  return "X" + std::to_string(x_index(v));
}

NodeId Dag::parse_node(std::string_view name) {
  name = trim(name);
  if (name == "Y") return kOutcome;
  if (name == "T") return kTreatment;
  if (name.size() >= 2 && name[0] == 'X') {
    int i = 0;
    const auto* end = name.data() + name.size();
    auto [ptr, ec] = std::from_chars(name.data() + 1, end, i);
    if (ec == std::errc{} && ptr == end && i >= 1) return x_node(i);
  }
  throw Error(ErrorKind::InvalidGraph, "bad node name '" + std::string(name) + "'");
}

Dag Dag::parse(std::string_view text, int p) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  int max_index = 0;
  auto note = [&](NodeId v) {
    if (v >= 2) max_index = std::max(max_index, x_index(v));
    return v;
  };
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto arrow = line.find("->");
    try {
      if (arrow == std::string_view::npos) {
        note(parse_node(line));
      } else {
        edges.emplace_back(note(parse_node(line.substr(0, arrow))), note(parse_node(line.substr(arrow + 2))));
      }
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + std::string(line));
    }
  }
  if (p == 0) p = max_index;
  if (max_index > p) throw Error(ErrorKind::InvalidGraph, "node X" + std::to_string(max_index) + " exceeds p");
  return Dag(p, std::move(edges));
}

Dag Dag::load(const std::string& path, int p) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Schema, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), p);
}

NodeMask Dag::ancestral_closure(NodeMask set) const {
  NodeMask out = set;
  NodeMask frontier = set;
  while (frontier) {
    NodeMask next = 0;
    for_each_bit(frontier, [&](int v) { next |= parents(v); });
    frontier = next & ~out;
    out |= next;
  }
  return out;
}

std::string_view to_string(ColliderRule rule) {
  return rule == ColliderRule::Descendants ? "standard" : "self-only";
}

ColliderRule parse_collider_rule(std::string_view text) {
  if (text == "standard" || text == "descendants") return ColliderRule::Descendants;
  if (text == "self-only" || text == "self") return ColliderRule::SelfOnly;
  throw Error(ErrorKind::Schema, "unknown collider rule '" + std::string(text) + "'");
}

NodeMask conditioning_nodes(SubsetId z) { return NodeMask{z.mask} << 2; }

namespace {

bool check_query(const Dag& g, NodeId u, NodeId v, NodeMask zn) {
  if (u == v || u < 0 || v < 0 || u >= g.node_count() || v >= g.node_count())
    throw Error(ErrorKind::InvalidIndex, "bad d-separation endpoints");
  return ((zn >> u) & 1u) == 0 && ((zn >> v) & 1u) == 0;
}

bool separated_moral(const Dag& g, NodeId u, NodeId v, NodeMask zn) {
  const NodeMask anc = g.ancestral_closure(bit(u) | bit(v) | zn);
  std::vector<NodeMask> adj(static_cast<std::size_t>(g.node_count()), 0);
  for_each_bit(anc, [&](int w) {
    const NodeMask pa = g.parents(w);
    adj[static_cast<std::size_t>(w)] |= pa;
    for_each_bit(pa, [&](int q) { adj[static_cast<std::size_t>(q)] |= bit(w) | (pa & ~bit(q)); });
  });
  NodeMask seen = bit(u);
  NodeMask frontier = bit(u);
  while (frontier) {
    NodeMask next = 0;
    for_each_bit(frontier, [&](int w) { next |= adj[static_cast<std::size_t>(w)]; });
    next &= anc & ~zn & ~seen;
    if (next & bit(v)) return false;
    seen |= next;
    frontier = next;
  }
  return true;
}

struct PathSearch {
  const Dag& g;
  NodeId target;
  NodeMask zn;
  ColliderRule rule;

  bool open_collider(NodeId b) const {
    if (zn & bit(b)) return true;
    return rule == ColliderRule::Descendants && (g.descendants(b) & zn) != 0;
  }

  // True if some open path continues from `cur`, reached from `prev`.
  bool open_from(NodeId prev, NodeId cur, NodeMask visited) const {
    const NodeMask nbrs = (g.parents(cur) | g.children(cur)) & ~visited;
    bool found = false;
    for_each_bit(nbrs, [&](int next) {
      if (found) return;
      if (prev >= 0) {
        const bool collider = g.has_edge(prev, cur) && g.has_edge(next, cur);
        const bool passes = collider ? open_collider(cur) : (zn & bit(cur)) == 0;
        if (!passes) return;
      }
      if (next == target || open_from(cur, next, visited | bit(next))) found = true;
    });
    return found;
  }
};

}  // namespace

bool d_separated_by_paths(const Dag& g, NodeId u, NodeId v, SubsetId z, ColliderRule rule) {
  const NodeMask zn = conditioning_nodes(z);
  if (!check_query(g, u, v, zn)) return true;
  PathSearch search{g, v, zn, rule};
  return !search.open_from(-1, u, bit(u));
}

bool d_separated(const Dag& g, NodeId u, NodeId v, SubsetId z, ColliderRule rule) {
  const NodeMask zn = conditioning_nodes(z);
  if (!check_query(g, u, v, zn)) return true;
  if (rule == ColliderRule::SelfOnly) return d_separated_by_paths(g, u, v, z, rule);
  return separated_moral(g, u, v, zn);
}

AdjustmentCollection true_collection(const Dag& g, ColliderRule rule) {
  if (g.p() > kWarnDimension) throw Error(ErrorKind::DimensionTooLarge, "oracle enumeration needs p <= 20");
  AdjustmentCollection c(g.p(), Source::Oracle);
  for (auto a : enumerate_subsets(g.p()))
    if (d_separated(g, kOutcome, kTreatment, a, rule)) c.insert(a.mask);
  return c;
}

SubsetId markov_boundary(const Dag& g, NodeId node) {
  const int p = g.p();
  if (p > kWarnDimension) throw Error(ErrorKind::DimensionTooLarge, "boundary enumeration needs p <= 20");
  const std::uint32_t own = node >= 2 ? (1u << (x_index(node) - 1)) : 0u;
  const std::uint32_t pool = SubsetId::full_mask(p) & ~own;
  std::vector<std::uint32_t> cands;
  for (std::uint32_t s = pool;; s = (s - 1) & pool) {
    cands.push_back(s);
    if (s == 0) break;
  }
  std::sort(cands.begin(), cands.end(), [](std::uint32_t a, std::uint32_t b) {
    const int ca = std::popcount(a), cb = std::popcount(b);
    return ca != cb ? ca < cb : a < b;
  });
  for (auto c : cands) {
    const SubsetId z{c, p};
    bool ok = true;
    for (int j = 1; j <= p && ok; ++j) {
      const std::uint32_t jb = 1u << (j - 1);
      if ((c & jb) || jb == own) continue;
      ok = d_separated(g, node, x_node(j), z);
    }
    if (ok) return z;
  }
  return SubsetId{pool, p};
}

double LinearSem::weight(NodeId from, NodeId to) const {
  auto it = weights.find({from, to});
  return it == weights.end() ? 1.0 : it->second;
}

PopulationSpec linear_sem_population(const Dag& g, const LinearSem& sem) {
  const int p = g.p();
  if (g.children(kOutcome) != 0) throw Error(ErrorKind::InvalidMechanism, "Y must be a sink");
  if (g.has_edge(kOutcome, kTreatment) || g.has_edge(kTreatment, kOutcome))
    throw Error(ErrorKind::InvalidMechanism, "Y and T must not be adjacent");
  const NodeMask t_par = g.parents(kTreatment);
  const NodeMask t_chi = g.children(kTreatment);
  if (t_par && t_chi) throw Error(ErrorKind::InvalidMechanism, "T with both parents and children");
  if (!sem.noise_variances.empty() && static_cast<int>(sem.noise_variances.size()) != p)
    throw Error(ErrorKind::InvalidMechanism, "need one noise variance per predictor");

  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd d = Eigen::VectorXd::Ones(p);
  for (int j = 0; j < p; ++j) {
    if (!sem.noise_variances.empty()) {
      d(j) = sem.noise_variances[static_cast<std::size_t>(j)];
      if (!(d(j) > 0)) throw Error(ErrorKind::InvalidMechanism, "noise variances must be positive");
    }
    for_each_bit(g.parents(x_node(j + 1)), [&](int q) {
      if (q >= 2) b(j, x_index(q) - 1) = sem.weight(q, x_node(j + 1));
    });
  }
  const Eigen::MatrixXd i_minus_b = Eigen::MatrixXd::Identity(p, p) - b;
  const Eigen::MatrixXd path = i_minus_b.inverse();
  Eigen::MatrixXd sigma = path * d.asDiagonal() * path.transpose();
  sigma = (sigma + sigma.transpose()) * 0.5;

  PopulationSpec out;
  out.sigma0 = sigma;
  out.sigma1 = sigma;
  out.beta_y = Eigen::MatrixXd::Zero(p, 1);
  for_each_bit(g.parents(kOutcome), [&](int q) { out.beta_y(x_index(q) - 1, 0) = sem.weight(q, kOutcome); });

  out.beta_t = Eigen::MatrixXd::Zero(p, 1);
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(p);
  if (t_par) {
    for_each_bit(t_par, [&](int q) { out.beta_t(x_index(q) - 1, 0) = sem.weight(q, kTreatment); });
    shift = sigma * out.beta_t.col(0);
  } else if (t_chi) {
    Eigen::VectorXd gamma = Eigen::VectorXd::Zero(p);
    for_each_bit(t_chi, [&](int c) { gamma(x_index(c) - 1) = sem.weight(kTreatment, c); });
    shift = path * gamma;
    out.beta_t.col(0) = i_minus_b.transpose() * d.cwiseInverse().asDiagonal() * gamma;
  }
  shift *= sem.treatment_strength;
  out.mu0 = Eigen::VectorXd::Zero(p);
  out.mu1 = shift;
  out.provenance = "linear SEM over " + std::to_string(g.edges().size()) + " edges";
  return out;
}

}  // namespace adjustkit
