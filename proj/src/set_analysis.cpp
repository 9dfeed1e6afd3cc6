#include "adjustkit/set_analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "adjustkit/error.hpp"
#include "adjustkit/parallel.hpp"

namespace adjustkit {

namespace {

std::size_t universe_size(int p) { return std::size_t{1} << p; }

}  // namespace

std::vector<SubsetId> locally_minimal(const AdjustmentCollection& c) {
  const int p = c.p();
  const auto n = universe_size(p);
  // below[m]: some proper subset of m is a member
  std::vector<std::uint8_t> below(n, 0);
  std::vector<SubsetId> out;
  for (std::uint32_t m = 0; m < n; ++m) {
    bool hit = false;
    for (std::uint32_t rest = m; rest && !hit; rest &= rest - 1) {
      const std::uint32_t sub = m & ~(rest & -rest);
      hit = c.contains(sub) || below[sub];
    }
    below[m] = hit;
    if (c.contains(m) && !hit) out.push_back({m, p});
  }
  return out;
}

SubsetId intersection_of(const std::vector<SubsetId>& sets, int p) {
  if (sets.empty()) return SubsetId::empty(p);
  std::uint32_t m = SubsetId::full_mask(p);
  for (auto s : sets) m &= s.mask;
  return {m, p};
}

SubsetId union_of(const std::vector<SubsetId>& sets, int p) {
  std::uint32_t m = 0;
  for (auto s : sets) m |= s.mask;
  return {m, p};
}

std::optional<SubsetId> unique_minimal(const AdjustmentCollection& c) {
  auto mins = locally_minimal(c);
  if (mins.size() == 1) return mins.front();
  return std::nullopt;
}

AdjustmentCollection upward_closed_members(const AdjustmentCollection& c) {
  const int p = c.p();
  const auto n = universe_size(p);
  const std::uint32_t full = SubsetId::full_mask(p);
  std::vector<std::uint8_t> up(n, 0);
  AdjustmentCollection out(p, c.source());
  for (std::uint32_t m = static_cast<std::uint32_t>(n); m-- > 0;) {
    bool ok = c.contains(m);
    for (std::uint32_t missing = full & ~m; missing && ok; missing &= missing - 1)
      ok = up[m | (missing & -missing)];
    up[m] = ok;
    if (ok) out.insert(m);
  }
  return out;
}

SubsetId noncollider_indices(const AdjustmentCollection& c) {
  const int p = c.p();
  const auto up = upward_closed_members(c);
  std::uint32_t found = 0;
  for (auto m : c.masks()) {
    for (std::uint32_t rest = m; rest; rest &= rest - 1) {
      const std::uint32_t i = rest & -rest;
      const std::uint32_t sub = m & ~i;
      if (!c.contains(sub)) found |= i;
      else if (up.contains(m) && !up.contains(sub)) found |= i;
    }
  }
  return {found, p};
}

std::vector<SubsetId> collider_blocks(const AdjustmentCollection& c, int max_block, unsigned threads) {
  const int p = c.p();
  if (max_block < 1) throw Error(ErrorKind::Schema, "max_block must be >= 1");
  std::vector<std::uint32_t> candidates;
  for (auto b : enumerate_subsets(p))
    if (b.size() >= 1 && b.size() <= max_block) candidates.push_back(b.mask);
  const auto members = c.masks();
  std::vector<std::uint8_t> hit(candidates.size(), 0);
  parallel_for(candidates.size(), resolve_threads(threads), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const std::uint32_t b = candidates[k];
      for (auto a : members) {
        if ((a & b) || c.contains(a | b)) continue;
        bool all = true;
        // proper, nonempty submasks of b (A itself is a member already)
        for (std::uint32_t s = (b - 1) & b; s && all; s = (s - 1) & b) all = c.contains(a | s);
        if (all) {
          hit[k] = 1;
          break;
        }
      }
    }
  });
  std::vector<SubsetId> out;
  for (std::size_t k = 0; k < candidates.size(); ++k)
    if (hit[k]) out.push_back({candidates[k], p});
  return out;
}

StructureReport structure_report(const AdjustmentCollection& c, int max_block, unsigned threads) {
  StructureReport r;
  r.p = c.p();
  r.source = c.source();
  r.size = c.size();
  r.locally_minimal = locally_minimal(c);
  r.intersection_of_minimal = intersection_of(r.locally_minimal, r.p);
  if (r.locally_minimal.size() == 1) r.unique_minimal = r.locally_minimal.front();
  r.upward_closed = upward_closed_members(c);
  r.collider_blocks = collider_blocks(c, max_block, threads);
  r.colliders = union_of(r.collider_blocks, r.p);
  r.noncolliders = noncollider_indices(c);
  r.refined_colliders = {r.colliders.mask & ~r.noncolliders.mask, r.p};

  if (c.empty()) r.flags.push_back("empty collection");
  if (r.unique_minimal.has_value() != c.contains(r.intersection_of_minimal))
    r.flags.push_back("intersection of minimal sets disagrees with uniqueness");
  if (!c.contains(SubsetId::full(r.p))) r.flags.push_back("full set not a member");
  return r;
}

AdjustmentCollection ReducedUniverse::expand(const AdjustmentCollection& selected) const {
  AdjustmentCollection out(p, selected.source());
  for (auto a : enumerate_subsets(p)) {
    if (!forks.is_subset_of(a)) continue;
    if (selected.contains(canonical(a.mask))) out.insert(a.mask);
  }
  return out;
}

ReducedUniverse prune_hints(int p, SubsetId known_forks, SubsetId pure_colliders, SubsetId pure_noncolliders) {
  check_dimension(p);
  const std::uint32_t full = SubsetId::full_mask(p);
  for (auto s : {known_forks, pure_colliders, pure_noncolliders})
    if (s.mask & ~full) throw Error(ErrorKind::InvalidIndex, "hint index outside 1..p");
  if (pure_colliders.mask & (known_forks.mask | pure_noncolliders.mask))
    throw Error(ErrorKind::ContradictoryHints, "collider hints overlap fork or non-collider hints");
  ReducedUniverse r{p, {known_forks.mask, p}, {pure_colliders.mask, p}, {pure_noncolliders.mask, p}, {}};
  const std::uint32_t forced = known_forks.mask | pure_noncolliders.mask;
  const std::uint32_t free = full & ~forced & ~pure_colliders.mask;
  for (std::uint32_t s = 0;; s = (s - free) & free) {  // ascending submasks of free
    r.masks.push_back(forced | s);
    if (s == free) break;
  }
  return r;
}

namespace {

// Observed outcome of the nearest `pool` row to each of `queries`.
Eigen::VectorXd match_outcomes(const Eigen::MatrixXd& z, const Eigen::VectorXd& y,
                               const std::vector<Eigen::Index>& queries, const std::vector<Eigen::Index>& pool) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(queries.size()));
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto row = z.row(queries[q]);
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index arg = pool.front();
    for (auto j : pool) {  // pool rows ascending, strict < keeps the lower index
      const double dist = (z.row(j) - row).squaredNorm();
      if (dist < best) {
        best = dist;
        arg = j;
      }
    }
    out(static_cast<Eigen::Index>(q)) = y(arg);
  }
  return out;
}

Eigen::MatrixXd standardized(const Eigen::MatrixXd& x, SubsetId a) {
  Eigen::MatrixXd z = subset_columns(x, a);
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    const double mean = z.col(j).mean();
    z.col(j).array() -= mean;
    const double sd = std::sqrt(z.col(j).squaredNorm() / std::max<Eigen::Index>(1, z.rows() - 1));
    if (sd > 0) z.col(j) /= sd;
  }
  return z;
}

// Imputed potential outcome for arm `s` on every row.
Eigen::VectorXd potential_outcome(const Dataset& d, SubsetId a, const GroupView& own,
                                  const GroupView& other) {
  Eigen::VectorXd out(d.n());
  for (auto i : own.rows) out(i) = d.y()(i);
  if (a.is_empty()) {
    double mean = 0;
    for (auto i : own.rows) mean += d.y()(i);
    mean /= static_cast<double>(own.rows.size());
    for (auto i : other.rows) out(i) = mean;
  } else {
    const auto z = standardized(d.x(), a);
    const auto imputed = match_outcomes(z, d.y(), other.rows, own.rows);
    for (std::size_t k = 0; k < other.rows.size(); ++k) out(other.rows[k]) = imputed(static_cast<Eigen::Index>(k));
  }
  return out;
}

}  // namespace

double estimate_ate(const Dataset& d, SubsetId a0, SubsetId a1) {
  if (a0.p != d.p() || a1.p != d.p()) throw Error(ErrorKind::InvalidIndex, "subset dimension mismatch");
  const auto [g0, g1] = split_by_treatment(d);
  const auto y1 = potential_outcome(d, a1, g1, g0);
  const auto y0 = potential_outcome(d, a0, g0, g1);
  return (y1 - y0).mean();
}

}  // namespace adjustkit
