#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adjustkit/collection.hpp"
#include "adjustkit/dataset.hpp"
#include "adjustkit/subset.hpp"

namespace adjustkit {

/// Members with no proper subset in the collection, ascending mask order.
std::vector<SubsetId> locally_minimal(const AdjustmentCollection& c);

/// Intersection of the given sets; the empty set when the list is empty.
SubsetId intersection_of(const std::vector<SubsetId>& sets, int p);

/// The single locally minimal member, if there is exactly one.
std::optional<SubsetId> unique_minimal(const AdjustmentCollection& c);

/// Members all of whose supersets are members.
AdjustmentCollection upward_closed_members(const AdjustmentCollection& c);

/// Indices i such that some member A contains i with A - {i} not a member, or
/// some upward-closed member A contains i with A - {i} a member that is not
/// upward closed.
SubsetId noncollider_indices(const AdjustmentCollection& c);

inline constexpr int kDefaultMaxBlock = 3;

/// Nonempty B, |B| <= max_block, for which some member A disjoint from B has
/// A u C a member for every proper C of B but A u B not a member.
std::vector<SubsetId> collider_blocks(const AdjustmentCollection& c, int max_block = kDefaultMaxBlock,
                                      unsigned threads = 1);

/// Union of the blocks.
SubsetId union_of(const std::vector<SubsetId>& sets, int p);

struct StructureReport {
  int p = 0;
  Source source = Source::Estimated;
  std::size_t size = 0;
  std::vector<SubsetId> locally_minimal;
  SubsetId intersection_of_minimal;
  std::optional<SubsetId> unique_minimal;
  AdjustmentCollection upward_closed;
  std::vector<SubsetId> collider_blocks;
  SubsetId colliders;
  SubsetId refined_colliders;
  SubsetId noncolliders;
  /// Oracle-only identities that fail on this collection.
  std::vector<std::string> flags;
};

StructureReport structure_report(const AdjustmentCollection& c, int max_block = kDefaultMaxBlock,
                                 unsigned threads = 1);

/// Search space cut down by structural knowledge: forks are forced in,
/// pure colliders forced out and pure non-colliders forced in.
struct ReducedUniverse {
  int p = 0;
  SubsetId forks;
  SubsetId colliders;
  SubsetId noncolliders;
  std::vector<std::uint32_t> masks;  // ascending

  /// Representative of A inside the reduced universe.
  std::uint32_t canonical(std::uint32_t a) const {
    return (a | noncolliders.mask) & ~colliders.mask;
  }
  /// Full-universe collection implied by selected representatives.
  AdjustmentCollection expand(const AdjustmentCollection& selected) const;
};

/// Throws ContradictoryHints if a collider hint overlaps a fork or non-collider hint.
ReducedUniverse prune_hints(int p, SubsetId known_forks, SubsetId pure_colliders, SubsetId pure_noncolliders);

/// One-to-one nearest-neighbour matching estimate of E{Y(1) - Y(0)}: each
/// unit's missing potential outcome is the observed outcome of its nearest
/// unit in the other arm on standardized X_{a1} (for Y(1)) or X_{a0} (for
/// Y(0)), with replacement and ties to the lower row. An empty set imputes
/// the other arm's mean.
double estimate_ate(const Dataset& d, SubsetId a0, SubsetId a1);

}  // namespace adjustkit
