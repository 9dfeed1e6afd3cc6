#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adjustkit/subset.hpp"

namespace adjustkit {

enum class Source { Estimated, Oracle };

/// A set of subsets of {1..p} with O(1) membership.
class AdjustmentCollection {
 public:
  AdjustmentCollection() = default;
  AdjustmentCollection(int p, Source source);
  AdjustmentCollection(int p, std::span<const std::uint32_t> masks, Source source);

  /// Every subset of {1..p}.
  static AdjustmentCollection universe(int p, Source source);

  int p() const { return p_; }
  Source source() const { return source_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(std::uint32_t mask) const { return mask < member_.size() && member_[mask] != 0; }
  bool contains(SubsetId a) const { return contains(a.mask); }
  void insert(std::uint32_t mask);

  /// Members in ascending mask order.
  std::vector<std::uint32_t> masks() const;
  std::vector<SubsetId> members() const;

  friend bool operator==(const AdjustmentCollection& a, const AdjustmentCollection& b) {
    return a.p_ == b.p_ && a.member_ == b.member_;
  }

 private:
  int p_ = 0;
  Source source_ = Source::Estimated;
  std::vector<std::uint8_t> member_;
  std::size_t count_ = 0;
};

/// Collection of all supersets of `base` within p.
AdjustmentCollection supersets_of(SubsetId base, Source source = Source::Oracle);

}  // namespace adjustkit
