#pragma once

#include <bit>
#include <cstdint>
#include <ranges>
#include <string>
#include <vector>

namespace adjustkit {

/// Hard cap on the predictor dimension for exhaustive search.
inline constexpr int kMaxDimension = 24;
/// Dimension at and above which exhaustive runs are slow enough to warn about.
inline constexpr int kWarnDimension = 20;

/// An index set A over predictors {1..p}. Bit i-1 of `mask` is set iff i is in A.
struct SubsetId {
  std::uint32_t mask = 0;
  int p = 0;

  static SubsetId empty(int p) { return {0u, p}; }
  static SubsetId full(int p) { return {full_mask(p), p}; }
  /// Build from 1-based indices. Throws InvalidIndex when an index is outside 1..p.
  static SubsetId from_indices(const std::vector<int>& indices, int p);

  static constexpr std::uint32_t full_mask(int p) {
    return p >= 32 ? ~0u : ((1u << p) - 1u);
  }

  bool contains(int index) const { return (mask >> (index - 1)) & 1u; }
  int size() const { return std::popcount(mask); }
  bool is_empty() const { return mask == 0; }
  bool is_full() const { return mask == full_mask(p); }
  SubsetId complement() const { return {~mask & full_mask(p), p}; }
  bool is_subset_of(SubsetId other) const { return (mask & ~other.mask) == 0; }

  SubsetId with(int index) const { return {mask | (1u << (index - 1)), p}; }
  SubsetId without(int index) const { return {mask & ~(1u << (index - 1)), p}; }

  /// 1-based indices in ascending order.
  std::vector<int> indices() const;
  /// 0-based column positions in ascending order.
  std::vector<int> positions() const;

  /// "{1,3}" style; "{}" for the empty set.
  std::string to_string() const;
  /// "0x5" style.
  std::string to_hex() const;

  friend bool operator==(SubsetId a, SubsetId b) { return a.mask == b.mask && a.p == b.p; }
  friend auto operator<=>(SubsetId a, SubsetId b) { return a.mask <=> b.mask; }
};

/// Throws DimensionTooLarge unless 1 <= p <= kMaxDimension.
void check_dimension(int p);

/// All 2^p subsets in ascending mask order, produced lazily.
inline auto enumerate_subsets(int p) {
  check_dimension(p);
  const std::uint64_t count = std::uint64_t{1} << p;
  return std::views::iota(std::uint64_t{0}, count) |
         std::views::transform([p](std::uint64_t m) { return SubsetId{static_cast<std::uint32_t>(m), p}; });
}

/// Parse "1,3,4" (1-based, comma separated, whitespace tolerated); "" is the empty set.
SubsetId parse_indices(const std::string& text, int p);

}  // namespace adjustkit
