#include "adjustkit/collection.hpp"

#include "adjustkit/error.hpp"

namespace adjustkit {

AdjustmentCollection::AdjustmentCollection(int p, Source source) : p_(p), source_(source) {
  check_dimension(p);
  member_.assign(std::size_t{1} << p, 0);
}

AdjustmentCollection::AdjustmentCollection(int p, std::span<const std::uint32_t> masks, Source source)
    : AdjustmentCollection(p, source) {
  for (auto m : masks) insert(m);
}

AdjustmentCollection AdjustmentCollection::universe(int p, Source source) {
  AdjustmentCollection c(p, source);
  std::fill(c.member_.begin(), c.member_.end(), std::uint8_t{1});
  c.count_ = c.member_.size();
  return c;
}

void AdjustmentCollection::insert(std::uint32_t mask) {
  if (mask >= member_.size()) throw Error(ErrorKind::InvalidIndex, "subset outside 1..p");
  if (!member_[mask]) {
    member_[mask] = 1;
    ++count_;
  }
}

std::vector<std::uint32_t> AdjustmentCollection::masks() const {
  std::vector<std::uint32_t> out;
  out.reserve(count_);
  for (std::size_t m = 0; m < member_.size(); ++m)
    if (member_[m]) out.push_back(static_cast<std::uint32_t>(m));
  return out;
}

std::vector<SubsetId> AdjustmentCollection::members() const {
  std::vector<SubsetId> out;
  out.reserve(count_);
  for (auto m : masks()) out.push_back({m, p_});
  return out;
}

AdjustmentCollection supersets_of(SubsetId base, Source source) {
  AdjustmentCollection c(base.p, source);
  const auto rest = base.complement().mask;
  // Walk every submask of the complement.
  for (std::uint32_t s = rest;; s = (s - 1) & rest) {
    c.insert(base.mask | s);
    if (s == 0) break;
  }
  return c;
}

}  // namespace adjustkit
