#include "adjustkit/selection.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "adjustkit/error.hpp"

namespace adjustkit {

void SelectorConfig::validate() const {
  if (!(c0 > 0.0 && c0 < 1.0)) throw Error(ErrorKind::Schema, "c0 must lie in (0, 1)");
  if (cn && !(*cn > 0.0)) throw Error(ErrorKind::Schema, "cn must be positive");
}

double default_cn(Eigen::Index n) {
  const double nn = static_cast<double>(n);
  return 0.2 * std::log(nn) / std::sqrt(nn);
}

double SelectorConfig::resolve_cn(Eigen::Index n) const { return cn ? *cn : default_cn(n); }

std::vector<std::size_t> sort_values(std::span<const std::uint32_t> masks, std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    const int ca = std::popcount(masks[a]);
    const int cb = std::popcount(masks[b]);
    if (ca != cb) return ca < cb;
    return masks[a] < masks[b];
  });
  return order;
}

std::vector<std::size_t> sort_table(const CriterionTable& table) {
  if (table.size() == 0) throw Error(ErrorKind::Schema, "empty criterion table");
  return sort_values(table.masks, table.values);
}

std::vector<double> ridge_ratios(std::span<const double> sorted_values, double c0, double cn) {
  if (!(cn > 0.0)) throw Error(ErrorKind::Schema, "cn must be positive");
  std::vector<double> r(sorted_values.size());
  if (r.empty()) return r;
  r[0] = c0;
  for (std::size_t k = 1; k < r.size(); ++k) {
    const double num = sorted_values[k];
    const double den = sorted_values[k - 1];
    r[k] = (std::isinf(num) || std::isinf(den)) ? 1.0 : (num + cn) / (den + cn);
  }
  return r;
}

std::size_t argmin_ratio(std::span<const double> ratios) {
  return static_cast<std::size_t>(std::min_element(ratios.begin(), ratios.end()) - ratios.begin());
}

SelectionResult select_tail(const CriterionTable& table, const SelectorConfig& config) {
  config.validate();
  const auto order = sort_table(table);
  SelectionResult res;
  res.p = table.meta.p;
  res.arm = table.arm;
  res.c0 = config.c0;
  res.cn = config.resolve_cn(table.meta.n);
  res.order.reserve(order.size());
  res.sorted_values.reserve(order.size());
  for (std::size_t k : order) {
    res.order.push_back(table.masks[k]);
    res.sorted_values.push_back(table.values[k]);
  }
  res.ratios = ridge_ratios(res.sorted_values, res.c0, res.cn);
  res.tau = argmin_ratio(res.ratios);
  res.selected.assign(res.order.begin() + static_cast<std::ptrdiff_t>(res.tau), res.order.end());
  std::sort(res.selected.begin(), res.selected.end());
  return res;
}

}  // namespace adjustkit
