#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "adjustkit/criterion.hpp"
#include "adjustkit/subset.hpp"

namespace adjustkit {

struct SelectorConfig {
  double c0 = 0.6;
  /// Ridge constant; defaults to 0.2 * log(n) / sqrt(n) when unset.
  std::optional<double> cn;

  /// Throws Schema if c0 is outside (0, 1) or cn <= 0.
  void validate() const;
  double resolve_cn(Eigen::Index n) const;
};

double default_cn(Eigen::Index n);

/// Positions into `table` sorted by descending value; ties by smaller
/// cardinality, then ascending mask.
std::vector<std::size_t> sort_table(const CriterionTable& table);

/// Same ordering over raw (mask, value) pairs.
std::vector<std::size_t> sort_values(std::span<const std::uint32_t> masks, std::span<const double> values);

/// R(0) = c0, R(k) = (v[k] + cn) / (v[k-1] + cn) for k >= 1 over values sorted
/// in descending order (v[k-1] is the k-th largest). A ratio touching an
/// infinite value is 1.
std::vector<double> ridge_ratios(std::span<const double> sorted_values, double c0, double cn);

struct SelectionResult {
  std::vector<std::uint32_t> order;  // masks, descending criterion
  std::vector<double> sorted_values;
  std::vector<double> ratios;
  std::size_t tau = 0;
  std::vector<std::uint32_t> selected;  // ascending mask order
  int p = 0;
  int arm = 0;
  double c0 = 0.6;
  double cn = 0.0;
};

/// tau = argmin R (smallest k on ties); selected = order positions after tau
/// (1-based), i.e. order[tau..] 0-based.
std::size_t argmin_ratio(std::span<const double> ratios);

/// Sort, form ratios and cut the tail.
SelectionResult select_tail(const CriterionTable& table, const SelectorConfig& config);

}  // namespace adjustkit
