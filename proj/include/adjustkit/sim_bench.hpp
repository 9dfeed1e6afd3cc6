#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "adjustkit/collection.hpp"
#include "adjustkit/criterion.hpp"
#include "adjustkit/dag.hpp"
#include "adjustkit/dataset.hpp"
#include "adjustkit/selection.hpp"

namespace adjustkit {

inline constexpr int kModelCount = 5;

struct ModelSpec {
  int id = 1;
  Eigen::Index n = 400;
  int p = 10;
  std::uint64_t seed = 1;
};

/// Per-arm ground truth of a simulation model.
struct GroundTruth {
  int model = 0;
  int p = 0;
  std::array<AdjustmentCollection, 2> collections;
  std::array<SubsetId, 2> colliders;
  /// "dag" for models with a structural graph, "analytic" otherwise.
  std::string source;
};

/// Structural graph of Models 1-3; empty for 4-5.
std::optional<Dag> model_dag(int id, int p = 10);

/// Truth computed once per (model, p). Throws UnknownModel.
const GroundTruth& ground_truth(int id, int p = 10);

/// Estimator pairing used for the model: SAVE for the treatment matrix in
/// Models 4-5, SIR elsewhere.
EstimatorOptions model_estimators(int id);

/// Counter-based seed for (seed, model, n, rep).
std::uint64_t substream_seed(std::uint64_t seed, int model, Eigen::Index n, std::uint64_t rep);

/// One draw of the model: T, then X | T, then derived coordinates, then both
/// potential outcomes; Model 3 draws X before T.
Dataset generate_model(const ModelSpec& spec);

struct MetricsRecord {
  double rho = 0;
  double omega = 0;
  double pi = 0;
  double true_colliders = 0;
  double false_colliders = 0;
};

MetricsRecord compute_metrics(const AdjustmentCollection& estimated, const AdjustmentCollection& truth,
                              SubsetId truth_colliders, int max_block = 3);

struct BenchmarkConfig {
  std::vector<int> models{1};
  std::vector<Eigen::Index> ns{400};
  std::vector<Variant> variants{Variant::Normal};
  int reps = 10;
  std::uint64_t seed = 1;
  int p = 10;
  unsigned threads = 0;
  int max_block = 3;
  int slices = 5;
  SelectorConfig selector;
};

struct CellResult {
  int model = 0;
  Variant variant = Variant::Normal;
  Eigen::Index n = 0;
  int arm = 0;
  /// Means over successful reps, times 100.
  MetricsRecord mean;
  int reps = 0;
  int failed = 0;
  /// False when the truth has no colliders, so the true-collider count is undefined.
  bool colliders_defined = true;
};

struct BenchmarkResult {
  BenchmarkConfig config;
  std::vector<CellResult> cells;

  /// model,variant,n,metric,arm,value
  std::string to_csv() const;
  std::string render() const;
};

BenchmarkResult run_benchmark(const BenchmarkConfig& config);

}  // namespace adjustkit
