#include "doctest.h"

#include "adjustkit/error.hpp"
#include "adjustkit/set_analysis.hpp"
#include "adjustkit/sim_bench.hpp"
#include "helpers.hpp"

using namespace adjustkit;
using testing::S;

TEST_CASE("ground-truth cardinalities") {
  const std::size_t want[] = {448, 448, 736, 256, 256};
  for (int id = 1; id <= kModelCount; ++id) {
    const auto& g = ground_truth(id);
    CHECK_MESSAGE(g.collections[0].size() == want[id - 1], id);
    CHECK_MESSAGE(g.collections[1].size() == want[id - 1], id);
  }
  CHECK(ground_truth(1).colliders[0] == S({4}, 10));
  CHECK(ground_truth(4).colliders[0].is_empty());
  CHECK(ground_truth(4).source == "analytic");
  CHECK(ground_truth(2).source == "dag");
}

TEST_CASE("Model 3 scales to p = 20") {
  const auto& g = ground_truth(3, 20);
  CHECK(g.p == 20);
  CHECK(g.collections[0].size() > 0);
  const auto d = generate_model({3, 200, 20, 4});
  CHECK(d.p() == 20);
  CHECK(d.n() == 200);
}

TEST_CASE("generation") {
  for (int id = 1; id <= kModelCount; ++id) {
    const auto a = generate_model({id, 300, 10, 9});
    const auto b = generate_model({id, 300, 10, 9});
    CHECK(a.x() == b.x());
    CHECK(a.y() == b.y());
    CHECK(a.t() == b.t());
    const auto [g0, g1] = split_by_treatment(a);
    CHECK(g0.size() > 50);
    CHECK(g1.size() > 50);
  }
  CHECK_THROWS_AS(generate_model({6, 300, 10, 1}), Error);
  CHECK_THROWS_AS(generate_model({1, 50, 10, 1}), Error);
  CHECK_THROWS_AS(ground_truth(0), Error);
  CHECK(substream_seed(1, 1, 400, 0) != substream_seed(1, 1, 400, 1));
  CHECK(substream_seed(1, 1, 400, 0) != substream_seed(1, 2, 400, 0));
}

TEST_CASE("metrics on trivial estimates") {
  const auto& g = ground_truth(1);
  const auto& truth = g.collections[0];
  const auto exact = compute_metrics(truth, truth, g.colliders[0]);
  CHECK(exact.rho == 1.0);
  CHECK(exact.omega == 1.0);
  CHECK(exact.pi == 1.0);
  CHECK(exact.true_colliders == 1.0);
  CHECK(exact.false_colliders == 0.0);

  const auto all = compute_metrics(AdjustmentCollection::universe(10, Source::Estimated), truth, g.colliders[0]);
  CHECK(all.rho == 1.0);
  CHECK(all.omega == doctest::Approx(448.0 / 1024.0));
  CHECK(all.true_colliders == 0.0);

  // dropping one locally minimal member
  const auto mins = locally_minimal(truth);
  AdjustmentCollection less(10, Source::Estimated);
  for (auto m : truth.masks())
    if (m != mins.front().mask) less.insert(m);
  CHECK(compute_metrics(less, truth, g.colliders[0]).pi == 0.0);
}

TEST_CASE("benchmark is deterministic across thread counts") {
  BenchmarkConfig c;
  c.models = {1, 4};
  c.ns = {200};
  c.variants = {Variant::Normal, Variant::Copula};
  c.reps = 4;
  c.seed = 11;
  c.threads = 1;
  const auto one = run_benchmark(c).to_csv();
  c.threads = 3;
  const auto three = run_benchmark(c).to_csv();
  CHECK(one == three);
  CHECK(one.rfind("model,variant,n,metric,arm,value", 0) == 0);
  c.seed = 12;
  CHECK(run_benchmark(c).to_csv() != one);
}

TEST_CASE("benchmark cells") {
  BenchmarkConfig c;
  c.models = {4};
  c.ns = {200};
  c.reps = 2;
  const auto r = run_benchmark(c);
  CHECK(r.cells.size() == 2);
  for (const auto& cell : r.cells) {
    CHECK(cell.reps + cell.failed == 2);
    CHECK_FALSE(cell.colliders_defined);
  }
  CHECK(r.to_csv().find("true_colliders,0,NA") != std::string::npos);
  CHECK_FALSE(r.render().empty());
}
