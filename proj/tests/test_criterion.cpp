#include "doctest.h"

#include <cmath>
#include <random>

#include "adjustkit/criterion.hpp"
#include "adjustkit/dag.hpp"
#include "adjustkit/error.hpp"
#include "adjustkit/sim_bench.hpp"
#include "helpers.hpp"

using namespace adjustkit;
using doctest::Approx;
using testing::S;

namespace {

CandidateMatrix cand(Eigen::MatrixXd m) { return {std::move(m), Method::SIR, Target::OutcomeInArm, 1}; }

Eigen::MatrixXd e(int i, int p) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(p, 1);
  v(i - 1, 0) = 1;
  return v;
}

Eigen::Matrix2d rho_half() {
  Eigen::Matrix2d s;
  s << 1, .5, .5, 1;
  return s;
}

}  // namespace

TEST_CASE("schur complement") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
  CHECK(schur_complement(id, S({1, 3}, 4)).isApprox(Eigen::MatrixXd::Identity(2, 2)));

  Eigen::Matrix2d s;
  const double r = 0.3;
  s << 1, r, r, 1;
  CHECK(schur_complement(s, S({1}, 2))(0, 0) == Approx(1 - r * r));
  CHECK(schur_complement(s, SubsetId::empty(2)) == Eigen::MatrixXd(s));
  CHECK(schur_complement(s, SubsetId::full(2)).size() == 0);

  Eigen::Matrix3d sing;
  sing << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  try {
    schur_complement(sing, S({1, 2}, 3));
    FAIL("expected SingularBlock");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::SingularBlock);
  }
}

TEST_CASE("f on hand examples") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  for (auto a : enumerate_subsets(2)) {
    CHECK(f_value(cand(Eigen::MatrixXd::Zero(2, 1)), cand(e(1, 2)), id, id, a) == 0.0);
    CHECK(f_value(cand(e(1, 2)), cand(e(2, 2)), id, id, a) == Approx(0.0));
  }
  const Eigen::MatrixXd s = rho_half();
  CHECK(f_value(cand(e(1, 2)), cand(e(1, 2)), s, s, SubsetId::empty(2)) == Approx(2.0));
  CHECK(f_value(cand(e(1, 2)), cand(e(1, 2)), s, s, S({2}, 2)) == Approx(1.5));
  CHECK(f_value(cand(e(1, 2)), cand(e(1, 2)), s, s, S({1}, 2)) == 0.0);
  CHECK(f_value(cand(e(1, 2)), cand(e(1, 2)), s, s, SubsetId::full(2)) == 0.0);
}

TEST_CASE("population f on hand examples") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
  for (auto a : enumerate_subsets(3)) CHECK(population_f(id, id, e(1, 3), e(2, 3), a) == Approx(0.0));
  const Eigen::MatrixXd s = rho_half();
  CHECK(population_f(s, s, e(1, 2), e(2, 2), SubsetId::empty(2)) == Approx(1.0));
  CHECK(population_f(s, s, e(1, 2), e(2, 2), S({1}, 2)) == Approx(0.0));
  CHECK(population_f(s, s, e(1, 2), e(2, 2), S({2}, 2)) == Approx(0.0));
}

TEST_CASE("fast evaluator agrees with the direct route") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  const int p = 6;
  Eigen::MatrixXd a(p, p), b(p, p), my(p, 3), mt(p, 2);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a.data()[i] = z(rng);
    b.data()[i] = z(rng);
  }
  for (Eigen::Index i = 0; i < my.size(); ++i) my.data()[i] = z(rng);
  for (Eigen::Index i = 0; i < mt.size(); ++i) mt.data()[i] = z(rng);
  const Eigen::MatrixXd s0 = a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(p, p);
  const Eigen::MatrixXd s1 = b * b.transpose() + 0.1 * Eigen::MatrixXd::Identity(p, p);
  const CriterionEvaluator eval(my, mt, {s0, s1});
  for (auto s : enumerate_subsets(p)) {
    const double direct = dual_norm(my, mt, {s0, s1}, s);
    CHECK(eval(s) == Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("singular blocks score infinity") {
  Eigen::Matrix3d sing;
  sing << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  const CriterionEvaluator eval(Eigen::MatrixXd::Ones(3, 1), Eigen::MatrixXd::Ones(3, 1), {sing, sing});
  CHECK(std::isinf(eval(S({1, 2}, 3))));
  CHECK(std::isfinite(eval(S({1}, 3))));
  CHECK(eval(SubsetId::full(3)) == 0.0);
}

TEST_CASE("criterion table shape") {
  const auto d = generate_model({1, 400, 10, 3});
  CriterionConfig cfg;
  const auto t = criterion_table(d, 0, Variant::Normal, cfg);
  CHECK(t.size() == 1024);
  CHECK(t.values.back() == 0.0);
  CHECK(t.masks.back() == 1023u);
  for (double v : t.values) {
    CHECK(v >= 0.0);
    CHECK(std::isfinite(v));
  }
  CHECK(t.meta.outcome_slices == 5);
  CHECK(t.meta.treatment_slices == 2);

  cfg.threads = 1;
  const auto one = criterion_table(d, 0, Variant::Normal, cfg);
  cfg.threads = 4;
  const auto four = criterion_table(d, 0, Variant::Normal, cfg);
  CHECK(one.values == four.values);

  cfg.universe = {0u, 5u, 1023u};
  const auto sub = criterion_table(d, 0, Variant::Normal, cfg);
  CHECK(sub.size() == 3);
  CHECK(sub.values[1] == one.values[5]);
}

TEST_CASE("population criterion on the fig4a design") {
  const auto g = testing::load_dag("fig4a");
  const auto pop = linear_sem_population(g, {});
  const auto truth = testing::closed_form(4, {{1}}, {{1, 2}, {1, 4}});
  for (auto a : enumerate_subsets(4)) {
    const double f = population_f(pop.sigma0, pop.sigma1, pop.beta_y, pop.beta_t, a);
    if (truth.contains(a)) CHECK(f < 1e-10);
    else CHECK(f > 0.01);
  }
}

TEST_CASE("copula table ignores monotone transforms") {
  const auto d = generate_model({4, 400, 10, 13});
  CriterionConfig cfg;
  cfg.estimators.treatment_method = Method::SAVE;
  const auto a = criterion_table(d, 0, Variant::Copula, cfg);
  const auto b = criterion_table(d.with_predictors(d.x().array().cube().matrix()), 0, Variant::Copula, cfg);
  CHECK(a.values == b.values);
}
