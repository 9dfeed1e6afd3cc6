#include "doctest.h"

#include <cmath>
#include <limits>

#include "adjustkit/error.hpp"
#include "adjustkit/selection.hpp"

using namespace adjustkit;
using doctest::Approx;

namespace {

CriterionTable table_of(std::vector<double> values, int p, Eigen::Index n = 100) {
  CriterionTable t;
  for (std::uint32_t m = 0; m < values.size(); ++m) t.masks.push_back(m);
  t.values = std::move(values);
  t.meta.p = p;
  t.meta.n = n;
  return t;
}

}  // namespace

TEST_CASE("sort order") {
  // {}:3, {1}:1, {2}:2
  const std::vector<std::uint32_t> masks{0, 1, 2};
  const std::vector<double> values{3, 1, 2};
  CHECK(sort_values(masks, values) == std::vector<std::size_t>{0, 2, 1});

  const std::vector<std::uint32_t> m4{0, 1, 2, 3, 4, 5, 6, 7};
  const std::vector<double> same(8, 1.0);
  std::vector<std::uint32_t> got;
  for (auto k : sort_values(m4, same)) got.push_back(m4[k]);
  CHECK(got == std::vector<std::uint32_t>{0, 1, 2, 4, 3, 5, 6, 7});
}

TEST_CASE("ridge ratios on the reference vector") {
  const std::vector<double> v{1.0, 0.9, 0.001, 0.0005};
  const auto r = ridge_ratios(v, 0.6, 0.01);
  REQUIRE(r.size() == 4);
  CHECK(r[0] == Approx(0.6));
  CHECK(std::abs(r[1] - 0.9010) < 1e-3);
  CHECK(std::abs(r[2] - 0.0121) < 1e-3);
  CHECK(std::abs(r[3] - 0.9545) < 1e-3);
  CHECK(argmin_ratio(r) == 2);
}

TEST_CASE("zero and constant tables") {
  const auto zero = ridge_ratios(std::vector<double>(6, 0.0), 0.6, 0.01);
  CHECK(zero[0] == 0.6);
  for (std::size_t k = 1; k < zero.size(); ++k) CHECK(zero[k] == 1.0);
  CHECK(argmin_ratio(zero) == 0);

  const auto flat = ridge_ratios(std::vector<double>(6, 50.0), 0.6, 0.01);
  for (std::size_t k = 1; k < flat.size(); ++k) CHECK(flat[k] == Approx(1.0));

  SelectorConfig cfg;
  cfg.cn = 0.01;
  const auto res = select_tail(table_of(std::vector<double>(8, 0.0), 3), cfg);
  CHECK(res.tau == 0);
  CHECK(res.selected.size() == 8);
}

TEST_CASE("two-level table cuts at the boundary") {
  std::vector<double> v(256, 0.0);
  // masks below 128 are the signal half
  for (std::size_t m = 0; m < 128; ++m) v[m] = 1.0;
  SelectorConfig cfg;
  cfg.cn = 0.01;
  const auto res = select_tail(table_of(v, 8), cfg);
  CHECK(res.tau == 128);
  CHECK(res.selected.size() == 128);
  CHECK(res.selected.front() == 128u);
  CHECK(res.ratios[0] == 0.6);
}

TEST_CASE("selection is scale free") {
  std::vector<double> v{5.0, 4.0, 3.5, 0.02, 0.01, 0.004, 0.002, 0.0};
  SelectorConfig a;
  a.cn = 0.05;
  SelectorConfig b;
  b.cn = 0.05 * 7.5;
  std::vector<double> w = v;
  for (double& x : w) x *= 7.5;
  const auto ra = select_tail(table_of(v, 3), a);
  const auto rb = select_tail(table_of(w, 3), b);
  CHECK(ra.tau == rb.tau);
  CHECK(ra.selected == rb.selected);
}

TEST_CASE("infinite values") {
  const double inf = std::numeric_limits<double>::infinity();
  const auto r = ridge_ratios(std::vector<double>{inf, inf, 1.0, 0.0}, 0.6, 0.1);
  CHECK(r[1] == 1.0);
  CHECK(r[2] == 1.0);
  CHECK(r[3] == Approx(0.1 / 1.1));
}

TEST_CASE("config checks and defaults") {
  SelectorConfig bad;
  bad.c0 = 1.2;
  CHECK_THROWS_AS(bad.validate(), Error);
  SelectorConfig neg;
  neg.cn = -1;
  CHECK_THROWS_AS(neg.validate(), Error);
  CHECK(default_cn(800) == Approx(0.2 * std::log(800.0) / std::sqrt(800.0)));
  CHECK(SelectorConfig{}.resolve_cn(400) == Approx(default_cn(400)));
}
