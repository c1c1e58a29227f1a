// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "dagsobol/basis.hpp"
#include "dagsobol/errors.hpp"
#include "dagsobol/process.hpp"
#include "dagsobol/random.hpp"
#include "dagsobol/sobol.hpp"

using namespace dagsobol;

namespace {

CoefficientVector coef_of(std::initializer_list<double> vals) {
  CoefficientVector c;
  c.values = Eigen::VectorXd(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double v : vals) c.values[i++] = v;
  c.rebuild_support();
  return c;
}

OrthonormalBasis two_var_basis(int p) {
  return tensor_basis({"x1", "x2"},
                      {Distribution::normal(0.0, 1.0), Distribution::normal(0.0, 1.0)}, p);
}

}  // namespace

TEST_CASE("moments from coefficients") {
  auto [m1, v1] = moments_from_pce(coef_of({5.0, 0.0, 0.0}));
  CHECK(m1 == 5.0);
  CHECK(v1 == 0.0);
  auto [m2, v2] = moments_from_pce(coef_of({0.0, 3.0, 4.0}));
  CHECK(m2 == 0.0);
  CHECK(v2 == 25.0);
}

TEST_CASE("indices of a single-input expansion") {
  auto basis = tensor_basis({"x1"}, {Distribution::normal(0.0, 1.0)}, 2);
  auto rep = sobol_from_pce(coef_of({0.4, 1.2, 0.0}), basis, {"x1"});
  CHECK(rep.at("x1").first_order == doctest::Approx(1.0));
  CHECK(rep.at("x1").total == doctest::Approx(1.0));
}

TEST_CASE("index arithmetic on a two-variable expansion") {
  // basis order at p=2: 1, x1, x2, He2(x1), x1x2, He2(x2)
  auto basis = two_var_basis(2);
  const double a = 0.7, b = -1.1, c = 0.4;
  auto rep = sobol_from_pce(coef_of({9.0, a, b, 0.0, c, 0.0}), basis, {"x1", "x2"});
  double denom = a * a + b * b + c * c;
  CHECK(rep.at("x1").first_order == doctest::Approx(a * a / denom));
  CHECK(rep.at("x1").total == doctest::Approx((a * a + c * c) / denom));
  CHECK(rep.at("x2").first_order == doctest::Approx(b * b / denom));
  CHECK(rep.at("x2").total == doctest::Approx((b * b + c * c) / denom));
  CHECK(rep.output_mean == 9.0);
  CHECK(rep.output_variance == doctest::Approx(denom));
  CHECK(rep.support_size == 3);
}

TEST_CASE("inputs absent from every nonzero term report exactly zero") {
  auto basis = two_var_basis(2);
  auto rep = sobol_from_pce(coef_of({1.0, 2.0, 0.0, 0.0, 0.0, 0.0}), basis,
                            {"x1", "x2", "elsewhere"});
  CHECK(rep.at("x2").first_order == 0.0);
  CHECK(rep.at("x2").total == 0.0);
  CHECK(rep.at("elsewhere").first_order == 0.0);
  CHECK(rep.at("elsewhere").total == 0.0);
}

TEST_CASE("a coefficient vector without variance throws") {
  auto basis = two_var_basis(1);
  CHECK_THROWS_AS(sobol_from_pce(coef_of({3.0, 0.0, 0.0}), basis, {"x1", "x2"}),
                  ZeroVarianceError);
}

TEST_CASE("indices are invariant to input order and coefficient scale") {
  auto basis = two_var_basis(2);
  auto c = coef_of({1.0, 0.5, 1.5, 0.2, -0.3, 0.0});
  auto r1 = sobol_from_pce(c, basis, {"x1", "x2"});
  auto r2 = sobol_from_pce(c, basis, {"x2", "x1"});
  CHECK(r1.at("x1").first_order == r2.at("x1").first_order);
  CHECK(r1.at("x2").total == r2.at("x2").total);

  auto scaled = coef_of({-7.0, 0.5 * 3.0, 1.5 * 3.0, 0.2 * 3.0, -0.3 * 3.0, 0.0});
  auto r3 = sobol_from_pce(scaled, basis, {"x1", "x2"});
  CHECK(r3.at("x1").first_order == doctest::Approx(r1.at("x1").first_order).epsilon(1e-14));
  CHECK(r3.at("x2").total == doctest::Approx(r1.at("x2").total).epsilon(1e-14));
}

TEST_CASE("additive expansions have equal first-order and total indices") {
  auto basis = two_var_basis(3);
  // nonzero only on terms involving a single variable
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t t = 1; t < basis.size(); ++t)
    if (basis.term_support(t).size() == 1)
      v[static_cast<Eigen::Index>(t)] = 0.1 * static_cast<double>(t);
  CoefficientVector c;
  c.values = v;
  c.rebuild_support();
  auto rep = sobol_from_pce(c, basis, {"x1", "x2"});
  CHECK(rep.at("x1").first_order == doctest::Approx(rep.at("x1").total));
  CHECK(rep.at("x2").first_order == doctest::Approx(rep.at("x2").total));
}

TEST_CASE("pick-freeze on the additive toy") {
  auto model = [](const std::vector<double>& x) { return x[0] + x[1]; };
  std::vector<Distribution> dists(2, Distribution::normal(0.0, 1.0));
  auto rep = sobol_pick_freeze(model, {"x1", "x2"}, dists, 10000, 12345);
  CHECK(std::abs(rep.at("x1").first_order - 0.5) < 0.03);
  CHECK(std::abs(rep.at("x2").first_order - 0.5) < 0.03);
  CHECK(std::abs(rep.at("x1").total - 0.5) < 0.03);
  CHECK(rep.output_variance == doctest::Approx(2.0).epsilon(0.1));
  CHECK(rep.method == "pick_freeze");
}

TEST_CASE("pick-freeze separates pure interaction from main effects") {
  auto model = [](const std::vector<double>& x) { return x[0] * x[1]; };
  std::vector<Distribution> dists(2, Distribution::normal(0.0, 1.0));
  auto rep = sobol_pick_freeze(model, {"x1", "x2"}, dists, 20000, 99);
  CHECK(std::abs(rep.at("x1").first_order) < 0.05);
  CHECK(std::abs(rep.at("x1").total - 1.0) < 0.07);
}

TEST_CASE("pick-freeze reproduces the welding main effect") {
  auto spec = builtin_welding();
  auto inputs = spec.input_names();
  auto rep = sobol_pick_freeze(
      [&spec](const std::vector<double>& row) { return spec.evaluate_output(row); }, inputs,
      spec.input_distributions(), 10000, 2024);
  CHECK(std::abs(rep.at("h").first_order - 0.278) < 0.005);
}

TEST_CASE("pick-freeze is deterministic and validates inputs") {
  auto model = [](const std::vector<double>& x) { return x[0]; };
  std::vector<Distribution> dists(1, Distribution::normal(0.0, 1.0));
  auto a = sobol_pick_freeze(model, {"x"}, dists, 500, 7);
  auto b = sobol_pick_freeze(model, {"x"}, dists, 500, 7);
  CHECK(a.at("x").first_order == b.at("x").first_order);
  CHECK_THROWS_AS(sobol_pick_freeze(model, {"x"}, dists, 1, 7), UsageError);
  auto constant = [](const std::vector<double>&) { return 2.0; };
  CHECK_THROWS_AS(sobol_pick_freeze(constant, {"x"}, dists, 100, 7), ZeroVarianceError);
  auto broken = [](const std::vector<double>&) {
    return std::numeric_limits<double>::infinity();
  };
  CHECK_THROWS_AS(sobol_pick_freeze(broken, {"x"}, dists, 100, 7), EvaluationFailureError);
}

TEST_CASE("pareto data sorts and accumulates") {
  SUBCASE("welding-like report") {
    SobolReport rep;
    rep.inputs = {"e", "g", "h", "l", "t"};
    rep.index = {{0.146, 0.148}, {0.234, 0.235}, {0.280, 0.281}, {0.108, 0.112}, {0.225, 0.226}};
    auto rows = pareto_data(rep);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].input == "h");
    CHECK(rows[1].input == "g");
    CHECK(rows[2].input == "t");
    CHECK(rows[3].input == "e");
    CHECK(rows[4].input == "l");
    CHECK(rows[4].cumulative_share == doctest::Approx(1.0));
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i - 1].first_order >= rows[i].first_order);
      CHECK(rows[i - 1].cumulative_share <= rows[i].cumulative_share);
    }
  }
  SUBCASE("single input") {
    SobolReport rep;
    rep.inputs = {"only"};
    rep.index = {{0.4, 0.4}};
    auto rows = pareto_data(rep);
    CHECK(rows[0].cumulative_share == doctest::Approx(1.0));
  }
  SUBCASE("one dominant input among zeros") {
    SobolReport rep;
    rep.inputs = {"a", "b", "c"};
    rep.index = {{0.0, 0.0}, {0.9, 0.9}, {0.0, 0.0}};
    auto rows = pareto_data(rep);
    CHECK(rows[0].input == "b");
    CHECK(rows[0].cumulative_share == doctest::Approx(1.0));
  }
}
