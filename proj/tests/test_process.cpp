// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "dagsobol/basis.hpp"
#include "dagsobol/errors.hpp"
#include "dagsobol/expression.hpp"
#include "dagsobol/process.hpp"
#include "dagsobol/random.hpp"
#include "dagsobol/regression.hpp"
#include "dagsobol/sobol.hpp"

using namespace dagsobol;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("expression grammar") {
  auto e = Expression::parse("L*(0.75*l*h + g*t + 0.5*(l - g)*(t - e))");
  CHECK(e.free_variables() ==
        std::set<std::string>{"L", "e", "g", "h", "l", "t"});
  auto val = e.evaluate_scalar([](const std::string& n) -> double {
    if (n == "L") return 500.0;
    if (n == "l") return 8.5;
    if (n == "h") return 2.6;
    if (n == "g") return 2.0;
    if (n == "t") return 15.0;
    if (n == "e") return 11.0;
    return 0.0;
  });
  CHECK(val == doctest::Approx(29787.5));

  CHECK(Expression::parse("2^3^2").evaluate_scalar([](const std::string&) { return 0.0; }) ==
        doctest::Approx(512.0));  // right associative
  CHECK(Expression::parse("-x^2").evaluate_scalar([](const std::string&) { return 3.0; }) ==
        doctest::Approx(-9.0));
  CHECK_THROWS_AS(Expression::parse("a + * b"), DataError);
  CHECK_THROWS_AS(Expression::parse("(a"), DataError);
}

TEST_CASE("builtin welding process") {
  auto spec = builtin_welding();
  const auto& dag = spec.dag();
  CHECK(dag.size() == 13);
  CHECK(dag.to_names(sinks(dag)) == std::vector<std::string>{"E"});
  CHECK(sources(dag).size() == 11);
  CHECK(spec.output_node() == dag.index_of("E"));

  // at the input means: V = 29787.5 and E follows the energy balance
  std::map<std::string, double> means;
  for (const auto& n : spec.input_names()) means[n] = spec.dist_of(n).mean();
  auto resolve = [&](const std::string& n) { return means.at(n); };
  double v = spec.node_functions().at("V").evaluate_scalar(resolve);
  CHECK(v == doctest::Approx(29787.5));
  means["V"] = v;
  double e = spec.node_functions().at("E").evaluate_scalar(resolve);
  CHECK(e == doctest::Approx(8238.0 * v * (500.0 * 1325.0 + 2270.0)));
}

TEST_CASE("builtin injection molding process") {
  auto spec = builtin_injection_molding();
  const auto& dag = spec.dag();
  CHECK(sources(dag).size() == 7);
  CHECK(dag.to_names(sinks(dag)) == std::vector<std::string>{"Ereset"});
  for (const auto& mid : {"Emelt", "Ecool", "Einj"}) {
    std::size_t v = dag.index_of(mid);
    CHECK_FALSE(dag.is_source(v));
    CHECK_FALSE(dag.is_sink(v));
  }

  auto data = simulate(spec, 200, 3);
  const auto& er = data.column("Ereset");
  const auto& em = data.column("Emelt");
  const auto& ec = data.column("Ecool");
  const auto& ei = data.column("Einj");
  for (std::size_t r = 0; r < data.rows(); ++r)
    CHECK(er[r] == doctest::Approx(0.25 * (em[r] + ec[r] + ei[r])).epsilon(1e-14));
}

TEST_CASE("simulate is deterministic and finite") {
  auto spec = builtin_welding();
  auto a = simulate(spec, 50, 123);
  auto b = simulate(spec, 50, 123);
  REQUIRE(a.rows() == 50);
  REQUIRE(a.cols() == 13);
  for (const auto& name : a.column_names()) {
    const auto& ca = a.column(name);
    const auto& cb = b.column(name);
    for (std::size_t r = 0; r < 50; ++r) {
      CHECK(ca[r] == cb[r]);  // bit-identical
      CHECK(std::isfinite(ca[r]));
    }
  }
  auto one = simulate(spec, 1, 5);
  CHECK(one.rows() == 1);
  CHECK_THROWS_AS(simulate(spec, 0, 1), UsageError);
}

TEST_CASE("simulated marginals match their specification") {
  auto spec = builtin_welding();
  const std::size_t m = 20000;
  auto data = simulate(spec, m, 8);
  for (const auto& n : spec.input_names()) {
    const auto& col = data.column(n);
    double mean = 0.0;
    for (double x : col) mean += x;
    mean /= static_cast<double>(m);
    const auto& dist = spec.dist_of(n);
    double tol = 4.0 * dist.stddev() / std::sqrt(static_cast<double>(m));
    CHECK(std::abs(mean - dist.mean()) < tol);
    double var = 0.0;
    for (double x : col) var += (x - mean) * (x - mean);
    var /= static_cast<double>(m - 1);
    CHECK(std::sqrt(var) == doctest::Approx(dist.stddev()).epsilon(0.05));
  }
}

TEST_CASE("stored intermediate columns equal re-evaluation from the sources") {
  auto spec = builtin_injection_molding();
  auto data = simulate(spec, 300, 61);
  const auto& dag = spec.dag();
  std::map<std::string, Eigen::ArrayXd> cols;
  for (const auto& n : spec.input_names()) {
    const auto& c = data.column(n);
    cols[n] = Eigen::Map<const Eigen::ArrayXd>(c.data(), static_cast<Eigen::Index>(c.size()));
  }
  auto resolve = [&](const std::string& n) -> Eigen::ArrayXd {
    auto cit = spec.constants().find(n);
    if (cit != spec.constants().end())
      return Eigen::ArrayXd::Constant(static_cast<Eigen::Index>(data.rows()), cit->second);
    return cols.at(n);
  };
  for (std::size_t v : dag.topological_order()) {
    if (dag.is_source(v)) continue;
    const std::string& n = dag.name(v);
    Eigen::ArrayXd again = spec.node_functions().at(n).evaluate(data.rows(), resolve);
    const auto& stored = data.column(n);
    for (std::size_t r = 0; r < data.rows(); ++r)
      CHECK(again[static_cast<Eigen::Index>(r)] == stored[r]);  // exact reproduction
    cols[n] = std::move(again);
  }
}

TEST_CASE("csv round trip is bit exact") {
  auto spec = builtin_welding();
  auto data = simulate(spec, 64, 31);
  std::string path = temp_path("dagsobol_roundtrip.csv");
  data.write_csv(path);
  auto back = Dataset::read_csv(path);
  REQUIRE(back.rows() == data.rows());
  REQUIRE(back.column_names() == data.column_names());
  for (const auto& n : data.column_names())
    for (std::size_t r = 0; r < data.rows(); ++r)
      CHECK(back.column(n)[r] == data.column(n)[r]);
  std::remove(path.c_str());
}

TEST_CASE("process spec JSON round trip") {
  auto spec = builtin_injection_molding();
  auto text = spec.to_json();
  auto back = ProcessSpec::from_json(text);
  CHECK(back.name() == spec.name());
  CHECK(back.dag().node_names() == spec.dag().node_names());
  CHECK(back.constants() == spec.constants());
  auto a = simulate(spec, 20, 4);
  auto b = simulate(back, 20, 4);
  for (const auto& n : a.column_names())
    for (std::size_t r = 0; r < 20; ++r) CHECK(a.column(n)[r] == b.column(n)[r]);
}

TEST_CASE("shipped spec files match the builtins") {
  for (const auto& [file, make] :
       {std::pair<std::string, ProcessSpec (*)()>{"welding.spec.json", &builtin_welding},
        {"injection_molding.spec.json", &builtin_injection_molding}}) {
    auto path = std::filesystem::path(DAGSOBOL_SOURCE_DIR) / "data" / file;
    auto loaded = ProcessSpec::load(path.string());
    CHECK(loaded.to_json() == make().to_json());
  }
}

TEST_CASE("non-finite node evaluation names the node") {
  ProcessSpec bad("bad",
                  ProcessDag({"a", "y"}, {{"a", "y"}}),
                  {{"a", Distribution::normal(0.0, 1.0)}},
                  {{"y", "1/(a - a)"}});
  try {
    simulate(bad, 5, 1);
    FAIL("expected EvaluationFailureError");
  } catch (const EvaluationFailureError& e) {
    CHECK(std::string(e.what()).find("'y'") != std::string::npos);
  }
}

TEST_CASE("spec validation rejects inconsistent processes") {
  // function referencing a non-predecessor
  CHECK_THROWS_AS(ProcessSpec("p", ProcessDag({"a", "b", "y"}, {{"a", "y"}}),
                              {{"a", Distribution::normal(0, 1)},
                               {"b", Distribution::normal(0, 1)}},
                              {{"y", "a + b"}}),
                  DataError);
  // missing distribution
  CHECK_THROWS_AS(
      ProcessSpec("p", ProcessDag({"a", "y"}, {{"a", "y"}}), {}, {{"y", "a"}}),
      DataError);
  // missing function
  CHECK_THROWS_AS(ProcessSpec("p", ProcessDag({"a", "y"}, {{"a", "y"}}),
                              {{"a", Distribution::normal(0, 1)}}, {}),
                  DataError);
}

TEST_CASE("a p=3 expansion reproduces the welding output to numerical precision") {
  auto spec = builtin_welding();
  auto data = simulate(spec, 500, 55);
  auto basis = tensor_basis(spec.input_names(), spec.input_distributions(), 3);
  Eigen::MatrixXd design = basis.evaluate(data);
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(data.column("E").data(), 500);
  auto c = dense_fit(design, y, {});
  CHECK(c.relative_residual < 1e-8);
}

TEST_CASE("tiny injection molding main effects are effectively nil") {
  auto spec = builtin_injection_molding();
  auto rep = sobol_pick_freeze(
      [&spec](const std::vector<double>& row) { return spec.evaluate_output(row); },
      spec.input_names(), spec.input_distributions(), 100000, 17);
  CHECK(std::abs(rep.at("Pinj").first_order) < 1e-9);
  CHECK(std::abs(rep.at("eps").first_order) < 1e-6);
  CHECK(rep.at("Tinj").first_order == doctest::Approx(0.478).epsilon(0.05));
}
