// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "dagsobol/dag.hpp"
#include "dagsobol/errors.hpp"
#include "dagsobol/process.hpp"
#include "dagsobol/random.hpp"
#include "test_util.hpp"

using namespace dagsobol;

namespace {

const ProcessDag& fig_dag() {
  static ProcessDag dag = testutil::fig_network().dag();
  return dag;
}

std::vector<std::string> names_of(const ProcessDag& d, const NodeSet& s) {
  return d.to_names(s);
}

}  // namespace

TEST_CASE("build_dag validates structure") {
  const auto& dag = fig_dag();
  CHECK(dag.size() == 13);
  CHECK(names_of(dag, sources(dag)) ==
        std::vector<std::string>{"v1", "v3", "v4", "v5", "v6"});
  CHECK(names_of(dag, sinks(dag)) == std::vector<std::string>{"v13"});

  CHECK_THROWS_AS(ProcessDag({"a"}, {{"a", "a"}}), CycleError);
  CHECK_THROWS_AS(ProcessDag({"a", "b"}, {{"a", "b"}, {"b", "a"}}), CycleError);
  CHECK_THROWS_AS(ProcessDag({"a", "a"}, {}), DuplicateNodeError);
  CHECK_THROWS_AS(ProcessDag({"a"}, {{"a", "b"}}), UnknownEndpointError);

  ProcessDag edgeless({"a", "b"}, {});
  CHECK(names_of(edgeless, sources(edgeless)) == std::vector<std::string>{"a", "b"});
  CHECK(names_of(edgeless, sinks(edgeless)) == std::vector<std::string>{"a", "b"});

  ProcessDag single({"only"}, {});
  CHECK(names_of(single, sources(single)) == std::vector<std::string>{"only"});
}

TEST_CASE("cycle error names a node on the cycle") {
  try {
    ProcessDag({"x", "y", "z"}, {{"x", "y"}, {"y", "z"}, {"z", "y"}});
    FAIL("expected CycleError");
  } catch (const CycleError& e) {
    std::string msg = e.what();
    CHECK((msg.find("'y'") != std::string::npos || msg.find("'z'") != std::string::npos));
  }
}

TEST_CASE("influencing_inputs follows paths to the output") {
  const auto& dag = fig_dag();
  CHECK(names_of(dag, influencing_inputs(dag, dag.index_of("v13"))) ==
        std::vector<std::string>{"v1", "v3", "v4", "v5", "v6"});
  // a source has no path to itself
  CHECK(influencing_inputs(dag, dag.index_of("v1")).size() == 0);

  ProcessDag iso({"a", "y", "b"}, {{"a", "y"}});
  CHECK(names_of(iso, influencing_inputs(iso, iso.index_of("y"))) ==
        std::vector<std::string>{"a"});
}

TEST_CASE("predecessor operator") {
  const auto& dag = fig_dag();
  NodeSet s = dag.to_set({"v13"});
  CHECK(names_of(dag, predecessor_operator(dag, s)) ==
        std::vector<std::string>{"v11", "v12"});
  CHECK(names_of(dag, predecessor_operator(dag, dag.to_set({"v7", "v8", "v9", "v10"}))) ==
        std::vector<std::string>{"v1", "v2", "v3", "v4", "v5", "v6"});
  // sources are a fixed point
  NodeSet src = sources(dag);
  CHECK(predecessor_operator(dag, src) == src);
}

TEST_CASE("iteration depth") {
  const auto& dag = fig_dag();
  CHECK(iteration_depth(dag, dag.index_of("v13")) == 4);
  CHECK(predecessor_power(dag, dag.index_of("v13"), 4) ==
        predecessor_power(dag, dag.index_of("v13"), 5));

  auto welding = builtin_welding();
  CHECK(iteration_depth(welding.dag(), welding.dag().index_of("E")) == 2);

  ProcessDag chain({"a", "b", "y"}, {{"a", "b"}, {"b", "y"}});
  CHECK(iteration_depth(chain, chain.index_of("y")) == 2);
  CHECK_THROWS_AS(iteration_depth(chain, chain.index_of("a")), OutputIsSourceError);
}

TEST_CASE("independent decomposition groups by shared ancestors") {
  const auto& dag = fig_dag();
  auto dec = independent_decomposition(dag, dag.to_set({"v7", "v8", "v9", "v10"}));
  REQUIRE(dec.groups.size() == 3);
  CHECK(names_of(dag, dec.groups[0]) == std::vector<std::string>{"v7", "v8"});
  CHECK(names_of(dag, dec.groups[1]) == std::vector<std::string>{"v9"});
  CHECK(names_of(dag, dec.groups[2]) == std::vector<std::string>{"v10"});

  // level-1 decomposition has two elements
  auto dec1 = independent_decomposition(dag, dag.to_set({"v11", "v12"}));
  CHECK(dec1.groups.size() == 2);

  // sources decompose into singletons
  auto dsrc = independent_decomposition(dag, sources(dag));
  CHECK(dsrc.groups.size() == 5);
  for (const auto& g : dsrc.groups) CHECK(g.size() == 1);

  auto im = builtin_injection_molding();
  auto dim = independent_decomposition(
      im.dag(), im.dag().to_set({"Emelt", "Ecool", "Einj"}));
  REQUIRE(dim.groups.size() == 2);
  CHECK(names_of(im.dag(), dim.groups[0]) == std::vector<std::string>{"Emelt", "Ecool"});
  CHECK(names_of(im.dag(), dim.groups[1]) == std::vector<std::string>{"Einj"});
}

TEST_CASE("predecessor operator contracts to sources within |V| steps") {
  const auto& dag = fig_dag();
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    NodeSet s;
    for (std::size_t v = 0; v < dag.size(); ++v)
      if (rng.uniform01() < 0.4) s.members.push_back(v);
    if (s.members.empty()) continue;
    NodeSet fixed = s;
    for (std::size_t i = 0; i < dag.size(); ++i) fixed = predecessor_operator(dag, fixed);
    CHECK(predecessor_operator(dag, fixed) == fixed);
    // fixed point = sources that are ancestors of s
    NodeSet expect;
    for (std::size_t v = 0; v < dag.size(); ++v) {
      if (!dag.is_source(v)) continue;
      bool anc = false;
      for (std::size_t w : s.members) anc = anc || dag.is_ancestor(v, w);
      if (anc) expect.members.push_back(v);
    }
    CHECK(fixed == expect);
  }
}

TEST_CASE("every edge endpoint appears in the predecessors of its target") {
  const auto& dag = fig_dag();
  for (std::size_t v = 0; v < dag.size(); ++v) {
    NodeSet s;
    s.members = {v};
    NodeSet pred = predecessor_operator(dag, s);
    for (std::size_t u : dag.parents(v)) CHECK(pred.contains(u));
  }
}

TEST_CASE("decomposition partitions the set with ancestor-disjoint groups") {
  const auto& dag = fig_dag();
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    NodeSet s;
    for (std::size_t v = 0; v < dag.size(); ++v)
      if (rng.uniform01() < 0.5) s.members.push_back(v);
    if (s.members.empty()) continue;
    auto dec = independent_decomposition(dag, s);
    std::vector<std::size_t> all;
    for (const auto& g : dec.groups)
      all.insert(all.end(), g.members.begin(), g.members.end());
    std::sort(all.begin(), all.end());
    CHECK(all == s.members);
    for (std::size_t i = 0; i < dec.groups.size(); ++i) {
      for (std::size_t j = i + 1; j < dec.groups.size(); ++j) {
        for (std::size_t a : dec.groups[i].members) {
          for (std::size_t b : dec.groups[j].members) {
            bool shared = false;
            for (std::size_t u = 0; u < dag.size(); ++u)
              shared = shared || (dag.is_ancestor(u, a) && dag.is_ancestor(u, b));
            CHECK_FALSE(shared);
          }
        }
      }
    }
  }
}

TEST_CASE("topological order respects edges") {
  const auto& dag = fig_dag();
  const auto& topo = dag.topological_order();
  std::vector<std::size_t> pos(dag.size());
  for (std::size_t i = 0; i < topo.size(); ++i) pos[topo[i]] = i;
  for (std::size_t v = 0; v < dag.size(); ++v)
    for (std::size_t c : dag.children(v)) CHECK(pos[v] < pos[c]);
}

TEST_CASE("unknown node lookups throw") {
  const auto& dag = fig_dag();
  CHECK_THROWS_AS(dag.index_of("nope"), UnknownNodeError);
  CHECK_THROWS_AS(influencing_inputs(dag, 99), UnknownNodeError);
}
