// SPDX-License-Identifier: Apache-2.0
#include "dagsobol/dag.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "dagsobol/errors.hpp"

namespace dagsobol {

bool NodeSet::contains(std::size_t v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

ProcessDag::ProcessDag(std::vector<std::string> nodes,
                       std::vector<std::pair<std::string, std::string>> edges)
    : names_(std::move(nodes)) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index.emplace(names_[i], i).second)
      throw DuplicateNodeError("duplicate node '" + names_[i] + "'");
  }
  const std::size_t n = names_.size();
  parents_.resize(n);
  children_.resize(n);

  std::unordered_set<std::uint64_t> seen;
  for (const auto& [from, to] : edges) {
    auto fi = index.find(from);
    auto ti = index.find(to);
    if (fi == index.end()) throw UnknownEndpointError("edge endpoint '" + from + "' is not a declared node");
    if (ti == index.end()) throw UnknownEndpointError("edge endpoint '" + to + "' is not a declared node");
    std::uint64_t key = (static_cast<std::uint64_t>(fi->second) << 32) | ti->second;
    if (!seen.insert(key).second) continue;  // edges form a set
    parents_[ti->second].push_back(fi->second);
    children_[fi->second].push_back(ti->second);
  }
  for (auto& p : parents_) std::sort(p.begin(), p.end());
  for (auto& c : children_) std::sort(c.begin(), c.end());

  // Kahn's algorithm, always taking the smallest ready index so the order is
  // deterministic and follows declaration order where possible. A leftover
  // node proves a cycle and names a member.
  std::vector<std::size_t> indeg(n);
  for (std::size_t v = 0; v < n; ++v) indeg[v] = parents_[v].size();
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push(v);
  topo_.reserve(n);
  while (!ready.empty()) {
    std::size_t v = ready.top();
    ready.pop();
    topo_.push_back(v);
    for (std::size_t c : children_[v])
      if (--indeg[c] == 0) ready.push(c);
  }
  if (topo_.size() != n) {
    for (std::size_t v = 0; v < n; ++v)
      if (indeg[v] > 0) throw CycleError("cycle detected through node '" + names_[v] + "'");
  }

  ancestor_.assign(n, std::vector<bool>(n, false));
  for (std::size_t v : topo_) {
    ancestor_[v][v] = true;
    for (std::size_t p : parents_[v])
      for (std::size_t u = 0; u < n; ++u)
        if (ancestor_[p][u]) ancestor_[v][u] = true;
  }
}

std::size_t ProcessDag::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  throw UnknownNodeError("unknown node '" + name + "'");
}

bool ProcessDag::has_node(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

bool ProcessDag::adjacent(std::size_t from, std::size_t to) const {
  const auto& p = parents_[to];
  return std::binary_search(p.begin(), p.end(), from);
}

bool ProcessDag::has_path(std::size_t from, std::size_t to) const {
  return from != to ? ancestor_[to][from] : false;
}

std::vector<std::string> ProcessDag::to_names(const NodeSet& s) const {
  std::vector<std::string> out;
  out.reserve(s.members.size());
  for (std::size_t v : s.members) out.push_back(names_[v]);
  return out;
}

NodeSet ProcessDag::to_set(const std::vector<std::string>& names) const {
  NodeSet s;
  s.members.reserve(names.size());
  for (const auto& n : names) s.members.push_back(index_of(n));
  std::sort(s.members.begin(), s.members.end());
  s.members.erase(std::unique(s.members.begin(), s.members.end()), s.members.end());
  return s;
}

NodeSet sources(const ProcessDag& dag) {
  NodeSet s;
  for (std::size_t v = 0; v < dag.size(); ++v)
    if (dag.is_source(v)) s.members.push_back(v);
  return s;
}

NodeSet sinks(const ProcessDag& dag) {
  NodeSet s;
  for (std::size_t v = 0; v < dag.size(); ++v)
    if (dag.is_sink(v)) s.members.push_back(v);
  return s;
}

NodeSet influencing_inputs(const ProcessDag& dag, std::size_t output) {
  if (output >= dag.size()) throw UnknownNodeError("node index out of range");
  NodeSet s;
  for (std::size_t v = 0; v < dag.size(); ++v)
    if (dag.is_source(v) && dag.has_path(v, output)) s.members.push_back(v);
  return s;
}

NodeSet predecessor_operator(const ProcessDag& dag, const NodeSet& s) {
  std::vector<bool> in(dag.size(), false);
  for (std::size_t v : s.members) {
    if (v >= dag.size()) throw UnknownNodeError("node index out of range");
    for (std::size_t p : dag.parents(v)) in[p] = true;
    if (dag.is_source(v)) in[v] = true;
  }
  NodeSet out;
  for (std::size_t v = 0; v < dag.size(); ++v)
    if (in[v]) out.members.push_back(v);
  return out;
}

NodeSet predecessor_power(const ProcessDag& dag, std::size_t output, int l) {
  NodeSet s;
  s.members = {output};
  for (int i = 0; i < l; ++i) s = predecessor_operator(dag, s);
  return s;
}

int iteration_depth(const ProcessDag& dag, std::size_t output) {
  if (output >= dag.size()) throw UnknownNodeError("node index out of range");
  if (dag.is_source(output))
    throw OutputIsSourceError("output '" + dag.name(output) + "' has no predecessors");
  NodeSet cur;
  cur.members = {output};
  cur = predecessor_operator(dag, cur);  // P^1(y)
  for (int l = 1; l <= static_cast<int>(dag.size()); ++l) {
    NodeSet next = predecessor_operator(dag, cur);
    if (next == cur) return l;
    cur = std::move(next);
  }
  return static_cast<int>(dag.size());  // unreachable: P reaches its fixed point within |V| steps
}

Decomposition independent_decomposition(const ProcessDag& dag, const NodeSet& s) {
  for (std::size_t v : s.members)
    if (v >= dag.size()) throw UnknownNodeError("node index out of range");

  // Union-find over s; two nodes join when their ancestor sets intersect.
  const std::size_t k = s.members.size();
  std::vector<std::size_t> root(k);
  for (std::size_t i = 0; i < k; ++i) root[i] = i;
  auto find = [&](std::size_t i) {
    while (root[i] != i) i = root[i] = root[root[i]];
    return i;
  };
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      std::size_t a = s.members[i], b = s.members[j];
      bool shared = false;
      for (std::size_t u = 0; u < dag.size() && !shared; ++u)
        shared = dag.is_ancestor(u, a) && dag.is_ancestor(u, b);
      if (shared) root[find(i)] = find(j);
    }
  }

  Decomposition dec;
  std::vector<bool> used(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    if (used[i]) continue;
    NodeSet g;
    std::size_t r = find(i);
    for (std::size_t j = i; j < k; ++j) {
      if (!used[j] && find(j) == r) {
        g.members.push_back(s.members[j]);
        used[j] = true;
      }
    }
    dec.groups.push_back(std::move(g));
  }
  // groups ordered by smallest member, members ascending: both hold by scan order
  return dec;
}

}  // namespace dagsobol
