// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace dagsobol {

/// Ordered subset of nodes, canonical order = declaration order in the DAG.
struct NodeSet {
  std::vector<std::size_t> members;  // sorted ascending node indices

  bool contains(std::size_t v) const;
  std::size_t size() const { return members.size(); }
  bool operator==(const NodeSet&) const = default;
};

/// Mutually independent decomposition of a node set: groups are the connected
/// components under "shares a common ancestor" (every node is its own ancestor).
struct Decomposition {
  int level = 0;
  std::vector<NodeSet> groups;
};

/// Immutable directed acyclic graph over named nodes. Queries are read-only
/// and safe to call concurrently.
class ProcessDag {
 public:
  ProcessDag(std::vector<std::string> nodes,
             std::vector<std::pair<std::string, std::string>> edges);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& node_names() const { return names_; }
  const std::string& name(std::size_t v) const { return names_[v]; }
  std::size_t index_of(const std::string& name) const;  // throws UnknownNodeError
  bool has_node(const std::string& name) const;

  bool adjacent(std::size_t from, std::size_t to) const;
  const std::vector<std::size_t>& parents(std::size_t v) const { return parents_[v]; }
  const std::vector<std::size_t>& children(std::size_t v) const { return children_[v]; }
  bool is_source(std::size_t v) const { return parents_[v].empty(); }
  bool is_sink(std::size_t v) const { return children_[v].empty(); }

  /// Nodes in a valid topological order (parents before children).
  const std::vector<std::size_t>& topological_order() const { return topo_; }

  /// Ancestor indicator rows; a node is its own ancestor.
  bool is_ancestor(std::size_t anc, std::size_t v) const { return ancestor_[v][anc]; }
  /// True iff a directed path of length >= 1 exists from `from` to `to`.
  bool has_path(std::size_t from, std::size_t to) const;

  std::vector<std::string> to_names(const NodeSet& s) const;
  NodeSet to_set(const std::vector<std::string>& names) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> topo_;
  std::vector<std::vector<bool>> ancestor_;  // ancestor_[v][u]: u is ancestor of v (incl. self)
};

/// All zero-in-degree nodes.
NodeSet sources(const ProcessDag& dag);
/// All zero-out-degree nodes.
NodeSet sinks(const ProcessDag& dag);

/// Source nodes with a directed path to `output`. A source has no path to itself.
NodeSet influencing_inputs(const ProcessDag& dag, std::size_t output);

/// Direct predecessors of the members of s, keeping source members fixed.
NodeSet predecessor_operator(const ProcessDag& dag, const NodeSet& s);

/// Apply the predecessor operator l times to {output}.
NodeSet predecessor_power(const ProcessDag& dag, std::size_t output, int l);

/// Smallest l with P^l({output}) == P^{l+1}({output}). Throws OutputIsSourceError.
int iteration_depth(const ProcessDag& dag, std::size_t output);

/// Partition s into mutually independent groups, ordered by smallest member.
Decomposition independent_decomposition(const ProcessDag& dag, const NodeSet& s);

}  // namespace dagsobol
