// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dagsobol/dag.hpp"
#include "dagsobol/dataset.hpp"
#include "dagsobol/distribution.hpp"
#include "dagsobol/expression.hpp"

namespace dagsobol {

/// A stochastic process on a DAG: marginals for every source node and an
/// arithmetic expression for every non-source node over its direct
/// predecessors and the named constants.
class ProcessSpec {
 public:
  ProcessSpec(std::string name, ProcessDag dag,
              std::map<std::string, Distribution> input_dists,
              std::map<std::string, std::string> node_functions,
              std::map<std::string, double> constants = {});

  const std::string& name() const { return name_; }
  const ProcessDag& dag() const { return dag_; }
  const std::map<std::string, Distribution>& input_dists() const { return input_dists_; }
  const std::map<std::string, double>& constants() const { return constants_; }
  const std::map<std::string, Expression>& node_functions() const { return functions_; }

  const Distribution& dist_of(const std::string& source) const;
  std::size_t output_node() const;  // the unique sink; throws if ambiguous
  std::vector<std::string> input_names() const;          // all sources, declaration order
  std::vector<Distribution> input_distributions() const; // aligned with input_names()

  /// Evaluate the whole process for one vector of source values
  /// (aligned with input_names()); returns the output node's value.
  double evaluate_output(const std::vector<double>& source_values) const;

  /// JSON (de)serialization; schema carries spec_version = 1.
  static ProcessSpec from_json(const std::string& text);
  static ProcessSpec load(const std::string& path);
  std::string to_json() const;
  void save(const std::string& path) const;

 private:
  std::string name_;
  ProcessDag dag_;
  std::map<std::string, Distribution> input_dists_;
  std::map<std::string, Expression> functions_;
  std::map<std::string, double> constants_;
};

/// Welding energy process: grid of 11 inputs feeding weld volume V and total
/// energy E. Normal marginals below are (mean, variance) pairs converted to
/// standard deviations at construction.
ProcessSpec builtin_welding();

/// Injection molding resetting-energy process: 7 inputs feeding the melting,
/// cooling, and injection energies combined into E_reset. The constant
/// parameters default to Q=5e-5, Hf=0, Vpart=1e-4, Delta=0, COP=0.7.
ProcessSpec builtin_injection_molding();

/// Look up a builtin by CLI name ("welding" | "injection_molding").
ProcessSpec builtin_process(const std::string& name);

/// Sample all sources independently, evaluate nodes in topological order, and
/// return every column. Row r uses the counter-based stream (seed, r), so the
/// result is independent of scheduling. Throws EvaluationFailureError naming
/// the node and row on a non-finite intermediate.
Dataset simulate(const ProcessSpec& spec, std::size_t m, std::uint64_t seed);

}  // namespace dagsobol
