// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dagsobol/basis.hpp"
#include "dagsobol/dag.hpp"
#include "dagsobol/dataset.hpp"
#include "dagsobol/regression.hpp"
#include "dagsobol/sobol.hpp"

namespace dagsobol {

struct EngineConfig {
  /// Highest polynomial order per level; the last entry repeats for deeper
  /// levels. degrees[l-1] is the level-l expansion order, and also the order
  /// of the sub-expansions fitted while moving from level l-1 to l.
  std::vector<int> degrees = {3};
  /// Max total degree of re-projected expansions; 0 = min(prod of degrees, 8).
  int projection_degree_cap = 0;
  /// Evaluation points for each re-projection; 0 = 10x the basis size.
  std::size_t projection_sample_size = 0;
  FitConfig fit;
  std::uint64_t seed = 0;

  int degree_at(int level) const;  // 1-based
  int cap() const;
};

/// Final surrogate: an expansion of the output in the network inputs.
struct PceModel {
  OrthonormalBasis basis;
  CoefficientVector coef;
  std::vector<std::string> inputs;

  Eigen::VectorXd evaluate(const Dataset& rows) const;
};

struct EngineResult {
  PceModel model;
  SobolReport report;
};

/// Black-box PCE: tensor basis over the influencing inputs fitted directly.
EngineResult fit_naive(const ProcessDag& dag, const std::string& output,
                       const Dataset& data, const std::map<std::string, Distribution>& dists,
                       const EngineConfig& cfg);

/// Recursive PCE over the DAG: level-1 fit on the direct predecessors, then
/// per-group factor sub-expansions and re-projection until only network
/// inputs remain.
EngineResult fit_network(const ProcessDag& dag, const std::string& output,
                         const Dataset& data, const std::map<std::string, Distribution>& dists,
                         const EngineConfig& cfg);

/// fit_network with the l1-constrained fit in place of least squares for the
/// level-1 and factor expansions; re-projection stays dense.
EngineResult fit_sparse_network(const ProcessDag& dag, const std::string& output,
                                const Dataset& data,
                                const std::map<std::string, Distribution>& dists,
                                const EngineConfig& cfg);

/// Run `run` on `reps` independently generated datasets and aggregate
/// per-input means and standard errors. Per-replication seeds derive
/// deterministically from (seed, replication index). Failed replications are
/// counted and skipped.
SobolReport replicate(const std::function<Dataset(std::uint64_t)>& make_data,
                      const std::function<SobolReport(const Dataset&, std::uint64_t)>& run,
                      int reps, std::uint64_t seed);

/// Minimal observation counts of the dense fits.
std::size_t naive_min_observations(const ProcessDag& dag, const std::string& output, int p);
std::size_t network_min_observations(const ProcessDag& dag, const std::string& output, int p);
/// Largest direct-predecessor count over the output and its non-source
/// ancestors (the variable count that drives the network bound).
std::size_t network_dimension(const ProcessDag& dag, const std::string& output);
/// network_dimension / dim(influencing inputs).
double lambda_ratio(const ProcessDag& dag, const std::string& output);

}  // namespace dagsobol
