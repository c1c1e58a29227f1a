// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dagsobol/basis.hpp"
#include "dagsobol/distribution.hpp"
#include "dagsobol/regression.hpp"

namespace dagsobol {

struct SobolIndexPair {
  double first_order = 0.0;
  double total = 0.0;
  double first_order_se = 0.0;
  double total_se = 0.0;
};

struct SobolReport {
  std::vector<std::string> inputs;
  std::vector<SobolIndexPair> index;  // aligned with inputs
  double output_mean = 0.0;
  double output_variance = 0.0;
  std::string method;
  std::size_t sample_size = 0;
  int replications = 1;
  std::size_t failures = 0;
  std::size_t support_size = 0;   // nonzero non-constant terms of the final expansion
  bool constraint_met = true;     // sparse goodness-of-fit bound achieved everywhere
  bool zero_variance = false;     // model carried no variance; indices are all zero

  const SobolIndexPair& at(const std::string& input) const;
};

/// Mean and variance implied by orthonormal-basis coefficients (constant first).
std::pair<double, double> moments_from_pce(const CoefficientVector& theta);

/// First-order and total indices from PCE coefficients: first-order sums the
/// squared coefficients of terms involving exactly one input, total sums over
/// every term involving the input; both normalized by the variance.
SobolReport sobol_from_pce(const CoefficientVector& theta, const OrthonormalBasis& basis,
                           const std::vector<std::string>& inputs);

/// Monte Carlo pick-freeze oracle. Draws two independent n-row input matrices
/// A and B plus the n x d hybrids, evaluates `model` on every row, and applies
/// the Saltelli first-order / Jansen total estimators (see the implementation
/// for the exact formulas). Deterministic given the seed.
SobolReport sobol_pick_freeze(
    const std::function<double(const std::vector<double>&)>& model,
    const std::vector<std::string>& inputs, const std::vector<Distribution>& dists,
    std::size_t n, std::uint64_t seed);

struct ParetoRow {
  std::string input;
  double first_order = 0.0;
  double cumulative_share = 0.0;
};

/// Inputs sorted by descending first-order index with cumulative shares.
std::vector<ParetoRow> pareto_data(const SobolReport& report);

}  // namespace dagsobol
