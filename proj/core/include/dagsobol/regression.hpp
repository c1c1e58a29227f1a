// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace dagsobol {

struct FitConfig {
  enum class Mode { dense, sparse };
  Mode mode = Mode::dense;
  double gamma = 0.001;           // goodness-of-fit bound for sparse fits
  double svd_cutoff = 1e-12;      // relative rank threshold for dense fits
  int max_iter = 100000;          // coordinate descent sweeps per lambda
  double conv_tol = 1e-10;        // coordinate descent convergence (relative)
  int lambda_grid = 100;          // path length
  double lambda_min_ratio = 1e-6; // lambda_min = ratio * lambda_max
  std::uint64_t seed = 0;
};

struct CoefficientVector {
  Eigen::VectorXd values;              // aligned to the basis, intercept first
  std::vector<std::size_t> support;    // indices with values[i] != 0
  bool constraint_met = true;          // sparse: residual bound achieved
  double lambda = 0.0;                 // sparse: penalty of the returned solution
  double relative_residual = 0.0;      // RSS / TSS of the returned solution

  void rebuild_support();
};

/// Least-squares fit of `targets` on `design` (m x (P+1), intercept column
/// first). Rank-revealing; returns the minimum-norm solution when the design
/// is rank deficient. Requires m >= P+1.
CoefficientVector dense_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                            const FitConfig& cfg);

/// l1-minimal coefficients subject to RSS/TSS <= gamma: Lagrangian LASSO path
/// (coordinate descent, warm starts) with the intercept unpenalized, refined
/// by bisection when the grid brackets the constraint boundary. Falls back to
/// the least-residual solution with constraint_met = false when gamma is
/// below the attainable residual.
CoefficientVector sparse_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                             const FitConfig& cfg);

/// Dispatch on cfg.mode.
CoefficientVector fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                      const FitConfig& cfg);

}  // namespace dagsobol
