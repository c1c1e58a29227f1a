// SPDX-License-Identifier: Apache-2.0
#include "dagsobol/regression.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "dagsobol/errors.hpp"

namespace dagsobol {

void CoefficientVector::rebuild_support() {
  support.clear();
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values[i] != 0.0) support.push_back(static_cast<std::size_t>(i));
}

CoefficientVector dense_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                            const FitConfig& cfg) {
  const Eigen::Index m = design.rows();
  const Eigen::Index n = design.cols();
  if (targets.size() != m) throw UsageError("design and target row counts differ");
  if (m < n)
    throw UnderdeterminedError("dense fit", static_cast<std::size_t>(n),
                               static_cast<std::size_t>(m));
  if (!design.allFinite() || !targets.allFinite())
    throw NonFiniteInputError("dense fit received non-finite values");

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design.rows(), design.cols());
  cod.setThreshold(cfg.svd_cutoff);
  cod.compute(design);

  CoefficientVector out;
  out.values = cod.solve(targets);
  double tss = (targets.array() - targets.mean()).square().sum();
  double rss = (targets - design * out.values).squaredNorm();
  out.relative_residual = tss > 0 ? rss / tss : 0.0;
  out.rebuild_support();
  return out;
}

namespace {

inline double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

// LASSO state in standardized coordinates: columns centered and scaled to
// unit RMS norm, target centered. The intercept is recovered afterwards.
struct LassoPath {
  Eigen::MatrixXd x;        // m x k active (non-degenerate, non-intercept) columns
  Eigen::VectorXd y;        // centered target
  std::vector<Eigen::Index> col_id;  // position in the original design
  std::vector<double> center, scale;
  Eigen::Index intercept = -1;
  double intercept_value = 1.0;
  double y_mean = 0.0;
  double tss = 0.0;
  double m = 0.0;

  Eigen::VectorXd beta;  // standardized coefficients
  Eigen::VectorXd resid;

  void init(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets) {
    const Eigen::Index rows = design.rows();
    m = static_cast<double>(rows);
    // Identify the intercept: the first column with zero variance.
    std::vector<Eigen::Index> keep;
    std::vector<double> ctr, scl;
    for (Eigen::Index j = 0; j < design.cols(); ++j) {
      double mean = design.col(j).mean();
      double var = (design.col(j).array() - mean).square().sum() / m;
      double sd = std::sqrt(var);
      if (sd <= 1e-14 * (1.0 + std::abs(mean))) {
        if (intercept < 0 && std::abs(mean) > 0) {
          intercept = j;
          intercept_value = mean;
        }
        continue;  // degenerate columns carry no signal
      }
      keep.push_back(j);
      ctr.push_back(mean);
      scl.push_back(sd);
    }
    col_id = std::move(keep);
    center = std::move(ctr);
    scale = std::move(scl);
    x.resize(rows, static_cast<Eigen::Index>(col_id.size()));
    for (std::size_t k = 0; k < col_id.size(); ++k)
      x.col(static_cast<Eigen::Index>(k)) =
          (design.col(col_id[k]).array() - center[k]) / scale[k];
    y_mean = targets.mean();
    y = targets.array() - y_mean;
    tss = y.squaredNorm();
    beta = Eigen::VectorXd::Zero(x.cols());
    resid = y;
  }

  double lambda_max() const {
    if (x.cols() == 0) return 0.0;
    return (x.transpose() * y).cwiseAbs().maxCoeff() / m;
  }

  // One coordinate-descent sweep over the given set; returns the largest step.
  double sweep(const std::vector<Eigen::Index>& cols, double lambda) {
    double max_step = 0.0;
    for (Eigen::Index j : cols) {
      double old = beta[j];
      double z = old + x.col(j).dot(resid) / m;
      double nb = soft_threshold(z, lambda);
      if (nb != old) {
        resid -= (nb - old) * x.col(j);
        beta[j] = nb;
        max_step = std::max(max_step, std::abs(nb - old));
      }
    }
    return max_step;
  }

  // Coordinate descent to convergence at one lambda from the current state.
  void solve(double lambda, int max_iter, double tol) {
    if (x.cols() == 0) return;
    std::vector<Eigen::Index> all(static_cast<std::size_t>(x.cols()));
    for (Eigen::Index j = 0; j < x.cols(); ++j) all[static_cast<std::size_t>(j)] = j;
    const double scale_tol = tol * std::max(1.0, std::sqrt(tss / m));
    int iter = 0;
    while (iter < max_iter) {
      ++iter;
      if (sweep(all, lambda) < scale_tol) break;
      // iterate the active set until stable, then re-check all coordinates
      std::vector<Eigen::Index> active;
      for (Eigen::Index j = 0; j < x.cols(); ++j)
        if (beta[j] != 0.0) active.push_back(j);
      while (iter < max_iter) {
        ++iter;
        if (sweep(active, lambda) < scale_tol) break;
      }
    }
  }

  double relative_residual() const {
    return tss > 0 ? resid.squaredNorm() / tss : 0.0;
  }

  // Backward pruning: zero coefficients, smallest magnitude first, while the
  // residual bound still holds. Every removal lowers the l1 norm, so the
  // result is a strictly better feasible point of the constrained problem
  // than the raw path solution.
  void prune(double feas_bound) {
    std::vector<Eigen::Index> order;
    for (Eigen::Index j = 0; j < beta.size(); ++j)
      if (beta[j] != 0.0) order.push_back(j);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return std::abs(beta[a]) < std::abs(beta[b]); });
    for (Eigen::Index j : order) {
      Eigen::VectorXd trial = resid + beta[j] * x.col(j);
      if (tss > 0 && trial.squaredNorm() / tss <= feas_bound) {
        resid = std::move(trial);
        beta[j] = 0.0;
      }
    }
  }

  CoefficientVector extract(const Eigen::Index total_cols, double lambda) const {
    CoefficientVector out;
    out.values = Eigen::VectorXd::Zero(total_cols);
    double shift = 0.0;
    for (std::size_t k = 0; k < col_id.size(); ++k) {
      double b = beta[static_cast<Eigen::Index>(k)];
      if (b == 0.0) continue;
      double raw = b / scale[k];
      out.values[col_id[k]] = raw;
      shift += raw * center[k];
    }
    if (intercept >= 0) out.values[intercept] = (y_mean - shift) / intercept_value;
    out.lambda = lambda;
    out.relative_residual = relative_residual();
    out.rebuild_support();
    return out;
  }
};

}  // namespace

CoefficientVector sparse_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                             const FitConfig& cfg) {
  const Eigen::Index m = design.rows();
  if (targets.size() != m) throw UsageError("design and target row counts differ");
  if (m < 2) throw UnderdeterminedError("sparse fit", 2, static_cast<std::size_t>(m));
  if (!design.allFinite() || !targets.allFinite())
    throw NonFiniteInputError("sparse fit received non-finite values");
  if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0))
    throw UsageError("gamma must lie in [0, 1]");

  LassoPath path;
  path.init(design, targets);

  // Feasibility allows for round-off so that gamma = 0 accepts an exact fit.
  const double feas = cfg.gamma + 1e-12;

  // Constant target, or a constant model already good enough.
  if (path.tss <= 0.0 || 1.0 <= feas) {
    CoefficientVector out = path.extract(design.cols(), path.lambda_max());
    out.constraint_met = true;
    return out;
  }

  const double lmax = path.lambda_max();
  if (lmax <= 0.0) {
    CoefficientVector out = path.extract(design.cols(), 0.0);
    out.constraint_met = out.relative_residual <= feas;
    return out;
  }

  // Decreasing geometric grid, warm-started; the first feasible point has the
  // largest feasible lambda on the grid. The backward prune then uses the
  // remaining residual slack to drop coefficients the bound does not need.
  const int grid = std::max(2, cfg.lambda_grid);
  const double ratio = std::pow(cfg.lambda_min_ratio, 1.0 / (grid - 1));
  double lambda = lmax;
  for (int k = 0; k < grid; ++k) {
    path.solve(lambda, cfg.max_iter, cfg.conv_tol);
    if (path.relative_residual() <= feas) {
      path.prune(feas);
      CoefficientVector out = path.extract(design.cols(), lambda);
      out.constraint_met = true;
      return out;
    }
    lambda *= ratio;
  }

  // The whole grid is infeasible. Check the unpenalized limit, then bisect
  // [0, lambda_grid_min] for the largest feasible lambda.
  double hi = lmax * cfg.lambda_min_ratio;
  Eigen::VectorXd warm_beta = path.beta;
  Eigen::VectorXd warm_resid = path.resid;
  path.solve(0.0, cfg.max_iter, cfg.conv_tol);
  if (path.relative_residual() > feas) {
    CoefficientVector out = path.extract(design.cols(), 0.0);
    out.constraint_met = false;  // gamma below the attainable residual
    return out;
  }
  Eigen::VectorXd best_beta = path.beta;
  Eigen::VectorXd best_resid = path.resid;
  double best_lambda = 0.0;
  double lo = 0.0;
  for (int it = 0; it < 30 && hi - lo > 1e-4 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    path.beta = warm_beta;
    path.resid = warm_resid;
    path.solve(mid, cfg.max_iter, cfg.conv_tol);
    if (path.relative_residual() <= feas) {
      lo = mid;
      best_beta = path.beta;
      best_resid = path.resid;
      best_lambda = mid;
    } else {
      hi = mid;
    }
  }
  path.beta = best_beta;
  path.resid = best_resid;
  path.prune(feas);
  CoefficientVector out = path.extract(design.cols(), best_lambda);
  out.constraint_met = true;
  return out;
}

CoefficientVector fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                      const FitConfig& cfg) {
  return cfg.mode == FitConfig::Mode::dense ? dense_fit(design, targets, cfg)
                                            : sparse_fit(design, targets, cfg);
}

}  // namespace dagsobol
