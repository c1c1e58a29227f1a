// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <vector>

#include "dagsobol/distribution.hpp"

namespace dagsobol {

/// Affine change of variable x -> (x - shift) / scale applied before a
/// polynomial is evaluated.
struct AffineTransform {
  double shift = 0.0;
  double scale = 1.0;
  double apply(double x) const { return (x - shift) / scale; }
};

/// Univariate polynomial stored as monomial coefficients in the standardized
/// variable, together with the standardization itself.
struct UnivariatePoly {
  Eigen::VectorXd coefficients;  // c0 + c1 z + c2 z^2 + ...
  int degree = 0;
  AffineTransform transform;

  double evaluate(double x) const {
    double z = transform.apply(x);
    double acc = 0.0;
    for (Eigen::Index i = coefficients.size() - 1; i >= 0; --i)
      acc = acc * z + coefficients[i];
    return acc;
  }

  /// Coefficients expanded in the raw (untransformed) variable.
  Eigen::VectorXd raw_coefficients() const;
};

/// Orthonormal family of degrees 0..p for the given marginal: normalized
/// probabilists' Hermite for Normal, normalized shifted Legendre for Uniform,
/// Gram-Schmidt under the sample for Empirical.
std::vector<UnivariatePoly> univariate_basis(const Distribution& dist, int p);

/// Monomial coefficients of the normalized probabilists' Hermite He_k / sqrt(k!).
Eigen::VectorXd hermite_coefficients(int k);
/// Monomial coefficients of sqrt(2k+1) * P_k on [-1, 1].
Eigen::VectorXd legendre_coefficients(int k);

}  // namespace dagsobol
