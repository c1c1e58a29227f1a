// SPDX-License-Identifier: Apache-2.0
#include "dagsobol/polynomial.hpp"

#include <cmath>

#include "dagsobol/basis.hpp"
#include "dagsobol/errors.hpp"

namespace dagsobol {

Eigen::VectorXd UnivariatePoly::raw_coefficients() const {
  // Substitute z = (x - shift)/scale and re-collect monomials in x via the
  // binomial theorem.
  const Eigen::Index n = coefficients.size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (coefficients[k] == 0.0) continue;
    // ((x - shift)/scale)^k
    double base = coefficients[k] / std::pow(transform.scale, static_cast<double>(k));
    double binom = 1.0;
    for (Eigen::Index j = 0; j <= k; ++j) {
      out[j] += base * binom * std::pow(-transform.shift, static_cast<double>(k - j));
      binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
    }
  }
  return out;
}

Eigen::VectorXd hermite_coefficients(int k) {
  // He_{n+1} = z He_n - n He_{n-1}; normalize by sqrt(n!).
  std::vector<Eigen::VectorXd> he(static_cast<std::size_t>(k) + 1);
  he[0] = Eigen::VectorXd::Ones(1);
  if (k >= 1) {
    he[1] = Eigen::VectorXd::Zero(2);
    he[1][1] = 1.0;
  }
  for (int n = 1; n < k; ++n) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(n + 2);
    next.segment(1, n + 1) = he[n];
    next.head(n) -= static_cast<double>(n) * he[n - 1];
    he[n + 1] = next;
  }
  double norm = 1.0;
  for (int i = 2; i <= k; ++i) norm *= static_cast<double>(i);
  return he[k] / std::sqrt(norm);
}

Eigen::VectorXd legendre_coefficients(int k) {
  // (n+1) P_{n+1} = (2n+1) z P_n - n P_{n-1}; normalize by sqrt(2k+1).
  std::vector<Eigen::VectorXd> pl(static_cast<std::size_t>(k) + 1);
  pl[0] = Eigen::VectorXd::Ones(1);
  if (k >= 1) {
    pl[1] = Eigen::VectorXd::Zero(2);
    pl[1][1] = 1.0;
  }
  for (int n = 1; n < k; ++n) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(n + 2);
    next.segment(1, n + 1) = (2.0 * n + 1.0) * pl[n];
    next.head(n) -= static_cast<double>(n) * pl[n - 1];
    pl[n + 1] = next / static_cast<double>(n + 1);
  }
  return pl[k] * std::sqrt(2.0 * k + 1.0);
}

namespace {

std::vector<UnivariatePoly> analytic_family(const Distribution& dist, int p) {
  std::vector<UnivariatePoly> out;
  out.reserve(static_cast<std::size_t>(p) + 1);
  AffineTransform t;
  if (dist.kind() == Distribution::Kind::normal) {
    t.shift = dist.param_a();
    t.scale = dist.param_b();
  } else {
    t.shift = 0.5 * (dist.param_a() + dist.param_b());
    t.scale = 0.5 * (dist.param_b() - dist.param_a());
  }
  for (int k = 0; k <= p; ++k) {
    UnivariatePoly poly;
    poly.coefficients = dist.kind() == Distribution::Kind::normal
                            ? hermite_coefficients(k)
                            : legendre_coefficients(k);
    poly.degree = k;
    poly.transform = t;
    out.push_back(std::move(poly));
  }
  return out;
}

}  // namespace

std::vector<UnivariatePoly> univariate_basis(const Distribution& dist, int p) {
  if (p < 0) throw UsageError("polynomial degree must be non-negative");
  if (dist.kind() != Distribution::Kind::empirical) return analytic_family(dist, p);

  Dataset d;
  d.add_column("x", dist.sample());
  GroupFamily fam = gram_schmidt_family({"x"}, d, p);
  if (fam.functions() != static_cast<std::size_t>(p) + 1)
    throw DegenerateDistributionError(
        "sample cannot support an orthonormal family of degree " + std::to_string(p));
  std::vector<UnivariatePoly> out;
  out.reserve(fam.functions());
  for (std::size_t k = 0; k < fam.functions(); ++k) {
    UnivariatePoly poly;
    poly.coefficients = fam.coeffs[k].head(fam.degree[k] + 1);
    poly.degree = fam.degree[k];
    poly.transform = fam.transforms[0];
    out.push_back(std::move(poly));
  }
  return out;
}

}  // namespace dagsobol
