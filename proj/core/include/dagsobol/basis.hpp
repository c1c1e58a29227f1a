// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "dagsobol/dag.hpp"
#include "dagsobol/dataset.hpp"
#include "dagsobol/distribution.hpp"
#include "dagsobol/polynomial.hpp"

namespace dagsobol {

/// Exponent tuples of `nvars` variables with total degree <= p, in graded
/// lexicographic order (degree first, lexicographically descending within).
std::vector<std::vector<int>> graded_monomials(int nvars, int p);

/// C(n_vars + p, n_vars): the size of a total-degree-p polynomial basis and
/// hence the minimally required number of observations for a dense fit.
std::size_t min_observations(std::size_t n_vars, int p);

/// One orthonormal family per mutually independent group of variables.
/// Functions are polynomials in the standardized group variables, stored as
/// coefficients over a shared graded-lex monomial list. functions[0] == 1.
struct GroupFamily {
  std::vector<std::string> vars;
  std::vector<AffineTransform> transforms;
  std::vector<std::vector<int>> monomials;   // exponent tuples over vars
  std::vector<Eigen::VectorXd> coeffs;       // per function, length = monomials.size()
  std::vector<int> degree;                   // total degree per function
  std::vector<std::vector<int>> leading;     // leading monomial exponents per function
  std::vector<std::vector<int>> dropped;     // monomials removed as linearly dependent
  bool analytic = false;

  std::size_t functions() const { return coeffs.size(); }
  int max_degree() const { return degree.empty() ? 0 : degree.back(); }

  /// Values of every function at the given raw columns; result is m x functions().
  Eigen::MatrixXd evaluate(const std::vector<const std::vector<double>*>& cols) const;
  Eigen::MatrixXd evaluate(const Dataset& data) const;
};

/// Family for a single variable with a known marginal (or its sample).
GroupFamily univariate_family(const std::string& var, const Distribution& dist, int p);

/// Family for a dependent group, orthonormalized against the empirical inner
/// product of `data` by modified Gram-Schmidt. Near-dependent monomials
/// (post-projection norm < 1e-10 x pre-projection norm) are dropped.
GroupFamily gram_schmidt_family(const std::vector<std::string>& vars, const Dataset& data,
                                int p, bool require_overdetermined = false);

/// A multivariate orthonormal basis: products of one function per group.
class OrthonormalBasis {
 public:
  struct Term {
    std::vector<int> fn;  // per-group function index; all zero = constant term
    int total_degree = 0;
  };

  OrthonormalBasis() = default;

  /// All products with total degree <= p, graded-lex ordered.
  static OrthonormalBasis dense(std::vector<GroupFamily> groups, int p);
  /// Explicit term list (deduplicated, graded-lex ordered, constant first).
  static OrthonormalBasis restricted(std::vector<GroupFamily> groups,
                                     std::vector<std::vector<int>> fn_tuples);

  const std::vector<GroupFamily>& groups() const { return groups_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  std::vector<std::string> variables() const;
  bool all_singleton() const;

  /// Per-variable polynomial degrees of one term; requires all_singleton().
  std::vector<int> term_variable_degrees(std::size_t t) const;
  /// Names of variables a term involves (positive degree in any group).
  std::vector<std::string> term_support(std::size_t t) const;

  /// Design matrix: entry (j, i) = psi_i evaluated at row j.
  Eigen::MatrixXd evaluate(const Dataset& data) const;

 private:
  std::vector<GroupFamily> groups_;
  std::vector<Term> terms_;
};

/// Tensor-product basis over mutually independent variables (Eq.-5 style).
OrthonormalBasis tensor_basis(const std::vector<std::string>& vars,
                              const std::vector<Distribution>& dists, int p);

/// Basis over the columns of one dependent group (single Gram-Schmidt family).
OrthonormalBasis group_basis(const std::vector<std::string>& vars, const Dataset& data,
                             int p);

/// Basis over a mutually independent decomposition: analytic families for
/// singleton source groups with known marginals, Gram-Schmidt otherwise.
OrthonormalBasis decomposition_basis(const ProcessDag& dag, const Decomposition& dec,
                                     const Dataset& data,
                                     const std::map<std::string, Distribution>& dists,
                                     int p);

inline Eigen::MatrixXd evaluate_basis(const OrthonormalBasis& basis, const Dataset& rows) {
  return basis.evaluate(rows);
}

}  // namespace dagsobol
