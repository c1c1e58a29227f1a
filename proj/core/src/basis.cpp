// SPDX-License-Identifier: Apache-2.0
#include "dagsobol/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "dagsobol/errors.hpp"

namespace dagsobol {

std::vector<std::vector<int>> graded_monomials(int nvars, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(nvars), 0);
  // lexicographically descending within each total degree
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == nvars - 1) {
      cur[pos] = remaining;
      out.push_back(cur);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur[pos] = e;
      self(self, pos + 1, remaining - e);
    }
  };
  for (int d = 0; d <= p; ++d) {
    if (nvars == 0) {
      if (d == 0) out.push_back({});
      continue;
    }
    rec(rec, 0, d);
  }
  return out;
}

std::size_t min_observations(std::size_t n_vars, int p) {
  if (n_vars < 1) throw UsageError("min_observations requires n_vars >= 1");
  if (p < 0) throw UsageError("min_observations requires p >= 0");
  // C(n+p, p) incrementally, guarding overflow
  unsigned long long acc = 1;
  for (int k = 1; k <= p; ++k) {
    unsigned long long num = n_vars + static_cast<unsigned long long>(k);
    if (acc > (~0ULL) / num) throw OverflowError("min_observations overflows 64 bits");
    acc = acc * num / static_cast<unsigned long long>(k);
  }
  if (acc > static_cast<unsigned long long>(std::numeric_limits<std::size_t>::max()))
    throw OverflowError("min_observations overflows size_t");
  return static_cast<std::size_t>(acc);
}

Eigen::MatrixXd GroupFamily::evaluate(
    const std::vector<const std::vector<double>*>& cols) const {
  const std::size_t g = vars.size();
  const Eigen::Index m = cols.empty() ? 0 : static_cast<Eigen::Index>(cols[0]->size());
  int maxdeg = 0;
  for (const auto& mono : monomials)
    for (int e : mono) maxdeg = std::max(maxdeg, e);

  // per-variable power tables of standardized values
  std::vector<Eigen::MatrixXd> powers(g);
  for (std::size_t j = 0; j < g; ++j) {
    powers[j].resize(m, maxdeg + 1);
    const auto& col = *cols[j];
    for (Eigen::Index r = 0; r < m; ++r) {
      double z = transforms[j].apply(col[static_cast<std::size_t>(r)]);
      double acc = 1.0;
      for (int e = 0; e <= maxdeg; ++e) {
        powers[j](r, e) = acc;
        acc *= z;
      }
    }
  }

  Eigen::MatrixXd mono(m, static_cast<Eigen::Index>(monomials.size()));
  for (std::size_t k = 0; k < monomials.size(); ++k) {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(m);
    for (std::size_t j = 0; j < g; ++j) {
      int e = monomials[k][j];
      if (e > 0) v.array() *= powers[j].col(e).array();
    }
    mono.col(static_cast<Eigen::Index>(k)) = v;
  }

  Eigen::MatrixXd coefmat(static_cast<Eigen::Index>(monomials.size()),
                          static_cast<Eigen::Index>(coeffs.size()));
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    coefmat.col(static_cast<Eigen::Index>(k)) = coeffs[k];
  return mono * coefmat;
}

Eigen::MatrixXd GroupFamily::evaluate(const Dataset& data) const {
  std::vector<const std::vector<double>*> cols;
  cols.reserve(vars.size());
  for (const auto& v : vars) cols.push_back(&data.column(v));
  return evaluate(cols);
}

GroupFamily univariate_family(const std::string& var, const Distribution& dist, int p) {
  auto polys = univariate_basis(dist, p);
  GroupFamily fam;
  fam.vars = {var};
  fam.transforms = {polys[0].transform};
  fam.analytic = dist.kind() != Distribution::Kind::empirical;
  for (int k = 0; k <= p; ++k) fam.monomials.push_back({k});
  for (int k = 0; k <= p; ++k) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(p + 1);
    c.head(polys[k].coefficients.size()) = polys[k].coefficients;
    fam.coeffs.push_back(std::move(c));
    fam.degree.push_back(k);
    fam.leading.push_back({k});
  }
  return fam;
}

GroupFamily gram_schmidt_family(const std::vector<std::string>& vars, const Dataset& data,
                                int p, bool require_overdetermined) {
  const std::size_t g = vars.size();
  const std::size_t m = data.rows();
  if (g == 0) throw UsageError("gram_schmidt_family requires at least one variable");

  GroupFamily fam;
  fam.vars = vars;
  fam.monomials = graded_monomials(static_cast<int>(g), p);
  if (require_overdetermined && m <= fam.monomials.size())
    throw InsufficientDataError("group basis over " + std::to_string(g) + " variables at degree " +
                                std::to_string(p) + " needs more than " +
                                std::to_string(fam.monomials.size()) + " rows, got " +
                                std::to_string(m));

  // Standardize each variable by its sample mean and standard deviation.
  // A (near-)constant variable keeps scale 1; its monomials then collapse
  // onto the constant and are dropped below.
  std::vector<const std::vector<double>*> cols(g);
  fam.transforms.resize(g);
  for (std::size_t j = 0; j < g; ++j) {
    cols[j] = &data.column(vars[j]);
    const auto& col = *cols[j];
    double mean = 0.0;
    for (double x : col) {
      if (!std::isfinite(x)) throw NonFiniteInputError("column '" + vars[j] + "' has non-finite values");
      mean += x;
    }
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (double x : col) var += (x - mean) * (x - mean);
    var /= static_cast<double>(m);
    fam.transforms[j].shift = mean;
    fam.transforms[j].scale = var > 1e-28 * (1.0 + mean * mean) ? std::sqrt(var) : 1.0;
  }

  // Monomial value columns (standardized).
  const Eigen::Index em = static_cast<Eigen::Index>(m);
  int maxdeg = p;
  std::vector<Eigen::MatrixXd> powers(g);
  for (std::size_t j = 0; j < g; ++j) {
    powers[j].resize(em, maxdeg + 1);
    for (Eigen::Index r = 0; r < em; ++r) {
      double z = fam.transforms[j].apply((*cols[j])[static_cast<std::size_t>(r)]);
      double acc = 1.0;
      for (int e = 0; e <= maxdeg; ++e) {
        powers[j](r, e) = acc;
        acc *= z;
      }
    }
  }
  const std::size_t nmono = fam.monomials.size();
  Eigen::MatrixXd mono(em, static_cast<Eigen::Index>(nmono));
  for (std::size_t k = 0; k < nmono; ++k) {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(em);
    for (std::size_t j = 0; j < g; ++j) {
      int e = fam.monomials[k][j];
      if (e > 0) v.array() *= powers[j].col(e).array();
    }
    mono.col(static_cast<Eigen::Index>(k)) = v;
  }
  if (!mono.allFinite())
    throw MomentOverflowError("empirical moments non-finite at degree " + std::to_string(p));

  // Modified Gram-Schmidt with one re-orthogonalization pass under
  // <f,g> = (1/m) sum_j f(row_j) g(row_j).
  const double invm = 1.0 / static_cast<double>(m);
  Eigen::MatrixXd q(em, static_cast<Eigen::Index>(nmono));
  std::vector<Eigen::VectorXd> qc;
  for (std::size_t k = 0; k < nmono; ++k) {
    Eigen::VectorXd v = mono.col(static_cast<Eigen::Index>(k));
    Eigen::VectorXd c = Eigen::VectorXd::Unit(static_cast<Eigen::Index>(nmono),
                                              static_cast<Eigen::Index>(k));
    const double pre = std::sqrt(invm * v.squaredNorm());
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t jq = 0; jq < qc.size(); ++jq) {
        double proj = invm * q.col(static_cast<Eigen::Index>(jq)).dot(v);
        v -= proj * q.col(static_cast<Eigen::Index>(jq));
        c -= proj * qc[jq];
      }
    }
    double norm = std::sqrt(invm * v.squaredNorm());
    if (norm < 1e-10 * pre || !(norm > 0.0)) {
      fam.dropped.push_back(fam.monomials[k]);
      continue;
    }
    v /= norm;
    c /= norm;
    if (c[static_cast<Eigen::Index>(k)] < 0) {
      v = -v;
      c = -c;
    }
    q.col(static_cast<Eigen::Index>(qc.size())) = v;
    qc.push_back(c);
    int deg = 0;
    for (int e : fam.monomials[k]) deg += e;
    fam.coeffs.push_back(qc.back());
    fam.degree.push_back(deg);
    fam.leading.push_back(fam.monomials[k]);
  }
  if (fam.coeffs.size() <= 1 && p > 0)
    throw AllMonomialsDegenerateError("all monomials above the constant are degenerate");
  return fam;
}

namespace {

bool tuple_before(const OrthonormalBasis::Term& a, const OrthonormalBasis::Term& b) {
  if (a.total_degree != b.total_degree) return a.total_degree < b.total_degree;
  return std::lexicographical_compare(b.fn.begin(), b.fn.end(), a.fn.begin(), a.fn.end());
}

}  // namespace

OrthonormalBasis OrthonormalBasis::dense(std::vector<GroupFamily> groups, int p) {
  OrthonormalBasis b;
  b.groups_ = std::move(groups);
  std::vector<int> cur(b.groups_.size(), 0);
  auto rec = [&](auto&& self, std::size_t gi, int budget, int deg) -> void {
    if (gi == b.groups_.size()) {
      b.terms_.push_back({cur, deg});
      return;
    }
    const auto& fam = b.groups_[gi];
    for (std::size_t k = 0; k < fam.functions(); ++k) {
      if (fam.degree[k] > budget) break;  // degrees are non-decreasing
      cur[gi] = static_cast<int>(k);
      self(self, gi + 1, budget - fam.degree[k], deg + fam.degree[k]);
    }
    cur[gi] = 0;
  };
  rec(rec, 0, p, 0);
  std::sort(b.terms_.begin(), b.terms_.end(), tuple_before);
  return b;
}

OrthonormalBasis OrthonormalBasis::restricted(std::vector<GroupFamily> groups,
                                              std::vector<std::vector<int>> fn_tuples) {
  OrthonormalBasis b;
  b.groups_ = std::move(groups);
  std::set<std::vector<int>> uniq(fn_tuples.begin(), fn_tuples.end());
  uniq.insert(std::vector<int>(b.groups_.size(), 0));  // constant always present
  for (const auto& t : uniq) {
    int deg = 0;
    for (std::size_t g = 0; g < b.groups_.size(); ++g) deg += b.groups_[g].degree[t[g]];
    b.terms_.push_back({t, deg});
  }
  std::sort(b.terms_.begin(), b.terms_.end(), tuple_before);
  return b;
}

std::vector<std::string> OrthonormalBasis::variables() const {
  std::vector<std::string> out;
  for (const auto& g : groups_)
    for (const auto& v : g.vars) out.push_back(v);
  return out;
}

bool OrthonormalBasis::all_singleton() const {
  for (const auto& g : groups_)
    if (g.vars.size() != 1) return false;
  return true;
}

std::vector<int> OrthonormalBasis::term_variable_degrees(std::size_t t) const {
  std::vector<int> out;
  out.reserve(groups_.size());
  for (std::size_t g = 0; g < groups_.size(); ++g)
    out.push_back(groups_[g].degree[terms_[t].fn[g]]);
  return out;
}

std::vector<std::string> OrthonormalBasis::term_support(std::size_t t) const {
  std::vector<std::string> out;
  for (std::size_t g = 0; g < groups_.size(); ++g)
    if (terms_[t].fn[g] > 0)
      for (const auto& v : groups_[g].vars) out.push_back(v);
  return out;
}

Eigen::MatrixXd OrthonormalBasis::evaluate(const Dataset& data) const {
  const Eigen::Index m = static_cast<Eigen::Index>(data.rows());
  std::vector<Eigen::MatrixXd> vals;
  vals.reserve(groups_.size());
  for (const auto& g : groups_) vals.push_back(g.evaluate(data));

  Eigen::MatrixXd design(m, static_cast<Eigen::Index>(terms_.size()));
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    Eigen::VectorXd col = Eigen::VectorXd::Ones(m);
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      int k = terms_[t].fn[g];
      if (k > 0) col.array() *= vals[g].col(k).array();
    }
    design.col(static_cast<Eigen::Index>(t)) = col;
  }
  return design;
}

OrthonormalBasis tensor_basis(const std::vector<std::string>& vars,
                              const std::vector<Distribution>& dists, int p) {
  if (vars.size() != dists.size())
    throw UsageError("tensor_basis: one distribution per variable required");
  std::vector<GroupFamily> groups;
  groups.reserve(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j)
    groups.push_back(univariate_family(vars[j], dists[j], p));
  return OrthonormalBasis::dense(std::move(groups), p);
}

OrthonormalBasis group_basis(const std::vector<std::string>& vars, const Dataset& data,
                             int p) {
  std::vector<GroupFamily> groups;
  groups.push_back(gram_schmidt_family(vars, data, p, /*require_overdetermined=*/true));
  return OrthonormalBasis::dense(std::move(groups), p);
}

OrthonormalBasis decomposition_basis(const ProcessDag& dag, const Decomposition& dec,
                                     const Dataset& data,
                                     const std::map<std::string, Distribution>& dists,
                                     int p) {
  std::vector<GroupFamily> groups;
  groups.reserve(dec.groups.size());
  for (const auto& g : dec.groups) {
    auto names = dag.to_names(g);
    if (names.size() == 1 && dag.is_source(g.members[0])) {
      auto it = dists.find(names[0]);
      if (it != dists.end()) {
        groups.push_back(univariate_family(names[0], it->second, p));
        continue;
      }
    }
    groups.push_back(gram_schmidt_family(names, data, p));
  }
  return OrthonormalBasis::dense(std::move(groups), p);
}

}  // namespace dagsobol
