// SPDX-License-Identifier: Apache-2.0
#include "dagsobol/engine.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

#include "dagsobol/errors.hpp"
#include "dagsobol/random.hpp"

namespace dagsobol {

int EngineConfig::degree_at(int level) const {
  if (degrees.empty()) throw UsageError("EngineConfig.degrees must not be empty");
  for (int p : degrees)
    if (p < 1) throw UsageError("polynomial orders must be >= 1");
  std::size_t i = static_cast<std::size_t>(level) - 1;
  return i < degrees.size() ? degrees[i] : degrees.back();
}

int EngineConfig::cap() const {
  if (projection_degree_cap > 0) return projection_degree_cap;
  long long prod = 1;
  for (int p : degrees) prod *= std::max(1, p);
  return static_cast<int>(std::min<long long>(prod, 8));
}

Eigen::VectorXd PceModel::evaluate(const Dataset& rows) const {
  return basis.evaluate(rows) * coef.values;
}

namespace {

// Zero out coefficients that are numerical dust relative to the largest one.
std::vector<std::size_t> threshold_support(Eigen::VectorXd& v, double rel = 1e-9) {
  double maxabs = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) maxabs = std::max(maxabs, std::abs(v[i]));
  std::vector<std::size_t> support;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) <= rel * maxabs) v[i] = 0.0;
    if (v[i] != 0.0) support.push_back(static_cast<std::size_t>(i));
  }
  return support;
}

SobolReport zero_variance_report(const std::vector<std::string>& inputs) {
  SobolReport rep;
  rep.inputs = inputs;
  rep.index.assign(inputs.size(), {});
  rep.zero_variance = true;
  return rep;
}

void require_columns(const Dataset& data, const std::vector<std::string>& names,
                     const std::string& what) {
  for (const auto& n : names)
    if (!data.has_column(n))
      throw MissingColumnError(what + " needs column '" + n + "'");
}

double final_variance(const Eigen::VectorXd& theta) {
  return theta.size() > 1 ? theta.tail(theta.size() - 1).squaredNorm() : 0.0;
}

SobolReport finish_report(const PceModel& model, const std::vector<std::string>& inputs,
                          const std::string& method, std::size_t m) {
  SobolReport rep;
  if (final_variance(model.coef.values) > 0.0) {
    rep = sobol_from_pce(model.coef, model.basis, inputs);
  } else {
    rep = zero_variance_report(inputs);
    rep.output_mean = model.coef.values.size() ? model.coef.values[0] : 0.0;
  }
  rep.method = method;
  rep.sample_size = m;
  rep.constraint_met = model.coef.constraint_met;
  return rep;
}

}  // namespace

EngineResult fit_naive(const ProcessDag& dag, const std::string& output,
                       const Dataset& data, const std::map<std::string, Distribution>& dists,
                       const EngineConfig& cfg) {
  const std::size_t y = dag.index_of(output);
  const int p = cfg.degree_at(1);
  auto xi = dag.to_names(influencing_inputs(dag, y));
  if (xi.empty()) throw OutputIsSourceError("output '" + output + "' has no influencing inputs");
  require_columns(data, xi, "naive PCE");
  require_columns(data, {output}, "naive PCE");

  std::vector<Distribution> xi_dists;
  std::vector<GroupFamily> families;
  for (const auto& n : xi) {
    auto it = dists.find(n);
    if (it != dists.end()) {
      families.push_back(univariate_family(n, it->second, p));
    } else {
      families.push_back(gram_schmidt_family({n}, data, p));
    }
  }
  OrthonormalBasis basis = OrthonormalBasis::dense(std::move(families), p);

  const std::size_t m = data.rows();
  if (cfg.fit.mode == FitConfig::Mode::dense && m < basis.size())
    throw UnderdeterminedError("naive PCE over " + std::to_string(xi.size()) +
                                   " inputs at order " + std::to_string(p),
                               basis.size(), m);

  Eigen::MatrixXd design = basis.evaluate(data);
  Eigen::VectorXd targets =
      Eigen::Map<const Eigen::VectorXd>(data.column(output).data(),
                                        static_cast<Eigen::Index>(m));
  CoefficientVector theta = fit(design, targets, cfg.fit);

  EngineResult res;
  res.model.basis = std::move(basis);
  res.model.coef = std::move(theta);
  res.model.inputs = xi;
  res.report = finish_report(res.model, xi, "naive", m);
  return res;
}

// ---------------------------------------------------------------------------
// Network PCE

namespace {

struct FactorExpansion {
  bool identity = false;            // singleton source group: the factor is its own expansion
  std::size_t identity_group = 0;   // next-level group index (identity case)
  OrthonormalBasis basis;           // sub-expansion basis over P(group vars)
  std::vector<std::size_t> sub_groups;            // next-level group indices it covers
  std::map<int, CoefficientVector> coef_by_fn;    // per used factor index
};

Dataset projection_points(const ProcessDag& dag, const NodeSet& vars, const Dataset& data,
                          const std::map<std::string, Distribution>& dists, std::size_t n,
                          std::uint64_t seed) {
  bool all_source_with_dist = true;
  for (std::size_t v : vars.members)
    if (!dag.is_source(v) || !dists.count(dag.name(v))) all_source_with_dist = false;

  Dataset pts;
  if (all_source_with_dist) {
    // Noise-free synthetic draws from the input marginals.
    std::vector<std::string> names = dag.to_names(vars);
    std::vector<Eigen::ArrayXd> cols(names.size(), Eigen::ArrayXd(static_cast<Eigen::Index>(n)));
    for (std::size_t r = 0; r < n; ++r) {
      Rng rng(derive_seed(seed, r));
      for (std::size_t j = 0; j < names.size(); ++j)
        cols[j][static_cast<Eigen::Index>(r)] = dists.at(names[j]).draw(rng);
    }
    for (std::size_t j = 0; j < names.size(); ++j)
      pts.add_column(names[j],
                     std::vector<double>(cols[j].data(), cols[j].data() + cols[j].size()));
    return pts;
  }
  // Bootstrap rows of the observed data: the empirical joint law is the
  // measure the Gram-Schmidt bases are orthonormal against.
  std::vector<std::size_t> idx(n);
  for (std::size_t r = 0; r < n; ++r) {
    Rng rng(derive_seed(seed, r));
    idx[r] = static_cast<std::size_t>(rng.index(data.rows()));
  }
  Dataset sub;
  for (std::size_t v : vars.members) {
    const auto& col = data.column(dag.name(v));
    std::vector<double> vals(n);
    for (std::size_t r = 0; r < n; ++r) vals[r] = col[idx[r]];
    sub.add_column(dag.name(v), std::move(vals));
  }
  return sub;
}

// Least-squares projection of noise-free composite values onto a basis via
// the normal equations (the design is near-orthonormal, so this is well
// conditioned and much faster than a rank-revealing factorization).
Eigen::VectorXd project_onto(const Eigen::MatrixXd& design, const Eigen::VectorXd& values,
                             int level) {
  if (design.rows() < design.cols())
    throw ProjectionRankDeficientError("level-" + std::to_string(level) +
                                       " re-projection has fewer points than basis functions");
  Eigen::MatrixXd gram = design.transpose() * design;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success)
    throw ProjectionRankDeficientError("level-" + std::to_string(level) +
                                       " re-projection design is rank deficient");
  Eigen::VectorXd theta = ldlt.solve(design.transpose() * values);
  double denom = values.squaredNorm();
  double resid = (values - design * theta).squaredNorm();
  if (denom > 0 && resid > 0.5 * denom)
    throw ProjectionRankDeficientError("level-" + std::to_string(level) +
                                       " re-projection failed to represent the expansion");
  if (!theta.allFinite()) {
    // fall back to the rank-revealing route before giving up
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
    theta = cod.solve(values);
    if (!theta.allFinite())
      throw ProjectionRankDeficientError("level-" + std::to_string(level) +
                                         " re-projection is numerically singular");
  }
  return theta;
}

EngineResult fit_network_impl(const ProcessDag& dag, const std::string& output,
                              const Dataset& data,
                              const std::map<std::string, Distribution>& dists,
                              const EngineConfig& cfg, bool sparse) {
  const std::size_t y = dag.index_of(output);
  const int L = iteration_depth(dag, y);
  const std::size_t m = data.rows();
  const int cap = cfg.cap();

  // Every ancestor of the output must be observed.
  std::vector<std::string> needed;
  for (std::size_t v = 0; v < dag.size(); ++v)
    if (v == y || dag.is_ancestor(v, y)) needed.push_back(dag.name(v));
  require_columns(data, needed, "network PCE");

  FitConfig level_fit = cfg.fit;
  level_fit.mode = sparse ? FitConfig::Mode::sparse : FitConfig::Mode::dense;

  // Level 1: expand the output in its direct predecessors.
  NodeSet cur_set = predecessor_power(dag, y, 1);
  Decomposition cur_dec = independent_decomposition(dag, cur_set);
  cur_dec.level = 1;
  OrthonormalBasis cur_basis = decomposition_basis(dag, cur_dec, data, dists, cfg.degree_at(1));
  if (!sparse && m < cur_basis.size())
    throw UnderdeterminedError("network PCE level-1 expansion over " +
                                   std::to_string(cur_set.size()) + " variables at order " +
                                   std::to_string(cfg.degree_at(1)),
                               cur_basis.size(), m);
  Eigen::VectorXd targets = Eigen::Map<const Eigen::VectorXd>(
      data.column(output).data(), static_cast<Eigen::Index>(m));
  CoefficientVector theta = fit(cur_basis.evaluate(data), targets, level_fit);
  bool constraint_met = theta.constraint_met;
  int cur_cap = cfg.degree_at(1);

  for (int level = 1; level < L; ++level) {
    const int p_next = cfg.degree_at(level + 1);
    const int next_cap = std::min(cap, cur_cap * p_next);

    NodeSet next_set = predecessor_operator(dag, cur_set);
    Decomposition next_dec = independent_decomposition(dag, next_set);
    next_dec.level = level + 1;

    // Families for the next level, shared between the factor sub-expansions
    // and the re-projection basis.
    std::vector<GroupFamily> next_families;
    next_families.reserve(next_dec.groups.size());
    for (const auto& g : next_dec.groups) {
      auto names = dag.to_names(g);
      if (names.size() == 1 && dag.is_source(g.members[0]) && dists.count(names[0])) {
        next_families.push_back(univariate_family(names[0], dists.at(names[0]), next_cap));
      } else {
        next_families.push_back(gram_schmidt_family(names, data, next_cap));
      }
    }

    // Which factor functions does the current expansion actually use?
    const auto& groups = cur_basis.groups();
    std::vector<std::set<int>> used(groups.size());
    for (std::size_t t = 0; t < cur_basis.size(); ++t) {
      if (theta.values[static_cast<Eigen::Index>(t)] == 0.0) continue;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        int k = cur_basis.terms()[t].fn[g];
        if (k > 0) used[g].insert(k);
      }
    }

    // Fit one sub-expansion per used factor of every non-source group.
    std::vector<FactorExpansion> factors(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const NodeSet& gset = cur_dec.groups[g];
      if (gset.members.size() == 1 && dag.is_source(gset.members[0])) {
        factors[g].identity = true;
        for (std::size_t h = 0; h < next_dec.groups.size(); ++h)
          if (next_dec.groups[h].members == gset.members) factors[g].identity_group = h;
        continue;
      }
      NodeSet pred = predecessor_operator(dag, gset);
      std::vector<GroupFamily> sub_families;
      for (std::size_t h = 0; h < next_dec.groups.size(); ++h) {
        bool inside = true;
        for (std::size_t v : next_dec.groups[h].members)
          if (!pred.contains(v)) inside = false;
        bool relevant = false;
        for (std::size_t v : next_dec.groups[h].members)
          if (pred.contains(v)) relevant = true;
        if (relevant && !inside)
          throw DataError("decomposition groups straddle a predecessor set");
        if (inside && relevant) {
          factors[g].sub_groups.push_back(h);
          sub_families.push_back(next_families[h]);
        }
      }
      factors[g].basis = OrthonormalBasis::dense(std::move(sub_families), p_next);
      if (used[g].empty()) continue;
      if (!sparse && m < factors[g].basis.size()) {
        std::string names;
        for (const auto& n : dag.to_names(gset)) names += (names.empty() ? "" : ",") + n;
        throw UnderdeterminedError("network PCE factor expansion for group {" + names +
                                       "} over " + std::to_string(pred.size()) +
                                       " predecessors at order " + std::to_string(p_next),
                                   factors[g].basis.size(), m);
      }
      Eigen::MatrixXd sub_design = factors[g].basis.evaluate(data);
      Eigen::MatrixXd fam_values = groups[g].evaluate(data);
      for (int k : used[g]) {
        CoefficientVector c = fit(sub_design, fam_values.col(k), level_fit);
        constraint_met = constraint_met && c.constraint_met;
        threshold_support(c.values);
        c.rebuild_support();
        factors[g].coef_by_fn.emplace(k, std::move(c));
      }
    }

    // Reachable next-level terms: per supported term, combine each factor's
    // sub-expansion support across groups (their next-level groups are
    // disjoint), then keep total degree within the cap.
    std::set<std::vector<int>> candidates;
    const std::size_t n_next_groups = next_dec.groups.size();
    for (std::size_t t = 0; t < cur_basis.size(); ++t) {
      if (theta.values[static_cast<Eigen::Index>(t)] == 0.0) continue;
      std::vector<std::vector<int>> partial{std::vector<int>(n_next_groups, 0)};
      for (std::size_t g = 0; g < groups.size(); ++g) {
        int k = cur_basis.terms()[t].fn[g];
        if (k == 0) continue;
        std::vector<std::vector<int>> expanded;
        if (factors[g].identity) {
          for (auto tup : partial) {
            tup[factors[g].identity_group] = k;
            expanded.push_back(std::move(tup));
          }
        } else {
          const auto& sub = factors[g].coef_by_fn.at(k);
          const auto& sb = factors[g].basis;
          for (std::size_t st = 0; st < sb.size(); ++st) {
            if (sub.values[static_cast<Eigen::Index>(st)] == 0.0) continue;
            for (auto tup : partial) {
              for (std::size_t sg = 0; sg < factors[g].sub_groups.size(); ++sg)
                tup[factors[g].sub_groups[sg]] = sb.terms()[st].fn[sg];
              expanded.push_back(std::move(tup));
            }
          }
        }
        partial = std::move(expanded);
      }
      for (auto& tup : partial) {
        int deg = 0;
        for (std::size_t h = 0; h < n_next_groups; ++h)
          deg += next_families[h].degree[static_cast<std::size_t>(tup[h])];
        if (deg <= next_cap) candidates.insert(std::move(tup));
      }
    }

    OrthonormalBasis next_basis = OrthonormalBasis::restricted(
        next_families, std::vector<std::vector<int>>(candidates.begin(), candidates.end()));

    // Evaluate the substituted expansion at noise-free points and project it
    // onto the next level's orthonormal basis.
    std::size_t n_pts = cfg.projection_sample_size
                            ? std::max(cfg.projection_sample_size, next_basis.size())
                            : 10 * next_basis.size();
    Dataset pts = projection_points(dag, next_set, data, dists, n_pts,
                                    derive_seed(cfg.seed, 0x70726f6aULL + level));

    std::vector<Eigen::MatrixXd> factor_values(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (used[g].empty() && !factors[g].identity) continue;
      if (factors[g].identity) {
        factor_values[g] = next_families[factors[g].identity_group].evaluate(pts);
      } else {
        Eigen::MatrixXd sub_design = factors[g].basis.evaluate(pts);
        int maxk = used[g].empty() ? 0 : *used[g].rbegin();
        factor_values[g].resize(static_cast<Eigen::Index>(n_pts), maxk + 1);
        factor_values[g].col(0).setOnes();
        for (int k : used[g])
          factor_values[g].col(k) = sub_design * factors[g].coef_by_fn.at(k).values;
      }
    }
    Eigen::VectorXd composite = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_pts));
    for (std::size_t t = 0; t < cur_basis.size(); ++t) {
      double w = theta.values[static_cast<Eigen::Index>(t)];
      if (w == 0.0) continue;
      Eigen::VectorXd term = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n_pts), w);
      for (std::size_t g = 0; g < groups.size(); ++g) {
        int k = cur_basis.terms()[t].fn[g];
        if (k > 0) term.array() *= factor_values[g].col(k).array();
      }
      composite += term;
    }

    Eigen::VectorXd next_theta =
        project_onto(next_basis.evaluate(pts), composite, level + 1);
    threshold_support(next_theta);

    cur_set = std::move(next_set);
    cur_dec = std::move(next_dec);
    cur_basis = std::move(next_basis);
    theta.values = std::move(next_theta);
    theta.rebuild_support();
    cur_cap = next_cap;
  }

  auto xi = dag.to_names(influencing_inputs(dag, y));
  EngineResult res;
  res.model.basis = std::move(cur_basis);
  res.model.coef = std::move(theta);
  res.model.coef.constraint_met = constraint_met;
  res.model.inputs = xi;
  res.report = finish_report(res.model, xi, sparse ? "sn" : "network", m);
  return res;
}

}  // namespace

EngineResult fit_network(const ProcessDag& dag, const std::string& output,
                         const Dataset& data, const std::map<std::string, Distribution>& dists,
                         const EngineConfig& cfg) {
  return fit_network_impl(dag, output, data, dists, cfg, /*sparse=*/false);
}

EngineResult fit_sparse_network(const ProcessDag& dag, const std::string& output,
                                const Dataset& data,
                                const std::map<std::string, Distribution>& dists,
                                const EngineConfig& cfg) {
  return fit_network_impl(dag, output, data, dists, cfg, /*sparse=*/true);
}

SobolReport replicate(const std::function<Dataset(std::uint64_t)>& make_data,
                      const std::function<SobolReport(const Dataset&, std::uint64_t)>& run,
                      int reps, std::uint64_t seed) {
  if (reps < 2) throw UsageError("replicate requires reps >= 2");

  SobolReport agg;
  std::vector<std::vector<double>> first, total;
  std::vector<double> means, vars;
  std::size_t successes = 0;

  for (int r = 0; r < reps; ++r) {
    std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(r));
    SobolReport rep;
    try {
      Dataset data = make_data(s);
      rep = run(data, s);
    } catch (const Error&) {
      ++agg.failures;
      continue;
    }
    if (successes == 0) {
      agg.inputs = rep.inputs;
      agg.index.assign(rep.inputs.size(), {});
      agg.method = rep.method;
      agg.sample_size = rep.sample_size;
      first.assign(rep.inputs.size(), {});
      total.assign(rep.inputs.size(), {});
    }
    for (std::size_t i = 0; i < rep.inputs.size(); ++i) {
      first[i].push_back(rep.index[i].first_order);
      total[i].push_back(rep.index[i].total);
    }
    means.push_back(rep.output_mean);
    vars.push_back(rep.output_variance);
    agg.support_size = std::max(agg.support_size, rep.support_size);
    agg.constraint_met = agg.constraint_met && rep.constraint_met;
    agg.zero_variance = agg.zero_variance || rep.zero_variance;
    ++successes;
  }
  if (successes == 0)
    throw DataError("all " + std::to_string(reps) + " replications failed");

  auto mean_se = [&](const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var = xs.size() > 1 ? var / static_cast<double>(xs.size() - 1) : 0.0;
    return std::make_pair(mean, std::sqrt(var / static_cast<double>(xs.size())));
  };
  for (std::size_t i = 0; i < agg.inputs.size(); ++i) {
    auto [fm, fse] = mean_se(first[i]);
    auto [tm, tse] = mean_se(total[i]);
    agg.index[i] = {fm, tm, fse, tse};
  }
  auto [mm, mse_] = mean_se(means);
  auto [vm, vse_] = mean_se(vars);
  (void)mse_;
  (void)vse_;
  agg.output_mean = mm;
  agg.output_variance = vm;
  agg.replications = reps;
  return agg;
}

std::size_t naive_min_observations(const ProcessDag& dag, const std::string& output, int p) {
  auto xi = influencing_inputs(dag, dag.index_of(output));
  if (xi.size() == 0) throw OutputIsSourceError("output '" + output + "' has no influencing inputs");
  return min_observations(xi.size(), p);
}

std::size_t network_dimension(const ProcessDag& dag, const std::string& output) {
  const std::size_t y = dag.index_of(output);
  if (dag.is_source(y)) throw OutputIsSourceError("output '" + output + "' is a source");
  std::size_t d = dag.parents(y).size();
  for (std::size_t v = 0; v < dag.size(); ++v) {
    if (v == y || dag.is_source(v)) continue;
    if (dag.has_path(v, y)) d = std::max(d, dag.parents(v).size());
  }
  return d;
}

std::size_t network_min_observations(const ProcessDag& dag, const std::string& output, int p) {
  return min_observations(network_dimension(dag, output), p);
}

double lambda_ratio(const ProcessDag& dag, const std::string& output) {
  auto xi = influencing_inputs(dag, dag.index_of(output));
  if (xi.size() == 0) throw OutputIsSourceError("output '" + output + "' has no influencing inputs");
  return static_cast<double>(network_dimension(dag, output)) /
         static_cast<double>(xi.size());
}

}  // namespace dagsobol
