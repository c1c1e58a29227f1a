// SPDX-License-Identifier: Apache-2.0
#include "dagsobol/sobol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "dagsobol/errors.hpp"
#include "dagsobol/random.hpp"

namespace dagsobol {

const SobolIndexPair& SobolReport::at(const std::string& input) const {
  for (std::size_t i = 0; i < inputs.size(); ++i)
    if (inputs[i] == input) return index[i];
  throw UnknownNodeError("no index for input '" + input + "'");
}

std::pair<double, double> moments_from_pce(const CoefficientVector& theta) {
  double mean = theta.values.size() > 0 ? theta.values[0] : 0.0;
  double var = theta.values.size() > 1 ? theta.values.tail(theta.values.size() - 1).squaredNorm() : 0.0;
  return {mean, var};
}

SobolReport sobol_from_pce(const CoefficientVector& theta, const OrthonormalBasis& basis,
                           const std::vector<std::string>& inputs) {
  if (static_cast<std::size_t>(theta.values.size()) != basis.size())
    throw UsageError("coefficient vector does not match basis size");

  double variance = 0.0;
  for (std::size_t t = 1; t < basis.size(); ++t)
    variance += theta.values[static_cast<Eigen::Index>(t)] *
                theta.values[static_cast<Eigen::Index>(t)];
  if (!(variance > 0.0)) throw ZeroVarianceError("PCE carries no variance");

  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < inputs.size(); ++i) pos[inputs[i]] = i;

  SobolReport rep;
  rep.inputs = inputs;
  rep.index.assign(inputs.size(), {});
  rep.output_mean = theta.values[0];
  rep.output_variance = variance;

  for (std::size_t t = 1; t < basis.size(); ++t) {
    double w = theta.values[static_cast<Eigen::Index>(t)];
    if (w == 0.0) continue;
    auto support = basis.term_support(t);
    double contrib = w * w / variance;
    if (support.size() == 1) {
      auto it = pos.find(support[0]);
      if (it != pos.end()) rep.index[it->second].first_order += contrib;
    }
    for (const auto& v : support) {
      auto it = pos.find(v);
      if (it != pos.end()) rep.index[it->second].total += contrib;
    }
    ++rep.support_size;
  }
  return rep;
}

SobolReport sobol_pick_freeze(
    const std::function<double(const std::vector<double>&)>& model,
    const std::vector<std::string>& inputs, const std::vector<Distribution>& dists,
    std::size_t n, std::uint64_t seed) {
  const std::size_t d = inputs.size();
  if (dists.size() != d) throw UsageError("one distribution per input required");
  if (n < 2) throw UsageError("pick-freeze needs n >= 2");

  // Row r of A and B comes from an independent counter-based stream, so the
  // sample is reproducible under any evaluation order.
  std::vector<std::vector<double>> a(n, std::vector<double>(d));
  std::vector<std::vector<double>> b(n, std::vector<double>(d));
  for (std::size_t r = 0; r < n; ++r) {
    Rng rng(derive_seed(seed, r));
    for (std::size_t j = 0; j < d; ++j) a[r][j] = dists[j].draw(rng);
    for (std::size_t j = 0; j < d; ++j) b[r][j] = dists[j].draw(rng);
  }

  auto eval = [&](const std::vector<double>& row) {
    double y = model(row);
    if (!std::isfinite(y)) throw EvaluationFailureError("model returned a non-finite value");
    return y;
  };

  std::vector<double> fa(n), fb(n);
  for (std::size_t r = 0; r < n; ++r) fa[r] = eval(a[r]);
  for (std::size_t r = 0; r < n; ++r) fb[r] = eval(b[r]);

  double mean = 0.0;
  for (std::size_t r = 0; r < n; ++r) mean += fa[r] + fb[r];
  mean /= static_cast<double>(2 * n);
  double var = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    var += (fa[r] - mean) * (fa[r] - mean) + (fb[r] - mean) * (fb[r] - mean);
  var /= static_cast<double>(2 * n - 1);
  if (!(var > 0.0)) throw ZeroVarianceError("model output has zero variance");

  SobolReport rep;
  rep.inputs = inputs;
  rep.index.assign(d, {});
  rep.method = "pick_freeze";
  rep.sample_size = n;
  rep.output_mean = mean;
  rep.output_variance = var;
  rep.support_size = 0;

  std::vector<double> row(d);
  for (std::size_t j = 0; j < d; ++j) {
    // A_B^(j): rows of A with column j replaced from B.
    double s_acc = 0.0;   // Saltelli 2010 first-order: (1/n) sum f(B) (f(A_B^j) - f(A))
    double st_acc = 0.0;  // Jansen total: (1/2n) sum (f(A) - f(A_B^j))^2
    for (std::size_t r = 0; r < n; ++r) {
      row = a[r];
      row[j] = b[r][j];
      double fab = eval(row);
      s_acc += fb[r] * (fab - fa[r]);
      st_acc += (fa[r] - fab) * (fa[r] - fab);
    }
    rep.index[j].first_order = s_acc / static_cast<double>(n) / var;
    rep.index[j].total = st_acc / (2.0 * static_cast<double>(n)) / var;
  }
  return rep;
}

std::vector<ParetoRow> pareto_data(const SobolReport& report) {
  std::vector<std::size_t> order(report.inputs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return report.index[a].first_order > report.index[b].first_order;
  });
  double total = 0.0;
  for (const auto& ix : report.index) total += ix.first_order;

  std::vector<ParetoRow> rows;
  rows.reserve(order.size());
  double acc = 0.0;
  for (std::size_t i : order) {
    acc += report.index[i].first_order;
    rows.push_back({report.inputs[i], report.index[i].first_order,
                    total > 0.0 ? acc / total : 0.0});
  }
  return rows;
}

}  // namespace dagsobol
