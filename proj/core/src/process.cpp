// SPDX-License-Identifier: Apache-2.0
#include "dagsobol/process.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dagsobol/errors.hpp"
#include "dagsobol/random.hpp"

namespace dagsobol {

using nlohmann::json;

ProcessSpec::ProcessSpec(std::string name, ProcessDag dag,
                         std::map<std::string, Distribution> input_dists,
                         std::map<std::string, std::string> node_functions,
                         std::map<std::string, double> constants)
    : name_(std::move(name)),
      dag_(std::move(dag)),
      input_dists_(std::move(input_dists)),
      constants_(std::move(constants)) {
  for (const auto& [node, text] : node_functions)
    functions_.emplace(node, Expression::parse(text));

  for (std::size_t v = 0; v < dag_.size(); ++v) {
    const std::string& n = dag_.name(v);
    if (dag_.is_source(v)) {
      if (!input_dists_.count(n))
        throw DataError("source node '" + n + "' has no input distribution");
      if (functions_.count(n))
        throw DataError("source node '" + n + "' must not have a function");
    } else {
      auto it = functions_.find(n);
      if (it == functions_.end())
        throw DataError("node '" + n + "' has no function");
      for (const auto& var : it->second.free_variables()) {
        if (constants_.count(var)) continue;
        if (!dag_.has_node(var) || !dag_.adjacent(dag_.index_of(var), v))
          throw DataError("function of '" + n + "' uses '" + var +
                          "', which is neither a direct predecessor nor a constant");
      }
    }
  }
  for (const auto& [n, d] : input_dists_) {
    (void)d;
    if (!dag_.has_node(n) || !dag_.is_source(dag_.index_of(n)))
      throw DataError("input distribution given for non-source '" + n + "'");
  }
}

const Distribution& ProcessSpec::dist_of(const std::string& source) const {
  auto it = input_dists_.find(source);
  if (it == input_dists_.end()) throw UnknownNodeError("no distribution for '" + source + "'");
  return it->second;
}

std::size_t ProcessSpec::output_node() const {
  NodeSet s = sinks(dag_);
  if (s.members.size() != 1)
    throw DataError("process '" + name_ + "' has " + std::to_string(s.members.size()) +
                    " sink nodes; specify the output explicitly");
  return s.members[0];
}

std::vector<std::string> ProcessSpec::input_names() const {
  return dag_.to_names(sources(dag_));
}

std::vector<Distribution> ProcessSpec::input_distributions() const {
  std::vector<Distribution> out;
  for (const auto& n : input_names()) out.push_back(dist_of(n));
  return out;
}

double ProcessSpec::evaluate_output(const std::vector<double>& source_values) const {
  auto names = input_names();
  if (source_values.size() != names.size())
    throw UsageError("expected " + std::to_string(names.size()) + " source values");
  std::map<std::string, double> values;
  for (std::size_t i = 0; i < names.size(); ++i) values[names[i]] = source_values[i];

  auto resolve = [&](const std::string& var) -> double {
    auto cit = constants_.find(var);
    if (cit != constants_.end()) return cit->second;
    return values.at(var);
  };
  for (std::size_t v : dag_.topological_order()) {
    if (dag_.is_source(v)) continue;
    values[dag_.name(v)] = functions_.at(dag_.name(v)).evaluate_scalar(resolve);
  }
  return values.at(dag_.name(output_node()));
}

Dataset simulate(const ProcessSpec& spec, std::size_t m, std::uint64_t seed) {
  if (m < 1) throw UsageError("simulate requires m >= 1");
  const ProcessDag& dag = spec.dag();

  std::map<std::string, Eigen::ArrayXd> cols;
  // Sample sources: one counter-based stream per row, draws in declaration order.
  std::vector<std::string> source_names;
  for (std::size_t v = 0; v < dag.size(); ++v)
    if (dag.is_source(v)) source_names.push_back(dag.name(v));
  for (const auto& n : source_names) cols[n] = Eigen::ArrayXd(static_cast<Eigen::Index>(m));
  for (std::size_t r = 0; r < m; ++r) {
    Rng rng(derive_seed(seed, r));
    for (const auto& n : source_names)
      cols[n][static_cast<Eigen::Index>(r)] = spec.dist_of(n).draw(rng);
  }

  auto resolve = [&](const std::string& var) -> Eigen::ArrayXd {
    auto cit = spec.constants().find(var);
    if (cit != spec.constants().end())
      return Eigen::ArrayXd::Constant(static_cast<Eigen::Index>(m), cit->second);
    return cols.at(var);
  };
  for (std::size_t v : dag.topological_order()) {
    if (dag.is_source(v)) continue;
    const std::string& n = dag.name(v);
    Eigen::ArrayXd vals = spec.node_functions().at(n).evaluate(m, resolve);
    for (Eigen::Index r = 0; r < vals.size(); ++r)
      if (!std::isfinite(vals[r]))
        throw EvaluationFailureError("node '" + n + "' evaluated to a non-finite value at row " +
                                     std::to_string(r));
    cols[n] = std::move(vals);
  }

  Dataset out;
  for (std::size_t v : dag.topological_order()) {
    const auto& arr = cols.at(dag.name(v));
    out.add_column(dag.name(v), std::vector<double>(arr.data(), arr.data() + arr.size()));
  }
  out.provenance.kind = Dataset::Provenance::Kind::simulated;
  out.provenance.seed = seed;
  return out;
}

// ---------------------------------------------------------------------------
// JSON serialization

std::string ProcessSpec::to_json() const {
  json j;
  j["spec_version"] = 1;
  j["name"] = name_;
  j["nodes"] = dag_.node_names();
  json edges = json::array();
  for (std::size_t v = 0; v < dag_.size(); ++v)
    for (std::size_t c : dag_.children(v))
      edges.push_back({dag_.name(v), dag_.name(c)});
  j["edges"] = edges;
  json inputs = json::object();
  for (const auto& [n, d] : input_dists_) {
    json e;
    switch (d.kind()) {
      case Distribution::Kind::normal:
        e["dist"] = "normal";
        e["params"] = {d.param_a(), d.param_b()};
        break;
      case Distribution::Kind::uniform:
        e["dist"] = "uniform";
        e["params"] = {d.param_a(), d.param_b()};
        break;
      case Distribution::Kind::empirical:
        e["dist"] = "empirical";
        e["params"] = d.sample();
        break;
    }
    inputs[n] = e;
  }
  j["inputs"] = inputs;
  json fns = json::object();
  for (const auto& [n, f] : functions_) fns[n] = f.text();
  j["functions"] = fns;
  j["constants"] = constants_;
  return j.dump(2);
}

ProcessSpec ProcessSpec::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("bad process spec JSON: ") + e.what());
  }
  try {
    if (j.value("spec_version", 0) != 1)
      throw IoError("unsupported spec_version (expected 1)");
    std::vector<std::string> nodes = j.at("nodes").get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& e : j.at("edges"))
      edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    std::map<std::string, Distribution> dists;
    for (const auto& [name, e] : j.at("inputs").items()) {
      std::string kind = e.at("dist").get<std::string>();
      if (kind == "normal") {
        auto p = e.at("params").get<std::vector<double>>();
        if (p.size() != 2) throw IoError("normal distribution needs [mean, stddev]");
        dists.emplace(name, Distribution::normal(p[0], p[1]));
      } else if (kind == "uniform") {
        auto p = e.at("params").get<std::vector<double>>();
        if (p.size() != 2) throw IoError("uniform distribution needs [lower, upper]");
        dists.emplace(name, Distribution::uniform(p[0], p[1]));
      } else if (kind == "empirical") {
        dists.emplace(name, Distribution::empirical(e.at("params").get<std::vector<double>>()));
      } else {
        throw IoError("unknown distribution kind '" + kind + "'");
      }
    }
    std::map<std::string, std::string> fns;
    if (j.contains("functions"))
      for (const auto& [name, f] : j.at("functions").items())
        fns[name] = f.get<std::string>();
    std::map<std::string, double> constants;
    if (j.contains("constants"))
      for (const auto& [name, v] : j.at("constants").items())
        constants[name] = v.get<double>();
    return ProcessSpec(j.value("name", std::string("process")),
                       ProcessDag(std::move(nodes), std::move(edges)), std::move(dists),
                       std::move(fns), std::move(constants));
  } catch (const json::exception& e) {
    throw IoError(std::string("bad process spec JSON: ") + e.what());
  }
}

ProcessSpec ProcessSpec::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return from_json(ss.str());
}

void ProcessSpec::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << to_json() << '\n';
}

// ---------------------------------------------------------------------------
// Builtin processes

ProcessSpec builtin_welding() {
  std::vector<std::string> nodes = {"e",  "g",  "h",  "l",  "t",  "L", "rho",
                                    "Cp", "Ti", "Tf", "H",  "V",  "E"};
  std::vector<std::pair<std::string, std::string>> edges = {
      {"e", "V"},  {"g", "V"},  {"h", "V"},  {"l", "V"},  {"t", "V"},  {"L", "V"},
      {"V", "E"},  {"rho", "E"}, {"Cp", "E"}, {"Ti", "E"}, {"Tf", "E"}, {"H", "E"}};
  // Input table lists (mean, variance) for the Normal marginals.
  auto nv = [](double mean, double variance) {
    return Distribution::normal(mean, std::sqrt(variance));
  };
  std::map<std::string, Distribution> dists = {
      {"h", nv(2.6, 0.5)},   {"g", nv(2.0, 0.1)},   {"t", nv(15.0, 0.6)},
      {"e", nv(11.0, 1.0)},  {"l", nv(8.5, 0.5)},   {"L", nv(500.0, 10.0)},
      {"Cp", nv(500.0, 5.0)}, {"Tf", nv(1628.0, 10.0)}, {"Ti", nv(303.0, 0.3)},
      {"rho", nv(8238.0, 10.0)}, {"H", nv(2270.0, 3.0)}};
  std::map<std::string, std::string> fns = {
      {"V", "L*(0.75*l*h + g*t + 0.5*(l - g)*(t - e))"},
      {"E", "rho*V*(Cp*(Tf - Ti) + H)"}};
  return ProcessSpec("welding", ProcessDag(std::move(nodes), std::move(edges)),
                     std::move(dists), std::move(fns));
}

ProcessSpec builtin_injection_molding() {
  std::vector<std::string> nodes = {"eps",   "Tpol",  "rho",  "Cp",   "Tinj", "Tej",
                                    "Pinj",  "Emelt", "Ecool", "Einj", "Ereset"};
  std::vector<std::pair<std::string, std::string>> edges = {
      {"eps", "Emelt"},  {"Tpol", "Emelt"}, {"rho", "Emelt"}, {"Cp", "Emelt"},
      {"Tinj", "Emelt"}, {"rho", "Ecool"},  {"Cp", "Ecool"},  {"Tinj", "Ecool"},
      {"Tej", "Ecool"},  {"Pinj", "Einj"},  {"Emelt", "Ereset"},
      {"Ecool", "Ereset"}, {"Einj", "Ereset"}};
  std::map<std::string, Distribution> dists = {
      {"Tinj", Distribution::normal(210.0, 3.0)},
      {"Tej", Distribution::normal(35.0, 3.0)},
      {"rho", Distribution::uniform(950.0, 990.0)},
      {"Tpol", Distribution::normal(40.0, 3.0)},
      {"Cp", Distribution::uniform(2250.0, 2260.0)},
      {"eps", Distribution::uniform(0.018, 0.021)},
      {"Pinj", Distribution::normal(90.0, 4.0)}};
  std::map<std::string, std::string> fns = {
      {"Emelt", "(0.5*(rho*Q*Cp*(Tinj - Tpol) + rho*Q*Hf)*(Vpart*(1 + eps/100 + Delta/100)))/Q"},
      {"Ecool", "rho*Vpart*Cp*(Tinj - Tej)/COP"},
      {"Einj", "Pinj*Vpart"},
      {"Ereset", "0.25*(Emelt + Einj + Ecool)"}};
  // Constants reproduce the reference sensitivity profile of this process;
  // Q cancels out of Emelt and Vpart is a common scale, so neither moves the
  // Sobol indices.
  std::map<std::string, double> constants = {
      {"Q", 5e-5}, {"Hf", 0.0}, {"Vpart", 1e-4}, {"Delta", 0.0}, {"COP", 0.7}};
  return ProcessSpec("injection_molding", ProcessDag(std::move(nodes), std::move(edges)),
                     std::move(dists), std::move(fns), std::move(constants));
}

ProcessSpec builtin_process(const std::string& name) {
  if (name == "welding") return builtin_welding();
  if (name == "injection_molding") return builtin_injection_molding();
  throw UsageError("unknown builtin process '" + name +
                   "' (expected 'welding' or 'injection_molding')");
}

}  // namespace dagsobol
