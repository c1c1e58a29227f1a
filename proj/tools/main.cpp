// SPDX-License-Identifier: Apache-2.0
//
// dagsobol: estimate first-order and total Sobol indices of a DAG-structured
// stochastic process from observations, via naive PCE, network PCE, or the
// sparse network PCE, with a Monte Carlo pick-freeze reference.

#include <CLI11.hpp>
#include <Eigen/Core>
#include <cstdlib>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "dagsobol/dataset.hpp"
#include "dagsobol/engine.hpp"
#include "dagsobol/errors.hpp"
#include "dagsobol/process.hpp"
#include "dagsobol/report.hpp"

namespace ds = dagsobol;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::string builtin;
  std::string spec_path;
  std::string data_path;
  std::size_t m = 0;
  std::vector<std::string> engines;
  int p = 0;
  std::vector<std::string> p_levels;
  double gamma = 0.001;
  int reps = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::string pareto;
  std::size_t reference_n = 100000;
  std::vector<std::size_t> sizes;
  std::string report_path;
};

ds::ProcessSpec load_process(const CommonOpts& o) {
  if (!o.builtin.empty() && !o.spec_path.empty())
    throw ds::UsageError("give either --builtin or --spec, not both");
  if (!o.builtin.empty()) return ds::builtin_process(o.builtin);
  if (!o.spec_path.empty()) return ds::ProcessSpec::load(o.spec_path);
  throw ds::UsageError("a process is required: --builtin <name> or --spec <path>");
}

int default_degree(const ds::ProcessSpec& spec) {
  return spec.name() == "injection_molding" ? 4 : 3;
}

ds::EngineConfig make_engine_config(const CommonOpts& o, const ds::ProcessSpec& spec) {
  ds::EngineConfig cfg;
  int p = o.p > 0 ? o.p : default_degree(spec);
  cfg.degrees = {p};
  for (const auto& s : o.p_levels) {
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ds::UsageError("--p-level expects l=k, got '" + s + "'");
    int level = std::stoi(s.substr(0, eq));
    int k = std::stoi(s.substr(eq + 1));
    if (level < 1 || k < 1) throw ds::UsageError("--p-level indices and orders start at 1");
    if (cfg.degrees.size() < static_cast<std::size_t>(level))
      cfg.degrees.resize(static_cast<std::size_t>(level), p);
    cfg.degrees[static_cast<std::size_t>(level) - 1] = k;
  }
  cfg.fit.gamma = o.gamma;
  cfg.seed = o.seed;
  return cfg;
}

ds::EngineResult run_engine(const std::string& engine, const ds::ProcessSpec& spec,
                            const ds::Dataset& data, const ds::EngineConfig& cfg) {
  const auto& dag = spec.dag();
  std::string output = dag.name(spec.output_node());
  std::map<std::string, ds::Distribution> dists = spec.input_dists();
  if (engine == "naive") return ds::fit_naive(dag, output, data, dists, cfg);
  if (engine == "network") return ds::fit_network(dag, output, data, dists, cfg);
  if (engine == "sn") return ds::fit_sparse_network(dag, output, data, dists, cfg);
  throw ds::UsageError("unknown engine '" + engine + "' (expected naive|network|sn)");
}

void emit_pareto(const std::string& path, const ds::SobolReport& report,
                 const std::string& title) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".svg")
    ds::write_text_file(path, ds::pareto_to_svg(report, title));
  else
    ds::write_text_file(path, ds::pareto_to_csv(report));
}

int cmd_simulate(const CommonOpts& o) {
  ds::ProcessSpec spec = load_process(o);
  if (o.m < 1) throw ds::UsageError("--m must be at least 1");
  ds::Dataset data = ds::simulate(spec, o.m, o.seed);
  if (o.out.empty()) throw ds::UsageError("simulate requires --out <csv>");
  data.write_csv(o.out);
  std::cout << "wrote " << data.rows() << " rows x " << data.cols() << " columns to " << o.out
            << "\n";
  return 0;
}

int cmd_fit(const CommonOpts& o) {
  ds::ProcessSpec spec = load_process(o);
  if (o.engines.size() != 1) throw ds::UsageError("fit requires exactly one --engine");
  const std::string engine = o.engines[0];
  if (!o.data_path.empty() && o.m > 0)
    throw ds::UsageError("give either --data or --m, not both");
  if (o.data_path.empty() && o.m == 0)
    throw ds::UsageError("a data source is required: --data <csv> or --m <rows>");
  ds::EngineConfig cfg = make_engine_config(o, spec);

  ds::SobolReport report;
  if (o.reps > 1) {
    std::function<ds::Dataset(std::uint64_t)> make_data;
    if (!o.data_path.empty()) {
      auto loaded = std::make_shared<ds::Dataset>(ds::Dataset::read_csv(o.data_path));
      make_data = [loaded](std::uint64_t seed) {
        ds::Rng rng(seed);
        std::vector<std::size_t> idx(loaded->rows());
        for (auto& i : idx) i = static_cast<std::size_t>(rng.index(loaded->rows()));
        return loaded->select_rows(idx);
      };
    } else {
      std::size_t m = o.m;
      make_data = [&spec, m](std::uint64_t seed) { return ds::simulate(spec, m, seed); };
    }
    report = ds::replicate(
        make_data,
        [&](const ds::Dataset& data, std::uint64_t seed) {
          ds::EngineConfig c = cfg;
          c.seed = seed;
          return run_engine(engine, spec, data, c).report;
        },
        o.reps, o.seed);
  } else {
    ds::Dataset data = o.data_path.empty() ? ds::simulate(spec, o.m, o.seed)
                                           : ds::Dataset::read_csv(o.data_path);
    report = run_engine(engine, spec, data, cfg).report;
  }

  ds::ReportMeta meta;
  meta.engine = engine;
  meta.process = spec.name();
  meta.degrees = cfg.degrees;
  meta.gamma = cfg.fit.gamma;
  meta.seed = o.seed;
  meta.constants = spec.constants();
  std::string doc = ds::report_to_json(report, meta);
  if (o.out.empty())
    std::cout << doc << "\n";
  else
    ds::write_text_file(o.out, doc);
  if (!o.pareto.empty())
    emit_pareto(o.pareto, report, spec.name() + " first-order Sobol indices (" + engine + ")");
  return 0;
}

int cmd_compare(const CommonOpts& o) {
  ds::ProcessSpec spec = load_process(o);
  if (o.engines.empty()) throw ds::UsageError("compare requires at least one --engine");
  std::vector<std::size_t> sizes = o.sizes;
  if (sizes.empty() && o.m > 0) sizes.push_back(o.m);
  if (sizes.empty()) throw ds::UsageError("compare requires --m <rows> (repeatable)");
  int reps = o.reps > 1 ? o.reps : 20;

  // Reference indices from a large pick-freeze run on the process itself.
  auto inputs = spec.input_names();
  auto dists = spec.input_distributions();
  ds::SobolReport ref = ds::sobol_pick_freeze(
      [&spec](const std::vector<double>& row) { return spec.evaluate_output(row); }, inputs,
      dists, o.reference_n, ds::derive_seed(o.seed, 0x5ef0));

  std::ostringstream csv;
  csv << "engine,m,reps,failures,mse_first,mse_total,mse_first_of_mean,mse_total_of_mean\n";
  std::cout << "reference: pick-freeze n=" << o.reference_n << "\n";
  for (const auto& engine : o.engines) {
    for (std::size_t m : sizes) {
      ds::EngineConfig cfg = make_engine_config(o, spec);
      std::vector<double> mse_first, mse_total;
      std::vector<double> sum_first(inputs.size(), 0.0), sum_total(inputs.size(), 0.0);
      std::size_t failures = 0;
      std::string failure_reason;
      for (int r = 0; r < reps; ++r) {
        std::uint64_t s = ds::derive_seed(o.seed, 1000 + static_cast<std::uint64_t>(r));
        try {
          ds::Dataset data = ds::simulate(spec, m, s);
          ds::EngineConfig c = cfg;
          c.seed = s;
          ds::SobolReport rep = run_engine(engine, spec, data, c).report;
          double ef = 0.0, et = 0.0;
          for (std::size_t i = 0; i < inputs.size(); ++i) {
            double df = rep.at(inputs[i]).first_order - ref.index[i].first_order;
            double dt = rep.at(inputs[i]).total - ref.index[i].total;
            ef += df * df;
            et += dt * dt;
            sum_first[i] += rep.at(inputs[i]).first_order;
            sum_total[i] += rep.at(inputs[i]).total;
          }
          mse_first.push_back(ef / static_cast<double>(inputs.size()));
          mse_total.push_back(et / static_cast<double>(inputs.size()));
        } catch (const ds::Error& e) {
          ++failures;
          failure_reason = e.what();
        }
      }
      auto mean = [](const std::vector<double>& v) {
        if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
      };
      double mf = mean(mse_first), mt = mean(mse_total);
      double mfm = std::numeric_limits<double>::quiet_NaN();
      double mtm = std::numeric_limits<double>::quiet_NaN();
      if (!mse_first.empty()) {
        double n_ok = static_cast<double>(mse_first.size());
        mfm = 0.0;
        mtm = 0.0;
        for (std::size_t i = 0; i < inputs.size(); ++i) {
          double df = sum_first[i] / n_ok - ref.index[i].first_order;
          double dt = sum_total[i] / n_ok - ref.index[i].total;
          mfm += df * df;
          mtm += dt * dt;
        }
        mfm /= static_cast<double>(inputs.size());
        mtm /= static_cast<double>(inputs.size());
      }
      csv << engine << ',' << m << ',' << reps << ',' << failures << ',' << mf << ',' << mt
          << ',' << mfm << ',' << mtm << '\n';
      std::cout << engine << " m=" << m << " reps=" << reps << " failures=" << failures;
      if (failures == static_cast<std::size_t>(reps))
        std::cout << " (" << failure_reason << ")";
      else
        std::cout << " mse_first=" << mf << " mse_total=" << mt;
      std::cout << "\n";
    }
  }
  if (!o.out.empty()) ds::write_text_file(o.out, csv.str());
  return 0;
}

int cmd_pareto(const CommonOpts& o) {
  if (o.report_path.empty()) throw ds::UsageError("pareto requires --report <fit.json>");
  if (o.out.empty()) throw ds::UsageError("pareto requires --out <path.csv|path.svg>");
  std::ifstream f(o.report_path);
  if (!f) throw ds::IoError("cannot open '" + o.report_path + "'");
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ds::IoError(std::string("bad report JSON: ") + e.what());
  }
  ds::SobolReport report;
  try {
    for (const auto& e : j.at("inputs")) {
      report.inputs.push_back(e.at("name").get<std::string>());
      ds::SobolIndexPair ix;
      ix.first_order = e.at("first_order").get<double>();
      ix.total = e.at("total").get<double>();
      report.index.push_back(ix);
    }
  } catch (const json::exception& e) {
    throw ds::IoError(std::string("bad report JSON: ") + e.what());
  }
  emit_pareto(o.out, report, j.value("process", std::string("process")) +
                                 " first-order Sobol indices");
  std::cout << "wrote " << o.out << "\n";
  return 0;
}

int cmd_minobs(const CommonOpts& o) {
  ds::ProcessSpec spec = load_process(o);
  int p = o.p > 0 ? o.p : default_degree(spec);
  const auto& dag = spec.dag();
  std::string output = dag.name(spec.output_node());
  std::size_t naive = ds::naive_min_observations(dag, output, p);
  std::size_t network = ds::network_min_observations(dag, output, p);
  std::size_t d = ds::network_dimension(dag, output);
  std::size_t nxi = ds::influencing_inputs(dag, dag.index_of(output)).size();
  double lambda = ds::lambda_ratio(dag, output);

  std::cout << "process: " << spec.name() << "  output: " << output << "  p: " << p << "\n";
  std::cout << "engine    min_observations  variables\n";
  std::cout << "naive     " << naive << "  " << nxi << "\n";
  std::cout << "network   " << network << "  " << d << "\n";
  std::cout << "sn        sparse fits admit fewer rows (constraint-driven)\n";
  std::cout << "lambda = " << d << "/" << nxi << " = " << lambda << "\n";
  if (!o.out.empty()) {
    json j;
    j["process"] = spec.name();
    j["output"] = output;
    j["p"] = p;
    j["naive_min_observations"] = naive;
    j["network_min_observations"] = network;
    j["network_dimension"] = d;
    j["inputs"] = nxi;
    j["lambda"] = lambda;
    ds::write_text_file(o.out, j.dump(2));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("DAGSOBOL_THREADS")) {
    int n = std::atoi(threads);
    if (n > 0) Eigen::setNbThreads(n);
  }

  CLI::App app{"Sobol sensitivity analysis of DAG-structured processes"};
  app.require_subcommand(1);
  CommonOpts o;

  auto add_process_opts = [&](CLI::App* cmd) {
    cmd->add_option("--builtin", o.builtin, "builtin process: welding|injection_molding");
    cmd->add_option("--spec", o.spec_path, "process spec JSON path");
  };
  auto add_fit_opts = [&](CLI::App* cmd) {
    cmd->add_option("--engine", o.engines, "estimator: naive|network|sn");
    cmd->add_option("--p", o.p, "highest polynomial order");
    cmd->add_option("--p-level", o.p_levels, "per-level order override, l=k");
    cmd->add_option("--gamma", o.gamma, "sparse goodness-of-fit bound")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--reps", o.reps, "replications");
    cmd->add_option("--seed", o.seed, "random seed");
  };

  CLI::App* sim = app.add_subcommand("simulate", "sample a dataset from a process");
  add_process_opts(sim);
  sim->add_option("--m", o.m, "rows to simulate");
  sim->add_option("--seed", o.seed, "random seed");
  sim->add_option("--out", o.out, "output CSV path");

  CLI::App* fit = app.add_subcommand("fit", "estimate Sobol indices");
  add_process_opts(fit);
  add_fit_opts(fit);
  fit->add_option("--data", o.data_path, "observations CSV");
  fit->add_option("--m", o.m, "simulate this many rows instead of --data");
  fit->add_option("--out", o.out, "report JSON path (default: stdout)");
  fit->add_option("--pareto", o.pareto, "write Pareto chart data (.csv or .svg)");

  CLI::App* cmp = app.add_subcommand("compare", "engine MSE vs a pick-freeze reference");
  add_process_opts(cmp);
  add_fit_opts(cmp);
  cmp->add_option("--m", o.sizes, "sample sizes (repeatable)");
  cmp->add_option("--reference-n", o.reference_n, "pick-freeze reference sample size");
  cmp->add_option("--out", o.out, "CSV output path");

  CLI::App* par = app.add_subcommand("pareto", "rewrite a fit report as Pareto chart data");
  par->add_option("--report", o.report_path, "fit report JSON");
  par->add_option("--out", o.out, "output path (.csv or .svg)");

  CLI::App* mob = app.add_subcommand("minobs", "minimum observation counts per engine");
  add_process_opts(mob);
  mob->add_option("--p", o.p, "highest polynomial order");
  mob->add_option("--out", o.out, "JSON output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(o);
    if (fit->parsed()) return cmd_fit(o);
    if (cmp->parsed()) return cmd_compare(o);
    if (par->parsed()) return cmd_pareto(o);
    if (mob->parsed()) return cmd_minobs(o);
  } catch (const ds::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ds::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ds::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
