// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

RunResult run_cli(const std::string& args) {
  std::string out_file = temp_path("dagsobol_cli_out.txt");
  std::string cmd = std::string(DAGSOBOL_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(out_file);
  std::stringstream ss;
  ss << f.rdbuf();
  r.output = ss.str();
  std::remove(out_file.c_str());
  return r;
}

}  // namespace

TEST_CASE("simulate writes the expected CSV") {
  std::string csv = temp_path("dagsobol_cli_sim.csv");
  auto r = run_cli("simulate --builtin welding --m 100 --seed 7 --out " + csv);
  REQUIRE(r.exit_code == 0);
  std::ifstream f(csv);
  std::string header;
  std::getline(f, header);
  CHECK(header == "e,g,h,l,t,L,rho,Cp,Ti,Tf,H,V,E");
  std::size_t rows = 0;
  for (std::string line; std::getline(f, line);)
    if (!line.empty()) ++rows;
  CHECK(rows == 100);
  std::remove(csv.c_str());
}

TEST_CASE("simulate rejects zero rows with a usage error") {
  auto r = run_cli("simulate --builtin welding --m 0 --seed 7 --out /dev/null");
  CHECK(r.exit_code == 2);
}

TEST_CASE("fit from file equals fit from an in-memory simulation") {
  std::string csv = temp_path("dagsobol_cli_fit.csv");
  std::string ja = temp_path("dagsobol_cli_a.json");
  std::string jb = temp_path("dagsobol_cli_b.json");
  REQUIRE(run_cli("simulate --builtin welding --m 120 --seed 99 --out " + csv).exit_code == 0);
  REQUIRE(run_cli("fit --builtin welding --engine sn --data " + csv + " --seed 99 --out " + ja)
              .exit_code == 0);
  REQUIRE(run_cli("fit --builtin welding --engine sn --m 120 --seed 99 --out " + jb)
              .exit_code == 0);
  std::ifstream fa(ja), fb(jb);
  json a, b;
  fa >> a;
  fb >> b;
  CHECK(a["inputs"] == b["inputs"]);
  CHECK(a["output_variance"] == b["output_variance"]);
  std::remove(csv.c_str());
  std::remove(ja.c_str());
  std::remove(jb.c_str());
}

TEST_CASE("fit report carries the documented fields") {
  auto r = run_cli("fit --builtin injection_molding --engine sn --m 200 --seed 3");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.output);
  CHECK(j["report_version"] == 1);
  CHECK(j["engine"] == "sn");
  CHECK(j["m"] == 200);
  CHECK(j["gamma"] == 0.001);
  CHECK(j["degrees"].is_array());
  CHECK(j["constants"].contains("COP"));
  CHECK(j["support_size"].is_number());
  CHECK(j["inputs"].is_array());
  for (const auto& e : j["inputs"]) {
    CHECK(e["first_order"].is_number());
    CHECK(e["total"].is_number());
    double s = e["first_order"].get<double>();
    double t = e["total"].get<double>();
    CHECK(s >= 0.0);
    CHECK(s <= t + 1e-9);
    CHECK(t <= 1.0 + 1e-9);
  }
}

TEST_CASE("fit on data missing an ancestor column names the column") {
  std::string csv = temp_path("dagsobol_cli_missing.csv");
  std::string full = temp_path("dagsobol_cli_full.csv");
  REQUIRE(run_cli("simulate --builtin welding --m 100 --seed 5 --out " + full).exit_code == 0);
  {
    std::ifstream in(full);
    std::ofstream out(csv);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      // drop the V column (12th of 13)
      std::stringstream ss(line);
      std::string cell;
      std::vector<std::string> cells;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      cells.erase(cells.begin() + 11);
      for (std::size_t i = 0; i < cells.size(); ++i)
        out << cells[i] << (i + 1 < cells.size() ? "," : "");
      out << "\n";
      first = false;
    }
    (void)first;
  }
  auto r = run_cli("fit --builtin welding --engine network --data " + csv);
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("'V'") != std::string::npos);
  std::remove(csv.c_str());
  std::remove(full.c_str());
}

TEST_CASE("minobs prints the dense minimums") {
  auto rw = run_cli("minobs --builtin welding --p 3");
  REQUIRE(rw.exit_code == 0);
  CHECK(rw.output.find("364") != std::string::npos);
  CHECK(rw.output.find("84") != std::string::npos);
  CHECK(rw.output.find("6/11") != std::string::npos);
  auto ri = run_cli("minobs --builtin injection_molding --p 4");
  REQUIRE(ri.exit_code == 0);
  CHECK(ri.output.find("330") != std::string::npos);
  CHECK(ri.output.find("126") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("fit --builtin welding --engine bogus --m 100").exit_code == 2);
  CHECK(run_cli("fit --builtin welding --m 100").exit_code == 2);          // engine missing
  CHECK(run_cli("fit --engine sn --m 100").exit_code == 2);                // process missing
  CHECK(run_cli("compare --builtin welding").exit_code == 2);              // no engines
  CHECK(run_cli("definitely-not-a-command").exit_code == 2);
}

TEST_CASE("numerical failures exit with code 4") {
  std::string csv = temp_path("dagsobol_cli_inf.csv");
  {
    std::ofstream out(csv);
    out << "a,y\n";
    for (int i = 0; i < 20; ++i) out << 0.1 * i << "," << (i == 7 ? "inf" : "1.0") << "\n";
  }
  std::string spec = temp_path("dagsobol_cli_passthrough.json");
  {
    std::ofstream out(spec);
    out << R"({"spec_version":1,"name":"pass","nodes":["a","y"],"edges":[["a","y"]],
               "inputs":{"a":{"dist":"normal","params":[0,1]}},
               "functions":{"y":"a"},"constants":{}})";
  }
  auto r = run_cli("fit --spec " + spec + " --engine naive --p 2 --data " + csv);
  CHECK(r.exit_code == 4);
  std::remove(csv.c_str());
  std::remove(spec.c_str());
}

TEST_CASE("pareto subcommand reorders a report") {
  std::string jfit = temp_path("dagsobol_cli_pfit.json");
  std::string pcsv = temp_path("dagsobol_cli_pareto.csv");
  std::string psvg = temp_path("dagsobol_cli_pareto.svg");
  REQUIRE(run_cli("fit --builtin welding --engine sn --m 100 --seed 12 --out " + jfit)
              .exit_code == 0);
  REQUIRE(run_cli("pareto --report " + jfit + " --out " + pcsv).exit_code == 0);
  std::ifstream f(pcsv);
  std::string header, first;
  std::getline(f, header);
  std::getline(f, first);
  CHECK(header == "input,first_order,cumulative_share");
  CHECK(first.substr(0, 2) == "h,");  // h dominates the welding output
  REQUIRE(run_cli("pareto --report " + jfit + " --out " + psvg).exit_code == 0);
  std::ifstream svg(psvg);
  std::stringstream ss;
  ss << svg.rdbuf();
  CHECK(ss.str().find("<svg") != std::string::npos);
  std::remove(jfit.c_str());
  std::remove(pcsv.c_str());
  std::remove(psvg.c_str());
}

TEST_CASE("replicated fit reports standard errors") {
  auto r = run_cli("fit --builtin welding --engine sn --m 100 --reps 10 --seed 31");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.output);
  CHECK(j["replications"] == 10);
  bool has_se = false;
  for (const auto& e : j["inputs"])
    if (e.contains("first_order_se")) has_se = true;
  CHECK(has_se);
}
