// SPDX-License-Identifier: Apache-2.0
#include "dagsobol/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dagsobol/errors.hpp"

namespace dagsobol {

using nlohmann::json;

std::string report_to_json(const SobolReport& report, const ReportMeta& meta) {
  json j;
  j["report_version"] = 1;
  j["engine"] = meta.engine;
  j["process"] = meta.process;
  j["m"] = report.sample_size;
  j["degrees"] = meta.degrees;
  j["gamma"] = meta.gamma;
  j["seed"] = meta.seed;
  j["replications"] = report.replications;
  j["failures"] = report.failures;
  j["method"] = report.method;
  j["output_mean"] = report.output_mean;
  j["output_variance"] = report.output_variance;
  j["support_size"] = report.support_size;
  j["constraint_met"] = report.constraint_met;
  j["zero_variance"] = report.zero_variance;
  j["constants"] = meta.constants;
  json inputs = json::array();
  for (std::size_t i = 0; i < report.inputs.size(); ++i) {
    json e;
    e["name"] = report.inputs[i];
    e["first_order"] = report.index[i].first_order;
    e["total"] = report.index[i].total;
    if (report.replications > 1) {
      e["first_order_se"] = report.index[i].first_order_se;
      e["total_se"] = report.index[i].total_se;
    }
    inputs.push_back(e);
  }
  j["inputs"] = inputs;
  return j.dump(2);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  if (!content.empty() && content.back() != '\n') f << '\n';
  if (!f) throw IoError("write failed for '" + path + "'");
}

void write_report_json(const std::string& path, const SobolReport& report,
                       const ReportMeta& meta) {
  write_text_file(path, report_to_json(report, meta));
}

std::string pareto_to_csv(const SobolReport& report) {
  auto rows = pareto_data(report);
  std::ostringstream out;
  out << "input,first_order,cumulative_share\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", r.first_order);
    out << r.input << ',' << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.cumulative_share);
    out << buf << '\n';
  }
  return out.str();
}

std::string pareto_to_svg(const SobolReport& report, const std::string& title) {
  auto rows = pareto_data(report);
  const int width = 640, height = 420;
  const int ml = 60, mr = 30, mt = 40, mb = 70;
  const double pw = width - ml - mr, ph = height - mt - mb;
  double maxv = 0.0;
  for (const auto& r : rows) maxv = std::max(maxv, r.first_order);
  if (maxv <= 0) maxv = 1.0;

  std::ostringstream s;
  s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
    << "' viewBox='0 0 " << width << ' ' << height << "'>\n";
  s << "<rect width='100%' height='100%' fill='white'/>\n";
  s << "<text x='" << width / 2 << "' y='22' text-anchor='middle' font-size='15'>" << title
    << "</text>\n";
  // axes
  s << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << mt + ph
    << "' stroke='black'/>\n";
  s << "<line x1='" << ml << "' y1='" << mt + ph << "' x2='" << ml + pw << "' y2='" << mt + ph
    << "' stroke='black'/>\n";
  const std::size_t n = rows.size();
  double band = n ? pw / static_cast<double>(n) : pw;
  std::ostringstream line;
  for (std::size_t i = 0; i < n; ++i) {
    double x = ml + band * (static_cast<double>(i) + 0.15);
    double bw = band * 0.7;
    double bh = ph * rows[i].first_order / maxv;
    s << "<rect x='" << x << "' y='" << mt + ph - bh << "' width='" << bw << "' height='" << bh
      << "' fill='#4878a8'/>\n";
    double cx = ml + band * (static_cast<double>(i) + 0.5);
    double cy = mt + ph * (1.0 - rows[i].cumulative_share);
    line << (i ? " L" : "M") << cx << ' ' << cy;
    s << "<circle cx='" << cx << "' cy='" << cy << "' r='3' fill='#b85c38'/>\n";
    s << "<text x='" << cx << "' y='" << mt + ph + 16
      << "' text-anchor='middle' font-size='11'>" << rows[i].input << "</text>\n";
  }
  s << "<path d='" << line.str() << "' fill='none' stroke='#b85c38' stroke-width='1.5'/>\n";
  // y ticks at 0, max/2, max
  char buf[32];
  for (int k = 0; k <= 2; ++k) {
    double v = maxv * k / 2.0;
    double yy = mt + ph * (1.0 - static_cast<double>(k) / 2.0);
    std::snprintf(buf, sizeof buf, "%.3g", v);
    s << "<text x='" << ml - 6 << "' y='" << yy + 4 << "' text-anchor='end' font-size='11'>"
      << buf << "</text>\n";
  }
  s << "<text x='" << width / 2 << "' y='" << height - 14
    << "' text-anchor='middle' font-size='12'>inputs (descending first-order index; line = "
       "cumulative share)</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace dagsobol
