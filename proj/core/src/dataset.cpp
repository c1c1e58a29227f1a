// SPDX-License-Identifier: Apache-2.0
#include "dagsobol/dataset.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dagsobol/errors.hpp"

namespace dagsobol {

void Dataset::add_column(const std::string& name, std::vector<double> values) {
  if (index_.count(name)) throw DataError("duplicate column '" + name + "'");
  if (!names_.empty() && values.size() != rows_)
    throw DataError("column '" + name + "' has " + std::to_string(values.size()) +
                    " rows, expected " + std::to_string(rows_));
  rows_ = values.size();
  index_[name] = names_.size();
  names_.push_back(name);
  columns_.push_back(std::move(values));
}

bool Dataset::has_column(const std::string& name) const { return index_.count(name) != 0; }

const std::vector<double>& Dataset::column(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw MissingColumnError("missing column '" + name + "'");
  return columns_[it->second];
}

Dataset Dataset::select_rows(const std::vector<std::size_t>& idx) const {
  Dataset out;
  for (std::size_t c = 0; c < names_.size(); ++c) {
    std::vector<double> col(idx.size());
    const auto& src = columns_[c];
    for (std::size_t r = 0; r < idx.size(); ++r) col[r] = src[idx[r]];
    out.add_column(names_[c], std::move(col));
  }
  out.provenance = provenance;
  return out;
}

void Dataset::write_csv(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  for (std::size_t c = 0; c < names_.size(); ++c) {
    if (c) f << ',';
    f << names_[c];
  }
  f << '\n';
  char buf[64];
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < names_.size(); ++c) {
      if (c) f << ',';
      // %.17g round-trips doubles exactly
      std::snprintf(buf, sizeof buf, "%.17g", columns_[c][r]);
      f << buf;
    }
    f << '\n';
  }
  if (!f) throw IoError("write failed for '" + path + "'");
}

Dataset Dataset::read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(f, line)) throw IoError("empty CSV '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> names;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
  }
  if (names.empty()) throw IoError("CSV header has no columns: '" + path + "'");

  std::vector<std::vector<double>> cols(names.size());
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = p + line.size();
    for (std::size_t c = 0; c < names.size(); ++c) {
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{})
        throw IoError(path + ":" + std::to_string(lineno) + ": bad number in column " +
                      names[c]);
      cols[c].push_back(v);
      p = next;
      if (c + 1 < names.size()) {
        if (p == end || *p != ',')
          throw IoError(path + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(names.size()) + " fields");
        ++p;
      }
    }
    if (p != end)
      throw IoError(path + ":" + std::to_string(lineno) + ": trailing characters");
  }

  Dataset out;
  for (std::size_t c = 0; c < names.size(); ++c) out.add_column(names[c], std::move(cols[c]));
  out.provenance.kind = Provenance::Kind::loaded;
  out.provenance.path = path;
  return out;
}

}  // namespace dagsobol
