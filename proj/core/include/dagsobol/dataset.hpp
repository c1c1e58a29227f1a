// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace dagsobol {

/// Column-major table of joint observations, indexed by node name.
/// All columns share the same row count.
class Dataset {
 public:
  Dataset() = default;

  void add_column(const std::string& name, std::vector<double> values);
  bool has_column(const std::string& name) const;
  const std::vector<double>& column(const std::string& name) const;  // throws MissingColumnError
  const std::vector<std::string>& column_names() const { return names_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return names_.size(); }

  /// Row-subset copy (used for bootstrap resampling).
  Dataset select_rows(const std::vector<std::size_t>& idx) const;

  struct Provenance {
    enum class Kind { unset, simulated, loaded } kind = Kind::unset;
    std::uint64_t seed = 0;
    std::string path;
  };
  Provenance provenance;

  /// CSV with mandatory header, '.' decimals, round-trip exact formatting.
  static Dataset read_csv(const std::string& path);
  void write_csv(const std::string& path) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<double>> columns_;
  std::size_t rows_ = 0;
};

}  // namespace dagsobol
