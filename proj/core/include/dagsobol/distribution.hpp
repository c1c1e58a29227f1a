// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dagsobol/random.hpp"

namespace dagsobol {

/// Marginal distribution of a network input. Normal carries (mean, stddev),
/// Uniform carries (lower, upper), Empirical references a sample.
class Distribution {
 public:
  enum class Kind { normal, uniform, empirical };

  static Distribution normal(double mean, double stddev);
  static Distribution uniform(double lower, double upper);
  static Distribution empirical(std::vector<double> sample);

  Kind kind() const { return kind_; }
  double param_a() const { return a_; }  // mean / lower
  double param_b() const { return b_; }  // stddev / upper
  const std::vector<double>& sample() const { return *sample_; }

  double mean() const;
  double stddev() const;

  /// Affine map to the reference variable: Normal -> N(0,1), Uniform -> U(-1,1),
  /// Empirical -> zero mean, unit variance under the sample.
  double standardize(double x) const;
  double unstandardize(double z) const;

  double draw(Rng& rng) const;

  std::string describe() const;

 private:
  Distribution() = default;
  Kind kind_ = Kind::normal;
  double a_ = 0.0;
  double b_ = 1.0;
  // cached sample moments for the empirical kind
  double sample_mean_ = 0.0;
  double sample_sd_ = 1.0;
  std::shared_ptr<const std::vector<double>> sample_;
};

}  // namespace dagsobol
