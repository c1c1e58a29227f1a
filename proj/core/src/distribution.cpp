// SPDX-License-Identifier: Apache-2.0
#include "dagsobol/distribution.hpp"

#include <cmath>
#include <numeric>

#include "dagsobol/errors.hpp"

namespace dagsobol {

Distribution Distribution::normal(double mean, double stddev) {
  if (!(stddev > 0.0) || !std::isfinite(mean) || !std::isfinite(stddev))
    throw DegenerateDistributionError("normal distribution requires finite mean and stddev > 0");
  Distribution d;
  d.kind_ = Kind::normal;
  d.a_ = mean;
  d.b_ = stddev;
  return d;
}

Distribution Distribution::uniform(double lower, double upper) {
  if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper))
    throw DegenerateDistributionError("uniform distribution requires lower < upper");
  Distribution d;
  d.kind_ = Kind::uniform;
  d.a_ = lower;
  d.b_ = upper;
  return d;
}

Distribution Distribution::empirical(std::vector<double> sample) {
  if (sample.size() < 2)
    throw DegenerateDistributionError("empirical distribution requires at least 2 points");
  double mean = 0.0;
  for (double x : sample) {
    if (!std::isfinite(x)) throw NonFiniteInputError("empirical sample contains non-finite values");
    mean += x;
  }
  mean /= static_cast<double>(sample.size());
  double var = 0.0;
  for (double x : sample) var += (x - mean) * (x - mean);
  var /= static_cast<double>(sample.size());
  if (!(var > 1e-300))
    throw DegenerateDistributionError("empirical sample is degenerate (zero variance)");
  Distribution d;
  d.kind_ = Kind::empirical;
  d.sample_mean_ = mean;
  d.sample_sd_ = std::sqrt(var);
  d.sample_ = std::make_shared<const std::vector<double>>(std::move(sample));
  return d;
}

double Distribution::mean() const {
  switch (kind_) {
    case Kind::normal: return a_;
    case Kind::uniform: return 0.5 * (a_ + b_);
    case Kind::empirical: return sample_mean_;
  }
  return 0.0;
}

double Distribution::stddev() const {
  switch (kind_) {
    case Kind::normal: return b_;
    case Kind::uniform: return (b_ - a_) / std::sqrt(12.0);
    case Kind::empirical: return sample_sd_;
  }
  return 1.0;
}

double Distribution::standardize(double x) const {
  switch (kind_) {
    case Kind::normal: return (x - a_) / b_;
    case Kind::uniform: return (2.0 * x - a_ - b_) / (b_ - a_);
    case Kind::empirical: return (x - sample_mean_) / sample_sd_;
  }
  return x;
}

double Distribution::unstandardize(double z) const {
  switch (kind_) {
    case Kind::normal: return a_ + b_ * z;
    case Kind::uniform: return 0.5 * (a_ + b_) + 0.5 * (b_ - a_) * z;
    case Kind::empirical: return sample_mean_ + sample_sd_ * z;
  }
  return z;
}

double Distribution::draw(Rng& rng) const {
  switch (kind_) {
    case Kind::normal: return rng.normal(a_, b_);
    case Kind::uniform: return rng.uniform(a_, b_);
    case Kind::empirical: {
      const auto& s = *sample_;
      return s[static_cast<std::size_t>(rng.index(s.size()))];
    }
  }
  return 0.0;
}

std::string Distribution::describe() const {
  switch (kind_) {
    case Kind::normal:
      return "normal(" + std::to_string(a_) + ", " + std::to_string(b_) + ")";
    case Kind::uniform:
      return "uniform(" + std::to_string(a_) + ", " + std::to_string(b_) + ")";
    case Kind::empirical:
      return "empirical(n=" + std::to_string(sample_->size()) + ")";
  }
  return "";
}

}  // namespace dagsobol
