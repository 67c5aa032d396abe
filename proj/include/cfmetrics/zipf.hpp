#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cfmetrics/rng.hpp"

namespace cfmetrics {

// Generalized harmonic number H(n, s) = sum_{j=1..n} j^{-s}, accumulated from
// the smallest terms up to limit rounding error. Throws std::out_of_range for
// n = 0.
double generalized_harmonic(std::size_t n, double s);

// Discrete rank distribution p(k) = k^{-s} / H(n, s) over ranks 1..n.
// s = 0 degenerates to the uniform distribution.
class ZipfModel {
 public:
  ZipfModel(double exponent, std::size_t support);

  double exponent() const { return s_; }
  std::size_t support() const { return n_; }

  // Probability of rank k (1-based). Throws std::out_of_range outside 1..n.
  double pmf(std::size_t k) const;

 private:
  double s_;
  std::size_t n_;
  double norm_;  // H(n, s)
};

// Inverse-CDF sampler over a precomputed cumulative table, O(log n) per draw.
// The table is immutable after construction and safe to share across threads;
// all randomness comes from the caller's generator.
class ZipfSampler {
 public:
  explicit ZipfSampler(const ZipfModel& model);

  // One draw, returning a rank in 1..n.
  std::size_t draw(SplitMix64& rng) const;

 private:
  std::vector<double> cdf_;
};

// `count` i.i.d. draws from the model; identical output for identical seeds.
std::vector<std::size_t> zipf_sample(const ZipfModel& model, std::uint64_t seed,
                                     std::size_t count);

// Maximum-likelihood exponent for rank-ordered counts under the discrete
// model above, located by golden-section search on s in [0, 10] (the
// log-likelihood is unimodal in s). Counts may be fractional weights.
// Requires at least two nonzero counts; throws std::invalid_argument
// otherwise.
double fit_zipf_exponent(std::span<const double> rank_counts);

}  // namespace cfmetrics
