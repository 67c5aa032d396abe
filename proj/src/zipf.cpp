#include "cfmetrics/zipf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cfmetrics {

double generalized_harmonic(std::size_t n, double s) {
  if (n == 0) throw std::out_of_range("generalized_harmonic: n must be >= 1");
  double sum = 0.0;
  for (std::size_t j = n; j >= 1; --j) {
    sum += std::pow(static_cast<double>(j), -s);
  }
  return sum;
}

ZipfModel::ZipfModel(double exponent, std::size_t support)
    : s_(exponent), n_(support) {
  if (!(exponent >= 0.0)) {
    throw std::invalid_argument("ZipfModel: exponent must be >= 0");
  }
  if (support < 1) {
    throw std::invalid_argument("ZipfModel: support must be >= 1");
  }
  norm_ = generalized_harmonic(n_, s_);
}

double ZipfModel::pmf(std::size_t k) const {
  if (k < 1 || k > n_) {
    throw std::out_of_range("ZipfModel::pmf: rank " + std::to_string(k) +
                            " outside 1.." + std::to_string(n_));
  }
  return std::pow(static_cast<double>(k), -s_) / norm_;
}

ZipfSampler::ZipfSampler(const ZipfModel& model) : cdf_(model.support()) {
  double acc = 0.0;
  for (std::size_t k = 1; k <= model.support(); ++k) {
    acc += model.pmf(k);
    cdf_[k - 1] = acc;
  }
  cdf_.back() = 1.0;  // guard against accumulated rounding in the last slot
}

std::size_t ZipfSampler::draw(SplitMix64& rng) const {
  const double u = rng.next_double();
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::size_t>(it - cdf_.begin()) + 1;
}

std::vector<std::size_t> zipf_sample(const ZipfModel& model, std::uint64_t seed,
                                     std::size_t count) {
  ZipfSampler sampler(model);
  SplitMix64 rng(seed);
  std::vector<std::size_t> out(count);
  for (auto& r : out) r = sampler.draw(rng);
  return out;
}

namespace {

// Up to the additive constant -T*log(H) the log-likelihood is
//   ll(s) = -s * sum_k w_k log k - T * log H(n, s),   T = sum_k w_k,
// so each evaluation costs one harmonic sum.
struct LogLikelihood {
  double weighted_log_rank;  // sum_k w_k log k
  double total_weight;
  std::size_t n;

  double operator()(double s) const {
    return -s * weighted_log_rank -
           total_weight * std::log(generalized_harmonic(n, s));
  }
};

}  // namespace

double fit_zipf_exponent(std::span<const double> rank_counts) {
  std::size_t nonzero = 0;
  double weighted_log_rank = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < rank_counts.size(); ++k) {
    const double w = rank_counts[k];
    if (w < 0.0) {
      throw std::invalid_argument("fit_zipf_exponent: negative count");
    }
    if (w > 0.0) {
      ++nonzero;
      weighted_log_rank += w * std::log(static_cast<double>(k + 1));
      total += w;
    }
  }
  if (nonzero < 2) {
    throw std::invalid_argument(
        "fit_zipf_exponent: need at least 2 nonzero counts");
  }

  const LogLikelihood ll{weighted_log_rank, total, rank_counts.size()};

  // Golden-section search, one new evaluation per iteration.
  constexpr double kInvPhi = 0.6180339887498949;
  constexpr double kTol = 1e-6;
  double lo = 0.0, hi = 10.0;
  double c = hi - (hi - lo) * kInvPhi;
  double d = lo + (hi - lo) * kInvPhi;
  double fc = ll(c), fd = ll(d);
  while (hi - lo > kTol) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - (hi - lo) * kInvPhi;
      fc = ll(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + (hi - lo) * kInvPhi;
      fd = ll(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace cfmetrics
