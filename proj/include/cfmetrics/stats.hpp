#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace cfmetrics {

// z for a two-sided 99% normal interval.
inline constexpr double kZ99 = 2.5758293035489004;

// Welford accumulator with a parallel-merge rule; merging partitions in a
// fixed order reproduces the single-pass result exactly.
class RunningStats {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningStats& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double delta = other.mean_ - mean_;
    mean_ += delta * nb / (na + nb);
    m2_ += other.m2_ + delta * delta * na * nb / (na + nb);
    count_ += other.count_;
  }

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double sample_variance() const {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }
  double stderr_of_mean() const {
    return count_ > 0
               ? std::sqrt(sample_variance() / static_cast<double>(count_))
               : 0.0;
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LinearFit linear_fit(std::span<const double> x,
                            std::span<const double> y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  LinearFit fit;
  fit.slope = denom != 0.0 ? (dn * sxy - sx * sy) / denom : 0.0;
  fit.intercept = (sy - fit.slope * sx) / dn;
  return fit;
}

// Least-squares slope of log(value) against log(rank) over ranks 1..n,
// skipping zero values (they have no logarithm and carry no signal here).
double log_log_slope(std::span<const double> values_by_rank);

// Neumaier-compensated sum; used where a plain accumulation would itself
// contribute more error than the quantity under test.
double compensated_sum(std::span<const double> values);

}  // namespace cfmetrics
