#include "cfmetrics/stats.hpp"

#include <vector>

namespace cfmetrics {

double log_log_slope(std::span<const double> values_by_rank) {
  std::vector<double> x, y;
  x.reserve(values_by_rank.size());
  y.reserve(values_by_rank.size());
  for (std::size_t r = 0; r < values_by_rank.size(); ++r) {
    if (values_by_rank[r] > 0.0) {
      x.push_back(std::log(static_cast<double>(r + 1)));
      y.push_back(std::log(values_by_rank[r]));
    }
  }
  return linear_fit(x, y).slope;
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0, comp = 0.0;
  for (const double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace cfmetrics
