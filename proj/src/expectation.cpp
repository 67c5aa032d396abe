#include "cfmetrics/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cfmetrics/zipf.hpp"

namespace cfmetrics {

void ExpectationConfig::validate() const {
  if (item_count < 1) {
    throw std::invalid_argument("ExpectationConfig: item_count must be >= 1");
  }
  if (clicks_a < 1 || clicks_a > item_count) {
    throw std::invalid_argument(
        "ExpectationConfig: clicks_a must be in 1..item_count");
  }
  if (clicks_b < 1 || clicks_b > item_count) {
    throw std::invalid_argument(
        "ExpectationConfig: clicks_b must be in 1..item_count");
  }
  if (user_count < 1) {
    throw std::invalid_argument("ExpectationConfig: user_count must be >= 1");
  }
  if (!(exponent >= 0.0)) {
    throw std::invalid_argument("ExpectationConfig: exponent must be >= 0");
  }
}

void ItemPairModel::validate() const {
  if (m < 1 || n < 1) {
    throw std::invalid_argument("ItemPairModel: m and n must be >= 1");
  }
  if (user_count < 1) {
    throw std::invalid_argument("ItemPairModel: user_count must be >= 1");
  }
}

namespace {

// Inclusion probability of the rank-i item in a click set built from
// `clicks` i.i.d. draws: 1 - (1 - p_i)^clicks.
std::vector<double> inclusion_probabilities(const ZipfModel& model,
                                            std::size_t clicks) {
  std::vector<double> pi(model.support());
  for (std::size_t i = 1; i <= model.support(); ++i) {
    pi[i - 1] = 1.0 - std::pow(1.0 - model.pmf(i),
                               static_cast<double>(clicks));
  }
  return pi;
}

}  // namespace

double click_probability(std::size_t rank, const ExpectationConfig& config) {
  config.validate();
  if (rank < 1 || rank > config.item_count) {
    throw std::out_of_range("click_probability: rank " + std::to_string(rank) +
                            " outside 1.." + std::to_string(config.item_count));
  }
  if (config.mode == WeightMode::kPaperRaw) {
    return std::pow(static_cast<double>(rank), -config.exponent);
  }
  return ZipfModel(config.exponent, config.item_count).pmf(rank);
}

std::vector<double> overlap_weights(const ExpectationConfig& config) {
  config.validate();
  const std::size_t m = config.item_count;
  std::vector<double> q(m);
  if (config.mode == WeightMode::kPaperRaw) {
    for (std::size_t i = 1; i <= m; ++i) {
      q[i - 1] = std::pow(static_cast<double>(i), -2.0 * config.exponent);
    }
  } else {
    const ZipfModel model(config.exponent, m);
    const auto pi_a = inclusion_probabilities(model, config.clicks_a);
    const auto pi_b = inclusion_probabilities(model, config.clicks_b);
    for (std::size_t i = 0; i < m; ++i) q[i] = pi_a[i] * pi_b[i];
  }
  return q;
}

std::vector<double> elementary_symmetric(std::span<const double> q,
                                         std::size_t max_degree) {
  if (max_degree > q.size()) {
    throw std::out_of_range("elementary_symmetric: degree exceeds |q|");
  }
  // e[t] after processing j items holds e_t of the prefix; updating t
  // downwards reuses the previous row in place.
  std::vector<double> e(max_degree + 1, 0.0);
  e[0] = 1.0;
  std::size_t seen = 0;
  for (const double qj : q) {
    ++seen;
    const std::size_t top = std::min(seen, max_degree);
    for (std::size_t t = top; t >= 1; --t) {
      e[t] += qj * e[t - 1];
    }
  }
  return {e.begin() + 1, e.end()};
}

std::vector<double> poisson_binomial_pmf(std::span<const double> q) {
  for (const double qi : q) {
    if (!(qi >= 0.0 && qi <= 1.0)) {
      throw std::invalid_argument(
          "poisson_binomial_pmf: probabilities must lie in [0, 1]");
    }
  }
  std::vector<double> pmf(q.size() + 1, 0.0);
  pmf[0] = 1.0;
  std::size_t seen = 0;
  for (const double qi : q) {
    ++seen;
    pmf[seen] = pmf[seen - 1] * qi;
    for (std::size_t t = seen - 1; t >= 1; --t) {
      pmf[t] = pmf[t] * (1.0 - qi) + pmf[t - 1] * qi;
    }
    pmf[0] *= (1.0 - qi);
  }
  return pmf;
}

OverlapDistribution overlap_distribution(const ExpectationConfig& config) {
  const auto q = overlap_weights(config);
  const std::size_t degree = std::min(config.clicks_a, config.clicks_b);
  OverlapDistribution dist;
  dist.elementary = elementary_symmetric(q, degree);
  if (config.mode == WeightMode::kNormalized) {
    // Full support 0..M: under independent inclusions the overlap count is
    // not capped by the click budgets, and only the untruncated law sums to
    // one and matches simulated histograms.
    dist.pmf = poisson_binomial_pmf(q);
  }
  return dist;
}

double expected_similarity_user_pair(const ExpectationConfig& config,
                                     std::size_t union_size) {
  if (union_size == 0) {
    throw std::invalid_argument(
        "expected_similarity_user_pair: union_size must be >= 1");
  }
  const auto q = overlap_weights(config);
  const std::size_t degree = std::min(config.clicks_a, config.clicks_b);
  const auto e = elementary_symmetric(q, degree);
  double sum = 0.0;
  for (std::size_t t = degree; t >= 1; --t) {
    sum += e[t - 1] * static_cast<double>(t);
  }
  return sum / static_cast<double>(union_size);
}

OverlapMoments expected_overlap_union(const ExpectationConfig& config) {
  config.validate();
  if (config.mode != WeightMode::kNormalized) {
    throw std::logic_error(
        "expected_overlap_union: defined only in normalized mode");
  }
  const ZipfModel model(config.exponent, config.item_count);
  const auto pi_a = inclusion_probabilities(model, config.clicks_a);
  const auto pi_b = inclusion_probabilities(model, config.clicks_b);
  OverlapMoments moments;
  for (std::size_t i = config.item_count; i >= 1; --i) {
    const double q = pi_a[i - 1] * pi_b[i - 1];
    moments.expected_intersection += q;
    moments.expected_union += pi_a[i - 1] + pi_b[i - 1] - q;
  }
  return moments;
}

std::size_t default_union_size(const ExpectationConfig& config) {
  ExpectationConfig normalized = config;
  normalized.mode = WeightMode::kNormalized;
  const double overlap =
      expected_overlap_union(normalized).expected_intersection;
  const auto total =
      static_cast<long long>(config.clicks_a + config.clicks_b) -
      std::llround(overlap);
  return total < 1 ? 1 : static_cast<std::size_t>(total);
}

double expected_item_similarity(const ItemPairModel& model, CosineNorm norm) {
  model.validate();
  if (norm == CosineNorm::kL1) {
    return 1.0 / static_cast<double>(model.user_count);
  }
  return 1.0 / std::sqrt(static_cast<double>(model.m) *
                         static_cast<double>(model.n));
}

double expected_user_neighbors(const ExpectationConfig& config,
                               NeighborVariant variant,
                               std::span<const std::size_t> item_set) {
  config.validate();
  const double others = static_cast<double>(config.user_count - 1);
  if (variant == NeighborVariant::kPaperSum) {
    double sum = 0.0;
    if (config.mode == WeightMode::kPaperRaw) {
      sum = generalized_harmonic(config.item_count, config.exponent);
    } else {
      const ZipfModel model(config.exponent, config.item_count);
      for (std::size_t i = config.item_count; i >= 1; --i) {
        sum += model.pmf(i);
      }
    }
    return others * sum;
  }
  if (item_set.empty()) {
    throw std::invalid_argument(
        "expected_user_neighbors: exact variant requires the user's item set");
  }
  const ZipfModel model(config.exponent, config.item_count);
  double miss_all = 1.0;  // P(another user shares none of the given items)
  for (const std::size_t rank : item_set) {
    const double pi = 1.0 - std::pow(1.0 - model.pmf(rank),
                                     static_cast<double>(config.clicks_b));
    miss_all *= 1.0 - pi;
  }
  return others * (1.0 - miss_all);
}

double expected_user_neighbors_user_index_reading(
    const ExpectationConfig& config) {
  config.validate();
  const double others = static_cast<double>(config.user_count - 1);
  double sum = 0.0;
  if (config.mode == WeightMode::kPaperRaw) {
    sum = generalized_harmonic(config.user_count, config.exponent);
  } else {
    const std::size_t upper = std::min(config.user_count, config.item_count);
    const ZipfModel model(config.exponent, config.item_count);
    for (std::size_t i = upper; i >= 1; --i) sum += model.pmf(i);
  }
  return others * sum;
}

double expected_item_neighbors(std::size_t rank,
                               const ExpectationConfig& config,
                               NeighborVariant variant) {
  config.validate();
  if (rank < 1 || rank > config.item_count) {
    throw std::out_of_range("expected_item_neighbors: rank out of range");
  }
  if (variant == NeighborVariant::kPaperSum) {
    const double wi = std::pow(static_cast<double>(rank), -config.exponent);
    return wi * (generalized_harmonic(config.item_count, config.exponent) - wi);
  }
  const ZipfModel model(config.exponent, config.item_count);
  const auto pi = inclusion_probabilities(model, config.clicks_a);
  const double pi_i = pi[rank - 1];
  const double users = static_cast<double>(config.user_count);
  double sum = 0.0;
  for (std::size_t j = config.item_count; j >= 1; --j) {
    if (j == rank) continue;
    sum += 1.0 - std::pow(1.0 - pi_i * pi[j - 1], users);
  }
  return sum;
}

double neighborhood_ratio(std::size_t i, std::size_t j) {
  if (i < 1 || j < 1) {
    throw std::out_of_range("neighborhood_ratio: ranks must be >= 1");
  }
  return static_cast<double>(j) / static_cast<double>(i);
}

}  // namespace cfmetrics
