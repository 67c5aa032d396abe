#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cfmetrics {

// Weight regime for the closed-form expectations.
//
// kPaperRaw keeps the literal rank weights 1/i^s (they are not probabilities;
// sums built from them reproduce the raw formulas). kNormalized replaces them
// with a coherent probabilistic model: clicks follow the normalized rank
// distribution and an item enters a user's click set with probability
// pi_i = 1 - (1 - p_i)^N after N i.i.d. draws, so overlap counts have an
// exact Poisson-binomial law that simulation can validate.
enum class WeightMode { kPaperRaw, kNormalized };

enum class NeighborVariant { kPaperSum, kExact };

enum class CosineNorm { kL1, kL2 };

struct ExpectationConfig {
  std::size_t item_count = 1;  // M
  std::size_t clicks_a = 1;    // N_A, size budget of user A's click set
  std::size_t clicks_b = 1;    // N_B
  std::size_t user_count = 1;  // W
  double exponent = 1.0;       // s
  WeightMode mode = WeightMode::kNormalized;

  void validate() const;  // throws std::invalid_argument
};

// Two items characterized by the fraction of users clicking each: item A is
// clicked by 1/m of the users, item B by 1/n.
struct ItemPairModel {
  std::uint64_t m = 1;
  std::uint64_t n = 1;
  std::uint64_t user_count = 1;  // W

  void validate() const;
};

// Click weight of the rank-i item: 1/i^s raw, or the normalized pmf.
double click_probability(std::size_t rank, const ExpectationConfig& config);

// Per-item co-occurrence weights q_i for a user pair: squared raw weights in
// kPaperRaw, pi_i^A * pi_i^B inclusion products in kNormalized.
std::vector<double> overlap_weights(const ExpectationConfig& config);

// Elementary symmetric values e_1..e_T of q via the standard DP
//   E[j][t] = E[j-1][t] + q_j * E[j-1][t-1],  E[.][0] = 1,
// in O(|q| * T). e_t equals the sum over all size-t subsets of products of q.
std::vector<double> elementary_symmetric(std::span<const double> q,
                                         std::size_t max_degree);

// Exact distribution of the number of successes among independent Bernoulli
// trials with probabilities q, via the polynomial-product DP over factors
// (1 - q_i) + q_i * x. Entry [t] is P(count = t), t = 0..|q|.
std::vector<double> poisson_binomial_pmf(std::span<const double> q);

struct OverlapDistribution {
  // e_t for t = 1..min(N_A, N_B); index t-1.
  std::vector<double> elementary;
  // Exact overlap-count law over t = 0..M (kNormalized only, else empty).
  std::vector<double> pmf;
};

OverlapDistribution overlap_distribution(const ExpectationConfig& config);

// Expected similarity of a user pair:
//   sum_{t=1..min(N_A,N_B)} e_t(q) * t / union_size.
// union_size is caller-supplied; the formula treats |I_A u I_B| as a fixed
// constant. Throws std::invalid_argument when union_size = 0.
double expected_similarity_user_pair(const ExpectationConfig& config,
                                     std::size_t union_size);

struct OverlapMoments {
  double expected_intersection = 0.0;
  double expected_union = 0.0;
};

// Exact first moments of |intersection| and |union| under the normalized
// inclusion model. Throws std::logic_error in kPaperRaw mode.
OverlapMoments expected_overlap_union(const ExpectationConfig& config);

// Default union size for expected_similarity_user_pair:
// N_A + N_B - round(E|intersection|), with the moment taken from the
// normalized counterpart of the config regardless of its mode.
std::size_t default_union_size(const ExpectationConfig& config);

// Item-pair cosine similarity under the fraction model:
// L1 gives 1/W (independent of the items' popularity), L2 gives
// 1/sqrt(m*n) (grows with popularity).
double expected_item_similarity(const ItemPairModel& model, CosineNorm norm);

// Expected users sharing at least one item with a given user.
//
// kPaperSum: sum_{i=1..M} (W-1) * p_i with p_i per mode; in kNormalized mode
// the probabilities sum to one and the value collapses to W-1.
// kExact: (W-1) * (1 - prod_{i in item_set} (1 - pi_i)) where item_set holds
// the given user's clicked ranks and pi uses the other users' budget N_B;
// this counts distinct co-clicking users instead of summing per-item hits.
double expected_user_neighbors(const ExpectationConfig& config,
                               NeighborVariant variant,
                               std::span<const std::size_t> item_set = {});

// The same sum with its upper index read as the user count W instead of the
// item count M (truncated at M in kNormalized mode, where ranks beyond M have
// no probability). Reported alongside the item-indexed reading because the
// source formula is ambiguous about the index; the item-indexed one is the
// value used everywhere else.
double expected_user_neighbors_user_index_reading(
    const ExpectationConfig& config);

// Expected items sharing at least one user with the rank-i item.
//
// kPaperSum: sum_{j != i} (1/i^s)(1/j^s) = (1/i^s) * (H(M,s) - 1/i^s), the
// raw-weight sum. kExact: sum_{j != i} (1 - (1 - pi_i * pi_j)^W) under the
// normalized inclusion model with per-user budget N_A: the expected count of
// items co-clicked with i by at least one of W users.
double expected_item_neighbors(std::size_t rank,
                               const ExpectationConfig& config,
                               NeighborVariant variant);

// Asymptotic neighborhood-size ratio N(i)/N(j) = j/i at s = 1.
double neighborhood_ratio(std::size_t i, std::size_t j);

}  // namespace cfmetrics
