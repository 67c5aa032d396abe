#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfmetrics/expectation.hpp"
#include "cfmetrics/interactions.hpp"
#include "cfmetrics/stats.hpp"

namespace cfmetrics {

// How a simulated user's click set is realized.
// kIidDraws: repeated draws from the rank distribution, deduplicated, until
// the set holds min(N, M) distinct items — the idealized fixed-size click
// set. kBernoulliInclusion: item i joins the set independently with
// probability pi_i = 1 - (1 - p_i)^N, the model whose overlap count has the
// exact Poisson-binomial law. Both are first-class so the gap between them
// is itself measurable.
enum class InclusionModel { kIidDraws, kBernoulliInclusion };

const char* inclusion_model_name(InclusionModel model);

struct EstimateReport {
  std::string quantity;
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  double ci_low = 0.0;   // 99% normal interval
  double ci_high = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  static EstimateReport from_stats(const std::string& quantity,
                                   const RunningStats& stats,
                                   std::uint64_t seed);
};

struct UserPairSimConfig {
  ExpectationConfig model;  // mode is ignored; simulation is the normalized model
  InclusionModel inclusion = InclusionModel::kBernoulliInclusion;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct UserPairSimResult {
  EstimateReport jaccard;
  EstimateReport intersection;
  EstimateReport union_size;
  std::vector<std::uint64_t> overlap_histogram;  // index = |intersection|
  InclusionModel inclusion = InclusionModel::kBernoulliInclusion;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

// Realizes both users' click sets per trial and records |intersection|,
// |union| and Jaccard. Identical (config, seed) gives bit-identical results
// for any thread count: every trial owns a derived sub-seed and reduction
// runs in trial order.
UserPairSimResult simulate_user_pair(const UserPairSimConfig& config,
                                     unsigned threads = 0);

struct ItemPairSimResult {
  EstimateReport l1;
  EstimateReport l2;
  std::uint64_t skipped = 0;  // trials where an item drew zero clicks
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

// Per trial each of W users clicks item A with probability 1/m and item B
// with probability 1/n independently; both cosine scores are recorded.
// Trials where either item receives no clicks leave the scores undefined and
// are skipped (counted). Requires m <= W and n <= W.
ItemPairSimResult simulate_item_pair(const ItemPairModel& model,
                                     std::uint64_t trials, std::uint64_t seed,
                                     unsigned threads = 0);

struct PerRankSeries {
  std::vector<double> mean;
  std::vector<double> stderr_of_mean;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
};

struct NeighborhoodSimResult {
  PerRankSeries user_neighbors;   // distinct co-clicking users, by user rank
  PerRankSeries item_neighbors;   // distinct co-clicked items, by item rank
  PerRankSeries user_copairs;     // multiplicity-weighted variants
  PerRankSeries item_copairs;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

// Generates one synthetic matrix per trial and aggregates per-rank
// neighborhood profiles for both axes.
NeighborhoodSimResult simulate_neighborhoods(const GeneratorConfig& generator,
                                             std::uint64_t trials,
                                             std::uint64_t seed,
                                             unsigned threads = 0);

}  // namespace cfmetrics
