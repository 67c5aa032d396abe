#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cfmetrics/interactions.hpp"

namespace cfmetrics {

enum class Metric { kJaccard, kCosineL1, kCosineL2 };

const char* metric_name(Metric metric);

// Set similarities over sorted index sets. jaccard is defined as 0 when both
// sets are empty; the cosine variants require non-empty operands and throw
// std::invalid_argument otherwise.
double jaccard(std::span<const std::uint32_t> a,
               std::span<const std::uint32_t> b);
double cosine_l1(std::span<const std::uint32_t> a,
                 std::span<const std::uint32_t> b);
double cosine_l2(std::span<const std::uint32_t> a,
                 std::span<const std::uint32_t> b);

struct SimilarityEntry {
  std::uint32_t rank_a = 0;  // rank_a < rank_b, both popularity ranks
  std::uint32_t rank_b = 0;
  double score = 0.0;
};

// Pairwise scores over one axis, indexed by popularity rank and stored
// upper-triangular (pairs with empty intersection are absent). `population`
// is the number of leading ranks covered; it is smaller than the axis size
// when a top-R cap was applied.
class SimilarityMatrix {
 public:
  SimilarityMatrix(Axis axis, Metric metric, RankMap ranking,
                   std::size_t population,
                   std::vector<SimilarityEntry> entries);

  Axis axis() const { return axis_; }
  Metric metric() const { return metric_; }
  std::size_t population() const { return population_; }
  const RankMap& ranking() const { return ranking_; }
  const std::vector<SimilarityEntry>& entries() const { return entries_; }

  // Symmetric score lookup; 0 for absent or out-of-population pairs and for
  // the diagonal.
  double score(std::uint32_t rank_a, std::uint32_t rank_b) const;

 private:
  Axis axis_;
  Metric metric_;
  RankMap ranking_;
  std::size_t population_;
  std::vector<SimilarityEntry> entries_;  // sorted by (rank_a, rank_b)
};

// All-pairs scores via inverted-index co-counting: each entity on the
// opposite axis contributes one count to every pair it touches, so the cost
// is the sum of squared opposite-axis degrees instead of population^2 set
// intersections. top_r > 0 restricts to the top_r most popular entities.
SimilarityMatrix pairwise_similarity(const InteractionMatrix& matrix,
                                     Axis axis, Metric metric,
                                     std::size_t top_r = 0);

// Average of the user's positive similarities over the item's raters:
// mean of score(user, k) over users k that clicked the item and have a
// positive similarity with the user; 0 when no such user exists. `sim` must
// be a user-axis matrix; unknown ids throw std::out_of_range.
double predict_rating(const SimilarityMatrix& sim,
                      const InteractionMatrix& matrix, std::int64_t user_id,
                      std::int64_t item_id);

// Rank-percentile similarity grid. Ranks are partitioned into `bins`
// contiguous near-equal blocks; every unordered pair lands in exactly one
// upper-triangular cell, with absent pairs contributing score 0 to the cell
// mean. Cell (0,0) is the most-popular block pair.
struct HeatmapGrid {
  std::size_t bins = 0;
  std::size_t population = 0;
  std::vector<double> cell_score_sum;       // bins*bins row-major, row <= col
  std::vector<std::uint64_t> cell_pairs;    // total pairs per cell

  std::size_t bin_begin(std::size_t b) const {
    return b * population / bins;
  }
  double cell_mean(std::size_t row, std::size_t col) const;
  // Mean over all pairs whose two ranks both fall in bins [lo, hi).
  double block_mean(std::size_t lo, std::size_t hi) const;
};

// Throws std::out_of_range unless 1 <= bins <= population.
HeatmapGrid rank_binned_grid(const SimilarityMatrix& sim, std::size_t bins);

// Per-rank co-interaction profile of one axis.
// neighbor_counts[r]: distinct entities sharing at least one interaction
// with the rank-r entity. copair_counts[r]: the same with multiplicity, one
// count per (shared interaction, other entity) pair; this is the
// per-interaction version that popularity laws are stated for.
struct NeighborhoodProfile {
  Axis axis = Axis::kUser;
  std::vector<std::uint64_t> neighbor_counts;
  std::vector<std::uint64_t> copair_counts;
};

NeighborhoodProfile neighborhood_sizes(const InteractionMatrix& matrix,
                                       Axis axis);

}  // namespace cfmetrics
