#include "cfmetrics/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace cfmetrics {

const char* metric_name(Metric metric) {
  switch (metric) {
    case Metric::kJaccard: return "jaccard";
    case Metric::kCosineL1: return "l1";
    case Metric::kCosineL2: return "l2";
  }
  return "?";
}

namespace {

std::size_t intersection_size(std::span<const std::uint32_t> a,
                              std::span<const std::uint32_t> b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

double score_from_counts(Metric metric, std::size_t co, std::size_t size_a,
                         std::size_t size_b) {
  const double fco = static_cast<double>(co);
  const double fa = static_cast<double>(size_a);
  const double fb = static_cast<double>(size_b);
  switch (metric) {
    case Metric::kJaccard:
      return fco / (fa + fb - fco);
    case Metric::kCosineL1:
      return fco / (fa * fb);
    case Metric::kCosineL2:
      return fco / std::sqrt(fa * fb);
  }
  return 0.0;
}

}  // namespace

double jaccard(std::span<const std::uint32_t> a,
               std::span<const std::uint32_t> b) {
  if (a.empty() && b.empty()) return 0.0;
  const std::size_t co = intersection_size(a, b);
  return static_cast<double>(co) /
         static_cast<double>(a.size() + b.size() - co);
}

double cosine_l1(std::span<const std::uint32_t> a,
                 std::span<const std::uint32_t> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("cosine_l1: empty operand");
  }
  return score_from_counts(Metric::kCosineL1, intersection_size(a, b),
                           a.size(), b.size());
}

double cosine_l2(std::span<const std::uint32_t> a,
                 std::span<const std::uint32_t> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("cosine_l2: empty operand");
  }
  return score_from_counts(Metric::kCosineL2, intersection_size(a, b),
                           a.size(), b.size());
}

SimilarityMatrix::SimilarityMatrix(Axis axis, Metric metric, RankMap ranking,
                                   std::size_t population,
                                   std::vector<SimilarityEntry> entries)
    : axis_(axis),
      metric_(metric),
      ranking_(std::move(ranking)),
      population_(population),
      entries_(std::move(entries)) {}

double SimilarityMatrix::score(std::uint32_t rank_a,
                               std::uint32_t rank_b) const {
  if (rank_a == rank_b) return 0.0;
  if (rank_a > rank_b) std::swap(rank_a, rank_b);
  if (rank_b >= population_) return 0.0;
  const SimilarityEntry probe{rank_a, rank_b, 0.0};
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), probe,
      [](const SimilarityEntry& x, const SimilarityEntry& y) {
        if (x.rank_a != y.rank_a) return x.rank_a < y.rank_a;
        return x.rank_b < y.rank_b;
      });
  if (it == entries_.end() || it->rank_a != rank_a || it->rank_b != rank_b) {
    return 0.0;
  }
  return it->score;
}

SimilarityMatrix pairwise_similarity(const InteractionMatrix& matrix,
                                     Axis axis, Metric metric,
                                     std::size_t top_r) {
  RankMap ranking = popularity_ranking(matrix, axis);
  const std::size_t full = ranking.size();
  const std::size_t population = top_r == 0 ? full : std::min(top_r, full);
  const auto rank_of = ranking.inverse();

  const Axis opposite = axis == Axis::kUser ? Axis::kItem : Axis::kUser;
  const std::size_t opposite_count = matrix.axis_count(opposite);

  std::unordered_map<std::uint64_t, std::uint64_t> co;
  co.reserve(1024);
  std::vector<std::uint32_t> touching;
  for (std::uint32_t e = 0; e < opposite_count; ++e) {
    touching.clear();
    for (const std::uint32_t x : matrix.interactions_of(opposite, e)) {
      const std::uint32_t r = rank_of[x];
      if (r < population) touching.push_back(r);
    }
    std::sort(touching.begin(), touching.end());
    for (std::size_t i = 0; i < touching.size(); ++i) {
      const std::uint64_t hi = static_cast<std::uint64_t>(touching[i]) << 32;
      for (std::size_t j = i + 1; j < touching.size(); ++j) {
        ++co[hi | touching[j]];
      }
    }
  }

  std::vector<SimilarityEntry> entries;
  entries.reserve(co.size());
  for (const auto& [key, count] : co) {
    const auto rank_a = static_cast<std::uint32_t>(key >> 32);
    const auto rank_b = static_cast<std::uint32_t>(key & 0xffffffffu);
    entries.push_back(
        {rank_a, rank_b,
         score_from_counts(metric, count, ranking.count_at_rank(rank_a),
                           ranking.count_at_rank(rank_b))});
  }
  std::sort(entries.begin(), entries.end(),
            [](const SimilarityEntry& x, const SimilarityEntry& y) {
              if (x.rank_a != y.rank_a) return x.rank_a < y.rank_a;
              return x.rank_b < y.rank_b;
            });
  return SimilarityMatrix(axis, metric, std::move(ranking), population,
                          std::move(entries));
}

double predict_rating(const SimilarityMatrix& sim,
                      const InteractionMatrix& matrix, std::int64_t user_id,
                      std::int64_t item_id) {
  if (sim.axis() != Axis::kUser) {
    throw std::invalid_argument("predict_rating: needs a user-axis matrix");
  }
  const auto user = matrix.find_user(user_id);
  if (!user) {
    throw std::out_of_range("predict_rating: unknown user id " +
                            std::to_string(user_id));
  }
  const auto item = matrix.find_item(item_id);
  if (!item) {
    throw std::out_of_range("predict_rating: unknown item id " +
                            std::to_string(item_id));
  }
  const auto rank_of = sim.ranking().inverse();
  const std::uint32_t user_rank = rank_of[*user];
  double sum = 0.0;
  std::size_t positive = 0;
  for (const std::uint32_t k : matrix.item_users(*item)) {
    if (k == *user) continue;
    const double s = sim.score(user_rank, rank_of[k]);
    if (s > 0.0) {
      sum += s;
      ++positive;
    }
  }
  return positive == 0 ? 0.0 : sum / static_cast<double>(positive);
}

double HeatmapGrid::cell_mean(std::size_t row, std::size_t col) const {
  if (row > col) std::swap(row, col);
  const std::size_t idx = row * bins + col;
  return cell_pairs[idx] == 0
             ? 0.0
             : cell_score_sum[idx] / static_cast<double>(cell_pairs[idx]);
}

double HeatmapGrid::block_mean(std::size_t lo, std::size_t hi) const {
  double sum = 0.0;
  std::uint64_t pairs = 0;
  for (std::size_t r = lo; r < hi; ++r) {
    for (std::size_t c = r; c < hi; ++c) {
      sum += cell_score_sum[r * bins + c];
      pairs += cell_pairs[r * bins + c];
    }
  }
  return pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
}

HeatmapGrid rank_binned_grid(const SimilarityMatrix& sim, std::size_t bins) {
  const std::size_t population = sim.population();
  if (bins < 1 || bins > population) {
    throw std::out_of_range("rank_binned_grid: bins must be in 1..population");
  }
  HeatmapGrid grid;
  grid.bins = bins;
  grid.population = population;
  grid.cell_score_sum.assign(bins * bins, 0.0);
  grid.cell_pairs.assign(bins * bins, 0);

  auto bin_of = [&](std::uint64_t rank) {
    return static_cast<std::size_t>(rank * bins / population);
  };

  // Total pairs per cell from the bin sizes; present entries add their
  // scores, absent pairs stay as zeros in the sums.
  std::vector<std::uint64_t> bin_size(bins, 0);
  for (std::size_t r = 0; r < population; ++r) ++bin_size[bin_of(r)];
  for (std::size_t b = 0; b < bins; ++b) {
    grid.cell_pairs[b * bins + b] = bin_size[b] * (bin_size[b] - 1) / 2;
    for (std::size_t c = b + 1; c < bins; ++c) {
      grid.cell_pairs[b * bins + c] = bin_size[b] * bin_size[c];
    }
  }
  for (const auto& entry : sim.entries()) {
    grid.cell_score_sum[bin_of(entry.rank_a) * bins + bin_of(entry.rank_b)] +=
        entry.score;
  }
  return grid;
}

NeighborhoodProfile neighborhood_sizes(const InteractionMatrix& matrix,
                                       Axis axis) {
  const RankMap ranking = popularity_ranking(matrix, axis);
  const std::size_t n = ranking.size();
  const Axis opposite = axis == Axis::kUser ? Axis::kItem : Axis::kUser;

  NeighborhoodProfile profile;
  profile.axis = axis;
  profile.neighbor_counts.assign(n, 0);
  profile.copair_counts.assign(n, 0);

  // stamp[y] == x+1 marks y as already counted for entity x.
  std::vector<std::uint32_t> stamp(n, 0);
  const auto rank_of = ranking.inverse();
  for (std::uint32_t x = 0; x < n; ++x) {
    std::uint64_t distinct = 0;
    std::uint64_t copairs = 0;
    for (const std::uint32_t e : matrix.interactions_of(axis, x)) {
      const auto others = matrix.interactions_of(opposite, e);
      copairs += others.size() - 1;  // everyone on e except x itself
      for (const std::uint32_t y : others) {
        if (y != x && stamp[y] != x + 1) {
          stamp[y] = x + 1;
          ++distinct;
        }
      }
    }
    profile.neighbor_counts[rank_of[x]] = distinct;
    profile.copair_counts[rank_of[x]] = copairs;
  }
  return profile;
}

}  // namespace cfmetrics
