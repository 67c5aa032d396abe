#pragma once

// Independent brute-force oracles. Everything here recomputes quantities by
// direct enumeration or literal nested loops, deliberately avoiding the
// library's DP and inverted-index code paths.

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "cfmetrics/interactions.hpp"
#include "cfmetrics/similarity.hpp"

namespace testsupport {

// e_t by explicit subset enumeration, O(2^n).
inline std::vector<double> brute_elementary_symmetric(
    std::span<const double> q, std::size_t max_degree) {
  const std::size_t n = q.size();
  std::vector<double> e(max_degree + 1, 0.0);
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    double product = 1.0;
    std::size_t bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1ULL << i)) {
        product *= q[i];
        ++bits;
      }
    }
    if (bits <= max_degree) e[bits] += product;
  }
  return {e.begin() + 1, e.end()};
}

// P(count = t) by subset enumeration over inclusion patterns, O(2^n).
inline std::vector<double> brute_poisson_binomial(std::span<const double> q) {
  const std::size_t n = q.size();
  std::vector<double> pmf(n + 1, 0.0);
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    double p = 1.0;
    std::size_t bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1ULL << i)) {
        p *= q[i];
        ++bits;
      } else {
        p *= 1.0 - q[i];
      }
    }
    pmf[bits] += p;
  }
  return pmf;
}

// The literal t-deep nested sum over strictly increasing indices
// i_1 < i_2 < ... < i_t of the products q_{i_1} * ... * q_{i_t}, written as
// actual nested loops via recursion.
inline double nested_sum_literal(std::span<const double> q, std::size_t depth,
                                 std::size_t start = 0, double product = 1.0) {
  if (depth == 0) return product;
  double total = 0.0;
  for (std::size_t i = start; i < q.size(); ++i) {
    total += nested_sum_literal(q, depth - 1, i + 1, product * q[i]);
  }
  return total;
}

// Naive all-pairs similarity by direct set intersection; keyed by
// (rank_a, rank_b) with rank_a < rank_b, entries only for non-empty
// intersections.
inline std::map<std::pair<std::uint32_t, std::uint32_t>, double>
naive_pairwise(const cfmetrics::InteractionMatrix& matrix,
               cfmetrics::Axis axis, cfmetrics::Metric metric,
               std::size_t top_r = 0) {
  using namespace cfmetrics;
  const RankMap ranking = popularity_ranking(matrix, axis);
  const std::size_t population =
      top_r == 0 ? ranking.size() : std::min(top_r, ranking.size());
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> scores;
  for (std::size_t ra = 0; ra < population; ++ra) {
    for (std::size_t rb = ra + 1; rb < population; ++rb) {
      const auto a = matrix.interactions_of(axis, ranking.order[ra]);
      const auto b = matrix.interactions_of(axis, ranking.order[rb]);
      std::size_t co = 0;
      for (const auto x : a) {
        for (const auto y : b) {
          if (x == y) ++co;
        }
      }
      if (co == 0) continue;
      double score = 0.0;
      const double fa = static_cast<double>(a.size());
      const double fb = static_cast<double>(b.size());
      const double fco = static_cast<double>(co);
      switch (metric) {
        case Metric::kJaccard: score = fco / (fa + fb - fco); break;
        case Metric::kCosineL1: score = fco / (fa * fb); break;
        case Metric::kCosineL2: score = fco / std::sqrt(fa * fb); break;
      }
      scores[{static_cast<std::uint32_t>(ra), static_cast<std::uint32_t>(rb)}] =
          score;
    }
  }
  return scores;
}

// Distinct co-interacting entities per rank, by direct pairwise checks.
inline std::vector<std::uint64_t> naive_neighbor_counts(
    const cfmetrics::InteractionMatrix& matrix, cfmetrics::Axis axis) {
  using namespace cfmetrics;
  const RankMap ranking = popularity_ranking(matrix, axis);
  const std::size_t n = ranking.size();
  std::vector<std::uint64_t> counts(n, 0);
  for (std::size_t ra = 0; ra < n; ++ra) {
    for (std::size_t rb = 0; rb < n; ++rb) {
      if (ra == rb) continue;
      const auto a = matrix.interactions_of(axis, ranking.order[ra]);
      const auto b = matrix.interactions_of(axis, ranking.order[rb]);
      bool shares = false;
      for (const auto x : a) {
        for (const auto y : b) {
          if (x == y) shares = true;
        }
      }
      if (shares) ++counts[ra];
    }
  }
  return counts;
}

}  // namespace testsupport
