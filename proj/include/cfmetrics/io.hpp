#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cfmetrics/interactions.hpp"
#include "cfmetrics/montecarlo.hpp"
#include "cfmetrics/similarity.hpp"

namespace cfmetrics {

inline constexpr const char* kToolVersion = "0.1.0";

// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

// Writes via a temporary file in the same directory plus rename, so readers
// never observe a partial file and failures leave the target untouched.
void atomic_write_file(const std::filesystem::path& path,
                       std::string_view content);

std::string to_tsv(const InteractionLog& log);

// `rank_a,rank_b,score` rows sorted by (rank_a, rank_b); ranks are 1-based.
std::string similarity_csv(const SimilarityMatrix& sim);

// `bin_row,bin_col,mean_score,pair_count` for the upper triangle
// (bin_row <= bin_col); bins are 0-based with (0,0) the most-popular block.
std::string heatmap_csv(const HeatmapGrid& grid);

// `rank,count` rows, 1-based ranks, distinct-neighbor counts.
std::string profile_csv(const NeighborhoodProfile& profile);

// `quantity,mean,stderr,ci_low,ci_high,trials,seed` summary rows.
std::string estimates_csv(const std::vector<EstimateReport>& reports);

// Single-panel heatmap rendering: linear two-color scale with the min and
// max annotated in the legend, mirrored across the diagonal for display.
std::string heatmap_svg(const HeatmapGrid& grid, const std::string& title);

// Log-log scatter of count against rank (zero counts are skipped).
std::string profile_svg(const NeighborhoodProfile& profile,
                        const std::string& title);

}  // namespace cfmetrics
