#include "cfmetrics/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cfmetrics {

std::string format_double(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buffer, ptr);
}

void atomic_write_file(const std::filesystem::path& path,
                       std::string_view content) {
  const auto dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("failed to move " + tmp.string() + " to " +
                             path.string());
  }
}

std::string to_tsv(const InteractionLog& log) {
  std::ostringstream out;
  write_lastfm_tsv(log, out);
  return out.str();
}

std::string similarity_csv(const SimilarityMatrix& sim) {
  std::string out = "rank_a,rank_b,score\n";
  for (const auto& e : sim.entries()) {
    out += std::to_string(e.rank_a + 1);
    out += ',';
    out += std::to_string(e.rank_b + 1);
    out += ',';
    out += format_double(e.score);
    out += '\n';
  }
  return out;
}

std::string heatmap_csv(const HeatmapGrid& grid) {
  std::string out = "bin_row,bin_col,mean_score,pair_count\n";
  for (std::size_t r = 0; r < grid.bins; ++r) {
    for (std::size_t c = r; c < grid.bins; ++c) {
      out += std::to_string(r);
      out += ',';
      out += std::to_string(c);
      out += ',';
      out += format_double(grid.cell_mean(r, c));
      out += ',';
      out += std::to_string(grid.cell_pairs[r * grid.bins + c]);
      out += '\n';
    }
  }
  return out;
}

std::string profile_csv(const NeighborhoodProfile& profile) {
  std::string out = "rank,count\n";
  for (std::size_t r = 0; r < profile.neighbor_counts.size(); ++r) {
    out += std::to_string(r + 1);
    out += ',';
    out += std::to_string(profile.neighbor_counts[r]);
    out += '\n';
  }
  return out;
}

std::string estimates_csv(const std::vector<EstimateReport>& reports) {
  std::string out = "quantity,mean,stderr,ci_low,ci_high,trials,seed\n";
  for (const auto& r : reports) {
    out += r.quantity;
    out += ',';
    out += format_double(r.mean);
    out += ',';
    out += format_double(r.stderr_of_mean);
    out += ',';
    out += format_double(r.ci_low);
    out += ',';
    out += format_double(r.ci_high);
    out += ',';
    out += std::to_string(r.trials);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

namespace {

std::string svg_header(int width, int height) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<!-- cfmetrics ";
  out += kToolVersion;
  out += " -->\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" viewBox=\"0 0 " + std::to_string(width) + " " +
         std::to_string(height) + "\">\n";
  return out;
}

// Linear white -> dark blue ramp.
std::string color_for(double t) {
  const auto lerp = [&](int a, int b) {
    return static_cast<int>(std::lround(a + (b - a) * t));
  };
  char buffer[8];
  std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", lerp(255, 8),
                lerp(255, 48), lerp(255, 107));
  return buffer;
}

std::string text_at(int x, int y, const std::string& content,
                    const char* anchor = "start") {
  return "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
         "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"" +
         anchor + "\">" + content + "</text>\n";
}

}  // namespace

std::string heatmap_svg(const HeatmapGrid& grid, const std::string& title) {
  const int margin = 40;
  const int legend = 60;
  const std::size_t bins = grid.bins;
  const int cell = bins <= 100 ? 6 : (bins <= 300 ? 2 : 1);
  const int panel = static_cast<int>(bins) * cell;
  const int width = margin * 2 + panel + legend;
  const int height = margin * 2 + panel;

  double min_mean = 0.0, max_mean = 0.0;
  bool first = true;
  for (std::size_t r = 0; r < bins; ++r) {
    for (std::size_t c = r; c < bins; ++c) {
      const double v = grid.cell_mean(r, c);
      if (first) {
        min_mean = max_mean = v;
        first = false;
      } else {
        min_mean = std::min(min_mean, v);
        max_mean = std::max(max_mean, v);
      }
    }
  }
  const double range = max_mean > min_mean ? max_mean - min_mean : 1.0;

  std::string out = svg_header(width, height);
  out += text_at(margin, margin - 16, title);
  for (std::size_t r = 0; r < bins; ++r) {
    for (std::size_t c = 0; c < bins; ++c) {
      const double v = grid.cell_mean(r, c);  // symmetric accessor mirrors
      const double t = (v - min_mean) / range;
      out += "<rect x=\"" +
             std::to_string(margin + static_cast<int>(c) * cell) + "\" y=\"" +
             std::to_string(margin + static_cast<int>(r) * cell) +
             "\" width=\"" + std::to_string(cell) + "\" height=\"" +
             std::to_string(cell) + "\" fill=\"" + color_for(t) + "\"/>\n";
    }
  }
  // legend: vertical ramp, max at top
  const int lx = margin + panel + 16;
  const int steps = 64;
  const int step_h = std::max(1, panel / steps);
  for (int i = 0; i < steps; ++i) {
    const double t = 1.0 - static_cast<double>(i) / (steps - 1);
    out += "<rect x=\"" + std::to_string(lx) + "\" y=\"" +
           std::to_string(margin + i * step_h) + "\" width=\"14\" height=\"" +
           std::to_string(step_h) + "\" fill=\"" + color_for(t) + "\"/>\n";
  }
  out += text_at(lx + 18, margin + 10, format_double(max_mean));
  out += text_at(lx + 18, margin + steps * step_h, format_double(min_mean));
  out += text_at(margin, margin + panel + 16, "rank bin 0.." +
                                                  std::to_string(bins - 1) +
                                                  " (most popular first)");
  out += "</svg>\n";
  return out;
}

std::string profile_svg(const NeighborhoodProfile& profile,
                        const std::string& title) {
  const int margin = 50;
  const int panel = 400;
  const int width = margin * 2 + panel;
  const int height = margin * 2 + panel;

  double max_log_rank = 0.0, max_log_count = 0.0;
  for (std::size_t r = 0; r < profile.neighbor_counts.size(); ++r) {
    if (profile.neighbor_counts[r] == 0) continue;
    max_log_rank = std::max(
        max_log_rank, std::log10(static_cast<double>(r + 1)));
    max_log_count =
        std::max(max_log_count,
                 std::log10(static_cast<double>(profile.neighbor_counts[r])));
  }
  if (max_log_rank == 0.0) max_log_rank = 1.0;
  if (max_log_count == 0.0) max_log_count = 1.0;

  std::string out = svg_header(width, height);
  out += text_at(margin, margin - 16, title);
  out += "<rect x=\"" + std::to_string(margin) + "\" y=\"" +
         std::to_string(margin) + "\" width=\"" + std::to_string(panel) +
         "\" height=\"" + std::to_string(panel) +
         "\" fill=\"none\" stroke=\"#888888\"/>\n";
  for (std::size_t r = 0; r < profile.neighbor_counts.size(); ++r) {
    const std::uint64_t count = profile.neighbor_counts[r];
    if (count == 0) continue;
    const double fx = std::log10(static_cast<double>(r + 1)) / max_log_rank;
    const double fy =
        std::log10(static_cast<double>(count)) / max_log_count;
    const int x = margin + static_cast<int>(std::lround(fx * panel));
    const int y =
        margin + panel - static_cast<int>(std::lround(fy * panel));
    out += "<circle cx=\"" + std::to_string(x) + "\" cy=\"" +
           std::to_string(y) + "\" r=\"2\" fill=\"#1f77b4\"/>\n";
  }
  out += text_at(margin + panel / 2, margin + panel + 24,
                 "log10 rank (1.." +
                     std::to_string(profile.neighbor_counts.size()) + ")",
                 "middle");
  out += text_at(margin - 34, margin - 4, "log10");
  out += text_at(margin - 34, margin + 10, "count");
  out += "</svg>\n";
  return out;
}

}  // namespace cfmetrics
