#include "cfmetrics/interactions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <utility>

#include "cfmetrics/rng.hpp"
#include "cfmetrics/zipf.hpp"

namespace cfmetrics {

namespace {

std::int64_t parse_int_field(std::string_view field, std::size_t line,
                             const char* what) {
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line, std::string("expected integer ") + what + ", got '" +
                               std::string(field) + "'");
  }
  return value;
}

}  // namespace

IngestResult ingest_lastfm_tsv(std::istream& in) {
  IngestResult result;
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> merged;

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      header_seen = true;  // first line is the header, content not inspected
      continue;
    }
    if (line.empty()) {
      ++result.lines_skipped;
      continue;
    }
    ++result.lines_read;

    std::string_view rest(line);
    std::string_view fields[3];
    std::size_t n_fields = 0;
    while (n_fields < 3) {
      const auto tab = rest.find('\t');
      fields[n_fields++] = rest.substr(0, tab);
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (n_fields < 2) {
      throw ParseError(line_no, "expected at least 2 tab-separated fields");
    }
    const std::int64_t user = parse_int_field(fields[0], line_no, "userID");
    const std::int64_t item = parse_int_field(fields[1], line_no, "itemID");
    std::int64_t weight = 1;
    if (n_fields >= 3 && !fields[2].empty()) {
      weight = parse_int_field(fields[2], line_no, "weight");
    }
    if (weight < 1) throw ParseError(line_no, "weight must be >= 1");

    auto [it, inserted] = merged.try_emplace({user, item}, weight);
    if (!inserted) {
      it->second += weight;
      ++result.duplicates_merged;
    }
  }
  if (merged.empty()) {
    throw EmptyLogError("no interaction records in input");
  }

  result.log.records.reserve(merged.size());
  for (const auto& [key, weight] : merged) {
    result.log.records.push_back({key.first, key.second, weight});
  }
  return result;
}

IngestResult ingest_lastfm_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return ingest_lastfm_tsv(in);
}

void write_lastfm_tsv(const InteractionLog& log, std::ostream& out) {
  out << "userID\tartistID\tweight\n";
  for (const auto& r : log.records) {
    out << r.user << '\t' << r.item << '\t' << r.weight << '\n';
  }
}

InteractionMatrix InteractionMatrix::from_log(const InteractionLog& log) {
  if (log.records.empty()) {
    throw EmptyLogError("cannot build a matrix from an empty log");
  }

  InteractionMatrix m;
  m.user_ids_.reserve(log.records.size());
  m.item_ids_.reserve(log.records.size());
  for (const auto& r : log.records) {
    m.user_ids_.push_back(r.user);
    m.item_ids_.push_back(r.item);
  }
  auto dedupe_sort = [](std::vector<std::int64_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  dedupe_sort(m.user_ids_);
  dedupe_sort(m.item_ids_);

  const std::size_t users = m.user_ids_.size();
  const std::size_t items = m.item_ids_.size();
  auto index_of = [](const std::vector<std::int64_t>& ids, std::int64_t id) {
    return static_cast<std::uint32_t>(
        std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };

  // Counting-sort style CSR fill for both orientations.
  std::vector<std::size_t> row_counts(users, 0), col_counts(items, 0);
  for (const auto& r : log.records) {
    ++row_counts[index_of(m.user_ids_, r.user)];
    ++col_counts[index_of(m.item_ids_, r.item)];
  }
  m.row_offsets_.assign(users + 1, 0);
  m.col_offsets_.assign(items + 1, 0);
  for (std::size_t u = 0; u < users; ++u) {
    m.row_offsets_[u + 1] = m.row_offsets_[u] + row_counts[u];
  }
  for (std::size_t i = 0; i < items; ++i) {
    m.col_offsets_[i + 1] = m.col_offsets_[i] + col_counts[i];
  }
  m.row_items_.resize(log.records.size());
  m.col_users_.resize(log.records.size());
  std::vector<std::size_t> row_fill(m.row_offsets_.begin(),
                                    m.row_offsets_.end() - 1);
  std::vector<std::size_t> col_fill(m.col_offsets_.begin(),
                                    m.col_offsets_.end() - 1);
  for (const auto& r : log.records) {
    const std::uint32_t u = index_of(m.user_ids_, r.user);
    const std::uint32_t i = index_of(m.item_ids_, r.item);
    m.row_items_[row_fill[u]++] = i;
    m.col_users_[col_fill[i]++] = u;
  }
  for (std::size_t u = 0; u < users; ++u) {
    std::sort(m.row_items_.begin() + m.row_offsets_[u],
              m.row_items_.begin() + m.row_offsets_[u + 1]);
  }
  for (std::size_t i = 0; i < items; ++i) {
    std::sort(m.col_users_.begin() + m.col_offsets_[i],
              m.col_users_.begin() + m.col_offsets_[i + 1]);
  }
  return m;
}

std::span<const std::uint32_t> InteractionMatrix::user_items(
    std::uint32_t user_index) const {
  const std::size_t begin = row_offsets_.at(user_index);
  const std::size_t end = row_offsets_.at(user_index + 1);
  return {row_items_.data() + begin, end - begin};
}

std::span<const std::uint32_t> InteractionMatrix::item_users(
    std::uint32_t item_index) const {
  const std::size_t begin = col_offsets_.at(item_index);
  const std::size_t end = col_offsets_.at(item_index + 1);
  return {col_users_.data() + begin, end - begin};
}

std::optional<std::uint32_t> InteractionMatrix::find_user(
    std::int64_t id) const {
  const auto it = std::lower_bound(user_ids_.begin(), user_ids_.end(), id);
  if (it == user_ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - user_ids_.begin());
}

std::optional<std::uint32_t> InteractionMatrix::find_item(
    std::int64_t id) const {
  const auto it = std::lower_bound(item_ids_.begin(), item_ids_.end(), id);
  if (it == item_ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - item_ids_.begin());
}

std::vector<std::uint32_t> RankMap::inverse() const {
  std::vector<std::uint32_t> rank_of(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    rank_of[order[r]] = static_cast<std::uint32_t>(r);
  }
  return rank_of;
}

RankMap popularity_ranking(const InteractionMatrix& matrix, Axis axis) {
  const std::size_t n = matrix.axis_count(axis);
  RankMap map;
  map.axis = axis;
  map.counts.resize(n);
  map.order.resize(n);
  for (std::uint32_t e = 0; e < n; ++e) {
    map.counts[e] = matrix.interactions_of(axis, e).size();
    map.order[e] = e;
  }
  // Descending count; ties by ascending index, which equals ascending id.
  std::sort(map.order.begin(), map.order.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              if (map.counts[a] != map.counts[b]) {
                return map.counts[a] > map.counts[b];
              }
              return a < b;
            });
  return map;
}

void GeneratorConfig::validate() const {
  if (users < 1 || items < 1 || clicks_per_user < 1) {
    throw std::invalid_argument(
        "GeneratorConfig: users, items and clicks_per_user must be >= 1");
  }
  if (!(item_exponent >= 0.0) || !(user_exponent >= 0.0)) {
    throw std::invalid_argument("GeneratorConfig: exponents must be >= 0");
  }
}

InteractionLog generate_synthetic_log(const GeneratorConfig& config) {
  config.validate();
  const ZipfModel model(config.item_exponent, config.items);
  const ZipfSampler sampler(model);

  InteractionLog log;
  std::vector<std::size_t> draws;
  for (std::size_t u = 0; u < config.users; ++u) {
    SplitMix64 rng(derive_seed(config.seed, u));
    std::size_t budget = config.clicks_per_user;
    if (config.click_model == ClickCountModel::kZipfByRank) {
      const double scaled =
          static_cast<double>(config.clicks_per_user) /
          std::pow(static_cast<double>(u + 1), config.user_exponent);
      budget = static_cast<std::size_t>(std::max(1LL, std::llround(scaled)));
    }

    draws.clear();
    if (config.dedup) {
      for (std::size_t c = 0; c < budget; ++c) draws.push_back(sampler.draw(rng));
      std::sort(draws.begin(), draws.end());
      // run-length encode repeats into weights
      for (std::size_t i = 0; i < draws.size();) {
        std::size_t j = i;
        while (j < draws.size() && draws[j] == draws[i]) ++j;
        log.records.push_back({static_cast<std::int64_t>(u + 1),
                               static_cast<std::int64_t>(draws[i]),
                               static_cast<std::int64_t>(j - i)});
        i = j;
      }
    } else {
      const std::size_t target = std::min(budget, config.items);
      while (draws.size() < target) {
        const std::size_t rank = sampler.draw(rng);
        if (std::find(draws.begin(), draws.end(), rank) == draws.end()) {
          draws.push_back(rank);
        }
      }
      std::sort(draws.begin(), draws.end());
      for (const std::size_t rank : draws) {
        log.records.push_back({static_cast<std::int64_t>(u + 1),
                               static_cast<std::int64_t>(rank), 1});
      }
    }
  }
  return log;
}

InteractionMatrix generate_synthetic(const GeneratorConfig& config) {
  return InteractionMatrix::from_log(generate_synthetic_log(config));
}

}  // namespace cfmetrics
