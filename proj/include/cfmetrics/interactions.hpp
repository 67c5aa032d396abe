#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfmetrics {

enum class Axis { kUser, kItem };

inline const char* axis_name(Axis axis) {
  return axis == Axis::kUser ? "user" : "item";
}

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyLogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Interaction {
  std::int64_t user = 0;
  std::int64_t item = 0;
  std::int64_t weight = 1;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

// Unique (user, item) records in canonical (user, item) order.
struct InteractionLog {
  std::vector<Interaction> records;
};

struct IngestResult {
  InteractionLog log;
  std::size_t lines_read = 0;     // data lines parsed
  std::size_t lines_skipped = 0;  // blank lines
  std::size_t duplicates_merged = 0;
};

// Parses the tab-separated click-log format: one header line, then rows of
// userID, itemID and an optional positive weight. Duplicate (user, item)
// lines merge by summing weights; CRLF endings are accepted. Throws
// ParseError on malformed fields and EmptyLogError when no data lines
// remain.
IngestResult ingest_lastfm_tsv(std::istream& in);
IngestResult ingest_lastfm_file(const std::filesystem::path& path);

// Canonical serialization: `userID\titemID\tweight` header, records in
// (user, item) order, LF endings. Re-ingesting the output reproduces the
// log exactly.
void write_lastfm_tsv(const InteractionLog& log, std::ostream& out);

// Sparse binary user-by-item incidence with both row and column views.
// Dense indices are assigned in ascending id order, so index order is
// reproducible regardless of record order. Immutable once built.
class InteractionMatrix {
 public:
  // Throws EmptyLogError on an empty log.
  static InteractionMatrix from_log(const InteractionLog& log);

  std::size_t user_count() const { return user_ids_.size(); }
  std::size_t item_count() const { return item_ids_.size(); }
  std::size_t interaction_count() const { return row_items_.size(); }
  std::size_t axis_count(Axis axis) const {
    return axis == Axis::kUser ? user_count() : item_count();
  }

  // Sorted item indices clicked by the user / sorted user indices that
  // clicked the item.
  std::span<const std::uint32_t> user_items(std::uint32_t user_index) const;
  std::span<const std::uint32_t> item_users(std::uint32_t item_index) const;

  // Row view of `axis`: entities(kUser) enumerates users over item sets.
  std::span<const std::uint32_t> interactions_of(Axis axis,
                                                 std::uint32_t index) const {
    return axis == Axis::kUser ? user_items(index) : item_users(index);
  }

  std::int64_t user_id(std::uint32_t index) const { return user_ids_.at(index); }
  std::int64_t item_id(std::uint32_t index) const { return item_ids_.at(index); }
  std::optional<std::uint32_t> find_user(std::int64_t id) const;
  std::optional<std::uint32_t> find_item(std::int64_t id) const;

 private:
  std::vector<std::int64_t> user_ids_;  // ascending; position = dense index
  std::vector<std::int64_t> item_ids_;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::uint32_t> row_items_;
  std::vector<std::size_t> col_offsets_;
  std::vector<std::uint32_t> col_users_;
};

// Popularity order over one axis: rank 0 is the most interacted entity,
// ties broken by ascending id.
struct RankMap {
  Axis axis = Axis::kUser;
  std::vector<std::uint32_t> order;    // rank -> entity index
  std::vector<std::uint64_t> counts;   // entity index -> interaction count

  std::size_t size() const { return order.size(); }
  std::uint64_t count_at_rank(std::size_t rank) const {
    return counts[order[rank]];
  }
  // entity index -> rank
  std::vector<std::uint32_t> inverse() const;
};

RankMap popularity_ranking(const InteractionMatrix& matrix, Axis axis);

enum class ClickCountModel {
  kFixed,       // every user draws `clicks_per_user` times
  kZipfByRank,  // user of rank r draws max(1, round(C / r^user_exponent))
};

struct GeneratorConfig {
  std::size_t users = 1;            // W
  std::size_t items = 1;            // M
  std::size_t clicks_per_user = 1;  // C
  ClickCountModel click_model = ClickCountModel::kFixed;
  double user_exponent = 1.0;       // only for kZipfByRank
  double item_exponent = 1.0;       // s of the item popularity law
  std::uint64_t seed = 0;
  // true: repeated draws of an item collapse (click sets may be smaller than
  // the budget; repeats are kept as record weights). false: users keep
  // drawing until min(C, M) distinct items, the idealized fixed-size set.
  bool dedup = true;

  void validate() const;
};

// Synthetic Zipf click log: user ids 1..W, item ids equal to popularity rank.
// Deterministic for a fixed config.
InteractionLog generate_synthetic_log(const GeneratorConfig& config);
InteractionMatrix generate_synthetic(const GeneratorConfig& config);

}  // namespace cfmetrics
