#include "cfmetrics/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "cfmetrics/rng.hpp"
#include "cfmetrics/similarity.hpp"
#include "cfmetrics/zipf.hpp"

namespace cfmetrics {

const char* inclusion_model_name(InclusionModel model) {
  return model == InclusionModel::kIidDraws ? "iid-draws"
                                            : "bernoulli-inclusion";
}

EstimateReport EstimateReport::from_stats(const std::string& quantity,
                                          const RunningStats& stats,
                                          std::uint64_t seed) {
  EstimateReport report;
  report.quantity = quantity;
  report.mean = stats.mean();
  report.stderr_of_mean = stats.stderr_of_mean();
  report.ci_low = report.mean - kZ99 * report.stderr_of_mean;
  report.ci_high = report.mean + kZ99 * report.stderr_of_mean;
  report.trials = stats.count();
  report.seed = seed;
  return report;
}

void UserPairSimConfig::validate() const {
  model.validate();
  if (trials < 1) {
    throw std::invalid_argument("UserPairSimConfig: trials must be >= 1");
  }
}

namespace {

// Runs fn(state, trial) over [0, trials) on up to `threads` workers, giving
// each worker its own make_state() scratch. Trials write only to their own
// output slot, so the partitioning cannot affect results.
template <typename MakeState, typename Fn>
void parallel_trials(std::uint64_t trials, unsigned threads,
                     MakeState&& make_state, Fn&& fn) {
  unsigned workers =
      threads == 0 ? std::thread::hardware_concurrency() : threads;
  if (workers < 1) workers = 1;
  workers = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, trials == 0 ? 1 : trials));
  if (workers == 1) {
    auto state = make_state();
    for (std::uint64_t t = 0; t < trials; ++t) fn(state, t);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      auto state = make_state();
      for (std::uint64_t t = w; t < trials; t += workers) fn(state, t);
    });
  }
  for (auto& th : pool) th.join();
}

// Epoch-stamped membership set over ranks 1..m; avoids per-trial clears.
class StampSet {
 public:
  explicit StampSet(std::size_t m) : stamp_(m, 0) {}

  void begin_trial() { ++epoch_; }
  // returns true when newly inserted
  bool insert(std::size_t rank) {
    if (stamp_[rank - 1] == epoch_) return false;
    stamp_[rank - 1] = epoch_;
    return true;
  }
  bool contains(std::size_t rank) const { return stamp_[rank - 1] == epoch_; }

 private:
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 0;
};

}  // namespace

UserPairSimResult simulate_user_pair(const UserPairSimConfig& config,
                                     unsigned threads) {
  config.validate();
  const std::size_t m = config.model.item_count;
  const ZipfModel model(config.model.exponent, m);
  const ZipfSampler sampler(model);

  std::vector<double> pi_a(m), pi_b(m);
  for (std::size_t i = 1; i <= m; ++i) {
    pi_a[i - 1] = 1.0 - std::pow(1.0 - model.pmf(i),
                                 static_cast<double>(config.model.clicks_a));
    pi_b[i - 1] = 1.0 - std::pow(1.0 - model.pmf(i),
                                 static_cast<double>(config.model.clicks_b));
  }

  struct TrialOutcome {
    std::uint32_t intersection;
    std::uint32_t union_size;
  };
  std::vector<TrialOutcome> outcomes(config.trials);

  struct Scratch {
    StampSet set_a;
    StampSet set_b;
    std::vector<std::size_t> members_a;
    explicit Scratch(std::size_t size) : set_a(size), set_b(size) {}
  };

  parallel_trials(
      config.trials, threads, [&] { return Scratch(m); },
      [&](Scratch& scratch, std::uint64_t t) {
        SplitMix64 rng(derive_seed(config.seed, t));
        scratch.set_a.begin_trial();
        scratch.set_b.begin_trial();
        scratch.members_a.clear();
        std::uint32_t size_a = 0, size_b = 0, inter = 0;

        if (config.inclusion == InclusionModel::kIidDraws) {
          const std::size_t target_a = std::min(config.model.clicks_a, m);
          const std::size_t target_b = std::min(config.model.clicks_b, m);
          while (size_a < target_a) {
            const std::size_t r = sampler.draw(rng);
            if (scratch.set_a.insert(r)) {
              ++size_a;
              scratch.members_a.push_back(r);
            }
          }
          while (size_b < target_b) {
            const std::size_t r = sampler.draw(rng);
            if (scratch.set_b.insert(r)) ++size_b;
          }
          for (const std::size_t r : scratch.members_a) {
            if (scratch.set_b.contains(r)) ++inter;
          }
        } else {
          for (std::size_t i = 0; i < m; ++i) {
            const bool in_a = rng.next_double() < pi_a[i];
            const bool in_b = rng.next_double() < pi_b[i];
            size_a += in_a;
            size_b += in_b;
            inter += in_a && in_b;
          }
        }
        outcomes[t] = {inter, size_a + size_b - inter};
      });

  RunningStats jac_stats, inter_stats, union_stats;
  std::vector<std::uint64_t> histogram(m + 1, 0);
  for (const auto& o : outcomes) {
    jac_stats.add(o.union_size == 0 ? 0.0
                                    : static_cast<double>(o.intersection) /
                                          static_cast<double>(o.union_size));
    inter_stats.add(o.intersection);
    union_stats.add(o.union_size);
    ++histogram[o.intersection];
  }
  while (histogram.size() > 1 && histogram.back() == 0) histogram.pop_back();

  UserPairSimResult result;
  result.jaccard =
      EstimateReport::from_stats("jaccard", jac_stats, config.seed);
  result.intersection =
      EstimateReport::from_stats("intersection", inter_stats, config.seed);
  result.union_size =
      EstimateReport::from_stats("union", union_stats, config.seed);
  result.overlap_histogram = std::move(histogram);
  result.inclusion = config.inclusion;
  result.trials = config.trials;
  result.seed = config.seed;
  return result;
}

ItemPairSimResult simulate_item_pair(const ItemPairModel& model,
                                     std::uint64_t trials, std::uint64_t seed,
                                     unsigned threads) {
  model.validate();
  if (trials < 1) {
    throw std::invalid_argument("simulate_item_pair: trials must be >= 1");
  }
  if (model.m > model.user_count || model.n > model.user_count) {
    throw std::invalid_argument(
        "simulate_item_pair: m and n must not exceed the user count");
  }
  const double p_a = 1.0 / static_cast<double>(model.m);
  const double p_b = 1.0 / static_cast<double>(model.n);
  const std::uint64_t users = model.user_count;

  struct TrialOutcome {
    double l1;
    double l2;
    bool skipped;
  };
  std::vector<TrialOutcome> outcomes(trials);

  parallel_trials(
      trials, threads, [] { return 0; },
      [&](int&, std::uint64_t t) {
        SplitMix64 rng(derive_seed(seed, t));
        std::uint64_t count_a = 0, count_b = 0, co = 0;
        for (std::uint64_t u = 0; u < users; ++u) {
          const bool a = rng.next_double() < p_a;
          const bool b = rng.next_double() < p_b;
          count_a += a;
          count_b += b;
          co += a && b;
        }
        if (count_a == 0 || count_b == 0) {
          outcomes[t] = {0.0, 0.0, true};
          return;
        }
        const double fa = static_cast<double>(count_a);
        const double fb = static_cast<double>(count_b);
        const double fco = static_cast<double>(co);
        outcomes[t] = {fco / (fa * fb), fco / std::sqrt(fa * fb), false};
      });

  RunningStats l1_stats, l2_stats;
  std::uint64_t skipped = 0;
  for (const auto& o : outcomes) {
    if (o.skipped) {
      ++skipped;
      continue;
    }
    l1_stats.add(o.l1);
    l2_stats.add(o.l2);
  }

  ItemPairSimResult result;
  result.l1 = EstimateReport::from_stats("cosine_l1", l1_stats, seed);
  result.l2 = EstimateReport::from_stats("cosine_l2", l2_stats, seed);
  result.skipped = skipped;
  result.trials = trials;
  result.seed = seed;
  return result;
}

namespace {

PerRankSeries series_from_stats(const std::vector<RunningStats>& stats) {
  PerRankSeries series;
  const std::size_t n = stats.size();
  series.mean.resize(n);
  series.stderr_of_mean.resize(n);
  series.ci_low.resize(n);
  series.ci_high.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    series.mean[r] = stats[r].mean();
    series.stderr_of_mean[r] = stats[r].stderr_of_mean();
    series.ci_low[r] = series.mean[r] - kZ99 * series.stderr_of_mean[r];
    series.ci_high[r] = series.mean[r] + kZ99 * series.stderr_of_mean[r];
  }
  return series;
}

}  // namespace

NeighborhoodSimResult simulate_neighborhoods(const GeneratorConfig& generator,
                                             std::uint64_t trials,
                                             std::uint64_t seed,
                                             unsigned threads) {
  generator.validate();
  if (trials < 1) {
    throw std::invalid_argument("simulate_neighborhoods: trials must be >= 1");
  }

  struct TrialProfiles {
    NeighborhoodProfile user;
    NeighborhoodProfile item;
  };
  std::vector<TrialProfiles> per_trial(trials);

  parallel_trials(
      trials, threads, [] { return 0; },
      [&](int&, std::uint64_t t) {
        GeneratorConfig trial_config = generator;
        trial_config.seed = derive_seed(seed, t);
        const InteractionMatrix matrix = generate_synthetic(trial_config);
        per_trial[t].user = neighborhood_sizes(matrix, Axis::kUser);
        per_trial[t].item = neighborhood_sizes(matrix, Axis::kItem);
      });

  // Rank axes are padded to the configured sizes: a trial can leave deep
  // ranks unrealized (an item never drawn), which counts as zero neighbors.
  std::vector<RunningStats> user_nb(generator.users), user_cp(generator.users);
  std::vector<RunningStats> item_nb(generator.items), item_cp(generator.items);
  for (const auto& profiles : per_trial) {
    for (std::size_t r = 0; r < generator.users; ++r) {
      const bool present = r < profiles.user.neighbor_counts.size();
      user_nb[r].add(present ? profiles.user.neighbor_counts[r] : 0.0);
      user_cp[r].add(present ? profiles.user.copair_counts[r] : 0.0);
    }
    for (std::size_t r = 0; r < generator.items; ++r) {
      const bool present = r < profiles.item.neighbor_counts.size();
      item_nb[r].add(present ? profiles.item.neighbor_counts[r] : 0.0);
      item_cp[r].add(present ? profiles.item.copair_counts[r] : 0.0);
    }
  }

  NeighborhoodSimResult result;
  result.user_neighbors = series_from_stats(user_nb);
  result.user_copairs = series_from_stats(user_cp);
  result.item_neighbors = series_from_stats(item_nb);
  result.item_copairs = series_from_stats(item_cp);
  result.trials = trials;
  result.seed = seed;
  return result;
}

}  // namespace cfmetrics
