#include "cfmetrics/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cfmetrics/expectation.hpp"
#include "cfmetrics/interactions.hpp"
#include "cfmetrics/io.hpp"
#include "cfmetrics/montecarlo.hpp"
#include "cfmetrics/rng.hpp"
#include "cfmetrics/similarity.hpp"
#include "cfmetrics/stats.hpp"
#include "cfmetrics/zipf.hpp"

namespace cfmetrics::cli {

namespace {

using nlohmann::ordered_json;

// Numeric rendering for stdout; keeps a decimal point so integral results
// still read as reals (2 -> "2.0").
std::string pointed(double value) {
  std::string s = format_double(value);
  if (s.find_first_of(".eEni") == std::string::npos) s += ".0";
  return s;
}

ordered_json envelope(const ordered_json& inputs, const ordered_json& results,
                      std::optional<std::uint64_t> seed) {
  ordered_json doc;
  doc["tool_version"] = kToolVersion;
  if (seed) {
    doc["seed"] = *seed;
  } else {
    doc["seed"] = nullptr;
  }
  doc["inputs"] = inputs;
  doc["results"] = results;
  return doc;
}

void emit_file(const std::filesystem::path& path, std::string_view content) {
  atomic_write_file(path, content);
  std::cout << "wrote " << path.string() << " (" << content.size()
            << " bytes)\n";
}

// Validates the output location before any computation starts: the parent
// directory must exist or be creatable.
void prepare_output(const std::string& out_path) {
  if (out_path.empty()) return;
  const auto parent = std::filesystem::path(out_path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

// Expands `--config file.json` into leading per-subcommand arguments so
// explicit flags, parsed later, take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    }
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open config " + config_path);
  nlohmann::json config;
  in >> config;
  if (!config.is_object()) {
    throw std::runtime_error("config must be a JSON object of flag values");
  }

  std::vector<std::string> extra;
  for (const auto& [key, value] : config.items()) {
    if (key == "config") continue;
    if (value.is_boolean()) {
      extra.push_back("--" + key + (value.get<bool>() ? "=true" : "=false"));
    } else if (value.is_string()) {
      extra.push_back("--" + key);
      extra.push_back(value.get<std::string>());
    } else {
      extra.push_back("--" + key);
      extra.push_back(value.dump());
    }
  }

  // Insert right after the subcommand token.
  std::vector<std::string> out;
  bool inserted = false;
  for (const auto& a : args) {
    out.push_back(a);
    if (!inserted && !a.empty() && a[0] != '-') {
      out.insert(out.end(), extra.begin(), extra.end());
      inserted = true;
    }
  }
  return out;
}

struct CommonFlags {
  std::string in_path;
  std::string out_path;
  std::string config_path;  // consumed by expand_config; accepted here
  std::string format;       // "", "csv", "json", "svg"
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_in,
                bool needs_out) {
  auto* in = cmd->add_option("--in", flags.in_path, "input path");
  if (needs_in) in->required();
  auto* out = cmd->add_option("--out", flags.out_path, "output path");
  if (needs_out) out->required();
  cmd->add_option("--config", flags.config_path,
                  "JSON file whose keys mirror flag names (flags override)");
  cmd->add_option("--format", flags.format, "output format selector")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  cmd->add_option("--threads", flags.threads,
                  "parallel partition cap (0 = machine parallelism)");
}

std::filesystem::path with_extension(const std::filesystem::path& base,
                                     const char* ext) {
  std::filesystem::path p = base;
  p.replace_extension(ext);
  return p;
}

const std::map<std::string, Axis> kAxisNames{{"user", Axis::kUser},
                                             {"item", Axis::kItem}};
const std::map<std::string, Metric> kMetricNames{
    {"jaccard", Metric::kJaccard},
    {"l1", Metric::kCosineL1},
    {"l2", Metric::kCosineL2}};
const std::map<std::string, WeightMode> kModeNames{
    {"paper-raw", WeightMode::kPaperRaw},
    {"normalized", WeightMode::kNormalized}};
const std::map<std::string, NeighborVariant> kVariantNames{
    {"paper", NeighborVariant::kPaperSum}, {"exact", NeighborVariant::kExact}};
const std::map<std::string, InclusionModel> kInclusionNames{
    {"iid", InclusionModel::kIidDraws},
    {"bernoulli", InclusionModel::kBernoulliInclusion}};
const std::map<std::string, ClickCountModel> kClickDistNames{
    {"fixed", ClickCountModel::kFixed},
    {"zipf", ClickCountModel::kZipfByRank}};

// ---- ingest ----------------------------------------------------------------

void run_ingest(const CommonFlags& flags) {
  prepare_output(flags.out_path);
  const IngestResult result = ingest_lastfm_file(flags.in_path);
  std::set<std::int64_t> users, items;
  for (const auto& r : result.log.records) {
    users.insert(r.user);
    items.insert(r.item);
  }
  emit_file(flags.out_path, to_tsv(result.log));
  std::cout << "users=" << users.size() << " items=" << items.size()
            << " records=" << result.log.records.size()
            << " lines_read=" << result.lines_read
            << " skipped=" << result.lines_skipped
            << " duplicates_merged=" << result.duplicates_merged << "\n";
}

// ---- generate --------------------------------------------------------------

struct GenerateFlags {
  GeneratorConfig config;
  std::string click_dist = "fixed";
};

void run_generate(const CommonFlags& flags, GenerateFlags& gen) {
  prepare_output(flags.out_path);
  gen.config.click_model = kClickDistNames.at(gen.click_dist);
  const InteractionLog log = generate_synthetic_log(gen.config);
  emit_file(flags.out_path, to_tsv(log));
  std::cout << "users=" << gen.config.users << " items=" << gen.config.items
            << " records=" << log.records.size() << " seed=" << gen.config.seed
            << "\n";
}

// ---- similarity / heatmap / profile ----------------------------------------

struct PairwiseFlags {
  std::string axis = "user";
  std::string metric = "jaccard";
  std::size_t top_r = 0;
  std::size_t bins = 100;
};

InteractionMatrix load_matrix(const std::string& path) {
  return InteractionMatrix::from_log(ingest_lastfm_file(path).log);
}

void run_similarity(const CommonFlags& flags, const PairwiseFlags& pw) {
  prepare_output(flags.out_path);
  const InteractionMatrix matrix = load_matrix(flags.in_path);
  const SimilarityMatrix sim = pairwise_similarity(
      matrix, kAxisNames.at(pw.axis), kMetricNames.at(pw.metric), pw.top_r);
  emit_file(flags.out_path, similarity_csv(sim));
  std::cout << "axis=" << pw.axis << " metric=" << pw.metric
            << " population=" << sim.population()
            << " entries=" << sim.entries().size() << "\n";
}

void run_heatmap(const CommonFlags& flags, const PairwiseFlags& pw) {
  prepare_output(flags.out_path);
  const InteractionMatrix matrix = load_matrix(flags.in_path);
  const SimilarityMatrix sim = pairwise_similarity(
      matrix, kAxisNames.at(pw.axis), kMetricNames.at(pw.metric), pw.top_r);
  const HeatmapGrid grid = rank_binned_grid(sim, pw.bins);
  const std::string title = std::string(pw.metric) + " similarity, " +
                            pw.axis + " axis, " + std::to_string(pw.bins) +
                            " rank bins";
  if (flags.format.empty() || flags.format == "csv") {
    emit_file(with_extension(flags.out_path, ".csv"), heatmap_csv(grid));
  }
  if (flags.format.empty() || flags.format == "svg") {
    emit_file(with_extension(flags.out_path, ".svg"),
              heatmap_svg(grid, title));
  }
}

void run_profile(const CommonFlags& flags, const PairwiseFlags& pw) {
  prepare_output(flags.out_path);
  const InteractionMatrix matrix = load_matrix(flags.in_path);
  const NeighborhoodProfile profile =
      neighborhood_sizes(matrix, kAxisNames.at(pw.axis));
  if (flags.format.empty() || flags.format == "csv") {
    emit_file(with_extension(flags.out_path, ".csv"), profile_csv(profile));
  }
  if (flags.format == "svg") {
    emit_file(with_extension(flags.out_path, ".svg"),
              profile_svg(profile, pw.axis + std::string(" neighborhoods")));
  }
}

// ---- expect ----------------------------------------------------------------

struct ExpectFlags {
  std::string formula = "all";
  std::size_t items = 100;     // M
  std::size_t clicks_a = 10;   // N_A
  std::size_t clicks_b = 10;   // N_B
  std::size_t users = 1000;    // W
  double exponent = 1.0;       // s
  std::string mode = "normalized";
  std::string variant = "paper";
  std::string metric = "l2";
  std::uint64_t m = 5;
  std::uint64_t n = 20;
  std::size_t rank_i = 1;
  std::size_t rank_j = 2;
  std::size_t union_size = 0;  // 0 = default N_A + N_B - round(E|overlap|)
  std::vector<std::size_t> item_set;
};

ExpectationConfig expectation_config(const ExpectFlags& flags) {
  ExpectationConfig config;
  config.item_count = flags.items;
  config.clicks_a = flags.clicks_a;
  config.clicks_b = flags.clicks_b;
  config.user_count = flags.users;
  config.exponent = flags.exponent;
  config.mode = kModeNames.at(flags.mode);
  return config;
}

ordered_json expect_parameters(const ExpectFlags& flags) {
  ordered_json p;
  p["M"] = flags.items;
  p["na"] = flags.clicks_a;
  p["nb"] = flags.clicks_b;
  p["W"] = flags.users;
  p["s"] = flags.exponent;
  return p;
}

ordered_json formula_entry(const std::string& mode, ordered_json parameters,
                           double value) {
  ordered_json entry;
  entry["mode"] = mode;
  entry["parameters"] = std::move(parameters);
  entry["value"] = value;
  return entry;
}

// Assembles every formula computable from the flags. The raw user-neighbor
// sum is reported under both readings of its upper summation index (item
// count, the one used everywhere else, and user count) because the source
// formula is ambiguous; "chosen" marks the operative one.
ordered_json expect_report(const ExpectFlags& flags) {
  const ExpectationConfig config = expectation_config(flags);
  ordered_json results;

  const std::size_t union_size =
      flags.union_size > 0 ? flags.union_size : default_union_size(config);
  {
    ordered_json params = expect_parameters(flags);
    params["union_size"] = union_size;
    results["user_similarity"] = formula_entry(
        flags.mode, std::move(params),
        expected_similarity_user_pair(config, union_size));
  }
  if (config.mode == WeightMode::kNormalized) {
    const OverlapMoments moments = expected_overlap_union(config);
    ordered_json entry;
    entry["mode"] = flags.mode;
    entry["parameters"] = expect_parameters(flags);
    entry["expected_intersection"] = moments.expected_intersection;
    entry["expected_union"] = moments.expected_union;
    results["overlap_moments"] = entry;
  }
  {
    ItemPairModel model{flags.m, flags.n, flags.users};
    ordered_json params;
    params["m"] = flags.m;
    params["n"] = flags.n;
    params["W"] = flags.users;
    results["item_similarity_l1"] = formula_entry(
        "-", params, expected_item_similarity(model, CosineNorm::kL1));
    results["item_similarity_l2"] = formula_entry(
        "-", params, expected_item_similarity(model, CosineNorm::kL2));
  }
  {
    ordered_json entry = formula_entry(
        flags.mode, expect_parameters(flags),
        expected_user_neighbors(config, NeighborVariant::kPaperSum));
    entry["upper_index"] = "items";
    entry["chosen"] = true;
    entry["user_index_reading"] =
        expected_user_neighbors_user_index_reading(config);
    results["user_neighbors_paper"] = entry;
  }
  if (!flags.item_set.empty()) {
    ordered_json params = expect_parameters(flags);
    params["item_set"] = flags.item_set;
    results["user_neighbors_exact"] = formula_entry(
        flags.mode, std::move(params),
        expected_user_neighbors(config, NeighborVariant::kExact,
                                flags.item_set));
  }
  {
    ordered_json params = expect_parameters(flags);
    params["i"] = flags.rank_i;
    results["item_neighbors_paper"] = formula_entry(
        flags.mode, params,
        expected_item_neighbors(flags.rank_i, config,
                                NeighborVariant::kPaperSum));
    results["item_neighbors_exact"] = formula_entry(
        flags.mode, params,
        expected_item_neighbors(flags.rank_i, config,
                                NeighborVariant::kExact));
  }
  {
    ordered_json params;
    params["i"] = flags.rank_i;
    params["j"] = flags.rank_j;
    results["neighborhood_ratio"] = formula_entry(
        "-", std::move(params),
        neighborhood_ratio(flags.rank_i, flags.rank_j));
  }
  return results;
}

void run_expect(const CommonFlags& flags, const ExpectFlags& expect) {
  prepare_output(flags.out_path);
  const ExpectationConfig config = expectation_config(expect);
  ordered_json results;

  if (expect.formula == "all") {
    results = expect_report(expect);
    const std::string dump = envelope(expect_parameters(expect), results,
                                      std::nullopt)
                                 .dump(2) +
                             "\n";
    if (flags.out_path.empty()) {
      std::cout << dump;
    } else {
      emit_file(flags.out_path, dump);
    }
    return;
  }

  double value = 0.0;
  if (expect.formula == "item-ratio") {
    value = neighborhood_ratio(expect.rank_i, expect.rank_j);
  } else if (expect.formula == "user-similarity") {
    const std::size_t union_size = expect.union_size > 0
                                       ? expect.union_size
                                       : default_union_size(config);
    value = expected_similarity_user_pair(config, union_size);
  } else if (expect.formula == "item-similarity") {
    const ItemPairModel model{expect.m, expect.n, expect.users};
    value = expected_item_similarity(model, expect.metric == "l1"
                                                ? CosineNorm::kL1
                                                : CosineNorm::kL2);
  } else if (expect.formula == "user-neighbors") {
    value = expected_user_neighbors(config, kVariantNames.at(expect.variant),
                                    expect.item_set);
  } else if (expect.formula == "item-neighbors") {
    value = expected_item_neighbors(expect.rank_i, config,
                                    kVariantNames.at(expect.variant));
  } else if (expect.formula == "click-probability") {
    value = click_probability(expect.rank_i, config);
  } else if (expect.formula == "overlap") {
    const OverlapMoments moments = expected_overlap_union(config);
    std::cout << "expected_intersection=" << pointed(moments.expected_intersection)
              << " expected_union=" << pointed(moments.expected_union) << "\n";
    if (!flags.out_path.empty()) {
      ordered_json entry;
      entry["mode"] = expect.mode;
      entry["parameters"] = expect_parameters(expect);
      entry["expected_intersection"] = moments.expected_intersection;
      entry["expected_union"] = moments.expected_union;
      ordered_json results_one;
      results_one["overlap_moments"] = entry;
      emit_file(flags.out_path,
                envelope(expect_parameters(expect), results_one, std::nullopt)
                        .dump(2) +
                    "\n");
    }
    return;
  } else {
    throw CLI::ValidationError("--formula",
                               "unknown formula '" + expect.formula + "'");
  }
  std::cout << pointed(value) << "\n";

  if (!flags.out_path.empty()) {
    ordered_json results_one;
    results_one[expect.formula] =
        formula_entry(expect.mode, expect_parameters(expect), value);
    emit_file(flags.out_path,
              envelope(expect_parameters(expect), results_one, std::nullopt)
                      .dump(2) +
                  "\n");
  }
}

// ---- simulate ----------------------------------------------------------------

struct SimulateFlags {
  std::string what = "user-pair";
  std::string inclusion = "bernoulli";
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  ExpectFlags model;  // reuses M/na/nb/W/s and m/n
  GenerateFlags generator;
};

ordered_json report_json(const EstimateReport& report) {
  ordered_json doc;
  doc["quantity"] = report.quantity;
  doc["mean"] = report.mean;
  doc["stderr"] = report.stderr_of_mean;
  doc["ci_low"] = report.ci_low;
  doc["ci_high"] = report.ci_high;
  doc["trials"] = report.trials;
  doc["seed"] = report.seed;
  doc["rng"] = kRngName;
  return doc;
}

ordered_json series_json(const PerRankSeries& series) {
  ordered_json doc;
  doc["mean"] = series.mean;
  doc["stderr"] = series.stderr_of_mean;
  doc["ci_low"] = series.ci_low;
  doc["ci_high"] = series.ci_high;
  const std::size_t upper = std::min<std::size_t>(series.mean.size(), 100);
  doc["loglog_slope_1_100"] = log_log_slope(
      std::span<const double>(series.mean.data(), upper));
  return doc;
}

void emit_report(const CommonFlags& flags, const ordered_json& doc,
                 const std::vector<EstimateReport>& estimates) {
  if (flags.format == "csv") {
    const std::string csv = estimates_csv(estimates);
    if (flags.out_path.empty()) {
      std::cout << csv;
    } else {
      emit_file(flags.out_path, csv);
    }
    return;
  }
  const std::string dump = doc.dump(2) + "\n";
  if (flags.out_path.empty()) {
    std::cout << dump;
  } else {
    emit_file(flags.out_path, dump);
  }
}

void run_simulate(const CommonFlags& flags, SimulateFlags& sim) {
  prepare_output(flags.out_path);
  if (sim.what == "user-pair") {
    UserPairSimConfig config;
    config.model = expectation_config(sim.model);
    config.inclusion = kInclusionNames.at(sim.inclusion);
    config.trials = sim.trials;
    config.seed = sim.seed;
    const UserPairSimResult result = simulate_user_pair(config, flags.threads);

    ordered_json inputs = expect_parameters(sim.model);
    inputs["inclusion"] = inclusion_model_name(result.inclusion);
    inputs["trials"] = sim.trials;
    ordered_json results;
    results["rng"] = kRngName;
    results["estimates"] = ordered_json::array(
        {report_json(result.jaccard), report_json(result.intersection),
         report_json(result.union_size)});
    results["overlap_histogram"] = result.overlap_histogram;
    emit_report(flags, envelope(inputs, results, sim.seed),
                {result.jaccard, result.intersection, result.union_size});
  } else if (sim.what == "item-pair") {
    const ItemPairModel model{sim.model.m, sim.model.n, sim.model.users};
    const ItemPairSimResult result =
        simulate_item_pair(model, sim.trials, sim.seed, flags.threads);

    ordered_json inputs;
    inputs["m"] = model.m;
    inputs["n"] = model.n;
    inputs["W"] = model.user_count;
    inputs["trials"] = sim.trials;
    ordered_json results;
    results["rng"] = kRngName;
    results["estimates"] =
        ordered_json::array({report_json(result.l1), report_json(result.l2)});
    results["skipped_trials"] = result.skipped;
    emit_report(flags, envelope(inputs, results, sim.seed),
                {result.l1, result.l2});
  } else {  // neighborhoods
    sim.generator.config.click_model =
        kClickDistNames.at(sim.generator.click_dist);
    const NeighborhoodSimResult result = simulate_neighborhoods(
        sim.generator.config, sim.trials, sim.seed, flags.threads);

    ordered_json inputs;
    inputs["users"] = sim.generator.config.users;
    inputs["items"] = sim.generator.config.items;
    inputs["clicks"] = sim.generator.config.clicks_per_user;
    inputs["click_dist"] = sim.generator.click_dist;
    inputs["s"] = sim.generator.config.item_exponent;
    inputs["dedup"] = sim.generator.config.dedup;
    inputs["trials"] = sim.trials;
    ordered_json results;
    results["rng"] = kRngName;
    results["user_neighbors"] = series_json(result.user_neighbors);
    results["item_neighbors"] = series_json(result.item_neighbors);
    results["user_copairs"] = series_json(result.user_copairs);
    results["item_copairs"] = series_json(result.item_copairs);

    std::vector<EstimateReport> rows;
    auto flatten = [&](const char* name, const PerRankSeries& series) {
      for (std::size_t r = 0; r < series.mean.size(); ++r) {
        EstimateReport report;
        report.quantity = std::string(name) + "_rank_" + std::to_string(r + 1);
        report.mean = series.mean[r];
        report.stderr_of_mean = series.stderr_of_mean[r];
        report.ci_low = series.ci_low[r];
        report.ci_high = series.ci_high[r];
        report.trials = sim.trials;
        report.seed = sim.seed;
        rows.push_back(std::move(report));
      }
    };
    flatten("user_neighbors", result.user_neighbors);
    flatten("item_neighbors", result.item_neighbors);
    flatten("user_copairs", result.user_copairs);
    flatten("item_copairs", result.item_copairs);
    emit_report(flags, envelope(inputs, results, sim.seed), rows);
  }
}

// ---- figures ---------------------------------------------------------------

struct FiguresFlags {
  std::size_t bins = 100;
  std::size_t top_r = 2000;
};

void run_figures(const CommonFlags& flags, const FiguresFlags& figures) {
  const IngestResult ingested = ingest_lastfm_file(flags.in_path);
  const InteractionMatrix matrix = InteractionMatrix::from_log(ingested.log);
  const std::filesystem::path dir = flags.out_path;
  std::filesystem::create_directories(dir);

  ordered_json results;
  results["users"] = matrix.user_count();
  results["items"] = matrix.item_count();
  results["records"] = matrix.interaction_count();

  auto grid_stats = [](const HeatmapGrid& grid) {
    const std::size_t block = std::max<std::size_t>(1, grid.bins / 10);
    ordered_json doc;
    doc["bins"] = grid.bins;
    doc["population"] = grid.population;
    const double top_left = grid.block_mean(0, block);
    const double bottom_right = grid.block_mean(grid.bins - block, grid.bins);
    doc["top_left_block_mean"] = top_left;
    doc["bottom_right_block_mean"] = bottom_right;
    if (bottom_right > 0.0) {
      doc["skew_ratio"] = top_left / bottom_right;
    } else {
      doc["skew_ratio"] = nullptr;
    }
    return doc;
  };

  // fig1: user-pair similarity grid
  {
    const SimilarityMatrix sim =
        pairwise_similarity(matrix, Axis::kUser, Metric::kJaccard);
    const std::size_t bins = std::min(figures.bins, sim.population());
    const HeatmapGrid grid = rank_binned_grid(sim, bins);
    emit_file(dir / "fig1.csv", heatmap_csv(grid));
    emit_file(dir / "fig1.svg",
              heatmap_svg(grid, "user-pair jaccard by popularity rank"));
    results["fig1"] = grid_stats(grid);
  }
  // fig2: item-pair similarity grid, top-R capped
  {
    const SimilarityMatrix sim = pairwise_similarity(
        matrix, Axis::kItem, Metric::kJaccard, figures.top_r);
    const std::size_t bins = std::min(figures.bins, sim.population());
    const HeatmapGrid grid = rank_binned_grid(sim, bins);
    emit_file(dir / "fig2.csv", heatmap_csv(grid));
    emit_file(dir / "fig2.svg",
              heatmap_svg(grid, "item-pair jaccard by popularity rank"));
    ordered_json doc = grid_stats(grid);
    doc["top_r"] = figures.top_r;
    results["fig2"] = doc;
  }
  // fig3 / fig4: neighborhood profiles
  for (const Axis axis : {Axis::kUser, Axis::kItem}) {
    const NeighborhoodProfile profile = neighborhood_sizes(matrix, axis);
    const char* name = axis == Axis::kUser ? "fig3" : "fig4";
    emit_file(dir / (std::string(name) + ".csv"), profile_csv(profile));
    emit_file(dir / (std::string(name) + ".svg"),
              profile_svg(profile, std::string(axis_name(axis)) +
                                       " neighborhood size by rank"));
    std::vector<double> counts(profile.neighbor_counts.begin(),
                               profile.neighbor_counts.end());
    ordered_json doc;
    doc["population"] = counts.size();
    doc["loglog_slope"] = log_log_slope(counts);
    results[name] = doc;
  }

  ordered_json inputs;
  inputs["in"] = flags.in_path;
  inputs["bins"] = figures.bins;
  inputs["top_r"] = figures.top_r;
  emit_file(dir / "report.json",
            envelope(inputs, results, std::nullopt).dump(2) + "\n");
}

}  // namespace

int run(const std::vector<std::string>& raw_args) {
  CLI::App app{"Collaborative-filtering popularity-skew and sparsity analytics"};
  app.name("cfmetrics");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  CommonFlags common;
  GenerateFlags generate;
  PairwiseFlags pairwise;
  ExpectFlags expect;
  SimulateFlags simulate;
  FiguresFlags figures;

  auto* ingest_cmd =
      app.add_subcommand("ingest", "normalize a click log to canonical TSV");
  add_common(ingest_cmd, common, true, true);

  auto* generate_cmd =
      app.add_subcommand("generate", "emit a synthetic Zipf click log");
  add_common(generate_cmd, common, false, true);
  generate_cmd->add_option("--users", generate.config.users, "user count W");
  generate_cmd->add_option("--items", generate.config.items, "item count M");
  generate_cmd->add_option("--clicks", generate.config.clicks_per_user,
                           "clicks per user C");
  generate_cmd->add_option("--click-dist", generate.click_dist,
                           "per-user click budget: fixed or zipf by rank")
      ->check(CLI::IsMember({"fixed", "zipf"}));
  generate_cmd->add_option("--user-exponent", generate.config.user_exponent,
                           "rank exponent for --click-dist zipf");
  generate_cmd->add_option("--s", generate.config.item_exponent,
                           "item popularity exponent");
  generate_cmd->add_option("--seed", generate.config.seed, "random seed");
  generate_cmd->add_flag("--dedup,!--no-dedup", generate.config.dedup,
                         "collapse repeated clicks (default on)");

  auto add_pairwise = [&](CLI::App* cmd, bool with_bins) {
    cmd->add_option("--axis", pairwise.axis, "user or item")
        ->check(CLI::IsMember({"user", "item"}));
    cmd->add_option("--metric", pairwise.metric, "jaccard, l1 or l2")
        ->check(CLI::IsMember({"jaccard", "l1", "l2"}));
    cmd->add_option("--top-r", pairwise.top_r,
                    "restrict to the R most popular entities (0 = all)");
    if (with_bins) {
      cmd->add_option("--bins", pairwise.bins, "rank bins per side");
    }
  };

  auto* similarity_cmd =
      app.add_subcommand("similarity", "pairwise similarity scores as CSV");
  add_common(similarity_cmd, common, true, true);
  add_pairwise(similarity_cmd, false);

  auto* heatmap_cmd =
      app.add_subcommand("heatmap", "rank-binned similarity grid (CSV + SVG)");
  add_common(heatmap_cmd, common, true, true);
  add_pairwise(heatmap_cmd, true);

  auto* profile_cmd =
      app.add_subcommand("profile", "per-rank neighborhood sizes");
  add_common(profile_cmd, common, true, true);
  add_pairwise(profile_cmd, false);

  auto* expect_cmd =
      app.add_subcommand("expect", "closed-form expectation values");
  add_common(expect_cmd, common, false, false);
  expect_cmd->add_option("--formula", expect.formula,
                         "user-similarity, overlap, item-similarity, "
                         "user-neighbors, item-neighbors, item-ratio, "
                         "click-probability or all");
  expect_cmd->add_option("--M", expect.items, "item count M");
  expect_cmd->add_option("--na", expect.clicks_a, "click-set size of user A");
  expect_cmd->add_option("--nb", expect.clicks_b, "click-set size of user B");
  expect_cmd->add_option("--W", expect.users, "user count W");
  expect_cmd->add_option("--s", expect.exponent, "popularity exponent");
  expect_cmd->add_option("--mode", expect.mode, "paper-raw or normalized")
      ->check(CLI::IsMember({"paper-raw", "normalized"}));
  expect_cmd->add_option("--variant", expect.variant, "paper or exact")
      ->check(CLI::IsMember({"paper", "exact"}));
  expect_cmd->add_option("--metric", expect.metric, "l1 or l2")
      ->check(CLI::IsMember({"l1", "l2"}));
  expect_cmd->add_option("--m", expect.m, "item A clicked by 1/m of users");
  expect_cmd->add_option("--n", expect.n, "item B clicked by 1/n of users");
  expect_cmd->add_option("--i", expect.rank_i, "item rank i");
  expect_cmd->add_option("--j", expect.rank_j, "item rank j");
  expect_cmd->add_option("--union-size", expect.union_size,
                         "fixed |A u B| (0 = default)");
  expect_cmd
      ->add_option("--item-set", expect.item_set,
                   "clicked ranks for the exact user-neighbor variant")
      ->delimiter(',');

  auto* simulate_cmd =
      app.add_subcommand("simulate", "Monte Carlo estimates with CIs");
  add_common(simulate_cmd, common, false, false);
  simulate_cmd
      ->add_option("--what", simulate.what,
                   "user-pair, item-pair or neighborhoods")
      ->check(CLI::IsMember({"user-pair", "item-pair", "neighborhoods"}));
  simulate_cmd->add_option("--trials", simulate.trials, "trial count");
  simulate_cmd->add_option("--seed", simulate.seed, "random seed");
  simulate_cmd
      ->add_option("--inclusion", simulate.inclusion,
                   "click-set model: iid or bernoulli")
      ->check(CLI::IsMember({"iid", "bernoulli"}));
  simulate_cmd->add_option("--M", simulate.model.items, "item count M");
  simulate_cmd->add_option("--na", simulate.model.clicks_a, "clicks of user A");
  simulate_cmd->add_option("--nb", simulate.model.clicks_b, "clicks of user B");
  simulate_cmd->add_option("--W", simulate.model.users, "user count W");
  simulate_cmd->add_option("--s", simulate.model.exponent,
                           "popularity exponent");
  simulate_cmd->add_option("--m", simulate.model.m,
                           "item A clicked by 1/m of users");
  simulate_cmd->add_option("--n", simulate.model.n,
                           "item B clicked by 1/n of users");
  simulate_cmd->add_option("--users", simulate.generator.config.users,
                           "generator user count");
  simulate_cmd->add_option("--items", simulate.generator.config.items,
                           "generator item count");
  simulate_cmd->add_option("--clicks",
                           simulate.generator.config.clicks_per_user,
                           "generator clicks per user");
  simulate_cmd
      ->add_option("--click-dist", simulate.generator.click_dist,
                   "generator click budget model")
      ->check(CLI::IsMember({"fixed", "zipf"}));
  simulate_cmd->add_option("--user-exponent",
                           simulate.generator.config.user_exponent,
                           "generator user-rank exponent");
  simulate_cmd->add_flag("--dedup,!--no-dedup",
                         simulate.generator.config.dedup,
                         "generator repeat-click collapse");

  auto* figures_cmd = app.add_subcommand(
      "figures", "dataset figures: similarity grids and profiles");
  add_common(figures_cmd, common, true, true);
  figures_cmd->add_option("--bins", figures.bins, "rank bins per side");
  figures_cmd->add_option("--top-r", figures.top_r,
                          "item-axis rank cap (0 = all)");

  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::vector<const char*> argv;
  argv.push_back("cfmetrics");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ingest_cmd->parsed()) {
      run_ingest(common);
    } else if (generate_cmd->parsed()) {
      run_generate(common, generate);
    } else if (similarity_cmd->parsed()) {
      run_similarity(common, pairwise);
    } else if (heatmap_cmd->parsed()) {
      run_heatmap(common, pairwise);
    } else if (profile_cmd->parsed()) {
      run_profile(common, pairwise);
    } else if (expect_cmd->parsed()) {
      run_expect(common, expect);
    } else if (simulate_cmd->parsed()) {
      run_simulate(common, simulate);
    } else if (figures_cmd->parsed()) {
      run_figures(common, figures);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace cfmetrics::cli
