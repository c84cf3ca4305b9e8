/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sisort/harness.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "sisort/operation.h"
#include "sisort/oracle.h"
#include "sisort/partition_learning.h"
#include "sisort/serialization.h"
#include "sisort/vlist.h"

namespace sisort {

using nlohmann::json;

namespace {

constexpr std::uint64_t kLearnStream = 1;
constexpr std::uint64_t kEvalStream = 2;
constexpr std::uint64_t kChernoffStream = 3;

template <typename T>
T Field(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

std::uint64_t RunConfig::LearnSeed() const {
  return learn_seed != 0 ? learn_seed : MixSeed(seed ^ 0x6c6561726eULL);
}

std::uint64_t RunConfig::EvalSeed() const {
  return eval_seed != 0 ? eval_seed : MixSeed(seed ^ 0x6576616cULL);
}

void RunConfig::Validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (n == 0) fail("n must be positive");
  if (g == 0 || g > n) fail("g must be in [1, n]");
  if (mu < 0) fail("mu must be non-negative");
  if (sigma < 0) fail("sigma must be non-negative");
  if (!(rho > 0.0 && rho <= 1.0)) fail("rho must be in (0, 1]");
  if (eval_instances == 0) fail("eval_instances must be positive");
  if (chernoff_runs == 0) fail("chernoff_runs must be positive");
  if (node_budget == 0) fail("node_budget must be positive");
  if (generator.discrete_atoms <= 0) fail("discrete_atoms must be positive");
  if (generator.attempt_budget <= 0) fail("attempt_budget must be positive");
}

RunConfig RunConfigFromJson(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const char* const kKeys[] = {
      "n",          "g",
      "mu",         "sigma",
      "source",     "discrete_atoms",
      "family",     "attempt_budget",
      "seed",       "learn_seed",
      "eval_seed",  "lambda",
      "partition_samples", "rho",
      "eval_instances",    "chernoff_runs",
      "node_budget",       "out_dir"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find_if(std::begin(kKeys), std::end(kKeys), [&](const char* k) {
          return key == k;
        }) == std::end(kKeys)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  RunConfig c;
  c.n = Field(doc, "n", c.n);
  c.g = Field(doc, "g", c.g);
  c.mu = Field(doc, "mu", c.mu);
  c.sigma = Field(doc, "sigma", c.sigma);
  try {
    if (doc.contains("source")) {
      c.generator.source =
          ParseSourceMode(Field<std::string>(doc, "source", ""));
    }
    if (doc.contains("family")) {
      c.generator.family = ParseFamily(Field<std::string>(doc, "family", ""));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  c.generator.discrete_atoms =
      Field(doc, "discrete_atoms", c.generator.discrete_atoms);
  c.generator.attempt_budget =
      Field(doc, "attempt_budget", c.generator.attempt_budget);
  c.seed = Field(doc, "seed", c.seed);
  c.learn_seed = Field(doc, "learn_seed", c.learn_seed);
  c.eval_seed = Field(doc, "eval_seed", c.eval_seed);
  c.lambda = Field(doc, "lambda", c.lambda);
  c.partition_samples = Field(doc, "partition_samples", c.partition_samples);
  c.rho = Field(doc, "rho", c.rho);
  c.eval_instances = Field(doc, "eval_instances", c.eval_instances);
  c.chernoff_runs = Field(doc, "chernoff_runs", c.chernoff_runs);
  c.node_budget = Field(doc, "node_budget", c.node_budget);
  c.out_dir = Field(doc, "out_dir", c.out_dir);
  c.Validate();
  return c;
}

json RunConfigToJson(const RunConfig& c) {
  return {{"n", c.n},
          {"g", c.g},
          {"mu", c.mu},
          {"sigma", c.sigma},
          {"source", std::string(SourceModeName(c.generator.source))},
          {"discrete_atoms", c.generator.discrete_atoms},
          {"family", std::string(FamilyName(c.generator.family))},
          {"attempt_budget", c.generator.attempt_budget},
          {"seed", c.seed},
          {"learn_seed", c.learn_seed},
          {"eval_seed", c.eval_seed},
          {"lambda", c.lambda},
          {"partition_samples", c.partition_samples},
          {"rho", c.rho},
          {"eval_instances", c.eval_instances},
          {"chernoff_runs", c.chernoff_runs},
          {"node_budget", c.node_budget},
          {"out_dir", c.out_dir}};
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return RunConfigFromJson(doc);
}

WorldStream::WorldStream(const World& world, std::uint64_t seed,
                         std::uint64_t stream)
    : world_(world), rng_(seed, stream) {}

Instance WorldStream::Next() { return draw_instance(world_, rng_); }

std::size_t WorldStream::Remaining() const {
  return std::numeric_limits<std::size_t>::max();
}

RecordedStream::RecordedStream(std::vector<Instance> instances)
    : instances_(std::move(instances)) {}

Instance RecordedStream::Next() {
  if (next_ >= instances_.size()) {
    throw InsufficientInstances("recorded stream exhausted");
  }
  return instances_[next_++];
}

std::size_t RecordedStream::Remaining() const {
  return instances_.size() - next_;
}

LearnSettings SettingsFor(const RunConfig& config) {
  LearnSettings s;
  s.n = config.n;
  s.mu = config.mu;
  s.sigma = config.sigma;
  s.rho = config.rho;
  s.lambda = config.lambda;
  s.partition_samples = config.partition_samples;
  s.seed = config.LearnSeed();
  s.search.node_budget = config.node_budget;
  return s;
}

namespace {

std::size_t PartitionRows(const LearnSettings& s) {
  return s.partition_samples != 0 ? s.partition_samples
                                  : PartitionSampleCount(s.mu);
}

std::size_t Lambda(const LearnSettings& s) {
  return s.lambda != 0 ? s.lambda : LandmarkSampleCount(s.n);
}

std::uint64_t ScaledSamples(std::uint64_t formula, double rho) {
  const double scaled = std::ceil(rho * static_cast<double>(formula));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(scaled));
}

}  // namespace

std::uint64_t LearnInstanceCount(const LearnSettings& settings,
                                 std::size_t max_group_size) {
  return PartitionRows(settings) + Lambda(settings) +
         ScaledSamples(PoSampleSize(settings.n, max_group_size, settings.mu,
                                    settings.sigma),
                       settings.rho);
}

LearnedModel learn_model(InstanceStream& stream,
                         const LearnSettings& settings) {
  if (settings.n == 0) throw std::invalid_argument("n must be positive");
  const std::size_t rows = PartitionRows(settings);
  const std::size_t lambda = Lambda(settings);
  const std::size_t available = stream.Remaining();
  if (available < rows + lambda) {
    throw InsufficientInstances(
        "recorded stream has " + std::to_string(available) +
        " instances; partition learning needs " + std::to_string(rows) +
        " and the landmarks " + std::to_string(lambda) +
        ", before any outcome samples");
  }

  SampleMatrix matrix(rows, settings.n);
  for (std::size_t r = 0; r < rows; ++r) {
    const Instance instance = stream.Next();
    if (instance.values.size() != settings.n) {
      throw std::invalid_argument("instance size does not match n");
    }
    matrix.SetRow(r, instance.values);
  }
  PartitionLearningOptions popts;
  popts.search = settings.search;
  PartitionResult partition = learn_partition(matrix, settings.mu, popts);

  std::vector<Instance> landmark_instances;
  for (std::size_t i = 0; i < lambda; ++i) {
    landmark_instances.push_back(stream.Next());
  }
  VList vlist = build_vlist(landmark_instances, settings.n, lambda);

  std::size_t max_group = 0;
  for (const auto& g : partition.groups) max_group = std::max(max_group, g.size());
  const std::uint64_t formula =
      PoSampleSize(settings.n, max_group, settings.mu, settings.sigma);
  const std::uint64_t samples = ScaledSamples(formula, settings.rho);
  if (stream.Remaining() < samples) {
    const std::uint64_t needed = rows + lambda + samples;
    throw InsufficientInstances(
        "recorded stream has " + std::to_string(available) +
        " instances but learning needs " + std::to_string(rows) +
        " (partition) + " + std::to_string(lambda) + " (landmarks) + " +
        std::to_string(samples) + " (outcomes) = " + std::to_string(needed) +
        "; short by " + std::to_string(needed - available));
  }

  ModelParams params{settings.n, settings.mu, settings.sigma, settings.rho};
  LearnedModel model = learn_po_distribution(stream, std::move(partition),
                                             std::move(vlist), samples, params);
  model.provenance.seed = settings.seed;
  model.provenance.partition_samples = rows;
  model.provenance.landmark_instances = lambda;
  model.provenance.po_sample_formula = formula;
  model.provenance.po_samples = samples;
  return model;
}

BenchResult run_bench(const World& world, const LearnedModel& model,
                      std::size_t instances, std::uint64_t seed) {
  if (world.n() != model.n) {
    throw std::invalid_argument("model and world disagree on n");
  }
  BenchResult bench;
  WorldStream stream(world, seed, kEvalStream);
  std::map<std::vector<std::size_t>, std::uint64_t> pi_counts;
  std::vector<std::map<PoVector, std::uint64_t>> po_counts(model.groups.size());
  std::vector<double> group_values;
  for (std::size_t run = 0; run < instances; ++run) {
    const Instance instance = stream.Next();
    SortResult sorted = sort_instance(model, instance);
    if (sorted.ranks != oracle::reference_sort(instance.values)) {
      bench.oracle_ok = false;
      bench.failing_run = run;
      bench.failing_instance = instance;
      return bench;
    }
    ++pi_counts[sorted.order];
    for (std::size_t k = 0; k < model.groups.size(); ++k) {
      group_values.clear();
      for (std::size_t e : model.groups[k].members) {
        group_values.push_back(instance.values[e]);
      }
      ++po_counts[k][encode_po(group_values, model.vlist)];
    }
    for (const DescentRecord& d : sorted.report.descents) {
      const double info =
          static_cast<double>(d.group_size) +
          std::log2(static_cast<double>(d.samples) /
                    static_cast<double>(d.leaf_count));
      if (static_cast<double>(d.comparisons) > 3.0 * info + 8.0) {
        ++bench.descent_bound_violations;
      }
      bench.max_descent_ratio = std::max(
          bench.max_descent_ratio, static_cast<double>(d.comparisons) / info);
    }
    bench.runs.push_back(std::move(sorted.report));
  }

  const double m = static_cast<double>(instances);
  for (const RunReport& r : bench.runs) {
    bench.mean_comparisons += static_cast<double>(r.total_comparisons()) / m;
    bench.mean_descent += static_cast<double>(r.descent_comparisons) / m;
    bench.mean_fallback += static_cast<double>(r.fallback_comparisons) / m;
    bench.mean_merge += static_cast<double>(r.merge_comparisons) / m;
    bench.fast += r.fast_count;
    bench.fallback += r.fallback_count;
  }
  std::vector<std::uint64_t> counts;
  for (const auto& [perm, c] : pi_counts) counts.push_back(c);
  bench.pi_entropy = plugin_entropy(counts);
  for (const auto& group : po_counts) {
    counts.clear();
    for (const auto& [vec, c] : group) counts.push_back(c);
    bench.po_entropy.push_back(plugin_entropy(counts));
    bench.po_entropy_sum += bench.po_entropy.back().bits;
  }
  bench.fitted_c = bench.mean_comparisons /
                   (bench.pi_entropy.bits + static_cast<double>(model.n));
  bench.occupancy = bucket_occupancy_stats(bench.runs);
  return bench;
}

std::string BenchCsv(const BenchResult& bench) {
  std::ostringstream out;
  out << "run,comparisons,descent,fallback,merge,fast,fallback_groups,"
         "nonempty_buckets,max_sublists\n";
  for (std::size_t i = 0; i < bench.runs.size(); ++i) {
    const RunReport& r = bench.runs[i];
    std::size_t nonempty = 0;
    std::uint32_t widest = 0;
    for (std::uint32_t s : r.bucket_sublists) {
      if (s > 0) ++nonempty;
      widest = std::max(widest, s);
    }
    out << i << ',' << r.total_comparisons() << ',' << r.descent_comparisons
        << ',' << r.fallback_comparisons << ',' << r.merge_comparisons << ','
        << r.fast_count << ',' << r.fallback_count << ',' << nonempty << ','
        << widest << '\n';
  }
  return out.str();
}

namespace {

json EntropyJson(const EntropyEstimate& e) {
  return {{"bits", e.bits},
          {"support", e.support},
          {"samples", e.samples},
          {"std_error", e.std_error},
          {"small_sample", e.small_sample}};
}

}  // namespace

json BenchSummaryJson(const BenchResult& bench, const LearnedModel& model) {
  json po = json::array();
  for (const auto& e : bench.po_entropy) po.push_back(EntropyJson(e));
  return {{"n", model.n},
          {"groups", model.groups.size()},
          {"runs", bench.runs.size()},
          {"mean_comparisons", bench.mean_comparisons},
          {"mean_descent_comparisons", bench.mean_descent},
          {"mean_fallback_comparisons", bench.mean_fallback},
          {"mean_merge_comparisons", bench.mean_merge},
          {"fast", bench.fast},
          {"fallback", bench.fallback},
          {"pi_entropy", EntropyJson(bench.pi_entropy)},
          {"po_entropy", std::move(po)},
          {"po_entropy_sum", bench.po_entropy_sum},
          {"fitted_c", bench.fitted_c},
          {"occupancy",
           {{"mean_nonempty", bench.occupancy.mean_nonempty},
            {"max_sublists", bench.occupancy.max_sublists},
            {"nonempty_buckets", bench.occupancy.nonempty_buckets}}},
          {"descent_bound_violations", bench.descent_bound_violations},
          {"max_descent_ratio", bench.max_descent_ratio}};
}

DiagnoseResult run_diagnose(const World& world, const LearnedModel& model,
                            std::uint64_t runs, std::uint64_t seed) {
  DiagnoseResult result;
  for (std::size_t k = 0; k < model.groups.size(); ++k) {
    const GroupPoModel& group = model.groups[k];
    // The diagnostic needs the true group behind the learned one.
    const std::size_t truth = world.group_of(group.members.front());
    if (world.group(truth).members != group.members) continue;
    if (!world.group(truth).source.discrete()) continue;
    const oracle::OutcomeDistribution dist =
        oracle::enumerate_outcomes(world, truth, model.vlist);
    std::vector<PoVector> by_atom;
    for (std::size_t a = 0; a < dist.atoms; ++a) {
      by_atom.push_back(encode_po(world.AtomValues(truth, a), model.vlist));
    }
    auto draw = [&](Rng& rng) { return by_atom[rng.Below(by_atom.size())]; };
    result.groups.push_back(k);
    result.support.push_back(dist.outcomes.size());
    result.bound.push_back(dist.bound);
    result.chernoff.push_back(chernoff_diagnostic(
        dist.outcomes, runs, group.samples, draw,
        MixSeed(seed + k * kChernoffStream)));
    result.violations += result.chernoff.back().violations;
  }
  return result;
}

json DiagnoseJson(const DiagnoseResult& result) {
  json groups = json::array();
  for (std::size_t i = 0; i < result.groups.size(); ++i) {
    const ChernoffReport& c = result.chernoff[i];
    json rows = json::array();
    for (const ChernoffRow& row : c.rows) {
      rows.push_back({{"outcome", FormatPoVector(row.outcome)},
                      {"p", row.p},
                      {"events", row.events},
                      {"rate", row.rate},
                      {"bound", row.bound},
                      {"margin", row.margin},
                      {"violated", row.violated}});
    }
    groups.push_back({{"group", result.groups[i]},
                      {"support", result.support[i]},
                      {"bound_W", result.bound[i]},
                      {"runs", c.runs},
                      {"samples", c.samples},
                      {"rows", std::move(rows)}});
  }
  return {{"groups", std::move(groups)}, {"violations", result.violations}};
}

json PartitionJson(const PartitionResult& partition) {
  const std::size_t n = partition.n();
  json decisions = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    std::string row;
    for (std::size_t j = 0; j < n; ++j) {
      const std::int8_t d = partition.pair_decision[i * n + j];
      row += d < 0 ? '.' : static_cast<char>('0' + d);
    }
    decisions.push_back(std::move(row));
  }
  json doc = {{"groups", partition.groups}, {"pair_decision", decisions}};
  if (!partition.pairwise_statistic.empty()) {
    json stats = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      stats.push_back(std::vector<int>(
          partition.pairwise_statistic.begin() +
              static_cast<std::ptrdiff_t>(i * n),
          partition.pairwise_statistic.begin() +
              static_cast<std::ptrdiff_t>((i + 1) * n)));
    }
    doc["pairwise_statistic"] = std::move(stats);
  }
  return doc;
}

namespace {

std::filesystem::path OutPath(const RunConfig& config, const char* name) {
  return std::filesystem::path(config.out_dir) / name;
}

World ReadWorld(const std::filesystem::path& path) {
  return LoadWorld(ReadFile(path));
}

LearnedModel ReadModel(const std::filesystem::path& path) {
  return LoadModel(ReadFile(path));
}

}  // namespace

int cmd_generate(const RunConfig& config, std::ostream& log) {
  World world = [&] {
    try {
      return generate_world(config.n, config.g, config.mu, config.sigma,
                            config.seed, config.generator);
    } catch (const GenerationError& e) {
      log << "generation failed: " << e.what() << '\n';
      throw;
    }
  }();
  const ValidationReport report =
      validate_world(world, config.mu, config.sigma);
  WriteFile(OutPath(config, "world.json"), SaveWorld(world));
  WriteFile(OutPath(config, "validation.json"),
            ValidationToJson(report).dump(1) + "\n");
  if (!report.ok()) {
    for (const auto& v : report.violations) log << "violation: " << v << '\n';
    return kExitValidation;
  }
  log << "wrote " << OutPath(config, "world.json").string() << " ("
      << world.groups().size() << " groups, n = " << world.n() << ")\n";
  return kExitOk;
}

int cmd_learn(const RunConfig& config,
              const std::optional<std::filesystem::path>& world_path,
              const std::optional<std::filesystem::path>& instances_path,
              std::ostream& log) {
  LearnSettings settings = SettingsFor(config);
  LearnedModel model;
  if (instances_path) {
    std::vector<Instance> instances = ParseInstances(ReadFile(*instances_path));
    if (!instances.empty()) settings.n = instances.front().values.size();
    RecordedStream stream(std::move(instances));
    model = learn_model(stream, settings);
  } else if (world_path) {
    const World world = ReadWorld(*world_path);
    settings.n = world.n();
    settings.mu = world.mu();
    settings.sigma = world.sigma();
    WorldStream stream(world, settings.seed, kLearnStream);
    model = learn_model(stream, settings);
  } else {
    throw ConfigError("learn needs a world file or a recorded instance file");
  }
  WriteFile(OutPath(config, "model.json"), SaveModel(model));
  log << "wrote " << OutPath(config, "model.json").string() << " ("
      << model.groups.size() << " groups, T = " << model.provenance.po_samples
      << ")\n";
  return kExitOk;
}

int cmd_sort(const RunConfig& config, const std::filesystem::path& model_path,
             const std::filesystem::path& instances_path, std::ostream& out,
             std::ostream& log) {
  const LearnedModel model = ReadModel(model_path);
  const std::vector<Instance> instances =
      ParseInstances(ReadFile(instances_path));
  json reports = json::array();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const SortResult result = sort_instance(model, instances[i]);
    if (result.ranks != oracle::reference_sort(instances[i].values)) {
      log << "instance " << i << " disagrees with the reference sort\n";
      return kExitOracleMismatch;
    }
    if (i > 0) out << '\n';
    for (std::size_t r : result.ranks) out << r << '\n';
    const RunReport& rep = result.report;
    reports.push_back({{"descent", rep.descent_comparisons},
                       {"fallback", rep.fallback_comparisons},
                       {"merge", rep.merge_comparisons},
                       {"fast", rep.fast_count},
                       {"fallback_groups", rep.fallback_count},
                       {"bucket_sublists", rep.bucket_sublists}});
  }
  WriteFile(OutPath(config, "sort_report.json"), reports.dump(1) + "\n");
  return kExitOk;
}

int cmd_bench(const RunConfig& config, const std::filesystem::path& world_path,
              const std::filesystem::path& model_path, bool csv_to_stdout,
              std::ostream& out, std::ostream& log) {
  const World world = ReadWorld(world_path);
  const LearnedModel model = ReadModel(model_path);
  if (world.n() != model.n) {
    log << "model n = " << model.n << " does not match world n = "
        << world.n() << '\n';
    return kExitValidation;
  }
  const BenchResult bench =
      run_bench(world, model, config.eval_instances, config.EvalSeed());
  if (!bench.oracle_ok) {
    const auto path = OutPath(config, "failing_instance.txt");
    WriteFile(path, FormatInstances(std::span(&bench.failing_instance, 1)));
    log << "run " << bench.failing_run
        << " disagrees with the reference sort; instance saved to "
        << path.string() << '\n';
    return kExitOracleMismatch;
  }
  const std::string csv = BenchCsv(bench);
  const std::string summary = BenchSummaryJson(bench, model).dump(1) + "\n";
  WriteFile(OutPath(config, "bench.csv"), csv);
  WriteFile(OutPath(config, "bench_summary.json"), summary);
  out << (csv_to_stdout ? csv : summary);
  return kExitOk;
}

int cmd_diagnose(const RunConfig& config,
                 const std::filesystem::path& world_path,
                 const std::filesystem::path& model_path, std::ostream& log) {
  const World world = ReadWorld(world_path);
  const LearnedModel model = ReadModel(model_path);
  if (world.n() != model.n) {
    log << "model n = " << model.n << " does not match world n = "
        << world.n() << '\n';
    return kExitValidation;
  }
  const DiagnoseResult diag =
      run_diagnose(world, model, config.chernoff_runs, config.EvalSeed());
  const BenchResult bench =
      run_bench(world, model, config.eval_instances, config.EvalSeed());
  if (!bench.oracle_ok) {
    log << "run " << bench.failing_run
        << " disagrees with the reference sort\n";
    return kExitOracleMismatch;
  }
  json doc = DiagnoseJson(diag);
  doc["occupancy"] = {{"mean_nonempty", bench.occupancy.mean_nonempty},
                      {"max_sublists", bench.occupancy.max_sublists},
                      {"bucket_mean", bench.occupancy.bucket_mean}};
  WriteFile(OutPath(config, "diagnose.json"), doc.dump(1) + "\n");
  log << "chernoff violations: " << diag.violations
      << ", mean |S_r| over nonempty buckets: "
      << bench.occupancy.mean_nonempty << '\n';
  return kExitOk;
}

int cmd_learn_partition(const RunConfig& config,
                        const std::filesystem::path& world_path,
                        std::ostream& log) {
  const World world = ReadWorld(world_path);
  const std::size_t rows = config.partition_samples != 0
                               ? config.partition_samples
                               : PartitionSampleCount(world.mu());
  WorldStream stream(world, config.LearnSeed(), kLearnStream);
  SampleMatrix matrix(rows, world.n());
  for (std::size_t r = 0; r < rows; ++r) matrix.SetRow(r, stream.Next().values);
  PartitionLearningOptions options;
  options.search.node_budget = config.node_budget;
  options.record_statistics = true;
  const PartitionResult result = learn_partition(matrix, world.mu(), options);
  std::vector<std::vector<std::size_t>> truth;
  for (const auto& g : world.groups()) truth.push_back(g.members);
  json doc = PartitionJson(result);
  doc["recovered"] = result.groups == truth;
  WriteFile(OutPath(config, "partition.json"), doc.dump(1) + "\n");
  log << (result.groups == truth ? "recovered" : "did not recover")
      << " the ground-truth partition (" << result.groups.size()
      << " groups learned, " << truth.size() << " true)\n";
  return kExitOk;
}

}  // namespace sisort
