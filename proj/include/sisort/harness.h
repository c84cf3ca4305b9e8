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

#ifndef SISORT_HARNESS_H_
#define SISORT_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sisort/instance_model.h"
#include "sisort/metrics.h"
#include "sisort/monotone_partition.h"
#include "sisort/po_model.h"

namespace sisort {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A recorded stream ran out before learning finished.
class InsufficientInstances : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::size_t n = 16;
  std::size_t g = 4;
  int mu = 1;
  int sigma = 1;
  GeneratorOptions generator{SourceMode::kContinuousUniform};
  std::uint64_t seed = 1;        // world generation
  std::uint64_t learn_seed = 0;  // 0: derived from seed
  std::uint64_t eval_seed = 0;   // 0: derived from seed
  std::size_t lambda = 0;             // 0: ceil(log2 n)
  std::size_t partition_samples = 0;  // 0: max(mu^4, 128)
  double rho = 1.0;
  std::size_t eval_instances = 200;
  std::uint64_t chernoff_runs = 1000;
  std::uint64_t node_budget = MonotoneSearchOptions{}.node_budget;
  std::string out_dir = "out";

  std::uint64_t LearnSeed() const;
  std::uint64_t EvalSeed() const;
  // Throws ConfigError.
  void Validate() const;
};

// Unknown keys are rejected. Throws ConfigError.
RunConfig RunConfigFromJson(const nlohmann::json& doc);
nlohmann::json RunConfigToJson(const RunConfig& config);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Fresh instances from a world, one RNG stream per seed.
class WorldStream : public InstanceStream {
 public:
  WorldStream(const World& world, std::uint64_t seed, std::uint64_t stream);
  Instance Next() override;
  std::size_t Remaining() const override;

 private:
  const World& world_;
  Rng rng_;
};

class RecordedStream : public InstanceStream {
 public:
  explicit RecordedStream(std::vector<Instance> instances);
  Instance Next() override;
  std::size_t Remaining() const override;
  std::size_t consumed() const { return next_; }

 private:
  std::vector<Instance> instances_;
  std::size_t next_ = 0;
};

struct LearnSettings {
  std::size_t n = 0;
  int mu = 0;
  int sigma = 0;
  double rho = 1.0;
  std::size_t lambda = 0;             // 0: ceil(log2 n)
  std::size_t partition_samples = 0;  // 0: max(mu^4, 128)
  std::uint64_t seed = 0;             // recorded in the provenance
  MonotoneSearchOptions search;
};

LearnSettings SettingsFor(const RunConfig& config);

// Partition, then landmarks, then outcome counts, each on fresh instances.
// Throws InsufficientInstances when a recorded stream is too short.
LearnedModel learn_model(InstanceStream& stream, const LearnSettings& settings);

// Instances learn_model will consume once the largest group size is known.
std::uint64_t LearnInstanceCount(const LearnSettings& settings,
                                 std::size_t max_group_size);

struct BenchResult {
  std::vector<RunReport> runs;
  bool oracle_ok = true;
  std::size_t failing_run = 0;
  Instance failing_instance;

  double mean_comparisons = 0.0;
  double mean_descent = 0.0;
  double mean_fallback = 0.0;
  double mean_merge = 0.0;
  std::uint64_t fast = 0;
  std::uint64_t fallback = 0;
  EntropyEstimate pi_entropy;            // plug-in over the run permutations
  std::vector<EntropyEstimate> po_entropy;  // per group
  double po_entropy_sum = 0.0;
  double fitted_c = 0.0;  // mean_comparisons / (H(pi) + n)
  OccupancyStats occupancy;
  // FAST descents above 3 (n_k + log2(T / chi)) + 8 comparisons.
  std::uint64_t descent_bound_violations = 0;
  double max_descent_ratio = 0.0;  // comparisons / (n_k + log2(T / chi))
};

// Sorts `instances` fresh instances and checks each against the reference
// sort. Stops at the first mismatch.
BenchResult run_bench(const World& world, const LearnedModel& model,
                      std::size_t instances, std::uint64_t seed);

std::string BenchCsv(const BenchResult& bench);
nlohmann::json BenchSummaryJson(const BenchResult& bench,
                                const LearnedModel& model);

struct DiagnoseResult {
  std::vector<std::size_t> groups;  // groups with discrete sources
  std::vector<ChernoffReport> chernoff;
  std::vector<std::size_t> support;  // exact outcome counts per group
  std::vector<std::uint64_t> bound;  // W per group
  std::size_t violations = 0;
};

// Chernoff check for every discrete group, `runs` learning repetitions at
// the model's per-group sample count.
DiagnoseResult run_diagnose(const World& world, const LearnedModel& model,
                            std::uint64_t runs, std::uint64_t seed);
nlohmann::json DiagnoseJson(const DiagnoseResult& result);

nlohmann::json PartitionJson(const PartitionResult& partition);

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitValidation = 2,
  kExitOracleMismatch = 3,
};

// Command bodies behind the CLI. Files go under config.out_dir; progress and
// errors go to `log`.
int cmd_generate(const RunConfig& config, std::ostream& log);
int cmd_learn(const RunConfig& config,
              const std::optional<std::filesystem::path>& world_path,
              const std::optional<std::filesystem::path>& instances_path,
              std::ostream& log);
int cmd_sort(const RunConfig& config, const std::filesystem::path& model_path,
             const std::filesystem::path& instances_path, std::ostream& out,
             std::ostream& log);
int cmd_bench(const RunConfig& config, const std::filesystem::path& world_path,
              const std::filesystem::path& model_path, bool csv_to_stdout,
              std::ostream& out, std::ostream& log);
int cmd_diagnose(const RunConfig& config,
                 const std::filesystem::path& world_path,
                 const std::filesystem::path& model_path, std::ostream& log);
int cmd_learn_partition(const RunConfig& config,
                        const std::filesystem::path& world_path,
                        std::ostream& log);

}  // namespace sisort

#endif  // SISORT_HARNESS_H_
