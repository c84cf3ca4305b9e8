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

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sisort/harness.h"
#include "sisort/serialization.h"

namespace {

struct Overrides {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> rho;
  std::optional<std::size_t> n;
  std::optional<std::size_t> g;
  std::optional<int> mu;
  std::optional<int> sigma;
  std::optional<std::string> source;
  std::optional<std::size_t> eval_instances;
  std::string format = "json";
};

sisort::RunConfig Resolve(const Overrides& o) {
  sisort::RunConfig c =
      o.config ? sisort::LoadRunConfig(*o.config) : sisort::RunConfig{};
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.out_dir = *o.out;
  if (o.rho) c.rho = *o.rho;
  if (o.n) c.n = *o.n;
  if (o.g) c.g = *o.g;
  if (o.mu) c.mu = *o.mu;
  if (o.sigma) c.sigma = *o.sigma;
  if (o.source) {
    try {
      c.generator.source = sisort::ParseSourceMode(*o.source);
    } catch (const std::invalid_argument& e) {
      throw sisort::ConfigError(e.what());
    }
  }
  if (o.eval_instances) c.eval_instances = *o.eval_instances;
  c.Validate();
  return c;
}

void AddCommon(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "JSON run configuration");
  app->add_option("--seed", o.seed, "Seed for generation and derived streams");
  app->add_option("--out", o.out, "Output directory");
  app->add_option("--rho", o.rho, "Multiplier on the outcome sample count");
  app->add_option("--format", o.format, "Report format on stdout")
      ->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-improving sorter for instances with hidden group structure"};
  app.require_subcommand(1);
  Overrides o;
  std::string world_path;
  std::string model_path;
  std::string instances_path;

  auto* generate = app.add_subcommand("generate", "Generate and validate a world");
  AddCommon(generate, o);
  generate->add_option("--n", o.n, "Number of elements");
  generate->add_option("--g", o.g, "Number of groups");
  generate->add_option("--mu", o.mu, "Extrema bound per function");
  generate->add_option("--sigma", o.sigma, "Intersection bound per pair");
  generate->add_option("--source", o.source,
                       "continuous-uniform, truncated-gaussian, "
                       "discrete-uniform, point-mass or mixed");

  auto* learn = app.add_subcommand("learn", "Learn a model from a world or a recorded stream");
  AddCommon(learn, o);
  auto* learn_world = learn->add_option("--world", world_path, "World file");
  learn->add_option("--instances", instances_path,
                    "Recorded instances, one per line")
      ->excludes(learn_world);

  auto* sort = app.add_subcommand("sort", "Sort recorded instances with a model");
  AddCommon(sort, o);
  sort->add_option("--model", model_path, "Model file")->required();
  sort->add_option("--instances", instances_path, "Instance file")->required();

  auto* bench = app.add_subcommand("bench", "Sort fresh instances and report counters");
  AddCommon(bench, o);
  bench->add_option("--world", world_path, "World file")->required();
  bench->add_option("--model", model_path, "Model file")->required();
  bench->add_option("--instances-count", o.eval_instances,
                    "Number of evaluation instances");

  auto* diagnose = app.add_subcommand("diagnose", "Chernoff and bucket occupancy diagnostics");
  AddCommon(diagnose, o);
  diagnose->add_option("--world", world_path, "World file")->required();
  diagnose->add_option("--model", model_path, "Model file")->required();

  auto* partition = app.add_subcommand("learn-partition",
                                       "Learn only the partition, with the pairwise statistics");
  AddCommon(partition, o);
  partition->add_option("--world", world_path, "World file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const sisort::RunConfig config = Resolve(o);
    if (*generate) return sisort::cmd_generate(config, std::cerr);
    if (*learn) {
      std::optional<std::filesystem::path> w;
      std::optional<std::filesystem::path> i;
      if (!world_path.empty()) w = world_path;
      if (!instances_path.empty()) i = instances_path;
      return sisort::cmd_learn(config, w, i, std::cerr);
    }
    if (*sort) {
      return sisort::cmd_sort(config, model_path, instances_path, std::cout,
                              std::cerr);
    }
    if (*bench) {
      return sisort::cmd_bench(config, world_path, model_path,
                               o.format == "csv", std::cout, std::cerr);
    }
    if (*diagnose) {
      return sisort::cmd_diagnose(config, world_path, model_path, std::cerr);
    }
    if (*partition) {
      return sisort::cmd_learn_partition(config, world_path, std::cerr);
    }
  } catch (const sisort::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return sisort::kExitValidation;
  } catch (const sisort::FormatError& e) {
    std::cerr << "load error: " << e.what() << '\n';
    return sisort::kExitValidation;
  } catch (const sisort::GenerationError& e) {
    std::cerr << "generation error: " << e.what() << '\n';
    return sisort::kExitValidation;
  } catch (const sisort::InsufficientInstances& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sisort::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sisort::kExitError;
  }
  return sisort::kExitError;
}
