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

#ifndef SISORT_SERIALIZATION_H_
#define SISORT_SERIALIZATION_H_

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sisort/instance_model.h"
#include "sisort/po_model.h"

namespace sisort {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rationals are written as "p/q" strings, so worlds round-trip exactly.
nlohmann::json WorldToJson(const World& world);
World WorldFromJson(const nlohmann::json& doc);

// Each group's trie is written as nested nodes weighted "chi/T". Loading
// checks the weight sums and rebuilds the trie, which is deterministic.
nlohmann::json ModelToJson(const LearnedModel& model);
LearnedModel ModelFromJson(const nlohmann::json& doc);

std::string SaveWorld(const World& world);
World LoadWorld(std::string_view text);
std::string SaveModel(const LearnedModel& model);
LearnedModel LoadModel(std::string_view text);

nlohmann::json ValidationToJson(const ValidationReport& report);

// Shortest decimal text that reads back to the same double.
std::string FormatDouble(double value);

// One instance per line, values separated by spaces; '#' starts a comment.
std::string FormatInstances(std::span<const Instance> instances);
std::vector<Instance> ParseInstances(std::string_view text);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view content);

}  // namespace sisort

#endif  // SISORT_SERIALIZATION_H_
