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

#include "sisort/serialization.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sisort {

using nlohmann::json;

namespace {

constexpr int kVersion = 1;

void Expect(bool ok, const std::string& what) {
  if (!ok) throw FormatError(what);
}

void ExpectHeader(const json& doc, std::string_view kind) {
  Expect(doc.is_object(), "document is not a JSON object");
  Expect(doc.value("format", "") == kind,
         "expected a " + std::string(kind) + " document");
  Expect(doc.value("version", 0) == kVersion,
         "unsupported " + std::string(kind) + " version");
}

json SourceToJson(const HiddenSource& s) {
  json out;
  out["kind"] = std::string(SourceKindName(s.kind));
  switch (s.kind) {
    case HiddenSource::Kind::kContinuousUniform:
      out["lo"] = FormatRational(s.lo);
      out["hi"] = FormatRational(s.hi);
      break;
    case HiddenSource::Kind::kTruncatedGaussian:
      out["mean"] = FormatRational(s.mean);
      out["sd"] = FormatRational(s.sd);
      out["lo"] = FormatRational(s.lo);
      out["hi"] = FormatRational(s.hi);
      break;
    case HiddenSource::Kind::kDiscreteUniform: {
      json atoms = json::array();
      for (const Rational& a : s.atoms) atoms.push_back(FormatRational(a));
      out["atoms"] = std::move(atoms);
      break;
    }
  }
  return out;
}

Rational RationalAt(const json& obj, const char* key) {
  return ParseRational(obj.at(key).get<std::string>());
}

HiddenSource SourceFromJson(const json& j) {
  switch (ParseSourceKind(j.at("kind").get<std::string>())) {
    case HiddenSource::Kind::kContinuousUniform:
      return HiddenSource::ContinuousUniform(RationalAt(j, "lo"),
                                             RationalAt(j, "hi"));
    case HiddenSource::Kind::kTruncatedGaussian:
      return HiddenSource::TruncatedGaussian(
          RationalAt(j, "mean"), RationalAt(j, "sd"), RationalAt(j, "lo"),
          RationalAt(j, "hi"));
    case HiddenSource::Kind::kDiscreteUniform: {
      std::vector<Rational> atoms;
      for (const json& a : j.at("atoms")) {
        atoms.push_back(ParseRational(a.get<std::string>()));
      }
      return HiddenSource::DiscreteUniform(std::move(atoms));
    }
  }
  throw FormatError("unknown source kind");
}

template <typename F>
auto Guarded(std::string_view what, F&& body) {
  try {
    return body();
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError("malformed " + std::string(what) + ": " + e.what());
  }
}

double ParseDouble(std::string_view token) {
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size() ||
      !std::isfinite(value)) {
    throw FormatError("not a finite number: '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

json WorldToJson(const World& world) {
  json doc;
  doc["format"] = "sisort-world";
  doc["version"] = kVersion;
  doc["n"] = world.n();
  doc["mu"] = world.mu();
  doc["sigma"] = world.sigma();
  doc["seed"] = world.seed();
  json groups = json::array();
  for (const GroupModel& g : world.groups()) {
    json functions = json::array();
    for (const PiecewiseLinearFunction& f : g.functions) {
      json vertices = json::array();
      for (const Vertex& v : f.vertices()) {
        vertices.push_back({FormatRational(v.z), FormatRational(v.y)});
      }
      functions.push_back(std::move(vertices));
    }
    groups.push_back({{"id", g.id},
                      {"members", g.members},
                      {"source", SourceToJson(g.source)},
                      {"functions", std::move(functions)}});
  }
  doc["groups"] = std::move(groups);
  return doc;
}

World WorldFromJson(const json& doc) {
  ExpectHeader(doc, "sisort-world");
  return Guarded("world", [&] {
    std::vector<GroupModel> groups;
    for (const json& g : doc.at("groups")) {
      GroupModel group;
      group.id = g.at("id").get<std::size_t>();
      group.members = g.at("members").get<std::vector<std::size_t>>();
      group.source = SourceFromJson(g.at("source"));
      for (const json& f : g.at("functions")) {
        std::vector<Vertex> vertices;
        for (const json& v : f) {
          Expect(v.is_array() && v.size() == 2, "vertex must be [z, y]");
          vertices.push_back({ParseRational(v[0].get<std::string>()),
                              ParseRational(v[1].get<std::string>())});
        }
        group.functions.emplace_back(std::move(vertices));
      }
      groups.push_back(std::move(group));
    }
    return World(doc.at("n").get<std::size_t>(), doc.at("mu").get<int>(),
                 doc.at("sigma").get<int>(),
                 doc.at("seed").get<std::uint64_t>(), std::move(groups));
  });
}

namespace {

std::string Weight(std::uint64_t count, std::uint64_t total) {
  return std::to_string(count) + "/" + std::to_string(total);
}

json TrieNodeToJson(const PoTrie& trie, std::uint32_t id) {
  const PoTrie::Node& node = trie.nodes()[id];
  json out = {{"w", Weight(node.count, trie.total())}};
  if (node.leaf >= 0) return out;
  json children = json::array();
  for (std::uint32_t i = 0; i < node.edge_count; ++i) {
    const PoTrie::Edge& e = trie.edges()[node.first_edge + i];
    children.push_back({FormatPoRef(e.ref), TrieNodeToJson(trie, e.target)});
  }
  out["children"] = std::move(children);
  return out;
}

json TrieToJson(const PoTrie& trie) { return TrieNodeToJson(trie, 0); }

// Reads "chi/T", checking T.
std::uint64_t ReadWeight(const json& node, std::uint64_t total) {
  const std::string text = node.at("w").get<std::string>();
  const auto slash = text.find('/');
  Expect(slash != std::string::npos, "trie weight must be chi/T");
  Expect(std::stoull(text.substr(slash + 1)) == total,
         "trie weight denominator differs from the sample count");
  return std::stoull(text.substr(0, slash));
}

// Collects root-to-leaf paths and checks that every internal weight is the
// sum of its children.
void CollectOutcomes(const json& node, std::uint64_t total, PoVector& path,
                     std::size_t depth,
                     std::map<PoVector, std::uint64_t>& counts) {
  const std::uint64_t weight = ReadWeight(node, total);
  Expect(weight > 0, "trie weight must be positive");
  if (depth == 0) {
    Expect(!node.contains("children"), "trie is deeper than the group size");
    Expect(counts.emplace(path, weight).second, "duplicate trie path");
    return;
  }
  const json& children = node.at("children");
  Expect(children.is_array() && !children.empty(), "internal trie node without "
         "children");
  std::uint64_t sum = 0;
  for (const json& child : children) {
    Expect(child.is_array() && child.size() == 2,
           "trie child must be [entry, node]");
    path.push_back(ParsePoRef(child[0].get<std::string>()));
    const std::size_t before = counts.size();
    CollectOutcomes(child[1], total, path, depth - 1, counts);
    path.pop_back();
    Expect(counts.size() > before, "trie child without leaves");
    sum += ReadWeight(child[1], total);
  }
  Expect(sum == weight, "trie node weight differs from the sum of its children");
}

}  // namespace

json ModelToJson(const LearnedModel& model) {
  json doc;
  doc["format"] = "sisort-model";
  doc["version"] = kVersion;
  doc["n"] = model.n;
  doc["mu"] = model.mu;
  doc["sigma"] = model.sigma;
  doc["rho"] = FormatDouble(model.rho);
  doc["max_group_size"] = model.max_group_size;
  const LearnProvenance& p = model.provenance;
  doc["provenance"] = {{"seed", p.seed},
                       {"partition_samples", p.partition_samples},
                       {"landmark_instances", p.landmark_instances},
                       {"po_sample_formula", p.po_sample_formula},
                       {"po_samples", p.po_samples}};
  doc["partition"] = model.partition.groups;
  json landmarks = json::array();
  for (double v : model.vlist.finite()) landmarks.push_back(FormatDouble(v));
  doc["landmarks"] = std::move(landmarks);
  json groups = json::array();
  for (const GroupPoModel& g : model.groups) {
    groups.push_back({{"members", g.members},
                      {"samples", g.samples},
                      {"trie", TrieToJson(g.trie)}});
  }
  doc["groups"] = std::move(groups);
  return doc;
}


LearnedModel ModelFromJson(const json& doc) {
  ExpectHeader(doc, "sisort-model");
  return Guarded("model", [&] {
    LearnedModel model;
    model.n = doc.at("n").get<std::size_t>();
    model.mu = doc.at("mu").get<int>();
    model.sigma = doc.at("sigma").get<int>();
    model.rho = ParseDouble(doc.at("rho").get<std::string>());
    model.max_group_size = doc.at("max_group_size").get<std::size_t>();
    const json& p = doc.at("provenance");
    model.provenance.seed = p.at("seed").get<std::uint64_t>();
    model.provenance.partition_samples =
        p.at("partition_samples").get<std::size_t>();
    model.provenance.landmark_instances =
        p.at("landmark_instances").get<std::size_t>();
    model.provenance.po_sample_formula =
        p.at("po_sample_formula").get<std::uint64_t>();
    model.provenance.po_samples = p.at("po_samples").get<std::uint64_t>();
    model.partition.groups =
        doc.at("partition").get<std::vector<std::vector<std::size_t>>>();
    Expect(model.partition.n() == model.n, "partition does not cover n");
    std::vector<double> landmarks;
    for (const json& v : doc.at("landmarks")) {
      landmarks.push_back(ParseDouble(v.get<std::string>()));
    }
    Expect(landmarks.size() == model.n, "landmark count differs from n");
    model.vlist = VList(std::move(landmarks));

    const json& groups = doc.at("groups");
    Expect(groups.size() == model.partition.groups.size(),
           "one trie per partition group expected");
    for (std::size_t k = 0; k < groups.size(); ++k) {
      const json& g = groups[k];
      GroupPoModel group;
      group.members = g.at("members").get<std::vector<std::size_t>>();
      Expect(group.members == model.partition.groups[k],
             "group members differ from the partition");
      group.samples = g.at("samples").get<std::uint64_t>();
      std::map<PoVector, std::uint64_t> counts;
      PoVector path;
      const json& trie = g.at("trie");
      Expect(ReadWeight(trie, group.samples) == group.samples,
             "root weight must be 1");
      CollectOutcomes(trie, group.samples, path, group.members.size(), counts);
      group.trie = PoTrie::Build(counts, group.members.size(), model.n);
      Expect(group.trie.total() == group.samples,
             "outcome counts do not sum to the sample count");
      model.groups.push_back(std::move(group));
    }
    return model;
  });
}

std::string SaveWorld(const World& world) {
  return WorldToJson(world).dump(1) + "\n";
}

World LoadWorld(std::string_view text) {
  json doc = Guarded("world", [&] { return json::parse(text); });
  return WorldFromJson(doc);
}

std::string SaveModel(const LearnedModel& model) {
  return ModelToJson(model).dump() + "\n";
}

LearnedModel LoadModel(std::string_view text) {
  json doc = Guarded("model", [&] { return json::parse(text); });
  return ModelFromJson(doc);
}

json ValidationToJson(const ValidationReport& report) {
  json functions = json::array();
  for (const FunctionCheck& f : report.functions) {
    functions.push_back(
        {{"group", f.group}, {"element", f.element}, {"extrema", f.extrema}});
  }
  json pairs = json::array();
  for (const PairCheck& p : report.pairs) {
    pairs.push_back({{"group", p.group},
                     {"first", p.first},
                     {"second", p.second},
                     {"intersections", p.intersections},
                     {"coincident", p.coincident}});
  }
  return {{"ok", report.ok()},
          {"violations", report.violations},
          {"functions", std::move(functions)},
          {"pairs", std::move(pairs)}};
}

std::string FormatInstances(std::span<const Instance> instances) {
  std::string out;
  for (const Instance& instance : instances) {
    for (std::size_t i = 0; i < instance.values.size(); ++i) {
      if (i > 0) out += ' ';
      out += FormatDouble(instance.values[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<Instance> ParseInstances(std::string_view text) {
  std::vector<Instance> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    Instance instance;
    while (!line.empty()) {
      const auto start = line.find_first_not_of(" \t\r,");
      if (start == std::string_view::npos) break;
      line.remove_prefix(start);
      const auto end = line.find_first_of(" \t\r,");
      try {
        instance.values.push_back(ParseDouble(line.substr(0, end)));
      } catch (const FormatError& e) {
        throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
      }
      line.remove_prefix(end == std::string_view::npos ? line.size() : end);
    }
    if (instance.values.empty()) continue;
    if (!out.empty() && out.front().values.size() != instance.values.size()) {
      throw FormatError("line " + std::to_string(line_no) + " has " +
                        std::to_string(instance.values.size()) +
                        " values, expected " +
                        std::to_string(out.front().values.size()));
    }
    out.push_back(std::move(instance));
  }
  return out;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace sisort
