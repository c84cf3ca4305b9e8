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

#include "sisort/instance_model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

namespace sisort {

namespace {

int Sign(const Rational& r) { return r.sign(); }

template <typename T>
int SignOf(T v) {
  return (v > 0) - (v < 0);
}

}  // namespace

PiecewiseLinearFunction::PiecewiseLinearFunction(std::vector<Vertex> vertices)
    : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) {
    throw std::invalid_argument(
        "piecewise-linear function needs at least two vertices");
  }
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    if (!(vertices_[i - 1].z < vertices_[i].z)) {
      throw std::invalid_argument(
          "breakpoint z-coordinates must be strictly increasing");
    }
  }
  z_.reserve(vertices_.size());
  y_.reserve(vertices_.size());
  for (const Vertex& v : vertices_) {
    z_.push_back(ToDouble(v.z));
    y_.push_back(ToDouble(v.y));
  }
}

Rational PiecewiseLinearFunction::Eval(const Rational& z) const {
  if (z < z_lo() || z > z_hi()) {
    throw DomainError("z = " + FormatRational(z) + " outside domain [" +
                      FormatRational(z_lo()) + ", " + FormatRational(z_hi()) +
                      "]");
  }
  auto it = std::upper_bound(
      vertices_.begin(), vertices_.end(), z,
      [](const Rational& value, const Vertex& v) { return value < v.z; });
  if (it == vertices_.end()) return vertices_.back().y;
  const Vertex& b = *it;
  const Vertex& a = *(it - 1);
  if (z == a.z) return a.y;
  return a.y + (b.y - a.y) * (z - a.z) / (b.z - a.z);
}

double PiecewiseLinearFunction::Eval(double z) const {
  if (!(z >= z_.front() && z <= z_.back())) {
    std::ostringstream msg;
    msg << "z = " << z << " outside domain [" << z_.front() << ", "
        << z_.back() << "]";
    throw DomainError(msg.str());
  }
  auto it = std::upper_bound(z_.begin(), z_.end(), z);
  if (it == z_.end()) return y_.back();
  const std::size_t j = static_cast<std::size_t>(it - z_.begin()) - 1;
  const double t = (z - z_[j]) / (z_[j + 1] - z_[j]);
  return y_[j] + (y_[j + 1] - y_[j]) * t;
}

int PiecewiseLinearFunction::ExtremumCount() const {
  int extrema = 0;
  int previous = 0;
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    const int s = Sign(vertices_[i].y - vertices_[i - 1].y);
    if (s == 0) continue;
    if (previous != 0 && s != previous) ++extrema;
    previous = s;
  }
  return extrema;
}

Rational eval_function(const PiecewiseLinearFunction& f, const Rational& z) {
  return f.Eval(z);
}

int CountIntersections(const PiecewiseLinearFunction& f,
                       const PiecewiseLinearFunction& g, bool* coincident) {
  const Rational lo = std::max(f.z_lo(), g.z_lo());
  const Rational hi = std::min(f.z_hi(), g.z_hi());
  if (coincident != nullptr) *coincident = false;
  if (lo > hi) return 0;
  std::vector<Rational> zs{lo, hi};
  for (const auto* h : {&f, &g}) {
    for (const Vertex& v : h->vertices()) {
      if (v.z > lo && v.z < hi) zs.push_back(v.z);
    }
  }
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());

  int count = 0;
  int previous = 0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const int s = Sign(f.Eval(zs[i]) - g.Eval(zs[i]));
    if (s == 0) {
      ++count;
      if (i > 0 && previous == 0 && coincident != nullptr) *coincident = true;
    } else if (i > 0 && previous != 0 && s != previous) {
      ++count;  // strict crossing inside the segment
    }
    previous = s;
  }
  return count;
}

HiddenSource HiddenSource::ContinuousUniform(Rational lo, Rational hi) {
  if (!(lo < hi)) throw std::invalid_argument("uniform source needs lo < hi");
  HiddenSource s;
  s.kind = Kind::kContinuousUniform;
  s.lo = std::move(lo);
  s.hi = std::move(hi);
  return s;
}

HiddenSource HiddenSource::TruncatedGaussian(Rational mean, Rational sd,
                                             Rational lo, Rational hi) {
  if (!(lo < hi) || sd.sign() <= 0) {
    throw std::invalid_argument("truncated Gaussian needs lo < hi and sd > 0");
  }
  HiddenSource s;
  s.kind = Kind::kTruncatedGaussian;
  s.mean = std::move(mean);
  s.sd = std::move(sd);
  s.lo = std::move(lo);
  s.hi = std::move(hi);
  return s;
}

HiddenSource HiddenSource::DiscreteUniform(std::vector<Rational> atoms) {
  if (atoms.empty()) {
    throw std::invalid_argument("discrete source needs at least one atom");
  }
  for (std::size_t i = 1; i < atoms.size(); ++i) {
    if (!(atoms[i - 1] < atoms[i])) {
      throw std::invalid_argument(
          "discrete atoms must be distinct and increasing");
    }
  }
  HiddenSource s;
  s.kind = Kind::kDiscreteUniform;
  s.lo = atoms.front();
  s.hi = atoms.back();
  s.atoms = std::move(atoms);
  return s;
}

std::string_view SourceKindName(HiddenSource::Kind kind) {
  switch (kind) {
    case HiddenSource::Kind::kContinuousUniform:
      return "continuous-uniform";
    case HiddenSource::Kind::kTruncatedGaussian:
      return "truncated-gaussian";
    case HiddenSource::Kind::kDiscreteUniform:
      return "discrete-uniform";
  }
  return "?";
}

HiddenSource::Kind ParseSourceKind(std::string_view name) {
  for (auto kind : {HiddenSource::Kind::kContinuousUniform,
                    HiddenSource::Kind::kTruncatedGaussian,
                    HiddenSource::Kind::kDiscreteUniform}) {
    if (SourceKindName(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown source kind '" + std::string(name) +
                              "'");
}

HiddenDraw SampleSource(const HiddenSource& source, Rng& rng) {
  HiddenDraw draw;
  switch (source.kind) {
    case HiddenSource::Kind::kContinuousUniform: {
      const double lo = ToDouble(source.lo);
      const double hi = ToDouble(source.hi);
      draw.z = lo + (hi - lo) * rng.Uniform01();
      break;
    }
    case HiddenSource::Kind::kTruncatedGaussian: {
      const double lo = ToDouble(source.lo);
      const double hi = ToDouble(source.hi);
      const double mean = ToDouble(source.mean);
      const double sd = ToDouble(source.sd);
      for (int tries = 0;; ++tries) {
        const double z = mean + sd * rng.Normal();
        if (z >= lo && z <= hi) {
          draw.z = z;
          break;
        }
        if (tries > 100'000) {
          throw std::runtime_error(
              "truncated Gaussian has negligible mass on its support");
        }
      }
      break;
    }
    case HiddenSource::Kind::kDiscreteUniform: {
      draw.atom = static_cast<std::ptrdiff_t>(rng.Below(source.atoms.size()));
      draw.z = ToDouble(source.atoms[static_cast<std::size_t>(draw.atom)]);
      break;
    }
  }
  return draw;
}

World::World(std::size_t n, int mu, int sigma, std::uint64_t seed,
             std::vector<GroupModel> groups)
    : n_(n), mu_(mu), sigma_(sigma), seed_(seed), groups_(std::move(groups)) {
  constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
  group_of_.assign(n_, kUnassigned);
  for (std::size_t k = 0; k < groups_.size(); ++k) {
    const GroupModel& group = groups_[k];
    if (group.members.empty()) {
      throw std::invalid_argument("group " + std::to_string(k) +
                                  " has no members");
    }
    if (group.members.size() != group.functions.size()) {
      throw std::invalid_argument("group " + std::to_string(k) +
                                  ": one function per member required");
    }
    if (!std::is_sorted(group.members.begin(), group.members.end())) {
      throw std::invalid_argument("group " + std::to_string(k) +
                                  ": members must be ascending");
    }
    for (std::size_t e : group.members) {
      if (e >= n_ || group_of_[e] != kUnassigned) {
        throw std::invalid_argument("group members must partition [0, n)");
      }
      group_of_[e] = k;
    }
  }
  if (std::find(group_of_.begin(), group_of_.end(), kUnassigned) !=
      group_of_.end()) {
    throw std::invalid_argument("group members must partition [0, n)");
  }

  atom_values_.resize(groups_.size());
  for (std::size_t k = 0; k < groups_.size(); ++k) {
    const GroupModel& group = groups_[k];
    if (!group.source.discrete()) continue;
    auto& table = atom_values_[k];
    table.reserve(group.source.atoms.size() * group.members.size());
    for (const Rational& atom : group.source.atoms) {
      for (const auto& f : group.functions) {
        table.push_back(ToDouble(f.Eval(atom)));
      }
    }
  }
}

std::span<const double> World::AtomValues(std::size_t k, std::size_t a) const {
  const std::size_t width = groups_[k].members.size();
  return std::span<const double>(atom_values_[k]).subspan(a * width, width);
}

Instance draw_instance(const World& world, Rng& rng) {
  Instance instance;
  instance.values.assign(world.n(), 0.0);
  instance.hidden.reserve(world.groups().size());
  for (std::size_t k = 0; k < world.groups().size(); ++k) {
    const GroupModel& group = world.group(k);
    const HiddenDraw draw = SampleSource(group.source, rng);
    instance.hidden.push_back(draw.z);
    if (draw.atom >= 0) {
      const auto values =
          world.AtomValues(k, static_cast<std::size_t>(draw.atom));
      for (std::size_t m = 0; m < group.members.size(); ++m) {
        instance.values[group.members[m]] = values[m];
      }
    } else {
      for (std::size_t m = 0; m < group.members.size(); ++m) {
        instance.values[group.members[m]] = group.functions[m].Eval(draw.z);
      }
    }
  }
  return instance;
}

std::vector<double> GroupValues(const World& world, std::size_t k,
                                const Instance& instance) {
  const GroupModel& group = world.group(k);
  std::vector<double> values;
  values.reserve(group.members.size());
  for (std::size_t e : group.members) values.push_back(instance.values[e]);
  return values;
}

ValidationReport validate_world(const World& world, int mu, int sigma) {
  ValidationReport report;
  for (std::size_t k = 0; k < world.groups().size(); ++k) {
    const GroupModel& group = world.group(k);
    const auto& fs = group.functions;
    for (std::size_t a = 0; a < fs.size(); ++a) {
      const int extrema = fs[a].ExtremumCount();
      report.functions.push_back({k, group.members[a], extrema});
      if (extrema > mu) {
        report.violations.push_back(
            "element " + std::to_string(group.members[a]) + " has " +
            std::to_string(extrema) + " extrema (limit " + std::to_string(mu) +
            ")");
      }
      if (fs[a].z_lo() != fs[0].z_lo() || fs[a].z_hi() != fs[0].z_hi()) {
        report.violations.push_back("element " +
                                    std::to_string(group.members[a]) +
                                    " does not share the group domain");
      }
    }
    if (group.source.lo < fs[0].z_lo() || group.source.hi > fs[0].z_hi()) {
      report.violations.push_back("group " + std::to_string(k) +
                                  " source support leaves the domain");
    }
    for (std::size_t a = 0; a < fs.size(); ++a) {
      for (std::size_t b = a + 1; b < fs.size(); ++b) {
        PairCheck pair{k, group.members[a], group.members[b], 0, false};
        pair.intersections = CountIntersections(fs[a], fs[b], &pair.coincident);
        if (pair.coincident) {
          report.violations.push_back(
              "elements " + std::to_string(pair.first) + " and " +
              std::to_string(pair.second) + " coincide on a segment");
        } else if (pair.intersections > sigma) {
          report.violations.push_back(
              "elements " + std::to_string(pair.first) + " and " +
              std::to_string(pair.second) + " intersect " +
              std::to_string(pair.intersections) + " times (limit " +
              std::to_string(sigma) + ")");
        }
        report.pairs.push_back(pair);
      }
    }
  }
  return report;
}

std::string_view SourceModeName(SourceMode mode) {
  switch (mode) {
    case SourceMode::kContinuousUniform:
      return "continuous-uniform";
    case SourceMode::kTruncatedGaussian:
      return "truncated-gaussian";
    case SourceMode::kDiscreteUniform:
      return "discrete-uniform";
    case SourceMode::kPointMass:
      return "point-mass";
    case SourceMode::kMixed:
      return "mixed";
  }
  return "?";
}

SourceMode ParseSourceMode(std::string_view name) {
  for (auto mode :
       {SourceMode::kContinuousUniform, SourceMode::kTruncatedGaussian,
        SourceMode::kDiscreteUniform, SourceMode::kPointMass,
        SourceMode::kMixed}) {
    if (SourceModeName(mode) == name) return mode;
  }
  throw std::invalid_argument("unknown source mode '" + std::string(name) +
                              "'");
}

std::string_view FamilyName(FunctionFamily family) {
  return family == FunctionFamily::kShifted ? "shifted" : "free";
}

FunctionFamily ParseFamily(std::string_view name) {
  if (name == "shifted") return FunctionFamily::kShifted;
  if (name == "free") return FunctionFamily::kFree;
  throw std::invalid_argument("unknown function family '" + std::string(name) +
                              "'");
}

namespace {

// Integer-valued proposals on the shared grid z = j / segments. Checks here
// are exact on that representation and agree with validate_world.
using GridFunction = std::vector<std::int64_t>;

constexpr std::int64_t kJitter = 2;      // |perturbation| per vertex
constexpr std::int64_t kSlopeRange = 6;  // extra slope magnitude above jitter

int GridExtrema(const GridFunction& f) {
  int extrema = 0, previous = 0;
  for (std::size_t j = 1; j < f.size(); ++j) {
    const int s = SignOf(f[j] - f[j - 1]);
    if (s == 0) continue;
    if (previous != 0 && s != previous) ++extrema;
    previous = s;
  }
  return extrema;
}

bool GridHasFlat(const GridFunction& f) {
  for (std::size_t j = 1; j < f.size(); ++j) {
    if (f[j] == f[j - 1]) return true;
  }
  return false;
}

int GridIntersections(const GridFunction& f, const GridFunction& g,
                      bool* coincident) {
  int count = 0, previous = 0;
  *coincident = false;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const int s = SignOf(f[j] - g[j]);
    if (s == 0) {
      ++count;
      if (j > 0 && previous == 0) *coincident = true;
    } else if (j > 0 && previous != 0 && s != previous) {
      ++count;
    }
    previous = s;
  }
  return count;
}

// Random walk with at most `turns` direction changes and no flat segment.
GridFunction RandomWalk(std::size_t segments, int turns, std::int64_t start,
                        std::int64_t min_slope, std::int64_t max_slope,
                        Rng& rng) {
  std::vector<std::size_t> interior(segments - 1);
  std::iota(interior.begin(), interior.end(), std::size_t{1});
  for (std::size_t i = interior.size(); i > 1; --i) {
    std::swap(interior[i - 1], interior[rng.Below(i)]);
  }
  const std::size_t used =
      std::min<std::size_t>(static_cast<std::size_t>(turns), interior.size());
  std::vector<bool> turn_at(segments + 1, false);
  for (std::size_t i = 0; i < used; ++i) turn_at[interior[i]] = true;

  GridFunction f(segments + 1);
  f[0] = start;
  int direction = rng.Coin(0.5) ? 1 : -1;
  for (std::size_t j = 1; j <= segments; ++j) {
    if (turn_at[j - 1]) direction = -direction;
    f[j] = f[j - 1] + direction * rng.Between(min_slope, max_slope);
  }
  return f;
}

PiecewiseLinearFunction ToFunction(const GridFunction& f) {
  const std::size_t segments = f.size() - 1;
  std::vector<Vertex> vertices;
  vertices.reserve(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    vertices.push_back({Rational(static_cast<long long>(j),
                                 static_cast<long long>(segments)),
                        Rational(static_cast<long long>(f[j]))});
  }
  return PiecewiseLinearFunction(std::move(vertices));
}

HiddenSource MakeSource(SourceMode mode, int max_atoms, Rng& rng) {
  if (mode == SourceMode::kMixed) {
    static constexpr SourceMode kChoices[] = {
        SourceMode::kContinuousUniform, SourceMode::kTruncatedGaussian,
        SourceMode::kDiscreteUniform};
    mode = kChoices[rng.Below(3)];
    if (mode == SourceMode::kDiscreteUniform && max_atoms > 2) {
      max_atoms = static_cast<int>(rng.Between(2, max_atoms));
    }
  }
  switch (mode) {
    case SourceMode::kContinuousUniform:
      return HiddenSource::ContinuousUniform(0, 1);
    case SourceMode::kTruncatedGaussian:
      return HiddenSource::TruncatedGaussian(
          Rational(rng.Between(2, 6), 8), Rational(rng.Between(1, 3), 8), 0,
          1);
    case SourceMode::kPointMass:
      return HiddenSource::DiscreteUniform(
          {Rational(rng.Between(0, 64), 64)});
    case SourceMode::kDiscreteUniform:
    case SourceMode::kMixed: {
      const auto k = static_cast<std::size_t>(std::max(1, max_atoms));
      const std::size_t denominator = 4 * k;
      std::vector<std::size_t> grid(denominator + 1);
      std::iota(grid.begin(), grid.end(), std::size_t{0});
      for (std::size_t i = grid.size(); i > 1; --i) {
        std::swap(grid[i - 1], grid[rng.Below(i)]);
      }
      grid.resize(k);
      std::sort(grid.begin(), grid.end());
      std::vector<Rational> atoms;
      for (std::size_t v : grid) {
        atoms.emplace_back(static_cast<long long>(v),
                           static_cast<long long>(denominator));
      }
      return HiddenSource::DiscreteUniform(std::move(atoms));
    }
  }
  return HiddenSource::ContinuousUniform(0, 1);
}

std::vector<GridFunction> GenerateGroupFunctions(std::size_t size, int mu,
                                                 int sigma,
                                                 std::size_t segments,
                                                 const GeneratorOptions& opts,
                                                 std::size_t group_index,
                                                 Rng& rng) {
  const std::int64_t min_slope = 2 * kJitter + 1;
  const std::int64_t max_slope = min_slope + kSlopeRange;
  const bool free_family = opts.family == FunctionFamily::kFree;
  // Offsets spread so that most shifted pairs are far apart.
  const auto spread = static_cast<std::int64_t>(
      free_family ? max_slope : std::max<std::size_t>(8, size * 4 * (2 * kJitter + 1)));
  const GridFunction shape = RandomWalk(
      segments, static_cast<int>(rng.Between(0, mu)), 0, min_slope, max_slope,
      rng);

  std::vector<GridFunction> accepted;
  accepted.reserve(size);
  int attempts = 0;
  while (accepted.size() < size) {
    if (++attempts > opts.attempt_budget) {
      throw GenerationError(
          "group " + std::to_string(group_index) + ": placed " +
          std::to_string(accepted.size()) + " of " + std::to_string(size) +
          " functions within " + std::to_string(opts.attempt_budget) +
          " attempts (mu=" + std::to_string(mu) +
          ", sigma=" + std::to_string(sigma) + " looks infeasible)");
    }
    GridFunction f;
    if (free_family || (sigma > 0 && rng.Coin(0.2))) {
      f = RandomWalk(segments, static_cast<int>(rng.Between(0, mu)),
                     rng.Between(0, spread), 1, max_slope, rng);
    } else {
      const std::int64_t offset = rng.Between(0, spread);
      const bool reflect = sigma > 0 && rng.Coin(0.3);
      f.resize(shape.size());
      for (std::size_t j = 0; j < shape.size(); ++j) {
        f[j] = (reflect ? -shape[j] : shape[j]) + offset +
               rng.Between(-kJitter, kJitter);
      }
    }
    if (GridHasFlat(f) || GridExtrema(f) > mu) continue;
    bool ok = true;
    for (const GridFunction& other : accepted) {
      bool coincident = false;
      const int crossings = GridIntersections(f, other, &coincident);
      if (coincident || crossings > sigma) {
        ok = false;
        break;
      }
    }
    if (ok) accepted.push_back(std::move(f));
  }
  return accepted;
}

}  // namespace

World generate_world(std::size_t n, std::size_t g, int mu, int sigma,
                     std::uint64_t seed, const GeneratorOptions& options) {
  if (g < 1 || n < g) {
    throw std::invalid_argument("need n >= g >= 1");
  }
  if (mu < 0 || sigma < 0) {
    throw std::invalid_argument("mu and sigma must be non-negative");
  }
  Rng rng(seed, /*stream=*/0x3017d);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.Below(i)]);
  std::vector<std::size_t> cuts(n - 1);
  std::iota(cuts.begin(), cuts.end(), std::size_t{1});
  for (std::size_t i = cuts.size(); i > 1; --i) {
    std::swap(cuts[i - 1], cuts[rng.Below(i)]);
  }
  cuts.resize(g - 1);
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), 0);
  cuts.push_back(n);

  std::vector<std::vector<std::size_t>> member_sets;
  for (std::size_t k = 0; k < g; ++k) {
    std::vector<std::size_t> members(
        order.begin() + static_cast<std::ptrdiff_t>(cuts[k]),
        order.begin() + static_cast<std::ptrdiff_t>(cuts[k + 1]));
    std::sort(members.begin(), members.end());
    member_sets.push_back(std::move(members));
  }
  std::sort(member_sets.begin(), member_sets.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  const std::size_t segments = static_cast<std::size_t>(2 * mu + 2);
  std::vector<GroupModel> groups;
  groups.reserve(g);
  for (std::size_t k = 0; k < g; ++k) {
    Rng group_rng = rng.Fork(k);
    GroupModel group;
    group.id = k;
    group.members = std::move(member_sets[k]);
    for (const GridFunction& f :
         GenerateGroupFunctions(group.members.size(), mu, sigma, segments,
                                options, k, group_rng)) {
      group.functions.push_back(ToFunction(f));
    }
    group.source = MakeSource(options.source, options.discrete_atoms, group_rng);
    groups.push_back(std::move(group));
  }
  return World(n, mu, sigma, seed, std::move(groups));
}

}  // namespace sisort
