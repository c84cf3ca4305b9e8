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

#ifndef SISORT_INSTANCE_MODEL_H_
#define SISORT_INSTANCE_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sisort/rational.h"
#include "sisort/rng.h"

namespace sisort {

class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Rejection sampling ran out of attempts: the requested (mu, sigma, group
// size) combination is infeasible or close to it.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vertex {
  Rational z;
  Rational y;
  bool operator==(const Vertex&) const = default;
};

// Map from a group's hidden value z to one element value. Linear between
// consecutive vertices; vertex z strictly increasing; at least two vertices.
class PiecewiseLinearFunction {
 public:
  explicit PiecewiseLinearFunction(std::vector<Vertex> vertices);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Rational& z_lo() const { return vertices_.front().z; }
  const Rational& z_hi() const { return vertices_.back().z; }

  // Exact evaluation. Throws DomainError outside [z_lo, z_hi].
  Rational Eval(const Rational& z) const;
  // Floating-point evaluation, monotone along each segment and exact at
  // vertices whose coordinates are representable.
  double Eval(double z) const;

  // Vertices where the slope sign changes; zero-slope segments are skipped,
  // so a plateau between a rise and a fall counts once.
  int ExtremumCount() const;

  bool operator==(const PiecewiseLinearFunction& other) const {
    return vertices_ == other.vertices_;
  }

 private:
  std::vector<Vertex> vertices_;
  std::vector<double> z_;
  std::vector<double> y_;
};

Rational eval_function(const PiecewiseLinearFunction& f, const Rational& z);

// Exact number of points where f and g meet on their common domain. Sets
// `coincident` when they agree on a whole segment (infinitely many points).
int CountIntersections(const PiecewiseLinearFunction& f,
                       const PiecewiseLinearFunction& g, bool* coincident);

struct HiddenSource {
  enum class Kind { kContinuousUniform, kTruncatedGaussian, kDiscreteUniform };

  Kind kind = Kind::kContinuousUniform;
  Rational lo;  // support bounds, all kinds
  Rational hi;
  Rational mean;  // truncated Gaussian only
  Rational sd;
  std::vector<Rational> atoms;  // discrete only, strictly increasing

  static HiddenSource ContinuousUniform(Rational lo, Rational hi);
  static HiddenSource TruncatedGaussian(Rational mean, Rational sd,
                                        Rational lo, Rational hi);
  static HiddenSource DiscreteUniform(std::vector<Rational> atoms);

  bool discrete() const { return kind == Kind::kDiscreteUniform; }
  bool operator==(const HiddenSource&) const = default;
};

std::string_view SourceKindName(HiddenSource::Kind kind);
HiddenSource::Kind ParseSourceKind(std::string_view name);

struct HiddenDraw {
  double z = 0.0;
  std::ptrdiff_t atom = -1;  // index into atoms for discrete sources
};

HiddenDraw SampleSource(const HiddenSource& source, Rng& rng);

struct GroupModel {
  std::size_t id = 0;
  std::vector<std::size_t> members;  // global element indices, ascending
  std::vector<PiecewiseLinearFunction> functions;  // one per member
  HiddenSource source;

  bool operator==(const GroupModel&) const = default;
};

// A full synthetic world: n elements partitioned into groups, each group a
// bundle of functions of one hidden source. Immutable after construction.
class World {
 public:
  // Throws std::invalid_argument unless the members partition [0, n) and
  // every group has one function per member.
  World(std::size_t n, int mu, int sigma, std::uint64_t seed,
        std::vector<GroupModel> groups);

  std::size_t n() const { return n_; }
  int mu() const { return mu_; }
  int sigma() const { return sigma_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<GroupModel>& groups() const { return groups_; }
  const GroupModel& group(std::size_t k) const { return groups_[k]; }
  std::size_t group_of(std::size_t element) const {
    return group_of_[element];
  }

  // Member values of group k when its source takes atom a. Computed exactly
  // and rounded once, so equal exact values give equal doubles.
  std::span<const double> AtomValues(std::size_t k, std::size_t a) const;

  bool operator==(const World& other) const {
    return n_ == other.n_ && mu_ == other.mu_ && sigma_ == other.sigma_ &&
           seed_ == other.seed_ && groups_ == other.groups_;
  }

 private:
  std::size_t n_;
  int mu_;
  int sigma_;
  std::uint64_t seed_;
  std::vector<GroupModel> groups_;
  std::vector<std::size_t> group_of_;
  // atom_values_[k] is row-major (atom, member).
  std::vector<std::vector<double>> atom_values_;
};

struct Instance {
  std::vector<double> values;
  std::vector<double> hidden;  // drawn z per group; empty if not synthetic
};

// Samples each group's hidden value and evaluates its member functions.
Instance draw_instance(const World& world, Rng& rng);

// Values of the members of group k, in member order.
std::vector<double> GroupValues(const World& world, std::size_t k,
                                const Instance& instance);

struct FunctionCheck {
  std::size_t group = 0;
  std::size_t element = 0;
  int extrema = 0;
};

struct PairCheck {
  std::size_t group = 0;
  std::size_t first = 0;
  std::size_t second = 0;
  int intersections = 0;
  bool coincident = false;
};

struct ValidationReport {
  std::vector<FunctionCheck> functions;
  std::vector<PairCheck> pairs;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

ValidationReport validate_world(const World& world, int mu, int sigma);

enum class SourceMode {
  kContinuousUniform,
  kTruncatedGaussian,
  kDiscreteUniform,
  kPointMass,
  kMixed,
};

enum class FunctionFamily {
  // Vertical translates of a per-group shape plus small jitter; scales to
  // large groups under tight sigma.
  kShifted,
  // Independent random walks over one overlapping value range.
  kFree,
};

struct GeneratorOptions {
  SourceMode source = SourceMode::kMixed;
  int discrete_atoms = 8;  // K for discrete sources (upper bound under kMixed)
  FunctionFamily family = FunctionFamily::kShifted;
  int attempt_budget = 10'000;  // per group
};

std::string_view SourceModeName(SourceMode mode);
SourceMode ParseSourceMode(std::string_view name);
std::string_view FamilyName(FunctionFamily family);
FunctionFamily ParseFamily(std::string_view name);

// Deterministic per (arguments, seed). Throws GenerationError when a group
// cannot be completed within the attempt budget, std::invalid_argument on bad
// counts.
World generate_world(std::size_t n, std::size_t g, int mu, int sigma,
                     std::uint64_t seed, const GeneratorOptions& options = {});

}  // namespace sisort

#endif  // SISORT_INSTANCE_MODEL_H_
