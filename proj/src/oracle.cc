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

#include "sisort/oracle.h"

#include <map>

#include "sisort/po_model.h"

namespace sisort::oracle {

namespace {

// (value, index) strict order.
bool Before(std::span<const double> v, std::size_t a, std::size_t b) {
  return v[a] < v[b] || (v[a] == v[b] && a < b);
}

bool Monotone(std::span<const double> seq, std::uint32_t mask) {
  bool up = true;
  bool down = true;
  double last = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!(mask >> i & 1u)) continue;
    if (!first) {
      if (seq[i] < last) up = false;
      if (seq[i] > last) down = false;
    }
    last = seq[i];
    first = false;
  }
  return up || down;
}

// Straight from the definition: for each entry, scan every landmark and
// every earlier element for the largest one not above it.
PoVector NaiveEncode(std::span<const double> values, const VList& vlist) {
  PoVector vec;
  for (std::size_t t = 0; t < values.size(); ++t) {
    std::size_t best_r = 0;
    for (std::size_t r = 0; r <= vlist.n(); ++r) {
      if (vlist[r] <= values[t]) best_r = r;
    }
    bool have_element = false;
    std::size_t best_s = 0;
    for (std::size_t s = 0; s < t; ++s) {
      if (values[s] > values[t]) continue;
      if (!have_element || !Before(values, s, best_s)) {
        best_s = s;
        have_element = true;
      }
    }
    // Landmarks sort before elements of equal value.
    if (have_element && values[best_s] >= vlist[best_r]) {
      vec.push_back(PoRef::Element(best_s));
    } else {
      vec.push_back(PoRef::Landmark(best_r));
    }
  }
  return vec;
}

}  // namespace

std::vector<std::size_t> reference_sort(std::span<const double> values) {
  // Insertion sort on indices: slow and obviously right.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::size_t pos = order.size();
    while (pos > 0 && Before(values, i, order[pos - 1])) --pos;
    order.insert(order.begin() + static_cast<std::ptrdiff_t>(pos), i);
  }
  std::vector<std::size_t> ranks(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) ranks[order[i]] = i + 1;
  return ranks;
}

int exhaustive_monotone_partition(std::span<const double> seq,
                                  std::size_t cap) {
  if (seq.size() > cap || seq.size() > 20) {
    throw CapExceeded("sequence of length " + std::to_string(seq.size()) +
                      " exceeds the oracle cap of " + std::to_string(cap));
  }
  const std::uint32_t full = (1u << seq.size()) - 1;
  std::vector<bool> monotone(full + 1);
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    monotone[mask] = Monotone(seq, mask);
  }
  // best[mask]: fewest monotone parts covering mask. Each step peels a part
  // containing the lowest set element, so every partition is reached.
  std::vector<int> best(full + 1, 1 << 20);
  best[0] = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::uint32_t low = mask & (~mask + 1);
    const std::uint32_t rest = mask ^ low;
    for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
      const std::uint32_t part = sub | low;
      if (monotone[part]) {
        best[mask] = std::min(best[mask], best[mask ^ part] + 1);
      }
      if (sub == 0) break;
    }
  }
  return best[full];
}

OutcomeDistribution enumerate_outcomes(const World& world, std::size_t k,
                                       const VList& vlist,
                                       const OracleConfig& config) {
  const GroupModel& group = world.group(k);
  if (!group.source.discrete()) {
    throw std::invalid_argument("outcome enumeration needs a discrete source");
  }
  OutcomeDistribution dist;
  dist.atoms = group.source.atoms.size();
  if (dist.atoms > config.enumeration_budget) {
    throw CapExceeded("group has more atoms than the enumeration budget");
  }
  dist.bound = OutcomeBound(group.members.size(), world.n(), world.mu(),
                            world.sigma());
  std::map<PoVector, std::uint64_t> weight;
  std::vector<double> values(group.members.size());
  for (std::size_t a = 0; a < dist.atoms; ++a) {
    // Evaluate exactly here rather than through the world's cached values.
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] = ToDouble(group.functions[i].Eval(group.source.atoms[a]));
    }
    ++weight[NaiveEncode(values, vlist)];
  }
  for (const auto& [vec, w] : weight) {
    dist.outcomes.push_back({vec, w, dist.atoms});
  }
  return dist;
}

}  // namespace sisort::oracle
