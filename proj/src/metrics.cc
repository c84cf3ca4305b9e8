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

#include "sisort/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace sisort {

EntropyEstimate plugin_entropy(std::span<const std::uint64_t> counts) {
  EntropyEstimate est;
  for (std::uint64_t c : counts) {
    est.samples += c;
    if (c > 0) ++est.support;
  }
  if (est.samples == 0) {
    throw std::invalid_argument("entropy of an all-zero count vector");
  }
  const double total = static_cast<double>(est.samples);
  double second = 0.0;
  for (std::uint64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    const double info = std::log2(total / static_cast<double>(c));
    est.bits += p * info;
    second += p * info * info;
  }
  if (est.support == 1) est.bits = 0.0;
  est.std_error =
      std::sqrt(std::max(0.0, second - est.bits * est.bits) / total);
  est.small_sample = est.samples < 2 * est.support;
  return est;
}

namespace {

void RequireDiscrete(const World& world, std::size_t k) {
  if (!world.group(k).source.discrete()) {
    throw std::invalid_argument("group " + std::to_string(k) +
                                " has a continuous source; exact entropy "
                                "needs enumerable atoms");
  }
}

double EntropyOfCounts(const std::vector<std::uint64_t>& counts) {
  return plugin_entropy(counts).bits;
}

}  // namespace

double exact_po_entropy(const World& world, std::size_t k, const VList& vlist) {
  RequireDiscrete(world, k);
  const std::size_t atoms = world.group(k).source.atoms.size();
  std::map<PoVector, std::uint64_t> counts;
  for (std::size_t a = 0; a < atoms; ++a) {
    ++counts[encode_po(world.AtomValues(k, a), vlist)];
  }
  std::vector<std::uint64_t> c;
  for (const auto& [vec, count] : counts) c.push_back(count);
  return EntropyOfCounts(c);
}

double exact_pi_entropy(const World& world, std::uint64_t budget) {
  const std::size_t g = world.groups().size();
  std::uint64_t product = 1;
  for (std::size_t k = 0; k < g; ++k) {
    RequireDiscrete(world, k);
    product *= world.group(k).source.atoms.size();
    if (product > budget) {
      throw EnumerationBudgetExceeded(
          "joint atom count exceeds the enumeration budget of " +
          std::to_string(budget));
    }
  }
  std::vector<std::size_t> digit(g, 0);
  std::vector<double> values(world.n());
  std::vector<std::uint32_t> order(world.n());
  std::map<std::vector<std::uint32_t>, std::uint64_t> counts;
  for (std::uint64_t step = 0; step < product; ++step) {
    for (std::size_t k = 0; k < g; ++k) {
      const auto v = world.AtomValues(k, digit[k]);
      const auto& members = world.group(k).members;
      for (std::size_t i = 0; i < members.size(); ++i) {
        values[members[i]] = v[i];
      }
    }
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return values[a] != values[b] ? values[a] < values[b] : a < b;
    });
    ++counts[order];
    for (std::size_t k = 0; k < g; ++k) {
      if (++digit[k] < world.group(k).source.atoms.size()) break;
      digit[k] = 0;
    }
  }
  std::vector<std::uint64_t> c;
  for (const auto& [perm, count] : counts) c.push_back(count);
  return EntropyOfCounts(c);
}

OccupancyStats bucket_occupancy_stats(std::span<const RunReport> reports) {
  if (reports.empty()) throw std::invalid_argument("no run reports");
  OccupancyStats stats;
  const std::size_t buckets = reports.front().bucket_sublists.size();
  stats.bucket_mean.assign(buckets, 0.0);
  std::uint64_t nonempty_total = 0;
  for (const RunReport& report : reports) {
    if (report.bucket_sublists.size() != buckets) {
      throw std::invalid_argument("run reports disagree on the bucket count");
    }
    for (std::size_t r = 0; r < buckets; ++r) {
      const std::uint32_t s = report.bucket_sublists[r];
      stats.bucket_mean[r] += s;
      if (s > 0) {
        ++stats.nonempty_buckets;
        nonempty_total += s;
      }
      stats.max_sublists = std::max(stats.max_sublists, s);
    }
  }
  for (double& m : stats.bucket_mean) m /= static_cast<double>(reports.size());
  if (stats.nonempty_buckets > 0) {
    stats.mean_nonempty = static_cast<double>(nonempty_total) /
                          static_cast<double>(stats.nonempty_buckets);
  }
  return stats;
}

ChernoffReport chernoff_diagnostic(
    std::span<const OutcomeProbability> exact, std::uint64_t runs,
    std::uint64_t samples, const std::function<PoVector(Rng&)>& draw,
    std::uint64_t seed, double min_p) {
  ChernoffReport report;
  report.runs = runs;
  report.samples = samples;
  std::map<PoVector, std::size_t> tracked;
  std::vector<const OutcomeProbability*> source;
  for (const OutcomeProbability& o : exact) {
    if (o.p() < min_p) continue;
    ChernoffRow row;
    row.outcome = o.outcome;
    row.p = o.p();
    row.bound = std::exp(-row.p * static_cast<double>(samples) / 8.0);
    row.margin = 3.0 * std::sqrt(row.bound * (1.0 - row.bound) /
                                 static_cast<double>(runs));
    tracked.emplace(o.outcome, report.rows.size());
    source.push_back(&o);
    report.rows.push_back(std::move(row));
  }
  std::vector<std::uint64_t> hits(report.rows.size());
  for (std::uint64_t run = 0; run < runs; ++run) {
    Rng rng(seed, run);
    std::fill(hits.begin(), hits.end(), 0);
    for (std::uint64_t s = 0; s < samples; ++s) {
      const auto it = tracked.find(draw(rng));
      if (it != tracked.end()) ++hits[it->second];
    }
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      // q <= p / 2 with p = weight / total, kept in integers.
      const OutcomeProbability* o = source[i];
      const unsigned __int128 lhs =
          static_cast<unsigned __int128>(2 * hits[i]) * o->total;
      const unsigned __int128 rhs =
          static_cast<unsigned __int128>(o->weight) * samples;
      if (lhs <= rhs) ++report.rows[i].events;
    }
  }
  for (ChernoffRow& row : report.rows) {
    row.rate = static_cast<double>(row.events) / static_cast<double>(runs);
    row.violated = row.rate > row.bound + row.margin;
    if (row.violated) ++report.violations;
  }
  return report;
}

}  // namespace sisort
