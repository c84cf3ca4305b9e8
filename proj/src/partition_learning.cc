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

#include "sisort/partition_learning.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sisort {

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

void SampleMatrix::SetRow(std::size_t row, const std::vector<double>& values) {
  if (values.size() != cols_) {
    throw std::invalid_argument("sample row has " +
                                std::to_string(values.size()) +
                                " values, expected " + std::to_string(cols_));
  }
  std::copy(values.begin(), values.end(),
            data_.begin() + static_cast<std::ptrdiff_t>(row * cols_));
}

std::size_t PartitionResult::n() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.size();
  return n;
}

int SameGroupThreshold(int mu) { return 2 * mu + 1; }

std::size_t PartitionSampleCount(int mu, std::size_t floor) {
  const auto m = static_cast<std::size_t>(mu);
  return std::max(m * m * m * m, floor);
}

namespace {

std::vector<std::size_t> OrderByColumn(const SampleMatrix& samples,
                                       std::size_t i) {
  std::vector<std::size_t> order(samples.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return samples.at(a, i) < samples.at(b, i);
                   });
  return order;
}

std::vector<double> ColumnInOrder(const SampleMatrix& samples,
                                  const std::vector<std::size_t>& order,
                                  std::size_t j) {
  std::vector<double> seq;
  seq.reserve(order.size());
  for (std::size_t row : order) seq.push_back(samples.at(row, j));
  return seq;
}

void CheckPair(const SampleMatrix& samples, std::size_t i, std::size_t j) {
  if (i == j || i >= samples.cols() || j >= samples.cols()) {
    throw std::invalid_argument("same-group statistic needs two distinct "
                                "columns in range");
  }
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

int same_group_statistic(const SampleMatrix& samples, std::size_t i,
                         std::size_t j, const MonotoneSearchOptions& options) {
  CheckPair(samples, i, j);
  const std::vector<double> seq =
      ColumnInOrder(samples, OrderByColumn(samples, i), j);
  return monotone_partition_size(seq, options);
}

bool same_group_within(const SampleMatrix& samples, std::size_t i,
                       std::size_t j, int threshold,
                       const MonotoneSearchOptions& options) {
  CheckPair(samples, i, j);
  const std::vector<double> seq =
      ColumnInOrder(samples, OrderByColumn(samples, i), j);
  return monotone_partition_at_most(seq, threshold, options);
}

PartitionResult learn_partition(const SampleMatrix& samples, int mu,
                                const PartitionLearningOptions& options) {
  const std::size_t n = samples.cols();
  const int threshold = SameGroupThreshold(mu);
  PartitionResult result;
  result.pair_decision.assign(n * n, -1);
  if (options.record_statistics) result.pairwise_statistic.assign(n * n, -1);

  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<std::size_t> order = OrderByColumn(samples, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sets.Find(i) == sets.Find(j) && !options.record_statistics) continue;
      const std::vector<double> seq = ColumnInOrder(samples, order, j);
      bool same;
      if (options.record_statistics) {
        // Capped statistic: search only up to threshold + 1.
        int stat = threshold + 1;
        for (int d = 0; d <= threshold; ++d) {
          if (monotone_partition_at_most(seq, d, options.search)) {
            stat = d;
            break;
          }
        }
        result.pairwise_statistic[i * n + j] = stat;
        result.pairwise_statistic[j * n + i] = stat;
        same = stat <= threshold;
      } else {
        same = monotone_partition_at_most(seq, threshold, options.search);
      }
      result.pair_decision[i * n + j] = same ? 1 : 0;
      result.pair_decision[j * n + i] = same ? 1 : 0;
      if (same) sets.Union(i, j);
    }
  }

  std::vector<std::vector<std::size_t>> by_root(n);
  for (std::size_t e = 0; e < n; ++e) by_root[sets.Find(e)].push_back(e);
  for (auto& members : by_root) {
    if (!members.empty()) result.groups.push_back(std::move(members));
  }
  return result;
}

}  // namespace sisort
