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

#ifndef SISORT_PARTITION_LEARNING_H_
#define SISORT_PARTITION_LEARNING_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sisort/monotone_partition.h"

namespace sisort {

// Rows are sampled instances, columns are element coordinates.
class SampleMatrix {
 public:
  SampleMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t row, std::size_t col) const {
    return data_[row * cols_ + col];
  }
  double& at(std::size_t row, std::size_t col) {
    return data_[row * cols_ + col];
  }
  void SetRow(std::size_t row, const std::vector<double>& values);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

struct PartitionResult {
  // Disjoint, covering [0, n); each group ascending, groups ordered by their
  // smallest element.
  std::vector<std::vector<std::size_t>> groups;
  // n x n row-major, symmetric. -1: pair not tested (already connected),
  // 0: tested and separated, 1: tested and merged.
  std::vector<std::int8_t> pair_decision;
  // Optional n x n statistics, capped at threshold + 1. -1 when not computed.
  std::vector<int> pairwise_statistic;

  std::size_t n() const;
  bool operator==(const PartitionResult& other) const {
    return groups == other.groups;
  }
};

// Same-group threshold 2*mu + 1.
int SameGroupThreshold(int mu);

// mu^4 rows, raised to `floor` so that the separation test has enough rows
// to tell independent columns apart.
std::size_t PartitionSampleCount(int mu, std::size_t floor = 128);

// Orders rows by column i (ties by row), reads column j in that order and
// returns the minimum monotone partition size of the result.
int same_group_statistic(const SampleMatrix& samples, std::size_t i,
                         std::size_t j,
                         const MonotoneSearchOptions& options = {});

// same_group_statistic(samples, i, j) <= threshold, answered with the early-
// exit decision search.
bool same_group_within(const SampleMatrix& samples, std::size_t i,
                       std::size_t j, int threshold,
                       const MonotoneSearchOptions& options = {});

struct PartitionLearningOptions {
  MonotoneSearchOptions search;
  // Fill pairwise_statistic for every tested pair (slower).
  bool record_statistics = false;
};

// Declares (i, j) same-group iff the statistic is at most 2*mu + 1 and closes
// the positive pairs transitively. Pairs already connected are skipped.
PartitionResult learn_partition(const SampleMatrix& samples, int mu,
                                const PartitionLearningOptions& options = {});

}  // namespace sisort

#endif  // SISORT_PARTITION_LEARNING_H_
