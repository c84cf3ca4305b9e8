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

#include "sisort/vlist.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sisort {

VList::VList(std::vector<double> finite) {
  for (std::size_t i = 0; i < finite.size(); ++i) {
    if (!std::isfinite(finite[i])) {
      throw std::invalid_argument("landmarks must be finite");
    }
    if (i > 0 && finite[i] < finite[i - 1]) {
      throw std::invalid_argument("landmarks must be non-decreasing");
    }
  }
  values_.reserve(finite.size() + 2);
  values_.push_back(-std::numeric_limits<double>::infinity());
  values_.insert(values_.end(), finite.begin(), finite.end());
  values_.push_back(std::numeric_limits<double>::infinity());
}

std::size_t VList::predecessor(double x, std::uint64_t* comparisons) const {
  // Binary search over V_1..V_n for the first landmark strictly above x.
  std::size_t lo = 1, hi = n() + 1;
  std::uint64_t count = 0;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    ++count;
    if (values_[mid] <= x) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (comparisons != nullptr) *comparisons += count;
  return lo - 1;
}

std::size_t LandmarkSampleCount(std::size_t n) {
  std::size_t lambda = 0;
  while ((std::size_t{1} << lambda) < n) ++lambda;
  return std::max<std::size_t>(lambda, 1);
}

VList build_vlist(std::span<const Instance> instances, std::size_t n) {
  return build_vlist(instances, n, LandmarkSampleCount(n));
}

VList build_vlist(std::span<const Instance> instances, std::size_t n,
                  std::size_t lambda) {
  if (lambda == 0 || instances.size() != lambda) {
    throw std::invalid_argument("V-list needs exactly " +
                                std::to_string(lambda) + " instances, got " +
                                std::to_string(instances.size()));
  }
  std::vector<double> merged;
  merged.reserve(lambda * n);
  for (const Instance& instance : instances) {
    if (instance.values.size() != n) {
      throw std::invalid_argument("instance has " +
                                  std::to_string(instance.values.size()) +
                                  " values, expected " + std::to_string(n));
    }
    merged.insert(merged.end(), instance.values.begin(),
                  instance.values.end());
  }
  std::sort(merged.begin(), merged.end());
  std::vector<double> landmarks;
  landmarks.reserve(n);
  for (std::size_t r = 1; r <= n; ++r) landmarks.push_back(merged[r * lambda - 1]);
  return VList(std::move(landmarks));
}

}  // namespace sisort
