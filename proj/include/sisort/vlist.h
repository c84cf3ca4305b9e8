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

#ifndef SISORT_VLIST_H_
#define SISORT_VLIST_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sisort/instance_model.h"

namespace sisort {

// Landmarks V_0 = -inf < V_1 <= ... <= V_n < V_{n+1} = +inf. Bucket r is the
// half-open interval [V_r, V_{r+1}).
class VList {
 public:
  VList() : VList(std::vector<double>{}) {}
  // `finite` holds V_1..V_n; must be finite and non-decreasing.
  explicit VList(std::vector<double> finite);

  // Number of finite landmarks.
  std::size_t n() const { return values_.size() - 2; }
  // V_r for r in [0, n + 1], sentinels included.
  double operator[](std::size_t r) const { return values_[r]; }
  std::span<const double> finite() const {
    return std::span<const double>(values_).subspan(1, n());
  }

  // Largest r with V_r <= x (so V_r <= x < V_{r+1}). Adds the number of
  // value comparisons made to *comparisons when given.
  std::size_t predecessor(double x, std::uint64_t* comparisons = nullptr) const;

  bool operator==(const VList& other) const { return values_ == other.values_; }

 private:
  std::vector<double> values_;
};

// ceil(log2 n), with 1 for n <= 2.
std::size_t LandmarkSampleCount(std::size_t n);

// Sorts the lambda * n values of `instances` and keeps every lambda-th one.
// Throws std::invalid_argument on a wrong instance count or size.
VList build_vlist(std::span<const Instance> instances, std::size_t n);
// Same with an explicit lambda in place of ceil(log2 n).
VList build_vlist(std::span<const Instance> instances, std::size_t n,
                  std::size_t lambda);

}  // namespace sisort

#endif  // SISORT_VLIST_H_
