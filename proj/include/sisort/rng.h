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

#ifndef SISORT_RNG_H_
#define SISORT_RNG_H_

#include <cstdint>
#include <random>

namespace sisort {

// Seeded random stream. The mappings from engine output to integers and reals
// are written out here (rather than using <random> distributions) so that a
// seed produces the same draws on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t NextU64() { return engine_(); }
  // Uniform in [0, bound); bound > 0.
  std::uint64_t Below(std::uint64_t bound);
  // Uniform integer in [lo, hi].
  std::int64_t Between(std::int64_t lo, std::int64_t hi);
  // Uniform in [0, 1) with 53 random bits.
  double Uniform01();
  double Normal();
  bool Coin(double p_true) { return Uniform01() < p_true; }

  // Independent child stream, derived deterministically from this one.
  Rng Fork(std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

// SplitMix64 finaliser; used for seed derivation.
std::uint64_t MixSeed(std::uint64_t x);

}  // namespace sisort

#endif  // SISORT_RNG_H_
