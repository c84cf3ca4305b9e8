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

#ifndef SISORT_RATIONAL_H_
#define SISORT_RATIONAL_H_

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace sisort {

using Rational = boost::multiprecision::cpp_rational;

// "p/q" with q > 0, always written with the slash (e.g. "3/1").
std::string FormatRational(const Rational& r);
// Accepts "p/q" or an integer "p". Throws std::invalid_argument otherwise.
Rational ParseRational(std::string_view text);
double ToDouble(const Rational& r);

}  // namespace sisort

#endif  // SISORT_RATIONAL_H_
