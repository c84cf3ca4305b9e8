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

#include "sisort/rational.h"

#include <gtest/gtest.h>

namespace sisort {
namespace {

TEST(RationalTest, FormatAlwaysHasSlash) {
  EXPECT_EQ(FormatRational(Rational(3)), "3/1");
  EXPECT_EQ(FormatRational(Rational(-2, 4)), "-1/2");
}

TEST(RationalTest, ParseForms) {
  EXPECT_EQ(ParseRational("3/6"), Rational(1, 2));
  EXPECT_EQ(ParseRational("-7"), Rational(-7));
  EXPECT_EQ(ParseRational("+5/2"), Rational(5, 2));
}

TEST(RationalTest, ParseRejectsGarbage) {
  EXPECT_THROW(ParseRational(""), std::invalid_argument);
  EXPECT_THROW(ParseRational("1/0"), std::invalid_argument);
  EXPECT_THROW(ParseRational("1/-2"), std::invalid_argument);
  EXPECT_THROW(ParseRational("0.5"), std::invalid_argument);
  EXPECT_THROW(ParseRational("1/2/3"), std::invalid_argument);
}

TEST(RationalTest, RoundTripLargeValues) {
  const Rational r = ParseRational("123456789012345678901234567890/7");
  EXPECT_EQ(ParseRational(FormatRational(r)), r);
}

}  // namespace
}  // namespace sisort
