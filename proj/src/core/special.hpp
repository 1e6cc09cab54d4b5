// Copyright 2026 The lotdepth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Special functions used by the depth and the rank test.

#ifndef LOTDEPTH_CORE_SPECIAL_HPP_
#define LOTDEPTH_CORE_SPECIAL_HPP_

namespace lotdepth {

// Halfspace mass of the spherical uniform R * Phi on the unit ball of R^d
// beyond distance r from the origin: P(<R Phi, e> >= r) for a unit e.
// Equals 1/2 at r = 0, 0 at r = 1, and is strictly decreasing in between.
// Throws ArgumentError unless 0 <= r <= 1 and d >= 1.
double TukeyDepthSpherical(double r, int d);

// (prob)-quantile of the chi-square distribution with d degrees of
// freedom. Throws ArgumentError unless d >= 1 and 0 < prob < 1.
double Chi2Quantile(int d, double prob);

// Chi-square CDF with d degrees of freedom.
double Chi2Cdf(int d, double x);

}  // namespace lotdepth

#endif  // LOTDEPTH_CORE_SPECIAL_HPP_
