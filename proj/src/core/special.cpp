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

#include "core/special.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "core/errors.hpp"

namespace lotdepth {

namespace {

// P(Phi_1 >= s) for Phi uniform on the unit sphere of R^d, 0 <= s <= 1.
double SphereTail(double s, int d) {
  if (s >= 1.0) return 0.0;
  if (d == 1) return 0.5;
  return 0.5 * boost::math::ibeta(0.5 * (d - 1), 0.5, 1.0 - s * s);
}

}  // namespace

double TukeyDepthSpherical(double r, int d) {
  if (d < 1) throw ArgumentError("dimension must be >= 1");
  if (!(r >= 0.0 && r <= 1.0)) {
    throw ArgumentError("rank norm " + std::to_string(r) + " outside [0, 1]");
  }
  if (r == 0.0) return 0.5;
  if (r == 1.0) return 0.0;
  if (d == 1) return 0.5 * (1.0 - r);
  // D(r) = int_r^1 P(Phi_1 >= r / R) dR. The integrand vanishes like a
  // power at R = r, which tanh-sinh handles.
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  const double value = integrator.integrate(
      [r, d](double radius) { return SphereTail(r / radius, d); }, r, 1.0, 1e-13);
  return std::clamp(value, 0.0, 0.5);
}

double Chi2Quantile(int d, double prob) {
  if (d < 1) throw ArgumentError("chi-square degrees of freedom must be >= 1");
  if (!(prob > 0.0 && prob < 1.0)) {
    throw ArgumentError("probability " + std::to_string(prob) + " outside (0, 1)");
  }
  // P(d/2, x/2) = prob, inverted by Boost's Halley iteration.
  return 2.0 * boost::math::gamma_p_inv(0.5 * d, prob);
}

double Chi2Cdf(int d, double x) {
  if (d < 1) throw ArgumentError("chi-square degrees of freedom must be >= 1");
  if (!(x > 0.0)) return 0.0;
  return boost::math::gamma_p(0.5 * d, 0.5 * x);
}

}  // namespace lotdepth
