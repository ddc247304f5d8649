// Copyright 2026 The Prefrank Authors.
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

#ifndef PREFRANK_WILSON_HPP_
#define PREFRANK_WILSON_HPP_

namespace prefrank {

// The .975 quantile of the standard normal, to six decimals.
inline constexpr double kDefaultZ = 1.959964;

// Wilson score interval for a binomial proportion.
struct WilsonInterval {
  double center = 0.5;
  double lower = 0.0;
  double upper = 1.0;
  double half_width = 0.5;

  double length() const { return 2.0 * half_width; }
};

// Interval for an observed share out of `size` trials. Total on
// 0 <= share <= 1, size >= 0, z > 0; size = 0 yields [0, 1].
WilsonInterval wilson_interval(double share, double size, double z = kDefaultZ);

// Recovers the trial count from the share and the interval's lower bound
// `eta`, by the closed-form positive root of
//   ((s-eta)/z)^2 M^2 + [(s-eta)(1-2eta) - (1-s)s] M - eta(1-eta) z^2 = 0.
// Requires 0 < eta < share < 1; throws DomainError otherwise.
double invert_wilson_lower(double share, double eta, double z = kDefaultZ);

// Recovers the trial count from the share and the full interval length.
// Every length in (0, 1) has exactly one positive solution; length 1 maps to
// 0 and lengths above 1 (or non-positive) throw DomainError.
double invert_wilson_length(double share, double length, double z = kDefaultZ);

// Same center, half-width multiplied by sqrt(e_j / e_max). Throws
// InputError(kInvalidArgument) unless 0 <= e_j <= e_max and e_max > 0.
WilsonInterval scale_interval(const WilsonInterval& interval, double e_j,
                              double e_max);

}  // namespace prefrank

#endif  // PREFRANK_WILSON_HPP_
