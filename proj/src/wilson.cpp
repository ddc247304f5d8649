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

#include "prefrank/wilson.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prefrank/errors.hpp"

namespace prefrank {
namespace {

// Positive root of a*x^2 + b*x + c = 0 with a > 0 and c <= 0, evaluated
// without cancellation.
double PositiveRoot(double a, double b, double c) {
  const double disc = std::sqrt(b * b - 4.0 * a * c);
  if (b <= 0.0) return (-b + disc) / (2.0 * a);
  // -b + disc suffers cancellation when b > 0; use the conjugate form.
  return (-2.0 * c) / (b + disc);
}

}  // namespace

WilsonInterval wilson_interval(double share, double size, double z) {
  const double z2 = z * z;
  const double denom = 2.0 * size + 2.0 * z2;
  WilsonInterval out;
  out.center = (2.0 * share * size + z2) / denom;
  out.half_width =
      z / denom * std::sqrt(4.0 * share * (1.0 - share) * size + z2);
  out.lower = std::max(0.0, out.center - out.half_width);
  out.upper = std::min(1.0, out.center + out.half_width);
  return out;
}

double invert_wilson_lower(double share, double eta, double z) {
  if (!(eta > 0.0) || !(eta < share) || !(share < 1.0)) {
    throw DomainError(
        "interval inconsistent with share (share=" + std::to_string(share) +
        ", lower=" + std::to_string(eta) + ")");
  }
  const double tau = 1.0 - share;
  const double gap = share - eta;
  const double a = (gap / z) * (gap / z);
  const double b = gap * (1.0 - 2.0 * eta) - tau * share;
  const double c = -eta * (1.0 - eta) * z * z;
  return PositiveRoot(a, b, c);
}

double invert_wilson_length(double share, double length, double z) {
  if (!(length > 0.0) || length > 1.0 || !(share >= 0.0 && share <= 1.0)) {
    throw DomainError("no positive survey size for interval length " +
                      std::to_string(length));
  }
  const double z2 = z * z;
  const double l2 = length * length;
  // L^2 (M + z^2)^2 = z^2 (4 s (1-s) M + z^2)
  const double a = l2;
  const double b = 2.0 * z2 * (l2 - 2.0 * share * (1.0 - share));
  const double c = z2 * z2 * (l2 - 1.0);
  return std::max(0.0, PositiveRoot(a, b, c));
}

WilsonInterval scale_interval(const WilsonInterval& interval, double e_j,
                              double e_max) {
  if (!(e_max > 0.0) || e_j < 0.0 || e_j > e_max) {
    throw InputError(InputError::Kind::kInvalidArgument,
                     "scale_interval requires 0 <= e_j <= e_max, got e_j=" +
                         std::to_string(e_j) +
                         " e_max=" + std::to_string(e_max));
  }
  WilsonInterval out = interval;
  out.half_width = interval.half_width * std::sqrt(e_j / e_max);
  out.lower = std::max(0.0, out.center - out.half_width);
  out.upper = std::min(1.0, out.center + out.half_width);
  return out;
}

}  // namespace prefrank
