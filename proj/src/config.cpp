/* Copyright 2026 The lenctl Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "lenctl/config.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "lenctl/error.hpp"

namespace lenctl {

std::vector<UnitStride> HanselConfig::ordered_units() const {
  std::vector<UnitStride> out = units;
  std::stable_sort(out.begin(), out.end(),
                   [](const UnitStride& a, const UnitStride& b) {
                     return unit_granularity(a.unit) < unit_granularity(b.unit);
                   });
  return out;
}

UnitStride HanselConfig::primary() const {
  if (units.empty()) throw Error(ErrorKind::kConfig, "no length unit configured");
  return ordered_units().back();
}

void HanselConfig::check() const {
  const auto fail = [](const std::string& msg) {
    throw Error(ErrorKind::kConfig, msg);
  };
  if (units.empty()) fail("at least one length unit is required");
  std::set<LengthUnit> seen;
  for (const UnitStride& u : units) {
    if (!seen.insert(u.unit).second) {
      fail("unit listed twice: " + std::string(unit_name(u.unit)));
    }
    if (u.stride < 1) fail("stride (delta) must be at least 1");
    if (residual_max >= u.stride) {
      fail("residual max (" + std::to_string(residual_max) +
           ") must be below the stride (" + std::to_string(u.stride) + ")");
    }
  }
  if (residual_max < 0) fail("residual max must be non-negative");
  for (double f : {residual_fraction, vanilla_fraction, gretel_within_nonvanilla}) {
    if (!(f >= 0.0 && f <= 1.0)) fail("fractions must lie in [0, 1]");
  }
  if (mask_n < 0) fail("mask_n must be non-negative");
  if (max_tokens < 1) fail("max_tokens must be positive");
  rendering.check();
}

}  // namespace lenctl
