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

#ifndef LENCTL_CONFIG_HPP_
#define LENCTL_CONFIG_HPP_

#include <cstdint>
#include <vector>

#include "lenctl/text.hpp"
#include "lenctl/token.hpp"

namespace lenctl {

struct UnitStride {
  LengthUnit unit = LengthUnit::kWord;
  int stride = 20;

  friend bool operator==(const UnitStride&, const UnitStride&) = default;
};

// Augmentation and protocol parameters shared by the augmenter, the
// validator and the generators.
struct HanselConfig {
  // One entry per token family. Multi-unit mode lists several; order does
  // not matter, families are always processed coarse to fine.
  std::vector<UnitStride> units{{LengthUnit::kWord, 20}};
  int residual_max = 1;  // words allowed after the terminator token
  double residual_fraction = 0.20;
  int mask_n = 10;
  TokenRendering rendering;
  std::uint64_t seed = 0;
  double vanilla_fraction = 0.20;
  double gretel_within_nonvanilla = 0.20;
  int max_tokens = 1722;

  // Families sorted coarse to fine (sentence before word).
  std::vector<UnitStride> ordered_units() const;
  // The finest family. It carries the residual and the mask anchor.
  UnitStride primary() const;
  int stride() const { return primary().stride; }
  LengthUnit unit() const { return primary().unit; }

  // Throws kConfig on any invariant violation.
  void check() const;

  friend bool operator==(const HanselConfig&, const HanselConfig&) = default;
};

}  // namespace lenctl

#endif  // LENCTL_CONFIG_HPP_
