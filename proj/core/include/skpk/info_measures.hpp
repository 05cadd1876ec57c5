// Copyright 2026 The skpk Authors.
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

#pragma once

// Shannon information measures over subsets of {X, Y, Z}, in bits.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>

#include "skpk/source_model.hpp"

namespace skpk {

enum class Var : std::uint8_t { X = 1, Y = 2, Z = 4 };

/// Subset of {X, Y, Z}.
class VarSet {
 public:
  constexpr VarSet() = default;
  /// Throws kOverlappingSets when a label is repeated.
  VarSet(std::initializer_list<Var> vars);

  static constexpr VarSet from_mask(std::uint8_t mask) { return VarSet(mask & 7u); }

  constexpr bool empty() const noexcept { return mask_ == 0; }
  constexpr bool contains(Var v) const noexcept {
    return (mask_ & static_cast<std::uint8_t>(v)) != 0;
  }
  constexpr bool disjoint(VarSet other) const noexcept { return (mask_ & other.mask_) == 0; }
  constexpr std::uint8_t mask() const noexcept { return mask_; }
  int size() const noexcept;
  std::string to_string() const;

  friend constexpr VarSet operator|(VarSet a, VarSet b) noexcept {
    return VarSet(static_cast<std::uint8_t>(a.mask_ | b.mask_));
  }
  friend constexpr bool operator==(VarSet, VarSet) = default;

 private:
  constexpr explicit VarSet(std::uint8_t mask) : mask_(mask) {}
  std::uint8_t mask_ = 0;
};

/// H(vars) of the marginal. Zero-mass cells are skipped (0 log 0 = 0).
double entropy(const JointPmf3& pmf, VarSet vars);

/// H(target | given) = H(target, given) - H(given). `given` may be empty.
double conditional_entropy(const JointPmf3& pmf, VarSet target, VarSet given);

double mutual_information(const JointPmf3& pmf, VarSet u, VarSet v);

/// I(u ; v | w); an empty w reduces to mutual_information(u, v).
double conditional_mutual_information(const JointPmf3& pmf, VarSet u, VarSet v, VarSet w);

/// h(p) = -p log2 p - (1-p) log2 (1-p), with h(0) = h(1) = 0.
double binary_entropy(double p);

/// Entropy in bits of a probability vector, with compensated summation.
double entropy_of(std::span<const double> masses);

/// Clamps rounding-level negatives (>= -1e-10) to 0 and raises
/// kInternalConsistency for anything more negative.
double clamp_nonnegative(double value, const char* what);

}  // namespace skpk
