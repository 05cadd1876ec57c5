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

// Finite-alphabet three-component sources (X, Y, Z) and i.i.d. sampling.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace skpk {

using Symbol = std::uint32_t;

/// Alphabet sizes (|X|, |Y|, |Z|).
struct Card {
  std::size_t x = 1;
  std::size_t y = 1;
  std::size_t z = 1;

  std::size_t cells() const noexcept { return x * y * z; }
  friend bool operator==(const Card&, const Card&) = default;
};

/// Joint distribution p(x, y, z) stored densely, row-major with x outermost,
/// then y, then z. Instances are immutable and always satisfy: every mass is
/// finite and >= 0, masses sum to 1 within 1e-12, size == card.cells().
class JointPmf3 {
 public:
  const Card& card() const noexcept { return card_; }
  std::span<const double> probs() const noexcept { return probs_; }

  std::size_t index(Symbol x, Symbol y, Symbol z) const noexcept {
    return (static_cast<std::size_t>(x) * card_.y + y) * card_.z + z;
  }
  double operator()(Symbol x, Symbol y, Symbol z) const noexcept {
    return probs_[index(x, y, z)];
  }

 private:
  friend JointPmf3 make_joint_pmf(Card card, std::vector<double> probs);
  JointPmf3(Card card, std::vector<double> probs)
      : card_(card), probs_(std::move(probs)) {}

  Card card_;
  std::vector<double> probs_;
};

/// Validates and wraps a mass table. A sum off by at most 1e-9 is
/// renormalized; anything further is rejected with kBadSum. Non-finite or
/// negative masses raise kNegativeMass, size mismatch kShapeMismatch.
JointPmf3 make_joint_pmf(Card card, std::vector<double> probs);

/// Constant source on the single cell (0, 0, 0).
JointPmf3 point_mass_source();

/// X, Y independent uniform bits and Z = X xor Y.
JointPmf3 xor_source();

/// Uniform X with Y and Z obtained through independent binary symmetric
/// flips of X with crossover p and q respectively, so Y - X - Z is Markov.
/// Throws kParamOutOfRange unless p, q lie in [0, 1]. Parameters outside
/// 0 < q < p < 1/2 are accepted; see cascade_bsc_in_ordered_regime().
JointPmf3 cascade_bsc_source(double p, double q);

/// True iff 0 < q < p < 1/2, the ordering under which the cascade source has
/// min{A, B, C} = B and the closed-form region applies.
bool cascade_bsc_in_ordered_regime(double p, double q) noexcept;

/// Simplex-uniform random distribution (normalized exponential variates).
/// Each cardinality must lie in [1, 4], else kCardTooLarge.
JointPmf3 random_pmf(Card card, std::uint64_t seed);

/// One length-n i.i.d. realization of the source.
struct SampleBlock {
  std::vector<Symbol> xs;
  std::vector<Symbol> ys;
  std::vector<Symbol> zs;

  std::size_t n() const noexcept { return xs.size(); }
};

/// Inverse-CDF sampling over the flattened mass array in index order, driven
/// by a 64-bit Mersenne twister seeded with `seed`. Deterministic in
/// (pmf, n, seed). Throws kParamOutOfRange when n == 0.
SampleBlock sample_iid(const JointPmf3& pmf, std::size_t n, std::uint64_t seed);

// Source-spec files are JSON objects of one of the forms
//   {"type": "table", "card": [cx, cy, cz], "p": [...]}
//   {"type": "xor"}
//   {"type": "cascade_bsc", "p": 0.25, "q": 0.1}
// Unknown fields are rejected with kParseError.
JointPmf3 parse_source_spec(std::string_view json_text);
JointPmf3 load_source_spec(const std::filesystem::path& path);

/// Inline builders used on the command line: "xor", "point_mass",
/// "cascade_bsc:p,q" and "table@<path to source-spec file>".
JointPmf3 parse_inline_source(std::string_view spec);

}  // namespace skpk
