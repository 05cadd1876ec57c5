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

// (SK, PK) rate regions: the A, B, C quantities, the outer and inner bounds,
// the exact region when B is the smallest of the three, and 2D polygon
// utilities over (rs, rp).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skpk/source_model.hpp"

namespace skpk {

/// Secret-key and private-key rates in bits per source symbol.
struct RatePair {
  double rs = 0.0;
  double rp = 0.0;
};

/// A = I(Z; X,Y), B = min{I(X; Y,Z), I(Y; X,Z)},
/// C = (H(X) + H(Y) + H(Z) - H(X,Y,Z)) / 2.
struct AbcTriple {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// coef_a * rs + coef_b * rp <= bound, stored with max(|coef_a|, |coef_b|) = 1.
struct HalfPlane {
  double coef_a = 0.0;
  double coef_b = 0.0;
  double bound = 0.0;
  std::string label;

  /// Canonicalizes the scaling; throws kParamOutOfRange on a zero normal.
  static HalfPlane make(double coef_a, double coef_b, double bound, std::string label);

  bool satisfied_by(RatePair p, double tol) const noexcept {
    return coef_a * p.rs + coef_b * p.rp <= bound + tol;
  }
};

enum class RegionKind { kOuter, kInner, kExact };
std::string_view to_string(RegionKind kind) noexcept;

/// Intersection of half-planes with the nonnegative quadrant. Construction
/// rejects unbounded regions (kUnboundedRegion) and computes the vertex list.
class RegionSpec {
 public:
  RegionSpec(RegionKind kind, std::vector<HalfPlane> halfplanes);

  RegionKind kind() const noexcept { return kind_; }
  const std::vector<HalfPlane>& halfplanes() const noexcept { return halfplanes_; }
  /// Extreme points, counterclockwise from the vertex on the rs-axis nearest
  /// the origin.
  const std::vector<RatePair>& vertices() const noexcept { return vertices_; }

 private:
  RegionKind kind_;
  std::vector<HalfPlane> halfplanes_;
  std::vector<RatePair> vertices_;
};

/// All two-variable quantities the region formulas draw on.
struct SourceMeasures {
  AbcTriple abc;
  double i_x_z = 0.0;         // I(X; Z)
  double i_y_z = 0.0;         // I(Y; Z)
  double i_x_y = 0.0;         // I(X; Y)
  double i_x_y_given_z = 0.0; // I(X; Y | Z)
};
SourceMeasures compute_measures(const JointPmf3& pmf);

AbcTriple compute_abc(const JointPmf3& pmf);
/// min{A, B, C}.
double sk_capacity(const JointPmf3& pmf);
/// I(X; Y | Z).
double pk_capacity(const JointPmf3& pmf);

/// Labels carried by the outer-bound half-planes.
inline constexpr std::string_view kLabelSkCap = "sk_cap";          // rs <= A
inline constexpr std::string_view kLabelPkCap = "pk_cap";          // rp <= I(X;Y|Z)
inline constexpr std::string_view kLabelSum = "sum";               // rs + rp <= B
inline constexpr std::string_view kLabelWeighted = "weighted_sum"; // 2rs + rp <= 2C
inline constexpr std::string_view kLabelTradeoff = "tradeoff";     // inner-bound slope line

/// Four half-planes; redundant ones are kept.
RegionSpec outer_bound(const JointPmf3& pmf);

/// With M = min{A,B,C}, m = min{I(X;Z), I(Y;Z)} and P = I(X;Y|Z):
/// {((M - m) / P) rp + rs <= M, rp <= P}, or {rs <= M, rp <= 0} when
/// P <= 1e-12. The slope is used as computed, sign included.
RegionSpec inner_bound(const JointPmf3& pmf);

/// {rp <= I(X;Y|Z), rs + rp <= B} when min{A,B,C} >= B - tol, else nullopt.
std::optional<RegionSpec> exact_region(const JointPmf3& pmf, double tol = 1e-9);

const std::vector<RatePair>& vertices(const RegionSpec& region);
bool contains(const RegionSpec& region, RatePair pair, double tol = 1e-9);
/// Shoelace area of the vertex polygon.
double region_area(const RegionSpec& region);

enum class CaseTag { kTheorem3, kCase1, kCase2, kImpossibleCase };
std::string_view to_string(CaseTag tag) noexcept;

struct LabeledPoint {
  std::string label;
  RatePair point;
  bool clamped = false;
};

struct NotablePoints {
  std::vector<LabeledPoint> points;
  CaseTag tag = CaseTag::kTheorem3;
};

/// P1 = (0, P), P2 = (M, 0), P3 = (m, P),
/// P4 = (m', B - m') with m' = max{I(X;Z), I(Y;Z)},
/// P5 = (A, I(X;Y) - A); negative coordinates are clamped to 0 and flagged.
/// The tag is theorem3 if M = B, case1 if M = C, case2 if A < C <= B, and
/// impossible_case for A < B < C (all within `tol`).
NotablePoints notable_points(const JointPmf3& pmf, double tol = 1e-9);

}  // namespace skpk
