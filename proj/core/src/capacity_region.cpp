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

#include "skpk/capacity_region.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "skpk/error.hpp"
#include "skpk/info_measures.hpp"

namespace skpk {
namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kDedupTol = 1e-9;
constexpr double kSnap = 1e-12;
constexpr double kDegeneratePk = 1e-12;
constexpr double kRoundingGap = 1e-10;

double snap(double v) { return std::fabs(v) < kSnap ? 0.0 : v; }

// Nonnegative-quadrant direction d is a recession direction iff no
// half-plane has a positive component along it.
bool is_recession_direction(const std::vector<HalfPlane>& planes, double dx, double dy) {
  return std::none_of(planes.begin(), planes.end(), [&](const HalfPlane& h) {
    return h.coef_a * dx + h.coef_b * dy > 1e-15;
  });
}

void require_bounded(const std::vector<HalfPlane>& planes) {
  // The recession cone inside the quadrant is generated by the axis
  // directions and by the zero-level directions of the half-plane normals
  // that fall inside the quadrant.
  std::vector<std::array<double, 2>> rays = {{1.0, 0.0}, {0.0, 1.0}};
  for (const auto& h : planes) {
    const double dx = -h.coef_b;
    const double dy = h.coef_a;
    if (dx >= 0 && dy >= 0) rays.push_back({dx, dy});
    if (dx <= 0 && dy <= 0) rays.push_back({-dx, -dy});
  }
  for (const auto& r : rays) {
    if ((r[0] > 0 || r[1] > 0) && is_recession_direction(planes, r[0], r[1])) {
      throw Error(ErrorCode::kUnboundedRegion, "region is not bounded in the nonnegative quadrant");
    }
  }
}

std::vector<RatePair> enumerate_vertices(const std::vector<HalfPlane>& planes) {
  std::vector<HalfPlane> lines = planes;
  lines.push_back({-1.0, 0.0, 0.0, "rs_nonneg"});
  lines.push_back({0.0, -1.0, 0.0, "rp_nonneg"});

  auto feasible = [&](RatePair p) {
    if (p.rs < -kFeasTol || p.rp < -kFeasTol) return false;
    return std::all_of(planes.begin(), planes.end(),
                       [&](const HalfPlane& h) { return h.satisfied_by(p, kFeasTol); });
  };

  std::vector<RatePair> found;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const auto& l1 = lines[i];
      const auto& l2 = lines[j];
      const double det = l1.coef_a * l2.coef_b - l2.coef_a * l1.coef_b;
      if (std::fabs(det) < 1e-15) continue;
      RatePair p{(l1.bound * l2.coef_b - l2.bound * l1.coef_b) / det,
                 (l1.coef_a * l2.bound - l2.coef_a * l1.bound) / det};
      p.rs = snap(p.rs);
      p.rp = snap(p.rp);
      if (!feasible(p)) continue;
      p.rs = std::max(p.rs, 0.0);
      p.rp = std::max(p.rp, 0.0);
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const RatePair& q) {
        return std::hypot(p.rs - q.rs, p.rp - q.rp) < kDedupTol;
      });
      if (!duplicate) found.push_back(p);
    }
  }
  if (found.size() < 2) return found;

  double cx = 0.0;
  double cy = 0.0;
  for (const auto& p : found) {
    cx += p.rs;
    cy += p.rp;
  }
  cx /= static_cast<double>(found.size());
  cy /= static_cast<double>(found.size());
  std::stable_sort(found.begin(), found.end(), [&](const RatePair& a, const RatePair& b) {
    return std::atan2(a.rp - cy, a.rs - cx) < std::atan2(b.rp - cy, b.rs - cx);
  });

  // Start from the rs-axis vertex closest to the origin, else the lowest one.
  auto start = std::min_element(found.begin(), found.end(), [](const RatePair& a, const RatePair& b) {
    const bool a_axis = a.rp <= kFeasTol;
    const bool b_axis = b.rp <= kFeasTol;
    if (a_axis != b_axis) return a_axis;
    if (a_axis) return a.rs < b.rs;
    return a.rp < b.rp || (a.rp == b.rp && a.rs < b.rs);
  });
  std::rotate(found.begin(), start, found.end());
  return found;
}

}  // namespace

HalfPlane HalfPlane::make(double coef_a, double coef_b, double bound, std::string label) {
  const double scale = std::max(std::fabs(coef_a), std::fabs(coef_b));
  if (!(scale > 0.0)) {
    throw Error(ErrorCode::kParamOutOfRange, "half-plane normal must be nonzero");
  }
  return {coef_a / scale, coef_b / scale, bound / scale, std::move(label)};
}

std::string_view to_string(RegionKind kind) noexcept {
  switch (kind) {
    case RegionKind::kOuter: return "outer";
    case RegionKind::kInner: return "inner";
    case RegionKind::kExact: return "exact";
  }
  return "unknown";
}

std::string_view to_string(CaseTag tag) noexcept {
  switch (tag) {
    case CaseTag::kTheorem3: return "theorem3";
    case CaseTag::kCase1: return "case1";
    case CaseTag::kCase2: return "case2";
    case CaseTag::kImpossibleCase: return "impossible_case";
  }
  return "unknown";
}

RegionSpec::RegionSpec(RegionKind kind, std::vector<HalfPlane> halfplanes)
    : kind_(kind), halfplanes_(std::move(halfplanes)) {
  require_bounded(halfplanes_);
  vertices_ = enumerate_vertices(halfplanes_);
}

SourceMeasures compute_measures(const JointPmf3& pmf) {
  const VarSet x{Var::X};
  const VarSet y{Var::Y};
  const VarSet z{Var::Z};
  SourceMeasures m;
  m.abc.a = mutual_information(pmf, z, x | y);
  m.abc.b = std::min(mutual_information(pmf, x, y | z), mutual_information(pmf, y, x | z));
  const double total_correlation =
      entropy(pmf, x) + entropy(pmf, y) + entropy(pmf, z) - entropy(pmf, x | y | z);
  m.abc.c = 0.5 * clamp_nonnegative(total_correlation, "total correlation");
  m.i_x_z = mutual_information(pmf, x, z);
  m.i_y_z = mutual_information(pmf, y, z);
  m.i_x_y = mutual_information(pmf, x, y);
  m.i_x_y_given_z = conditional_mutual_information(pmf, x, y, z);
  return m;
}

AbcTriple compute_abc(const JointPmf3& pmf) { return compute_measures(pmf).abc; }

double sk_capacity(const JointPmf3& pmf) {
  const AbcTriple t = compute_abc(pmf);
  return std::min({t.a, t.b, t.c});
}

double pk_capacity(const JointPmf3& pmf) {
  return conditional_mutual_information(pmf, {Var::X}, {Var::Y}, {Var::Z});
}

RegionSpec outer_bound(const JointPmf3& pmf) {
  const SourceMeasures m = compute_measures(pmf);
  return RegionSpec(RegionKind::kOuter,
                    {HalfPlane::make(1, 0, m.abc.a, std::string(kLabelSkCap)),
                     HalfPlane::make(0, 1, m.i_x_y_given_z, std::string(kLabelPkCap)),
                     HalfPlane::make(1, 1, m.abc.b, std::string(kLabelSum)),
                     HalfPlane::make(2, 1, 2 * m.abc.c, std::string(kLabelWeighted))});
}

RegionSpec inner_bound(const JointPmf3& pmf) {
  const SourceMeasures m = compute_measures(pmf);
  const double sk_cap = std::min({m.abc.a, m.abc.b, m.abc.c});
  const double pk_cap = m.i_x_y_given_z;
  if (pk_cap <= kDegeneratePk) {
    return RegionSpec(RegionKind::kInner,
                      {HalfPlane::make(1, 0, sk_cap, std::string(kLabelTradeoff)),
                       HalfPlane::make(0, 1, 0.0, std::string(kLabelPkCap))});
  }
  // M >= m holds exactly, so a gap at rounding level is read as zero. Any
  // larger negative gap is kept as computed.
  double gap = sk_cap - std::min(m.i_x_z, m.i_y_z);
  if (gap < 0.0 && gap >= -kRoundingGap) gap = 0.0;
  const double slope = gap / pk_cap;
  return RegionSpec(RegionKind::kInner,
                    {HalfPlane::make(1, slope, sk_cap, std::string(kLabelTradeoff)),
                     HalfPlane::make(0, 1, pk_cap, std::string(kLabelPkCap))});
}

std::optional<RegionSpec> exact_region(const JointPmf3& pmf, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::kParamOutOfRange, "tolerance must be positive");
  const RegionSpec outer = outer_bound(pmf);
  const AbcTriple t = compute_abc(pmf);
  if (std::min({t.a, t.b, t.c}) < t.b - tol) return std::nullopt;
  std::vector<HalfPlane> planes;
  for (const auto& h : outer.halfplanes()) {
    if (h.label == kLabelPkCap || h.label == kLabelSum) planes.push_back(h);
  }
  return RegionSpec(RegionKind::kExact, std::move(planes));
}

const std::vector<RatePair>& vertices(const RegionSpec& region) { return region.vertices(); }

bool contains(const RegionSpec& region, RatePair pair, double tol) {
  if (pair.rs < -tol || pair.rp < -tol) return false;
  const auto& planes = region.halfplanes();
  return std::all_of(planes.begin(), planes.end(),
                     [&](const HalfPlane& h) { return h.satisfied_by(pair, tol); });
}

double region_area(const RegionSpec& region) {
  const auto& v = region.vertices();
  if (v.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % v.size()];
    twice += p.rs * q.rp - q.rs * p.rp;
  }
  return 0.5 * std::fabs(twice);
}

NotablePoints notable_points(const JointPmf3& pmf, double tol) {
  const SourceMeasures m = compute_measures(pmf);
  const auto& [a, b, c] = m.abc;
  const double sk_cap = std::min({a, b, c});
  const double lo = std::min(m.i_x_z, m.i_y_z);
  const double hi = std::max(m.i_x_z, m.i_y_z);
  const double pk_cap = m.i_x_y_given_z;

  NotablePoints out;
  auto add = [&](const char* label, double rs, double rp) {
    LabeledPoint lp{label, {rs, rp}, false};
    if (lp.point.rs < 0.0) lp.point.rs = 0.0, lp.clamped = true;
    if (lp.point.rp < 0.0) lp.point.rp = 0.0, lp.clamped = true;
    out.points.push_back(std::move(lp));
  };
  add("P1", 0.0, pk_cap);
  add("P2", sk_cap, 0.0);
  add("P3", lo, pk_cap);
  add("P4", hi, b - hi);
  add("P5", a, m.i_x_y - a);

  if (std::fabs(sk_cap - b) <= tol) {
    out.tag = CaseTag::kTheorem3;
  } else if (std::fabs(sk_cap - c) <= tol) {
    out.tag = CaseTag::kCase1;
  } else if (c <= b + tol) {
    out.tag = CaseTag::kCase2;
  } else {
    out.tag = CaseTag::kImpossibleCase;
  }
  return out;
}

}  // namespace skpk
