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

#include "skpk/info_measures.hpp"

#include <bit>
#include <cmath>
#include <vector>

#include "numeric.hpp"
#include "skpk/error.hpp"

namespace skpk {

VarSet::VarSet(std::initializer_list<Var> vars) {
  for (Var v : vars) {
    if (contains(v)) throw Error(ErrorCode::kOverlappingSets, "duplicate label in variable set");
    mask_ = static_cast<std::uint8_t>(mask_ | static_cast<std::uint8_t>(v));
  }
}

int VarSet::size() const noexcept { return std::popcount(mask_); }

std::string VarSet::to_string() const {
  std::string s;
  if (contains(Var::X)) s += 'X';
  if (contains(Var::Y)) s += 'Y';
  if (contains(Var::Z)) s += 'Z';
  return s.empty() ? "{}" : s;
}

double entropy_of(std::span<const double> masses) {
  detail::CompensatedSum acc;
  for (double p : masses) {
    if (p > 0.0) acc.add(-p * std::log2(p));
  }
  return acc.value();
}

double clamp_nonnegative(double value, const char* what) {
  if (value >= 0.0) return value;
  if (value >= -1e-10) return 0.0;
  throw Error(ErrorCode::kInternalConsistency,
              std::string(what) + " came out negative: " + std::to_string(value));
}

namespace {

// Entropy of the marginal on `vars`; the empty set has entropy 0.
double marginal_entropy(const JointPmf3& pmf, VarSet vars) {
  if (vars.empty()) return 0.0;
  const Card& c = pmf.card();
  const std::size_t nx = vars.contains(Var::X) ? c.x : 1;
  const std::size_t ny = vars.contains(Var::Y) ? c.y : 1;
  const std::size_t nz = vars.contains(Var::Z) ? c.z : 1;
  std::vector<detail::CompensatedSum> marginal(nx * ny * nz);
  const auto probs = pmf.probs();
  std::size_t cell = 0;
  for (std::size_t x = 0; x < c.x; ++x) {
    for (std::size_t y = 0; y < c.y; ++y) {
      for (std::size_t z = 0; z < c.z; ++z, ++cell) {
        const std::size_t mx = nx == 1 ? 0 : x;
        const std::size_t my = ny == 1 ? 0 : y;
        const std::size_t mz = nz == 1 ? 0 : z;
        marginal[(mx * ny + my) * nz + mz].add(probs[cell]);
      }
    }
  }
  std::vector<double> masses;
  masses.reserve(marginal.size());
  for (const auto& m : marginal) masses.push_back(m.value());
  return entropy_of(masses);
}

void require_nonempty(VarSet s, const char* role) {
  if (s.empty()) throw Error(ErrorCode::kEmptyVarSet, std::string(role) + " must be nonempty");
}

void require_disjoint(VarSet a, VarSet b) {
  if (!a.disjoint(b)) {
    throw Error(ErrorCode::kOverlappingSets, a.to_string() + " and " + b.to_string() + " overlap");
  }
}

}  // namespace

double entropy(const JointPmf3& pmf, VarSet vars) {
  require_nonempty(vars, "entropy argument");
  return clamp_nonnegative(marginal_entropy(pmf, vars), "entropy");
}

double conditional_entropy(const JointPmf3& pmf, VarSet target, VarSet given) {
  require_nonempty(target, "conditional entropy target");
  require_disjoint(target, given);
  return clamp_nonnegative(marginal_entropy(pmf, target | given) - marginal_entropy(pmf, given),
                           "conditional entropy");
}

double mutual_information(const JointPmf3& pmf, VarSet u, VarSet v) {
  require_nonempty(u, "mutual information argument");
  require_nonempty(v, "mutual information argument");
  require_disjoint(u, v);
  return clamp_nonnegative(
      marginal_entropy(pmf, u) + marginal_entropy(pmf, v) - marginal_entropy(pmf, u | v),
      "mutual information");
}

double conditional_mutual_information(const JointPmf3& pmf, VarSet u, VarSet v, VarSet w) {
  require_nonempty(u, "conditional mutual information argument");
  require_nonempty(v, "conditional mutual information argument");
  require_disjoint(u, v);
  require_disjoint(u, w);
  require_disjoint(v, w);
  if (w.empty()) return mutual_information(pmf, u, v);
  return clamp_nonnegative(marginal_entropy(pmf, u | w) + marginal_entropy(pmf, v | w) -
                               marginal_entropy(pmf, u | v | w) - marginal_entropy(pmf, w),
                           "conditional mutual information");
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kParamOutOfRange, "binary entropy needs p in [0, 1]");
  }
  const double masses[] = {p, 1.0 - p};
  return entropy_of(masses);
}

}  // namespace skpk
