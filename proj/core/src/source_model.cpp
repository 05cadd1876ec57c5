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

#include "skpk/source_model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "numeric.hpp"
#include "skpk/error.hpp"

namespace skpk {

JointPmf3 make_joint_pmf(Card card, std::vector<double> probs) {
  if (card.x == 0 || card.y == 0 || card.z == 0) {
    throw Error(ErrorCode::kShapeMismatch, "alphabet sizes must be >= 1");
  }
  if (probs.size() != card.cells()) {
    throw Error(ErrorCode::kShapeMismatch,
                "expected " + std::to_string(card.cells()) + " masses, got " +
                    std::to_string(probs.size()));
  }
  detail::CompensatedSum total;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!std::isfinite(probs[i]) || probs[i] < 0.0) {
      throw Error(ErrorCode::kNegativeMass,
                  "mass at index " + std::to_string(i) + " is negative or not finite");
    }
    total.add(probs[i]);
  }
  const double sum = total.value();
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kBadSum, "masses sum to " + std::to_string(sum));
  }
  if (sum != 1.0) {
    for (double& p : probs) p /= sum;
  }
  return JointPmf3(card, std::move(probs));
}

JointPmf3 point_mass_source() { return make_joint_pmf({1, 1, 1}, {1.0}); }

JointPmf3 xor_source() {
  std::vector<double> p(8, 0.0);
  for (Symbol x = 0; x < 2; ++x) {
    for (Symbol y = 0; y < 2; ++y) {
      p[(x * 2 + y) * 2 + (x ^ y)] = 0.25;
    }
  }
  return make_joint_pmf({2, 2, 2}, std::move(p));
}

JointPmf3 cascade_bsc_source(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    throw Error(ErrorCode::kParamOutOfRange, "crossover probabilities must lie in [0, 1]");
  }
  auto flip = [](Symbol a, Symbol b, double r) { return a == b ? 1.0 - r : r; };
  std::vector<double> masses(8, 0.0);
  for (Symbol x = 0; x < 2; ++x) {
    for (Symbol y = 0; y < 2; ++y) {
      for (Symbol z = 0; z < 2; ++z) {
        masses[(x * 2 + y) * 2 + z] = 0.5 * flip(x, y, p) * flip(x, z, q);
      }
    }
  }
  return make_joint_pmf({2, 2, 2}, std::move(masses));
}

bool cascade_bsc_in_ordered_regime(double p, double q) noexcept {
  return 0.0 < q && q < p && p < 0.5;
}

JointPmf3 random_pmf(Card card, std::uint64_t seed) {
  for (std::size_t c : {card.x, card.y, card.z}) {
    if (c < 1 || c > 4) {
      throw Error(ErrorCode::kCardTooLarge, "random_pmf cardinalities must lie in [1, 4]");
    }
  }
  std::mt19937_64 rng(seed);
  std::vector<double> masses(card.cells());
  double total = 0.0;
  for (double& m : masses) {
    // -log(1 - u) with u in [0, 1) is a unit exponential variate.
    m = -std::log1p(-detail::unit_interval(rng()));
    total += m;
  }
  if (total <= 0.0) {
    masses.assign(masses.size(), 1.0);
    total = static_cast<double>(masses.size());
  }
  for (double& m : masses) m /= total;
  return make_joint_pmf(card, std::move(masses));
}

SampleBlock sample_iid(const JointPmf3& pmf, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::kParamOutOfRange, "blocklength must be >= 1");
  const auto probs = pmf.probs();
  std::vector<double> cdf(probs.size());
  std::size_t last_positive = 0;
  double running = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    running += probs[i];
    cdf[i] = running;
    if (probs[i] > 0.0) last_positive = i;
  }

  const Card& card = pmf.card();
  std::mt19937_64 rng(seed);
  SampleBlock block;
  block.xs.resize(n);
  block.ys.resize(n);
  block.zs.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double u = detail::unit_interval(rng());
    std::size_t cell = last_positive;
    for (std::size_t i = 0; i < cdf.size(); ++i) {
      if (probs[i] > 0.0 && u < cdf[i]) {
        cell = i;
        break;
      }
    }
    block.zs[t] = static_cast<Symbol>(cell % card.z);
    block.ys[t] = static_cast<Symbol>((cell / card.z) % card.y);
    block.xs[t] = static_cast<Symbol>(cell / (card.z * card.y));
  }
  return block;
}

}  // namespace skpk
