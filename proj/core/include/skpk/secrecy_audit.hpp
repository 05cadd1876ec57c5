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

// Exact and sampled measurement of the recoverability, secrecy and
// uniformity conditions for a protocol run over a source.

#include <cstddef>
#include <cstdint>
#include <string>

#include "skpk/capacity_region.hpp"
#include "skpk/protocol_engine.hpp"
#include "skpk/source_model.hpp"

namespace skpk {

enum class AuditMode { kExact, kMonteCarlo };

/// All rate fields are in bits per source symbol and clamped at 0 after a
/// -1e-10 consistency check.
struct SecrecyReport {
  std::size_t n = 0;
  AuditMode mode = AuditMode::kExact;
  std::size_t trials = 0;  // 0 for exact audits

  double sk_error = 0.0;  // max over Y, Z of Pr{estimate != X's key}
  double pk_error = 0.0;  // Pr{Y's estimate != X's key}
  double sk_leak_rate = 0.0;     // I(K_S ; F) / n
  double pk_leak_rate = 0.0;     // I(K_P ; F, Z^n) / n
  double sk_unif_deficit = 0.0;  // (log2 |K_S| - H(K_S)) / n
  double pk_unif_deficit = 0.0;
  double cross_key_rate = 0.0;  // I(K_S ; K_P) / n
  double achieved_sk_rate = 0.0;  // H(K_S) / n
  double achieved_pk_rate = 0.0;  // H(K_P) / n

  // Informational extras.
  std::uint64_t sk_range = 1;
  std::uint64_t pk_range = 1;
  double sk_leak_bits = 0.0;  // unnormalized I(K_S ; F)
  double pk_leak_bits = 0.0;
  // Set when Z^n was replaced by the protocol's Z statistic; the pk leak is
  // then a lower bound on the true leakage.
  bool pk_leak_lower_bound = false;
};

struct AuditLimits {
  std::uint64_t max_states = std::uint64_t{1} << 22;
};

/// Enumerates every block of the support with its product-law probability.
/// Throws kStateSpaceTooLarge when (|X||Y||Z|)^n exceeds the limit.
SecrecyReport exact_audit(const Protocol& protocol, const JointPmf3& pmf, AuditLimits limits = {});

/// Plug-in estimates over `trials` i.i.d. blocks; trial t uses the sampling
/// seed derived from (seed, t).
SecrecyReport mc_audit(const Protocol& protocol, const JointPmf3& pmf, std::size_t trials,
                       std::uint64_t seed);

struct ComplianceVerdict {
  double eps = 0.0;
  bool sk_recoverable = false;
  bool pk_recoverable = false;
  bool sk_secret_uniform = false;  // leak and deficit both <= eps
  bool pk_secret_uniform = false;
  // Condition value minus eps; a flag passes iff its margin is <= 0.
  double sk_recover_margin = 0.0;
  double pk_recover_margin = 0.0;
  double sk_secrecy_margin = 0.0;
  double pk_secrecy_margin = 0.0;

  bool all_pass() const noexcept {
    return sk_recoverable && pk_recoverable && sk_secret_uniform && pk_secret_uniform;
  }
};

ComplianceVerdict check_definition(const SecrecyReport& report, double eps);

RatePair achieved_rate_pair(const SecrecyReport& report);

std::string to_string(AuditMode mode);
/// Flat records keyed by the SecrecyReport field names.
std::string report_to_json(const SecrecyReport& report);
std::string report_to_csv(const SecrecyReport& report);
std::string verdict_to_json(const ComplianceVerdict& verdict);
std::string verdict_to_csv(const ComplianceVerdict& verdict);

}  // namespace skpk
