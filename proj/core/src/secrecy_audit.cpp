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

#include "skpk/secrecy_audit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "numeric.hpp"
#include "skpk/error.hpp"
#include "skpk/format.hpp"
#include "skpk/info_measures.hpp"

namespace skpk {

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value == 0.0 ? 0.0 : value);
  return buf;
}

double round_to_printed(double value) { return std::stod(format_number(value)); }

namespace {

using Key = std::array<std::uint64_t, 3>;

// Weighted law over small tuples; masses are normalized by the total weight.
class Law {
 public:
  void add(const Key& key, double weight) { cells_[key].add(weight); }

  double entropy(double total) const {
    std::vector<double> masses;
    masses.reserve(cells_.size());
    for (const auto& [key, w] : cells_) masses.push_back(w.value() / total);
    return entropy_of(masses);
  }

 private:
  std::map<Key, detail::CompensatedSum> cells_;
};

struct Accumulator {
  Law ks, kp, ks_kp, f, ks_f, fz, kp_fz;
  std::array<detail::CompensatedSum, 3> sk_miss;
  detail::CompensatedSum pk_miss;
  detail::CompensatedSum total;
  std::map<std::vector<Payload>, std::uint64_t> transcript_ids;

  void add(const ProtocolOutcome& out, std::uint64_t z_key, double weight) {
    auto payloads = out.transcript.payloads();
    const auto [it, inserted] = transcript_ids.try_emplace(std::move(payloads), transcript_ids.size());
    const std::uint64_t fid = it->second;
    const KeyValue s = out.sk_reference;
    const KeyValue p = out.pk_reference;
    ks.add({s, 0, 0}, weight);
    kp.add({p, 0, 0}, weight);
    ks_kp.add({s, p, 0}, weight);
    f.add({fid, 0, 0}, weight);
    ks_f.add({s, fid, 0}, weight);
    fz.add({fid, z_key, 0}, weight);
    kp_fz.add({p, fid, z_key}, weight);
    for (int t = 1; t < 3; ++t) {
      if (out.sk_estimates[t] != s) sk_miss[t].add(weight);
    }
    if (out.pk_estimates[1] != p) pk_miss.add(weight);
    total.add(weight);
  }

  SecrecyReport finish(const Protocol& protocol) const {
    const double w = total.value();
    const double n = static_cast<double>(protocol.n());
    SecrecyReport r;
    r.n = protocol.n();
    r.sk_range = protocol.sk_range();
    r.pk_range = protocol.pk_range();
    r.sk_error = std::clamp(std::max(sk_miss[1].value(), sk_miss[2].value()) / w, 0.0, 1.0);
    r.pk_error = std::clamp(pk_miss.value() / w, 0.0, 1.0);

    const double h_ks = ks.entropy(w);
    const double h_kp = kp.entropy(w);
    r.sk_leak_bits = clamp_nonnegative(h_ks + f.entropy(w) - ks_f.entropy(w), "I(K_S;F)");
    r.pk_leak_bits = clamp_nonnegative(h_kp + fz.entropy(w) - kp_fz.entropy(w), "I(K_P;F,Z)");
    const double cross = clamp_nonnegative(h_ks + h_kp - ks_kp.entropy(w), "I(K_S;K_P)");
    r.sk_leak_rate = r.sk_leak_bits / n;
    r.pk_leak_rate = r.pk_leak_bits / n;
    r.cross_key_rate = cross / n;
    r.achieved_sk_rate = h_ks / n;
    r.achieved_pk_rate = h_kp / n;
    r.sk_unif_deficit = clamp_nonnegative(
        std::log2(static_cast<double>(protocol.sk_range())) - h_ks, "K_S uniformity deficit") / n;
    r.pk_unif_deficit = clamp_nonnegative(
        std::log2(static_cast<double>(protocol.pk_range())) - h_kp, "K_P uniformity deficit") / n;
    return r;
  }
};

std::uint64_t checked_pow(std::uint64_t base, std::size_t n, std::uint64_t limit) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (base != 0 && v > limit / base) return limit + 1;
    v *= base;
  }
  return v;
}

std::uint64_t raw_z_key(std::span<const Symbol> z, std::size_t card_z) {
  // Exact mixed-radix index while it fits, a 64-bit fold beyond.
  std::uint64_t idx = 0;
  bool fits = true;
  for (Symbol s : z) {
    if (idx > (UINT64_MAX - s) / card_z) {
      fits = false;
      break;
    }
    idx = idx * card_z + s;
  }
  if (fits) return idx;
  std::uint64_t h = 0;
  for (Symbol s : z) h = detail::hash_combine(h, s);
  return h;
}

}  // namespace

SecrecyReport exact_audit(const Protocol& protocol, const JointPmf3& pmf, AuditLimits limits) {
  const std::size_t n = protocol.n();
  const Card& card = pmf.card();
  if (checked_pow(card.cells(), n, limits.max_states) > limits.max_states) {
    throw Error(ErrorCode::kStateSpaceTooLarge,
                "exact audit would enumerate more than " + std::to_string(limits.max_states) +
                    " source blocks");
  }
  std::vector<std::size_t> support;
  const auto probs = pmf.probs();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) support.push_back(i);
  }

  Accumulator acc;
  SampleBlock block;
  block.xs.resize(n);
  block.ys.resize(n);
  block.zs.resize(n);
  std::vector<std::size_t> digits(n, 0);
  bool done = false;
  while (!done) {
    double prob = 1.0;
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t cell = support[digits[t]];
      prob *= probs[cell];
      block.zs[t] = static_cast<Symbol>(cell % card.z);
      block.ys[t] = static_cast<Symbol>((cell / card.z) % card.y);
      block.xs[t] = static_cast<Symbol>(cell / (card.z * card.y));
    }
    const ProtocolOutcome out = run(protocol, block);
    acc.add(out, raw_z_key(block.zs, card.z), prob);

    // Odometer step over support^n, last position fastest.
    std::size_t pos = n;
    while (true) {
      if (pos == 0) {
        done = true;
        break;
      }
      --pos;
      if (++digits[pos] < support.size()) break;
      digits[pos] = 0;
    }
  }
  SecrecyReport r = acc.finish(protocol);
  r.mode = AuditMode::kExact;
  r.trials = 0;
  return r;
}

SecrecyReport mc_audit(const Protocol& protocol, const JointPmf3& pmf, std::size_t trials,
                       std::uint64_t seed) {
  if (trials == 0) throw Error(ErrorCode::kParamOutOfRange, "trials must be >= 1");
  Accumulator acc;
  for (std::size_t t = 0; t < trials; ++t) {
    const SampleBlock block =
        sample_iid(pmf, protocol.n(), detail::hash_combine(seed, static_cast<std::uint64_t>(t)));
    const ProtocolOutcome out = run(protocol, block);
    const std::uint64_t z_key = protocol.z_view()
                                    ? protocol.z_view()(block.zs, out.transcript.payloads())
                                    : raw_z_key(block.zs, pmf.card().z);
    acc.add(out, z_key, 1.0);
  }
  SecrecyReport r = acc.finish(protocol);
  r.mode = AuditMode::kMonteCarlo;
  r.trials = trials;
  r.pk_leak_lower_bound = static_cast<bool>(protocol.z_view());
  return r;
}

ComplianceVerdict check_definition(const SecrecyReport& report, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::kParamOutOfRange, "eps must be > 0");
  ComplianceVerdict v;
  v.eps = eps;
  v.sk_recover_margin = report.sk_error - eps;
  v.pk_recover_margin = report.pk_error - eps;
  v.sk_secrecy_margin = std::max(report.sk_leak_rate, report.sk_unif_deficit) - eps;
  v.pk_secrecy_margin = std::max(report.pk_leak_rate, report.pk_unif_deficit) - eps;
  v.sk_recoverable = v.sk_recover_margin <= 0.0;
  v.pk_recoverable = v.pk_recover_margin <= 0.0;
  v.sk_secret_uniform = v.sk_secrecy_margin <= 0.0;
  v.pk_secret_uniform = v.pk_secrecy_margin <= 0.0;
  return v;
}

RatePair achieved_rate_pair(const SecrecyReport& report) {
  return {report.achieved_sk_rate, report.achieved_pk_rate};
}

std::string to_string(AuditMode mode) {
  return mode == AuditMode::kExact ? "exact" : "monte_carlo";
}

namespace {

using Record = nlohmann::ordered_json;

Record report_record(const SecrecyReport& r) {
  Record rec;
  rec["n"] = r.n;
  rec["mode"] = to_string(r.mode);
  rec["trials"] = r.trials;
  rec["sk_error"] = round_to_printed(r.sk_error);
  rec["pk_error"] = round_to_printed(r.pk_error);
  rec["sk_leak_rate"] = round_to_printed(r.sk_leak_rate);
  rec["pk_leak_rate"] = round_to_printed(r.pk_leak_rate);
  rec["sk_unif_deficit"] = round_to_printed(r.sk_unif_deficit);
  rec["pk_unif_deficit"] = round_to_printed(r.pk_unif_deficit);
  rec["cross_key_rate"] = round_to_printed(r.cross_key_rate);
  rec["achieved_sk_rate"] = round_to_printed(r.achieved_sk_rate);
  rec["achieved_pk_rate"] = round_to_printed(r.achieved_pk_rate);
  rec["sk_range"] = r.sk_range;
  rec["pk_range"] = r.pk_range;
  rec["sk_leak_bits"] = round_to_printed(r.sk_leak_bits);
  rec["pk_leak_bits"] = round_to_printed(r.pk_leak_bits);
  rec["pk_leak_lower_bound"] = r.pk_leak_lower_bound;
  return rec;
}

Record verdict_record(const ComplianceVerdict& v) {
  Record rec;
  rec["eps"] = round_to_printed(v.eps);
  rec["sk_recoverable"] = v.sk_recoverable;
  rec["pk_recoverable"] = v.pk_recoverable;
  rec["sk_secret_uniform"] = v.sk_secret_uniform;
  rec["pk_secret_uniform"] = v.pk_secret_uniform;
  rec["sk_recover_margin"] = round_to_printed(v.sk_recover_margin);
  rec["pk_recover_margin"] = round_to_printed(v.pk_recover_margin);
  rec["sk_secrecy_margin"] = round_to_printed(v.sk_secrecy_margin);
  rec["pk_secrecy_margin"] = round_to_printed(v.pk_secrecy_margin);
  rec["all_pass"] = v.all_pass();
  return rec;
}

std::string record_csv(const Record& rec) {
  std::string out = "field,value\n";
  for (const auto& [key, value] : rec.items()) {
    out += key;
    out += ',';
    if (value.is_number_float()) {
      out += format_number(value.get<double>());
    } else if (value.is_string()) {
      out += value.get<std::string>();
    } else {
      out += value.dump();
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string report_to_json(const SecrecyReport& report) { return report_record(report).dump(2) + "\n"; }
std::string report_to_csv(const SecrecyReport& report) { return record_csv(report_record(report)); }
std::string verdict_to_json(const ComplianceVerdict& v) { return verdict_record(v).dump(2) + "\n"; }
std::string verdict_to_csv(const ComplianceVerdict& v) { return record_csv(verdict_record(v)); }

}  // namespace skpk
