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

#include "skpk/protocol_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "numeric.hpp"
#include "skpk/error.hpp"
#include "skpk/info_measures.hpp"

namespace skpk {

int sender_for_slot(std::size_t slot) noexcept {
  const int r = static_cast<int>(slot % 3);
  return r == 0 ? 3 : r;
}

std::vector<Payload> Transcript::payloads() const {
  std::vector<Payload> out;
  out.reserve(messages.size());
  for (const auto& m : messages) out.push_back(m.payload);
  return out;
}

Protocol::Protocol(Parts parts) : parts_(std::move(parts)) {
  if (parts_.n == 0) throw Error(ErrorCode::kParamOutOfRange, "protocol blocklength must be >= 1");
  if (parts_.slots.size() != 3 * parts_.rounds) {
    throw Error(ErrorCode::kParamOutOfRange, "protocol needs exactly 3 slots per round");
  }
  for (const auto& s : parts_.slots) {
    if (s.alphabet == 0 || !s.fn) {
      throw Error(ErrorCode::kParamOutOfRange, "every slot needs a map and a nonempty alphabet");
    }
  }
  for (const auto& k : parts_.key_maps) {
    if (!k) throw Error(ErrorCode::kParamOutOfRange, "every terminal needs a key map");
  }
  if (parts_.sk_range == 0 || parts_.pk_range == 0) {
    throw Error(ErrorCode::kParamOutOfRange, "key ranges must be >= 1");
  }
}

std::size_t key_bits(std::size_t n, double rate) {
  if (!(rate >= 0.0)) throw Error(ErrorCode::kParamOutOfRange, "rates must be >= 0");
  const double bits = std::ceil(static_cast<double>(n) * rate - 1e-9);
  return bits <= 0.0 ? 0 : static_cast<std::size_t>(bits);
}

namespace {

SlotMap constant_slot() {
  return {1, [](std::span<const Symbol>, std::span<const Payload>) -> Payload { return 0; }};
}

KeyFn constant_keys() {
  return [](std::span<const Symbol>, std::span<const Payload>) { return KeyPair{}; };
}

std::span<const Symbol> component(const SampleBlock& block, int sender) {
  switch (sender) {
    case 1: return block.xs;
    case 2: return block.ys;
    default: return block.zs;
  }
}

}  // namespace

Protocol example1_sk_protocol() {
  Protocol::Parts p;
  p.n = 2;
  p.rounds = 1;
  p.slots = {
      {2, [](std::span<const Symbol> x, std::span<const Payload>) -> Payload { return x[0] & 1u; }},
      {2, [](std::span<const Symbol> y, std::span<const Payload>) -> Payload { return y[1] & 1u; }},
      {2, [](std::span<const Symbol> z, std::span<const Payload>) -> Payload {
         return (z[0] ^ z[1]) & 1u;
       }},
  };
  // F = (X1, Y2, Z1 ^ Z2); every terminal solves the xor relations for X2.
  p.key_maps[0] = [](std::span<const Symbol> x, std::span<const Payload>) {
    return KeyPair{x[1] & 1u, 0};
  };
  p.key_maps[1] = [](std::span<const Symbol> y, std::span<const Payload> f) {
    const KeyValue z1 = (f[0] ^ y[0]) & 1u;
    const KeyValue z2 = (z1 ^ f[2]) & 1u;
    return KeyPair{(y[1] ^ z2) & 1u, 0};
  };
  p.key_maps[2] = [](std::span<const Symbol> z, std::span<const Payload> f) {
    return KeyPair{(f[1] ^ z[1]) & 1u, 0};
  };
  p.sk_range = 2;
  p.pk_range = 1;
  p.descriptor = ProtocolDescriptor::of(ProtocolDescriptor::Type::kExample1Sk);
  return Protocol(std::move(p));
}

Protocol example1_pk_protocol() {
  Protocol::Parts p;
  p.n = 1;
  p.rounds = 1;
  p.slots = {constant_slot(), constant_slot(),
             {2, [](std::span<const Symbol> z, std::span<const Payload>) -> Payload {
                return z[0] & 1u;
              }}};
  p.key_maps[0] = [](std::span<const Symbol> x, std::span<const Payload> f) {
    return KeyPair{0, (x[0] ^ f[2]) & 1u};
  };
  p.key_maps[1] = [](std::span<const Symbol> y, std::span<const Payload>) {
    return KeyPair{0, y[0] & 1u};
  };
  p.key_maps[2] = constant_keys();
  p.sk_range = 1;
  p.pk_range = 2;
  p.descriptor = ProtocolDescriptor::of(ProtocolDescriptor::Type::kExample1Pk);
  return Protocol(std::move(p));
}

// ---------------------------------------------------------------------------
// Time sharing

namespace {

struct Segment {
  std::shared_ptr<const Protocol> proto;
  std::size_t symbol_offset = 0;
  std::size_t slot_offset = 0;
};

struct Layout {
  std::vector<Segment> segments;
  std::vector<std::size_t> segment_of_slot;
};

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  constexpr std::uint64_t kMax = std::uint64_t{1} << 62;
  if (a != 0 && b > kMax / a) {
    throw Error(ErrorCode::kParamOutOfRange, "composed key range exceeds 2^62");
  }
  return a * b;
}

std::uint64_t raw_z_fold(std::span<const Symbol> z) {
  std::uint64_t h = 0x7a5f1e0b3c2d4e6fULL;
  for (Symbol s : z) h = detail::hash_combine(h, s);
  return h;
}

}  // namespace

Protocol time_share(const Protocol& a, const Protocol& b, std::size_t repeats_a,
                    std::size_t repeats_b) {
  if (repeats_a + repeats_b == 0) {
    throw Error(ErrorCode::kParamOutOfRange, "time sharing needs at least one constituent copy");
  }
  auto layout = std::make_shared<Layout>();
  auto pa = std::make_shared<const Protocol>(a);
  auto pb = std::make_shared<const Protocol>(b);
  std::size_t n = 0;
  std::size_t slots = 0;
  std::uint64_t sk_range = 1;
  std::uint64_t pk_range = 1;
  bool any_z_view = false;
  auto append = [&](const std::shared_ptr<const Protocol>& proto) {
    layout->segments.push_back({proto, n, slots});
    for (std::size_t s = 0; s < proto->slots().size(); ++s) {
      layout->segment_of_slot.push_back(layout->segments.size() - 1);
    }
    n += proto->n();
    slots += proto->slots().size();
    sk_range = checked_mul(sk_range, proto->sk_range());
    pk_range = checked_mul(pk_range, proto->pk_range());
    any_z_view = any_z_view || static_cast<bool>(proto->z_view());
  };
  for (std::size_t i = 0; i < repeats_a; ++i) append(pa);
  for (std::size_t i = 0; i < repeats_b; ++i) append(pb);

  Protocol::Parts p;
  p.n = n;
  p.rounds = slots / 3;
  p.sk_range = sk_range;
  p.pk_range = pk_range;
  p.codebook_seed = detail::hash_combine(a.codebook_seed(), b.codebook_seed());

  for (std::size_t g = 0; g < slots; ++g) {
    const std::size_t seg_index = layout->segment_of_slot[g];
    const Segment& seg = layout->segments[seg_index];
    const std::size_t local = g - seg.slot_offset;
    p.slots.push_back(
        {seg.proto->slots()[local].alphabet,
         [layout, seg_index, local](std::span<const Symbol> own, std::span<const Payload> prior) {
           const Segment& s = layout->segments[seg_index];
           return s.proto->slots()[local].fn(own.subspan(s.symbol_offset, s.proto->n()),
                                             prior.subspan(s.slot_offset, local));
         }});
  }

  for (int t = 0; t < 3; ++t) {
    const auto terminal = static_cast<Terminal>(t + 1);
    p.key_maps[t] = [layout, terminal](std::span<const Symbol> own,
                                       std::span<const Payload> f) {
      KeyPair out;
      std::uint64_t sk_radix = 1;
      std::uint64_t pk_radix = 1;
      for (const auto& s : layout->segments) {
        const KeyPair k = s.proto->key_map(terminal)(
            own.subspan(s.symbol_offset, s.proto->n()),
            f.subspan(s.slot_offset, s.proto->slots().size()));
        out.sk += (k.sk % s.proto->sk_range()) * sk_radix;
        out.pk += (k.pk % s.proto->pk_range()) * pk_radix;
        sk_radix *= s.proto->sk_range();
        pk_radix *= s.proto->pk_range();
      }
      return out;
    };
  }

  if (any_z_view) {
    p.z_view = [layout](std::span<const Symbol> z, std::span<const Payload> f) {
      std::uint64_t h = 0;
      for (const auto& s : layout->segments) {
        const auto zs = z.subspan(s.symbol_offset, s.proto->n());
        const std::uint64_t v =
            s.proto->z_view() ? s.proto->z_view()(zs, f.subspan(s.slot_offset, s.proto->slots().size()))
                              : raw_z_fold(zs);
        h = detail::hash_combine(h, v);
      }
      return h;
    };
  }

  if (a.descriptor() && b.descriptor()) {
    ProtocolDescriptor d;
    d.type = ProtocolDescriptor::Type::kTimeShare;
    d.first = std::make_shared<const ProtocolDescriptor>(*a.descriptor());
    d.second = std::make_shared<const ProtocolDescriptor>(*b.descriptor());
    d.repeats_first = repeats_a;
    d.repeats_second = repeats_b;
    p.descriptor = std::move(d);
  }
  return Protocol(std::move(p));
}

// ---------------------------------------------------------------------------
// Random binning
//
// Each terminal hashes its whole n-sequence into one of
// ceil(2^(n (H(own | other two) + slack))) bins, or sends the sequence index
// outright when that many bins would not compress. The bin count is not
// rounded to a power of two so the per-symbol rate stays at its nominal
// value for every n. Every terminal then runs
// maximum-likelihood search over the two announced bins of the others under
// pmf^n, with ties going to the lexicographically smallest candidate pair.
// Keys are seeded uniform maps of the reconstructed sequences. All hashing is
// keyed by the public codebook seed, so the maps are deterministic.

namespace {

constexpr std::uint64_t kBinTag[3] = {0x58b1a7c3e2d40001ULL, 0x59b1a7c3e2d40002ULL,
                                      0x5ab1a7c3e2d40003ULL};
constexpr std::uint64_t kSkTag = 0x534b5f6b65795f31ULL;
constexpr std::uint64_t kPkTag = 0x504b5f6b65795f32ULL;

struct TerminalCode {
  std::size_t card = 1;
  std::uint64_t count = 1;  // card^n
  std::uint64_t bins = 1;
  bool identity = true;
  std::vector<std::uint64_t> bin_of;
  std::vector<std::vector<std::uint32_t>> members;
  std::size_t max_bin = 1;
};

struct Codebook {
  std::size_t n = 1;
  Card card;
  std::uint64_t seed = 0;
  std::array<TerminalCode, 3> codes;
  std::vector<double> log_probs;  // per cell, -inf on zero mass
  std::uint64_t sk_mask = 0;
  std::uint64_t pk_mask = 0;
};

std::uint64_t checked_pow(std::size_t base, std::size_t n, std::uint64_t limit) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (v > limit / base) return limit + 1;
    v *= base;
  }
  return v;
}

std::uint64_t index_of(std::span<const Symbol> seq, std::size_t card) {
  std::uint64_t idx = 0;
  for (Symbol s : seq) {
    if (s >= card) throw Error(ErrorCode::kParamOutOfRange, "symbol outside the source alphabet");
    idx = idx * card + s;
  }
  return idx;
}

void digits_of(std::uint64_t idx, std::size_t card, std::span<Symbol> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<Symbol>(idx % card);
    idx /= card;
  }
}

std::uint64_t sk_value(const Codebook& cb, std::uint64_t ix, std::uint64_t iy, std::uint64_t iz) {
  if (cb.sk_mask == 0) return 0;
  std::uint64_t h = detail::hash_combine(cb.seed ^ kSkTag, ix);
  h = detail::hash_combine(h, iy);
  h = detail::hash_combine(h, iz);
  return h & cb.sk_mask;
}

std::uint64_t pk_value(const Codebook& cb, std::uint64_t ix, std::uint64_t iy) {
  if (cb.pk_mask == 0) return 0;
  std::uint64_t h = detail::hash_combine(cb.seed ^ kPkTag, ix);
  h = detail::hash_combine(h, iy);
  return h & cb.pk_mask;
}

// Reconstruction at one terminal: indices of all three sequences.
std::array<std::uint64_t, 3> ml_decode(const Codebook& cb, int terminal,
                                       std::span<const Symbol> own,
                                       std::span<const Payload> f) {
  const int u = terminal == 0 ? 1 : 0;  // first unknown, label order
  const int v = terminal == 2 ? 1 : 2;  // second unknown
  const auto& cu = cb.codes[u];
  const auto& cv = cb.codes[v];
  if (f[u] >= cu.bins || f[v] >= cv.bins) {
    throw Error(ErrorCode::kInternalConsistency, "announced bin outside the codebook");
  }
  const auto& list_u = cu.members[f[u]];
  const auto& list_v = cv.members[f[v]];
  const std::size_t n = cb.n;

  std::vector<Symbol> su(list_u.size() * n);
  std::vector<Symbol> sv(list_v.size() * n);
  for (std::size_t i = 0; i < list_u.size(); ++i) {
    digits_of(list_u[i], cu.card, std::span<Symbol>(su).subspan(i * n, n));
  }
  for (std::size_t j = 0; j < list_v.size(); ++j) {
    digits_of(list_v[j], cv.card, std::span<Symbol>(sv).subspan(j * n, n));
  }

  std::array<const Symbol*, 3> seq{};
  seq[terminal] = own.data();
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  std::size_t best_j = 0;
  for (std::size_t i = 0; i < list_u.size(); ++i) {
    seq[u] = su.data() + i * n;
    for (std::size_t j = 0; j < list_v.size(); ++j) {
      seq[v] = sv.data() + j * n;
      double score = 0.0;
      for (std::size_t t = 0; t < n && score != -std::numeric_limits<double>::infinity(); ++t) {
        score += cb.log_probs[(seq[0][t] * cb.card.y + seq[1][t]) * cb.card.z + seq[2][t]];
      }
      if (score > best) {
        best = score;
        best_i = i;
        best_j = j;
      }
    }
  }
  std::array<std::uint64_t, 3> idx{};
  idx[terminal] = index_of(own, cb.codes[terminal].card);
  idx[u] = list_u[best_i];
  idx[v] = list_v[best_j];
  return idx;
}

}  // namespace

Protocol binning_protocol(const JointPmf3& pmf, const BinningParams& params,
                          BinningLimits limits) {
  if (params.n == 0) throw Error(ErrorCode::kParamOutOfRange, "blocklength must be >= 1");
  if (!(params.slack > 0.0)) throw Error(ErrorCode::kParamOutOfRange, "slack must be > 0");
  const std::size_t sk_bits = key_bits(params.n, params.sk_rate);
  const std::size_t pk_bits = key_bits(params.n, params.pk_rate);
  if (sk_bits > 62 || pk_bits > 62) {
    throw Error(ErrorCode::kRateInfeasible, "key lengths above 62 bits are not supported");
  }

  auto cb = std::make_shared<Codebook>();
  cb->n = params.n;
  cb->card = pmf.card();
  cb->seed = params.seed;
  cb->sk_mask = sk_bits == 0 ? 0 : (std::uint64_t{1} << sk_bits) - 1;
  cb->pk_mask = pk_bits == 0 ? 0 : (std::uint64_t{1} << pk_bits) - 1;
  for (double p : pmf.probs()) {
    cb->log_probs.push_back(p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity());
  }

  const VarSet all[3] = {{Var::X}, {Var::Y}, {Var::Z}};
  const std::size_t cards[3] = {pmf.card().x, pmf.card().y, pmf.card().z};
  for (int t = 0; t < 3; ++t) {
    TerminalCode& code = cb->codes[t];
    code.card = cards[t];
    code.count = checked_pow(code.card, params.n, limits.max_candidates);
    if (code.count > limits.max_candidates) {
      throw Error(ErrorCode::kRateInfeasible,
                  "sequence space of terminal " + std::to_string(t + 1) + " exceeds the search budget");
    }
    VarSet others;
    for (int o = 0; o < 3; ++o) {
      if (o != t) others = others | all[o];
    }
    const double rate = conditional_entropy(pmf, all[t], others) + params.slack;
    const double want = std::ceil(std::exp2(static_cast<double>(params.n) * rate) - 1e-9);
    code.identity = want >= static_cast<double>(code.count);
    code.bins = code.identity ? code.count : static_cast<std::uint64_t>(want);
    code.bin_of.resize(code.count);
    code.members.assign(code.bins, {});
    for (std::uint64_t idx = 0; idx < code.count; ++idx) {
      const std::uint64_t bin =
          code.identity ? idx
                        : detail::scale_to_range(detail::hash_combine(params.seed ^ kBinTag[t], idx),
                                                 code.bins);
      code.bin_of[idx] = bin;
      code.members[bin].push_back(static_cast<std::uint32_t>(idx));
    }
    code.max_bin = 1;
    for (const auto& m : code.members) code.max_bin = std::max(code.max_bin, m.size());
  }
  for (int t = 0; t < 3; ++t) {
    const int u = t == 0 ? 1 : 0;
    const int v = t == 2 ? 1 : 2;
    const double pairs = static_cast<double>(cb->codes[u].max_bin) *
                         static_cast<double>(cb->codes[v].max_bin);
    if (pairs > static_cast<double>(limits.max_candidates)) {
      throw Error(ErrorCode::kRateInfeasible,
                  "ML search at terminal " + std::to_string(t + 1) + " needs " +
                      std::to_string(static_cast<std::uint64_t>(pairs)) +
                      " candidate evaluations, over the budget");
    }
  }

  Protocol::Parts p;
  p.n = params.n;
  p.rounds = 1;
  p.codebook_seed = params.seed;
  p.sk_range = std::uint64_t{1} << sk_bits;
  p.pk_range = std::uint64_t{1} << pk_bits;
  for (int t = 0; t < 3; ++t) {
    p.slots.push_back({cb->codes[t].bins,
                       [cb, t](std::span<const Symbol> own, std::span<const Payload>) -> Payload {
                         const auto& code = cb->codes[t];
                         return code.bin_of[index_of(own, code.card)];
                       }});
    p.key_maps[t] = [cb, t](std::span<const Symbol> own, std::span<const Payload> f) {
      const auto idx = ml_decode(*cb, t, own, f);
      KeyPair k;
      k.sk = sk_value(*cb, idx[0], idx[1], idx[2]);
      if (t != 2) k.pk = pk_value(*cb, idx[0], idx[1]);
      return k;
    };
  }
  p.z_view = [cb](std::span<const Symbol> z, std::span<const Payload> f) -> std::uint64_t {
    const auto idx = ml_decode(*cb, 2, z, f);
    return pk_value(*cb, idx[0], idx[1]);
  };

  ProtocolDescriptor d;
  d.type = ProtocolDescriptor::Type::kBinning;
  d.binning = params;
  p.descriptor = std::move(d);
  return Protocol(std::move(p));
}

// ---------------------------------------------------------------------------

ProtocolOutcome run(const Protocol& protocol, const SampleBlock& block) {
  if (block.n() != protocol.n() || block.ys.size() != block.n() || block.zs.size() != block.n()) {
    throw Error(ErrorCode::kLengthMismatch, "block length " + std::to_string(block.n()) +
                                                " does not match protocol blocklength " +
                                                std::to_string(protocol.n()));
  }
  ProtocolOutcome out;
  out.transcript.rounds = protocol.rounds();
  std::vector<Payload> payloads;
  payloads.reserve(protocol.slots().size());
  for (std::size_t t = 1; t <= protocol.slots().size(); ++t) {
    const SlotMap& slot = protocol.slots()[t - 1];
    const int sender = sender_for_slot(t);
    const Payload value = slot.fn(component(block, sender), payloads);
    if (value >= slot.alphabet) {
      throw Error(ErrorCode::kInternalConsistency,
                  "slot " + std::to_string(t) + " produced a payload outside its alphabet");
    }
    payloads.push_back(value);
    out.transcript.messages.push_back({t, sender, value, slot.alphabet});
  }
  for (int t = 0; t < 3; ++t) {
    const KeyPair k = protocol.key_map(static_cast<Terminal>(t + 1))(component(block, t + 1), payloads);
    out.sk_estimates[t] = k.sk;
    if (t < 2) out.pk_estimates[t] = k.pk;
  }
  out.sk_reference = out.sk_estimates[0];
  out.pk_reference = out.pk_estimates[0];
  return out;
}

Protocol with_slot_map(const Protocol& protocol, std::size_t slot, SlotMap map) {
  if (slot == 0 || slot > protocol.slots().size()) {
    throw Error(ErrorCode::kParamOutOfRange, "slot index out of range");
  }
  Protocol::Parts parts = protocol.parts();
  parts.slots[slot - 1] = std::move(map);
  return Protocol(std::move(parts));
}

}  // namespace skpk
