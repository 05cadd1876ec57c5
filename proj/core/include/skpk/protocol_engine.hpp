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

// Deterministic public-discussion protocols over the slot-indexed broadcast
// model: slot t (1-based) is sent by terminal t mod 3 (X = 1, Y = 2, Z = 3,
// with 3 for t mod 3 == 0) and may depend only on the sender's own
// sequence and the payloads of slots 1..t-1.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skpk/source_model.hpp"

namespace skpk {

using Payload = std::uint64_t;
using KeyValue = std::uint64_t;

enum class Terminal : int { kX = 1, kY = 2, kZ = 3 };

/// Sender index (1, 2 or 3) of a 1-based slot.
int sender_for_slot(std::size_t slot) noexcept;

struct Message {
  std::size_t slot = 0;
  int sender = 0;
  Payload payload = 0;
  std::uint64_t alphabet = 1;
};

struct Transcript {
  std::vector<Message> messages;
  std::size_t rounds = 0;

  std::vector<Payload> payloads() const;
};

using SlotFn =
    std::function<Payload(std::span<const Symbol> own, std::span<const Payload> prior)>;

struct SlotMap {
  std::uint64_t alphabet = 1;  // payloads lie in [0, alphabet)
  SlotFn fn;
};

struct KeyPair {
  KeyValue sk = 0;
  KeyValue pk = 0;
};

/// Key map of one terminal: (own sequence, full transcript) -> keys. The pk
/// output of terminal Z is ignored.
using KeyFn =
    std::function<KeyPair(std::span<const Symbol> own, std::span<const Payload> transcript)>;

/// Statistic of (Z^n, transcript) standing in for raw Z^n when the private
/// key leakage is estimated from samples.
using ZViewFn =
    std::function<std::uint64_t(std::span<const Symbol> z, std::span<const Payload> transcript)>;

struct BinningParams {
  std::size_t n = 1;
  double slack = 0.0;
  double sk_rate = 0.0;
  double pk_rate = 0.0;
  std::uint64_t seed = 0;
};

/// Serializable description of how a protocol was built.
struct ProtocolDescriptor {
  enum class Type { kExample1Sk, kExample1Pk, kBinning, kTimeShare };

  Type type = Type::kExample1Sk;
  BinningParams binning;  // kBinning only
  std::shared_ptr<const ProtocolDescriptor> first;   // kTimeShare only
  std::shared_ptr<const ProtocolDescriptor> second;  // kTimeShare only
  std::size_t repeats_first = 0;
  std::size_t repeats_second = 0;

  static ProtocolDescriptor of(Type type) {
    ProtocolDescriptor d;
    d.type = type;
    return d;
  }
};

class Protocol {
 public:
  struct Parts {
    std::size_t n = 1;
    std::size_t rounds = 0;
    std::vector<SlotMap> slots;  // exactly 3 * rounds entries
    std::array<KeyFn, 3> key_maps;
    std::uint64_t sk_range = 1;
    std::uint64_t pk_range = 1;
    std::uint64_t codebook_seed = 0;
    ZViewFn z_view;  // optional
    std::optional<ProtocolDescriptor> descriptor;
  };

  /// Throws kParamOutOfRange if the parts are inconsistent.
  explicit Protocol(Parts parts);

  std::size_t n() const noexcept { return parts_.n; }
  std::size_t rounds() const noexcept { return parts_.rounds; }
  const std::vector<SlotMap>& slots() const noexcept { return parts_.slots; }
  const KeyFn& key_map(Terminal t) const noexcept {
    return parts_.key_maps[static_cast<int>(t) - 1];
  }
  std::uint64_t sk_range() const noexcept { return parts_.sk_range; }
  std::uint64_t pk_range() const noexcept { return parts_.pk_range; }
  std::uint64_t codebook_seed() const noexcept { return parts_.codebook_seed; }
  const ZViewFn& z_view() const noexcept { return parts_.z_view; }
  const std::optional<ProtocolDescriptor>& descriptor() const noexcept {
    return parts_.descriptor;
  }
  const Parts& parts() const noexcept { return parts_; }

 private:
  Parts parts_;
};

struct ProtocolOutcome {
  Transcript transcript;
  std::array<KeyValue, 3> sk_estimates{};  // X, Y, Z
  std::array<KeyValue, 2> pk_estimates{};  // X, Y
  KeyValue sk_reference = 0;               // terminal X's values
  KeyValue pk_reference = 0;
};

/// n = 2, one round: X sends X1, Y sends Y2, Z sends Z1 xor Z2, and every
/// terminal outputs the secret key X2. Meaningful for xor_source only.
Protocol example1_sk_protocol();

/// n = 1, one round: Z sends Z1; X outputs X1 xor Z1 and Y outputs Y1 as the
/// private key.
Protocol example1_pk_protocol();

/// Block concatenation: `repeats_a` copies of `a` followed by `repeats_b`
/// copies of `b`. Keys are the mixed-radix tuple of constituent keys and
/// ranges multiply.
Protocol time_share(const Protocol& a, const Protocol& b, std::size_t repeats_a,
                    std::size_t repeats_b);

struct BinningLimits {
  std::uint64_t max_candidates = std::uint64_t{1} << 24;
};

/// One-round random-binning omniscience protocol followed by seeded key
/// extraction. See docs in protocol_engine.cpp for the decoder.
Protocol binning_protocol(const JointPmf3& pmf, const BinningParams& params,
                          BinningLimits limits = {});

/// Executes the schedule on one block. Throws kLengthMismatch if the block
/// length differs from the protocol's n.
ProtocolOutcome run(const Protocol& protocol, const SampleBlock& block);

/// Replaces the map of a 1-based slot. Used to inject faults in tests.
Protocol with_slot_map(const Protocol& protocol, std::size_t slot, SlotMap map);

std::string descriptor_to_json(const ProtocolDescriptor& descriptor);
/// Accepts "example1_sk", "example1_pk" or a JSON record.
ProtocolDescriptor parse_protocol_descriptor(std::string_view text);
Protocol build_protocol(const ProtocolDescriptor& descriptor, const JointPmf3& pmf,
                        BinningLimits limits = {});

/// ceil(n * rate) with a 1e-9 guard against representation error.
std::size_t key_bits(std::size_t n, double rate);

}  // namespace skpk
