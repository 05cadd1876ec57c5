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

#include <set>
#include <string>

#include "json.hpp"
#include "skpk/error.hpp"
#include "skpk/protocol_engine.hpp"

namespace skpk {
namespace {

using nlohmann::json;
using Type = ProtocolDescriptor::Type;

json to_json(const ProtocolDescriptor& d) {
  switch (d.type) {
    case Type::kExample1Sk: return {{"type", "example1_sk"}};
    case Type::kExample1Pk: return {{"type", "example1_pk"}};
    case Type::kBinning:
      return {{"type", "binning"},
              {"n", d.binning.n},
              {"slack", d.binning.slack},
              {"skRate", d.binning.sk_rate},
              {"pkRate", d.binning.pk_rate},
              {"seed", d.binning.seed}};
    case Type::kTimeShare:
      return {{"type", "timeshare"},
              {"a", to_json(*d.first)},
              {"b", to_json(*d.second)},
              {"repeatsA", d.repeats_first},
              {"repeatsB", d.repeats_second}};
  }
  return {};
}

void only_fields(const json& doc, const std::set<std::string>& allowed) {
  for (const auto& item : doc.items()) {
    if (!allowed.contains(item.key())) {
      throw Error(ErrorCode::kParseError, "unknown protocol field \"" + item.key() + "\"");
    }
  }
}

const json& field(const json& doc, const char* name) {
  if (!doc.contains(name)) {
    throw Error(ErrorCode::kParseError, std::string("protocol record lacks \"") + name + "\"");
  }
  return doc.at(name);
}

std::uint64_t unsigned_field(const json& doc, const char* name) {
  const json& v = field(doc, name);
  if (!v.is_number_unsigned()) {
    throw Error(ErrorCode::kParseError, std::string("\"") + name + "\" must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

double number_field(const json& doc, const char* name) {
  const json& v = field(doc, name);
  if (!v.is_number()) throw Error(ErrorCode::kParseError, std::string("\"") + name + "\" must be a number");
  return v.get<double>();
}

ProtocolDescriptor from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("type") || !doc.at("type").is_string()) {
    throw Error(ErrorCode::kParseError, "protocol record must be an object with a string \"type\"");
  }
  const auto type = doc.at("type").get<std::string>();
  ProtocolDescriptor d;
  if (type == "example1_sk" || type == "example1_pk") {
    only_fields(doc, {"type"});
    d.type = type == "example1_sk" ? Type::kExample1Sk : Type::kExample1Pk;
  } else if (type == "binning") {
    only_fields(doc, {"type", "n", "slack", "skRate", "pkRate", "seed"});
    d.type = Type::kBinning;
    d.binning.n = unsigned_field(doc, "n");
    d.binning.slack = number_field(doc, "slack");
    d.binning.sk_rate = number_field(doc, "skRate");
    d.binning.pk_rate = number_field(doc, "pkRate");
    d.binning.seed = unsigned_field(doc, "seed");
  } else if (type == "timeshare") {
    only_fields(doc, {"type", "a", "b", "repeatsA", "repeatsB"});
    d.type = Type::kTimeShare;
    d.first = std::make_shared<const ProtocolDescriptor>(from_json(field(doc, "a")));
    d.second = std::make_shared<const ProtocolDescriptor>(from_json(field(doc, "b")));
    d.repeats_first = unsigned_field(doc, "repeatsA");
    d.repeats_second = unsigned_field(doc, "repeatsB");
  } else {
    throw Error(ErrorCode::kParseError, "unknown protocol type \"" + type + "\"");
  }
  return d;
}

}  // namespace

std::string descriptor_to_json(const ProtocolDescriptor& descriptor) {
  return to_json(descriptor).dump();
}

ProtocolDescriptor parse_protocol_descriptor(std::string_view text) {
  if (text == "example1_sk") return ProtocolDescriptor::of(Type::kExample1Sk);
  if (text == "example1_pk") return ProtocolDescriptor::of(Type::kExample1Pk);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return from_json(doc);
}

Protocol build_protocol(const ProtocolDescriptor& d, const JointPmf3& pmf, BinningLimits limits) {
  switch (d.type) {
    case Type::kExample1Sk: return example1_sk_protocol();
    case Type::kExample1Pk: return example1_pk_protocol();
    case Type::kBinning: return binning_protocol(pmf, d.binning, limits);
    case Type::kTimeShare:
      return time_share(build_protocol(*d.first, pmf, limits), build_protocol(*d.second, pmf, limits),
                        d.repeats_first, d.repeats_second);
  }
  throw Error(ErrorCode::kParseError, "unhandled protocol type");
}

}  // namespace skpk
