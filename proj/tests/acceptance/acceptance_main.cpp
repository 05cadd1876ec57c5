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

// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "skpk/capacity_region.hpp"
#include "skpk/info_measures.hpp"
#include "skpk/protocol_engine.hpp"
#include "skpk/secrecy_audit.hpp"
#include "skpk_cli/cli.hpp"

namespace {

using namespace skpk;
namespace fs = std::filesystem;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_ms;
  std::function<Outcome()> body;
};

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const HalfPlane* find_label(const RegionSpec& r, std::string_view label) {
  for (const HalfPlane& h : r.halfplanes()) {
    if (h.label == label) return &h;
  }
  return nullptr;
}

Outcome ac1() {
  Outcome o;
  const JointPmf3 pmf = xor_source();
  const double sk = sk_capacity(pmf);
  const double pk = pk_capacity(pmf);
  o.require(near(sk, 0.5, 1e-12), "sk_capacity " + num(sk));
  o.require(near(pk, 1.0, 1e-12), "pk_capacity " + num(pk));
  return o;
}

Outcome ac2() {
  Outcome o;
  const JointPmf3 pmf = xor_source();
  const std::vector<RatePair> want{{0, 0}, {0.5, 0}, {0, 1}};
  for (const RegionSpec& r : {inner_bound(pmf), outer_bound(pmf)}) {
    const auto& vs = vertices(r);
    o.require(vs.size() == want.size(), std::string(to_string(r.kind())) + " vertex count");
    if (vs.size() != want.size()) continue;
    for (std::size_t i = 0; i < want.size(); ++i) {
      o.require(near(vs[i].rs, want[i].rs, 1e-12) && near(vs[i].rp, want[i].rp, 1e-12),
                std::string(to_string(r.kind())) + " vertex " + std::to_string(i));
      // Every vertex lies on or under 2 rs + rp <= 1.
      o.require(2 * vs[i].rs + vs[i].rp <= 1 + 1e-12, "vertex above 2rs+rp=1");
    }
  }
  return o;
}

Outcome ac3() {
  Outcome o;
  const JointPmf3 pmf = xor_source();
  const SecrecyReport sk = exact_audit(example1_sk_protocol(), pmf);
  const SecrecyReport pk = exact_audit(example1_pk_protocol(), pmf);
  for (const SecrecyReport* r : {&sk, &pk}) {
    o.require(r->sk_error == 0 && r->pk_error == 0, "nonzero error");
    o.require(r->sk_leak_rate == 0 && r->pk_leak_rate == 0, "nonzero leak");
    o.require(r->sk_unif_deficit == 0 && r->pk_unif_deficit == 0, "nonzero deficit");
  }
  o.require(sk.achieved_sk_rate == 0.5 && sk.achieved_pk_rate == 0, "sk scheme rates");
  o.require(pk.achieved_sk_rate == 0 && pk.achieved_pk_rate == 1, "pk scheme rates");
  return o;
}

Outcome ac4() {
  Outcome o;
  const double ps[5] = {0.12, 0.2, 0.28, 0.36, 0.44};
  const double qs[5] = {0.01, 0.03, 0.05, 0.07, 0.1};
  int cells = 0;
  for (double p : ps) {
    for (double q : qs) {
      if (!(0 < q && q < p && p < 0.5)) continue;
      ++cells;
      const JointPmf3 pmf = cascade_bsc_source(p, q);
      const double hp = oracle::binary_entropy_bits(p);
      const double hq = oracle::binary_entropy_bits(q);
      const double rbar = oracle::binary_entropy_bits(p + q - 2 * p * q) - hp;
      const AbcTriple t = compute_abc(pmf);
      const std::string at = " at p=" + num(p) + " q=" + num(q);
      o.require(near(t.a, 1 - hq, 1e-9) && near(t.b, 1 - hp, 1e-9) &&
                    near(t.c, 1 - (hp + hq) / 2, 1e-9),
                "abc" + at);
      o.require(sk_capacity(pmf) >= t.b - 1e-9, "min{A,B,C} != B" + at);
      const auto ex = exact_region(pmf);
      o.require(ex.has_value(), "exact region absent" + at);
      if (ex) {
        const HalfPlane* cap = find_label(*ex, kLabelPkCap);
        const HalfPlane* sum = find_label(*ex, kLabelSum);
        o.require(ex->halfplanes().size() == 2 && cap && sum, "exact half-planes" + at);
        if (cap && sum) {
          o.require(cap->coef_a == 0 && cap->coef_b == 1 && near(cap->bound, rbar, 1e-9),
                    "pk bound" + at);
          o.require(sum->coef_a == 1 && sum->coef_b == 1 && near(sum->bound, 1 - hp, 1e-9),
                    "sum bound" + at);
        }
      }
      const double markov = conditional_mutual_information(pmf, {Var::Y}, {Var::Z}, {Var::X});
      o.require(markov <= 1e-12, "I(Y;Z|X)=" + num(markov) + at);
    }
  }
  o.require(cells == 25, "grid has " + std::to_string(cells) + " cells");
  return o;
}

Outcome ac5() {
  Outcome o;
  int checked = 0;
  for (std::uint64_t s = 0; s < 240; ++s) {
    const Card c{1 + s % 3, 1 + (s / 3) % 3, 1 + (s / 9) % 3};
    const JointPmf3 pmf = random_pmf(c, 0x5eed0000 + s);
    const RegionSpec in = inner_bound(pmf);
    const RegionSpec out = outer_bound(pmf);
    for (const RatePair& v : vertices(in)) {
      for (const HalfPlane& h : out.halfplanes()) {
        o.require(h.satisfied_by(v, 1e-9), "inner vertex outside " + h.label + " seed " +
                                               std::to_string(s));
      }
    }
    o.require(pk_capacity(pmf) <= compute_abc(pmf).b + 1e-12, "pk_capacity > B seed " +
                                                                  std::to_string(s));
    ++checked;
  }
  o.detail = o.ok ? std::to_string(checked) + " sources" : o.detail;
  return o;
}

Outcome ac6() {
  Outcome o;
  const Protocol ts = time_share(example1_sk_protocol(), example1_pk_protocol(), 1, 2);
  const SecrecyReport r = exact_audit(ts, xor_source());
  const RatePair rp = achieved_rate_pair(r);
  o.require(rp.rs == 0.25 && rp.rp == 0.5, "rate pair (" + num(rp.rs) + ", " + num(rp.rp) + ")");
  o.require(r.sk_error == 0 && r.pk_error == 0, "nonzero error");
  o.require(r.sk_leak_rate == 0 && r.pk_leak_rate == 0, "nonzero leak");
  o.require(r.cross_key_rate == 0, "cross key rate " + num(r.cross_key_rate));
  o.require(2 * rp.rs + rp.rp == 1, "off the 2rs+rp=1 boundary");
  return o;
}

Outcome ac7() {
  Outcome o;
  const JointPmf3 pmf = cascade_bsc_source(0.25, 0.1);
  const std::uint64_t seed = 7;
  const std::size_t trials = 10000;
  const Protocol p4 = binning_protocol(pmf, {4, 0.35, 0.1, 0.0, seed});
  const Protocol p8 = binning_protocol(pmf, {8, 0.35, 0.1, 0.0, seed});
  const SecrecyReport r4 = mc_audit(p4, pmf, trials, seed);
  const SecrecyReport r8 = mc_audit(p8, pmf, trials, seed);
  o.require(r8.sk_error < r4.sk_error,
            "error n=8 " + num(r8.sk_error) + " not below n=4 " + num(r4.sk_error));
  const RatePair rp = achieved_rate_pair(r8);
  o.require(contains(outer_bound(pmf), rp, 1e-9),
            "n=8 pair (" + num(rp.rs) + ", " + num(rp.rp) + ") outside outer bound");
  if (o.ok) {
    o.detail = "error n=4 " + num(r4.sk_error) + ", n=8 " + num(r8.sk_error) + "; pair (" +
               num(rp.rs) + ", " + num(rp.rp) + ")";
  }
  return o;
}

Outcome ac8() {
  Outcome o;
  const Protocol p = example1_pk_protocol();
  const SecrecyReport ex = exact_audit(p, xor_source());
  const SecrecyReport mc = mc_audit(p, xor_source(), 100000, 2024);
  const std::pair<const char*, std::pair<double, double>> probs[] = {
      {"sk_error", {ex.sk_error, mc.sk_error}}, {"pk_error", {ex.pk_error, mc.pk_error}}};
  for (const auto& [name, v] : probs) {
    o.require(near(v.first, v.second, 0.01), std::string(name) + " gap " + num(v.first - v.second));
  }
  const std::pair<const char*, std::pair<double, double>> rates[] = {
      {"sk_leak_rate", {ex.sk_leak_rate, mc.sk_leak_rate}},
      {"pk_leak_rate", {ex.pk_leak_rate, mc.pk_leak_rate}},
      {"sk_unif_deficit", {ex.sk_unif_deficit, mc.sk_unif_deficit}},
      {"pk_unif_deficit", {ex.pk_unif_deficit, mc.pk_unif_deficit}},
      {"cross_key_rate", {ex.cross_key_rate, mc.cross_key_rate}},
      {"achieved_sk_rate", {ex.achieved_sk_rate, mc.achieved_sk_rate}},
      {"achieved_pk_rate", {ex.achieved_pk_rate, mc.achieved_pk_rate}}};
  for (const auto& [name, v] : rates) {
    o.require(near(v.first, v.second, 0.02), std::string(name) + " gap " + num(v.first - v.second));
  }
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome ac9() {
  Outcome o;
  const std::vector<std::vector<std::string>> commands{
      {"region", "--source", "cascade_bsc:0.25,0.1"},
      {"region", "--source", "xor", "--format", "json"},
      {"examples"},
      {"simulate", "--source", "cascade_bsc:0.25,0.1", "--n", "8", "--trials", "10000", "--seed",
       "7", "--slack", "0.35", "--sk-rate", "0.1"},
      {"simulate", "--source", "xor", "--n", "6", "--seed", "1", "--slack", "0.5", "--sk-rate",
       "0.25", "--format", "json"},
      {"audit", "--protocol", "example1_sk", "--source", "xor", "--eps", "1e-9"},
      {"audit", "--protocol", "example1_pk", "--source", "xor", "--trials", "1000", "--seed", "5"},
  };
  const fs::path root = fs::temp_directory_path() / "skpk_acceptance_determinism";
  std::size_t files = 0;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::string outputs[2];
    int codes[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / (std::to_string(c) + "_" + std::to_string(rep));
      fs::remove_all(dir);
      std::vector<std::string> args = commands[c];
      args.push_back("--out");
      args.push_back(dir.string());
      std::ostringstream out, err;
      codes[rep] = cli::run(args, out, err);
      outputs[rep] = out.str();
    }
    o.require(codes[0] == codes[1] && outputs[0] == outputs[1],
              "stdout or exit differs for " + commands[c][0]);
    const fs::path a = root / (std::to_string(c) + "_0");
    const fs::path b = root / (std::to_string(c) + "_1");
    if (!fs::exists(a)) {
      o.require(false, "no output files for " + commands[c][0]);
      continue;
    }
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      const fs::path other = b / entry.path().filename();
      o.require(fs::exists(other) && slurp(entry.path()) == slurp(other),
                entry.path().filename().string() + " differs");
    }
  }
  fs::remove_all(root);
  if (o.ok) o.detail = std::to_string(commands.size()) + " commands, " + std::to_string(files) + " files";
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "xor SK/PK capacities", 1, ac1},
      {2, "xor inner and outer bounds coincide", 1, ac2},
      {3, "perfect xor SK and PK schemes", 10, ac3},
      {4, "cascade closed forms on a 5x5 grid", 1000, ac4},
      {5, "inner bound inside outer bound", 5000, ac5},
      {6, "time-sharing boundary point", 1000, ac6},
      {7, "binning error falls from n=4 to n=8", 120000, ac7},
      {8, "Monte Carlo vs exact audit", 30000, ac8},
      {9, "CLI output is deterministic", 120000, ac9},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = ms < c.limit_ms;
    const bool pass = o.ok && in_time;
    if (!pass) ++failures;
    std::string detail = o.detail;
    if (!in_time) detail += (detail.empty() ? "" : "; ") + std::string("over time limit");
    std::printf("[%s] criterion %d: %s (%.3f ms, limit %.0f ms)%s%s\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), ms, c.limit_ms, detail.empty() ? "" : " - ", detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
