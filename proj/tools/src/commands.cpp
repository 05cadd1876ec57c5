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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "skpk/capacity_region.hpp"
#include "skpk/format.hpp"
#include "skpk/info_measures.hpp"
#include "skpk/protocol_engine.hpp"
#include "skpk/secrecy_audit.hpp"
#include "skpk_cli/cli.hpp"

namespace skpk::cli {
namespace {

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

bool same_vertices(const std::vector<RatePair>& got, const std::vector<RatePair>& want,
                   double tol) {
  if (got.size() != want.size()) return false;
  return std::all_of(want.begin(), want.end(), [&](const RatePair& w) {
    return std::any_of(got.begin(), got.end(), [&](const RatePair& g) {
      return near(g.rs, w.rs, tol) && near(g.rp, w.rp, tol);
    });
  });
}

std::string pair_text(RatePair p) {
  return "(" + format_number(p.rs) + " " + format_number(p.rp) + ")";
}

std::string perfection_detail(const SecrecyReport& r) {
  return "err " + format_number(std::max(r.sk_error, r.pk_error)) + " leak " +
         format_number(std::max(r.sk_leak_rate, r.pk_leak_rate)) + " deficit " +
         format_number(std::max(r.sk_unif_deficit, r.pk_unif_deficit)) + " rates " +
         pair_text(achieved_rate_pair(r));
}

bool perfect(const SecrecyReport& r) {
  return r.sk_error == 0.0 && r.pk_error == 0.0 && r.sk_leak_rate == 0.0 &&
         r.pk_leak_rate == 0.0 && r.sk_unif_deficit == 0.0 && r.pk_unif_deficit == 0.0;
}

void example1_checks(const ExampleOptions& opt, std::vector<ExampleCheck>& out) {
  const JointPmf3 pmf = xor_source();

  const double sk = sk_capacity(pmf);
  const double pk = pk_capacity(pmf);
  out.push_back({"example1.sk_capacity", near(sk, 0.5, 1e-12), format_number(sk)});
  out.push_back({"example1.pk_capacity", near(pk, 1.0, 1e-12), format_number(pk)});

  const std::vector<RatePair> corner = {{0, 0}, {0.5, 0}, {0, 1}};
  const RegionSpec inner = inner_bound(pmf);
  const RegionSpec outer = outer_bound(pmf);
  out.push_back({"example1.region_coincidence",
                 same_vertices(inner.vertices(), corner, 1e-12) &&
                     same_vertices(outer.vertices(), corner, 1e-12),
                 std::to_string(inner.vertices().size()) + " inner / " +
                     std::to_string(outer.vertices().size()) + " outer vertices"});

  Protocol sk_proto = example1_sk_protocol();
  if (opt.inject_fault) {
    sk_proto = with_slot_map(sk_proto, 3,
                             {2, [](std::span<const Symbol> z, std::span<const Payload>) -> Payload {
                                return z[0] & 1u;
                              }});
  }
  const SecrecyReport sk_report = exact_audit(sk_proto, pmf);
  const RatePair sk_rates = achieved_rate_pair(sk_report);
  out.push_back({"example1.sk_protocol_perfect",
                 perfect(sk_report) && sk_rates.rs == 0.5 && sk_rates.rp == 0.0,
                 perfection_detail(sk_report)});

  const SecrecyReport pk_report = exact_audit(example1_pk_protocol(), pmf);
  const RatePair pk_rates = achieved_rate_pair(pk_report);
  out.push_back({"example1.pk_protocol_perfect",
                 perfect(pk_report) && pk_rates.rs == 0.0 && pk_rates.rp == 1.0,
                 perfection_detail(pk_report)});

  const SecrecyReport ts = exact_audit(time_share(sk_proto, example1_pk_protocol(), 1, 2), pmf);
  const RatePair ts_rates = achieved_rate_pair(ts);
  out.push_back({"example1.timeshare_boundary",
                 perfect(ts) && ts.cross_key_rate == 0.0 && near(ts_rates.rs, 0.25, 1e-12) &&
                     near(ts_rates.rp, 0.5, 1e-12) &&
                     near(2 * ts_rates.rs + ts_rates.rp, 1.0, 1e-12),
                 perfection_detail(ts) + " cross " + format_number(ts.cross_key_rate)});
}

void example2_checks(const ExampleOptions& opt, std::vector<ExampleCheck>& out) {
  const double p = opt.p;
  const double q = opt.q;
  const std::string at = " at p=" + format_number(p) + " q=" + format_number(q);
  out.push_back({"example2.parameter_ordering", cascade_bsc_in_ordered_regime(p, q),
                 "0 < q < p < 1/2 required" + at});

  const JointPmf3 pmf = cascade_bsc_source(p, q);
  const double hp = binary_entropy(p);
  const double hq = binary_entropy(q);
  const double pk_closed = binary_entropy(p + q - 2 * p * q) - hp;

  const AbcTriple abc = compute_abc(pmf);
  const bool abc_ok = near(abc.a, 1 - hq, 1e-9) && near(abc.b, 1 - hp, 1e-9) &&
                      near(abc.c, 1 - (hp + hq) / 2, 1e-9);
  out.push_back({"example2.abc_closed_form", abc_ok,
                 "A " + format_number(abc.a) + " B " + format_number(abc.b) + " C " +
                     format_number(abc.c) + at});

  const double m = std::min({abc.a, abc.b, abc.c});
  out.push_back({"example2.min_is_B", near(m, abc.b, 1e-9),
                 "min " + format_number(m) + " B " + format_number(abc.b) + at});

  const auto exact = exact_region(pmf);
  bool region_ok = exact.has_value() && exact->halfplanes().size() == 2;
  if (region_ok) {
    for (const auto& h : exact->halfplanes()) {
      if (h.label == kLabelPkCap) {
        region_ok = region_ok && h.coef_a == 0.0 && h.coef_b == 1.0 && near(h.bound, pk_closed, 1e-9);
      } else if (h.label == kLabelSum) {
        region_ok = region_ok && h.coef_a == 1.0 && h.coef_b == 1.0 && near(h.bound, 1 - hp, 1e-9);
      } else {
        region_ok = false;
      }
    }
  }
  out.push_back({"example2.exact_region", region_ok,
                 "rp <= " + format_number(pk_closed) + " and rs + rp <= " + format_number(1 - hp) + at});

  const double markov = conditional_mutual_information(pmf, {Var::Y}, {Var::Z}, {Var::X});
  out.push_back({"example2.markov_chain", markov <= 1e-12, "I(Y;Z|X) " + format_number(markov) + at});
}

}  // namespace

std::vector<ExampleCheck> run_example_checks(const ExampleOptions& options) {
  std::vector<ExampleCheck> checks;
  if (options.run_example1) example1_checks(options, checks);
  if (options.run_example2) example2_checks(options, checks);
  return checks;
}

}  // namespace skpk::cli
