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

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "skpk/capacity_region.hpp"
#include "skpk/error.hpp"
#include "skpk/format.hpp"
#include "skpk/protocol_engine.hpp"
#include "skpk/secrecy_audit.hpp"
#include "skpk_cli/cli.hpp"

namespace skpk::cli {
namespace {

using Record = nlohmann::ordered_json;

struct CommonOptions {
  std::string format = "csv";
  std::string out_dir;

  Format parsed_format() const { return format == "json" ? Format::kJson : Format::kCsv; }
};

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", common.out_dir, "Directory to write output files into");
}

void emit(const std::vector<Artifact>& artifacts, const CommonOptions& common, std::ostream& out) {
  if (common.out_dir.empty()) {
    for (const auto& a : artifacts) out << "## " << a.name << "\n" << a.content;
    return;
  }
  const std::filesystem::path dir(common.out_dir);
  std::filesystem::create_directories(dir);
  for (const auto& a : artifacts) {
    std::ofstream file(dir / a.name, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::kParseError, "cannot write " + (dir / a.name).string());
    file << a.content;
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ProtocolDescriptor parse_protocol_option(const std::string& text) {
  if (!text.empty() && text.front() == '@') return parse_protocol_descriptor(read_text(text.substr(1)));
  return parse_protocol_descriptor(text);
}

// Flattens a (possibly nested) record into "a.b,value" CSV rows.
void flatten(const Record& rec, const std::string& prefix, std::string& out) {
  for (const auto& [key, value] : rec.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, name, out);
      continue;
    }
    out += name + ",";
    if (value.is_number_float()) {
      out += format_number(value.get<double>());
    } else if (value.is_string()) {
      out += value.get<std::string>();
    } else {
      out += value.dump();
    }
    out += "\n";
  }
}

Artifact render_record(const Record& rec, const std::string& stem, Format format) {
  if (format == Format::kJson) return {stem + ".json", rec.dump(2) + "\n"};
  std::string csv = "field,value\n";
  flatten(rec, "", csv);
  return {stem + ".csv", csv};
}

Record parse_flat_json(const std::string& text) { return Record::parse(text); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secret-key / private-key capacity regions and protocol audits"};
  app.require_subcommand(1);

  // region
  CommonOptions region_common;
  std::string region_source;
  double region_tol = 1e-9;
  auto* region = app.add_subcommand("region", "Export bounds, vertices, notable points and scalars");
  region->add_option("--source", region_source, "xor | point_mass | cascade_bsc:p,q | table@path")
      ->required();
  region->add_option("--tol", region_tol, "Tolerance for the exact-region and case tests");
  add_common(region, region_common);

  // examples
  CommonOptions ex_common;
  std::string ex_only;
  ExampleOptions ex_opts;
  auto* examples = app.add_subcommand("examples", "Reproduce the worked examples and report checks");
  examples->add_option("--only", ex_only, "Restrict to one example")
      ->check(CLI::IsMember({"example1", "example2"}));
  examples->add_option("--p", ex_opts.p, "Crossover X->Y for the cascade example");
  examples->add_option("--q", ex_opts.q, "Crossover X->Z for the cascade example");
  examples->add_flag("--inject-fault", ex_opts.inject_fault,
                     "Corrupt one slot map of the perfect SK scheme (negative test)");
  add_common(examples, ex_common);

  // simulate
  CommonOptions sim_common;
  std::string sim_source;
  BinningParams sim_params;
  std::size_t sim_trials = 10000;
  std::uint64_t sim_budget = AuditLimits{}.max_states;
  std::uint64_t sim_candidates = BinningLimits{}.max_candidates;
  auto* simulate = app.add_subcommand("simulate", "Run the random-binning protocol and audit it");
  simulate->add_option("--source", sim_source, "Source spec")->required();
  simulate->add_option("--n", sim_params.n, "Blocklength")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_params.seed, "Codebook and sampling seed")->required();
  simulate->add_option("--slack", sim_params.slack, "Bin-rate slack in bits per symbol")->required();
  simulate->add_option("--sk-rate", sim_params.sk_rate, "Secret-key rate")->required();
  simulate->add_option("--pk-rate", sim_params.pk_rate, "Private-key rate");
  simulate->add_option("--trials", sim_trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  simulate->add_option("--audit-budget", sim_budget, "Max source blocks for the exact audit");
  simulate->add_option("--search-budget", sim_candidates, "Max ML candidate evaluations");
  add_common(simulate, sim_common);

  // audit
  CommonOptions audit_common;
  std::string audit_source;
  std::string audit_protocol;
  double audit_eps = 1e-9;
  bool audit_enforce = false;
  std::size_t audit_trials = 0;
  std::uint64_t audit_seed = 0;
  auto* audit = app.add_subcommand("audit", "Audit a protocol against the key conditions");
  audit->add_option("--protocol", audit_protocol,
                    "example1_sk | example1_pk | JSON record | @file")
      ->required();
  audit->add_option("--source", audit_source, "Source spec")->required();
  audit->add_option("--eps", audit_eps, "Threshold shared by all conditions")
      ->check(CLI::PositiveNumber);
  audit->add_flag("--enforce", audit_enforce, "Exit 2 unless every condition holds");
  auto* trials_opt = audit->add_option(
      "--trials", audit_trials, "Use a Monte Carlo audit with this many trials");
  audit->add_option("--seed", audit_seed, "Sampling seed for --trials")->needs(trials_opt);
  trials_opt->check(CLI::PositiveNumber);
  add_common(audit, audit_common);

  std::vector<const char*> argv;
  argv.push_back("skpk");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << "Run with --help for usage.\n";
    return kExitInput;
  }

  try {
    if (region->parsed()) {
      const JointPmf3 pmf = parse_inline_source(region_source);
      emit(render_region(pmf, region_common.parsed_format(), region_tol), region_common, out);
      return kExitOk;
    }

    if (examples->parsed()) {
      if (ex_only == "example1") ex_opts.run_example2 = false;
      if (ex_only == "example2") ex_opts.run_example1 = false;
      const auto checks = run_example_checks(ex_opts);
      out << render_checks_table(checks);
      if (!ex_common.out_dir.empty()) emit({render_checks(checks, ex_common.parsed_format())}, ex_common, out);
      const bool all = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
      return all ? kExitOk : kExitFailure;
    }

    if (simulate->parsed()) {
      const JointPmf3 pmf = parse_inline_source(sim_source);
      const Protocol proto = binning_protocol(pmf, sim_params, {sim_candidates});
      const SecrecyReport mc = mc_audit(proto, pmf, sim_trials, sim_params.seed);
      std::optional<SecrecyReport> exact;
      try {
        exact = exact_audit(proto, pmf, {sim_budget});
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kStateSpaceTooLarge) throw;
      }
      const SecrecyReport& primary = exact ? *exact : mc;
      const RatePair achieved = achieved_rate_pair(primary);
      const RegionSpec outer = outer_bound(pmf);
      const double slack_tol = 1e-9 + primary.sk_unif_deficit + primary.pk_unif_deficit;

      Record rec;
      rec["protocol"] = Record::parse(descriptor_to_json(*proto.descriptor()));
      rec["audit_status"] = exact ? "mc+exact" : "mc-only";
      rec["mc"] = parse_flat_json(report_to_json(mc));
      rec["exact"] = exact ? parse_flat_json(report_to_json(*exact)) : Record();
      rec["achieved"] = {{"source", exact ? "exact" : "mc"},
                         {"rs", round_to_printed(achieved.rs)},
                         {"rp", round_to_printed(achieved.rp)}};
      rec["outer_contains"] = contains(outer, achieved, 1e-9);
      rec["outer_contains_with_deficits"] = contains(outer, achieved, slack_tol);
      emit({render_record(rec, "simulate", sim_common.parsed_format())}, sim_common, out);
      return kExitOk;
    }

    if (audit->parsed()) {
      const JointPmf3 pmf = parse_inline_source(audit_source);
      const Protocol proto = build_protocol(parse_protocol_option(audit_protocol), pmf);
      const SecrecyReport report = audit_trials > 0 ? mc_audit(proto, pmf, audit_trials, audit_seed)
                                                    : exact_audit(proto, pmf);
      const ComplianceVerdict verdict = check_definition(report, audit_eps);
      const Format fmt = audit_common.parsed_format();
      const bool json = fmt == Format::kJson;
      emit({{json ? "audit_report.json" : "audit_report.csv",
             json ? report_to_json(report) : report_to_csv(report)},
            {json ? "audit_verdict.json" : "audit_verdict.csv",
             json ? verdict_to_json(verdict) : verdict_to_csv(verdict)}},
           audit_common, out);
      if (audit_enforce && !verdict.all_pass()) {
        err << "verdict: at least one condition fails at eps " << format_number(audit_eps) << "\n";
        return kExitFailure;
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace skpk::cli
