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

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "skpk/capacity_region.hpp"
#include "skpk/format.hpp"
#include "skpk_cli/cli.hpp"

namespace skpk::cli {
namespace {

using Record = nlohmann::ordered_json;

// A table rendered either as CSV (header + rows) or as a JSON array of
// objects with the same column names and values.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Record>> rows;

  std::string csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out += ',';
      out += columns[i];
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        const Record& v = row[i];
        if (v.is_number_float()) {
          out += format_number(v.get<double>());
        } else if (v.is_string()) {
          out += v.get<std::string>();
        } else {
          out += v.dump();
        }
      }
      out += '\n';
    }
    return out;
  }

  Record json() const {
    Record arr = Record::array();
    for (const auto& row : rows) {
      Record obj = Record::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[columns[i]] = row[i];
      arr.push_back(std::move(obj));
    }
    return arr;
  }
};

Record num(double v) { return round_to_printed(v); }

}  // namespace

std::vector<Artifact> render_region(const JointPmf3& pmf, Format format, double tol) {
  std::vector<RegionSpec> regions = {outer_bound(pmf), inner_bound(pmf)};
  if (auto exact = exact_region(pmf, tol)) regions.push_back(std::move(*exact));

  Table halfplanes{{"label", "coefA", "coefB", "bound"}, {}};
  Table polygon{{"label", "rs", "rp"}, {}};
  for (const auto& region : regions) {
    const std::string kind(to_string(region.kind()));
    for (const auto& h : region.halfplanes()) {
      halfplanes.rows.push_back({kind + "." + h.label, num(h.coef_a), num(h.coef_b), num(h.bound)});
    }
    for (const auto& v : region.vertices()) {
      polygon.rows.push_back({kind, num(v.rs), num(v.rp)});
    }
  }

  const NotablePoints np = notable_points(pmf, tol);
  Table points{{"label", "rs", "rp", "clamped"}, {}};
  for (const auto& p : np.points) {
    points.rows.push_back({p.label, num(p.point.rs), num(p.point.rp), p.clamped});
  }

  const AbcTriple abc = compute_abc(pmf);
  Table scalars{{"name", "value"}, {}};
  scalars.rows.push_back({"A", num(abc.a)});
  scalars.rows.push_back({"B", num(abc.b)});
  scalars.rows.push_back({"C", num(abc.c)});
  scalars.rows.push_back({"sk_capacity", num(sk_capacity(pmf))});
  scalars.rows.push_back({"pk_capacity", num(pk_capacity(pmf))});
  scalars.rows.push_back({"case", std::string(to_string(np.tag))});

  if (format == Format::kCsv) {
    return {{"region_halfplanes.csv", halfplanes.csv()},
            {"region_vertices.csv", polygon.csv()},
            {"region_points.csv", points.csv()},
            {"region_scalars.csv", scalars.csv()}};
  }
  Record doc;
  doc["halfplanes"] = halfplanes.json();
  doc["vertices"] = polygon.json();
  doc["points"] = points.json();
  doc["scalars"] = scalars.json();
  return {{"region.json", doc.dump(2) + "\n"}};
}

std::string render_checks_table(const std::vector<ExampleCheck>& checks) {
  std::string out;
  char line[512];
  std::snprintf(line, sizeof line, "%-36s %-6s %s\n", "check", "result", "detail");
  out += line;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-36s %-6s %s\n", c.name.c_str(), c.pass ? "PASS" : "FAIL",
                  c.detail.c_str());
    out += line;
  }
  return out;
}

Artifact render_checks(const std::vector<ExampleCheck>& checks, Format format) {
  Table t{{"check", "pass", "detail"}, {}};
  for (const auto& c : checks) t.rows.push_back({c.name, c.pass, c.detail});
  if (format == Format::kCsv) return {"examples.csv", t.csv()};
  return {"examples.json", t.json().dump(2) + "\n"};
}

}  // namespace skpk::cli
