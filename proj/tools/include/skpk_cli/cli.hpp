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

// Front end for the skpk tool. Commands return an exit status:
// 0 success, 1 input or validation error, 2 reproduction/compliance failure.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "skpk/capacity_region.hpp"
#include "skpk/source_model.hpp"

namespace skpk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitFailure = 2;

enum class Format { kCsv, kJson };

/// One output file: written under --out, or echoed to stdout.
struct Artifact {
  std::string name;
  std::string content;
};

std::vector<Artifact> render_region(const JointPmf3& pmf, Format format, double tol = 1e-9);

struct ExampleOptions {
  bool run_example1 = true;
  bool run_example2 = true;
  double p = 0.25;
  double q = 0.1;
  bool inject_fault = false;  // corrupts slot 3 of the perfect SK scheme
};

struct ExampleCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<ExampleCheck> run_example_checks(const ExampleOptions& options);
std::string render_checks_table(const std::vector<ExampleCheck>& checks);
Artifact render_checks(const std::vector<ExampleCheck>& checks, Format format);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skpk::cli
