// Copyright 2026 The projconj Authors.
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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "projconj/linalg.hpp"
#include "projconj/spectral.hpp"

namespace projconj::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitNotConjugate = 1,
  kExitInputError = 2,
  kExitDimensionMismatch = 3,
  kExitVerificationFailed = 4,
  kExitInternal = 5,
};

inline constexpr std::uint64_t kDefaultSeed = 20260101;

/// A matrix given densely or as an exact block structure.
struct MatrixInput {
  Mat matrix;
  std::optional<std::vector<BlockSpec>> blocks;
  nlohmann::json source;  // the parsed document, for digests
};

/// Parses {"dense": {...}} or {"blocks": [...]}; errors name the field.
MatrixInput parse_matrix_input(const nlohmann::json& doc);
/// Reads a file path, "-" for stdin, or an inline JSON document.
MatrixInput load_matrix_input(const std::string& arg);

/// One point per line, numbers separated by commas or blanks; '#' comments.
std::vector<Vec> load_points(const std::string& path);
Vec parse_point(const std::string& text);

std::string fnv1a_hex(const std::string& bytes);

struct CommandResult {
  nlohmann::json result;
  int exit_code = kExitOk;
};

CommandResult cmd_analyze(const MatrixInput& in, double eps);
CommandResult cmd_decide(const MatrixInput& a, const MatrixInput& b, double eps);

struct ConjugateOptions {
  double eps = kDefaultEps;
  double tol = 1e-6;
  int verify = 0;
  std::vector<double> times{-3.0, -1.0, 1.0, 3.0};
  std::uint64_t seed = kDefaultSeed;
  std::vector<Vec> points;
};

CommandResult cmd_conjugate(const MatrixInput& a, const MatrixInput& b,
                            const ConjugateOptions& opts,
                            std::vector<std::pair<Vec, Vec>>* images = nullptr);

struct SimulateOptions {
  Vec point;
  double t_max = 10.0;
  int steps = 100;
  bool canonical = false;
};

/// Trajectory CSV with header t,x0,x1,...
std::string cmd_simulate(const MatrixInput& in, const SimulateOptions& opts);

/// Full command line entry point; reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace projconj::cli
