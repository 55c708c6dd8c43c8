// Copyright 2026 The zshar Authors
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

#include <array>
#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "zshar/data/types.hpp"

namespace zshar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;  // numeric failure or bug
inline constexpr int kExitUsage = 2;     // bad flags, config or input files

/// Stick-figure edges over the 12 default joints
/// (r/l shoulder, r/l elbow, r/l wrist, r/l hip, r/l knee, r/l ankle).
inline constexpr std::array<std::pair<std::size_t, std::size_t>, 11> kBones = {{
    {0, 1}, {0, 2}, {2, 4}, {1, 3}, {3, 5}, {0, 6}, {6, 7}, {6, 8}, {8, 10}, {7, 9}, {9, 11},
}};

/// Runs one subcommand (synth, split, train, eval, explain). `args` excludes the program
/// name. Human-readable progress goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One SVG document drawing frame `t` of a 2-D sequence with kBones.
std::string render_svg_frame(const data::SkeletonSequence& sequence, std::size_t t);

}  // namespace zshar::cli
