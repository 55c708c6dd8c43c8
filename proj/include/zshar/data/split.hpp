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

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zshar/data/types.hpp"

namespace zshar::data {

/// Builds seen/unseen class folds stratified by super-class.
///
/// Every fold holds max(unseen_per_fold, #super-classes) unseen classes: one from each
/// super-class, the remainder spread round-robin over super-classes that still have more than
/// one seen member. Members of each super-class are visited in a seeded permutation and the
/// cursor carries over between folds, so successive folds rotate through the classes.
///
/// Throws SplitError when a super-class has a single class or when the requested unseen
/// count would leave some super-class without a seen class.
std::vector<FoldSpec> kfold_split(std::span<const std::string> classes,
                                  const SuperClassMap& superclasses, std::size_t folds,
                                  std::size_t unseen_per_fold, std::uint64_t seed);

/// Returns true when the fold is disjoint, covers `classes`, and every super-class has at
/// least one seen and one unseen member.
bool fold_satisfies_invariants(const FoldSpec& fold, std::span<const std::string> classes,
                               const SuperClassMap& superclasses);

struct TrainValSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

/// Stratified split of sample indices. Per class with m samples the validation share is
/// floor(m * (1 - train_fraction)), raised to one when m >= 2; a class with a single sample
/// goes to training. Index lists come back sorted.
TrainValSplit train_val_split(std::span<const std::string> labels,
                              std::span<const std::string> classes, double train_fraction,
                              std::uint64_t seed);

}  // namespace zshar::data
