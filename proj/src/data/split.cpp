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

#include "zshar/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "zshar/error.hpp"
#include "zshar/nn/rng.hpp"

namespace zshar::data {

std::vector<FoldSpec> kfold_split(std::span<const std::string> classes,
                                  const SuperClassMap& superclasses, std::size_t folds,
                                  std::size_t unseen_per_fold, std::uint64_t seed) {
  if (folds == 0) throw ConfigError("kfold_split: folds must be positive");
  std::map<std::string, std::vector<std::string>> groups;
  for (const std::string& cls : classes) {
    const auto it = superclasses.find(cls);
    if (it == superclasses.end()) {
      throw SplitError("kfold_split: class '" + cls + "' has no super-class");
    }
    groups[it->second].push_back(cls);
  }
  if (groups.empty()) throw SplitError("kfold_split: no classes");
  std::size_t capacity = 0;
  for (auto& [super, members] : groups) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.size() < 2) {
      throw SplitError("kfold_split: super-class '" + super + "' has a single class '" +
                       members.front() + "'; it cannot appear on both sides of a fold");
    }
    capacity += members.size() - 1;
  }
  const std::size_t unseen_total = std::max(unseen_per_fold, groups.size());
  if (unseen_total > capacity) {
    throw SplitError("kfold_split: " + std::to_string(unseen_total) +
                     " unseen classes per fold would leave a super-class without seen classes");
  }

  nn::Rng rng(seed);
  std::vector<std::string> group_order;
  std::vector<std::vector<std::string>> permuted;
  for (const auto& [super, members] : groups) {
    group_order.push_back(super);
    std::vector<std::string> perm = members;
    rng.shuffle(perm);
    permuted.push_back(std::move(perm));
  }
  std::vector<std::size_t> extra_order(group_order.size());
  for (std::size_t g = 0; g < extra_order.size(); ++g) extra_order[g] = g;
  rng.shuffle(extra_order);

  std::vector<std::size_t> cursor(group_order.size(), 0);
  std::vector<FoldSpec> out;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> quota(group_order.size(), 1);
    std::size_t remaining = unseen_total - group_order.size();
    for (std::size_t k = 0; remaining > 0; ++k) {
      const std::size_t g = extra_order[(f + k) % extra_order.size()];
      if (quota[g] < permuted[g].size() - 1) {
        ++quota[g];
        --remaining;
      }
    }
    std::set<std::string> unseen;
    for (std::size_t g = 0; g < group_order.size(); ++g) {
      for (std::size_t q = 0; q < quota[g]; ++q) {
        unseen.insert(permuted[g][cursor[g] % permuted[g].size()]);
        ++cursor[g];
      }
    }
    FoldSpec spec;
    spec.index = f;
    for (const auto& [super, members] : groups) {
      for (const std::string& cls : members) {
        (unseen.count(cls) ? spec.unseen : spec.seen).push_back(cls);
      }
    }
    std::sort(spec.seen.begin(), spec.seen.end());
    std::sort(spec.unseen.begin(), spec.unseen.end());
    out.push_back(std::move(spec));
  }
  return out;
}

bool fold_satisfies_invariants(const FoldSpec& fold, std::span<const std::string> classes,
                               const SuperClassMap& superclasses) {
  const std::set<std::string> seen(fold.seen.begin(), fold.seen.end());
  const std::set<std::string> unseen(fold.unseen.begin(), fold.unseen.end());
  if (seen.size() != fold.seen.size() || unseen.size() != fold.unseen.size()) return false;
  for (const std::string& c : seen) {
    if (unseen.count(c)) return false;
  }
  const std::set<std::string> all(classes.begin(), classes.end());
  if (seen.size() + unseen.size() != all.size()) return false;
  std::set<std::string> seen_supers;
  std::set<std::string> unseen_supers;
  std::set<std::string> supers;
  for (const std::string& c : all) {
    const auto it = superclasses.find(c);
    if (it == superclasses.end()) return false;
    supers.insert(it->second);
    if (seen.count(c)) {
      seen_supers.insert(it->second);
    } else if (unseen.count(c)) {
      unseen_supers.insert(it->second);
    } else {
      return false;
    }
  }
  return seen_supers == supers && unseen_supers == supers;
}

TrainValSplit train_val_split(std::span<const std::string> labels,
                              std::span<const std::string> classes, double train_fraction,
                              std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train_val_split: training fraction must lie in (0, 1); a validation set "
                      "is required");
  }
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (const std::string& cls : classes) by_class[cls];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it = by_class.find(labels[i]);
    if (it != by_class.end()) it->second.push_back(i);
  }
  nn::Rng rng(seed);
  TrainValSplit split;
  for (auto& [cls, indices] : by_class) {
    if (indices.empty()) throw DataError("train_val_split: class '" + cls + "' has no samples");
    const double share = static_cast<double>(indices.size()) * (1.0 - train_fraction);
    std::size_t val = static_cast<std::size_t>(std::floor(share + 1e-9));
    if (indices.size() >= 2) val = std::max<std::size_t>(val, 1);
    rng.shuffle(indices);
    split.validation.insert(split.validation.end(), indices.begin(),
                            indices.begin() + static_cast<std::ptrdiff_t>(val));
    split.train.insert(split.train.end(), indices.begin() + static_cast<std::ptrdiff_t>(val),
                       indices.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  return split;
}

}  // namespace zshar::data
