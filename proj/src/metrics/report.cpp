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

#include "zshar/metrics/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "zshar/error.hpp"

namespace zshar::metrics {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string fixed(const std::optional<double>& v, int digits) {
  return v ? fixed(*v, digits) : std::string("n/a");
}

/// Mean of the defined values; nullopt when none is defined.
std::optional<double> mean_of(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render() const {
    std::vector<std::size_t> width(rows_.front().size(), 0);
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream out;
    for (const auto& row : rows_) {
      std::string line;
      for (std::size_t c = 0; c < row.size(); ++c) {
        const std::string pad(width[c] - row[c].size(), ' ');
        // First column left-aligned, numbers right-aligned.
        line += c == 0 ? row[c] + pad : pad + row[c];
        if (c + 1 < row.size()) line += "  ";
      }
      out << line << '\n';
    }
    return out.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string fold_label(const EvalReport& r) {
  return r.fold ? std::to_string(*r.fold) : std::string("-");
}

}  // namespace

bool EvalReport::all_finite() const {
  bool ok = std::isfinite(accuracy.average_per_class) && std::isfinite(alignment.add) &&
            std::isfinite(realism.dfd_mean) && std::isfinite(realism.dfd_std) &&
            std::isfinite(cost_epsilon);
  for (const auto& v : {alignment.tsa, alignment.psa, alignment.oa}) {
    if (v) ok = ok && std::isfinite(*v);
  }
  for (const auto& r : alignment.records) ok = ok && std::isfinite(r.distance);
  for (double v : realism.values) ok = ok && std::isfinite(v);
  return ok;
}

json to_json(const EvalReport& r) {
  if (r.realism.values.size() != r.alignment.records.size()) {
    throw DataError("report: realism and alignment cover different sample counts");
  }
  json per_class = json::object();
  for (const auto& [name, acc] : r.accuracy.per_class) {
    per_class[name] = {{"correct", acc.correct},
                       {"total", acc.total},
                       {"accuracy", static_cast<double>(acc.correct) / static_cast<double>(acc.total)}};
  }
  json records = json::array();
  for (std::size_t i = 0; i < r.alignment.records.size(); ++i) {
    const AlignmentRecord& a = r.alignment.records[i];
    records.push_back({{"sample_id", a.sample_id},
                       {"true_class", a.true_class},
                       {"predicted_class", a.predicted_class},
                       {"correct", a.correct()},
                       {"matching_seen_class", a.matching_class},
                       {"dtw_distance", a.distance},
                       {"dfd", r.realism.values[i]}});
  }
  return {
      {"dataset", r.dataset},
      {"fold", r.fold ? json(*r.fold) : json(nullptr)},
      {"seed", r.seed},
      {"unseen_classes", r.unseen_classes},
      {"cost_model_epsilon", r.cost_epsilon},
      {"accuracy", {{"average_per_class", r.accuracy.average_per_class}, {"per_class", per_class}}},
      {"alignment",
       {{"tsa", optional_number(r.alignment.tsa)},
        {"psa", optional_number(r.alignment.psa)},
        {"oa", optional_number(r.alignment.oa)},
        {"add", r.alignment.add},
        {"tsa_samples", r.alignment.tsa_count},
        {"psa_samples", r.alignment.psa_count},
        {"oa_samples", r.alignment.oa_count}}},
      {"realism", {{"dfd_mean", r.realism.dfd_mean}, {"dfd_std", r.realism.dfd_std}}},
      {"samples", records},
  };
}

std::string render_tables(std::span<const EvalReport> reports) {
  Table accuracy({"Dataset", "Fold", "Accuracy(%)"});
  Table alignment({"Dataset", "Fold", "TSA(%)", "PSA(%)", "OA(%)", "ADD"});
  Table realism({"Dataset", "Fold", "DFD-Mean", "DFD-std"});
  std::vector<std::optional<double>> acc, tsa, psa, oa, add, dfd_mean, dfd_std;
  for (const EvalReport& r : reports) {
    const double pct = 100.0 * r.accuracy.average_per_class;
    accuracy.add({r.dataset, fold_label(r), fixed(pct, 2)});
    alignment.add({r.dataset, fold_label(r), fixed(r.alignment.tsa, 2), fixed(r.alignment.psa, 2),
                   fixed(r.alignment.oa, 2), fixed(r.alignment.add, 3)});
    realism.add({r.dataset, fold_label(r), fixed(r.realism.dfd_mean, 3), fixed(r.realism.dfd_std, 3)});
    acc.push_back(pct);
    tsa.push_back(r.alignment.tsa);
    psa.push_back(r.alignment.psa);
    oa.push_back(r.alignment.oa);
    add.push_back(r.alignment.add);
    dfd_mean.push_back(r.realism.dfd_mean);
    dfd_std.push_back(r.realism.dfd_std);
  }
  if (reports.size() > 1) {
    const std::string name = reports.front().dataset;
    accuracy.add({name, "mean", fixed(mean_of(acc), 2)});
    alignment.add({name, "mean", fixed(mean_of(tsa), 2), fixed(mean_of(psa), 2), fixed(mean_of(oa), 2),
                   fixed(mean_of(add), 3)});
    realism.add({name, "mean", fixed(mean_of(dfd_mean), 3), fixed(mean_of(dfd_std), 3)});
  }
  return "Average accuracy per class on unseen classes\n" + accuracy.render() +
         "\nExplanation alignment with the matching seen class\n" + alignment.render() +
         "\nExplanation realism\n" + realism.render();
}

}  // namespace zshar::metrics
