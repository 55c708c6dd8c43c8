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

#include "zshar/data/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "zshar/data/ops.hpp"
#include "zshar/error.hpp"

namespace zshar::data {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string where(const fs::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

double parse_double(const std::string& text, const fs::path& path, std::size_t line) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw DataError(where(path, line) + ": cannot parse number '" + text + "'");
  }
  return value;
}

std::size_t parse_count(const std::string& text, const fs::path& path, std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw DataError(where(path, line) + ": cannot parse count '" + text + "'");
  }
  return value;
}

std::ifstream open_input(const fs::path& path) {
  if (!fs::exists(path)) throw DataError("missing file: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  return out;
}

json parse_json_file(const fs::path& path) {
  std::ifstream in = open_input(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
}

template <typename T>
T json_field(const json& obj, const char* key, const fs::path& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw DataError(path.string() + ": missing key '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw DataError(path.string() + ": key '" + key + "' has the wrong type");
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out = open_output(path);
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

std::vector<double> json_vector(const json& value, const fs::path& path, const std::string& key) {
  std::vector<double> v;
  for (const json& x : value) {
    if (!x.is_number()) throw DataError(path.string() + ": class '" + key + "' holds a non-number");
    v.push_back(x.get<double>());
  }
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw NumericError("cannot format number");
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// IMU

std::vector<ImuWindow> read_imu_csv(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::vector<ImuWindow> windows;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto header = split_csv(line);
    if (header.size() != 4) {
      throw DataError(where(path, line_no) + ": expected block header id,label,n,d");
    }
    ImuWindow w;
    w.id = header[0];
    if (w.id.empty()) throw DataError(where(path, line_no) + ": empty sample id");
    if (!header[1].empty()) w.label = header[1];
    const std::size_t n = parse_count(header[2], path, line_no);
    const std::size_t d = parse_count(header[3], path, line_no);
    if (n == 0 || d == 0) {
      throw DataError(where(path, line_no) + ": sample '" + w.id + "' declares n=" +
                      std::to_string(n) + ", d=" + std::to_string(d));
    }
    if (!ids.insert(w.id).second) {
      throw DataError(where(path, line_no) + ": duplicate sample id '" + w.id + "'");
    }
    std::vector<double> values;
    values.reserve(n * d);
    for (std::size_t r = 0; r < n; ++r) {
      if (!std::getline(in, line)) {
        throw DataError(path.string() + ": sample '" + w.id + "' truncated after " +
                        std::to_string(r) + " of " + std::to_string(n) + " rows");
      }
      ++line_no;
      const auto fields = split_csv(line);
      if (fields.size() != d) {
        throw DimensionError(where(path, line_no) + ": sample '" + w.id + "' row has " +
                             std::to_string(fields.size()) + " values, expected d=" +
                             std::to_string(d));
      }
      for (const std::string& f : fields) {
        const double v = parse_double(f, path, line_no);
        if (!std::isfinite(v)) {
          throw DataError(where(path, line_no) + ": sample '" + w.id + "' has a non-finite value");
        }
        values.push_back(v);
      }
    }
    w.values = nn::Tensor2(n, d, std::move(values));
    windows.push_back(std::move(w));
  }
  return windows;
}

void write_imu_csv(const fs::path& path, const std::vector<ImuWindow>& windows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const ImuWindow& w = windows[i];
    if (i > 0) out << '\n';
    out << w.id << ',' << w.label.value_or("") << ',' << w.steps() << ',' << w.features() << '\n';
    for (std::size_t r = 0; r < w.steps(); ++r) {
      for (std::size_t c = 0; c < w.features(); ++c) {
        if (c > 0) out << ',';
        out << format_double(w.values(r, c));
      }
      out << '\n';
    }
  }
  write_text(path, out.str());
}

// ---------------------------------------------------------------------------
// Semantic vectors

ClassSemanticSet read_semantics_json(const fs::path& path) {
  const json doc = parse_json_file(path);
  if (!doc.is_object()) throw DataError(path.string() + ": expected a JSON object");
  const auto dim = json_field<std::size_t>(doc, "embedding_dim", path);
  std::map<std::string, std::vector<std::vector<double>>> per_class;
  for (const auto& [key, value] : doc.items()) {
    if (key == "embedding_dim" || key == "metadata") continue;
    if (!value.is_array() || value.empty()) {
      throw DataError(path.string() + ": class '" + key + "' must map to a non-empty array");
    }
    std::vector<std::vector<double>> embeddings;
    if (value.front().is_array()) {
      for (const json& video : value) embeddings.push_back(json_vector(video, path, key));
    } else {
      embeddings.push_back(json_vector(value, path, key));
    }
    for (const auto& e : embeddings) {
      if (e.size() != dim) {
        throw DimensionError(path.string() + ": class '" + key + "' has a vector of length " +
                             std::to_string(e.size()) + ", expected embedding_dim " +
                             std::to_string(dim));
      }
    }
    per_class[key] = std::move(embeddings);
  }
  if (per_class.empty()) throw DataError(path.string() + ": no class vectors");
  ClassSemanticSet set = build_semantic_set(per_class);
  try {
    set.validate();
  } catch (const Error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return set;
}

void write_semantics_json(const fs::path& path, const ClassSemanticSet& set,
                          const std::map<std::string, std::vector<std::vector<double>>>* per_video) {
  json doc = json::object();
  doc["embedding_dim"] = set.embedding_dim;
  for (const auto& [name, v] : set.vectors) {
    if (per_video != nullptr && per_video->count(name) != 0) {
      doc[name] = per_video->at(name);
    } else {
      doc[name] = v;
    }
  }
  write_text(path, doc.dump(1) + "\n");
}

// ---------------------------------------------------------------------------
// Skeletons

SkeletonSequence read_skeleton_csv(const fs::path& path, std::size_t joints, std::size_t dims,
                                   const std::string& class_name) {
  std::ifstream in = open_input(path);
  const std::size_t width = joints * dims;
  SkeletonSequence seq;
  seq.joints = joints;
  seq.dims = dims;
  seq.class_name = class_name;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != width) {
      throw DimensionError(where(path, line_no) + ": " + std::to_string(fields.size()) +
                           " columns, expected J*K=" + std::to_string(width));
    }
    for (const std::string& f : fields) seq.coords.push_back(parse_double(f, path, line_no));
    ++seq.frames;
  }
  try {
    seq.validate();
  } catch (const Error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return seq;
}

void write_skeleton_csv(const fs::path& path, const SkeletonSequence& seq) {
  std::ostringstream out;
  for (std::size_t t = 0; t < seq.frames; ++t) {
    const auto frame = seq.frame(t);
    for (std::size_t i = 0; i < frame.size(); ++i) {
      if (i > 0) out << ',';
      out << format_double(frame[i]);
    }
    out << '\n';
  }
  write_text(path, out.str());
}

std::string skeleton_file_name(const std::string& class_name, std::size_t index) {
  return class_name + "__" + std::to_string(index) + ".csv";
}

std::vector<SkeletonSequence> read_skeleton_dir(const fs::path& dir, std::size_t joints,
                                                std::size_t dims) {
  if (!fs::is_directory(dir)) throw DataError("missing skeleton directory: " + dir.string());
  struct Entry {
    std::string class_name;
    std::size_t index;
    fs::path path;
  };
  std::vector<Entry> entries;
  for (const auto& item : fs::directory_iterator(dir)) {
    if (!item.is_regular_file() || item.path().extension() != ".csv") continue;
    const std::string stem = item.path().stem().string();
    const auto sep = stem.rfind("__");
    if (sep == std::string::npos || sep == 0) {
      throw DataError(item.path().string() + ": skeleton file name must be <class>__<idx>.csv");
    }
    entries.push_back({stem.substr(0, sep), parse_count(stem.substr(sep + 2), item.path(), 0),
                       item.path()});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.class_name != b.class_name ? a.class_name < b.class_name : a.index < b.index;
  });
  std::vector<SkeletonSequence> out;
  for (const Entry& e : entries) out.push_back(read_skeleton_csv(e.path, joints, dims, e.class_name));
  return out;
}

// ---------------------------------------------------------------------------
// Super-classes, manifest, folds

SuperClassMap read_superclass_json(const fs::path& path) {
  const json doc = parse_json_file(path);
  if (!doc.is_object() || doc.empty()) {
    throw DataError(path.string() + ": expected a non-empty object class -> super-class");
  }
  SuperClassMap map;
  for (const auto& [cls, super] : doc.items()) {
    if (!super.is_string()) throw DataError(path.string() + ": class '" + cls + "' must map to a string");
    map[cls] = super.get<std::string>();
  }
  return map;
}

void write_superclass_json(const fs::path& path, const SuperClassMap& map) {
  write_text(path, json(map).dump(2) + "\n");
}

DatasetManifest read_manifest_json(const fs::path& path) {
  const json doc = parse_json_file(path);
  const fs::path base = path.parent_path();
  const auto resolve = [&](const char* key) {
    const fs::path p = json_field<std::string>(doc, key, path);
    return p.is_absolute() ? p : base / p;
  };
  DatasetManifest m;
  m.name = json_field<std::string>(doc, "name", path);
  m.imu_path = resolve("imu_path");
  m.semantics_path = resolve("semantics_path");
  m.skeleton_dir = resolve("skeleton_dir");
  m.superclass_path = resolve("superclass_path");
  m.steps = json_field<std::size_t>(doc, "n", path);
  m.features = json_field<std::size_t>(doc, "d", path);
  m.folds = json_field<std::size_t>(doc, "folds", path);
  if (doc.contains("joints")) m.joints = json_field<std::size_t>(doc, "joints", path);
  if (doc.contains("dims")) m.dims = json_field<std::size_t>(doc, "dims", path);
  if (doc.contains("frames")) m.frames = json_field<std::size_t>(doc, "frames", path);
  if (doc.contains("keypoints")) {
    m.keypoints = json_field<std::vector<std::size_t>>(doc, "keypoints", path);
  }
  if (m.steps == 0 || m.features == 0 || m.joints == 0 || m.dims == 0 || m.frames < 2) {
    throw DataError(path.string() + ": n, d, joints and dims must be positive and frames >= 2");
  }
  if (m.keypoints.size() != m.joints) {
    throw DataError(path.string() + ": keypoints lists " + std::to_string(m.keypoints.size()) +
                    " indices for " + std::to_string(m.joints) + " joints");
  }
  return m;
}

void write_manifest_json(const fs::path& path, const DatasetManifest& m) {
  const fs::path base = path.parent_path();
  const auto rel = [&](const fs::path& p) { return p.lexically_relative(base).generic_string(); };
  json doc = json::object();
  doc["name"] = m.name;
  doc["imu_path"] = rel(m.imu_path);
  doc["semantics_path"] = rel(m.semantics_path);
  doc["skeleton_dir"] = rel(m.skeleton_dir);
  doc["superclass_path"] = rel(m.superclass_path);
  doc["n"] = m.steps;
  doc["d"] = m.features;
  doc["folds"] = m.folds;
  doc["joints"] = m.joints;
  doc["dims"] = m.dims;
  doc["frames"] = m.frames;
  doc["keypoints"] = m.keypoints;
  write_text(path, doc.dump(2) + "\n");
}

Dataset load_manifest(const fs::path& path) {
  Dataset ds;
  ds.manifest = read_manifest_json(path);
  const DatasetManifest& m = ds.manifest;
  ds.superclasses = read_superclass_json(m.superclass_path);
  try {
    group_by_superclass(ds.superclasses);
  } catch (const DataError& e) {
    throw DataError(m.superclass_path.string() + ": " + e.what());
  }
  ds.windows = read_imu_csv(m.imu_path);
  ds.semantics = read_semantics_json(m.semantics_path);
  ds.skeletons = read_skeleton_dir(m.skeleton_dir, m.joints, m.dims);

  for (const ImuWindow& w : ds.windows) {
    if (w.steps() != m.steps || w.features() != m.features) {
      throw DimensionError(m.imu_path.string() + ": sample '" + w.id + "' is " +
                           std::to_string(w.steps()) + "x" + std::to_string(w.features()) +
                           " but the manifest declares n=" + std::to_string(m.steps) +
                           ", d=" + std::to_string(m.features));
    }
    if (w.label && ds.superclasses.count(*w.label) == 0) {
      throw DataError(m.imu_path.string() + ": label '" + *w.label + "' of sample '" + w.id +
                      "' is not in the super-class map " + m.superclass_path.string());
    }
  }

  const auto check_class_set = [&](const std::set<std::string>& names, const fs::path& file) {
    for (const std::string& name : names) {
      if (ds.superclasses.count(name) == 0) {
        throw DataError(file.string() + ": class '" + name + "' is not in the super-class map " +
                        m.superclass_path.string());
      }
    }
    for (const auto& [cls, _] : ds.superclasses) {
      if (names.count(cls) == 0) {
        throw DataError(file.string() + ": no entry for class '" + cls + "'");
      }
    }
  };
  std::set<std::string> semantic_names;
  for (const auto& [name, _] : ds.semantics.vectors) semantic_names.insert(name);
  check_class_set(semantic_names, m.semantics_path);
  std::set<std::string> skeleton_names;
  for (const SkeletonSequence& s : ds.skeletons) skeleton_names.insert(s.class_name);
  check_class_set(skeleton_names, m.skeleton_dir);
  return ds;
}

FoldsFile read_folds_json(const fs::path& path) {
  const json doc = parse_json_file(path);
  FoldsFile f;
  f.seed = json_field<std::uint64_t>(doc, "seed", path);
  f.unseen_per_fold = json_field<std::size_t>(doc, "unseen_per_fold", path);
  for (const json& entry : json_field<json>(doc, "folds", path)) {
    FoldSpec spec;
    spec.index = json_field<std::size_t>(entry, "index", path);
    spec.seen = json_field<std::vector<std::string>>(entry, "seen", path);
    spec.unseen = json_field<std::vector<std::string>>(entry, "unseen", path);
    f.folds.push_back(std::move(spec));
  }
  return f;
}

void write_folds_json(const fs::path& path, const FoldsFile& f) {
  json doc = json::object();
  doc["seed"] = f.seed;
  doc["unseen_per_fold"] = f.unseen_per_fold;
  doc["folds"] = json::array();
  for (const FoldSpec& spec : f.folds) {
    doc["folds"].push_back({{"index", spec.index}, {"seen", spec.seen}, {"unseen", spec.unseen}});
  }
  write_text(path, doc.dump(2) + "\n");
}

}  // namespace zshar::data
