// Copyright 2026 The mtlbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mtlbench/data/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "mtlbench/core/errors.hpp"

namespace mtlbench {
namespace {

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && (text[begin] == ' ' || text[begin] == '\t')) ++begin;
  while (end > begin && (text[end - 1] == ' ' || text[end - 1] == '\t' || text[end - 1] == '\r')) --end;
  return std::string(text.substr(begin, end - begin));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(std::string_view(line).substr(start)));
      break;
    }
    fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

bool parse_double(const std::string& text, double& value) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last && std::isfinite(value);
}

}  // namespace

CsvSchema CsvSchema::alloy() {
  CsvSchema schema;
  schema.features = default_feature_names();
  schema.nonnegative.assign(schema.features.begin(), schema.features.begin() + 15);
  schema.targets = {{"resistivity", TaskKind::kRegression},
                    {"hardness", TaskKind::kRegression},
                    {"amorphous", TaskKind::kClassification}};
  return schema;
}

CsvSchema CsvSchema::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema file " + path.string());
  CsvSchema schema;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::istringstream words(stripped);
    std::string kind, name, extra;
    words >> kind >> name >> extra;
    if (kind == "feature" && !name.empty()) {
      schema.features.push_back(name);
      if (extra == "nonnegative") {
        schema.nonnegative.push_back(name);
      } else if (!extra.empty()) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": unknown feature flag '" + extra + "'");
      }
    } else if (kind == "target" && !name.empty() && !extra.empty()) {
      schema.targets.push_back({name, task_kind_from_string(extra)});
    } else {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected 'feature <name>' or " +
                      "'target <name> <kind>'");
    }
  }
  if (schema.features.empty() || schema.targets.empty()) {
    throw DataError("schema " + path.string() + " needs at least one feature and one target");
  }
  return schema;
}

void CsvSchema::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write schema file " + path.string());
  for (const auto& f : features) {
    const bool nonneg = std::find(nonnegative.begin(), nonnegative.end(), f) != nonnegative.end();
    out << "feature " << f << (nonneg ? " nonnegative" : "") << '\n';
  }
  for (const auto& t : targets) out << "target " << t.name << ' ' << to_string(t.kind) << '\n';
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string header_line;
  if (!std::getline(in, header_line)) throw DataError(path.string() + ": empty file");
  if (header_line.rfind("\xEF\xBB\xBF", 0) == 0) header_line.erase(0, 3);
  const auto header = split_fields(header_line);

  std::map<std::string, std::size_t> column_of;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const bool is_feature = std::find(schema.features.begin(), schema.features.end(), header[c]) != schema.features.end();
    const bool is_target = std::any_of(schema.targets.begin(), schema.targets.end(),
                                       [&](const TargetColumn& t) { return t.name == header[c]; });
    if (!is_feature && !is_target) throw DataError(path.string() + ": unknown column '" + header[c] + "'");
    if (!column_of.emplace(header[c], c).second) {
      throw DataError(path.string() + ": duplicate column '" + header[c] + "'");
    }
  }
  std::vector<std::size_t> feature_cols;
  std::vector<bool> nonnegative;
  for (const auto& f : schema.features) {
    const auto it = column_of.find(f);
    if (it == column_of.end()) throw DataError(path.string() + ": missing feature column '" + f + "'");
    feature_cols.push_back(it->second);
    nonnegative.push_back(std::find(schema.nonnegative.begin(), schema.nonnegative.end(), f) !=
                          schema.nonnegative.end());
  }
  std::vector<std::string> task_names;
  std::vector<TaskKind> task_kinds;
  std::vector<std::size_t> target_cols;
  for (const auto& t : schema.targets) {
    const auto it = column_of.find(t.name);
    if (it == column_of.end()) continue;
    task_names.push_back(t.name);
    task_kinds.push_back(t.kind);
    target_cols.push_back(it->second);
  }
  if (target_cols.empty()) throw DataError(path.string() + ": no target columns in header");

  DatasetBuilder builder(schema.features, task_names, task_kinds);
  std::vector<std::string> problems;
  std::vector<double> features(feature_cols.size());
  std::vector<std::optional<double>> targets(target_cols.size());
  std::string line;
  Index row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_fields(line);
    const std::string where = "row " + std::to_string(row);
    if (fields.size() != header.size()) {
      problems.push_back(where + ": expected " + std::to_string(header.size()) + " fields, found " +
                         std::to_string(fields.size()));
      continue;
    }
    std::string problem;
    for (std::size_t f = 0; f < feature_cols.size() && problem.empty(); ++f) {
      const std::string& cell = fields[feature_cols[f]];
      if (!parse_double(cell, features[f])) {
        problem = where + ": bad value '" + cell + "' in column " + schema.features[f];
      } else if (nonnegative[f] && features[f] < 0.0) {
        problem = where + ": negative atomic fraction in column " + schema.features[f];
      }
    }
    bool any_label = false;
    for (std::size_t t = 0; t < target_cols.size() && problem.empty(); ++t) {
      const std::string& cell = fields[target_cols[t]];
      if (cell.empty()) {
        targets[t].reset();
        continue;
      }
      double value = 0.0;
      if (!parse_double(cell, value)) {
        problem = where + ": bad value '" + cell + "' in column " + task_names[t];
      } else if (task_kinds[t] == TaskKind::kClassification && value != 0.0 && value != 1.0) {
        problem = where + ": label in column " + task_names[t] + " must be 0 or 1";
      } else {
        targets[t] = value;
        any_label = true;
      }
    }
    if (problem.empty() && !any_label) problem = where + ": no target present";
    if (!problem.empty()) {
      problems.push_back(problem);
      continue;
    }
    builder.add(features, targets);
  }
  if (!problems.empty()) {
    std::string message = path.string() + ": " + std::to_string(problems.size()) + " malformed row(s); nothing loaded";
    for (const auto& p : problems) message += "\n  " + p;
    throw DataError(message);
  }
  return builder.build();
}

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw IoError("format_double: conversion failed");
  return std::string(buffer, ptr);
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  bool first = true;
  for (const auto& f : dataset.feature_names()) {
    out << (first ? "" : ",") << f;
    first = false;
  }
  for (const auto& t : dataset.task_names()) out << ',' << t;
  out << '\n';
  for (Index r = 0; r < dataset.size(); ++r) {
    for (Index c = 0; c < dataset.feature_dim(); ++c) {
      out << (c == 0 ? "" : ",") << format_double(dataset.features()(r, c));
    }
    for (std::size_t t = 0; t < dataset.num_tasks(); ++t) {
      out << ',';
      if (dataset.has_label(r, t)) out << format_double(dataset.targets()(r, Index(t)));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace mtlbench
