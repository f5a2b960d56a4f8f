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

#include "mtlbench/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "mtlbench/core/errors.hpp"
#include "mtlbench/data/csv.hpp"

namespace mtlbench {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  if (trim(value).empty()) return out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

template <typename T>
T parse_number(const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError("not a valid number: '" + text + "'");
  return value;
}

double parse_double(const std::string& t) { return parse_number<double>(t); }
Index parse_index(const std::string& t) { return parse_number<Index>(t); }
std::uint64_t parse_u64(const std::string& t) { return parse_number<std::uint64_t>(t); }

bool parse_bool(const std::string& t) {
  if (t == "true") return true;
  if (t == "false") return false;
  throw ConfigError("expected true or false, got '" + t + "'");
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& value, F&& parse) {
  std::vector<T> out;
  for (const auto& item : split_list(value)) out.push_back(parse(item));
  return out;
}

std::string show(double v) { return format_double(v); }
std::string show(bool v) { return v ? "true" : "false"; }

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& render) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + render(items[i]);
  return out;
}

std::string join_names(const std::vector<std::string>& items) {
  return join(items, [](const std::string& s) { return s; });
}

struct Key {
  std::string section;
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    auto add = [&](std::string section, std::string name, auto set, auto get) {
      k.push_back(Key{std::move(section), std::move(name), set, get});
    };
    using C = RunConfig;
    using S = const std::string&;
    // [data]
    add("data", "source",
        [](C& c, S v) {
          if (v == "synthetic") c.data.source = DataSource::kSynthetic;
          else if (v == "csv") c.data.source = DataSource::kCsv;
          else throw ConfigError("data.source must be synthetic or csv");
        },
        [](const C& c) { return std::string(c.data.source == DataSource::kCsv ? "csv" : "synthetic"); });
    add("data", "csv", [](C& c, S v) { c.data.csv = v; }, [](const C& c) { return c.data.csv.string(); });
    add("data", "schema", [](C& c, S v) { c.data.schema = v; }, [](const C& c) { return c.data.schema.string(); });
    add("data", "feature_dim", [](C& c, S v) { c.data.synthetic.feature_dim = parse_index(v); },
        [](const C& c) { return std::to_string(c.data.synthetic.feature_dim); });
    add("data", "tasks", [](C& c, S v) { c.data.synthetic.task_names = split_list(v); },
        [](const C& c) { return join_names(c.data.synthetic.task_names); });
    add("data", "kinds",
        [](C& c, S v) { c.data.synthetic.task_kinds = parse_list<TaskKind>(v, task_kind_from_string); },
        [](const C& c) {
          return join(c.data.synthetic.task_kinds, [](TaskKind t) { return to_string(t); });
        });
    add("data", "counts", [](C& c, S v) { c.data.synthetic.counts = parse_list<Index>(v, parse_index); },
        [](const C& c) { return join(c.data.synthetic.counts, [](Index i) { return std::to_string(i); }); });
    add("data", "relatedness", [](C& c, S v) { c.data.synthetic.relatedness = parse_double(v); },
        [](const C& c) { return show(c.data.synthetic.relatedness); });
    add("data", "teacher_width", [](C& c, S v) { c.data.synthetic.teacher_width = parse_index(v); },
        [](const C& c) { return std::to_string(c.data.synthetic.teacher_width); });
    add("data", "noise_std", [](C& c, S v) { c.data.synthetic.noise_std = parse_double(v); },
        [](const C& c) { return show(c.data.synthetic.noise_std); });
    add("data", "classification_balance",
        [](C& c, S v) { c.data.synthetic.classification_balance = parse_double(v); },
        [](const C& c) { return show(c.data.synthetic.classification_balance); });
    add("data", "synthetic_seed", [](C& c, S v) { c.data.synthetic.seed = parse_u64(v); },
        [](const C& c) { return std::to_string(c.data.synthetic.seed); });
    add("data", "split_train", [](C& c, S v) { c.data.ratios.train = parse_double(v); },
        [](const C& c) { return show(c.data.ratios.train); });
    add("data", "split_validation", [](C& c, S v) { c.data.ratios.validation = parse_double(v); },
        [](const C& c) { return show(c.data.ratios.validation); });
    add("data", "split_test", [](C& c, S v) { c.data.ratios.test = parse_double(v); },
        [](const C& c) { return show(c.data.ratios.test); });
    add("data", "split_seed", [](C& c, S v) { c.data.split_seed = parse_u64(v); },
        [](const C& c) { return std::to_string(c.data.split_seed); });
    // [train]
    add("train", "learning_rate", [](C& c, S v) { c.train.learning_rate = parse_double(v); },
        [](const C& c) { return show(c.train.learning_rate); });
    add("train", "batch_size", [](C& c, S v) { c.train.batch_size = parse_index(v); },
        [](const C& c) { return std::to_string(c.train.batch_size); });
    add("train", "max_epochs", [](C& c, S v) { c.train.max_epochs = parse_index(v); },
        [](const C& c) { return std::to_string(c.train.max_epochs); });
    add("train", "early_stop_patience", [](C& c, S v) { c.train.early_stop_patience = parse_index(v); },
        [](const C& c) { return std::to_string(c.train.early_stop_patience); });
    add("train", "weight_decay", [](C& c, S v) { c.train.weight_decay = parse_double(v); },
        [](const C& c) { return show(c.train.weight_decay); });
    add("train", "scheduler_factor", [](C& c, S v) { c.train.scheduler.factor = parse_double(v); },
        [](const C& c) { return show(c.train.scheduler.factor); });
    add("train", "scheduler_patience", [](C& c, S v) { c.train.scheduler.patience = parse_index(v); },
        [](const C& c) { return std::to_string(c.train.scheduler.patience); });
    add("train", "scheduler_min_lr", [](C& c, S v) { c.train.scheduler.min_lr = parse_double(v); },
        [](const C& c) { return show(c.train.scheduler.min_lr); });
    add("train", "scheduler_threshold", [](C& c, S v) { c.train.scheduler.threshold = parse_double(v); },
        [](const C& c) { return show(c.train.scheduler.threshold); });
    add("train", "seeds", [](C& c, S v) { c.train.seeds = parse_list<std::uint64_t>(v, parse_u64); },
        [](const C& c) { return join(c.train.seeds, [](std::uint64_t s) { return std::to_string(s); }); });
    add("train", "task_weights", [](C& c, S v) { c.train.task_weights = parse_list<double>(v, parse_double); },
        [](const C& c) { return join(c.train.task_weights, [](double w) { return show(w); }); });
    add("train", "lambda1", [](C& c, S v) { c.train.regularization.lambda1 = parse_double(v); },
        [](const C& c) { return show(c.train.regularization.lambda1); });
    add("train", "lambda2", [](C& c, S v) { c.train.regularization.lambda2 = parse_double(v); },
        [](const C& c) { return show(c.train.regularization.lambda2); });
    add("train", "trace_sign", [](C& c, S v) { c.train.regularization.trace_sign = parse_double(v); },
        [](const C& c) { return show(c.train.regularization.trace_sign); });
    add("train", "scale_targets", [](C& c, S v) { c.train.scale_targets = parse_bool(v); },
        [](const C& c) { return show(c.train.scale_targets); });
    add("train", "conflict_stride", [](C& c, S v) { c.train.conflict_stride = parse_index(v); },
        [](const C& c) { return std::to_string(c.train.conflict_stride); });
    add("train", "workers", [](C& c, S v) { c.train.workers = parse_index(v); },
        [](const C& c) { return std::to_string(c.train.workers); });
    // [model]
    add("model", "hidden", [](C& c, S v) { c.train.architecture.hidden = parse_list<Index>(v, parse_index); },
        [](const C& c) { return join(c.train.architecture.hidden, [](Index i) { return std::to_string(i); }); });
    add("model", "head_hidden", [](C& c, S v) { c.train.architecture.head_hidden = parse_index(v); },
        [](const C& c) { return std::to_string(c.train.architecture.head_hidden); });
    add("model", "dropout", [](C& c, S v) { c.train.architecture.dropout = parse_double(v); },
        [](const C& c) { return show(c.train.architecture.dropout); });
    add("model", "embedding_dim", [](C& c, S v) { c.train.architecture.embedding_dim = parse_index(v); },
        [](const C& c) { return std::to_string(c.train.architecture.embedding_dim); });
    add("model", "gcn_hidden", [](C& c, S v) { c.train.architecture.gcn_hidden = parse_index(v); },
        [](const C& c) { return std::to_string(c.train.architecture.gcn_hidden); });
    add("model", "edge_hidden", [](C& c, S v) { c.train.architecture.edge_hidden = parse_index(v); },
        [](const C& c) { return std::to_string(c.train.architecture.edge_hidden); });
    add("model", "fusion_hidden", [](C& c, S v) { c.train.architecture.fusion_hidden = parse_index(v); },
        [](const C& c) { return std::to_string(c.train.architecture.fusion_hidden); });
    add("model", "alpha", [](C& c, S v) { c.train.architecture.alpha = parse_double(v); },
        [](const C& c) { return show(c.train.architecture.alpha); });
    add("model", "full_fusion_backprop",
        [](C& c, S v) { c.train.architecture.full_fusion_backprop = parse_bool(v); },
        [](const C& c) { return show(c.train.architecture.full_fusion_backprop); });
    // [experiment]
    add("experiment", "models",
        [](C& c, S v) { c.experiment.models = parse_list<ModelKind>(v, model_kind_from_string); },
        [](const C& c) { return join(c.experiment.models, [](ModelKind m) { return to_string(m); }); });
    add("experiment", "majority_task", [](C& c, S v) { c.experiment.majority_task = v; },
        [](const C& c) { return c.experiment.majority_task; });
    add("experiment", "minority_task", [](C& c, S v) { c.experiment.minority_task = v; },
        [](const C& c) { return c.experiment.minority_task; });
    add("experiment", "counts", [](C& c, S v) { c.experiment.counts = parse_list<Index>(v, parse_index); },
        [](const C& c) { return join(c.experiment.counts, [](Index i) { return std::to_string(i); }); });
    add("experiment", "sweep_model", [](C& c, S v) { c.experiment.sweep_model = model_kind_from_string(v); },
        [](const C& c) { return to_string(c.experiment.sweep_model); });
    add("experiment", "conflict_model",
        [](C& c, S v) { c.experiment.conflict_model = model_kind_from_string(v); },
        [](const C& c) { return to_string(c.experiment.conflict_model); });
    add("experiment", "source_task", [](C& c, S v) { c.experiment.source_task = v; },
        [](const C& c) { return c.experiment.source_task; });
    add("experiment", "target_task", [](C& c, S v) { c.experiment.target_task = v; },
        [](const C& c) { return c.experiment.target_task; });
    add("experiment", "predictions", [](C& c, S v) { c.experiment.predictions = parse_bool(v); },
        [](const C& c) { return show(c.experiment.predictions); });
    add("experiment", "histories", [](C& c, S v) { c.experiment.histories = parse_bool(v); },
        [](const C& c) { return show(c.experiment.histories); });
    add("experiment", "formats", [](C& c, S v) { c.experiment.formats = split_list(v); },
        [](const C& c) { return join_names(c.experiment.formats); });
    return k;
  }();
  return table;
}

const Key& find_key(const std::string& section, const std::string& name) {
  for (const Key& k : keys()) {
    if (k.section == section && k.name == name) return k;
  }
  throw ConfigError("unknown key '" + name + "' in section [" + section + "]");
}

bool known_section(const std::string& s) {
  return s == "data" || s == "train" || s == "model" || s == "experiment";
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::set<std::string> seen;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(number) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!known_section(section)) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside of a section");
    const std::string name = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(section + "." + name).second) throw ConfigError(where + "duplicate key " + name);
    try {
      find_key(section, name).set(config, value);
    } catch (const Error& e) {
      throw ConfigError(where + e.what());
    }
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void apply_override(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError("override must look like section.key=value: " + assignment);
  }
  const std::string section = trim(assignment.substr(0, dot));
  if (!known_section(section)) throw ConfigError("unknown section in override: " + section);
  try {
    find_key(section, trim(assignment.substr(dot + 1, eq - dot - 1))).set(config, trim(assignment.substr(eq + 1)));
  } catch (const Error& e) {
    throw ConfigError("override " + assignment + ": " + e.what());
  }
}

std::string to_config_text(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const Key& k : keys()) {
    if (k.section != section) {
      out += (section.empty() ? "" : "\n") + std::string("[") + k.section + "]\n";
      section = k.section;
    }
    out += k.name + " = " + k.get(config) + "\n";
  }
  return out;
}

void validate(const RunConfig& config) {
  config.train.validate();
  const SplitRatios& r = config.data.ratios;
  if (!(r.train > 0.0 && r.validation > 0.0 && r.test > 0.0) ||
      std::abs(r.train + r.validation + r.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be positive and sum to 1");
  }
  if (config.data.source == DataSource::kCsv && config.data.csv.empty()) {
    throw ConfigError("data.source = csv needs data.csv");
  }
  if (config.data.source == DataSource::kSynthetic) config.data.synthetic.validate();
  for (const auto& f : config.experiment.formats) {
    if (f != "json" && f != "csv") throw ConfigError("unknown report format: " + f);
  }
}

}  // namespace mtlbench
