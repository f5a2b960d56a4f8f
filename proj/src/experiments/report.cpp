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

#include "mtlbench/experiments/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>

#include <json.hpp>

#include "mtlbench/core/errors.hpp"

namespace mtlbench {
namespace {

using Json = nlohmann::ordered_json;

Json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw DataError("report: unexpected string in numeric field: " + s);
  }
  return j.get<double>();
}

Json numbers(const std::vector<double>& values) {
  Json out = Json::array();
  for (double v : values) out.push_back(number(v));
  return out;
}

std::vector<double> numbers_from(const Json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number_from(v));
  return out;
}

Json to_json(const MetricRecord& r) {
  return Json{{"task", r.task}, {"model", r.model}, {"seed", r.seed}, {"metric", r.metric}, {"value", number(r.value)}};
}
MetricRecord record_from(const Json& j) {
  return MetricRecord{j.at("task"), j.at("model"), j.at("seed"), j.at("metric"), number_from(j.at("value"))};
}

Json to_json(const AggregateRow& a) {
  return Json{{"task", a.task},         {"model", a.model},       {"metric", a.metric},
              {"mean", number(a.mean)}, {"std", number(a.std)}, {"n_seeds", a.n_seeds}};
}
AggregateRow aggregate_from(const Json& j) {
  return AggregateRow{j.at("task"), j.at("model"), j.at("metric"), number_from(j.at("mean")),
                      number_from(j.at("std")), j.at("n_seeds")};
}

template <typename T, typename F>
Json array_of(const std::vector<T>& items, F&& convert) {
  Json out = Json::array();
  for (const auto& item : items) out.push_back(convert(item));
  return out;
}

template <typename T, typename F>
std::vector<T> vector_of(const Json& j, F&& convert) {
  std::vector<T> out;
  for (const auto& item : j) out.push_back(convert(item));
  return out;
}

Json history_json(const TrainHistory& h) {
  Json epochs = Json::array();
  for (const EpochRecord& e : h.epochs) {
    epochs.push_back(Json{{"epoch", e.epoch},
                          {"train_loss", number(e.train_loss)},
                          {"validation_loss", number(e.validation_loss)},
                          {"learning_rate", number(e.learning_rate)},
                          {"task_validation_loss", numbers(e.task_validation_loss)},
                          {"task_validation_metric", numbers(e.task_validation_metric)}});
  }
  return Json{{"outputs", h.output_names},
              {"best_epoch", h.best_epoch},
              {"stopped_epoch", h.stopped_epoch},
              {"early_stopped", h.early_stopped},
              {"epochs", epochs}};
}

TrainHistory history_from(const Json& j) {
  TrainHistory h;
  h.output_names = j.at("outputs").get<std::vector<std::string>>();
  h.best_epoch = j.at("best_epoch");
  h.stopped_epoch = j.at("stopped_epoch");
  h.early_stopped = j.at("early_stopped");
  for (const auto& e : j.at("epochs")) {
    h.epochs.push_back(EpochRecord{e.at("epoch"), number_from(e.at("train_loss")),
                                   number_from(e.at("validation_loss")), number_from(e.at("learning_rate")),
                                   numbers_from(e.at("task_validation_loss")),
                                   numbers_from(e.at("task_validation_metric"))});
  }
  return h;
}

}  // namespace

bool ExperimentReport::operator==(const ExperimentReport& other) const {
  // Serialized doubles round-trip exactly, and NaN compares equal to NaN.
  return report_to_json(*this) == report_to_json(other);
}

std::string report_to_json(const ExperimentReport& r) {
  Json kinds = Json::array();
  for (TaskKind k : r.task_kinds) kinds.push_back(to_string(k));
  Json j;
  j["experiment"] = r.experiment;
  j["config"] = r.config_snapshot;
  j["provenance"] = Json{{"code_version", r.provenance.code_version},
                         {"started", r.provenance.started},
                         {"finished", r.provenance.finished},
                         {"seeds", r.provenance.seeds}};
  j["tasks"] = r.task_names;
  j["task_kinds"] = kinds;
  j["records"] = array_of(r.records, [](const MetricRecord& m) { return to_json(m); });
  j["aggregates"] = array_of(r.aggregates, [](const AggregateRow& a) { return to_json(a); });
  j["ttests"] = array_of(r.ttests, [](const TTestRow& t) {
    return Json{{"task", t.task},
                {"metric", t.metric},
                {"model_a", t.model_a},
                {"model_b", t.model_b},
                {"t", number(t.result.t_statistic)},
                {"df", t.result.degrees_of_freedom},
                {"p", number(t.result.p_value)},
                {"significant", t.result.significant},
                {"degenerate", t.result.degenerate},
                {"mean_difference", number(t.result.mean_difference)}};
  });
  j["sweep"] = array_of(r.sweep, [](const SweepPoint& p) {
    return Json{{"majority_count", p.majority_count},
                {"ratio", number(p.ratio)},
                {"minority_task", p.minority_task},
                {"records", array_of(p.records, [](const MetricRecord& m) { return to_json(m); })},
                {"aggregates", array_of(p.aggregates, [](const AggregateRow& a) { return to_json(a); })}};
  });
  j["cosines"] = array_of(r.cosines, [](const CosineStat& c) {
    return Json{{"task_a", c.task_a},
                {"task_b", c.task_b},
                {"mean", number(c.mean)},
                {"std", number(c.std)},
                {"samples", c.samples}};
  });
  j["relations"] = array_of(r.relations, [](const RelationStat& s) {
    return Json{{"target", s.target},
                {"source", s.source},
                {"mean", number(s.mean)},
                {"std", number(s.std)},
                {"n_seeds", s.n_seeds}};
  });
  j["predictions"] = array_of(r.predictions, [](const PredictionDump& d) {
    return Json{{"model", d.model},
                {"task", d.task},
                {"seed", d.seed},
                {"rows", d.rows},
                {"predictions", numbers(d.predictions)},
                {"targets", numbers(d.targets)}};
  });
  j["histories"] = array_of(r.histories, [](const HistoryDump& h) {
    return Json{{"model", h.model}, {"seed", h.seed}, {"history", history_json(h.history)}};
  });
  j["warnings"] = r.warnings;
  return j.dump(2);
}

ExperimentReport report_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("report: malformed JSON: ") + e.what());
  }
  try {
    ExperimentReport r;
    r.experiment = j.at("experiment");
    r.config_snapshot = j.at("config");
    const Json& p = j.at("provenance");
    r.provenance = Provenance{p.at("code_version"), p.at("started"), p.at("finished"),
                              p.at("seeds").get<std::vector<std::uint64_t>>()};
    r.task_names = j.at("tasks").get<std::vector<std::string>>();
    for (const auto& k : j.at("task_kinds")) r.task_kinds.push_back(task_kind_from_string(k.get<std::string>()));
    r.records = vector_of<MetricRecord>(j.at("records"), record_from);
    r.aggregates = vector_of<AggregateRow>(j.at("aggregates"), aggregate_from);
    r.ttests = vector_of<TTestRow>(j.at("ttests"), [](const Json& t) {
      TTestResult res{number_from(t.at("t")), t.at("df"),         number_from(t.at("p")),
                      t.at("significant"),    t.at("degenerate"), number_from(t.at("mean_difference"))};
      return TTestRow{t.at("task"), t.at("metric"), t.at("model_a"), t.at("model_b"), res};
    });
    r.sweep = vector_of<SweepPoint>(j.at("sweep"), [](const Json& s) {
      return SweepPoint{s.at("majority_count"), number_from(s.at("ratio")), s.at("minority_task"),
                        vector_of<MetricRecord>(s.at("records"), record_from),
                        vector_of<AggregateRow>(s.at("aggregates"), aggregate_from)};
    });
    r.cosines = vector_of<CosineStat>(j.at("cosines"), [](const Json& c) {
      return CosineStat{c.at("task_a"), c.at("task_b"), number_from(c.at("mean")), number_from(c.at("std")),
                        c.at("samples")};
    });
    r.relations = vector_of<RelationStat>(j.at("relations"), [](const Json& s) {
      return RelationStat{s.at("target"), s.at("source"), number_from(s.at("mean")), number_from(s.at("std")),
                          s.at("n_seeds")};
    });
    r.predictions = vector_of<PredictionDump>(j.at("predictions"), [](const Json& d) {
      return PredictionDump{d.at("model"), d.at("task"), d.at("seed"), d.at("rows").get<std::vector<Index>>(),
                            numbers_from(d.at("predictions")), numbers_from(d.at("targets"))};
    });
    r.histories = vector_of<HistoryDump>(j.at("histories"), [](const Json& h) {
      return HistoryDump{h.at("model"), h.at("seed"), history_from(h.at("history"))};
    });
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("report: missing or mistyped field: ") + e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y%m%dT%H%M%SZ", &tm);
  return buffer;
}

}  // namespace mtlbench
