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

#include "mtlbench/cli/emit.hpp"

#include <fstream>
#include <iostream>
#include <map>

#include "mtlbench/core/errors.hpp"
#include "mtlbench/data/csv.hpp"

namespace mtlbench {
namespace {

namespace fs = std::filesystem;

std::string num(double v) { return format_double(v); }

class CsvFile {
 public:
  CsvFile(const fs::path& path, const std::string& header) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot write " + path.string());
    out_ << header << '\n';
  }
  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << fields, first = false), ...);
    out_ << '\n';
  }
  fs::path close() {
    out_.close();
    if (!out_) throw IoError("failed writing " + path_.string());
    return path_;
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

void notice(const std::string& message) { std::cerr << "notice: " << message << '\n'; }

bool is_classification(const ExperimentReport& report, const std::string& task) {
  for (std::size_t t = 0; t < report.task_names.size(); ++t) {
    if (report.task_names[t] == task) return report.task_kinds[t] == TaskKind::kClassification;
  }
  return false;
}

}  // namespace

fs::path make_run_directory(const fs::path& root, const std::string& experiment) {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create output directory " + root.string() + ": " + ec.message());
  const std::string base = experiment + "-" + utc_timestamp();
  for (int k = 1;; ++k) {
    const fs::path candidate = root / (k == 1 ? base : base + "-" + std::to_string(k));
    if (fs::create_directory(candidate, ec)) return candidate;
    if (ec) throw IoError("cannot create run directory " + candidate.string() + ": " + ec.message());
  }
}

std::vector<fs::path> emit_report(const ExperimentReport& report, const std::vector<std::string>& formats,
                                  const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw IoError("cannot create output directory " + out_dir.string());
  std::vector<fs::path> written;
  for (const std::string& format : formats) {
    if (format == "json") {
      const fs::path path = out_dir / "report.json";
      std::ofstream out(path, std::ios::binary);
      if (!out) throw IoError("cannot write " + path.string());
      out << report_to_json(report) << '\n';
      out.close();
      if (!out) throw IoError("failed writing " + path.string());
      written.push_back(path);
    } else if (format == "csv") {
      if (!report.aggregates.empty() || !report.records.empty()) {
        CsvFile metrics(out_dir / "metrics.csv", "task,model,metric,mean,std,n_seeds");
        for (const auto& a : report.aggregates) metrics.row(a.task, a.model, a.metric, num(a.mean), num(a.std), a.n_seeds);
        written.push_back(metrics.close());
        CsvFile records(out_dir / "records.csv", "task,model,seed,metric,value");
        for (const auto& r : report.records) records.row(r.task, r.model, r.seed, r.metric, num(r.value));
        written.push_back(records.close());
      }
      if (!report.ttests.empty()) {
        CsvFile f(out_dir / "ttests.csv", "task,metric,model_a,model_b,t,df,p,significant");
        for (const auto& t : report.ttests) {
          f.row(t.task, t.metric, t.model_a, t.model_b, num(t.result.t_statistic), t.result.degrees_of_freedom,
                num(t.result.p_value), t.result.significant ? "true" : "false");
        }
        written.push_back(f.close());
      }
      if (!report.relations.empty()) {
        CsvFile f(out_dir / "relations.csv", "target,source,mean,std,n_seeds");
        for (const auto& r : report.relations) f.row(r.target, r.source, num(r.mean), num(r.std), r.n_seeds);
        written.push_back(f.close());
      }
      if (!report.sweep.empty()) {
        CsvFile f(out_dir / "sweep.csv", "majority_count,ratio,task,model,metric,mean,std,n_seeds");
        for (const auto& p : report.sweep) {
          for (const auto& a : p.aggregates) {
            f.row(p.majority_count, num(p.ratio), a.task, a.model, a.metric, num(a.mean), num(a.std), a.n_seeds);
          }
        }
        written.push_back(f.close());
      }
      if (!report.cosines.empty()) {
        CsvFile f(out_dir / "cosines.csv", "task_a,task_b,mean,std,samples");
        for (const auto& c : report.cosines) f.row(c.task_a, c.task_b, num(c.mean), num(c.std), c.samples);
        written.push_back(f.close());
      }
    } else {
      throw ConfigError("unknown report format: " + format);
    }
  }
  return written;
}

std::vector<fs::path> emit_plot_data(const ExperimentReport& report, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw IoError("cannot create output directory " + out_dir.string());
  std::vector<fs::path> written;

  if (report.histories.empty()) {
    notice("no training histories; training_curves.csv skipped");
  } else {
    CsvFile f(out_dir / "training_curves.csv", "model,seed,epoch,split,loss");
    for (const auto& h : report.histories) {
      for (const auto& e : h.history.epochs) {
        f.row(h.model, h.seed, e.epoch, "train", num(e.train_loss));
        f.row(h.model, h.seed, e.epoch, "validation", num(e.validation_loss));
      }
    }
    written.push_back(f.close());
  }

  bool any_regression = false;
  bool any_classification = false;
  for (const auto& d : report.predictions) {
    (is_classification(report, d.task) ? any_classification : any_regression) = true;
  }
  if (!any_regression) {
    notice("no regression predictions; residuals.csv skipped");
  } else {
    CsvFile f(out_dir / "residuals.csv", "model,task,seed,row,prediction,target,residual");
    for (const auto& d : report.predictions) {
      if (is_classification(report, d.task)) continue;
      for (std::size_t i = 0; i < d.rows.size(); ++i) {
        f.row(d.model, d.task, d.seed, d.rows[i], num(d.predictions[i]), num(d.targets[i]),
              num(d.predictions[i] - d.targets[i]));
      }
    }
    written.push_back(f.close());
  }
  if (!any_classification) {
    notice("no classification predictions; confusion.csv skipped");
  } else {
    CsvFile f(out_dir / "confusion.csv", "model,task,seed,true_label,predicted_label,count");
    for (const auto& d : report.predictions) {
      if (!is_classification(report, d.task)) continue;
      Index counts[2][2] = {{0, 0}, {0, 0}};
      for (std::size_t i = 0; i < d.rows.size(); ++i) {
        ++counts[d.targets[i] == 1.0][d.predictions[i] >= 0.5];
      }
      for (int y = 0; y < 2; ++y) {
        for (int p = 0; p < 2; ++p) f.row(d.model, d.task, d.seed, y, p, counts[y][p]);
      }
    }
    written.push_back(f.close());
  }

  if (report.sweep.empty()) {
    notice("no sweep study; sweep_curve.csv skipped");
  } else {
    CsvFile f(out_dir / "sweep_curve.csv", "majority_count,ratio,r2_mean,r2_std");
    for (const auto& p : report.sweep) {
      for (const auto& a : p.aggregates) {
        if (a.metric == "r2") f.row(p.majority_count, num(p.ratio), num(a.mean), num(a.std));
      }
    }
    written.push_back(f.close());
  }

  if (report.cosines.empty()) {
    notice("no gradient-conflict study; cosine_matrix.csv skipped");
  } else {
    std::map<std::pair<std::string, std::string>, double> cell;
    for (const auto& c : report.cosines) {
      cell[{c.task_a, c.task_b}] = c.mean;
      cell[{c.task_b, c.task_a}] = c.mean;
    }
    std::string header = "task";
    for (const auto& t : report.task_names) header += "," + t;
    CsvFile f(out_dir / "cosine_matrix.csv", header);
    for (const auto& a : report.task_names) {
      std::string line = a;
      for (const auto& b : report.task_names) {
        const auto it = cell.find({a, b});
        line += "," + (it == cell.end() ? std::string("nan") : num(it->second));
      }
      f.row(line);
    }
    written.push_back(f.close());
  }

  if (report.experiment != "transfer") {
    notice("no transfer study; transfer_bars.csv skipped");
  } else {
    CsvFile f(out_dir / "transfer_bars.csv", "arm,task,metric,mean,std,n_seeds");
    for (const auto& a : report.aggregates) f.row(a.model, a.task, a.metric, num(a.mean), num(a.std), a.n_seeds);
    written.push_back(f.close());
  }
  return written;
}

}  // namespace mtlbench
