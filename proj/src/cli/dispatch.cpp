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

#include "mtlbench/cli/dispatch.hpp"

#include <cstdlib>
#include <iostream>
#include <ostream>

#include <CLI11.hpp>

#include "mtlbench/cli/config.hpp"
#include "mtlbench/cli/emit.hpp"
#include "mtlbench/core/errors.hpp"
#include "mtlbench/core/log.hpp"
#include "mtlbench/data/csv.hpp"
#include "mtlbench/experiments/experiments.hpp"
#include "mtlbench/train/gradcheck.hpp"

namespace mtlbench {
namespace {

namespace fs = std::filesystem;

struct CommonFlags {
  std::string config;
  std::string seeds;
  std::string out;
  std::vector<std::string> overrides;
  Index workers = -1;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "Config file (sectioned key = value)");
  cmd->add_option("--seeds", flags.seeds, "Comma-separated seeds, overriding train.seeds");
  cmd->add_option("--out", flags.out, "Output root (default: $MTLBENCH_OUT, else ./runs)");
  cmd->add_option("--set", flags.overrides, "Override a config key: section.key=value")->take_all();
  cmd->add_option("--workers", flags.workers, "Parallel seed workers (0 = all cores)");
  cmd->add_flag("--quiet", flags.quiet, "Suppress warnings");
}

RunConfig resolve_config(const CommonFlags& flags) {
  RunConfig config = flags.config.empty() ? RunConfig{} : load_config(flags.config);
  for (const auto& o : flags.overrides) apply_override(config, o);
  if (!flags.seeds.empty()) apply_override(config, "train.seeds=" + flags.seeds);
  if (flags.workers >= 0) config.train.workers = flags.workers;
  validate(config);
  return config;
}

fs::path output_root(const CommonFlags& flags) {
  if (!flags.out.empty()) return flags.out;
  if (const char* env = std::getenv("MTLBENCH_OUT"); env != nullptr && *env != '\0') return env;
  return "runs";
}

Dataset load_dataset(const RunConfig& config) {
  if (config.data.source == DataSource::kCsv) {
    const CsvSchema schema = config.data.schema.empty() ? CsvSchema::alloy() : CsvSchema::load(config.data.schema);
    return load_csv(config.data.csv, schema);
  }
  return generate_synthetic(config.data.synthetic);
}

ExperimentOptions options_for(const RunConfig& config, const Dataset& dataset) {
  ExperimentOptions o;
  o.train = config.train;
  o.train.architecture.input_dim = dataset.feature_dim();
  o.ratios = config.data.ratios;
  o.split_seed = config.data.split_seed;
  o.models = config.experiment.models;
  o.keep_predictions = config.experiment.predictions;
  o.keep_histories = config.experiment.histories;
  return o;
}

void print_summary(const ExperimentReport& report, std::ostream& out) {
  for (const auto& a : report.aggregates) {
    out << a.task << ' ' << a.model << ' ' << a.metric << ' ' << format_double(a.mean) << " +- "
        << format_double(a.std) << " (n=" << a.n_seeds << ")\n";
  }
  for (const auto& p : report.sweep) {
    for (const auto& a : p.aggregates) {
      out << "count " << p.majority_count << " ratio " << format_double(p.ratio) << ' ' << a.task << ' ' << a.metric
          << ' ' << format_double(a.mean) << " +- " << format_double(a.std) << '\n';
    }
  }
  for (const auto& t : report.ttests) {
    out << "t-test " << t.task << ' ' << t.metric << ' ' << t.model_a << " vs " << t.model_b
        << " t=" << format_double(t.result.t_statistic) << " p=" << format_double(t.result.p_value) << '\n';
  }
  for (const auto& c : report.cosines) {
    out << "cosine " << c.task_a << ' ' << c.task_b << ' ' << format_double(c.mean) << " +- " << format_double(c.std)
        << " (" << c.samples << " samples)\n";
  }
  for (const auto& r : report.relations) {
    out << "relation w(" << r.target << " <- " << r.source << ") " << format_double(r.mean) << " +- "
        << format_double(r.std) << '\n';
  }
}

int run_experiment(const std::string& name, const CommonFlags& flags, const std::string& counts,
                   const std::string& source, const std::string& target, std::ostream& out) {
  RunConfig config = resolve_config(flags);
  if (!counts.empty()) apply_override(config, "experiment.counts=" + counts);
  if (!source.empty()) config.experiment.source_task = source;
  if (!target.empty()) config.experiment.target_task = target;
  if (name == "sweep" && config.experiment.counts.empty()) throw ConfigError("sweep needs --counts");
  const Dataset dataset = load_dataset(config);
  const ExperimentOptions options = options_for(config, dataset);

  ExperimentReport report;
  if (name == "compare") {
    report = run_main_comparison(dataset, options);
  } else if (name == "sweep") {
    SweepOptions sweep{config.experiment.majority_task, config.experiment.minority_task, config.experiment.counts,
                       config.experiment.sweep_model};
    report = run_imbalance_sweep(dataset, sweep, options);
  } else if (name == "conflict") {
    report = run_gradient_conflict(dataset, options, config.experiment.conflict_model);
  } else if (name == "transfer") {
    report = run_transfer_utility(dataset, config.experiment.source_task, config.experiment.target_task, options);
  } else {
    report = run_task_relations(dataset, options);
  }
  report.config_snapshot = to_config_text(config);

  const fs::path run_dir = make_run_directory(output_root(flags), name);
  emit_report(report, config.experiment.formats, run_dir);
  emit_plot_data(report, run_dir / "plot");
  print_summary(report, out);
  out << "run directory: " << run_dir.string() << '\n';
  return kExitSuccess;
}

int run_gradcheck(std::uint64_t seed, Index batch, Index entries, std::ostream& out) {
  double worst = 0.0;
  for (ModelKind kind : {ModelKind::kIndependent, ModelKind::kShared, ModelKind::kStructured}) {
    ModelGradCheckOptions options;
    options.seed = seed;
    options.batch_size = batch;
    options.max_entries_per_parameter = entries;
    const ModelGradCheckReport r = model_gradcheck(kind, options);
    worst = std::max(worst, r.max_relative_error);
    out << to_string(kind) << ": max relative error " << format_double(r.max_relative_error) << " at "
        << r.worst_parameter << '[' << r.worst_entry << "] (analytic " << format_double(r.worst_analytic)
        << ", numeric " << format_double(r.worst_numeric) << "), " << r.entries_checked << " entries, "
        << format_double(r.seconds) << " s\n";
  }
  const bool pass = worst < kGradCheckTolerance;
  out << "gradcheck " << (pass ? "PASS" : "FAIL") << ": max relative error " << format_double(worst)
      << (pass ? " < " : " >= ") << format_double(kGradCheckTolerance) << '\n';
  return pass ? kExitSuccess : kExitFailure;
}

int run_synth(const CommonFlags& flags, const std::string& file, std::ostream& out) {
  const RunConfig config = resolve_config(flags);
  const Dataset dataset = generate_synthetic(config.data.synthetic);
  const fs::path path = file.empty() ? output_root(flags) / "synthetic.csv" : fs::path(file);
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string());
  }
  write_csv(dataset, path);
  CsvSchema schema;
  schema.features = dataset.feature_names();
  for (std::size_t t = 0; t < dataset.num_tasks(); ++t) {
    schema.targets.push_back({dataset.task_names()[t], dataset.task_kinds()[t]});
  }
  const fs::path schema_path = fs::path(path.string() + ".schema");
  schema.save(schema_path);
  out << "wrote " << dataset.size() << " samples to " << path.string() << " (schema " << schema_path.string()
      << ")\n";
  return kExitSuccess;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-task learning benchmark and negative-transfer diagnostics", "mtlbench"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> experiments{
      {"compare", "Independent vs standard MTL vs structured MTL across seeds"},
      {"sweep", "Minority-task metrics as the majority task is downsampled"},
      {"conflict", "Cosine between per-task backbone gradients during training"},
      {"transfer", "Pre-train on a source task, freeze, fit a target head; vs scratch"},
      {"relations", "Learned task relation matrix of structured MTL across seeds"}};
  CommonFlags flags;
  std::string counts, source, target;
  for (const auto& [name, help] : experiments) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(cmd, flags);
    if (name == "sweep") cmd->add_option("--counts", counts, "Comma-separated majority-task sample counts");
    if (name == "transfer") {
      cmd->add_option("--source", source, "Source task name");
      cmd->add_option("--target", target, "Target task name");
    }
  }
  std::uint64_t gc_seed = ModelGradCheckOptions{}.seed;
  Index gc_batch = ModelGradCheckOptions{}.batch_size;
  Index gc_entries = ModelGradCheckOptions{}.max_entries_per_parameter;
  CLI::App* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of all three model kinds");
  gradcheck->add_option("--seed", gc_seed, "Seed for parameters and data");
  gradcheck->add_option("--batch", gc_batch, "Batch size")->check(CLI::PositiveNumber);
  gradcheck->add_option("--entries", gc_entries, "Entries checked per parameter tensor")->check(CLI::PositiveNumber);
  std::string synth_file;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic union dataset to CSV");
  add_common(synth, flags);
  synth->add_option("--file", synth_file, "CSV path (default: <out>/synthetic.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const bool previous = warnings_enabled().load();
  if (flags.quiet) warnings_enabled() = false;
  int code = kExitSuccess;
  try {
    if (gradcheck->parsed()) {
      code = run_gradcheck(gc_seed, gc_batch, gc_entries, out);
    } else if (synth->parsed()) {
      code = run_synth(flags, synth_file, out);
    } else {
      for (const auto& [name, help] : experiments) {
        if (app.got_subcommand(name)) code = run_experiment(name, flags, counts, source, target, out);
      }
    }
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    code = kExitUsage;
  } catch (const ArgumentError& e) {
    err << "usage error: " << e.what() << '\n';
    code = kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kExitFailure;
  }
  warnings_enabled() = previous;
  return code;
}

}  // namespace mtlbench
