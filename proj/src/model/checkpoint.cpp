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

#include "mtlbench/model/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "mtlbench/core/errors.hpp"

namespace mtlbench {
namespace {

constexpr const char* kMagic = "mtlbench-checkpoint";
constexpr int kVersion = 1;

std::string hex(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::hex);
  if (ec != std::errc()) throw IoError("checkpoint: cannot format value");
  return std::string(buffer, ptr);
}

double parse_hex(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  bool negative = false;
  if (first != last && *first == '-') {
    negative = true;
    ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::hex);
  if (ec != std::errc() || ptr != last) throw DataError("checkpoint: bad value '" + text + "'");
  return negative ? -value : value;
}

template <typename T>
T expect(std::istream& in, const std::string& key) {
  std::string word;
  T value{};
  if (!(in >> word) || word != key || !(in >> value)) {
    throw DataError("checkpoint: expected '" + key + "'");
  }
  return value;
}

void write_values(std::ostream& out, const double* data, Index count) {
  for (Index i = 0; i < count; ++i) out << (i == 0 ? "" : " ") << hex(data[i]);
  out << '\n';
}

void read_values(std::istream& in, double* data, Index count) {
  std::string word;
  for (Index i = 0; i < count; ++i) {
    if (!(in >> word)) throw DataError("checkpoint: truncated value list");
    data[i] = parse_hex(word);
  }
}

}  // namespace

void save_checkpoint(Model& model, std::ostream& out) {
  const auto& a = model.architecture();
  out << kMagic << ' ' << kVersion << '\n';
  out << "kind " << to_string(model.kind()) << '\n';
  out << "tasks " << model.task_kinds().size();
  for (auto k : model.task_kinds()) out << ' ' << to_string(k);
  out << '\n';
  out << "input_dim " << a.input_dim << '\n';
  out << "hidden " << a.hidden.size();
  for (auto h : a.hidden) out << ' ' << h;
  out << '\n';
  out << "head_hidden " << a.head_hidden << '\n';
  out << "dropout " << hex(a.dropout) << '\n';
  out << "embedding_dim " << a.embedding_dim << '\n';
  out << "gcn_hidden " << a.gcn_hidden << '\n';
  out << "edge_hidden " << a.edge_hidden << '\n';
  out << "fusion_hidden " << a.fusion_hidden << '\n';
  out << "alpha " << hex(a.alpha) << '\n';
  out << "full_fusion_backprop " << (a.full_fusion_backprop ? 1 : 0) << '\n';
  out << "frozen " << (model.backbone_frozen() ? 1 : 0) << '\n';
  out << "rng " << model.rng() << '\n';
  for (const auto& p : model.parameters()) {
    out << "param " << p.name << ' ' << p.parameter->value.rows() << ' ' << p.parameter->value.cols() << '\n';
    write_values(out, p.parameter->value.data(), p.parameter->value.size());
  }
  for (const auto& b : model.buffers()) {
    out << "buffer " << b.name << ' ' << b.buffer->size() << '\n';
    write_values(out, b.buffer->data(), b.buffer->size());
  }
  out << "end\n";
  if (!out) throw IoError("checkpoint: write failed");
}

void save_checkpoint(Model& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  save_checkpoint(model, out);
}

std::unique_ptr<Model> load_checkpoint(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kMagic) throw DataError("checkpoint: missing header");
  if (version != kVersion) throw DataError("checkpoint: unsupported version " + std::to_string(version));
  const ModelKind kind = model_kind_from_string(expect<std::string>(in, "kind"));
  const auto n_tasks = expect<std::size_t>(in, "tasks");
  std::vector<TaskKind> kinds;
  for (std::size_t t = 0; t < n_tasks; ++t) {
    std::string k;
    in >> k;
    kinds.push_back(task_kind_from_string(k));
  }
  ArchitectureConfig a;
  a.input_dim = expect<Index>(in, "input_dim");
  const auto n_hidden = expect<std::size_t>(in, "hidden");
  a.hidden.assign(n_hidden, 0);
  for (auto& h : a.hidden) in >> h;
  a.head_hidden = expect<Index>(in, "head_hidden");
  a.dropout = parse_hex(expect<std::string>(in, "dropout"));
  a.embedding_dim = expect<Index>(in, "embedding_dim");
  a.gcn_hidden = expect<Index>(in, "gcn_hidden");
  a.edge_hidden = expect<Index>(in, "edge_hidden");
  a.fusion_hidden = expect<Index>(in, "fusion_hidden");
  a.alpha = parse_hex(expect<std::string>(in, "alpha"));
  a.full_fusion_backprop = expect<int>(in, "full_fusion_backprop") != 0;
  const bool frozen = expect<int>(in, "frozen") != 0;

  auto model = make_model(kind, kinds, a, 0);
  model->set_backbone_frozen(frozen);
  std::string word;
  if (!(in >> word) || word != "rng" || !(in >> model->rng())) throw DataError("checkpoint: bad rng state");

  std::map<std::string, Parameter<double>*> params;
  for (const auto& p : model->parameters()) params[p.name] = p.parameter;
  std::map<std::string, RowVector*> buffers;
  for (const auto& b : model->buffers()) buffers[b.name] = b.buffer;
  std::size_t seen_params = 0;
  std::size_t seen_buffers = 0;
  while (in >> word && word != "end") {
    std::string name;
    in >> name;
    if (word == "param") {
      Index rows = 0, cols = 0;
      in >> rows >> cols;
      const auto it = params.find(name);
      if (it == params.end()) throw DataError("checkpoint: unexpected parameter " + name);
      auto& value = it->second->value;
      if (value.rows() != rows || value.cols() != cols) throw DataError("checkpoint: shape mismatch for " + name);
      read_values(in, value.data(), value.size());
      ++seen_params;
    } else if (word == "buffer") {
      Index size = 0;
      in >> size;
      const auto it = buffers.find(name);
      if (it == buffers.end()) throw DataError("checkpoint: unexpected buffer " + name);
      if (it->second->size() != size) throw DataError("checkpoint: shape mismatch for " + name);
      read_values(in, it->second->data(), size);
      ++seen_buffers;
    } else {
      throw DataError("checkpoint: unexpected record '" + word + "'");
    }
  }
  if (word != "end") throw DataError("checkpoint: missing end marker");
  if (seen_params != params.size() || seen_buffers != buffers.size()) {
    throw DataError("checkpoint: incomplete parameter set");
  }
  return model;
}

std::unique_ptr<Model> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  return load_checkpoint(in);
}

}  // namespace mtlbench
