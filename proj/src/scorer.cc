// Copyright 2026 The Anthro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "anthro/scorer.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>

#include "anthro/error.h"

namespace anthro {

Probabilities Scorer::score_one(const std::string& text) const {
  auto out = score(std::span<const std::string>(&text, 1));
  if (out.size() != 1) throw Error(ErrorCode::kScorerFailure, "scorer returned wrong batch size");
  return std::move(out.front());
}

size_t argmax(const Probabilities& p) {
  return static_cast<size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

bool is_distribution(const Probabilities& p, double tolerance) {
  if (p.empty()) return false;
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

size_t LabeledDataset::find_label(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  return it == labels_.end() ? std::string::npos : static_cast<size_t>(it - labels_.begin());
}

size_t LabeledDataset::label_id(std::string_view label) {
  const size_t found = find_label(label);
  if (found != std::string::npos) return found;
  labels_.emplace_back(label);
  return labels_.size() - 1;
}

void LabeledDataset::add(std::string text, std::string_view label) {
  const size_t id = label_id(label);
  examples_.push_back({std::move(text), id});
}

void LabeledDataset::add(std::string text, size_t label) {
  if (label >= labels_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "label index " + std::to_string(label) + " undeclared");
  }
  examples_.push_back({std::move(text), label});
}

LabeledDataset LabeledDataset::parse_tsv(std::istream& in) {
  LabeledDataset data;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(ErrorCode::kFormatError,
                  "dataset line " + std::to_string(line_no) + ": expected label<TAB>text");
    }
    data.add(line.substr(tab + 1), std::string_view(line).substr(0, tab));
  }
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "error reading dataset");
  return data;
}

LabeledDataset LabeledDataset::load_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return parse_tsv(in);
}

}  // namespace anthro
