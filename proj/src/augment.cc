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

#include <algorithm>
#include <cmath>

#include "anthro/error.h"
#include "anthro/models.h"

namespace anthro {

LabeledDataset augment_adversarial(const LabeledDataset& data, const PerturbationIndex& index,
                                   const Scorer& scorer, const AttackConfig& config,
                                   double ratio, std::optional<size_t> target_label) {
  if (!(ratio >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "ratio must be non-negative");
  auto eligible = [&](const Example& ex) { return !target_label || ex.label == *target_label; };
  const auto pool = static_cast<size_t>(
      std::count_if(data.examples().begin(), data.examples().end(), eligible));
  LabeledDataset out = data;
  const auto budget = static_cast<size_t>(std::floor(ratio * static_cast<double>(pool)));
  size_t added = 0;
  for (const auto& ex : data.examples()) {
    if (added >= budget) break;
    if (!eligible(ex)) continue;
    const auto outcome = attack_if_correct(scorer, ex.text, ex.label, config, index);
    if (outcome && outcome->success) {
      out.add(*outcome->perturbed, ex.label);
      ++added;
    }
  }
  return out;
}

}  // namespace anthro
