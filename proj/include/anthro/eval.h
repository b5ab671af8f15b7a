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

#ifndef ANTHRO_EVAL_H_
#define ANTHRO_EVAL_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "anthro/attack.h"
#include "anthro/corpus.h"
#include "anthro/index.h"
#include "anthro/normalize.h"
#include "anthro/scorer.h"

namespace anthro {

struct AttackCampaignResult {
  // One outcome per correctly predicted input, in input order.
  std::vector<AttackOutcome> outcomes;
  size_t n_correct_pre = 0;
  size_t n_flipped = 0;
  size_t n_excluded = 0;  // mispredicted before the attack
  double mean_queries = 0.0;
};

AttackCampaignResult run_campaign(const Scorer& scorer, std::span<const Example> inputs,
                                  const AttackConfig& config, const PerturbationIndex& index);

// Flipped over correctly-predicted inputs. Throws Error(kNoValidExamples)
// when nothing was predicted correctly.
double atk_rate(const AttackCampaignResult& result);

struct Coverage {
  double fraction = 0.0;
  size_t matched = 0;
  size_t total = 0;
};

// Share of distinct perturbations that occur (case-insensitively) in the
// reference corpus as a surface form seen in at least `min_sources` sources.
// Throws Error(kEmptyInput) for an empty perturbation set.
Coverage wild_coverage(std::span<const std::string> perturbations,
                       std::span<const TokenRecord> reference, uint64_t min_sources = 1);

struct PrecisionPoint {
  double fraction = 0.0;
  double precision = 0.0;
};

// For each fraction f, replaces floor(f * words) words of every text by a
// uniformly drawn anthro candidate (level k, distance d) and reports the
// share still labelled `positive_label`. Word positions and candidate draws
// are nested across fractions, so a larger fraction perturbs a superset of
// the words perturbed by a smaller one. Deterministic for a given seed.
std::vector<PrecisionPoint> precision_under_perturbation(
    const Scorer& scorer, std::span<const std::string> positives, size_t positive_label,
    const PerturbationIndex& index, int k, int d, std::span<const double> fractions,
    uint64_t seed);

struct NamedAttack {
  std::string name;
  AttackConfig config;
};

struct NamedDefense {
  std::string name;
  const Scorer* scorer = nullptr;
  NormalizerStack normalizers;
};

struct GridCell {
  std::string attack;
  std::string defense;
  double atk_rate = 0.0;
  size_t n = 0;  // correctly predicted inputs
  double mean_queries = 0.0;
};

// Every attack against every normalizer-wrapped scorer; normalization sits in
// front of every query the attacker makes. Row-major: attacks outer.
std::vector<GridCell> defense_grid(std::span<const NamedAttack> attacks,
                                   std::span<const NamedDefense> defenses,
                                   std::span<const Example> inputs,
                                   const PerturbationIndex& index);

// `attack<TAB>defense<TAB>atk_rate<TAB>n<TAB>mean_queries` with header line.
std::string grid_tsv(std::span<const GridCell> cells);

}  // namespace anthro

#endif  // ANTHRO_EVAL_H_
