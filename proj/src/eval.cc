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

#include "anthro/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <unordered_set>

#include "anthro/error.h"
#include "anthro/utf8.h"

namespace anthro {
namespace {

// Unbiased draw from [0, n) by rejection; independent of the standard
// library's distribution implementations so results are portable.
uint64_t uniform_below(std::mt19937_64& rng, uint64_t n) {
  const uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
  uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

AttackCampaignResult run_campaign(const Scorer& scorer, std::span<const Example> inputs,
                                  const AttackConfig& config, const PerturbationIndex& index) {
  AttackCampaignResult result;
  size_t total_queries = 0;
  for (const auto& ex : inputs) {
    auto outcome = attack_if_correct(scorer, ex.text, ex.label, config, index);
    if (!outcome) {
      ++result.n_excluded;
      continue;
    }
    ++result.n_correct_pre;
    if (outcome->success) ++result.n_flipped;
    total_queries += outcome->queries_used;
    result.outcomes.push_back(*std::move(outcome));
  }
  result.mean_queries = result.n_correct_pre == 0
                            ? 0.0
                            : static_cast<double>(total_queries) / result.n_correct_pre;
  return result;
}

double atk_rate(const AttackCampaignResult& result) {
  if (result.n_correct_pre == 0) {
    throw Error(ErrorCode::kNoValidExamples, "no input was predicted correctly before the attack");
  }
  return static_cast<double>(result.n_flipped) / static_cast<double>(result.n_correct_pre);
}

Coverage wild_coverage(std::span<const std::string> perturbations,
                       std::span<const TokenRecord> reference, uint64_t min_sources) {
  std::unordered_set<std::string> distinct(perturbations.begin(), perturbations.end());
  if (distinct.empty()) throw Error(ErrorCode::kEmptyInput, "no perturbations given");
  std::unordered_set<std::string> observed;
  for (const auto& r : reference) {
    if (r.sources >= min_sources) observed.insert(utf8::to_lower(r.token));
  }
  Coverage out;
  out.total = distinct.size();
  for (const auto& p : distinct) {
    if (observed.contains(utf8::to_lower(p))) ++out.matched;
  }
  out.fraction = static_cast<double>(out.matched) / static_cast<double>(out.total);
  return out;
}

std::vector<PrecisionPoint> precision_under_perturbation(
    const Scorer& scorer, std::span<const std::string> positives, size_t positive_label,
    const PerturbationIndex& index, int k, int d, std::span<const double> fractions,
    uint64_t seed) {
  for (double f : fractions) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "fractions must lie in [0, 1]");
    }
  }
  AttackConfig config;
  config.mode = AttackMode::kAnthro;
  config.k = k;
  config.d = d;

  // texts[f][i] is positive i perturbed at fraction f.
  std::vector<std::vector<std::string>> texts(fractions.size());
  for (size_t i = 0; i < positives.size(); ++i) {
    Sentence sentence(positives[i]);
    const size_t m = sentence.size();
    std::mt19937_64 rng(mix_seed(seed, i));
    std::vector<size_t> order(m);
    std::iota(order.begin(), order.end(), size_t{0});
    for (size_t j = 0; j + 1 < m; ++j) {
      std::swap(order[j], order[j + uniform_below(rng, m - j)]);
    }
    std::vector<std::string> draw(m);
    for (size_t j = 0; j < m; ++j) {
      const auto options = candidates(sentence.word(order[j]), config, index);
      draw[j] = options.empty() ? sentence.word(order[j])
                                : options[uniform_below(rng, options.size())];
    }
    for (size_t f = 0; f < fractions.size(); ++f) {
      Sentence perturbed = sentence;
      const auto count = static_cast<size_t>(std::floor(fractions[f] * static_cast<double>(m)));
      for (size_t j = 0; j < count; ++j) perturbed.replace(order[j], draw[j]);
      texts[f].push_back(perturbed.render());
    }
  }

  std::vector<PrecisionPoint> out;
  for (size_t f = 0; f < fractions.size(); ++f) {
    const auto probs = scorer.score(texts[f]);
    if (probs.size() != texts[f].size()) {
      throw Error(ErrorCode::kScorerFailure, "scorer returned wrong batch size");
    }
    size_t kept = 0;
    for (const auto& p : probs) {
      if (argmax(p) == positive_label) ++kept;
    }
    out.push_back({fractions[f], positives.empty() ? 0.0
                                                   : static_cast<double>(kept) / positives.size()});
  }
  return out;
}

std::vector<GridCell> defense_grid(std::span<const NamedAttack> attacks,
                                   std::span<const NamedDefense> defenses,
                                   std::span<const Example> inputs,
                                   const PerturbationIndex& index) {
  if (attacks.empty() || defenses.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs at least one attack and one defense");
  }
  std::vector<GridCell> out;
  for (const auto& a : attacks) {
    for (const auto& def : defenses) {
      if (def.scorer == nullptr) throw Error(ErrorCode::kInvalidArgument, "defense without scorer");
      const NormalizedScorer defended(*def.scorer, def.normalizers);
      const auto result = run_campaign(defended, inputs, a.config, index);
      out.push_back({a.name, def.name, atk_rate(result), result.n_correct_pre, result.mean_queries});
    }
  }
  return out;
}

std::string grid_tsv(std::span<const GridCell> cells) {
  std::string out = "attack\tdefense\tatk_rate\tn\tmean_queries\n";
  for (const auto& c : cells) {
    out += c.attack + '\t' + c.defense + '\t' + format_double(c.atk_rate) + '\t' +
           std::to_string(c.n) + '\t' + format_double(c.mean_queries) + '\n';
  }
  return out;
}

}  // namespace anthro
