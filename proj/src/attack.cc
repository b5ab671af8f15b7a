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

#include "anthro/attack.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "json.hpp"

#include "anthro/error.h"
#include "anthro/utf8.h"

namespace anthro {
namespace {

void check_batch(const std::vector<Probabilities>& probs, size_t expected, size_t num_labels) {
  if (probs.size() != expected) {
    throw Error(ErrorCode::kScorerFailure, "scorer returned " + std::to_string(probs.size()) +
                                               " results for " + std::to_string(expected) +
                                               " texts");
  }
  for (const auto& p : probs) {
    if (p.size() != num_labels) {
      throw Error(ErrorCode::kScorerFailure, "probability vector has wrong length");
    }
  }
}

}  // namespace

std::string_view to_string(AttackMode mode) {
  switch (mode) {
    case AttackMode::kAnthro: return "anthro";
    case AttackMode::kBugs: return "bugs";
    case AttackMode::kBeta: return "beta";
  }
  return "unknown";
}

std::optional<AttackMode> parse_attack_mode(std::string_view name) {
  if (name == "anthro") return AttackMode::kAnthro;
  if (name == "bugs") return AttackMode::kBugs;
  if (name == "beta") return AttackMode::kBeta;
  return std::nullopt;
}

void validate(const AttackConfig& config) {
  if (config.k < 0 || config.d < 0) {
    throw Error(ErrorCode::kInvalidArgument, "k and d must be non-negative");
  }
  if (config.max_candidates_per_word == 0 || config.max_words_perturbed == 0) {
    throw Error(ErrorCode::kInvalidArgument, "candidate and word limits must be at least 1");
  }
  if ((config.bug_classes & bug_class::kAll) == 0 || (config.bug_classes & ~bug_class::kAll) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "bug class mask must select known classes");
  }
}

std::string to_json_line(const AttackOutcome& outcome) {
  nlohmann::ordered_json j;
  j["original"] = outcome.original;
  j["perturbed"] = outcome.perturbed ? nlohmann::ordered_json(*outcome.perturbed) : nullptr;
  auto edits = nlohmann::ordered_json::array();
  for (const auto& e : outcome.edits) {
    nlohmann::ordered_json edit;
    edit["position"] = e.position;
    edit["original"] = e.original;
    edit["replacement"] = e.replacement;
    edits.push_back(std::move(edit));
  }
  j["edits"] = std::move(edits);
  j["queries_used"] = outcome.queries_used;
  j["original_probability"] = outcome.original_probability;
  j["final_probability"] = outcome.final_probability;
  j["success"] = outcome.success;
  return j.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

Sentence::Sentence(std::string text) : text_(std::move(text)), spans_(tokenize_spans(text_)) {
  words_.reserve(spans_.size());
  for (const auto& s : spans_) words_.emplace_back(text_.substr(s.begin, s.size()));
}

std::string_view Sentence::original_word(size_t i) const {
  return std::string_view(text_).substr(spans_[i].begin, spans_[i].size());
}

std::string Sentence::render_with(size_t i, std::string_view word) const {
  std::string out;
  out.reserve(text_.size() + 16);
  size_t cursor = 0;
  for (size_t w = 0; w < spans_.size(); ++w) {
    out.append(text_, cursor, spans_[w].begin - cursor);
    out += (w == i) ? word : std::string_view(words_[w]);
    cursor = spans_[w].end;
  }
  out.append(text_, cursor, std::string::npos);
  return out;
}

std::string Sentence::render() const { return render_with(spans_.size(), {}); }

std::vector<WordImportance> score_words(const Scorer& scorer, std::string_view text,
                                        size_t true_label) {
  if (true_label >= scorer.num_labels()) {
    throw Error(ErrorCode::kInvalidArgument, "label index out of range");
  }
  const Sentence sentence{std::string(text)};
  std::vector<std::string> batch;
  batch.reserve(sentence.size() + 1);
  batch.push_back(sentence.render());
  for (size_t i = 0; i < sentence.size(); ++i) batch.push_back(sentence.render_with(i, ""));
  const auto probs = scorer.score(batch);
  check_batch(probs, batch.size(), scorer.num_labels());
  std::vector<WordImportance> out;
  out.reserve(sentence.size());
  for (size_t i = 0; i < sentence.size(); ++i) {
    out.push_back({i, probs[0][true_label] - probs[i + 1][true_label]});
  }
  return out;
}

std::vector<std::string> bug_candidates(std::string_view word, unsigned classes,
                                        const VisualFoldTable& table) {
  const std::u32string cps = utf8::decode(word);
  const size_t n = cps.size();
  std::set<std::string> out;
  std::u32string scratch;
  if (classes & bug_class::kSpace) {
    for (size_t i = 1; i < n; ++i) {
      scratch = cps;
      scratch.insert(scratch.begin() + static_cast<std::ptrdiff_t>(i), U' ');
      out.insert(utf8::encode(scratch));
    }
  }
  if ((classes & bug_class::kDelete) && n > 1) {
    for (size_t i = 0; i < n; ++i) {
      scratch = cps;
      scratch.erase(i, 1);
      out.insert(utf8::encode(scratch));
    }
  }
  if (classes & bug_class::kSwap) {
    for (size_t i = 0; i + 1 < n; ++i) {
      if (cps[i] == cps[i + 1]) continue;
      scratch = cps;
      std::swap(scratch[i], scratch[i + 1]);
      out.insert(utf8::encode(scratch));
    }
  }
  if (classes & bug_class::kConfusable) {
    for (size_t i = 0; i < n; ++i) {
      if (cps[i] < 'a' || cps[i] > 'z') continue;
      for (char32_t sub : table.confusables_for(static_cast<char>(cps[i]))) {
        scratch = cps;
        scratch[i] = sub;
        out.insert(utf8::encode(scratch));
      }
    }
  }
  out.erase(std::string(word));
  out.erase(std::string());
  return {out.begin(), out.end()};
}

std::vector<std::string> candidates(std::string_view word, const AttackConfig& config,
                                    const PerturbationIndex& index) {
  validate(config);
  std::vector<std::string> out;
  if (config.mode != AttackMode::kBugs) {
    std::vector<IndexEntry> found;
    try {
      found = index.retrieve({std::string(word), config.k, config.d});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEncodingFailure) throw;
    }
    std::erase_if(found, [&](const IndexEntry& e) { return e.token == word; });
    std::stable_sort(found.begin(), found.end(), [](const IndexEntry& a, const IndexEntry& b) {
      return a.frequency > b.frequency;
    });
    for (auto& e : found) out.push_back(std::move(e.token));
  }
  if (config.mode != AttackMode::kAnthro) {
    const std::set<std::string> indexed(out.begin(), out.end());
    for (auto& bug : bug_candidates(word, config.bug_classes, index.fold_table())) {
      if (!indexed.contains(bug)) out.push_back(std::move(bug));
    }
  }
  if (out.size() > config.max_candidates_per_word) out.resize(config.max_candidates_per_word);
  return out;
}

std::optional<AttackOutcome> attack_if_correct(const Scorer& scorer, std::string_view text,
                                               size_t true_label, const AttackConfig& config,
                                               const PerturbationIndex& index) {
  validate(config);
  const size_t num_labels = scorer.num_labels();
  if (true_label >= num_labels) throw Error(ErrorCode::kInvalidArgument, "label index out of range");

  AttackOutcome outcome;
  outcome.original = std::string(text);
  Sentence sentence{std::string(text)};

  std::vector<std::string> batch;
  batch.reserve(sentence.size() + 1);
  batch.push_back(sentence.render());
  for (size_t i = 0; i < sentence.size(); ++i) batch.push_back(sentence.render_with(i, ""));
  auto probs = scorer.score(batch);
  check_batch(probs, batch.size(), num_labels);
  outcome.queries_used = batch.size();
  if (argmax(probs[0]) != true_label) return std::nullopt;

  double current = probs[0][true_label];
  outcome.original_probability = current;

  std::vector<WordImportance> order;
  order.reserve(sentence.size());
  for (size_t i = 0; i < sentence.size(); ++i) {
    order.push_back({i, current - probs[i + 1][true_label]});
  }
  std::stable_sort(order.begin(), order.end(), [](const WordImportance& a, const WordImportance& b) {
    return a.importance > b.importance;
  });

  for (const auto& [position, importance] : order) {
    if (outcome.edits.size() >= config.max_words_perturbed) break;
    const std::string original(sentence.original_word(position));
    const auto options = candidates(original, config, index);
    if (options.empty()) continue;

    batch.clear();
    for (const auto& c : options) batch.push_back(sentence.render_with(position, c));
    probs = scorer.score(batch);
    check_batch(probs, batch.size(), num_labels);
    outcome.queries_used += batch.size();

    size_t best = 0;
    for (size_t j = 1; j < options.size(); ++j) {
      const double pj = probs[j][true_label];
      const double pb = probs[best][true_label];
      if (pj < pb || (pj == pb && options[j] < options[best])) best = j;
    }
    if (!(probs[best][true_label] < current)) continue;

    current = probs[best][true_label];
    sentence.replace(position, options[best]);
    outcome.edits.push_back({position, original, options[best]});
    if (argmax(probs[best]) != true_label) {
      outcome.success = true;
      outcome.perturbed = sentence.render();
      break;
    }
  }
  outcome.final_probability = current;
  return outcome;
}

AttackOutcome attack(const Scorer& scorer, std::string_view text, size_t true_label,
                     const AttackConfig& config, const PerturbationIndex& index) {
  auto outcome = attack_if_correct(scorer, text, true_label, config, index);
  if (!outcome) {
    throw Error(ErrorCode::kNotCorrectlyPredicted, "scorer mislabels the input text");
  }
  return *std::move(outcome);
}

}  // namespace anthro
