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

// Command-line front end: mine, query, attack, normalize, eval, train and
// serve-stub. Exit codes: 0 success, 1 domain error, 2 usage error.

#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anthro/attack.h"
#include "anthro/corpus.h"
#include "anthro/error.h"
#include "anthro/eval.h"
#include "anthro/index.h"
#include "anthro/models.h"
#include "anthro/normalize.h"
#include "anthro/remote.h"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace anthro;

namespace {

constexpr uint64_t kDefaultSeed = 0;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads a whole file, gunzipping when compressed; "-" is stdin.
std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  std::string out;
  char chunk[1 << 16];
  int n;
  while ((n = gzread(file, chunk, sizeof chunk)) > 0) out.append(chunk, static_cast<size_t>(n));
  int errnum = 0;
  const char* message = gzerror(file, &errnum);
  const bool failed = n < 0 || (errnum != Z_OK && errnum != Z_STREAM_END);
  const std::string what = failed ? message : "";
  gzclose(file);
  if (failed) throw Error(ErrorCode::kIoFailure, "cannot read " + path + ": " + what);
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(std::move(line));
  }
  return out;
}

// Writes to a sibling temp file and renames it over `path`; "-" is stdout.
void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data << std::flush;
    return;
  }
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary);
    out << data;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorCode::kIoFailure, "cannot write " + path);
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIoFailure, "cannot replace " + path);
  }
}

std::string resolve_index_path(const std::string& flag) {
  std::string path = flag;
  if (path.empty()) {
    if (const char* env = std::getenv("ANTHRO_INDEX")) path = env;
  }
  if (path.empty()) throw UsageError("no index given (use --index or ANTHRO_INDEX)");
  if (!fs::exists(path)) throw UsageError("index file not found: " + path);
  return path;
}

const VisualFoldTable& fold_table(const std::string& path, std::optional<VisualFoldTable>& slot) {
  if (path.empty()) return VisualFoldTable::builtin();
  slot = VisualFoldTable::load(path);
  return *slot;
}

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::unique_ptr<Scorer> open_scorer(const std::string& spec, const std::string& labels) {
  if (spec.rfind("local:", 0) == 0) {
    const std::string path = spec.substr(6);
    if (!fs::exists(path)) throw UsageError("model file not found: " + path);
    return std::make_unique<NaiveBayesScorer>(NaiveBayesScorer::load(path));
  }
  if (spec.rfind("remote:", 0) == 0) {
    RemoteScorerOptions opts;
    opts.endpoint = spec.substr(7);
    opts.label_names = split_list(labels);
    parse_endpoint(opts.endpoint);
    return std::make_unique<RemoteScorer>(std::move(opts));
  }
  throw UsageError("scorer must be local:MODEL or remote:URL");
}

unsigned parse_bug_classes(const std::string& spec) {
  if (spec == "all") return bug_class::kAll;
  unsigned mask = 0;
  for (const auto& name : split_list(spec)) {
    if (name == "space") mask |= bug_class::kSpace;
    else if (name == "delete") mask |= bug_class::kDelete;
    else if (name == "swap") mask |= bug_class::kSwap;
    else if (name == "confusable") mask |= bug_class::kConfusable;
    else throw UsageError("unknown bug class: " + name);
  }
  return mask;
}

AttackMode parse_mode(const std::string& name) {
  const auto mode = parse_attack_mode(name);
  if (!mode) throw UsageError("unknown attack mode: " + name);
  return *mode;
}

std::vector<Example> load_examples(const std::string& path, const Scorer& scorer) {
  std::istringstream in(read_input(path));
  const auto data = LabeledDataset::parse_tsv(in);
  const auto& names = scorer.label_names();
  std::vector<Example> out;
  out.reserve(data.size());
  for (const auto& ex : data.examples()) {
    const std::string& label = data.labels()[ex.label];
    const auto it = std::find(names.begin(), names.end(), label);
    if (it == names.end()) {
      throw Error(ErrorCode::kInvalidArgument, "label '" + label + "' unknown to the scorer");
    }
    out.push_back({ex.text, static_cast<size_t>(it - names.begin())});
  }
  return out;
}

// Flag values the library rejects are usage errors.
template <typename Fn>
auto as_usage(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInvalidArgument) throw;
    throw UsageError(e.what());
  }
}

std::vector<NormalizerStage> stages_flag(const std::string& spec) {
  return as_usage([&] { return parse_stages(spec); });
}

std::shared_ptr<const Dictionary> load_dictionary(const std::string& path) {
  if (path.empty()) return nullptr;
  return std::make_shared<Dictionary>(Dictionary::load(path));
}

// Options shared by subcommands that attack or score.
struct ScorerFlags {
  std::string scorer;
  std::string labels;
};

void add_scorer_flags(CLI::App* cmd, ScorerFlags& f) {
  cmd->add_option("--scorer", f.scorer, "local:MODEL or remote:URL")->required();
  cmd->add_option("--labels", f.labels, "comma-separated label names of a remote scorer");
}

struct AttackFlags {
  std::string mode = "anthro";
  int k = 1;
  int d = 1;
  size_t max_candidates = kUnlimited;
  size_t max_words = kUnlimited;
  std::string bug_classes = "all";
};

void add_attack_flags(CLI::App* cmd, AttackFlags& f) {
  cmd->add_option("--k", f.k, "phonetic level")->capture_default_str();
  cmd->add_option("--d", f.d, "max edit distance")->capture_default_str();
  cmd->add_option("--max-candidates", f.max_candidates, "candidates kept per word");
  cmd->add_option("--max-words", f.max_words, "words perturbed at most");
  cmd->add_option("--bug-classes", f.bug_classes, "all or space,delete,swap,confusable")
      ->capture_default_str();
}

AttackConfig make_config(const AttackFlags& f, AttackMode mode) {
  AttackConfig cfg{.mode = mode,
                   .k = f.k,
                   .d = f.d,
                   .max_candidates_per_word = f.max_candidates,
                   .max_words_perturbed = f.max_words,
                   .bug_classes = parse_bug_classes(f.bug_classes)};
  as_usage([&] {
    validate(cfg);
    return 0;
  });
  return cfg;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phonetic perturbation mining, retrieval and attack toolkit"};
  app.require_subcommand(1);

  // mine
  auto* mine = app.add_subcommand("mine", "build a perturbation index from corpora");
  std::vector<std::string> mine_inputs;
  std::string mine_output, mine_table;
  BuildParams mine_params;
  bool mine_tsv = false;
  mine->add_option("--input", mine_inputs, "corpus files (gzip ok, - for stdin)")->required();
  mine->add_option("--output", mine_output, "index file")->required();
  mine->add_option("--max-level", mine_params.max_level, "highest level K")->capture_default_str();
  mine->add_option("--min-freq", mine_params.min_frequency, "minimum frequency")->capture_default_str();
  mine->add_option("--min-sources", mine_params.min_sources, "minimum distinct sources")
      ->capture_default_str();
  mine->add_flag("--tsv", mine_tsv, "inputs are text<TAB>source-id");
  mine->add_option("--fold-table", mine_table, "visual fold table file");

  // query
  auto* query = app.add_subcommand("query", "list perturbations of a word");
  std::string query_index, query_word, query_table;
  int query_k = 1, query_d = 1;
  query->add_option("--index", query_index, "index file (default $ANTHRO_INDEX)");
  query->add_option("--word", query_word, "target word")->required();
  query->add_option("--k", query_k, "phonetic level")->capture_default_str();
  query->add_option("--d", query_d, "max edit distance")->capture_default_str();
  query->add_option("--fold-table", query_table, "visual fold table used at mining time");

  // attack
  auto* attack_cmd = app.add_subcommand("attack", "attack labeled inputs and report JSON lines");
  std::string attack_index, attack_inputs, attack_out = "-", attack_stages = "none", attack_dict;
  uint64_t attack_seed = kDefaultSeed;
  ScorerFlags attack_scorer;
  AttackFlags attack_flags;
  attack_cmd->add_option("--index", attack_index, "index file (default $ANTHRO_INDEX)");
  add_scorer_flags(attack_cmd, attack_scorer);
  attack_cmd->add_option("--mode", attack_flags.mode, "anthro, bugs or beta")->capture_default_str();
  add_attack_flags(attack_cmd, attack_flags);
  attack_cmd->add_option("--inputs", attack_inputs, "label<TAB>text file")->required();
  attack_cmd->add_option("--out", attack_out, "JSON-lines report")->capture_default_str();
  attack_cmd->add_option("--seed", attack_seed, "accepted for reproducibility; the attack is deterministic")
      ->capture_default_str();
  attack_cmd->add_option("--defense", attack_stages, "normalizers in front of the scorer")
      ->capture_default_str();
  attack_cmd->add_option("--dict", attack_dict, "dictionary for the P normalizer");

  // normalize
  auto* norm = app.add_subcommand("normalize", "normalize text lines");
  std::string norm_stages = "a,h", norm_dict, norm_input = "-", norm_output = "-";
  size_t norm_d = 2;
  norm->add_option("--stages", norm_stages, "ordered subset of a,h,p")->capture_default_str();
  norm->add_option("--dict", norm_dict, "word<TAB>frequency dictionary for p");
  norm->add_option("--d", norm_d, "max correction distance for p")->capture_default_str();
  norm->add_option("--input", norm_input, "text file")->capture_default_str();
  norm->add_option("--output", norm_output, "output file")->capture_default_str();

  // eval
  auto* eval = app.add_subcommand("eval", "evaluation reports");
  eval->require_subcommand(1);
  auto* grid = eval->add_subcommand("grid", "attack x defense Atk% table");
  std::string grid_index, grid_inputs, grid_modes = "anthro,bugs,beta", grid_defenses = "none",
                                          grid_dict, grid_out = "-";
  ScorerFlags grid_scorer;
  AttackFlags grid_flags;
  grid->add_option("--index", grid_index, "index file (default $ANTHRO_INDEX)");
  add_scorer_flags(grid, grid_scorer);
  grid->add_option("--inputs", grid_inputs, "label<TAB>text file")->required();
  grid->add_option("--modes", grid_modes, "attack modes")->capture_default_str();
  grid->add_option("--defenses", grid_defenses, "semicolon-separated stage lists, e.g. none;A+H")
      ->capture_default_str();
  grid->add_option("--dict", grid_dict, "dictionary for the P normalizer");
  grid->add_option("--out", grid_out, "TSV output")->capture_default_str();
  add_attack_flags(grid, grid_flags);

  auto* coverage = eval->add_subcommand("coverage", "share of perturbations seen in a corpus");
  std::string cov_perturbations;
  std::vector<std::string> cov_reference;
  uint64_t cov_min_sources = 1;
  bool cov_tsv = false;
  coverage->add_option("--perturbations", cov_perturbations, "one token per line")->required();
  coverage->add_option("--reference", cov_reference, "reference corpus files")->required();
  coverage->add_option("--min-sources", cov_min_sources, "minimum distinct sources")
      ->capture_default_str();
  coverage->add_flag("--tsv", cov_tsv, "reference is text<TAB>source-id");

  auto* precision = eval->add_subcommand("precision", "precision under random perturbation");
  std::string prec_index, prec_inputs, prec_label, prec_fractions = "0,0.25,0.5";
  ScorerFlags prec_scorer;
  int prec_k = 1, prec_d = 1;
  uint64_t prec_seed = kDefaultSeed;
  precision->add_option("--index", prec_index, "index file (default $ANTHRO_INDEX)");
  add_scorer_flags(precision, prec_scorer);
  precision->add_option("--inputs", prec_inputs, "label<TAB>text file")->required();
  precision->add_option("--positive-label", prec_label, "label of the positive class")->required();
  precision->add_option("--k", prec_k, "phonetic level")->capture_default_str();
  precision->add_option("--d", prec_d, "max edit distance")->capture_default_str();
  precision->add_option("--fractions", prec_fractions, "comma-separated word fractions")
      ->capture_default_str();
  precision->add_option("--seed", prec_seed, "sampling seed")->capture_default_str();

  // train
  auto* train = app.add_subcommand("train", "train a naive-Bayes model for local:MODEL");
  std::string train_data, train_out, train_features = "surface";
  int train_k = 1;
  NaiveBayesConfig train_cfg;
  std::string train_augment_index, train_augment_label;
  double train_ratio = 1.0;
  train->add_option("--data", train_data, "label<TAB>text file")->required();
  train->add_option("--out", train_out, "model file")->required();
  train->add_option("--features", train_features, "surface or phonetic")->capture_default_str();
  train->add_option("--k", train_k, "level of phonetic features")->capture_default_str();
  train->add_flag("--case-sensitive", train_cfg.case_sensitive, "keep token case");
  train->add_option("--smoothing", train_cfg.smoothing, "additive smoothing")->capture_default_str();
  train->add_option("--augment-index", train_augment_index,
                    "self-attack with this index and retrain on the augmented data");
  train->add_option("--augment-label", train_augment_label, "only attack examples of this label");
  train->add_option("--augment-ratio", train_ratio, "adversarial examples per example")
      ->capture_default_str();

  // serve-stub
  auto* serve = app.add_subcommand("serve-stub", "serve a local model over the wire protocol");
  std::string serve_scorer;
  StubServerOptions serve_opts;
  serve_opts.port = 8080;
  serve->add_option("--scorer", serve_scorer, "local:MODEL")->required();
  serve->add_option("--host", serve_opts.host, "bind address")->capture_default_str();
  serve->add_option("--port", serve_opts.port, "port, 0 for any free port")->capture_default_str();
  serve->add_option("--path", serve_opts.path, "endpoint path")->capture_default_str();
  serve->add_option("--max-batch", serve_opts.max_batch, "reject larger batches with 413 (0: no limit)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*mine) {
      std::optional<VisualFoldTable> table_slot;
      const auto& table = fold_table(mine_table, table_slot);
      CorpusCounter counter;
      uint64_t line_no = 0;
      for (const auto& path : mine_inputs) {
        const std::string text = read_input(path);
        std::istringstream in(text);
        ingest_into(in, {.tsv = mine_tsv}, counter, line_no);
        line_no += static_cast<uint64_t>(std::count(text.begin(), text.end(), '\n')) + 1;
      }
      const auto records = counter.records();
      const auto index = PerturbationIndex::build(records, mine_params, table);
      write_output(mine_output, index.serialize());
      std::cout << "tokens\t" << index.token_count() << "\n";
      for (int k = 0; k <= index.max_level(); ++k) {
        std::cout << "level\t" << k << "\tbuckets\t" << index.bucket_count(k) << "\n";
      }
    } else if (*query) {
      std::optional<VisualFoldTable> table_slot;
      const auto index =
          PerturbationIndex::load(resolve_index_path(query_index), fold_table(query_table, table_slot));
      if (query_k < 0 || query_k > index.max_level() || query_d < 0) {
        throw UsageError("--k must be within 0.." + std::to_string(index.max_level()) +
                         " and --d non-negative");
      }
      for (const auto& e : index.retrieve({query_word, query_k, query_d})) {
        std::cout << e.token << "\t" << e.frequency << "\n";
      }
    } else if (*attack_cmd) {
      const auto index = PerturbationIndex::load(resolve_index_path(attack_index));
      const auto scorer = open_scorer(attack_scorer.scorer, attack_scorer.labels);
      const auto cfg = make_config(attack_flags, parse_mode(attack_flags.mode));
      const auto examples = load_examples(attack_inputs, *scorer);
      const NormalizedScorer defended(
          *scorer, as_usage([&] { return NormalizerStack(stages_flag(attack_stages), load_dictionary(attack_dict)); }));
      const auto result = run_campaign(defended, examples, cfg, index);
      std::string report;
      for (const auto& o : result.outcomes) (report += to_json_line(o)) += '\n';
      write_output(attack_out, report);
      std::cerr << "correct " << result.n_correct_pre << ", flipped " << result.n_flipped
                << ", excluded " << result.n_excluded << ", mean queries "
                << format_double(result.mean_queries) << "\n";
      const double rate = atk_rate(result);
      std::cerr << "atk_rate " << format_double(rate) << "\n";
    } else if (*norm) {
      const auto stack = as_usage(
          [&] { return NormalizerStack(stages_flag(norm_stages), load_dictionary(norm_dict), norm_d); });
      std::string out;
      for (const auto& line : split_lines(read_input(norm_input))) (out += stack.apply(line)) += '\n';
      write_output(norm_output, out);
    } else if (*grid) {
      const auto index = PerturbationIndex::load(resolve_index_path(grid_index));
      const auto scorer = open_scorer(grid_scorer.scorer, grid_scorer.labels);
      const auto examples = load_examples(grid_inputs, *scorer);
      std::vector<NamedAttack> attacks;
      for (const auto& m : split_list(grid_modes)) attacks.push_back({m, make_config(grid_flags, parse_mode(m))});
      const auto dict = load_dictionary(grid_dict);
      std::vector<NamedDefense> defenses;
      for (const auto& d : split_list(grid_defenses, ';')) {
        const auto stages = stages_flag(d);
        defenses.push_back({stages_name(stages), scorer.get(),
                            as_usage([&] { return NormalizerStack(stages, dict); })});
      }
      write_output(grid_out, grid_tsv(defense_grid(attacks, defenses, examples, index)));
    } else if (*coverage) {
      CorpusCounter counter;
      uint64_t line_no = 0;
      for (const auto& path : cov_reference) {
        const std::string text = read_input(path);
        std::istringstream in(text);
        ingest_into(in, {.tsv = cov_tsv}, counter, line_no);
        line_no += static_cast<uint64_t>(std::count(text.begin(), text.end(), '\n')) + 1;
      }
      std::vector<std::string> perturbations;
      for (auto& line : split_lines(read_input(cov_perturbations))) {
        if (!line.empty()) perturbations.push_back(std::move(line));
      }
      const auto records = counter.records();
      const auto c = wild_coverage(perturbations, records, cov_min_sources);
      nlohmann::ordered_json j;
      j["fraction"] = c.fraction;
      j["matched"] = c.matched;
      j["total"] = c.total;
      std::cout << j.dump() << "\n";
    } else if (*precision) {
      const auto index = PerturbationIndex::load(resolve_index_path(prec_index));
      const auto scorer = open_scorer(prec_scorer.scorer, prec_scorer.labels);
      const auto& names = scorer->label_names();
      const auto it = std::find(names.begin(), names.end(), prec_label);
      if (it == names.end()) throw UsageError("positive label unknown to the scorer: " + prec_label);
      const size_t positive = static_cast<size_t>(it - names.begin());
      std::vector<std::string> positives;
      for (const auto& ex : load_examples(prec_inputs, *scorer)) {
        if (ex.label == positive) positives.push_back(ex.text);
      }
      std::vector<double> fractions;
      for (const auto& f : split_list(prec_fractions)) {
        try {
          fractions.push_back(std::stod(f));
        } catch (const std::exception&) {
          throw UsageError("bad fraction: " + f);
        }
      }
      std::string out = "fraction\tprecision\n";
      for (const auto& p : precision_under_perturbation(*scorer, positives, positive, index, prec_k,
                                                        prec_d, fractions, prec_seed)) {
        out += format_double(p.fraction) + "\t" + format_double(p.precision) + "\n";
      }
      std::cout << out;
    } else if (*train) {
      std::istringstream in(read_input(train_data));
      auto data = LabeledDataset::parse_tsv(in);
      FeatureKind kind;
      if (train_features == "surface") kind = FeatureKind::kSurface;
      else if (train_features == "phonetic") kind = FeatureKind::kPhonetic;
      else throw UsageError("features must be surface or phonetic");
      auto model = train_naive_bayes(data, kind, train_k, train_cfg);
      if (!train_augment_index.empty()) {
        if (!fs::exists(train_augment_index)) {
          throw UsageError("index file not found: " + train_augment_index);
        }
        const auto index = PerturbationIndex::load(train_augment_index);
        std::optional<size_t> target;
        if (!train_augment_label.empty()) {
          const size_t id = data.find_label(train_augment_label);
          if (id >= data.labels().size()) throw UsageError("unknown label: " + train_augment_label);
          target = id;
        }
        const auto augmented = augment_adversarial(data, index, model,
                                                   {.mode = AttackMode::kAnthro, .k = train_k},
                                                   train_ratio, target);
        std::cerr << "augmented " << data.size() << " -> " << augmented.size() << " examples\n";
        model = train_naive_bayes(augmented, kind, train_k, train_cfg);
      }
      write_output(train_out, model.to_json());
      std::cerr << "labels " << model.label_names().size() << ", vocabulary "
                << model.vocabulary_size() << "\n";
    } else if (*serve) {
      if (serve_scorer.rfind("local:", 0) != 0) throw UsageError("serve-stub needs --scorer local:MODEL");
      const auto scorer = open_scorer(serve_scorer, "");
      StubServer server(*scorer, serve_opts);
      server.bind();
      std::cout << "listening on " << server.url() << std::endl;
      server.run();
    }
  } catch (const UsageError& e) {
    std::cerr << "anthro: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "anthro: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "anthro: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
