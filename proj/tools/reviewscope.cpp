// Command-line front end: one subcommand per pipeline stage plus `pipeline`
// (all stages) and `project` (PCA coordinates of a vector store).
//
// Exit codes: 0 success, 1 usage or configuration error, 2 stage failure.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reviewscope/config.hpp"
#include "reviewscope/error.hpp"
#include "reviewscope/pipeline.hpp"

namespace fs = std::filesystem;
using namespace reviewscope;

namespace {

constexpr int kUsageError = 1;
constexpr int kStageFailure = 2;

void print_counts(const StageCounts& counts) {
  for (const auto& [key, value] : counts) std::cout << key << " = " << value << '\n';
}

// Pipeline keys exposed as --flags; underscores become dashes.
const std::vector<std::string> kPipelineKeys = {
    "corpus",          "output_dir",      "tokenizer_vocab", "min_tokens",   "max_tokens",
    "per_label",       "seed",            "cleaning_config", "lexicon",      "sidecar",
    "sentiment_remote", "keep",           "provider",        "k",            "density_threshold",
    "min_size",        "max_depth",       "split_arity",     "density_mode", "benchmark_train",
    "benchmark_test",  "benchmark_modes", "learning_rate",   "epochs",       "l2",
    "projection",
};

std::string dashed(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

std::pair<std::string, std::string> split_assignment(const std::string& text, const std::string& flag) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(flag + " expects NAME=VALUE, got \"" + text + "\"");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reviewscope: sentiment-gated keyphrase topic mining for product reviews"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Load review lines, filter by token length, optionally sample");
  std::string ingest_in, ingest_out;
  IngestOptions ingest_opts;
  ingest->add_option("--input", ingest_in, "Review file (one JSON record per line)")->required();
  ingest->add_option("--output", ingest_out, "Output review file")->required();
  ingest->add_option("--min-tokens", ingest_opts.min_tokens, "Inclusive lower token bound")->capture_default_str();
  ingest->add_option("--max-tokens", ingest_opts.max_tokens, "Inclusive upper token bound")->capture_default_str();
  ingest->add_option("--per-label", ingest_opts.per_label, "Reviews drawn per rating; 0 keeps all")->capture_default_str();
  ingest->add_option("--seed", ingest_opts.seed, "Sampling seed")->capture_default_str();
  ingest->add_option("--vocab", ingest_opts.tokenizer_vocab, "Wordpiece vocabulary for token counting");

  // clean
  auto* clean = app.add_subcommand("clean", "Clean reviews and split them into sentences");
  std::string clean_in, clean_out, clean_cfg;
  clean->add_option("--input", clean_in, "Review file")->required();
  clean->add_option("--output", clean_out, "Sentence file")->required();
  clean->add_option("--cleaning-config", clean_cfg, "Cleaning config (key = value)");

  // sentiment
  auto* sentiment = app.add_subcommand("sentiment", "Score sentences and keep the selected classes");
  std::string sent_in, sent_out, sent_lexicon, sent_sidecar, sent_remote, sent_keep = "negative,neutral,positive";
  sentiment->add_option("--input", sent_in, "Sentence file")->required();
  sentiment->add_option("--output", sent_out, "Scored sentence file")->required();
  auto* lex_opt = sentiment->add_option("--lexicon", sent_lexicon, "word<TAB>valence lexicon");
  auto* side_opt = sentiment->add_option("--sidecar", sent_sidecar, "review_id<TAB>index<TAB>score file");
  auto* remote_opt = sentiment->add_option("--remote", sent_remote, "Base URL of a /score endpoint");
  lex_opt->excludes(side_opt)->excludes(remote_opt);
  side_opt->excludes(remote_opt);
  sentiment->add_option("--keep", sent_keep, "Classes to keep, comma-separated, or none")->capture_default_str();

  // extract
  auto* extract = app.add_subcommand("extract", "Select the top-k keyphrases of every sentence");
  std::string ext_in, ext_out, ext_provider = "test:0";
  std::size_t ext_k = 3;
  extract->add_option("--input", ext_in, "Scored sentence file")->required();
  extract->add_option("--output", ext_out, "Keyphrase file")->required();
  extract->add_option("--provider", ext_provider, "test:<seed>[:<dim>] | store:<path> | remote[:<url>]")
      ->capture_default_str();
  extract->add_option("--k", ext_k, "Keyphrases per sentence")->capture_default_str()->check(CLI::PositiveNumber);

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Recursively cluster keyphrases and build the topic dictionary");
  std::string cl_in, cl_topics, cl_dict, cl_vectors, cl_provider = "test:0", cl_mode = "mean";
  ClusterParams cl_params;
  cluster->add_option("--input", cl_in, "Keyphrase file")->required();
  cluster->add_option("--topics", cl_topics, "Topic output file")->required();
  cluster->add_option("--dictionary", cl_dict, "Dictionary output file")->required();
  cluster->add_option("--vectors", cl_vectors, "Also save phrase vectors as an embedding store");
  cluster->add_option("--provider", cl_provider, "Embedding provider")->capture_default_str();
  cluster->add_option("--density-threshold", cl_params.density_threshold, "Acceptance density")->capture_default_str();
  cluster->add_option("--min-size", cl_params.min_size, "Minimum accepted cluster size")->capture_default_str();
  cluster->add_option("--max-depth", cl_params.max_depth, "Recursion depth limit")->capture_default_str();
  cluster->add_option("--split-arity", cl_params.split_arity, "Groups per split")->capture_default_str();
  cluster->add_option("--density-mode", cl_mode, "mean | min")->capture_default_str();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Benchmark dictionaries as classification vocabularies");
  std::string ev_train, ev_test, ev_out, ev_table, ev_modes = "tfidf,count,one-hot";
  std::vector<std::string> ev_dicts, ev_topics;
  TrainingParams ev_params;
  evaluate->add_option("--train", ev_train, "Training corpus (label<TAB>text)")->required();
  evaluate->add_option("--test", ev_test, "Test corpus (label<TAB>text)")->required();
  evaluate->add_option("--dictionary", ev_dicts, "METHOD=PATH, repeatable")->required();
  evaluate->add_option("--topic-count", ev_topics, "METHOD=N, repeatable");
  evaluate->add_option("--modes", ev_modes, "Vectorizers, comma-separated")->capture_default_str();
  evaluate->add_option("--learning-rate", ev_params.learning_rate, "Gradient step")->capture_default_str();
  evaluate->add_option("--epochs", ev_params.epochs, "Full-batch epochs")->capture_default_str();
  evaluate->add_option("--l2", ev_params.l2, "L2 penalty")->capture_default_str();
  evaluate->add_option("--output", ev_out, "Report CSV")->required();
  evaluate->add_option("--table", ev_table, "Per-method table CSV");

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage end to end");
  std::string pl_config;
  std::vector<std::string> pl_set;
  std::map<std::string, std::string> pl_flags;
  pipeline->add_option("--config", pl_config, "Pipeline config (key = value)");
  pipeline->add_option("--set", pl_set, "KEY=VALUE override, repeatable");
  for (const auto& key : kPipelineKeys) pipeline->add_option("--" + dashed(key), pl_flags[key], "Overrides `" + key + "`");

  // project
  auto* project = app.add_subcommand("project", "Write 2-D PCA coordinates of an embedding store");
  std::string pr_store, pr_out;
  project->add_option("--store", pr_store, "Embedding store")->required();
  project->add_option("--output", pr_out, "Coordinate CSV (key,x,y)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*ingest) {
      print_counts(ingest_stage(ingest_in, ingest_out, ingest_opts));
    } else if (*clean) {
      const CleaningConfig cfg = clean_cfg.empty() ? CleaningConfig{} : CleaningConfig::load(clean_cfg);
      print_counts(clean_stage(clean_in, clean_out, cfg));
    } else if (*sentiment) {
      std::string binding;
      if (!sent_lexicon.empty()) binding = "lexicon:" + sent_lexicon;
      if (!sent_sidecar.empty()) binding = "sidecar:" + sent_sidecar;
      if (!sent_remote.empty()) binding = "remote:" + sent_remote;
      if (binding.empty()) throw ConfigError("one of --lexicon, --sidecar, --remote is required");
      const auto keep = parse_keep_set(sent_keep);
      std::unique_ptr<SentimentScorer> scorer;
      try {
        scorer = make_scorer(binding);
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        throw StageError("sentiment", e.what());
      }
      print_counts(sentiment_stage(sent_in, sent_out, *scorer, keep));
    } else if (*extract) {
      const auto provider = make_provider(ext_provider);
      print_counts(extract_stage(ext_in, ext_out, *provider, ext_k));
    } else if (*cluster) {
      cl_params.density_mode = parse_density_mode(cl_mode);
      cl_params.validate();
      const auto provider = make_provider(cl_provider);
      print_counts(cluster_stage(cl_in, cl_topics, cl_dict, *provider, cl_params, cl_vectors));
    } else if (*evaluate) {
      std::vector<NamedDictionary> dicts;
      for (const auto& d : ev_dicts) {
        auto [method, path] = split_assignment(d, "--dictionary");
        dicts.push_back(NamedDictionary{method, path, 0});
      }
      for (const auto& t : ev_topics) {
        auto [method, n] = split_assignment(t, "--topic-count");
        auto it = std::find_if(dicts.begin(), dicts.end(), [&](const auto& d) { return d.method == method; });
        if (it == dicts.end()) throw ConfigError("--topic-count names unknown method \"" + method + "\"");
        const long long count = parse_integer("--topic-count", n);
        if (count < 0) throw ConfigError("--topic-count must be >= 0");
        it->topic_count = static_cast<std::size_t>(count);
      }
      print_counts(evaluate_stage(ev_train, ev_test, dicts, parse_vectorizer_modes(ev_modes), ev_params, ev_out,
                                  ev_table));
    } else if (*pipeline) {
      PipelineConfig config = pl_config.empty() ? PipelineConfig{} : PipelineConfig::load(pl_config);
      for (const auto& s : pl_set) {
        auto [key, value] = split_assignment(s, "--set");
        config.set(key, value);
      }
      for (const auto& key : kPipelineKeys) {
        if (pipeline->count("--" + dashed(key)) > 0) config.set(key, pl_flags[key]);
      }
      const PipelineResult result = run_pipeline(config);
      print_counts(result.counts);
      std::cout << "manifest = " << result.manifest.string() << '\n';
    } else if (*project) {
      print_counts(project_stage(pr_store, pr_out));
    }
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kStageFailure;
  }
  return 0;
}
