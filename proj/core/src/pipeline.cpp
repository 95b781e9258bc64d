#include "reviewscope/pipeline.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_set>

#include "reviewscope/config.hpp"
#include "reviewscope/corpus.hpp"
#include "reviewscope/error.hpp"

namespace reviewscope {

namespace fs = std::filesystem;

namespace {

std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc() ? std::string(buf, end) : std::to_string(v);
}

std::size_t parse_count(const std::string& key, const std::string& value, long long minimum) {
  const long long v = parse_integer(key, value);
  if (v < minimum) throw ConfigError(key + " must be >= " + std::to_string(minimum));
  return static_cast<std::size_t>(v);
}

fs::path resolve(const fs::path& base_dir, const std::string& value) {
  fs::path p = value;
  if (p.empty() || p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write " + path.string());
  return out;
}

void add(StageCounts& counts, const std::string& key, std::size_t value) {
  counts.emplace_back(key, std::to_string(value));
}

// Runs body, rethrowing any failure as StageError(stage, cause).
template <typename Body>
StageCounts in_stage(const std::string& stage, Body&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& value, const fs::path& base_dir) {
  if (key == "corpus") {
    corpus = resolve(base_dir, value);
  } else if (key == "output_dir") {
    output_dir = resolve(base_dir, value);
  } else if (key == "tokenizer_vocab") {
    tokenizer_vocab = resolve(base_dir, value);
  } else if (key == "min_tokens") {
    min_tokens = parse_count(key, value, 1);
  } else if (key == "max_tokens") {
    max_tokens = parse_count(key, value, 1);
  } else if (key == "per_label") {
    per_label = parse_count(key, value, 0);
  } else if (key == "seed") {
    seed = parse_count(key, value, 0);
  } else if (key == "cleaning_config") {
    cleaning_config = resolve(base_dir, value);
  } else if (key == "lexicon") {
    lexicon = resolve(base_dir, value);
  } else if (key == "sidecar") {
    sidecar = resolve(base_dir, value);
  } else if (key == "sentiment_remote") {
    sentiment_remote = value;
  } else if (key == "keep") {
    keep = parse_keep_set(value);
  } else if (key == "provider") {
    if (value.rfind("store:", 0) == 0) {
      provider = "store:" + resolve(base_dir, value.substr(6)).string();
    } else {
      provider = value;
    }
  } else if (key == "k") {
    k = parse_count(key, value, 1);
  } else if (key == "density_threshold") {
    cluster.density_threshold = parse_real(key, value);
  } else if (key == "min_size") {
    cluster.min_size = parse_count(key, value, 1);
  } else if (key == "max_depth") {
    cluster.max_depth = parse_count(key, value, 1);
  } else if (key == "split_arity") {
    cluster.split_arity = parse_count(key, value, 2);
  } else if (key == "density_mode") {
    cluster.density_mode = parse_density_mode(value);
  } else if (key == "benchmark_train") {
    benchmark_train = resolve(base_dir, value);
  } else if (key == "benchmark_test") {
    benchmark_test = resolve(base_dir, value);
  } else if (key == "benchmark_modes") {
    benchmark_modes = parse_vectorizer_modes(value);
  } else if (key == "learning_rate") {
    training.learning_rate = parse_real(key, value);
  } else if (key == "epochs") {
    training.epochs = parse_count(key, value, 0);
  } else if (key == "l2") {
    training.l2 = parse_real(key, value);
  } else if (key == "projection") {
    projection = parse_bool(key, value);
  } else if (key.rfind("dictionary.", 0) == 0 || key.rfind("topics.", 0) == 0) {
    const bool is_path = key[0] == 'd';
    const std::string method = key.substr(key.find('.') + 1);
    if (method.empty()) throw ConfigError("missing method name in \"" + key + "\"");
    auto it = std::find_if(extra_dictionaries.begin(), extra_dictionaries.end(),
                           [&](const NamedDictionary& d) { return d.method == method; });
    if (it == extra_dictionaries.end()) {
      extra_dictionaries.push_back(NamedDictionary{method, {}, 0});
      it = std::prev(extra_dictionaries.end());
    }
    if (is_path) {
      it->path = resolve(base_dir, value);
    } else {
      it->topic_count = parse_count(key, value, 0);
    }
  } else {
    throw ConfigError("unknown config key \"" + key + "\"");
  }
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  const KeyValueFile file = KeyValueFile::load(path);
  PipelineConfig config;
  for (const auto& [key, value] : file.entries()) config.set(key, value, file.base_dir());
  return config;
}

std::string PipelineConfig::scorer_binding() const {
  if (!sidecar.empty()) return "sidecar:" + sidecar.string();
  if (!lexicon.empty()) return "lexicon:" + lexicon.string();
  if (!sentiment_remote.empty()) return "remote:" + sentiment_remote;
  return {};
}

void PipelineConfig::validate() const {
  auto require_file = [](const fs::path& p, const std::string& what) {
    if (!fs::is_regular_file(p)) throw ConfigError(what + " not found: " + p.string());
  };
  if (corpus.empty()) throw ConfigError("corpus is not set");
  require_file(corpus, "corpus");
  if (output_dir.empty()) throw ConfigError("output_dir is not set");
  if (!tokenizer_vocab.empty()) require_file(tokenizer_vocab, "tokenizer vocabulary");
  if (min_tokens < 1 || min_tokens > max_tokens) throw ConfigError("need 1 <= min_tokens <= max_tokens");
  if (!cleaning_config.empty()) require_file(cleaning_config, "cleaning config");
  const int sources = int(!lexicon.empty()) + int(!sidecar.empty()) + int(!sentiment_remote.empty());
  if (sources != 1) throw ConfigError("set exactly one of lexicon, sidecar, sentiment_remote");
  if (!lexicon.empty()) require_file(lexicon, "lexicon");
  if (!sidecar.empty()) require_file(sidecar, "sidecar");
  if (provider.rfind("store:", 0) == 0) require_file(provider.substr(6), "embedding store");
  if (k < 1) throw ConfigError("k must be >= 1");
  cluster.validate();
  if (benchmark_train.empty() != benchmark_test.empty()) {
    throw ConfigError("benchmark_train and benchmark_test must be set together");
  }
  if (!benchmark_train.empty()) {
    require_file(benchmark_train, "benchmark training corpus");
    require_file(benchmark_test, "benchmark test corpus");
    if (benchmark_modes.empty()) throw ConfigError("benchmark_modes is empty");
    if (!(training.learning_rate > 0) || training.l2 < 0) throw ConfigError("need learning_rate > 0 and l2 >= 0");
    for (const auto& d : extra_dictionaries) {
      if (d.path.empty()) throw ConfigError("dictionary." + d.method + " is not set");
      require_file(d.path, "dictionary " + d.method);
    }
  } else if (!extra_dictionaries.empty()) {
    throw ConfigError("external dictionaries need benchmark_train and benchmark_test");
  }
}

std::map<std::string, std::string> PipelineConfig::echo() const {
  std::map<std::string, std::string> out;
  out["corpus"] = corpus.string();
  out["tokenizer_vocab"] = tokenizer_vocab.string();
  out["min_tokens"] = std::to_string(min_tokens);
  out["max_tokens"] = std::to_string(max_tokens);
  out["per_label"] = std::to_string(per_label);
  out["seed"] = std::to_string(seed);
  out["cleaning_config"] = cleaning_config.string();
  out["lexicon"] = lexicon.string();
  out["sidecar"] = sidecar.string();
  out["sentiment_remote"] = sentiment_remote;
  out["keep"] = format_keep_set(keep);
  out["provider"] = provider;
  out["k"] = std::to_string(k);
  out["density_threshold"] = format_real(cluster.density_threshold);
  out["min_size"] = std::to_string(cluster.min_size);
  out["max_depth"] = std::to_string(cluster.max_depth);
  out["split_arity"] = std::to_string(cluster.split_arity);
  out["density_mode"] = std::string(to_string(cluster.density_mode));
  out["benchmark_train"] = benchmark_train.string();
  out["benchmark_test"] = benchmark_test.string();
  std::vector<std::string> modes;
  for (auto m : benchmark_modes) modes.emplace_back(to_string(m));
  out["benchmark_modes"] = join(modes, ",");
  out["learning_rate"] = format_real(training.learning_rate);
  out["epochs"] = std::to_string(training.epochs);
  out["l2"] = format_real(training.l2);
  out["projection"] = projection ? "on" : "off";
  for (const auto& d : extra_dictionaries) {
    out["dictionary." + d.method] = d.path.string();
    out["topics." + d.method] = std::to_string(d.topic_count);
  }
  return out;
}

StageCounts ingest_stage(const fs::path& input, const fs::path& output, const IngestOptions& options) {
  return in_stage("ingest", [&] {
    const ReviewLoadResult loaded = load_reviews(input);
    std::unique_ptr<Tokenizer> tokenizer;
    if (options.tokenizer_vocab.empty()) {
      tokenizer = std::make_unique<WordTokenizer>();
    } else {
      tokenizer = std::make_unique<WordpieceTokenizer>(WordpieceTokenizer::load(options.tokenizer_vocab));
    }
    ReviewCorpus kept = filter_by_token_length(loaded.corpus, *tokenizer, options.min_tokens, options.max_tokens);
    const std::size_t in_range = kept.size();
    if (options.per_label > 0) kept = stratified_sample(kept, options.per_label, options.seed);
    write_reviews(kept, output);
    StageCounts counts;
    add(counts, "reviews_loaded", loaded.corpus.size());
    add(counts, "reviews_skipped", loaded.skipped);
    add(counts, "reviews_in_length_range", in_range);
    add(counts, "reviews", kept.size());
    return counts;
  });
}

StageCounts clean_stage(const fs::path& reviews, const fs::path& sentences, const CleaningConfig& config) {
  return in_stage("clean", [&] {
    const ReviewLoadResult loaded = load_reviews(reviews);
    std::vector<Sentence> all;
    for (const Review& r : loaded.corpus.documents) {
      for (auto& s : split_sentences(clean_text(r.text, config), config, r.id)) all.push_back(std::move(s));
    }
    auto out = open_output(sentences);
    write_sentences(all, out);
    StageCounts counts;
    add(counts, "sentences", all.size());
    return counts;
  });
}

StageCounts sentiment_stage(const fs::path& sentences, const fs::path& output, const SentimentScorer& scorer,
                            const std::set<SentimentClass>& keep) {
  return in_stage("sentiment", [&] {
    auto in = open_input(sentences);
    const std::vector<Sentence> all = parse_sentences(in);
    const std::vector<ScoredSentence> scored = gate_sentences(all, scorer, all_sentiment_classes());
    std::vector<ScoredSentence> kept;
    std::size_t per_class[3] = {0, 0, 0};
    for (const auto& s : scored) {
      ++per_class[static_cast<int>(s.sentiment)];
      if (keep.contains(s.sentiment)) kept.push_back(s);
    }
    auto out = open_output(output);
    write_scored_sentences(kept, out);
    out.close();
    if (kept.empty()) throw GatingError("no sentences retained");
    StageCounts counts;
    add(counts, "sentences_negative", per_class[0]);
    add(counts, "sentences_neutral", per_class[1]);
    add(counts, "sentences_positive", per_class[2]);
    add(counts, "gated_sentences", kept.size());
    return counts;
  });
}

StageCounts extract_stage(const fs::path& scored_sentences, const fs::path& keyphrases,
                          const EmbeddingProvider& provider, std::size_t k) {
  return in_stage("extract", [&] {
    auto in = open_input(scored_sentences);
    std::vector<Sentence> sentences;
    for (auto& s : parse_scored_sentences(in)) sentences.push_back(std::move(s.sentence));
    ExtractOptions options;
    options.k = k;
    std::vector<Keyphrase> all;
    for (auto& per_sentence : extract_keyphrases(sentences, provider, options)) {
      for (auto& kp : per_sentence) all.push_back(std::move(kp));
    }
    auto out = open_output(keyphrases);
    write_keyphrases(all, out);
    std::unordered_set<std::string> distinct;
    for (const auto& kp : all) distinct.insert(kp.text);
    StageCounts counts;
    add(counts, "keyphrases", all.size());
    add(counts, "distinct_phrases", distinct.size());
    return counts;
  });
}

StageCounts cluster_stage(const fs::path& keyphrases, const fs::path& topics, const fs::path& dictionary,
                          const EmbeddingProvider& provider, const ClusterParams& params, const fs::path& vectors_out) {
  return in_stage("cluster", [&] {
    auto in = open_input(keyphrases);
    std::vector<std::string> texts;
    std::unordered_set<std::string> seen;
    for (const auto& kp : parse_keyphrases(in)) {
      if (seen.insert(kp.text).second) texts.push_back(kp.text);
    }
    std::vector<EmbeddingVector> vectors = provider.embed(texts);
    if (vectors.size() != texts.size()) throw EmbeddingError("provider returned a misaligned vector list");
    if (!vectors_out.empty() && !vectors.empty()) {
      EmbeddingStore store(vectors.front().dim());
      for (std::size_t i = 0; i < texts.size(); ++i) store.add(texts[i], vectors[i]);
      write_store(store, vectors_out);
    }
    std::vector<PhraseVector> phrases;
    phrases.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) phrases.push_back(PhraseVector{texts[i], std::move(vectors[i])});
    const ClusteringResult result = recursive_cluster(std::move(phrases), params);
    const TopicDictionary dict = build_dictionary(result.accepted);
    {
      auto out = open_output(topics);
      write_topics(result, out);
    }
    {
      auto out = open_output(dictionary);
      write_dictionary(dict, out);
    }
    std::size_t accepted_phrases = 0;
    for (const auto& c : result.accepted) accepted_phrases += c.members.size();
    StageCounts counts;
    add(counts, "clustered_phrases", texts.size());
    add(counts, "accepted_clusters", result.accepted.size());
    add(counts, "outlier_clusters", result.outliers.size());
    add(counts, "accepted_phrases", accepted_phrases);
    add(counts, "outlier_phrases", texts.size() - accepted_phrases);
    add(counts, "dictionary_words", dict.vocabulary_size());
    return counts;
  });
}

StageCounts evaluate_stage(const fs::path& train, const fs::path& test, const std::vector<NamedDictionary>& dictionaries,
                           const std::vector<VectorizerMode>& modes, const TrainingParams& params,
                           const fs::path& report_csv, const fs::path& report_table) {
  return in_stage("evaluate", [&] {
    const LabeledCorpus train_corpus = load_labeled(train);
    const LabeledCorpus test_corpus = load_labeled(test);
    std::vector<TopicDictionary> dicts;
    for (const auto& d : dictionaries) dicts.push_back(load_dictionary(d.path, d.topic_count, d.method));
    const BenchmarkReport report = run_benchmark(train_corpus, test_corpus, dicts, modes, params);
    {
      auto out = open_output(report_csv);
      write_report_csv(report, out);
    }
    if (!report_table.empty()) {
      auto out = open_output(report_table);
      write_report_table(report, out);
    }
    std::size_t failed = 0;
    for (const auto& c : report.cells) failed += c.accuracy ? 0 : 1;
    StageCounts counts;
    add(counts, "benchmark_cells", report.cells.size());
    add(counts, "benchmark_failed_cells", failed);
    return counts;
  });
}

StageCounts project_stage(const fs::path& store_path, const fs::path& output) {
  return in_stage("project", [&] {
    const EmbeddingStore store = load_store(store_path);
    std::vector<EmbeddingVector> vectors;
    for (const auto& [key, v] : store.entries()) vectors.push_back(v);
    std::vector<Point2> points;
    try {
      points = pca_project_2d(vectors);
    } catch (const ProjectionError& e) {
      throw ProjectionError(store_path.string() + ": " + e.what());
    }
    auto out = open_output(output);
    std::ostringstream line;
    line << std::fixed << std::setprecision(6);
    out << "key,x,y\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      line.str({});
      line << csv_field(store.entries()[i].first) << ',' << points[i].x << ',' << points[i].y << '\n';
      out << line.str();
    }
    StageCounts counts;
    add(counts, "projected_points", points.size());
    return counts;
  });
}

namespace {

void write_manifest(const fs::path& path, const PipelineConfig& config, const StageCounts& counts,
                    const std::string& failure) {
  std::ofstream out(path, std::ios::binary);
  out << "# reviewscope run manifest\n";
  for (const auto& [key, value] : config.echo()) out << "config." << key << " = " << value << '\n';
  for (const auto& [key, value] : counts) out << key << " = " << value << '\n';
  if (failure.empty()) {
    out << "status = ok\n";
  } else {
    out << "status = failed\n";
    out << "error = " << failure << '\n';
  }
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
  config.validate();
  fs::create_directories(config.output_dir);
  const fs::path dir = config.output_dir;
  PipelineResult result;
  result.manifest = dir / artifacts::kManifest;
  StageCounts& counts = result.counts;
  auto append = [&](const StageCounts& more) { counts.insert(counts.end(), more.begin(), more.end()); };

  try {
    IngestOptions ingest{config.min_tokens, config.max_tokens, config.per_label, config.seed, config.tokenizer_vocab};
    append(ingest_stage(config.corpus, dir / artifacts::kReviews, ingest));

    const CleaningConfig cleaning =
        config.cleaning_config.empty() ? CleaningConfig{} : CleaningConfig::load(config.cleaning_config);
    append(clean_stage(dir / artifacts::kReviews, dir / artifacts::kSentences, cleaning));

    std::unique_ptr<SentimentScorer> scorer;
    std::unique_ptr<EmbeddingProvider> provider;
    in_stage("setup", [&] {
      scorer = make_scorer(config.scorer_binding());
      provider = make_provider(config.provider);
      return StageCounts{};
    });
    append(sentiment_stage(dir / artifacts::kSentences, dir / artifacts::kScored, *scorer, config.keep));
    append(extract_stage(dir / artifacts::kScored, dir / artifacts::kKeyphrases, *provider, config.k));
    append(cluster_stage(dir / artifacts::kKeyphrases, dir / artifacts::kTopics, dir / artifacts::kDictionary,
                         *provider, config.cluster,
                         config.projection ? dir / artifacts::kProjectionStore : fs::path{}));

    if (!config.benchmark_train.empty()) {
      std::size_t topic_count = 0;
      for (const auto& [key, value] : counts) {
        if (key == "accepted_clusters") topic_count = std::stoul(value);
      }
      std::vector<NamedDictionary> dictionaries{{"Keyphrase embedding", dir / artifacts::kDictionary, topic_count}};
      dictionaries.insert(dictionaries.end(), config.extra_dictionaries.begin(), config.extra_dictionaries.end());
      append(evaluate_stage(config.benchmark_train, config.benchmark_test, dictionaries, config.benchmark_modes,
                            config.training, dir / artifacts::kReportCsv, dir / artifacts::kReportTable));
    }
    if (config.projection) {
      append(project_stage(dir / artifacts::kProjectionStore, dir / artifacts::kProjection));
    }
  } catch (const StageError& e) {
    write_manifest(result.manifest, config, counts, e.what());
    throw;
  }
  write_manifest(result.manifest, config, counts, {});
  return result;
}

}  // namespace reviewscope
