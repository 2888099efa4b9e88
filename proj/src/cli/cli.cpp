#include "sublink/cli.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "sublink/corpus.hpp"
#include "sublink/error.hpp"
#include "sublink/evaluation.hpp"
#include "sublink/service.hpp"
#include "sublink/training.hpp"

namespace sublink::cli {

namespace {

TokenizationMode parse_mode(const std::string& name) {
  if (name == "agnostic") return TokenizationMode::mention_agnostic;
  if (name == "aware") return TokenizationMode::mention_aware;
  throw Error(ErrorKind::configuration, "unknown tokenizer mode '" + name + "'");
}

CandidatePolicy parse_policy(const std::string& name) {
  if (name == "none") return CandidatePolicy::none;
  if (name == "agnostic") return CandidatePolicy::context_agnostic;
  if (name == "aware") return CandidatePolicy::context_aware;
  throw Error(ErrorKind::configuration, "unknown candidate policy '" + name + "'");
}

StoreKind parse_kind(const std::string& name) {
  if (name == "agnostic") return StoreKind::context_agnostic;
  if (name == "aware") return StoreKind::context_aware;
  throw Error(ErrorKind::configuration, "unknown candidate store kind '" + name + "'");
}

Activation parse_activation(const std::string& name) {
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "softmax") return Activation::softmax;
  throw Error(ErrorKind::configuration, "unknown activation '" + name + "'");
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw Error(ErrorKind::configuration, std::string(flag) + " is required");
}

Lexicon make_lexicon(const PipelineOptions& o) {
  return o.stoplist.empty() ? Lexicon{} : Lexicon::with_stoplist(o.stoplist);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  return out;
}

}  // namespace

std::shared_ptr<const Linker> build_linker(const PipelineOptions& o) {
  require(o.vocab, "--vocab");
  auto vocab = load_vocabulary(o.vocab);
  const auto lexicon = make_lexicon(o);

  std::shared_ptr<const ScoreProvider> provider;
  if (o.provider == "mock") {
    std::unordered_map<std::string, std::vector<SpanAnnotation>> gold_by_text;
    if (!o.mock_gold.empty()) {
      for (auto& doc : read_corpus(o.mock_gold)) gold_by_text[doc.text] = std::move(doc.gold);
    }
    provider = std::make_shared<MockScoreProvider>(vocab, MockConfig{o.mock_q, o.mock_noise, o.seed},
                                                   std::move(gold_by_text));
  } else if (o.provider == "file") {
    require(o.logits_dir, "--logits-dir");
    provider = std::make_shared<FileScoreProvider>(o.logits_dir, vocab.size());
  } else if (o.provider == "head") {
    require(o.weights, "--weights");
    require(o.features_dir, "--features-dir");
    HeadWeights weights(read_matrix(o.weights));
    auto features = std::make_shared<FileFeatureProvider>(o.features_dir, weights.dim());
    provider = std::make_shared<HeadScoreProvider>(std::move(features), std::move(weights));
  } else {
    throw Error(ErrorKind::configuration, "unknown provider '" + o.provider + "'");
  }

  LinkerConfig config;
  config.tokenization = parse_mode(o.tokenizer_mode);
  config.chunking = {o.window, o.overlap};
  config.aggregation.k = o.top_k;
  config.aggregation.activation = parse_activation(o.activation);
  config.aggregation.candidate_policy = parse_policy(o.candidate_policy);
  config.aggregation.lexicon = lexicon;

  std::shared_ptr<const CandidateStore> store;
  if (!o.candidates.empty()) {
    store = std::make_shared<CandidateStore>(
        load_store(o.candidates, parse_kind(o.candidate_kind), StoreOptions{!o.case_insensitive}));
  }
  std::shared_ptr<const RedirectTable> redirects;
  if (!o.redirects.empty()) redirects = std::make_shared<RedirectTable>(load_redirects(o.redirects, vocab));

  return std::make_shared<Linker>(std::move(vocab), std::make_shared<ReferenceTokenizer>(lexicon), provider,
                                  std::move(config), std::move(store), std::move(redirects));
}

LinkStats link_corpus(const PipelineOptions& options, const std::filesystem::path& corpus_path,
                      const std::filesystem::path& output) {
  const auto linker = build_linker(options);
  const auto corpus = read_corpus(corpus_path);
  auto out = open_output(output);

  const auto started = std::chrono::steady_clock::now();
  std::vector<std::vector<AnnotationRecord>> per_doc(corpus.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= corpus.size()) return;
      try {
        const auto prepared = linker->prepare(corpus[i]);
        for (const auto& s : linker->link(prepared)) {
          per_doc[i].push_back({prepared.id, s.span.start, s.span.end, s.span.entity, s.score});
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = corpus.size();
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, corpus.size()));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  LinkStats stats;
  stats.documents = corpus.size();
  for (const auto& records : per_doc) {
    write_records(out, records);
    stats.records += records.size();
  }
  out.flush();
  if (!out) throw Error(ErrorKind::io, "short write to " + output.string());
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return stats;
}

namespace {

void prepare_training_docs(std::vector<AnnotatedDocument>& docs, const PipelineOptions& o) {
  const ReferenceTokenizer tokenizer(make_lexicon(o));
  const auto mode = parse_mode(o.tokenizer_mode);
  for (auto& doc : docs) {
    if (doc.tokens.empty()) doc.tokens = tokenize(tokenizer, doc.text, mode, &doc.gold);
  }
}

int cmd_train(const PipelineOptions& o, const TrainOptions& t, std::ostream& out) {
  require(o.vocab, "--vocab");
  require(o.features_dir, "--features-dir");
  const auto vocab = load_vocabulary(o.vocab);
  auto corpus = read_corpus(t.corpus);
  if (corpus.empty()) throw Error(ErrorKind::configuration, "training corpus " + t.corpus + " is empty");
  prepare_training_docs(corpus, o);
  std::vector<AnnotatedDocument> validation;
  if (!t.validation.empty()) {
    validation = read_corpus(t.validation);
    prepare_training_docs(validation, o);
  }

  const auto shape = read_matrix_shape(std::filesystem::path(o.features_dir) / matrix_file_name(corpus.front().id));
  const FileFeatureProvider features(o.features_dir, shape.cols);

  TrainingConfig config;
  config.learning_rate = t.learning_rate;
  config.epochs = t.epochs;
  config.quota = t.quota;
  config.hard_per_row = t.hard_per_row;
  config.seed = o.seed;
  config.patience = t.patience;
  config.init_scale = t.init_scale;
  config.chunking = {o.window, o.overlap};

  std::optional<HeadWeights> initial;
  if (!t.init_weights.empty()) initial = HeadWeights(read_matrix(t.init_weights));

  const auto result = train_head(features, corpus, vocab, config, validation.empty() ? nullptr : &validation,
                                 initial ? &*initial : nullptr, [&](const EpochReport& e) {
                                   out << "epoch " << e.epoch << ": loss " << e.mean_loss
                                       << ", validation subword F1 " << e.validation_f1
                                       << (e.improved ? " (improved)" : " (no improvement)") << '\n';
                                 });
  if (result.stopped_early) {
    out << "early stop after epoch " << result.epochs.back().epoch << ": no improvement for " << t.patience
        << " epochs\n";
  }
  write_matrix(t.out, result.weights);
  out << "wrote " << result.weights.dim() << "x" << result.weights.vocab_size() << " head to " << t.out << '\n';
  return kExitOk;
}

int cmd_eval(const std::string& gold_path, const std::string& predicted_path, const std::string& mode_name,
             const PipelineOptions& o, std::ostream& out) {
  MatchMode mode;
  if (mode_name == "el") mode = MatchMode::entity_linking;
  else if (mode_name == "md") mode = MatchMode::mention_detection;
  else throw Error(ErrorKind::configuration, "unknown evaluation mode '" + mode_name + "'");

  const auto gold = read_corpus(gold_path);
  bool is_corpus = false;
  auto predicted = read_annotations(predicted_path, &is_corpus);
  if (is_corpus) {
    std::set<std::string> gold_ids, predicted_ids;
    for (const auto& d : gold) gold_ids.insert(d.id);
    for (auto& d : predicted) {
      predicted_ids.insert(d.id);
      d.predicted = std::move(d.gold);
      d.gold.clear();
    }
    for (const auto& id : gold_ids) {
      if (!predicted_ids.contains(id)) {
        throw Error(ErrorKind::alignment, "gold document " + id + " missing from " + predicted_path);
      }
    }
  }

  std::optional<EntityVocabulary> vocab;
  std::optional<RedirectTable> redirects;
  EvaluationOptions options;
  if (!o.vocab.empty()) {
    vocab = load_vocabulary(o.vocab);
    options.vocabulary = &*vocab;
    if (!o.redirects.empty()) {
      redirects = load_redirects(o.redirects, *vocab);
      options.redirects = &*redirects;
    }
  } else if (!o.redirects.empty()) {
    throw Error(ErrorKind::configuration, "--redirects needs --vocab");
  }
  const auto report = score(gold, predicted, mode, options);
  out << format_report_table(report, mode);
  out << format_report_record(report, mode) << '\n';
  return kExitOk;
}

int cmd_project(const std::string& input, const std::string& output, bool case_insensitive, std::ostream& out) {
  const auto store = load_store(input, StoreKind::context_aware, StoreOptions{!case_insensitive});
  const auto projected = project_context_agnostic(store);
  auto file = open_output(output);
  write_store(file, projected);
  out << "projected " << store.entry_count() << " occurrences onto " << projected.entry_count()
      << " surfaces (mean list length " << projected.mean_list_length() << ")\n";
  return kExitOk;
}

int cmd_normalize(const std::string& input, const std::string& output, const PipelineOptions& o,
                  std::ostream& out) {
  require(o.vocab, "--vocab");
  require(o.redirects, "--redirects");
  const auto vocab = load_vocabulary(o.vocab);
  std::size_t dropped = 0;
  const auto table = load_redirects(o.redirects, vocab, &dropped);
  auto records = read_records(input);
  std::size_t changed = 0;
  for (auto& r : records) {
    const auto target = table.resolve(r.entity);
    if (target != r.entity) {
      r.entity = std::string(target);
      ++changed;
    }
  }
  auto file = open_output(output);
  write_records(file, records);
  out << "normalized " << changed << " of " << records.size() << " annotations (" << table.size()
      << " redirects, " << dropped << " pairs dropped)\n";
  return kExitOk;
}

int cmd_serve(const PipelineOptions& o, const std::string& host, int port, const ServiceConfig& config,
              std::ostream& out) {
  auto service = std::make_unique<AnnotationService>(build_linker(o), config);
  if (!service->bind(host, port)) throw Error(ErrorKind::io, "cannot bind " + host + ":" + std::to_string(port));
  out << "listening on " << host << ":" << service->port() << std::endl;
  return service->serve_bound() ? kExitOk : kExitRuntime;
}

void add_pipeline_options(CLI::App& app, PipelineOptions& o) {
  app.add_option("--vocab", o.vocab, "Entity vocabulary file");
  app.add_option("--provider", o.provider, "Score provider: mock, file or head")->capture_default_str();
  app.add_option("--logits-dir", o.logits_dir, "Directory of per-document logit matrices");
  app.add_option("--features-dir", o.features_dir, "Directory of per-document feature matrices");
  app.add_option("--weights", o.weights, "Head weight matrix file");
  app.add_option("--tokenizer-mode", o.tokenizer_mode, "agnostic or aware")->capture_default_str();
  app.add_option("--window", o.window, "Chunk window in subwords")->capture_default_str();
  app.add_option("--overlap", o.overlap, "Overlap between consecutive chunks")->capture_default_str();
  app.add_option("--top-k", o.top_k, "Predictions kept per subword")->capture_default_str();
  app.add_option("--activation", o.activation, "sigmoid or softmax")->capture_default_str();
  app.add_option("--candidate-policy", o.candidate_policy, "none, agnostic or aware")->capture_default_str();
  app.add_option("--candidates", o.candidates, "Candidate store file");
  app.add_option("--candidate-kind", o.candidate_kind, "agnostic or aware store format")->capture_default_str();
  app.add_flag("--case-insensitive", o.case_insensitive, "Lowercase candidate surfaces");
  app.add_option("--stoplist", o.stoplist, "Function-word list, one per line");
  app.add_option("--redirects", o.redirects, "Redirect table (u<TAB>v)");
  app.add_option("--mock-q", o.mock_q, "Mock provider gold probability")->capture_default_str();
  app.add_option("--mock-noise", o.mock_noise, "Mock provider score noise")->capture_default_str();
  app.add_option("--mock-gold", o.mock_gold, "Corpus the mock provider looks gold up in by text");
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app.add_option("--workers", o.workers, "Worker threads for link")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Subword-level entity linking: link, train, evaluate and serve"};
  app.set_config("--config", "", "Read options from a key = value file");
  app.require_subcommand(1);
  app.fallthrough();

  PipelineOptions pipeline;
  add_pipeline_options(app, pipeline);

  std::string input, output;
  auto* link = app.add_subcommand("link", "Link a corpus and write annotation records");
  link->add_option("corpus", input, "Corpus file (JSON lines)")->required();
  link->add_option("output", output, "Annotation output file")->required();

  TrainOptions train_options;
  auto* train = app.add_subcommand("train", "Train head weights over fixed features");
  train->add_option("corpus", train_options.corpus, "Training corpus")->required();
  train->add_option("--out", train_options.out, "Output weight file")->required();
  train->add_option("--validation", train_options.validation, "Validation corpus");
  train->add_option("--init-weights", train_options.init_weights, "Starting weight file");
  train->add_option("--epochs", train_options.epochs)->capture_default_str();
  train->add_option("--lr", train_options.learning_rate, "Head learning rate")->capture_default_str();
  train->add_option("--quota", train_options.quota, "Negatives per step (default min(5000, available))");
  train->add_option("--hard-per-row", train_options.hard_per_row)->capture_default_str();
  train->add_option("--patience", train_options.patience, "Epochs without improvement before stopping; 0 = off")
      ->capture_default_str();
  train->add_option("--init-scale", train_options.init_scale)->capture_default_str();

  std::string gold_path, predicted_path, mode = "el";
  auto* eval = app.add_subcommand("eval", "Score predictions against gold");
  eval->add_option("gold", gold_path, "Gold corpus")->required();
  eval->add_option("predicted", predicted_path, "Annotation records or corpus")->required();
  eval->add_option("--mode", mode, "el or md")->capture_default_str();

  std::string host = "127.0.0.1";
  int port = 8080;
  ServiceConfig service;
  auto* serve = app.add_subcommand("serve", "Run the NIF annotation service");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--kb-prefix", service.kb_prefix)->capture_default_str();
  serve->add_option("--threads", service.threads)->capture_default_str();

  bool case_insensitive = false;
  auto* project = app.add_subcommand("project-candidates", "Project a context-aware store onto surfaces");
  project->add_option("input", input)->required();
  project->add_option("output", output)->required();
  project->add_flag("--lowercase", case_insensitive, "Merge surfaces case-insensitively");

  auto* normalize = app.add_subcommand("normalize-redirects", "Rewrite redirected entities in annotation records");
  normalize->add_option("input", input)->required();
  normalize->add_option("output", output)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (link->parsed()) {
      const auto stats = link_corpus(pipeline, input, output);
      out << "linked " << stats.documents << " documents, " << stats.records << " annotations in " << stats.seconds
          << " s (" << stats.documents_per_second() << " documents/s, "
          << (stats.documents ? stats.seconds / static_cast<double>(stats.documents) : 0.0) << " s/document)\n";
      return kExitOk;
    }
    if (train->parsed()) return cmd_train(pipeline, train_options, out);
    if (eval->parsed()) return cmd_eval(gold_path, predicted_path, mode, pipeline, out);
    if (serve->parsed()) return cmd_serve(pipeline, host, port, service, out);
    if (project->parsed()) return cmd_project(input, output, case_insensitive, out);
    if (normalize->parsed()) return cmd_normalize(input, output, pipeline, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_input_error() ? kExitInput : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitInput;
}

}  // namespace sublink::cli
