#include "attex/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <stdexcept>

#include "attex/checkpoint.hpp"
#include "attex/io_util.hpp"

namespace attex {

namespace fs = std::filesystem;

RunPaths run_paths(const RunConfig& config) {
  fs::path out(config.paths.out_dir);
  RunPaths p;
  p.checkpoint = (out / "checkpoint.bin").string();
  p.metrics = (out / "metrics.tsv").string();
  p.predictions = (out / "predictions.tsv").string();
  p.ds_corpus = (out / "ds_corpus.jsonl").string();
  p.analysis = (out / "analysis.tsv").string();
  p.kde_dir = (out / "kde").string();
  return p;
}

namespace {

void require_paths(const std::vector<std::pair<std::string, std::string>>& entries) {
  std::vector<std::string> errors;
  for (const auto& [key, path] : entries) {
    if (path.empty()) {
      errors.push_back("paths." + key + " is required but not set");
    } else if (!file_exists(path)) {
      errors.push_back("paths." + key + " does not resolve: " + path);
    }
  }
  if (!errors.empty()) {
    std::string msg = "configuration invalid:";
    for (const std::string& e : errors) msg += "\n  - " + e;
    throw std::invalid_argument(msg);
  }
}

Resources load_resources(const RunConfig& config) {
  Resources res;
  res.embedding = EmbeddingModel::load(config.paths.embedding);
  res.frames = FrameLexicon::load(config.paths.frames);
  if (!config.paths.sentiment.empty()) {
    res.sentiment = SentimentLexicon::load(config.paths.sentiment);
  }
  if (!config.paths.pos.empty()) res.pos_table = PosTable::load(config.paths.pos);
  if (!config.paths.lemmas.empty()) res.lemmatizer = Lemmatizer::load(config.paths.lemmas);
  res.pipe = config.pipeline_options();
  res.feat_dims = config.feat_dims;
  return res;
}

Corpus training_documents(const RunConfig& config) {
  if (config.task.format == EvalFormat::Fixed) {
    require_paths({{"train_corpus", config.paths.train_corpus}});
    return load_corpus(config.paths.train_corpus);
  }
  require_paths({{"corpus", config.paths.corpus}});
  Corpus all = load_corpus(config.paths.corpus);
  std::vector<Fold> folds = split_cv3(all, config.seed);
  const Fold& held_out = folds.at(config.fold);
  Corpus train;
  for (const Document& d : all) {
    if (std::find(held_out.doc_ids.begin(), held_out.doc_ids.end(), d.doc_id) ==
        held_out.doc_ids.end()) {
      train.push_back(d);
    }
  }
  return train;
}

}  // namespace

void cmd_train(const RunConfig& config) {
  config.validate();
  require_paths({{"embedding", config.paths.embedding}, {"frames", config.paths.frames}});
  if (config.mode == TrainMode::Ds) {
    require_paths({{"ds_corpus", config.paths.ds_corpus}});
  }
  Resources res = load_resources(config);
  Corpus train_docs = training_documents(config);

  std::uint64_t symbol_seed = mix_seed(config.seed, hash_str("symbols"));
  SymbolEmbedder symbols(symbol_seed, res.embedding.dim());
  ContextExtractor extractor(res, symbols);
  std::vector<AttitudeContexts> main_attitudes =
      extractor.extract(train_docs, config.task.scale, true);

  std::vector<AttitudeContexts> ds_attitudes;
  if (config.mode == TrainMode::Ds) {
    Corpus ds_docs = load_corpus(config.paths.ds_corpus);
    if (ds_docs.empty()) {
      std::cerr << "warning: ds corpus is empty; this run is equivalent to sl mode\n";
    }
    // Distant-supervision documents contribute their annotated attitudes
    // only; neutral augmentation stays on the manually labeled side.
    ds_attitudes = extractor.extract(ds_docs, config.task.scale, false);
  }

  EncoderConfig enc = config.encoder;
  enc.class_count = class_count(config.task.scale);
  ContextModel model(enc, res.embedding.dim(), config.feat_dims);
  Rng init_rng(mix_seed(config.seed, hash_str("init")));
  model.init_params(init_rng);

  TrainerOptions options = config.trainer;
  options.scale = config.task.scale;
  TrainResult result = train_model(model, main_attitudes, ds_attitudes, options, config.seed);

  fs::create_directories(config.paths.out_dir);
  RunPaths paths = run_paths(config);
  write_text(paths.metrics, format_metrics(result.log));
  save_checkpoint(model, symbol_seed, paths.checkpoint);

  std::cout << "trained " << encoder_kind_str(enc.kind) << " (" << train_mode_str(config.mode)
            << ", " << scale_str(config.task.scale) << "-scale) for " << result.epochs_run
            << " epochs" << (result.stopped_early ? " (early stop)" : "") << "\n"
            << "attitudes: " << main_attitudes.size() << " main, " << ds_attitudes.size()
            << " ds\ncheckpoint: " << paths.checkpoint << "\nmetrics: " << paths.metrics
            << std::endl;
}

void cmd_eval(const RunConfig& config, const std::string& checkpoint_path) {
  config.validate();
  require_paths({{"embedding", config.paths.embedding},
                 {"frames", config.paths.frames},
                 {"checkpoint (from --checkpoint)", checkpoint_path}});
  Resources res = load_resources(config);
  LoadedCheckpoint loaded = load_checkpoint(checkpoint_path);
  SymbolEmbedder symbols(loaded.symbol_seed, res.embedding.dim());
  ContextExtractor extractor(res, symbols);

  Corpus corpus;
  if (config.task.format == EvalFormat::Fixed) {
    require_paths({{"test_corpus", config.paths.test_corpus}});
    corpus = load_corpus(config.paths.test_corpus);
  } else {
    require_paths({{"corpus", config.paths.corpus}});
    corpus = load_corpus(config.paths.corpus);
  }

  EvalReport report = evaluate(loaded.model, extractor, corpus, config.task, config.seed);
  fs::create_directories(config.paths.out_dir);
  RunPaths paths = run_paths(config);
  write_text(paths.predictions, format_predictions_report(report));

  for (std::size_t f = 0; f < report.fold_f1.size(); ++f) {
    std::cout << "fold " << f << " f1: " << report.fold_f1[f] << "\n";
  }
  std::cout << "aggregate f1: " << report.aggregate << "\npredictions: " << paths.predictions
            << std::endl;
}

void cmd_annotate(const RunConfig& config) {
  config.validate();
  require_paths({{"news", config.paths.news}, {"frames", config.paths.frames}});
  if (config.annotate_mode != AnnotateMode::FrameOnly) {
    require_paths({{"pairs", config.paths.pairs}});
  }
  FrameLexicon frames = FrameLexicon::load(config.paths.frames);
  Lemmatizer lemmatizer;
  if (!config.paths.lemmas.empty()) lemmatizer = Lemmatizer::load(config.paths.lemmas);
  PairList pairs;
  if (!config.paths.pairs.empty()) pairs = PairList::load(config.paths.pairs);

  NewsCorpus news = load_news(config.paths.news);
  AnnotateStats stats;
  Corpus labeled = annotate_corpus(news, frames, lemmatizer, pairs, config.pipeline_options(),
                                   config.annotate_mode, &stats);
  fs::create_directories(config.paths.out_dir);
  RunPaths paths = run_paths(config);
  save_corpus(labeled, paths.ds_corpus);

  std::cout << "documents read: " << stats.docs_read
            << "\nattitudes emitted: " << stats.attitudes_emitted
            << "\nconflicts dropped: " << stats.conflicts_dropped
            << "\ncorpus: " << paths.ds_corpus << std::endl;
}

void cmd_analyze(const RunConfig& config, const std::string& checkpoint_path) {
  config.validate();
  require_paths({{"embedding", config.paths.embedding},
                 {"frames", config.paths.frames},
                 {"checkpoint (from --checkpoint)", checkpoint_path}});
  Resources res = load_resources(config);
  LoadedCheckpoint loaded = load_checkpoint(checkpoint_path);
  SymbolEmbedder symbols(loaded.symbol_seed, res.embedding.dim());
  ContextExtractor extractor(res, symbols);

  Corpus corpus;
  if (config.task.format == EvalFormat::Fixed) {
    require_paths({{"test_corpus", config.paths.test_corpus}});
    corpus = load_corpus(config.paths.test_corpus);
  } else {
    require_paths({{"corpus", config.paths.corpus}});
    corpus = load_corpus(config.paths.corpus);
  }
  std::vector<AttitudeContexts> attitudes = extractor.extract(corpus, config.task.scale, true);
  AnalysisReport report =
      analyze(loaded.model, attitudes, res.sentiment, res.pos_table, config.analysis);

  fs::create_directories(config.paths.out_dir);
  RunPaths paths = run_paths(config);
  write_text(paths.analysis, format_analysis_report(report));
  write_kde_tables(report, paths.kde_dir);

  std::cout << format_analysis_report(report) << "report: " << paths.analysis
            << "\nkde tables: " << paths.kde_dir << std::endl;
}

void cmd_gen_synthetic(const RunConfig& config) {
  config.validate();
  SynthOutput out = generate_synthetic(config.seed, config.synth);
  write_synthetic(out, config.paths.out_dir);
  std::cout << "train docs: " << out.train.size() << "\ntest docs: " << out.test.size()
            << "\nnews docs: " << out.news.size() << "\nwritten to: " << config.paths.out_dir
            << std::endl;
}

}  // namespace attex
