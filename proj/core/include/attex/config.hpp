#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "attex/analysis.hpp"
#include "attex/annotator.hpp"
#include "attex/encoders.hpp"
#include "attex/synth.hpp"
#include "attex/task.hpp"
#include "attex/train.hpp"

namespace attex {

enum class TrainMode { Sl, Ds };

std::string train_mode_str(TrainMode m);
TrainMode parse_train_mode(const std::string& s);

struct PathsConfig {
  std::string corpus;        // cv3 evaluation corpus
  std::string train_corpus;  // fixed-format training split
  std::string test_corpus;   // fixed-format test split
  std::string ds_corpus;
  std::string embedding;
  std::string frames;
  std::string sentiment;
  std::string pos;
  std::string lemmas;  // optional lookup lemmatizer
  std::string pairs;
  std::string news;
  std::string out_dir = "out";
};

/// Flat sectioned key=value run configuration. Unknown keys are errors;
/// parse -> serialize -> parse is the identity.
struct RunConfig {
  TaskSpec task;
  std::size_t fold = 0;  // training fold selector in cv3 format

  PathsConfig paths;

  // features
  FeatureDims feat_dims;
  std::size_t eta = 10;
  std::string negation = "не";

  EncoderConfig encoder;  // class_count is derived from task.scale

  // train
  std::uint64_t seed = 1;
  TrainMode mode = TrainMode::Sl;
  TrainerOptions trainer;

  AnnotateMode annotate_mode = AnnotateMode::BothFactors;

  SynthParams synth;

  AnalysisOptions analysis;

  PipelineOptions pipeline_options() const;
  void validate() const;  // value ranges; throws listing every failure
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

}  // namespace attex
