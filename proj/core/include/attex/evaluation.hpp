#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "attex/encoders.hpp"
#include "attex/task.hpp"

namespace attex {

struct Fold {
  std::vector<std::string> doc_ids;
  std::size_t sentence_count = 0;
};

/// Greedy balanced 3-way partition: documents sorted by descending sentence
/// count, each assigned to the currently lightest fold (ties to the lowest
/// index; equal-count documents are ordered by a seeded shuffle).
std::vector<Fold> split_cv3(const Corpus& corpus, std::uint64_t seed);

/// Gold/predicted label pairs for one document's evaluated attitude pairs.
struct DocOutcomes {
  std::string doc_id;
  std::vector<std::pair<Polarity, Polarity>> pairs;  // (gold, pred)
};

/// Macro-averaged F1 over documents: per document the positive-class and
/// negative-class F1 are averaged (neutral never enters the average); a
/// class entirely absent from both gold and prediction is excluded, and a
/// document with neither class present is skipped.
double macro_f1(const std::vector<DocOutcomes>& docs);

struct PairPrediction {
  std::string doc_id;
  Attitude gold;
  Polarity predicted = Polarity::Neu;
  bool recovered = false;  // false when the pair yielded no context
};

/// Runs inference over every context and aggregates per pair by majority
/// vote; ties fall to neutral (three-scale) or positive (two-scale).
std::vector<PairPrediction> predict_pairs(const ContextModel& model,
                                          const std::vector<AttitudeContexts>& attitudes,
                                          Scale scale);

/// Scores predictions as macro F1. Two-scale drops unrecovered pairs from
/// the comparison; three-scale counts them as predicted-neutral.
double score_predictions(const std::vector<PairPrediction>& preds, Scale scale);

struct EvalReport {
  std::vector<double> fold_f1;  // one entry per fold (cv3) or one (fixed)
  double aggregate = 0.0;
  std::vector<PairPrediction> predictions;
};

EvalReport evaluate(const ContextModel& model, const ContextExtractor& extractor,
                    const Corpus& corpus, const TaskSpec& task, std::uint64_t seed);

/// Line-oriented report: doc_id, subject, object, gold, pred rows, then a
/// '#'-prefixed summary block with per-fold and aggregate F1.
std::string format_predictions_report(const EvalReport& report);

}  // namespace attex
