#pragma once

#include <optional>
#include <string>
#include <vector>

#include "attex/corpus.hpp"
#include "attex/lexicon.hpp"
#include "attex/pipeline.hpp"

namespace attex {

enum class LabelFactor { FrameBased, PairBased, Both };

/// A distant-supervision label decision for one news document.
struct LabeledAttitude {
  std::string subject;  // entity ids, directed
  std::string object;
  Polarity polarity = Polarity::Neu;
  LabelFactor factor = LabelFactor::FrameBased;
  std::vector<std::size_t> support;  // 1-based content sentence ids
};

/// News document with title and sentences tokenized and frame-matched.
struct MarkedNews {
  std::string doc_id;
  MarkedSentence title;
  std::vector<MarkedSentence> sentences;
};

MarkedNews mark_news(const NewsDocument& doc, const FrameLexicon& frames,
                     const Lemmatizer& lemmatizer, const PipelineOptions& opts);

/// Frame-based title factor: fires on the first neighbouring entity-mention
/// pair with at least one frame entry strictly between the mentions and no
/// other entity between them. Positive iff every such frame is positive
/// (after negation inversion), otherwise negative.
std::optional<LabeledAttitude> frame_based_label(const MarkedSentence& title);

/// Pair-based title factor: emits one attitude per listed ordered pair whose
/// subject mention precedes its object mention in the title.
std::vector<LabeledAttitude> pair_based_label(const MarkedSentence& title,
                                              const PairList& pairs);

/// Sentence filter: keeps exactly the content sentences mentioning both
/// participants (synonym-group members count). Returns 1-based ids.
std::vector<std::size_t> filter_sentences(const MarkedNews& doc, const std::string& subj_group,
                                          const std::string& obj_group);

enum class AnnotateMode { BothFactors, FrameOnly, PairOnly };

std::string annotate_mode_str(AnnotateMode m);
AnnotateMode parse_annotate_mode(const std::string& s);

struct AnnotateStats {
  std::size_t docs_read = 0;
  std::size_t attitudes_emitted = 0;
  std::size_t conflicts_dropped = 0;
};

/// Runs both factors over every news document and emits the labeled corpus
/// in the training format (title first, then the supporting sentences).
/// BothFactors requires the same directed pair from each factor and drops
/// polarity conflicts into the stats counter.
Corpus annotate_corpus(const NewsCorpus& news, const FrameLexicon& frames,
                       const Lemmatizer& lemmatizer, const PairList& pairs,
                       const PipelineOptions& opts, AnnotateMode mode,
                       AnnotateStats* stats = nullptr);

/// Per-document annotation, exposed for tests and the stats report.
std::vector<LabeledAttitude> annotate_document(const MarkedNews& doc, const PairList& pairs,
                                               AnnotateMode mode, AnnotateStats* stats);

}  // namespace attex
