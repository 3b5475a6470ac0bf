#pragma once

#include <map>
#include <string>
#include <vector>

#include "attex/corpus.hpp"
#include "attex/embedding.hpp"
#include "attex/lexicon.hpp"
#include "attex/pipeline.hpp"

namespace attex {

enum class Scale { Two, Three };
enum class EvalFormat { Cv3, Fixed };

std::string scale_str(Scale s);
Scale parse_scale(const std::string& s);

struct TaskSpec {
  Scale scale = Scale::Three;
  EvalFormat format = EvalFormat::Fixed;
};

/// Class-id mapping under a task scale: pos=0, neg=1, neu=2 (three-scale only).
int class_id(Polarity label, Scale scale);
std::size_t class_count(Scale scale);
Polarity class_polarity(int id, Scale scale);

/// Immutable per-run resources: lexicons, embedding model, pipeline bounds.
struct Resources {
  EmbeddingModel embedding;
  FrameLexicon frames;
  SentimentLexicon sentiment;
  PosTable pos_table;
  Lemmatizer lemmatizer;
  PipelineOptions pipe;
  FeatureDims feat_dims;
};

/// One attitude with every context extracted for it.
struct AttitudeContexts {
  std::string doc_id;
  Attitude attitude;
  int label = -1;  // class id under the active scale
  std::vector<ContextInput> inputs;
  std::vector<Context> contexts;  // aligned with inputs; terms for analysis
};

/// Document with sentences already tokenized and frame-matched.
struct MarkedDocument {
  std::string doc_id;
  std::vector<MarkedSentence> sentences;
  std::map<std::string, std::string> entity_group;  // entity id -> synonym group
};

MarkedDocument mark_document(const Document& doc, const Resources& res);

/// Adds a neutral attitude for every ordered pair of distinct entities
/// (by synonym group) that co-occurs in at least one sentence and is not
/// annotated. Representative ids are the group's first mention in the doc.
std::vector<Attitude> augment_neutral(const MarkedDocument& doc,
                                      const std::vector<Attitude>& annotated);

/// Extracts per-attitude contexts for a corpus. Three-scale mode augments
/// neutrals when `augment` is set (training corpora from distant supervision
/// join with their annotated attitudes only).
class ContextExtractor {
 public:
  ContextExtractor(const Resources& res, const SymbolEmbedder& symbols)
      : res_(&res), symbols_(&symbols) {}

  std::vector<AttitudeContexts> extract(const Corpus& corpus, Scale scale, bool augment) const;
  std::size_t embedding_misses() const { return misses_; }

 private:
  const Resources* res_;
  const SymbolEmbedder* symbols_;
  mutable std::size_t misses_ = 0;
};

}  // namespace attex
