#pragma once

#include <optional>
#include <string>
#include <vector>

#include "attex/lexicon.hpp"
#include "attex/text.hpp"

namespace attex {

/// A sentence term before attitude roles are assigned. Entity mentions keep
/// their ids; everything else is already classified, lemmatized, and
/// frame-matched (with negation inversion applied).
struct MarkedTerm {
  Term term;
  bool is_entity = false;
  std::string entity_id;
  std::string group_id;  // synonym group; equals entity_id when absent
};

struct MarkedSentence {
  std::vector<MarkedTerm> terms;

  std::vector<std::size_t> mention_positions(const std::string& group) const;
  bool mentions(const std::string& group) const { return !mention_positions(group).empty(); }
};

struct PipelineOptions {
  std::size_t n_max = 50;
  std::size_t eta = 10;
  std::string negation = "не";  // "не"; configurable per corpus
};

/// Splits markup text into entity mentions and plain tokens. Entity mentions
/// are written inline as [[surface|entity_id|synonym_group]]; punctuation is
/// peeled off words; numbers and urls become token symbols.
MarkedSentence mark_sentence(const std::string& text, const FrameLexicon& frames,
                             const Lemmatizer& lemmatizer, const PipelineOptions& opts);

/// Extracts the context for one ordered attitude pair from a marked sentence:
/// masks the participants and other entities, picks the closest mention pair,
/// and truncates to n_max terms around the pair midpoint. Returns nothing
/// when a participant is missing or the pair distance exceeds eta.
std::optional<Context> parse_context(const MarkedSentence& sentence,
                                     const std::string& subj_group,
                                     const std::string& obj_group,
                                     const PipelineOptions& opts);

/// Context with entity-group provenance needed by the feature assembler.
struct ParsedContext {
  Context context;
  std::vector<std::size_t> subj_syn_positions;  // mentions of the subject group
  std::vector<std::size_t> obj_syn_positions;
};

std::optional<ParsedContext> parse_context_full(const MarkedSentence& sentence,
                                                const std::string& subj_group,
                                                const std::string& obj_group,
                                                const PipelineOptions& opts);

}  // namespace attex
