#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace attex {

enum class Polarity { Pos, Neg, Neu };

std::string polarity_str(Polarity p);
Polarity parse_polarity(const std::string& s);

enum class TermKind : std::uint8_t {
  EntityMaskSubject,
  EntityMaskObject,
  EntityMaskOther,
  Frame,
  Token,
  Word,
};

enum class TokenKind : std::uint8_t { Punct, Number, Url };

enum class PosTag : std::uint8_t {
  Noun,
  Verb,
  Adjective,
  Adverb,
  Preposition,
  Pronoun,
  Conjunction,
  Numeral,
  Particle,
  Unknown,
};

constexpr std::size_t kPosTagCount = 10;

std::optional<PosTag> parse_pos_tag(const std::string& s);

/// One context token. Frame terms carry the A0->A1 polarity with negation
/// inversion already applied; the negation particle, when consumed, is
/// recorded via `negated` and does not appear as a separate term.
struct Term {
  TermKind kind = TermKind::Word;
  std::string surface;       // lemmatized text; mask/token symbol for non-words
  Polarity polarity = Polarity::Neu;  // frames only
  TokenKind token_kind = TokenKind::Punct;  // tokens only
  bool negated = false;      // frames only

  bool is_mask() const {
    return kind == TermKind::EntityMaskSubject || kind == TermKind::EntityMaskObject ||
           kind == TermKind::EntityMaskOther;
  }
  /// Symbol used for embedding lookup of masks and tokens.
  std::string symbol() const;
  /// Figure-style rendering, e.g. "E_obj", "confrontation_neg", "<COMMA>".
  std::string display() const;
};

/// Bounded term window around one attitude's participants.
struct Context {
  std::vector<Term> terms;
  std::size_t subj_pos = 0;
  std::size_t obj_pos = 0;
  int label = -1;  // class id under the active task scale
  std::string doc_id;
  std::size_t sentence_id = 0;  // 1-based position within the document
};

}  // namespace attex
