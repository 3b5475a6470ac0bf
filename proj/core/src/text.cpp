#include "attex/text.hpp"

#include <stdexcept>

namespace attex {

std::string polarity_str(Polarity p) {
  switch (p) {
    case Polarity::Pos: return "pos";
    case Polarity::Neg: return "neg";
    case Polarity::Neu: return "neu";
  }
  return "neu";
}

Polarity parse_polarity(const std::string& s) {
  if (s == "pos" || s == "positive") return Polarity::Pos;
  if (s == "neg" || s == "negative") return Polarity::Neg;
  if (s == "neu" || s == "neutral") return Polarity::Neu;
  throw std::invalid_argument("unknown polarity label: " + s);
}

std::optional<PosTag> parse_pos_tag(const std::string& s) {
  if (s == "noun") return PosTag::Noun;
  if (s == "verb") return PosTag::Verb;
  if (s == "adj") return PosTag::Adjective;
  if (s == "adv") return PosTag::Adverb;
  if (s == "prep") return PosTag::Preposition;
  if (s == "pron") return PosTag::Pronoun;
  if (s == "conj") return PosTag::Conjunction;
  if (s == "num") return PosTag::Numeral;
  if (s == "part") return PosTag::Particle;
  if (s == "unknown") return PosTag::Unknown;
  return std::nullopt;
}

std::string Term::symbol() const {
  switch (kind) {
    case TermKind::EntityMaskSubject: return "E_subj";
    case TermKind::EntityMaskObject: return "E_obj";
    case TermKind::EntityMaskOther: return "E";
    case TermKind::Token: return surface;
    default: return surface;
  }
}

std::string Term::display() const {
  switch (kind) {
    case TermKind::EntityMaskSubject: return "E_subj";
    case TermKind::EntityMaskObject: return "E_obj";
    case TermKind::EntityMaskOther: return "E";
    case TermKind::Token: return surface;
    case TermKind::Frame: {
      std::string base = negated ? "not-" + surface : surface;
      return base + "_" + polarity_str(polarity);
    }
    case TermKind::Word: return surface;
  }
  return surface;
}

}  // namespace attex
