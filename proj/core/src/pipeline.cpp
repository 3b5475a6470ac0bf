#include "attex/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <stdexcept>

#include "attex/io_util.hpp"

namespace attex {

namespace {

bool is_punct_char(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

std::string punct_symbol(const std::string& p) {
  if (p == ",") return "<COMMA>";
  if (p == ".") return "<DOT>";
  if (p == "!") return "<EXCL>";
  if (p == "?") return "<QUEST>";
  if (p == ":") return "<COLON>";
  if (p == ";") return "<SEMI>";
  if (p == "\"" || p == "'") return "<QUOTE>";
  if (p == "(") return "<LPAREN>";
  if (p == ")") return "<RPAREN>";
  if (p == "-" || p == "--") return "<DASH>";
  return "<PUNCT>";
}

bool looks_like_url(const std::string& s) {
  return s.rfind("http://", 0) == 0 || s.rfind("https://", 0) == 0 || s.rfind("www.", 0) == 0;
}

bool looks_like_number(const std::string& s) {
  bool digit_seen = false;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit_seen = true;
    } else if (c != '.' && c != ',' && c != '-' && c != '%') {
      return false;
    }
  }
  return digit_seen;
}

Term token_term(TokenKind kind, std::string symbol) {
  Term t;
  t.kind = TermKind::Token;
  t.token_kind = kind;
  t.surface = std::move(symbol);
  return t;
}

struct RawPiece {
  bool is_entity = false;
  std::string text;       // word or punct piece
  std::string entity_surface;
  std::string entity_id;
  std::string group_id;
};

// Splits a plain text fragment into word/punct/number/url pieces.
void split_plain(const std::string& fragment, std::vector<RawPiece>& out) {
  for (const std::string& tok : split_ws(fragment)) {
    if (looks_like_url(tok)) {
      out.push_back({false, tok, "", "", ""});
      continue;
    }
    // Peel leading and trailing punctuation runs into standalone pieces.
    std::size_t b = 0, e = tok.size();
    std::vector<std::string> lead, tail;
    while (b < e && is_punct_char(tok[b]) && !(tok[b] == '-' && e - b > 1)) {
      lead.push_back(std::string(1, tok[b]));
      ++b;
    }
    while (e > b && is_punct_char(tok[e - 1])) {
      tail.push_back(std::string(1, tok[e - 1]));
      --e;
    }
    for (const std::string& p : lead) out.push_back({false, p, "", "", ""});
    if (e > b) out.push_back({false, tok.substr(b, e - b), "", "", ""});
    for (auto it = tail.rbegin(); it != tail.rend(); ++it) out.push_back({false, *it, "", "", ""});
  }
}

std::vector<RawPiece> split_markup(const std::string& text) {
  std::vector<RawPiece> pieces;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t open = text.find("[[", pos);
    if (open == std::string::npos) {
      split_plain(text.substr(pos), pieces);
      break;
    }
    if (open > pos) split_plain(text.substr(pos, open - pos), pieces);
    std::size_t close = text.find("]]", open + 2);
    if (close == std::string::npos) {
      throw std::runtime_error("entity markup not closed: " + text.substr(open));
    }
    std::string body = text.substr(open + 2, close - open - 2);
    std::vector<std::string> f = split(body, '|');
    if (f.empty() || f[0].empty()) {
      throw std::runtime_error("entity markup needs a surface form: [[" + body + "]]");
    }
    RawPiece p;
    p.is_entity = true;
    p.entity_surface = f[0];
    p.entity_id = f.size() > 1 && !f[1].empty() ? f[1] : f[0];
    p.group_id = f.size() > 2 && !f[2].empty() ? f[2] : p.entity_id;
    pieces.push_back(std::move(p));
    pos = close + 2;
  }
  return pieces;
}

}  // namespace

std::vector<std::size_t> MarkedSentence::mention_positions(const std::string& group) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].is_entity && terms[i].group_id == group) out.push_back(i);
  }
  return out;
}

MarkedSentence mark_sentence(const std::string& text, const FrameLexicon& frames,
                             const Lemmatizer& lemmatizer, const PipelineOptions& opts) {
  std::vector<RawPiece> pieces = split_markup(text);
  MarkedSentence out;
  std::string negation = lower(opts.negation);

  std::size_t i = 0;
  while (i < pieces.size()) {
    const RawPiece& p = pieces[i];
    if (p.is_entity) {
      MarkedTerm mt;
      mt.is_entity = true;
      mt.entity_id = p.entity_id;
      mt.group_id = p.group_id;
      mt.term.kind = TermKind::EntityMaskOther;  // role assigned by parse_context
      mt.term.surface = p.entity_surface;
      out.terms.push_back(std::move(mt));
      ++i;
      continue;
    }
    if (looks_like_url(p.text)) {
      out.terms.push_back({token_term(TokenKind::Url, "<URL>"), false, "", ""});
      ++i;
      continue;
    }
    if (p.text.size() == 1 && is_punct_char(p.text[0])) {
      out.terms.push_back({token_term(TokenKind::Punct, punct_symbol(p.text)), false, "", ""});
      ++i;
      continue;
    }
    if (looks_like_number(p.text)) {
      out.terms.push_back({token_term(TokenKind::Number, "<NUM>"), false, "", ""});
      ++i;
      continue;
    }

    std::string lemma = lemmatizer.lemma(p.text);

    // Greedy longest frame match over consecutive word pieces.
    std::size_t best_len = 0;
    Polarity best_pol = Polarity::Neu;
    std::string best_entry;
    std::size_t max_words = std::max<std::size_t>(frames.max_entry_words(), 1);
    std::string candidate;
    for (std::size_t len = 1; len <= max_words && i + len <= pieces.size(); ++len) {
      const RawPiece& q = pieces[i + len - 1];
      if (q.is_entity || looks_like_url(q.text) || looks_like_number(q.text)) break;
      if (q.text.size() == 1 && is_punct_char(q.text[0])) break;
      if (len > 1) candidate += ' ';
      candidate += lemmatizer.lemma(q.text);
      if (std::optional<Polarity> pol = frames.lookup(candidate)) {
        best_len = len;
        best_pol = *pol;
        best_entry = candidate;
      }
    }

    if (best_len > 0) {
      Term t;
      t.kind = TermKind::Frame;
      t.surface = best_entry;
      t.polarity = best_pol;
      // The immediately preceding negation particle inverts the polarity
      // and is absorbed into the frame term.
      if (!out.terms.empty()) {
        const MarkedTerm& prev = out.terms.back();
        if (!prev.is_entity && prev.term.kind == TermKind::Word && prev.term.surface == negation) {
          t.polarity = best_pol == Polarity::Pos ? Polarity::Neg : Polarity::Pos;
          t.negated = true;
          out.terms.pop_back();
        }
      }
      out.terms.push_back({std::move(t), false, "", ""});
      i += best_len;
      continue;
    }

    Term t;
    t.kind = TermKind::Word;
    t.surface = lemma;
    out.terms.push_back({std::move(t), false, "", ""});
    ++i;
  }
  return out;
}

std::optional<ParsedContext> parse_context_full(const MarkedSentence& sentence,
                                                const std::string& subj_group,
                                                const std::string& obj_group,
                                                const PipelineOptions& opts) {
  if (subj_group == obj_group) return std::nullopt;
  std::vector<std::size_t> subj_mentions = sentence.mention_positions(subj_group);
  std::vector<std::size_t> obj_mentions = sentence.mention_positions(obj_group);
  if (subj_mentions.empty() || obj_mentions.empty()) return std::nullopt;

  // Closest mention pair; ties resolved by earliest positions.
  std::size_t best_sp = 0, best_op = 0;
  std::size_t best_dist = std::numeric_limits<std::size_t>::max();
  for (std::size_t sp : subj_mentions) {
    for (std::size_t op : obj_mentions) {
      std::size_t d = sp > op ? sp - op : op - sp;
      if (d < best_dist) {
        best_dist = d;
        best_sp = sp;
        best_op = op;
      }
    }
  }
  if (best_dist == 0 || best_dist > opts.eta) return std::nullopt;

  // Window of up to n_max terms centered on the pair midpoint.
  std::size_t len = sentence.terms.size();
  std::size_t begin = 0, end = len;
  if (len > opts.n_max) {
    std::size_t mid = (best_sp + best_op) / 2;
    std::size_t half = opts.n_max / 2;
    begin = mid > half ? mid - half : 0;
    if (begin + opts.n_max > len) begin = len - opts.n_max;
    end = begin + opts.n_max;
    std::size_t lo = std::min(best_sp, best_op), hi = std::max(best_sp, best_op);
    if (lo < begin) {
      begin = lo;
      end = begin + opts.n_max;
    }
    if (hi >= end) {
      end = hi + 1;
      begin = end - opts.n_max;
    }
  }

  ParsedContext out;
  out.context.terms.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    const MarkedTerm& mt = sentence.terms[i];
    Term t = mt.term;
    std::size_t local = i - begin;
    if (mt.is_entity) {
      if (i == best_sp) {
        t.kind = TermKind::EntityMaskSubject;
        out.context.subj_pos = local;
      } else if (i == best_op) {
        t.kind = TermKind::EntityMaskObject;
        out.context.obj_pos = local;
      } else {
        t.kind = TermKind::EntityMaskOther;
      }
      t.surface = t.symbol();  // no entity surface survives masking
      if (mt.group_id == subj_group) out.subj_syn_positions.push_back(local);
      if (mt.group_id == obj_group) out.obj_syn_positions.push_back(local);
    }
    out.context.terms.push_back(std::move(t));
  }
  return out;
}

std::optional<Context> parse_context(const MarkedSentence& sentence,
                                     const std::string& subj_group,
                                     const std::string& obj_group,
                                     const PipelineOptions& opts) {
  std::optional<ParsedContext> full = parse_context_full(sentence, subj_group, obj_group, opts);
  if (!full) return std::nullopt;
  return std::move(full->context);
}

}  // namespace attex
