#include <doctest.h>

#include "attex/pipeline.hpp"

using namespace attex;

namespace {

PipelineOptions english_opts() {
  PipelineOptions opts;
  opts.n_max = 50;
  opts.eta = 10;
  opts.negation = "not";
  return opts;
}

FrameLexicon toy_frames() {
  FrameLexicon frames;
  frames.add("confrontation", Polarity::Neg);
  frames.add("necessary", Polarity::Pos);
  return frames;
}

}  // namespace

TEST_CASE("context processing masks entities and tags frames") {
  // Mirrors the worked processing example: other entities become E, the
  // pair becomes E_obj / E_subj, frames carry inverted polarity after the
  // negation particle, punctuation becomes token symbols.
  std::string sentence =
      "Talking about the separation of the [[Caucasus region|e3|g3]] due to the "
      "confrontation between [[Russia|e1|g1]] and [[Turkey|e2|g2]] is not necessary , "
      "although there is a danger .";
  Lemmatizer lemmas;
  MarkedSentence ms = mark_sentence(sentence, toy_frames(), lemmas, english_opts());
  std::optional<Context> ctx = parse_context(ms, "g2", "g1", english_opts());
  REQUIRE(ctx.has_value());

  std::vector<std::string> display;
  for (const Term& t : ctx->terms) display.push_back(t.display());
  std::vector<std::string> expected = {
      "talking", "about", "the", "separation", "of",    "the",   "E",
      "due",     "to",    "the", "confrontation_neg",   "between", "E_obj",
      "and",     "E_subj", "is", "not-necessary_neg",   "<COMMA>", "although",
      "there",   "is",    "a",   "danger",  "<DOT>"};
  REQUIRE(display.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(display[i] == expected[i]);

  CHECK(ctx->terms[ctx->subj_pos].kind == TermKind::EntityMaskSubject);
  CHECK(ctx->terms[ctx->obj_pos].kind == TermKind::EntityMaskObject);
  CHECK(ctx->terms[10].kind == TermKind::Frame);
  CHECK(ctx->terms[10].polarity == Polarity::Neg);
  CHECK(ctx->terms[16].kind == TermKind::Frame);
  CHECK(ctx->terms[16].polarity == Polarity::Neg);  // pos inverted by "not"
  CHECK(ctx->terms[16].negated);
}

TEST_CASE("sentence without frames or extra entities is words and tokens") {
  std::string sentence = "[[Alpha|e1|g1]] met [[Beta|e2|g2]] yesterday .";
  FrameLexicon frames;
  Lemmatizer lemmas;
  MarkedSentence ms = mark_sentence(sentence, frames, lemmas, english_opts());
  std::optional<Context> ctx = parse_context(ms, "g1", "g2", english_opts());
  REQUIRE(ctx.has_value());
  for (const Term& t : ctx->terms) {
    CHECK(t.kind != TermKind::Frame);
    CHECK(t.kind != TermKind::EntityMaskOther);
  }
  CHECK(ctx->terms[0].kind == TermKind::EntityMaskSubject);
  CHECK(ctx->terms[2].kind == TermKind::EntityMaskObject);
  CHECK(ctx->terms[4].surface == "<DOT>");
}

TEST_CASE("negation immediately before a positive frame flips it") {
  FrameLexicon frames;
  frames.add("necessary", Polarity::Pos);
  Lemmatizer lemmas;
  MarkedSentence ms = mark_sentence("this is not necessary", frames, lemmas, english_opts());
  REQUIRE(ms.terms.size() == 3);  // "not" absorbed
  CHECK(ms.terms[2].term.kind == TermKind::Frame);
  CHECK(ms.terms[2].term.polarity == Polarity::Neg);
  CHECK(ms.terms[2].term.negated);

  // Without negation the polarity stays positive.
  MarkedSentence plain = mark_sentence("this is necessary", frames, lemmas, english_opts());
  CHECK(plain.terms[2].term.polarity == Polarity::Pos);
}

TEST_CASE("negation does not reach over a gap") {
  FrameLexicon frames;
  frames.add("necessary", Polarity::Pos);
  Lemmatizer lemmas;
  MarkedSentence ms =
      mark_sentence("not really necessary", frames, lemmas, english_opts());
  REQUIRE(ms.terms.size() == 3);
  CHECK(ms.terms[2].term.polarity == Polarity::Pos);
  CHECK_FALSE(ms.terms[2].term.negated);
}

TEST_CASE("multiword frame entries match greedily") {
  FrameLexicon frames;
  frames.add("speak out", Polarity::Pos);
  frames.add("speak", Polarity::Neg);
  Lemmatizer lemmas;
  MarkedSentence ms = mark_sentence("they speak out loudly", frames, lemmas, english_opts());
  REQUIRE(ms.terms.size() == 3);
  CHECK(ms.terms[1].term.kind == TermKind::Frame);
  CHECK(ms.terms[1].term.surface == "speak out");
  CHECK(ms.terms[1].term.polarity == Polarity::Pos);
}

TEST_CASE("numbers and urls become token symbols") {
  FrameLexicon frames;
  Lemmatizer lemmas;
  MarkedSentence ms = mark_sentence("see https://example.org or 42 items", frames, lemmas,
                                    english_opts());
  CHECK(ms.terms[1].term.surface == "<URL>");
  CHECK(ms.terms[1].term.token_kind == TokenKind::Url);
  CHECK(ms.terms[3].term.surface == "<NUM>");
  CHECK(ms.terms[3].term.token_kind == TokenKind::Number);
}

TEST_CASE("pair distance beyond eta rejects the context") {
  PipelineOptions opts = english_opts();
  opts.eta = 3;
  FrameLexicon frames;
  Lemmatizer lemmas;
  MarkedSentence ms = mark_sentence(
      "[[A|e1|g1]] one two three four five [[B|e2|g2]]", frames, lemmas, opts);
  CHECK_FALSE(parse_context(ms, "g1", "g2", opts).has_value());
  opts.eta = 6;
  CHECK(parse_context(ms, "g1", "g2", opts).has_value());
}

TEST_CASE("missing participant rejects the context") {
  FrameLexicon frames;
  Lemmatizer lemmas;
  MarkedSentence ms = mark_sentence("[[A|e1|g1]] stands alone", frames, lemmas, english_opts());
  CHECK_FALSE(parse_context(ms, "g1", "g2", english_opts()).has_value());
}

TEST_CASE("truncation keeps both participants inside n_max") {
  PipelineOptions opts = english_opts();
  opts.n_max = 9;
  opts.eta = 4;
  FrameLexicon frames;
  Lemmatizer lemmas;
  std::string sentence = "w1 w2 w3 w4 w5 w6 [[A|e1|g1]] mid [[B|e2|g2]] x1 x2 x3 x4 x5 x6 x7";
  MarkedSentence ms = mark_sentence(sentence, frames, lemmas, opts);
  std::optional<Context> ctx = parse_context(ms, "g1", "g2", opts);
  REQUIRE(ctx.has_value());
  CHECK(ctx->terms.size() == 9);
  CHECK(ctx->terms[ctx->subj_pos].kind == TermKind::EntityMaskSubject);
  CHECK(ctx->terms[ctx->obj_pos].kind == TermKind::EntityMaskObject);
}

TEST_CASE("masking leaves no entity surface in the context") {
  FrameLexicon frames;
  Lemmatizer lemmas;
  std::string sentence = "[[Alphaland|e1|g1]] talks with [[Betastan|e2|g2]] about "
                         "[[Gammaria|e3|g3]] policy";
  MarkedSentence ms = mark_sentence(sentence, frames, lemmas, english_opts());
  std::optional<Context> ctx = parse_context(ms, "g1", "g2", english_opts());
  REQUIRE(ctx.has_value());
  for (const Term& t : ctx->terms) {
    CHECK(t.surface.find("Alphaland") == std::string::npos);
    CHECK(t.surface.find("Betastan") == std::string::npos);
    CHECK(t.surface.find("Gammaria") == std::string::npos);
  }
  CHECK(ctx->terms[5].kind == TermKind::EntityMaskOther);
}

TEST_CASE("closest mention pair is selected") {
  FrameLexicon frames;
  Lemmatizer lemmas;
  // g1 mentioned twice; the second mention is closer to g2.
  std::string sentence = "[[A|e1|g1]] far far far far [[A|e1|g1]] near [[B|e2|g2]]";
  PipelineOptions opts = english_opts();
  opts.eta = 3;
  MarkedSentence ms = mark_sentence(sentence, frames, lemmas, opts);
  std::optional<ParsedContext> parsed = parse_context_full(ms, "g1", "g2", opts);
  REQUIRE(parsed.has_value());
  CHECK(parsed->context.subj_pos == 5);
  CHECK(parsed->context.obj_pos == 7);
  // Both g1 mentions count as subject-synonym positions.
  CHECK(parsed->subj_syn_positions.size() == 2);
}

TEST_CASE("lemmatizer lookup table applies before frame matching") {
  FrameLexicon frames;
  frames.add("support", Polarity::Pos);
  Lemmatizer lemmas;
  lemmas.add("supporting", "support");
  MarkedSentence ms = mark_sentence("keeps supporting them", frames, lemmas, english_opts());
  CHECK(ms.terms[1].term.kind == TermKind::Frame);
  CHECK(ms.terms[1].term.surface == "support");
}
