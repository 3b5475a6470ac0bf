#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "attex/corpus.hpp"
#include "attex/embedding.hpp"
#include "attex/lexicon.hpp"

namespace attex {

/// Synthetic news generator knobs. The generated task is label-faithful:
/// a sentiment pair's sentences carry frames of the gold polarity between
/// the participants, and only there; neutral pairs co-occur without frames
/// between them. Distractor frames of the opposite polarity may appear
/// outside the pair span, so position matters, not just frame presence.
struct SynthParams {
  std::size_t train_docs = 35;
  std::size_t test_docs = 15;
  std::size_t news_docs = 0;

  std::size_t entities = 24;
  std::size_t frames_pos = 18;
  std::size_t frames_neg = 18;
  std::size_t nouns = 30;
  std::size_t verbs = 14;
  std::size_t preps = 6;
  std::size_t sentiment_words = 10;

  std::size_t events_per_doc_min = 2;
  std::size_t events_per_doc_max = 4;
  std::size_t sentences_per_event_min = 1;
  std::size_t sentences_per_event_max = 2;
  std::size_t neutral_sentences_min = 1;
  std::size_t neutral_sentences_max = 3;

  double distractor_prob = 0.3;     // opposite-polarity frame outside the pair
  double neutral_frame_prob = 0.25; // frame outside a neutral pair
  double negation_prob = 0.12;      // express polarity via negated opposite frame
  double alias_prob = 0.1;          // use a synonym-group alias mention
  double other_entity_prob = 0.1;   // third entity inside an event sentence
  double pair_list_fraction = 1.0;  // share of news pairs put on the pair list

  std::size_t d_word = 32;
  std::string negation = "not";
};

struct SynthOutput {
  Corpus train;
  Corpus test;
  NewsCorpus news;
  std::vector<std::pair<std::string, Attitude>> news_gold;  // doc_id -> implied label
  FrameLexicon frames;
  SentimentLexicon sentiment;
  PosTable pos_table;
  EmbeddingModel embedding;
  PairList pairs;
};

SynthOutput generate_synthetic(std::uint64_t seed, const SynthParams& params);

/// Writes every piece to a directory: train.jsonl, test.jsonl, news.jsonl,
/// news_gold.jsonl, frames.tsv, sentiment.tsv, pos.tsv, embedding.txt,
/// pairs.tsv.
void write_synthetic(const SynthOutput& out, const std::string& dir);

}  // namespace attex
