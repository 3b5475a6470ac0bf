#pragma once

#include <string>
#include <vector>

#include "attex/text.hpp"

namespace attex {

/// A directed attitude annotation at document level.
struct Attitude {
  std::string subject;  // entity id
  std::string object;
  Polarity label = Polarity::Neu;

  friend bool operator==(const Attitude& a, const Attitude& b) = default;
};

/// One corpus document: raw marked-up sentences plus attitude annotations.
struct Document {
  std::string doc_id;
  std::vector<std::string> sentences;  // inline [[surface|entity_id|group]] markup
  std::vector<Attitude> attitudes;
};

using Corpus = std::vector<Document>;

/// News document for the distant-supervision annotator: a title plus content
/// sentences, no labels.
struct NewsDocument {
  std::string doc_id;
  std::string title;
  std::vector<std::string> sentences;
};

using NewsCorpus = std::vector<NewsDocument>;

// JSONL serialization: one document object per line.
Corpus load_corpus(const std::string& path);
void save_corpus(const Corpus& corpus, const std::string& path);
NewsCorpus load_news(const std::string& path);
void save_news(const NewsCorpus& corpus, const std::string& path);

}  // namespace attex
