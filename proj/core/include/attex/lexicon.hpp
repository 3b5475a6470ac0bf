#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "attex/text.hpp"

namespace attex {

/// Frame lexicon: entry text -> A0->A1 polarity. Entries may be multiword
/// (space separated); matching is greedy longest-first over lemmas. The
/// weight column is parsed and kept but only the sign is used downstream.
class FrameLexicon {
 public:
  void add(const std::string& entry, Polarity polarity, double weight = 1.0);
  static FrameLexicon load(const std::string& path);
  void save(const std::string& path) const;

  std::optional<Polarity> lookup(const std::string& entry) const;
  std::size_t max_entry_words() const { return max_entry_words_; }
  std::size_t size() const { return entries_.size(); }

  const std::map<std::string, std::pair<Polarity, double>>& entries() const { return entries_; }

 private:
  std::map<std::string, std::pair<Polarity, double>> entries_;
  std::size_t max_entry_words_ = 0;
};

/// Sentiment lexicon: plain term set with labels; used only for the
/// analysis-module group classification.
class SentimentLexicon {
 public:
  void add(const std::string& term, Polarity label);
  static SentimentLexicon load(const std::string& path);
  void save(const std::string& path) const;

  bool contains(const std::string& term) const { return terms_.count(term) > 0; }
  std::size_t size() const { return terms_.size(); }
  const std::map<std::string, Polarity>& terms() const { return terms_; }

 private:
  std::map<std::string, Polarity> terms_;
};

/// Word -> part-of-speech tag lookup; anything absent is Unknown.
class PosTable {
 public:
  void add(const std::string& word, PosTag tag);
  static PosTable load(const std::string& path);
  void save(const std::string& path) const;

  PosTag tag(const std::string& word) const;
  std::size_t size() const { return tags_.size(); }
  const std::map<std::string, PosTag>& entries() const { return tags_; }

 private:
  std::map<std::string, PosTag> tags_;
};

/// Pluggable lemmatizer: lowercasing identity plus an optional lookup table.
class Lemmatizer {
 public:
  Lemmatizer() = default;
  static Lemmatizer load(const std::string& path);

  void add(const std::string& form, const std::string& lemma);
  std::string lemma(const std::string& form) const;
  std::size_t table_size() const { return table_.size(); }

 private:
  std::map<std::string, std::string> table_;
};

/// Ordered entity pairs with preassigned polarity (pair-based labeling).
class PairList {
 public:
  void add(const std::string& subject, const std::string& object, Polarity polarity);
  static PairList load(const std::string& path);
  void save(const std::string& path) const;

  std::optional<Polarity> lookup(const std::string& subject, const std::string& object) const;
  std::size_t size() const { return pairs_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, Polarity> pairs_;
};

}  // namespace attex
