#include "attex/lexicon.hpp"

#include <sstream>
#include <stdexcept>

#include "attex/io_util.hpp"

namespace attex {

namespace {

std::vector<std::string> tsv_fields(const std::string& line, std::size_t min_fields,
                                    const std::string& what) {
  std::vector<std::string> f = split(line, '\t');
  if (f.size() < min_fields) {
    throw std::runtime_error(what + ": malformed line: " + line);
  }
  return f;
}

}  // namespace

void FrameLexicon::add(const std::string& entry, Polarity polarity, double weight) {
  std::string key = lower(trim(entry));
  if (key.empty()) throw std::invalid_argument("frame lexicon: empty entry");
  if (polarity == Polarity::Neu) {
    throw std::invalid_argument("frame lexicon: entry polarity must be pos or neg: " + entry);
  }
  entries_[key] = {polarity, weight};
  std::size_t words = split_ws(key).size();
  if (words > max_entry_words_) max_entry_words_ = words;
}

FrameLexicon FrameLexicon::load(const std::string& path) {
  FrameLexicon lex;
  for (const std::string& line : read_lines(path)) {
    if (trim(line).empty() || line[0] == '#') continue;
    std::vector<std::string> f = tsv_fields(line, 2, "frame lexicon");
    double weight = f.size() >= 3 ? std::stod(f[2]) : 1.0;
    lex.add(f[0], parse_polarity(f[1]), weight);
  }
  return lex;
}

void FrameLexicon::save(const std::string& path) const {
  std::ostringstream os;
  for (const auto& [entry, pw] : entries_) {
    os << entry << '\t' << polarity_str(pw.first) << '\t' << pw.second << '\n';
  }
  write_text(path, os.str());
}

std::optional<Polarity> FrameLexicon::lookup(const std::string& entry) const {
  auto it = entries_.find(entry);
  if (it == entries_.end()) return std::nullopt;
  return it->second.first;
}

void SentimentLexicon::add(const std::string& term, Polarity label) {
  terms_[lower(trim(term))] = label;
}

SentimentLexicon SentimentLexicon::load(const std::string& path) {
  SentimentLexicon lex;
  for (const std::string& line : read_lines(path)) {
    if (trim(line).empty() || line[0] == '#') continue;
    std::vector<std::string> f = tsv_fields(line, 2, "sentiment lexicon");
    lex.add(f[0], parse_polarity(f[1]));
  }
  return lex;
}

void SentimentLexicon::save(const std::string& path) const {
  std::ostringstream os;
  for (const auto& [term, label] : terms_) os << term << '\t' << polarity_str(label) << '\n';
  write_text(path, os.str());
}

void PosTable::add(const std::string& word, PosTag tag) { tags_[lower(trim(word))] = tag; }

PosTable PosTable::load(const std::string& path) {
  PosTable table;
  for (const std::string& line : read_lines(path)) {
    if (trim(line).empty() || line[0] == '#') continue;
    std::vector<std::string> f = tsv_fields(line, 2, "pos table");
    std::optional<PosTag> tag = parse_pos_tag(f[1]);
    if (!tag) throw std::runtime_error("pos table: unknown tag '" + f[1] + "' in: " + line);
    table.add(f[0], *tag);
  }
  return table;
}

void PosTable::save(const std::string& path) const {
  static const char* names[] = {"noun", "verb", "adj",  "adv",  "prep",
                                "pron", "conj", "num",  "part", "unknown"};
  std::ostringstream os;
  for (const auto& [word, tag] : tags_) {
    os << word << '\t' << names[static_cast<int>(tag)] << '\n';
  }
  write_text(path, os.str());
}

PosTag PosTable::tag(const std::string& word) const {
  auto it = tags_.find(word);
  return it == tags_.end() ? PosTag::Unknown : it->second;
}

Lemmatizer Lemmatizer::load(const std::string& path) {
  Lemmatizer lem;
  for (const std::string& line : read_lines(path)) {
    if (trim(line).empty() || line[0] == '#') continue;
    std::vector<std::string> f = tsv_fields(line, 2, "lemma table");
    lem.add(f[0], f[1]);
  }
  return lem;
}

void Lemmatizer::add(const std::string& form, const std::string& lemma) {
  table_[lower(trim(form))] = lower(trim(lemma));
}

std::string Lemmatizer::lemma(const std::string& form) const {
  std::string key = lower(form);
  auto it = table_.find(key);
  return it == table_.end() ? key : it->second;
}

void PairList::add(const std::string& subject, const std::string& object, Polarity polarity) {
  auto key = std::make_pair(subject, object);
  auto it = pairs_.find(key);
  if (it != pairs_.end()) {
    if (it->second != polarity) {
      throw std::invalid_argument("pair list: duplicate pair with conflicting polarity: " +
                                  subject + " -> " + object);
    }
    return;
  }
  pairs_.emplace(key, polarity);
}

PairList PairList::load(const std::string& path) {
  PairList list;
  for (const std::string& line : read_lines(path)) {
    if (trim(line).empty() || line[0] == '#') continue;
    std::vector<std::string> f = tsv_fields(line, 3, "pair list");
    list.add(f[0], f[1], parse_polarity(f[2]));
  }
  return list;
}

void PairList::save(const std::string& path) const {
  std::ostringstream os;
  for (const auto& [pair, polarity] : pairs_) {
    os << pair.first << '\t' << pair.second << '\t' << polarity_str(polarity) << '\n';
  }
  write_text(path, os.str());
}

std::optional<Polarity> PairList::lookup(const std::string& subject,
                                         const std::string& object) const {
  auto it = pairs_.find(std::make_pair(subject, object));
  if (it == pairs_.end()) return std::nullopt;
  return it->second;
}

}  // namespace attex
