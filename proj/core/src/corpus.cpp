#include "attex/corpus.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "attex/io_util.hpp"

namespace attex {

using nlohmann::json;

Corpus load_corpus(const std::string& path) {
  Corpus corpus;
  for (const std::string& line : read_lines(path)) {
    if (trim(line).empty()) continue;
    json j = json::parse(line);
    Document doc;
    doc.doc_id = j.at("doc_id").get<std::string>();
    for (const auto& s : j.at("sentences")) doc.sentences.push_back(s.get<std::string>());
    if (j.contains("attitudes")) {
      for (const auto& a : j.at("attitudes")) {
        Attitude att;
        att.subject = a.at("subject").get<std::string>();
        att.object = a.at("object").get<std::string>();
        att.label = parse_polarity(a.at("label").get<std::string>());
        doc.attitudes.push_back(std::move(att));
      }
    }
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ostringstream os;
  for (const Document& doc : corpus) {
    json j;
    j["doc_id"] = doc.doc_id;
    j["sentences"] = doc.sentences;
    json atts = json::array();
    for (const Attitude& a : doc.attitudes) {
      atts.push_back({{"subject", a.subject}, {"object", a.object},
                      {"label", polarity_str(a.label)}});
    }
    j["attitudes"] = std::move(atts);
    os << j.dump() << '\n';
  }
  write_text(path, os.str());
}

NewsCorpus load_news(const std::string& path) {
  NewsCorpus corpus;
  for (const std::string& line : read_lines(path)) {
    if (trim(line).empty()) continue;
    json j = json::parse(line);
    NewsDocument doc;
    doc.doc_id = j.at("doc_id").get<std::string>();
    doc.title = j.at("title").get<std::string>();
    if (j.contains("sentences")) {
      for (const auto& s : j.at("sentences")) doc.sentences.push_back(s.get<std::string>());
    }
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

void save_news(const NewsCorpus& corpus, const std::string& path) {
  std::ostringstream os;
  for (const NewsDocument& doc : corpus) {
    json j;
    j["doc_id"] = doc.doc_id;
    j["title"] = doc.title;
    j["sentences"] = doc.sentences;
    os << j.dump() << '\n';
  }
  write_text(path, os.str());
}

}  // namespace attex
