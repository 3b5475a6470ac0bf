#include "attex/task.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace attex {

std::string scale_str(Scale s) { return s == Scale::Two ? "two" : "three"; }

Scale parse_scale(const std::string& s) {
  if (s == "two" || s == "2") return Scale::Two;
  if (s == "three" || s == "3") return Scale::Three;
  throw std::invalid_argument("unknown task scale: " + s);
}

int class_id(Polarity label, Scale scale) {
  switch (label) {
    case Polarity::Pos: return 0;
    case Polarity::Neg: return 1;
    case Polarity::Neu:
      if (scale == Scale::Two) {
        throw std::invalid_argument("neutral label is not a two-scale class");
      }
      return 2;
  }
  return -1;
}

std::size_t class_count(Scale scale) { return scale == Scale::Two ? 2 : 3; }

Polarity class_polarity(int id, Scale scale) {
  if (id == 0) return Polarity::Pos;
  if (id == 1) return Polarity::Neg;
  if (id == 2 && scale == Scale::Three) return Polarity::Neu;
  throw std::invalid_argument("invalid class id " + std::to_string(id));
}

MarkedDocument mark_document(const Document& doc, const Resources& res) {
  MarkedDocument out;
  out.doc_id = doc.doc_id;
  out.sentences.reserve(doc.sentences.size());
  for (const std::string& text : doc.sentences) {
    MarkedSentence ms = mark_sentence(text, res.frames, res.lemmatizer, res.pipe);
    for (const MarkedTerm& mt : ms.terms) {
      if (mt.is_entity && !out.entity_group.count(mt.entity_id)) {
        out.entity_group[mt.entity_id] = mt.group_id;
      }
    }
    out.sentences.push_back(std::move(ms));
  }
  return out;
}

std::vector<Attitude> augment_neutral(const MarkedDocument& doc,
                                      const std::vector<Attitude>& annotated) {
  // Annotated pairs keyed by synonym group.
  std::set<std::pair<std::string, std::string>> taken;
  for (const Attitude& a : annotated) {
    auto subj_it = doc.entity_group.find(a.subject);
    auto obj_it = doc.entity_group.find(a.object);
    std::string sg = subj_it != doc.entity_group.end() ? subj_it->second : a.subject;
    std::string og = obj_it != doc.entity_group.end() ? obj_it->second : a.object;
    taken.emplace(sg, og);
  }

  // Group representative = first mention's entity id, in document order.
  std::map<std::string, std::string> representative;
  for (const MarkedSentence& s : doc.sentences) {
    for (const MarkedTerm& mt : s.terms) {
      if (mt.is_entity && !representative.count(mt.group_id)) {
        representative[mt.group_id] = mt.entity_id;
      }
    }
  }

  std::set<std::pair<std::string, std::string>> cooccur;
  for (const MarkedSentence& s : doc.sentences) {
    std::set<std::string> groups;
    for (const MarkedTerm& mt : s.terms) {
      if (mt.is_entity) groups.insert(mt.group_id);
    }
    for (const std::string& a : groups) {
      for (const std::string& b : groups) {
        if (a != b) cooccur.emplace(a, b);
      }
    }
  }

  std::vector<Attitude> out;
  for (const auto& [sg, og] : cooccur) {
    if (taken.count({sg, og})) continue;
    Attitude att;
    att.subject = representative.at(sg);
    att.object = representative.at(og);
    att.label = Polarity::Neu;
    out.push_back(std::move(att));
  }
  return out;
}

std::vector<AttitudeContexts> ContextExtractor::extract(const Corpus& corpus, Scale scale,
                                                        bool augment) const {
  std::vector<AttitudeContexts> out;
  for (const Document& doc : corpus) {
    MarkedDocument marked = mark_document(doc, *res_);
    std::vector<Attitude> attitudes = doc.attitudes;
    if (scale == Scale::Three && augment) {
      std::vector<Attitude> neutral = augment_neutral(marked, doc.attitudes);
      attitudes.insert(attitudes.end(), neutral.begin(), neutral.end());
    }
    for (const Attitude& att : attitudes) {
      if (scale == Scale::Two && att.label == Polarity::Neu) continue;
      AttitudeContexts ac;
      ac.doc_id = doc.doc_id;
      ac.attitude = att;
      ac.label = class_id(att.label, scale);
      auto subj_it = marked.entity_group.find(att.subject);
      auto obj_it = marked.entity_group.find(att.object);
      std::string sg = subj_it != marked.entity_group.end() ? subj_it->second : att.subject;
      std::string og = obj_it != marked.entity_group.end() ? obj_it->second : att.object;
      for (std::size_t si = 0; si < marked.sentences.size(); ++si) {
        std::optional<ParsedContext> parsed =
            parse_context_full(marked.sentences[si], sg, og, res_->pipe);
        if (!parsed) continue;
        parsed->context.doc_id = doc.doc_id;
        parsed->context.sentence_id = si + 1;
        parsed->context.label = ac.label;
        ac.inputs.push_back(build_context_input(*parsed, res_->embedding, *symbols_,
                                                res_->pos_table, res_->feat_dims, &misses_));
        ac.contexts.push_back(std::move(parsed->context));
      }
      out.push_back(std::move(ac));
    }
  }
  return out;
}

}  // namespace attex
