#include "attex/annotator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace attex {

MarkedNews mark_news(const NewsDocument& doc, const FrameLexicon& frames,
                     const Lemmatizer& lemmatizer, const PipelineOptions& opts) {
  MarkedNews out;
  out.doc_id = doc.doc_id;
  out.title = mark_sentence(doc.title, frames, lemmatizer, opts);
  out.sentences.reserve(doc.sentences.size());
  for (const std::string& s : doc.sentences) {
    out.sentences.push_back(mark_sentence(s, frames, lemmatizer, opts));
  }
  return out;
}

std::optional<LabeledAttitude> frame_based_label(const MarkedSentence& title) {
  std::vector<std::size_t> mentions;
  for (std::size_t i = 0; i < title.terms.size(); ++i) {
    if (title.terms[i].is_entity) mentions.push_back(i);
  }
  for (std::size_t k = 0; k + 1 < mentions.size(); ++k) {
    std::size_t lo = mentions[k], hi = mentions[k + 1];
    std::size_t frame_count = 0;
    bool all_positive = true;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      if (title.terms[i].term.kind == TermKind::Frame) {
        ++frame_count;
        if (title.terms[i].term.polarity != Polarity::Pos) all_positive = false;
      }
    }
    if (frame_count == 0) continue;
    LabeledAttitude att;
    att.subject = title.terms[lo].entity_id;
    att.object = title.terms[hi].entity_id;
    att.polarity = all_positive ? Polarity::Pos : Polarity::Neg;
    att.factor = LabelFactor::FrameBased;
    return att;
  }
  return std::nullopt;
}

std::vector<LabeledAttitude> pair_based_label(const MarkedSentence& title,
                                              const PairList& pairs) {
  std::vector<std::size_t> mentions;
  for (std::size_t i = 0; i < title.terms.size(); ++i) {
    if (title.terms[i].is_entity) mentions.push_back(i);
  }
  std::vector<LabeledAttitude> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t a = 0; a < mentions.size(); ++a) {
    for (std::size_t b = a + 1; b < mentions.size(); ++b) {
      const MarkedTerm& subj = title.terms[mentions[a]];
      const MarkedTerm& obj = title.terms[mentions[b]];
      if (subj.group_id == obj.group_id) continue;
      std::optional<Polarity> polarity = pairs.lookup(subj.entity_id, obj.entity_id);
      if (!polarity) continue;
      if (!seen.emplace(subj.entity_id, obj.entity_id).second) continue;
      LabeledAttitude att;
      att.subject = subj.entity_id;
      att.object = obj.entity_id;
      att.polarity = *polarity;
      att.factor = LabelFactor::PairBased;
      out.push_back(std::move(att));
    }
  }
  return out;
}

std::vector<std::size_t> filter_sentences(const MarkedNews& doc, const std::string& subj_group,
                                          const std::string& obj_group) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const MarkedSentence& s = doc.sentences[i];
    if (s.mentions(subj_group) && s.mentions(obj_group)) kept.push_back(i + 1);
  }
  return kept;
}

std::string annotate_mode_str(AnnotateMode m) {
  switch (m) {
    case AnnotateMode::BothFactors: return "both";
    case AnnotateMode::FrameOnly: return "frame_only";
    case AnnotateMode::PairOnly: return "pair_only";
  }
  return "both";
}

AnnotateMode parse_annotate_mode(const std::string& s) {
  if (s == "both" || s == "both_factors") return AnnotateMode::BothFactors;
  if (s == "frame_only" || s == "frame") return AnnotateMode::FrameOnly;
  if (s == "pair_only" || s == "pair") return AnnotateMode::PairOnly;
  throw std::invalid_argument("unknown annotate mode: " + s);
}

namespace {

std::string group_of(const MarkedNews& doc, const std::string& entity_id) {
  for (const MarkedTerm& mt : doc.title.terms) {
    if (mt.is_entity && mt.entity_id == entity_id) return mt.group_id;
  }
  for (const MarkedSentence& s : doc.sentences) {
    for (const MarkedTerm& mt : s.terms) {
      if (mt.is_entity && mt.entity_id == entity_id) return mt.group_id;
    }
  }
  return entity_id;
}

}  // namespace

std::vector<LabeledAttitude> annotate_document(const MarkedNews& doc, const PairList& pairs,
                                               AnnotateMode mode, AnnotateStats* stats) {
  std::optional<LabeledAttitude> frame_att = frame_based_label(doc.title);
  std::vector<LabeledAttitude> pair_atts = pair_based_label(doc.title, pairs);

  std::vector<LabeledAttitude> result;
  switch (mode) {
    case AnnotateMode::FrameOnly:
      if (frame_att) result.push_back(*frame_att);
      break;
    case AnnotateMode::PairOnly:
      result = pair_atts;
      break;
    case AnnotateMode::BothFactors: {
      if (!frame_att) break;
      for (const LabeledAttitude& pa : pair_atts) {
        if (pa.subject != frame_att->subject || pa.object != frame_att->object) continue;
        if (pa.polarity != frame_att->polarity) {
          if (stats) ++stats->conflicts_dropped;
          break;
        }
        LabeledAttitude att = *frame_att;
        att.factor = LabelFactor::Both;
        result.push_back(std::move(att));
        break;
      }
      break;
    }
  }
  for (LabeledAttitude& att : result) {
    att.support = filter_sentences(doc, group_of(doc, att.subject), group_of(doc, att.object));
  }
  return result;
}

Corpus annotate_corpus(const NewsCorpus& news, const FrameLexicon& frames,
                       const Lemmatizer& lemmatizer, const PairList& pairs,
                       const PipelineOptions& opts, AnnotateMode mode, AnnotateStats* stats) {
  Corpus out;
  for (const NewsDocument& raw : news) {
    if (stats) ++stats->docs_read;
    MarkedNews doc = mark_news(raw, frames, lemmatizer, opts);
    std::vector<LabeledAttitude> attitudes = annotate_document(doc, pairs, mode, stats);
    if (attitudes.empty()) continue;

    Document emitted;
    emitted.doc_id = raw.doc_id;
    // The title counts as a supporting context and leads the sentence list.
    emitted.sentences.push_back(raw.title);
    std::set<std::size_t> kept;
    for (const LabeledAttitude& att : attitudes) {
      kept.insert(att.support.begin(), att.support.end());
    }
    for (std::size_t id : kept) emitted.sentences.push_back(raw.sentences[id - 1]);
    for (const LabeledAttitude& att : attitudes) {
      Attitude a;
      a.subject = att.subject;
      a.object = att.object;
      a.label = att.polarity;
      emitted.attitudes.push_back(std::move(a));
      if (stats) ++stats->attitudes_emitted;
    }
    out.push_back(std::move(emitted));
  }
  return out;
}

}  // namespace attex
