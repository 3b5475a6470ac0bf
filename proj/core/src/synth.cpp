#include "attex/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "attex/io_util.hpp"
#include "attex/rng.hpp"

namespace attex {

namespace {

const char* kSyllables[] = {"ba", "be", "bo", "da", "de", "du", "ga", "go", "ka", "ke",
                            "ko", "la", "le", "lo", "ma", "me", "mo", "na", "ne2", "no",
                            "pa", "po", "ra", "re", "ri", "sa", "so", "ta", "to", "va"};

std::string make_word(Rng& rng, std::size_t syllables) {
  std::string w;
  for (std::size_t i = 0; i < syllables; ++i) {
    std::string s = kSyllables[rng.below(std::size(kSyllables))];
    if (s == "ne2") s = "nel";  // keep the negation particle out of the pool
    w += s;
  }
  return w;
}

std::vector<std::string> make_vocab(Rng& rng, std::size_t count, std::size_t syllables,
                                    std::set<std::string>& used) {
  std::vector<std::string> out;
  while (out.size() < count) {
    std::string w = make_word(rng, syllables);
    if (used.insert(w).second) out.push_back(w);
  }
  return out;
}

struct Vocab {
  std::vector<std::string> entities;     // surfaces
  std::vector<std::string> entity_ids;   // e<k>
  std::vector<std::string> groups;       // g<k>
  std::vector<std::string> frames_pos, frames_neg;
  std::vector<std::string> nouns, verbs, preps, sentiments;
};

struct Gen {
  const SynthParams& p;
  Rng& rng;
  const Vocab& vocab;

  std::string entity_token(std::size_t k, bool alias) const {
    std::string surface = vocab.entities[k];
    std::string id = vocab.entity_ids[k];
    if (alias) {
      surface += "ian";  // alias surface of the same synonym group
      id += "a";
    }
    return "[[" + surface + "|" + id + "|" + vocab.groups[k] + "]]";
  }

  std::string filler() {
    std::uint64_t r = rng.below(100);
    if (r < 45) return vocab.nouns[rng.below(vocab.nouns.size())];
    if (r < 65) return vocab.verbs[rng.below(vocab.verbs.size())];
    if (r < 85) return vocab.preps[rng.below(vocab.preps.size())];
    return vocab.sentiments[rng.below(vocab.sentiments.size())];
  }

  std::string frame_word(Polarity pol) {
    const std::vector<std::string>& pool =
        pol == Polarity::Pos ? vocab.frames_pos : vocab.frames_neg;
    return pool[rng.below(pool.size())];
  }

  // A frame expression with effective polarity pol; sometimes a negated
  // frame of the opposite polarity.
  std::string frame_expr(Polarity pol) {
    if (rng.uniform01() < p.negation_prob) {
      Polarity opposite = pol == Polarity::Pos ? Polarity::Neg : Polarity::Pos;
      return p.negation + " " + frame_word(opposite);
    }
    return frame_word(pol);
  }

  void append_fillers(std::vector<std::string>& toks, std::size_t lo, std::size_t hi) {
    std::size_t n = lo + rng.below(hi - lo + 1);
    for (std::size_t i = 0; i < n; ++i) toks.push_back(filler());
  }

  std::string join(const std::vector<std::string>& toks) {
    std::string out;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (i) out += ' ';
      out += toks[i];
    }
    return out;
  }

  // Sentiment event sentence: frames of polarity pol strictly between the
  // participants; optional opposite-polarity distractor outside.
  std::string event_sentence(std::size_t subj, std::size_t obj, Polarity pol) {
    std::vector<std::string> toks;
    bool distract_front = rng.uniform01() < p.distractor_prob / 2.0;
    bool distract_back = !distract_front && rng.uniform01() < p.distractor_prob;
    Polarity opposite = pol == Polarity::Pos ? Polarity::Neg : Polarity::Pos;

    append_fillers(toks, 0, 2);
    if (distract_front) toks.push_back(frame_word(opposite));
    bool other_front = rng.uniform01() < p.other_entity_prob;
    if (other_front) {
      std::size_t other = rng.below(vocab.entities.size());
      if (other != subj && other != obj) toks.push_back(entity_token(other, false));
    }
    toks.push_back(entity_token(subj, rng.uniform01() < p.alias_prob));
    std::size_t inner = 1 + rng.below(2);
    for (std::size_t i = 0; i < inner; ++i) toks.push_back(frame_expr(pol));
    if (rng.uniform01() < 0.4) toks.push_back(filler());
    toks.push_back(entity_token(obj, rng.uniform01() < p.alias_prob));
    append_fillers(toks, 0, 3);
    if (distract_back) toks.push_back(frame_word(opposite));
    toks.push_back(".");
    return join(toks);
  }

  // Neutral co-occurrence: no frames between the pair; optional frame
  // before or after it.
  std::string neutral_sentence(std::size_t a, std::size_t b) {
    std::vector<std::string> toks;
    bool frame_front = rng.uniform01() < p.neutral_frame_prob / 2.0;
    bool frame_back = !frame_front && rng.uniform01() < p.neutral_frame_prob;
    Polarity pol = rng.below(2) == 0 ? Polarity::Pos : Polarity::Neg;

    append_fillers(toks, 0, 2);
    if (frame_front) toks.push_back(frame_word(pol));
    toks.push_back(entity_token(a, rng.uniform01() < p.alias_prob));
    std::size_t gap = 1 + rng.below(3);
    for (std::size_t i = 0; i < gap; ++i) toks.push_back(filler());
    toks.push_back(entity_token(b, rng.uniform01() < p.alias_prob));
    append_fillers(toks, 0, 2);
    if (frame_back) toks.push_back(frame_word(pol));
    toks.push_back(".");
    return join(toks);
  }

  Document make_document(const std::string& doc_id) {
    Document doc;
    doc.doc_id = doc_id;
    std::size_t pool = 3 + rng.below(3);
    std::vector<std::size_t> ents;
    while (ents.size() < pool) {
      std::size_t e = rng.below(vocab.entities.size());
      if (std::find(ents.begin(), ents.end(), e) == ents.end()) ents.push_back(e);
    }
    std::size_t events =
        p.events_per_doc_min + rng.below(p.events_per_doc_max - p.events_per_doc_min + 1);
    std::set<std::pair<std::size_t, std::size_t>> used_pairs;
    for (std::size_t ev = 0; ev < events; ++ev) {
      std::size_t subj = ents[rng.below(ents.size())];
      std::size_t obj = ents[rng.below(ents.size())];
      if (subj == obj) continue;
      auto unordered = std::minmax(subj, obj);
      if (!used_pairs.emplace(unordered.first, unordered.second).second) continue;
      Polarity pol = rng.below(2) == 0 ? Polarity::Pos : Polarity::Neg;
      std::size_t sents = p.sentences_per_event_min +
                          rng.below(p.sentences_per_event_max - p.sentences_per_event_min + 1);
      for (std::size_t s = 0; s < sents; ++s) {
        doc.sentences.push_back(event_sentence(subj, obj, pol));
      }
      // Both directions: the event expresses a mutual attitude.
      doc.attitudes.push_back({vocab.entity_ids[subj], vocab.entity_ids[obj], pol});
      doc.attitudes.push_back({vocab.entity_ids[obj], vocab.entity_ids[subj], pol});
    }
    std::size_t neutrals = p.neutral_sentences_min +
                           rng.below(p.neutral_sentences_max - p.neutral_sentences_min + 1);
    for (std::size_t s = 0; s < neutrals; ++s) {
      std::size_t a = ents[rng.below(ents.size())];
      std::size_t b = ents[rng.below(ents.size())];
      if (a == b) continue;
      auto unordered = std::minmax(a, b);
      if (used_pairs.count({unordered.first, unordered.second})) continue;
      doc.sentences.push_back(neutral_sentence(a, b));
    }
    rng.shuffle(doc.sentences);
    return doc;
  }

  NewsDocument make_news(const std::string& doc_id, std::size_t subj, std::size_t obj,
                         Polarity pol, Attitude& gold) {
    NewsDocument doc;
    doc.doc_id = doc_id;

    std::vector<std::string> title;
    if (rng.uniform01() < 0.25) {
      // Speaker prefix; not a neighbour of the frame span.
      std::size_t speaker = rng.below(vocab.entities.size());
      if (speaker != subj && speaker != obj) {
        title.push_back(entity_token(speaker, false));
        title.push_back(":");
      }
    }
    title.push_back(entity_token(subj, false));
    std::size_t k = 1 + rng.below(2);
    for (std::size_t i = 0; i < k; ++i) title.push_back(frame_expr(pol));
    title.push_back(entity_token(obj, false));
    doc.title = join(title);

    std::size_t sents = 1 + rng.below(2);
    for (std::size_t s = 0; s < sents; ++s) {
      doc.sentences.push_back(event_sentence(subj, obj, pol));
    }
    if (rng.uniform01() < 0.3) {
      // A sentence with only one participant; the filter must drop it.
      std::vector<std::string> toks;
      append_fillers(toks, 1, 3);
      toks.push_back(entity_token(subj, false));
      append_fillers(toks, 1, 3);
      toks.push_back(".");
      doc.sentences.push_back(join(toks));
    }
    gold.subject = vocab.entity_ids[subj];
    gold.object = vocab.entity_ids[obj];
    gold.label = pol;
    return doc;
  }
};

}  // namespace

SynthOutput generate_synthetic(std::uint64_t seed, const SynthParams& p) {
  Rng rng(mix_seed(seed, hash_str("synth")));
  std::set<std::string> used;
  used.insert(p.negation);

  Vocab vocab;
  std::vector<std::string> entity_surfaces = make_vocab(rng, p.entities, 3, used);
  for (std::size_t k = 0; k < entity_surfaces.size(); ++k) {
    std::string surface = entity_surfaces[k];
    surface[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(surface[0])));
    vocab.entities.push_back(surface);
    vocab.entity_ids.push_back("e" + std::to_string(k));
    vocab.groups.push_back("g" + std::to_string(k));
  }
  vocab.frames_pos = make_vocab(rng, p.frames_pos, 2, used);
  vocab.frames_neg = make_vocab(rng, p.frames_neg, 2, used);
  vocab.nouns = make_vocab(rng, p.nouns, 2, used);
  vocab.verbs = make_vocab(rng, p.verbs, 2, used);
  vocab.preps = make_vocab(rng, p.preps, 1, used);
  vocab.sentiments = make_vocab(rng, p.sentiment_words, 2, used);

  SynthOutput out;
  for (const std::string& w : vocab.frames_pos) out.frames.add(w, Polarity::Pos);
  for (const std::string& w : vocab.frames_neg) out.frames.add(w, Polarity::Neg);
  for (std::size_t i = 0; i < vocab.sentiments.size(); ++i) {
    out.sentiment.add(vocab.sentiments[i], i % 2 == 0 ? Polarity::Pos : Polarity::Neg);
  }
  for (const std::string& w : vocab.nouns) out.pos_table.add(w, PosTag::Noun);
  for (const std::string& w : vocab.verbs) out.pos_table.add(w, PosTag::Verb);
  for (const std::string& w : vocab.preps) out.pos_table.add(w, PosTag::Preposition);
  for (const std::string& w : vocab.sentiments) out.pos_table.add(w, PosTag::Adjective);
  for (const std::string& w : vocab.frames_pos) out.pos_table.add(w, PosTag::Verb);
  for (const std::string& w : vocab.frames_neg) out.pos_table.add(w, PosTag::Verb);
  out.pos_table.add(p.negation, PosTag::Particle);

  EmbeddingModel embedding;
  double scale = 1.0 / std::sqrt(static_cast<double>(p.d_word));
  auto add_vec = [&](const std::string& w) {
    std::vector<double> v(p.d_word);
    for (double& x : v) x = rng.gaussian() * scale;
    embedding.add(w, std::move(v));
  };
  for (const std::string& w : vocab.frames_pos) add_vec(w);
  for (const std::string& w : vocab.frames_neg) add_vec(w);
  for (const std::string& w : vocab.nouns) add_vec(w);
  for (const std::string& w : vocab.verbs) add_vec(w);
  for (const std::string& w : vocab.preps) add_vec(w);
  for (const std::string& w : vocab.sentiments) add_vec(w);
  add_vec(p.negation);
  out.embedding = std::move(embedding);

  Gen gen{p, rng, vocab};
  for (std::size_t d = 0; d < p.train_docs; ++d) {
    out.train.push_back(gen.make_document("train" + std::to_string(d)));
  }
  for (std::size_t d = 0; d < p.test_docs; ++d) {
    out.test.push_back(gen.make_document("test" + std::to_string(d)));
  }
  // One polarity per ordered news pair so that repeated pairs stay
  // consistent with the pair list.
  std::map<std::pair<std::size_t, std::size_t>, Polarity> news_polarity;
  for (std::size_t d = 0; d < p.news_docs; ++d) {
    std::size_t subj = rng.below(vocab.entities.size());
    std::size_t obj = rng.below(vocab.entities.size());
    while (obj == subj) obj = rng.below(vocab.entities.size());
    auto [it, inserted] = news_polarity.try_emplace(
        {subj, obj}, rng.below(2) == 0 ? Polarity::Pos : Polarity::Neg);
    Polarity pol = it->second;
    Attitude gold;
    NewsDocument doc = gen.make_news("news" + std::to_string(d), subj, obj, pol, gold);
    out.news_gold.emplace_back(doc.doc_id, gold);
    out.news.push_back(std::move(doc));
    if (rng.uniform01() < p.pair_list_fraction && !out.pairs.lookup(gold.subject, gold.object)) {
      out.pairs.add(gold.subject, gold.object, gold.label);
    }
  }
  return out;
}

void write_synthetic(const SynthOutput& out, const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto path = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
  save_corpus(out.train, path("train.jsonl"));
  save_corpus(out.test, path("test.jsonl"));
  save_news(out.news, path("news.jsonl"));
  Corpus gold;
  for (const auto& [doc_id, att] : out.news_gold) {
    Document d;
    d.doc_id = doc_id;
    d.attitudes.push_back(att);
    gold.push_back(std::move(d));
  }
  save_corpus(gold, path("news_gold.jsonl"));
  out.frames.save(path("frames.tsv"));
  out.sentiment.save(path("sentiment.tsv"));
  out.pos_table.save(path("pos.tsv"));
  out.embedding.save(path("embedding.txt"));
  out.pairs.save(path("pairs.tsv"));
}

}  // namespace attex
