#include "attex/evaluation.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "attex/rng.hpp"

namespace attex {

std::vector<Fold> split_cv3(const Corpus& corpus, std::uint64_t seed) {
  if (corpus.size() < 3) {
    throw std::invalid_argument("split_cv3: need at least 3 documents, got " +
                                std::to_string(corpus.size()));
  }
  struct Entry {
    std::string doc_id;
    std::size_t sentences;
  };
  std::vector<Entry> entries;
  for (const Document& d : corpus) entries.push_back({d.doc_id, d.sentences.size()});
  // Seeded shuffle only breaks ties among equal sentence counts; the sort
  // below is stable, so unequal counts are unaffected.
  Rng rng(mix_seed(seed, hash_str("cv3")));
  rng.shuffle(entries);
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.sentences > b.sentences; });

  std::vector<Fold> folds(3);
  for (const Entry& e : entries) {
    std::size_t lightest = 0;
    for (std::size_t f = 1; f < 3; ++f) {
      if (folds[f].sentence_count < folds[lightest].sentence_count) lightest = f;
    }
    folds[lightest].doc_ids.push_back(e.doc_id);
    folds[lightest].sentence_count += e.sentences;
  }
  return folds;
}

namespace {

struct ClassCounts {
  std::size_t tp = 0, fp = 0, fn = 0;
  bool present() const { return tp + fp + fn > 0; }
  double f1() const {
    double p = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    double r = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    return p + r > 0 ? 2.0 * p * r / (p + r) : 0.0;
  }
};

}  // namespace

double macro_f1(const std::vector<DocOutcomes>& docs) {
  double total = 0.0;
  std::size_t counted = 0;
  for (const DocOutcomes& doc : docs) {
    ClassCounts pos, neg;
    for (const auto& [gold, pred] : doc.pairs) {
      if (gold == Polarity::Pos) {
        pred == Polarity::Pos ? ++pos.tp : ++pos.fn;
      } else if (pred == Polarity::Pos) {
        ++pos.fp;
      }
      if (gold == Polarity::Neg) {
        pred == Polarity::Neg ? ++neg.tp : ++neg.fn;
      } else if (pred == Polarity::Neg) {
        ++neg.fp;
      }
    }
    double sum = 0.0;
    std::size_t classes = 0;
    if (pos.present()) {
      sum += pos.f1();
      ++classes;
    }
    if (neg.present()) {
      sum += neg.f1();
      ++classes;
    }
    if (classes == 0) continue;  // document with no sentiment in gold or output
    total += sum / static_cast<double>(classes);
    ++counted;
  }
  return counted > 0 ? total / static_cast<double>(counted) : 0.0;
}

std::vector<PairPrediction> predict_pairs(const ContextModel& model,
                                          const std::vector<AttitudeContexts>& attitudes,
                                          Scale scale) {
  std::vector<PairPrediction> out;
  out.reserve(attitudes.size());
  for (const AttitudeContexts& ac : attitudes) {
    PairPrediction pp;
    pp.doc_id = ac.doc_id;
    pp.gold = ac.attitude;
    if (ac.inputs.empty()) {
      pp.recovered = false;
      pp.predicted = scale == Scale::Three ? Polarity::Neu : Polarity::Pos;
      out.push_back(std::move(pp));
      continue;
    }
    pp.recovered = true;
    std::vector<std::size_t> votes(class_count(scale), 0);
    for (const ContextInput& input : ac.inputs) {
      Tape tape;
      ForwardTrace trace = model.forward(tape, input);
      const Tensor& probs = tape.val(trace.probs);
      std::size_t best = 0;
      for (std::size_t c = 1; c < probs.size(); ++c) {
        if (probs[c] > probs[best]) best = c;
      }
      ++votes[best];
    }
    std::size_t top = *std::max_element(votes.begin(), votes.end());
    std::vector<int> winners;
    for (std::size_t c = 0; c < votes.size(); ++c) {
      if (votes[c] == top) winners.push_back(static_cast<int>(c));
    }
    if (winners.size() == 1) {
      pp.predicted = class_polarity(winners[0], scale);
    } else {
      // Tie policy: neutral in three-scale, positive in two-scale.
      pp.predicted = scale == Scale::Three ? Polarity::Neu : Polarity::Pos;
    }
    out.push_back(std::move(pp));
  }
  return out;
}

double score_predictions(const std::vector<PairPrediction>& preds, Scale scale) {
  std::map<std::string, DocOutcomes> docs;
  for (const PairPrediction& pp : preds) {
    if (scale == Scale::Two && !pp.recovered) continue;
    DocOutcomes& doc = docs[pp.doc_id];
    doc.doc_id = pp.doc_id;
    doc.pairs.emplace_back(pp.gold.label, pp.predicted);
  }
  std::vector<DocOutcomes> list;
  list.reserve(docs.size());
  for (auto& [id, doc] : docs) list.push_back(std::move(doc));
  return macro_f1(list);
}

EvalReport evaluate(const ContextModel& model, const ContextExtractor& extractor,
                    const Corpus& corpus, const TaskSpec& task, std::uint64_t seed) {
  if (model.config().class_count != class_count(task.scale)) {
    throw std::invalid_argument(
        "evaluate: checkpoint has " + std::to_string(model.config().class_count) +
        " classes but the task needs " + std::to_string(class_count(task.scale)));
  }
  EvalReport report;
  if (task.format == EvalFormat::Fixed) {
    std::vector<AttitudeContexts> attitudes = extractor.extract(corpus, task.scale, true);
    report.predictions = predict_pairs(model, attitudes, task.scale);
    report.fold_f1.push_back(score_predictions(report.predictions, task.scale));
  } else {
    std::vector<Fold> folds = split_cv3(corpus, seed);
    for (const Fold& fold : folds) {
      Corpus fold_docs;
      for (const Document& d : corpus) {
        if (std::find(fold.doc_ids.begin(), fold.doc_ids.end(), d.doc_id) != fold.doc_ids.end()) {
          fold_docs.push_back(d);
        }
      }
      std::vector<AttitudeContexts> attitudes = extractor.extract(fold_docs, task.scale, true);
      std::vector<PairPrediction> preds = predict_pairs(model, attitudes, task.scale);
      report.fold_f1.push_back(score_predictions(preds, task.scale));
      report.predictions.insert(report.predictions.end(), preds.begin(), preds.end());
    }
  }
  double sum = 0.0;
  for (double f : report.fold_f1) sum += f;
  report.aggregate = sum / static_cast<double>(report.fold_f1.size());
  return report;
}

std::string format_predictions_report(const EvalReport& report) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  for (const PairPrediction& pp : report.predictions) {
    os << pp.doc_id << '\t' << pp.gold.subject << '\t' << pp.gold.object << '\t'
       << polarity_str(pp.gold.label) << '\t'
       << (pp.recovered ? polarity_str(pp.predicted) : "unrecovered") << '\n';
  }
  for (std::size_t f = 0; f < report.fold_f1.size(); ++f) {
    os << "# fold\t" << f << "\tf1\t" << report.fold_f1[f] << '\n';
  }
  os << "# aggregate\tf1\t" << report.aggregate << '\n';
  return os.str();
}

}  // namespace attex
