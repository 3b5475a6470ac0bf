#include "attex/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "attex/io_util.hpp"

namespace attex {

std::string analysis_group_str(AnalysisGroup g) {
  switch (g) {
    case AnalysisGroup::Frames: return "frames";
    case AnalysisGroup::Nouns: return "nouns";
    case AnalysisGroup::Prep: return "prep";
    case AnalysisGroup::Sentiment: return "sentiment";
    case AnalysisGroup::Verbs: return "verbs";
  }
  return "frames";
}

std::optional<AnalysisGroup> classify_term(const Term& term, const SentimentLexicon& sentiment,
                                           const PosTable& pos_table) {
  if (term.kind == TermKind::Frame) return AnalysisGroup::Frames;
  if (term.kind != TermKind::Word) return std::nullopt;
  if (sentiment.contains(term.surface)) return AnalysisGroup::Sentiment;
  switch (pos_table.tag(term.surface)) {
    case PosTag::Noun: return AnalysisGroup::Nouns;
    case PosTag::Verb: return AnalysisGroup::Verbs;
    case PosTag::Preposition: return AnalysisGroup::Prep;
    default: return std::nullopt;
  }
}

double context_group_weight(const std::vector<double>& alpha, const std::vector<Term>& terms,
                            AnalysisGroup group, const SentimentLexicon& sentiment,
                            const PosTable& pos_table) {
  if (alpha.size() != terms.size()) {
    throw std::invalid_argument("context_group_weight: attention length " +
                                std::to_string(alpha.size()) + " does not match term count " +
                                std::to_string(terms.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (classify_term(terms[i], sentiment, pos_table) == group) sum += alpha[i];
  }
  return sum;
}

Ecdf::Ecdf(std::vector<double> sample) : sorted_(std::move(sample)) {
  if (sorted_.empty()) throw std::invalid_argument("ecdf: empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double Ecdf::at_most(double x) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double ks_statistic(const std::vector<double>& sample_s, const std::vector<double>& sample_n) {
  Ecdf fs(sample_s), fn(sample_n);
  double d = 0.0;
  // The sup is attained at a one-sided limit of some breakpoint; evaluating
  // P(X < b) and P(X <= b) at every sample value covers both.
  for (const std::vector<double>* sample : {&fs.sorted(), &fn.sorted()}) {
    for (double b : *sample) {
      d = std::max(d, std::abs(fs(b) - fn(b)));
      d = std::max(d, std::abs(fs.at_most(b) - fn.at_most(b)));
    }
  }
  return d;
}

double delta_mean(const std::vector<double>& sample_s, const std::vector<double>& sample_n) {
  if (sample_s.empty() || sample_n.empty()) {
    throw std::invalid_argument("delta_mean: empty sample");
  }
  double ms = 0.0, mn = 0.0;
  for (double v : sample_s) ms += v;
  for (double v : sample_n) mn += v;
  return ms / static_cast<double>(sample_s.size()) - mn / static_cast<double>(sample_n.size());
}

double silverman_bandwidth(const std::vector<double>& sample) {
  if (sample.empty()) throw std::invalid_argument("silverman_bandwidth: empty sample");
  double n = static_cast<double>(sample.size());
  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : sample) var += (v - mean) * (v - mean);
  double sd = sample.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;

  std::vector<double> sorted = sample;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    double idx = q * (n - 1.0);
    std::size_t lo = static_cast<std::size_t>(idx);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = idx - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
  };
  double iqr = quantile(0.75) - quantile(0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
  double h = 0.9 * spread * std::pow(n, -0.2);
  return h > 0.0 ? h : 0.1;
}

std::vector<KdePoint> kde_table(const std::vector<double>& sample, double bandwidth,
                                double x_lo, double x_hi, std::size_t points) {
  if (bandwidth <= 0.0) throw std::invalid_argument("kde_table: bandwidth must be positive");
  if (points < 2) throw std::invalid_argument("kde_table: need at least 2 grid points");
  if (sample.empty()) throw std::invalid_argument("kde_table: empty sample");
  std::vector<KdePoint> out(points);
  double step = (x_hi - x_lo) / static_cast<double>(points - 1);
  double norm = 1.0 / (static_cast<double>(sample.size()) * bandwidth * std::sqrt(2.0 * M_PI));
  for (std::size_t i = 0; i < points; ++i) {
    double x = x_lo + step * static_cast<double>(i);
    double density = 0.0;
    for (double v : sample) {
      double z = (x - v) / bandwidth;
      density += std::exp(-0.5 * z * z);
    }
    out[i] = {x, density * norm};
  }
  return out;
}

namespace {

std::pair<double, double> group_kde_range(AnalysisGroup g) {
  switch (g) {
    case AnalysisGroup::Nouns: return {0.0, 0.5};
    case AnalysisGroup::Prep: return {0.0, 0.2};
    default: return {0.0, 0.4};  // frames, sentiment, verbs
  }
}

std::vector<double> mean_alpha(Tape& tape, const std::vector<Var>& alphas) {
  std::vector<double> mean(tape.val(alphas[0]).size(), 0.0);
  for (Var a : alphas) {
    const Tensor& v = tape.val(a);
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += v[i];
  }
  for (double& v : mean) v /= static_cast<double>(alphas.size());
  return mean;
}

}  // namespace

AnalysisReport analyze(const ContextModel& model,
                       const std::vector<AttitudeContexts>& attitudes,
                       const SentimentLexicon& sentiment, const PosTable& pos_table,
                       const AnalysisOptions& options) {
  if (!model.has_attention()) {
    throw std::invalid_argument("analyze: model kind '" +
                                encoder_kind_str(model.config().kind) +
                                "' has no attention weights");
  }
  std::map<AnalysisGroup, std::vector<double>> samples_s, samples_n;
  for (const AttitudeContexts& ac : attitudes) {
    bool is_sentiment = ac.attitude.label != Polarity::Neu;
    for (std::size_t ci = 0; ci < ac.inputs.size(); ++ci) {
      Tape tape;
      ForwardTrace trace = model.forward(tape, ac.inputs[ci]);
      std::vector<double> alpha = mean_alpha(tape, trace.alphas);
      for (AnalysisGroup g : kAnalysisGroups) {
        double w = context_group_weight(alpha, ac.contexts[ci].terms, g, sentiment, pos_table);
        (is_sentiment ? samples_s : samples_n)[g].push_back(w);
      }
    }
  }

  AnalysisReport report;
  for (AnalysisGroup g : kAnalysisGroups) {
    const std::vector<double>& s = samples_s[g];
    const std::vector<double>& n = samples_n[g];
    GroupStats stats;
    stats.group = g;
    stats.sentiment_contexts = s.size();
    stats.neutral_contexts = n.size();
    if (!s.empty() && !n.empty()) {
      stats.d = ks_statistic(s, n);
      stats.delta = delta_mean(s, n);
    }
    report.groups.push_back(stats);

    auto [lo, hi] = group_kde_range(g);
    if (!s.empty()) {
      double h = options.bandwidth > 0.0 ? options.bandwidth : silverman_bandwidth(s);
      report.kde[analysis_group_str(g) + "_S"] = kde_table(s, h, lo, hi, options.kde_points);
    }
    if (!n.empty()) {
      double h = options.bandwidth > 0.0 ? options.bandwidth : silverman_bandwidth(n);
      report.kde[analysis_group_str(g) + "_N"] = kde_table(n, h, lo, hi, options.kde_points);
    }
  }
  return report;
}

std::string format_analysis_report(const AnalysisReport& report) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  os << "group\tD\tdelta\tn_sentiment\tn_neutral\n";
  for (const GroupStats& g : report.groups) {
    os << analysis_group_str(g.group) << '\t' << g.d << '\t' << g.delta << '\t'
       << g.sentiment_contexts << '\t' << g.neutral_contexts << '\n';
  }
  return os.str();
}

void write_kde_tables(const AnalysisReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, table] : report.kde) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(8);
    for (const KdePoint& p : table) os << p.x << '\t' << p.density << '\n';
    write_text((std::filesystem::path(dir) / (name + ".tsv")).string(), os.str());
  }
}

}  // namespace attex
