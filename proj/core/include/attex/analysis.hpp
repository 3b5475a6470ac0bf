#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "attex/encoders.hpp"
#include "attex/lexicon.hpp"
#include "attex/task.hpp"

namespace attex {

enum class AnalysisGroup { Frames, Nouns, Prep, Sentiment, Verbs };

constexpr AnalysisGroup kAnalysisGroups[] = {AnalysisGroup::Frames, AnalysisGroup::Nouns,
                                             AnalysisGroup::Prep, AnalysisGroup::Sentiment,
                                             AnalysisGroup::Verbs};

std::string analysis_group_str(AnalysisGroup g);

/// Assigns a term to at most one analysis group. Frame terms form their own
/// group; the word groups split by lexicon membership first (sentiment),
/// then POS tag; nouns and verbs exclude sentiment-lexicon entries.
std::optional<AnalysisGroup> classify_term(const Term& term, const SentimentLexicon& sentiment,
                                           const PosTable& pos_table);

/// Context-level weight of a term group: the sum of attention probabilities
/// over the positions whose term belongs to the group.
double context_group_weight(const std::vector<double>& alpha, const std::vector<Term>& terms,
                            AnalysisGroup group, const SentimentLexicon& sentiment,
                            const PosTable& pos_table);

/// Empirical CDF with the strict convention F(x) = P(X < x).
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> sample);

  double operator()(double x) const;  // P(X < x)
  double at_most(double x) const;     // P(X <= x)
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

/// Two-sample Kolmogorov-Smirnov statistic, evaluated exactly at both
/// one-sided limits of every sample breakpoint.
double ks_statistic(const std::vector<double>& sample_s, const std::vector<double>& sample_n);

/// Difference of sample means, sentiment minus neutral.
double delta_mean(const std::vector<double>& sample_s, const std::vector<double>& sample_n);

struct KdePoint {
  double x = 0.0;
  double density = 0.0;
};

/// Gaussian-kernel density estimate on a uniform grid.
std::vector<KdePoint> kde_table(const std::vector<double>& sample, double bandwidth,
                                double x_lo, double x_hi, std::size_t points);

/// Silverman's rule of thumb; falls back to 0.1 for degenerate samples.
double silverman_bandwidth(const std::vector<double>& sample);

struct GroupStats {
  AnalysisGroup group = AnalysisGroup::Frames;
  double d = 0.0;        // KS statistic
  double delta = 0.0;    // mean difference, S minus N
  std::size_t sentiment_contexts = 0;
  std::size_t neutral_contexts = 0;
};

struct AnalysisReport {
  std::vector<GroupStats> groups;
  std::map<std::string, std::vector<KdePoint>> kde;  // "frames_S", "frames_N", ...
};

struct AnalysisOptions {
  std::size_t kde_points = 200;
  double bandwidth = 0.0;  // 0 -> Silverman per sample
};

/// Partitions contexts into sentiment (gold pos/neg) and neutral sets, sums
/// attention per group, and reports D, delta, and KDE tables per group.
/// Feature-attentive models contribute the average of their per-feature
/// attention vectors. Throws for models without attention.
AnalysisReport analyze(const ContextModel& model,
                       const std::vector<AttitudeContexts>& attitudes,
                       const SentimentLexicon& sentiment, const PosTable& pos_table,
                       const AnalysisOptions& options = {});

std::string format_analysis_report(const AnalysisReport& report);

/// Writes one `<group>_<S|N>.tsv` table of `x<TAB>density` rows per entry.
void write_kde_tables(const AnalysisReport& report, const std::string& dir);

}  // namespace attex
