#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "attex/lexicon.hpp"
#include "attex/optim.hpp"
#include "attex/pipeline.hpp"
#include "attex/tape.hpp"
#include "attex/tensor.hpp"
#include "attex/text.hpp"

namespace attex {

/// Word vectors loaded from a text file, one line per word:
/// `word v1 v2 ... v_d` (space separated).
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(std::size_t dim) : dim_(dim) {}
  static EmbeddingModel load(const std::string& path);
  void save(const std::string& path) const;

  void add(const std::string& word, std::vector<double> vec);
  bool contains(const std::string& word) const { return vectors_.count(word) > 0; }
  const std::vector<double>* find(const std::string& word) const;
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }

 private:
  std::size_t dim_ = 0;
  std::map<std::string, std::vector<double>> vectors_;
};

/// Per-symbol persistent Gaussian vectors for masks and tokens. A symbol's
/// vector depends only on (seed, symbol), so it is stable across contexts,
/// runs, and train/eval boundaries once the seed is fixed in a checkpoint.
class SymbolEmbedder {
 public:
  SymbolEmbedder(std::uint64_t seed, std::size_t dim) : seed_(seed), dim_(dim) {}

  const std::vector<double>& get(const std::string& symbol) const;
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::size_t dim_;
  mutable std::map<std::string, std::vector<double>> cache_;
};

/// Looks up one term's word vector: direct hit for words and frames, greedy
/// character n-gram fallback (n = 3 down to 1) averaged over found parts on
/// a miss, persistent random vectors for masks and tokens. Returns zeros and
/// bumps `misses` when nothing matches at all.
std::vector<double> embed_word(const Term& term, const EmbeddingModel& model,
                               const SymbolEmbedder& symbols, std::size_t* misses = nullptr);

/// Auxiliary feature table geometry. Six tables, each d_feat wide.
struct FeatureDims {
  std::size_t n_max = 50;
  std::size_t d_feat = 5;

  std::size_t dist_rows() const { return 2 * n_max + 1; }
  std::size_t syn_rows() const { return n_max + 1; }
  std::size_t pos_rows() const { return kPosTagCount; }
  std::size_t a0a1_rows() const { return 3; }
  std::size_t feature_width() const { return 6 * d_feat; }
};

/// Precomputed per-context model input: the fixed word-vector block plus
/// index rows into the six trainable feature tables.
struct ContextInput {
  Tensor word_block;  // n x d_word, constant
  std::vector<std::size_t> d_obj, d_subj, sd_obj, sd_subj, pos, a0a1;
  std::size_t subj_pos = 0;
  std::size_t obj_pos = 0;
  std::size_t length() const { return word_block.rows(); }
};

/// Builds the index rows of assemble-time features for a parsed context.
ContextInput build_context_input(const ParsedContext& parsed, const EmbeddingModel& model,
                                 const SymbolEmbedder& symbols, const PosTable& pos_table,
                                 const FeatureDims& dims, std::size_t* misses = nullptr);

/// Registers the six feature tables in a parameter store.
void init_feature_tables(ParamStore& params, const FeatureDims& dims, Rng& rng);

/// Assembles the input embedding X = [word ; v_d-obj ; v_d-subj ; v_sd-obj ;
/// v_sd-subj ; v_pos ; v_A0A1] on the tape, with feature rows gathered from
/// the trainable tables. Output is n x (d_word + 6 d_feat).
Var assemble_input(Tape& tape, const ContextInput& input,
                   const std::map<std::string, Var>& param_vars);

constexpr const char* kFeatDistObj = "feat/d_obj";
constexpr const char* kFeatDistSubj = "feat/d_subj";
constexpr const char* kFeatSynObj = "feat/sd_obj";
constexpr const char* kFeatSynSubj = "feat/sd_subj";
constexpr const char* kFeatPos = "feat/pos";
constexpr const char* kFeatA0A1 = "feat/a0a1";

}  // namespace attex
