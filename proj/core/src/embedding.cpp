#include "attex/embedding.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "attex/io_util.hpp"
#include "attex/rng.hpp"

namespace attex {

EmbeddingModel EmbeddingModel::load(const std::string& path) {
  EmbeddingModel model;
  for (const std::string& line : read_lines(path)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> f = split_ws(line);
    if (f.size() < 2) throw std::runtime_error("embedding model: malformed line: " + line);
    std::vector<double> vec;
    vec.reserve(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i) vec.push_back(std::stod(f[i]));
    model.add(f[0], std::move(vec));
  }
  return model;
}

void EmbeddingModel::save(const std::string& path) const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [word, vec] : vectors_) {
    os << word;
    for (double v : vec) os << ' ' << v;
    os << '\n';
  }
  write_text(path, os.str());
}

void EmbeddingModel::add(const std::string& word, std::vector<double> vec) {
  if (dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_) {
    throw std::runtime_error("embedding model: vector for '" + word + "' has dimension " +
                             std::to_string(vec.size()) + ", expected " + std::to_string(dim_));
  }
  vectors_[word] = std::move(vec);
}

const std::vector<double>* EmbeddingModel::find(const std::string& word) const {
  auto it = vectors_.find(word);
  return it == vectors_.end() ? nullptr : &it->second;
}

const std::vector<double>& SymbolEmbedder::get(const std::string& symbol) const {
  auto it = cache_.find(symbol);
  if (it != cache_.end()) return it->second;
  Rng rng(mix_seed(seed_, hash_str(symbol)));
  std::vector<double> vec(dim_);
  double scale = 1.0 / std::sqrt(static_cast<double>(dim_));
  for (double& v : vec) v = rng.gaussian() * scale;
  return cache_.emplace(symbol, std::move(vec)).first->second;
}

namespace {

// Greedy scan: take the longest in-vocabulary n-gram (n = 3, 2, 1) at the
// cursor, else advance one character.
std::vector<const std::vector<double>*> ngram_parts(const std::string& surface,
                                                    const EmbeddingModel& model) {
  std::vector<const std::vector<double>*> parts;
  std::size_t pos = 0;
  while (pos < surface.size()) {
    bool found = false;
    for (std::size_t n = 3; n >= 1; --n) {
      if (pos + n > surface.size()) continue;
      if (const std::vector<double>* v = model.find(surface.substr(pos, n))) {
        parts.push_back(v);
        pos += n;
        found = true;
        break;
      }
    }
    if (!found) ++pos;
  }
  return parts;
}

}  // namespace

std::vector<double> embed_word(const Term& term, const EmbeddingModel& model,
                               const SymbolEmbedder& symbols, std::size_t* misses) {
  if (term.kind == TermKind::Word || term.kind == TermKind::Frame) {
    if (const std::vector<double>* v = model.find(term.surface)) return *v;
    std::vector<const std::vector<double>*> parts = ngram_parts(term.surface, model);
    if (parts.empty()) {
      if (misses) ++*misses;
      return std::vector<double>(model.dim(), 0.0);
    }
    std::vector<double> avg(model.dim(), 0.0);
    for (const std::vector<double>* p : parts) {
      for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += (*p)[i];
    }
    for (double& v : avg) v /= static_cast<double>(parts.size());
    return avg;
  }
  return symbols.get(term.symbol());
}

namespace {

std::size_t clip_signed_distance(std::ptrdiff_t d, std::size_t n_max) {
  std::ptrdiff_t lim = static_cast<std::ptrdiff_t>(n_max);
  if (d < -lim) d = -lim;
  if (d > lim) d = lim;
  return static_cast<std::size_t>(d + lim);
}

std::size_t nearest_abs_distance(std::size_t i, const std::vector<std::size_t>& positions,
                                 std::size_t n_max) {
  std::size_t best = n_max;
  for (std::size_t p : positions) {
    std::size_t d = i > p ? i - p : p - i;
    if (d < best) best = d;
  }
  return best;
}

std::size_t a0a1_index(const Term& t) {
  if (t.kind != TermKind::Frame) return 2;  // neutral
  return t.polarity == Polarity::Pos ? 0 : t.polarity == Polarity::Neg ? 1 : 2;
}

}  // namespace

ContextInput build_context_input(const ParsedContext& parsed, const EmbeddingModel& model,
                                 const SymbolEmbedder& symbols, const PosTable& pos_table,
                                 const FeatureDims& dims, std::size_t* misses) {
  const Context& ctx = parsed.context;
  std::size_t n = ctx.terms.size();
  if (n == 0) throw std::invalid_argument("build_context_input: empty context");
  ContextInput input;
  input.word_block = Tensor({n, model.dim()});
  input.subj_pos = ctx.subj_pos;
  input.obj_pos = ctx.obj_pos;
  input.d_obj.resize(n);
  input.d_subj.resize(n);
  input.sd_obj.resize(n);
  input.sd_subj.resize(n);
  input.pos.resize(n);
  input.a0a1.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Term& t = ctx.terms[i];
    std::vector<double> wv = embed_word(t, model, symbols, misses);
    std::copy(wv.begin(), wv.end(), input.word_block.data() + i * model.dim());
    input.d_obj[i] = clip_signed_distance(
        static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(ctx.obj_pos), dims.n_max);
    input.d_subj[i] = clip_signed_distance(
        static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(ctx.subj_pos), dims.n_max);
    input.sd_obj[i] = nearest_abs_distance(i, parsed.obj_syn_positions, dims.n_max);
    input.sd_subj[i] = nearest_abs_distance(i, parsed.subj_syn_positions, dims.n_max);
    input.pos[i] = static_cast<std::size_t>(
        t.kind == TermKind::Word ? pos_table.tag(t.surface) : PosTag::Unknown);
    input.a0a1[i] = a0a1_index(t);
  }
  return input;
}

void init_feature_tables(ParamStore& params, const FeatureDims& dims, Rng& rng) {
  params.add(kFeatDistObj, xavier_init({dims.dist_rows(), dims.d_feat}, rng));
  params.add(kFeatDistSubj, xavier_init({dims.dist_rows(), dims.d_feat}, rng));
  params.add(kFeatSynObj, xavier_init({dims.syn_rows(), dims.d_feat}, rng));
  params.add(kFeatSynSubj, xavier_init({dims.syn_rows(), dims.d_feat}, rng));
  params.add(kFeatPos, xavier_init({dims.pos_rows(), dims.d_feat}, rng));
  params.add(kFeatA0A1, xavier_init({dims.a0a1_rows(), dims.d_feat}, rng));
}

Var assemble_input(Tape& tape, const ContextInput& input,
                   const std::map<std::string, Var>& param_vars) {
  Var words = tape.constant(input.word_block);
  std::vector<Var> blocks = {
      words,
      tape.rows_gather(param_vars.at(kFeatDistObj), input.d_obj),
      tape.rows_gather(param_vars.at(kFeatDistSubj), input.d_subj),
      tape.rows_gather(param_vars.at(kFeatSynObj), input.sd_obj),
      tape.rows_gather(param_vars.at(kFeatSynSubj), input.sd_subj),
      tape.rows_gather(param_vars.at(kFeatPos), input.pos),
      tape.rows_gather(param_vars.at(kFeatA0A1), input.a0a1),
  };
  return tape.hstack(blocks);
}

}  // namespace attex
