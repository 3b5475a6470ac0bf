#include <doctest.h>

#include "attex/embedding.hpp"
#include "attex/pipeline.hpp"

using namespace attex;

namespace {

EmbeddingModel toy_model() {
  EmbeddingModel model;
  model.add("hello", {1.0, 2.0});
  model.add("abc", {2.0, 4.0});
  model.add("def", {4.0, 8.0});
  model.add("xy", {10.0, 0.0});
  return model;
}

Term word(const std::string& s) {
  Term t;
  t.kind = TermKind::Word;
  t.surface = s;
  return t;
}

}  // namespace

TEST_CASE("in-vocabulary words embed to the exact model vector") {
  EmbeddingModel model = toy_model();
  SymbolEmbedder symbols(9, 2);
  std::vector<double> v = embed_word(word("hello"), model, symbols);
  CHECK(v[0] == 1.0);
  CHECK(v[1] == 2.0);
}

TEST_CASE("ngram fallback averages the found part vectors") {
  EmbeddingModel model = toy_model();
  SymbolEmbedder symbols(9, 2);
  // "abcdef" = "abc" + "def": vector is the average of the two parts.
  std::vector<double> v = embed_word(word("abcdef"), model, symbols);
  CHECK(v[0] == doctest::Approx(3.0));
  CHECK(v[1] == doctest::Approx(6.0));
  // Trigram first, then shorter n-grams: "abcxy" = "abc" + "xy".
  std::vector<double> w = embed_word(word("abcxy"), model, symbols);
  CHECK(w[0] == doctest::Approx(6.0));
  CHECK(w[1] == doctest::Approx(2.0));
}

TEST_CASE("unmatchable word embeds to zeros and counts a miss") {
  EmbeddingModel model = toy_model();
  SymbolEmbedder symbols(9, 2);
  std::size_t misses = 0;
  std::vector<double> v = embed_word(word("zzz"), model, symbols, &misses);
  CHECK(v[0] == 0.0);
  CHECK(v[1] == 0.0);
  CHECK(misses == 1);
}

TEST_CASE("mask and token vectors are persistent per symbol and seed") {
  SymbolEmbedder symbols(1234, 8);
  Term subj;
  subj.kind = TermKind::EntityMaskSubject;
  const std::vector<double>& a = symbols.get(subj.symbol());
  const std::vector<double>& b = symbols.get("E_subj");
  CHECK(&a == &b);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

  SymbolEmbedder same_seed(1234, 8), other_seed(99, 8);
  bool identical = true, differs = false;
  for (std::size_t i = 0; i < 8; ++i) {
    identical = identical && same_seed.get("E_subj")[i] == a[i];
    differs = differs || other_seed.get("E_subj")[i] != a[i];
  }
  CHECK(identical);
  CHECK(differs);
}

TEST_CASE("embedding model file round-trips") {
  EmbeddingModel model = toy_model();
  std::string path = "toy_embedding_test.txt";
  model.save(path);
  EmbeddingModel loaded = EmbeddingModel::load(path);
  CHECK(loaded.dim() == 2);
  CHECK(loaded.size() == model.size());
  CHECK((*loaded.find("hello"))[1] == 2.0);
  std::remove(path.c_str());
}

namespace {

ParsedContext toy_context() {
  FrameLexicon frames;
  frames.add("praised", Polarity::Pos);
  Lemmatizer lemmas;
  PipelineOptions opts;
  opts.negation = "not";
  MarkedSentence ms = mark_sentence("[[A|e1|g1]] praised [[B|e2|g2]] strongly", frames,
                                    lemmas, opts);
  std::optional<ParsedContext> parsed = parse_context_full(ms, "g1", "g2", opts);
  REQUIRE(parsed.has_value());
  return *parsed;
}

}  // namespace

TEST_CASE("feature indices follow the distance and polarity definitions") {
  ParsedContext parsed = toy_context();
  EmbeddingModel model(4);
  model.add("praised", {1, 1, 1, 1});
  model.add("strongly", {2, 2, 2, 2});
  SymbolEmbedder symbols(5, 4);
  PosTable pos;
  pos.add("strongly", PosTag::Adverb);
  FeatureDims dims;
  dims.n_max = 10;
  dims.d_feat = 3;
  ContextInput input = build_context_input(parsed, model, symbols, pos, dims);

  // Terms: E_subj praised E_obj strongly; subj at 0, obj at 2.
  CHECK(input.subj_pos == 0);
  CHECK(input.obj_pos == 2);
  // Signed distances are offset by n_max.
  CHECK(input.d_subj[0] == 10);      // distance 0 at the subject itself
  CHECK(input.d_subj[1] == 11);
  CHECK(input.d_obj[0] == 8);        // -2 clipped index
  CHECK(input.d_obj[2] == 10);
  // No other synonyms: nearest-synonym distance equals participant distance.
  CHECK(input.sd_subj[3] == 3);
  CHECK(input.sd_obj[3] == 1);
  // POS: words use the table, everything else is unknown.
  CHECK(input.pos[3] == static_cast<std::size_t>(PosTag::Adverb));
  CHECK(input.pos[0] == static_cast<std::size_t>(PosTag::Unknown));
  CHECK(input.pos[1] == static_cast<std::size_t>(PosTag::Unknown));  // frame term
  // A0->A1: pos row for the frame, neutral row elsewhere.
  CHECK(input.a0a1[1] == 0);
  CHECK(input.a0a1[0] == 2);
  CHECK(input.a0a1[3] == 2);
}

TEST_CASE("assembled input stacks word block and six feature tables") {
  ParsedContext parsed = toy_context();
  EmbeddingModel model(4);
  model.add("praised", {1, 1, 1, 1});
  model.add("strongly", {2, 2, 2, 2});
  SymbolEmbedder symbols(5, 4);
  PosTable pos;
  FeatureDims dims;
  dims.n_max = 10;
  dims.d_feat = 3;
  ContextInput input = build_context_input(parsed, model, symbols, pos, dims);

  ParamStore params;
  Rng rng(2);
  init_feature_tables(params, dims, rng);
  Tape tape;
  std::map<std::string, Var> pv;
  for (const auto& [name, tensor] : params.values) pv.emplace(name, tape.leaf(tensor, true));
  Var x = assemble_input(tape, input, pv);
  CHECK(tape.val(x).rows() == 4);
  CHECK(tape.val(x).cols() == 4 + 6 * 3);
  // The word block occupies the left columns.
  CHECK(tape.val(x).at(1, 0) == 1.0);
  CHECK(tape.val(x).at(3, 0) == 2.0);
  // Feature rows come from the tables at the computed indices.
  const Tensor& d_obj = params.get(kFeatDistObj);
  CHECK(tape.val(x).at(0, 4) == d_obj.at(input.d_obj[0], 0));
  const Tensor& a0a1 = params.get(kFeatA0A1);
  CHECK(tape.val(x).at(1, 4 + 5 * 3) == a0a1.at(0, 0));
}

TEST_CASE("feature lookup is total over every term kind") {
  FeatureDims dims;
  dims.n_max = 6;
  ParsedContext parsed = toy_context();
  EmbeddingModel model(2);
  SymbolEmbedder symbols(5, 2);
  PosTable pos;
  ContextInput input = build_context_input(parsed, model, symbols, pos, dims);
  for (std::size_t i = 0; i < input.length(); ++i) {
    CHECK(input.d_obj[i] < dims.dist_rows());
    CHECK(input.d_subj[i] < dims.dist_rows());
    CHECK(input.sd_obj[i] < dims.syn_rows());
    CHECK(input.sd_subj[i] < dims.syn_rows());
    CHECK(input.pos[i] < dims.pos_rows());
    CHECK(input.a0a1[i] < dims.a0a1_rows());
  }
}
