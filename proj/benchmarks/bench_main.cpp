#include <benchmark/benchmark.h>

#include "attex/analysis.hpp"
#include "attex/encoders.hpp"
#include "attex/rng.hpp"
#include "attex/train.hpp"

namespace {

attex::ContextInput random_input(std::size_t n, std::size_t d_word,
                                 const attex::FeatureDims& dims, attex::Rng& rng) {
  attex::ContextInput input;
  input.word_block = attex::Tensor({n, d_word});
  for (std::size_t i = 0; i < input.word_block.size(); ++i) {
    input.word_block[i] = rng.gaussian() * 0.2;
  }
  input.subj_pos = 1;
  input.obj_pos = n - 2;
  for (std::size_t i = 0; i < n; ++i) {
    input.d_obj.push_back(rng.below(dims.dist_rows()));
    input.d_subj.push_back(rng.below(dims.dist_rows()));
    input.sd_obj.push_back(rng.below(dims.syn_rows()));
    input.sd_subj.push_back(rng.below(dims.syn_rows()));
    input.pos.push_back(rng.below(dims.pos_rows()));
    input.a0a1.push_back(rng.below(dims.a0a1_rows()));
  }
  return input;
}

attex::ContextModel make_model(attex::EncoderKind kind, std::size_t d_word,
                               const attex::FeatureDims& dims) {
  attex::EncoderConfig cfg;
  cfg.kind = kind;
  cfg.conv_window = 3;
  cfg.filter_count = 32;
  cfg.lstm_hidden = 32;
  cfg.mlp_hidden = 10;
  cfg.class_count = 3;
  attex::ContextModel model(cfg, d_word, dims);
  attex::Rng rng(7);
  model.init_params(rng);
  return model;
}

void bench_forward_backward(benchmark::State& state, attex::EncoderKind kind) {
  attex::FeatureDims dims;
  dims.n_max = 50;
  dims.d_feat = 5;
  const std::size_t d_word = 32;
  attex::ContextModel model = make_model(kind, d_word, dims);
  attex::Rng rng(11);
  attex::ContextInput input = random_input(20, d_word, dims, rng);
  for (auto _ : state) {
    attex::Tape tape;
    auto pv = model.lift_params(tape, true);
    attex::ForwardTrace trace = model.forward(tape, pv, input, {});
    attex::Var loss = attex::cross_entropy_node(tape, trace.probs, 0);
    tape.backward(loss);
    benchmark::DoNotOptimize(tape.grad(pv.at("clf/w")).data());
  }
}

void BM_CnnStep(benchmark::State& state) {
  bench_forward_backward(state, attex::EncoderKind::Cnn);
}
BENCHMARK(BM_CnnStep);

void BM_PcnnStep(benchmark::State& state) {
  bench_forward_backward(state, attex::EncoderKind::Pcnn);
}
BENCHMARK(BM_PcnnStep);

void BM_AttCnnStep(benchmark::State& state) {
  bench_forward_backward(state, attex::EncoderKind::AttCnn);
}
BENCHMARK(BM_AttCnnStep);

void BM_BiLstmStep(benchmark::State& state) {
  bench_forward_backward(state, attex::EncoderKind::BiLstm);
}
BENCHMARK(BM_BiLstmStep);

void BM_AttBLstmStep(benchmark::State& state) {
  bench_forward_backward(state, attex::EncoderKind::AttBLstm);
}
BENCHMARK(BM_AttBLstmStep);

void BM_KsStatistic(benchmark::State& state) {
  attex::Rng rng(3);
  std::vector<double> s, n;
  for (int i = 0; i < 10000; ++i) {
    s.push_back(rng.uniform01());
    n.push_back(rng.uniform01() * 0.8);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(attex::ks_statistic(s, n));
  }
}
BENCHMARK(BM_KsStatistic);

}  // namespace

BENCHMARK_MAIN();
