#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "attex/encoders.hpp"
#include "testutil.hpp"

using namespace attex;
using testutil::conv_oracle;
using testutil::fd_gradient;
using testutil::max_rel_err;
using testutil::random_tensor;

TEST_CASE("convolution identity and hand cases") {
  Tape tape;
  // Single filter of ones, window 1, scalar embeddings: identity.
  Var x = tape.constant(Tensor::matrix(3, 1, {1, 2, 3}));
  Var w1 = tape.constant(Tensor::matrix(1, 1, {1}));
  const Tensor& c1 = tape.val(tape.conv1d(x, w1, 1));
  CHECK(c1.at(0, 0) == 1.0);
  CHECK(c1.at(1, 0) == 2.0);
  CHECK(c1.at(2, 0) == 3.0);

  // Window 2, filter [1,1], zero left pad: sliding pair sums.
  Var w2 = tape.constant(Tensor::matrix(1, 2, {1, 1}));
  const Tensor& c2 = tape.val(tape.conv1d(x, w2, 2));
  CHECK(c2.at(0, 0) == 1.0);
  CHECK(c2.at(1, 0) == 3.0);
  CHECK(c2.at(2, 0) == 5.0);
}

TEST_CASE("convolution matches the nested-loop oracle") {
  Rng rng(77);
  for (int rep = 0; rep < 10; ++rep) {
    std::size_t n = 2 + rng.below(6), m = 1 + rng.below(4), t = 1 + rng.below(5);
    std::size_t window = 1 + rng.below(3);
    Tensor x = random_tensor({n, m}, rng);
    Tensor w = random_tensor({t, window * m}, rng);
    Tape tape;
    const Tensor& got = tape.val(tape.conv1d(tape.constant(x), tape.constant(w), window));
    Tensor expect = conv_oracle(x, w, window);
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - expect[i]) < 1e-12);
  }
}

TEST_CASE("max pool basics and argmax gradient routing") {
  Tape tape;
  Var m = tape.leaf(Tensor::matrix(3, 2, {1, 4, 5, 4, 2, 4}), true);
  Var p = tape.col_max(m);
  CHECK(tape.val(p)[0] == 5.0);
  CHECK(tape.val(p)[1] == 4.0);
  tape.backward(tape.sum_vec(p));
  const Tensor& g = tape.grad(m);
  // Column 0: only the argmax row receives gradient.
  CHECK(g.at(0, 0) == 0.0);
  CHECK(g.at(1, 0) == 1.0);
  CHECK(g.at(2, 0) == 0.0);
  // Column 1: all-equal column routes to the first maximum.
  CHECK(g.at(0, 1) == 1.0);
}

TEST_CASE("piecewise max pool hand case and boundaries") {
  Tape tape;
  // One column [1,5,2,7,3,0] with participants at 1 and 3.
  Var c = tape.constant(Tensor::matrix(6, 1, {1, 5, 2, 7, 3, 0}));
  const Tensor& p = tape.val(piecewise_max_pool(tape, c, 1, 3));
  REQUIRE(p.size() == 3);
  CHECK(p[0] == 5.0);  // left  = rows [0, 1]
  CHECK(p[1] == 7.0);  // inner = rows (1, 3]
  CHECK(p[2] == 3.0);  // right = rows (3, 6)

  // a = 0, b = n-1: left pools only row 0, right segment is empty -> zeros.
  Var c2 = tape.constant(Tensor::matrix(3, 2, {9, 1, 2, 3, 4, 5}));
  const Tensor& p2 = tape.val(piecewise_max_pool(tape, c2, 0, 2));
  REQUIRE(p2.size() == 6);
  CHECK(p2[0] == 9.0);
  CHECK(p2[1] == 1.0);
  CHECK(p2[2] == 4.0);
  CHECK(p2[3] == 5.0);
  CHECK(p2[4] == 0.0);
  CHECK(p2[5] == 0.0);
}

TEST_CASE("piecewise max pool equals brute force on random instances") {
  Rng rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    std::size_t n = 2 + rng.below(10), t = 1 + rng.below(5);
    Tensor c = random_tensor({n, t}, rng);
    std::size_t subj = rng.below(n);
    std::size_t obj = rng.below(n);
    if (subj == obj) continue;
    Tape tape;
    const Tensor& p = tape.val(piecewise_max_pool(tape, tape.constant(c), subj, obj));
    std::size_t a = std::min(subj, obj), b = std::max(subj, obj);
    auto seg_max = [&](std::size_t r0, std::size_t r1, std::size_t col) {
      if (r0 >= r1) return 0.0;
      double best = c.at(r0, col);
      for (std::size_t r = r0; r < r1; ++r) best = std::max(best, c.at(r, col));
      return best;
    };
    for (std::size_t col = 0; col < t; ++col) {
      CHECK(p[col] == seg_max(0, a + 1, col));
      CHECK(p[t + col] == seg_max(a + 1, b + 1, col));
      CHECK(p[2 * t + col] == seg_max(b + 1, n, col));
    }
  }
}

TEST_CASE("feature attention: zero scorer gives uniform weights and the mean") {
  Rng rng(8);
  std::size_t n = 5, m = 3, h_mlp = 4;
  Tensor x = random_tensor({n, m}, rng);
  Tape tape;
  Var xv = tape.constant(x);
  Var f = tape.row(xv, 1);
  FeatureAttentionOut out = feature_attention(
      tape, xv, f, tape.constant(random_tensor({2 * m, h_mlp}, rng)),
      tape.constant(Tensor::zeros({h_mlp})), tape.constant(Tensor::zeros({h_mlp})),
      tape.constant(Tensor::zeros({1})));
  const Tensor& alpha = tape.val(out.alpha);
  for (std::size_t i = 0; i < n; ++i) CHECK(alpha[i] == doctest::Approx(1.0 / n));
  const Tensor& s_hat = tape.val(out.s_hat);
  for (std::size_t c = 0; c < m; ++c) {
    double mean = 0;
    for (std::size_t r = 0; r < n; ++r) mean += x.at(r, c);
    mean /= static_cast<double>(n);
    CHECK(s_hat[c] == doctest::Approx(mean));
  }
}

TEST_CASE("feature attention saturates to the dominant position") {
  // Drive one u_i far above the rest via a crafted scorer.
  std::size_t n = 4, m = 2;
  Tensor x({n, m});
  for (std::size_t r = 0; r < n; ++r) {
    x.at(r, 0) = r == 2 ? 50.0 : 0.0;
    x.at(r, 1) = 1.0;
  }
  Tape tape;
  Var xv = tape.constant(x);
  Var f = tape.constant(Tensor::zeros({m}));
  // W_we picks coordinate 0, W_a amplifies it.
  Tensor w_we = Tensor::zeros({2 * m, 1});
  w_we.at(0, 0) = 1.0;
  FeatureAttentionOut out =
      feature_attention(tape, xv, f, tape.constant(w_we), tape.constant(Tensor::zeros({1})),
                        tape.constant(Tensor::vector({100.0})), tape.constant(Tensor::zeros({1})));
  const Tensor& alpha = tape.val(out.alpha);
  CHECK(alpha[2] == doctest::Approx(1.0));
  const Tensor& s_hat = tape.val(out.s_hat);
  CHECK(s_hat[0] == doctest::Approx(50.0));
  CHECK(s_hat[1] == doctest::Approx(1.0));
}

TEST_CASE("feature attention matches an explicit loop oracle") {
  Rng rng(21);
  std::size_t n = 6, m = 4, h_mlp = 3;
  Tensor x = random_tensor({n, m}, rng);
  Tensor f = random_tensor({m}, rng);
  Tensor w_we = random_tensor({2 * m, h_mlp}, rng);
  Tensor b_we = random_tensor({h_mlp}, rng);
  Tensor w_a = random_tensor({h_mlp}, rng);
  Tensor b_a = random_tensor({1}, rng);

  Tape tape;
  FeatureAttentionOut out = feature_attention(tape, tape.constant(x), tape.constant(f),
                                              tape.constant(w_we), tape.constant(b_we),
                                              tape.constant(w_a), tape.constant(b_a));

  // Independent loop computation.
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> h(2 * m);
    for (std::size_t c = 0; c < m; ++c) h[c] = x.at(i, c);
    for (std::size_t c = 0; c < m; ++c) h[m + c] = f[c];
    double ui = b_a[0];
    for (std::size_t k = 0; k < h_mlp; ++k) {
      double pre = b_we[k];
      for (std::size_t c = 0; c < 2 * m; ++c) pre += h[c] * w_we.at(c, k);
      ui += w_a[k] * std::tanh(pre);
    }
    u[i] = ui;
  }
  double mx = *std::max_element(u.begin(), u.end());
  double z = 0;
  std::vector<double> alpha(n);
  for (std::size_t i = 0; i < n; ++i) z += std::exp(u[i] - mx);
  for (std::size_t i = 0; i < n; ++i) alpha[i] = std::exp(u[i] - mx) / z;
  for (std::size_t c = 0; c < m; ++c) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x.at(i, c) * alpha[i];
    CHECK(std::abs(tape.val(out.s_hat)[c] - s) < 1e-10);
  }
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(tape.val(out.alpha)[i] - alpha[i]) < 1e-10);
  }
}

TEST_CASE("self attention: zero target gives uniform alpha and tanh of mean") {
  Rng rng(12);
  std::size_t n = 5, h2 = 6;
  Tensor h = random_tensor({n, h2}, rng);
  Tape tape;
  SelfAttentionOut out = self_attention(tape, tape.constant(h),
                                        tape.constant(Tensor::zeros({h2})));
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(tape.val(out.alpha)[i] == doctest::Approx(1.0 / n));
  }
  for (std::size_t c = 0; c < h2; ++c) {
    double mean = 0;
    for (std::size_t r = 0; r < n; ++r) mean += h.at(r, c);
    mean /= static_cast<double>(n);
    CHECK(tape.val(out.s)[c] == doctest::Approx(std::tanh(mean)));
  }
}

TEST_CASE("self attention with one position is that position") {
  Rng rng(13);
  Tensor h = random_tensor({1, 4}, rng);
  Tape tape;
  SelfAttentionOut out =
      self_attention(tape, tape.constant(h), tape.constant(random_tensor({4}, rng)));
  CHECK(tape.val(out.alpha)[0] == doctest::Approx(1.0));
  for (std::size_t c = 0; c < 4; ++c) {
    CHECK(tape.val(out.s)[c] == doctest::Approx(std::tanh(h.at(0, c))));
  }
}

TEST_CASE("self attention matches a loop oracle") {
  Rng rng(14);
  std::size_t n = 7, h2 = 5;
  Tensor h = random_tensor({n, h2}, rng);
  Tensor w = random_tensor({h2}, rng);
  Tape tape;
  SelfAttentionOut out = self_attention(tape, tape.constant(h), tape.constant(w));
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    double ui = 0;
    for (std::size_t c = 0; c < h2; ++c) ui += std::tanh(h.at(i, c)) * w[c];
    u[i] = ui;
  }
  double mx = *std::max_element(u.begin(), u.end());
  double z = 0;
  for (double v : u) z += std::exp(v - mx);
  for (std::size_t c = 0; c < h2; ++c) {
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc += h.at(i, c) * std::exp(u[i] - mx) / z;
    CHECK(std::abs(tape.val(out.s)[c] - std::tanh(acc)) < 1e-10);
  }
}

TEST_CASE("bilstm with zero weights produces zero hidden states") {
  std::size_t n = 4, m = 3, h = 2;
  Tape tape;
  Var x = tape.constant(Tensor::full({n, m}, 0.7));
  Var zeros_w = tape.constant(Tensor::zeros({4 * h, m}));
  Var zeros_u = tape.constant(Tensor::zeros({4 * h, h}));
  Var zeros_b = tape.constant(Tensor::zeros({4 * h}));
  Var hmat = bilstm_encode(tape, x, zeros_w, zeros_u, zeros_b, zeros_w, zeros_u, zeros_b, h,
                           false);
  CHECK(tape.val(hmat).rows() == n);
  CHECK(tape.val(hmat).cols() == 2 * h);
  for (std::size_t i = 0; i < tape.val(hmat).size(); ++i) CHECK(tape.val(hmat)[i] == 0.0);
}

TEST_CASE("bilstm length one uses the same input in both directions") {
  Rng rng(19);
  std::size_t m = 3, h = 2;
  Tensor x = random_tensor({1, m}, rng);
  Tensor w = random_tensor({4 * h, m}, rng, 0.5);
  Tensor u = random_tensor({4 * h, h}, rng, 0.5);
  Tensor b = random_tensor({4 * h}, rng, 0.5);
  Tape tape;
  // Same weights in both directions: the two halves must agree.
  Var hmat = bilstm_encode(tape, tape.constant(x), tape.constant(w), tape.constant(u),
                           tape.constant(b), tape.constant(w), tape.constant(u),
                           tape.constant(b), h, false);
  const Tensor& out = tape.val(hmat);
  for (std::size_t c = 0; c < h; ++c) {
    CHECK(out.at(0, c) == doctest::Approx(out.at(0, h + c)));
  }
}

TEST_CASE("classifier head normalizes and respects shift invariance") {
  Rng rng(3);
  Tensor s = random_tensor({5}, rng);
  for (std::size_t classes : {2ul, 3ul}) {
    Tape tape;
    Var probs = classify(tape, tape.constant(s),
                         tape.constant(Tensor::zeros({classes, 5})),
                         tape.constant(Tensor::zeros({classes})), false, 1.0, nullptr);
    double sum = 0;
    for (std::size_t c = 0; c < classes; ++c) {
      CHECK(tape.val(probs)[c] == doctest::Approx(1.0 / static_cast<double>(classes)));
      sum += tape.val(probs)[c];
    }
    CHECK(std::abs(sum - 1.0) < 1e-6);
  }

  // Adding a constant to every bias coordinate keeps the argmax.
  Tensor w = random_tensor({3, 5}, rng);
  Tensor b = random_tensor({3}, rng);
  Tensor b_shift = b;
  for (std::size_t i = 0; i < 3; ++i) b_shift[i] += 13.7;
  Tape t1, t2;
  const Tensor& p1 = t1.val(classify(t1, t1.constant(s), t1.constant(w), t1.constant(b),
                                     false, 1.0, nullptr));
  const Tensor& p2 = t2.val(classify(t2, t2.constant(s), t2.constant(w), t2.constant(b_shift),
                                     false, 1.0, nullptr));
  auto argmax = [](const Tensor& p) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
      if (p[i] > p[best]) best = i;
    return best;
  };
  CHECK(argmax(p1) == argmax(p2));
}

namespace {

ContextInput random_context_input(std::size_t n, std::size_t d_word, const FeatureDims& dims,
                                  Rng& rng) {
  ContextInput input;
  input.word_block = random_tensor({n, d_word}, rng, 0.8);
  input.subj_pos = 0;
  input.obj_pos = n - 1;
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

}  // namespace

TEST_CASE("context vector dimensions match the per-kind formulas") {
  FeatureDims dims;
  dims.n_max = 8;
  dims.d_feat = 2;
  std::size_t d_word = 5;
  std::size_t m = d_word + 6 * 2;
  Rng rng(41);
  struct KindDim {
    EncoderKind kind;
    std::size_t expected;
  };
  EncoderConfig base;
  base.conv_window = 2;
  base.filter_count = 4;
  base.lstm_hidden = 3;
  base.mlp_hidden = 3;
  base.class_count = 3;
  std::vector<KindDim> cases = {
      {EncoderKind::Cnn, 4},
      {EncoderKind::Pcnn, 12},
      {EncoderKind::AttCnn, m + 4},
      {EncoderKind::AttPcnn, m + 12},
      {EncoderKind::BiLstm, 6},
      {EncoderKind::AttBLstm, 6},
  };
  for (const KindDim& kd : cases) {
    EncoderConfig cfg = base;
    cfg.kind = kd.kind;
    CHECK(context_vector_dim(cfg, m) == kd.expected);
    ContextModel model(cfg, d_word, dims);
    Rng init(7);
    model.init_params(init);
    ContextInput input = random_context_input(6, d_word, dims, rng);
    Tape tape;
    ForwardTrace trace = model.forward(tape, input);
    CHECK(tape.val(trace.probs).size() == 3);
    if (encoder_has_attention(kd.kind)) {
      REQUIRE(!trace.alphas.empty());
      for (Var a : trace.alphas) CHECK(tape.val(a).size() == 6);
    } else {
      CHECK(trace.alphas.empty());
    }
  }
}

TEST_CASE("att-cnn with identical participant embeddings averages to one s_hat") {
  FeatureDims dims;
  dims.n_max = 8;
  dims.d_feat = 2;
  std::size_t d_word = 4;
  EncoderConfig cfg;
  cfg.kind = EncoderKind::AttCnn;
  cfg.conv_window = 2;
  cfg.filter_count = 3;
  cfg.mlp_hidden = 3;
  cfg.class_count = 3;
  ContextModel model(cfg, d_word, dims);
  Rng init(9);
  model.init_params(init);

  Rng rng(10);
  ContextInput input = random_context_input(5, d_word, dims, rng);
  // Make the participant rows (words and features) identical.
  for (std::size_t c = 0; c < d_word; ++c) {
    input.word_block.at(input.obj_pos, c) = input.word_block.at(input.subj_pos, c);
  }
  auto copy_idx = [&](std::vector<std::size_t>& v) { v[input.obj_pos] = v[input.subj_pos]; };
  copy_idx(input.d_obj);
  copy_idx(input.d_subj);
  copy_idx(input.sd_obj);
  copy_idx(input.sd_subj);
  copy_idx(input.pos);
  copy_idx(input.a0a1);

  Tape tape;
  ForwardTrace trace = model.forward(tape, input);
  REQUIRE(trace.alphas.size() == 2);
  const Tensor& a0 = tape.val(trace.alphas[0]);
  const Tensor& a1 = tape.val(trace.alphas[1]);
  for (std::size_t i = 0; i < a0.size(); ++i) CHECK(a0[i] == doctest::Approx(a1[i]));
}

TEST_CASE("permuting filters permutes pooled outputs identically") {
  Rng rng(55);
  std::size_t n = 6, m = 4, t = 5, window = 2;
  Tensor x = random_tensor({n, m}, rng);
  Tensor w = random_tensor({t, window * m}, rng);
  Tensor w_perm({t, window * m});
  std::vector<std::size_t> perm = {3, 0, 4, 1, 2};
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t c = 0; c < window * m; ++c) w_perm.at(i, c) = w.at(perm[i], c);

  Tape tape;
  const Tensor& p = tape.val(tape.col_max(tape.conv1d(tape.constant(x), tape.constant(w),
                                                      window)));
  const Tensor& q = tape.val(tape.col_max(tape.conv1d(tape.constant(x), tape.constant(w_perm),
                                                      window)));
  for (std::size_t i = 0; i < t; ++i) CHECK(q[i] == doctest::Approx(p[perm[i]]));
}

TEST_CASE("attention traces are probability vectors over positions") {
  FeatureDims dims;
  dims.n_max = 10;
  dims.d_feat = 2;
  Rng rng(66);
  for (EncoderKind kind : {EncoderKind::AttCnn, EncoderKind::AttBLstm}) {
    EncoderConfig cfg;
    cfg.kind = kind;
    cfg.conv_window = 2;
    cfg.filter_count = 3;
    cfg.lstm_hidden = 3;
    cfg.mlp_hidden = 3;
    cfg.class_count = 3;
    ContextModel model(cfg, 4, dims);
    Rng init(rng.next_u64());
    model.init_params(init);
    for (int rep = 0; rep < 20; ++rep) {
      std::size_t n = 2 + rng.below(8);
      ContextInput input = random_context_input(n, 4, dims, rng);
      Tape tape;
      ForwardTrace trace = model.forward(tape, input);
      for (Var a : trace.alphas) {
        double sum = 0;
        for (std::size_t i = 0; i < tape.val(a).size(); ++i) {
          CHECK(tape.val(a)[i] >= 0.0);
          sum += tape.val(a)[i];
        }
        CHECK(std::abs(sum - 1.0) < 1e-6);
      }
    }
  }
}
