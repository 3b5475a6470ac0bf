#include "attex/encoders.hpp"

#include <algorithm>
#include <stdexcept>

namespace attex {

std::string encoder_kind_str(EncoderKind k) {
  switch (k) {
    case EncoderKind::Cnn: return "cnn";
    case EncoderKind::Pcnn: return "pcnn";
    case EncoderKind::AttCnn: return "att-cnn";
    case EncoderKind::AttPcnn: return "att-pcnn";
    case EncoderKind::BiLstm: return "bilstm";
    case EncoderKind::AttBLstm: return "att-blstm";
  }
  return "cnn";
}

EncoderKind parse_encoder_kind(const std::string& s) {
  if (s == "cnn") return EncoderKind::Cnn;
  if (s == "pcnn") return EncoderKind::Pcnn;
  if (s == "att-cnn" || s == "attcnn") return EncoderKind::AttCnn;
  if (s == "att-pcnn" || s == "attpcnn") return EncoderKind::AttPcnn;
  if (s == "bilstm") return EncoderKind::BiLstm;
  if (s == "att-blstm" || s == "attblstm") return EncoderKind::AttBLstm;
  throw std::invalid_argument("unknown encoder kind: " + s);
}

bool encoder_has_attention(EncoderKind k) {
  return k == EncoderKind::AttCnn || k == EncoderKind::AttPcnn || k == EncoderKind::AttBLstm;
}

void EncoderConfig::validate() const {
  if (conv_window < 1) throw std::invalid_argument("encoder: conv_window must be >= 1");
  if (filter_count < 1) throw std::invalid_argument("encoder: filter_count must be >= 1");
  if (lstm_hidden < 1) throw std::invalid_argument("encoder: lstm_hidden must be >= 1");
  if (mlp_hidden < 1) throw std::invalid_argument("encoder: mlp_hidden must be >= 1");
  if (class_count != 2 && class_count != 3) {
    throw std::invalid_argument("encoder: class_count must be 2 or 3");
  }
}

std::size_t context_vector_dim(const EncoderConfig& cfg, std::size_t m) {
  std::size_t h = cfg.sum_bidirectional ? cfg.lstm_hidden : 2 * cfg.lstm_hidden;
  switch (cfg.kind) {
    case EncoderKind::Cnn: return cfg.filter_count;
    case EncoderKind::Pcnn: return 3 * cfg.filter_count;
    case EncoderKind::AttCnn: return m + cfg.filter_count;
    case EncoderKind::AttPcnn: return m + 3 * cfg.filter_count;
    case EncoderKind::BiLstm: return h;
    case EncoderKind::AttBLstm: return h;
  }
  return 0;
}

FeatureAttentionOut feature_attention(Tape& tape, Var x, Var f, Var w_we, Var b_we, Var w_a,
                                      Var b_a) {
  Var h = tape.concat_each_row(x, f);                           // [n x 2m]
  Var a = tape.tanh_op(tape.add_rowvec(tape.matmul(h, w_we), b_we));  // [n x h_mlp]
  Var u = tape.add_scalar_bcast(tape.matvec(a, w_a), b_a);      // [n]
  Var alpha = tape.softmax_vec(u);
  Var s_hat = tape.tmatvec(x, alpha);                           // [m]
  return {s_hat, alpha};
}

SelfAttentionOut self_attention(Tape& tape, Var h, Var w) {
  Var m = tape.tanh_op(h);             // [n x 2h]
  Var u = tape.matvec(m, w);           // [n]
  Var alpha = tape.softmax_vec(u);
  Var s = tape.tanh_op(tape.tmatvec(h, alpha));  // [2h]
  return {s, alpha};
}

Var bilstm_encode(Tape& tape, Var x, Var w_fwd, Var u_fwd, Var b_fwd, Var w_bwd, Var u_bwd,
                  Var b_bwd, std::size_t hidden, bool sum_directions) {
  std::size_t n = tape.val(x).rows();
  Var h0 = tape.constant(Tensor::zeros({hidden}));
  Var c0 = tape.constant(Tensor::zeros({hidden}));

  std::vector<Var> fwd(n), bwd(n);
  Var h = h0, c = c0;
  for (std::size_t t = 0; t < n; ++t) {
    Var hc = tape.lstm_cell(tape.row(x, t), h, c, w_fwd, u_fwd, b_fwd);
    h = tape.slice_vec(hc, 0, hidden);
    c = tape.slice_vec(hc, hidden, hidden);
    fwd[t] = h;
  }
  h = h0;
  c = c0;
  for (std::size_t t = n; t-- > 0;) {
    Var hc = tape.lstm_cell(tape.row(x, t), h, c, w_bwd, u_bwd, b_bwd);
    h = tape.slice_vec(hc, 0, hidden);
    c = tape.slice_vec(hc, hidden, hidden);
    bwd[t] = h;
  }
  std::vector<Var> rows(n);
  for (std::size_t t = 0; t < n; ++t) {
    rows[t] = sum_directions ? tape.add(fwd[t], bwd[t])
                             : tape.concat_vec({fwd[t], bwd[t]});
  }
  return tape.stack_rows(rows);
}

Var piecewise_max_pool(Tape& tape, Var conv, std::size_t subj_pos, std::size_t obj_pos) {
  std::size_t n = tape.val(conv).rows();
  if (subj_pos == obj_pos || subj_pos >= n || obj_pos >= n) {
    throw std::invalid_argument("piecewise_max_pool: participant positions invalid");
  }
  std::size_t a = std::min(subj_pos, obj_pos);
  std::size_t b = std::max(subj_pos, obj_pos);
  Var left = tape.col_max_range(conv, 0, a + 1);
  Var inner = tape.col_max_range(conv, a + 1, b + 1);
  Var right = tape.col_max_range(conv, b + 1, n);
  return tape.concat_vec({left, inner, right});
}

Var classify(Tape& tape, Var s, Var w_r, Var b_r, bool training, double keep_prob, Rng* rng) {
  Var ts = tape.tanh_op(s);
  if (training && keep_prob < 1.0) {
    if (!rng) throw std::invalid_argument("classify: training dropout needs an rng");
    Var mask = tape.constant(dropout_mask(tape.val(ts).shape(), keep_prob, *rng));
    ts = tape.mul(ts, mask);
  }
  return tape.softmax_vec(tape.add(tape.matvec(w_r, ts), b_r));
}

namespace {

constexpr const char* kConvW = "enc/conv/w";
constexpr const char* kAttWwe = "enc/att/w_we";
constexpr const char* kAttBwe = "enc/att/b_we";
constexpr const char* kAttWa = "enc/att/w_a";
constexpr const char* kAttBa = "enc/att/b_a";
constexpr const char* kLstmFwdW = "enc/lstm_fwd/w";
constexpr const char* kLstmFwdU = "enc/lstm_fwd/u";
constexpr const char* kLstmFwdB = "enc/lstm_fwd/b";
constexpr const char* kLstmBwdW = "enc/lstm_bwd/w";
constexpr const char* kLstmBwdU = "enc/lstm_bwd/u";
constexpr const char* kLstmBwdB = "enc/lstm_bwd/b";
constexpr const char* kSelfAttW = "enc/att/w";
constexpr const char* kClfW = "clf/w";
constexpr const char* kClfB = "clf/b";

bool uses_conv(EncoderKind k) {
  return k == EncoderKind::Cnn || k == EncoderKind::Pcnn || k == EncoderKind::AttCnn ||
         k == EncoderKind::AttPcnn;
}

bool uses_lstm(EncoderKind k) {
  return k == EncoderKind::BiLstm || k == EncoderKind::AttBLstm;
}

bool uses_feature_attention(EncoderKind k) {
  return k == EncoderKind::AttCnn || k == EncoderKind::AttPcnn;
}

}  // namespace

ContextModel::ContextModel(EncoderConfig cfg, std::size_t d_word, FeatureDims feat_dims)
    : cfg_(cfg), d_word_(d_word), feat_dims_(feat_dims) {
  cfg_.validate();
  if (d_word_ == 0) throw std::invalid_argument("ContextModel: d_word must be positive");
}

void ContextModel::init_params(Rng& rng) {
  std::size_t m = input_width();
  init_feature_tables(params_, feat_dims_, rng);
  if (uses_conv(cfg_.kind)) {
    params_.add(kConvW, xavier_init({cfg_.filter_count, cfg_.conv_window * m}, rng));
  }
  if (uses_feature_attention(cfg_.kind)) {
    params_.add(kAttWwe, xavier_init({2 * m, cfg_.mlp_hidden}, rng));
    params_.add(kAttBwe, Tensor::zeros({cfg_.mlp_hidden}));
    params_.add(kAttWa, xavier_init({cfg_.mlp_hidden}, rng));
    params_.add(kAttBa, Tensor::zeros({1}));
  }
  if (uses_lstm(cfg_.kind)) {
    std::size_t h = cfg_.lstm_hidden;
    params_.add(kLstmFwdW, xavier_init({4 * h, m}, rng));
    params_.add(kLstmFwdU, xavier_init({4 * h, h}, rng));
    params_.add(kLstmFwdB, Tensor::zeros({4 * h}));
    params_.add(kLstmBwdW, xavier_init({4 * h, m}, rng));
    params_.add(kLstmBwdU, xavier_init({4 * h, h}, rng));
    params_.add(kLstmBwdB, Tensor::zeros({4 * h}));
    if (cfg_.kind == EncoderKind::AttBLstm) {
      std::size_t hd = cfg_.sum_bidirectional ? h : 2 * h;
      params_.add(kSelfAttW, xavier_init({hd}, rng));
    }
  }
  params_.add(kClfW, xavier_init({cfg_.class_count, context_dim()}, rng));
  params_.add(kClfB, Tensor::zeros({cfg_.class_count}));
}

std::map<std::string, Var> ContextModel::lift_params(Tape& tape, bool needs_grad) const {
  std::map<std::string, Var> vars;
  for (const auto& [name, tensor] : params_.values) {
    vars.emplace(name, tape.leaf(tensor, needs_grad));
  }
  return vars;
}

ForwardTrace ContextModel::forward(Tape& tape, const std::map<std::string, Var>& pv,
                                   const ContextInput& input, const ForwardOptions& opts) const {
  Var x = assemble_input(tape, input, pv);
  std::vector<Var> alphas;
  Var s;
  switch (cfg_.kind) {
    case EncoderKind::Cnn: {
      s = tape.col_max(tape.conv1d(x, pv.at(kConvW), cfg_.conv_window));
      break;
    }
    case EncoderKind::Pcnn: {
      Var c = tape.conv1d(x, pv.at(kConvW), cfg_.conv_window);
      s = piecewise_max_pool(tape, c, input.subj_pos, input.obj_pos);
      break;
    }
    case EncoderKind::AttCnn:
    case EncoderKind::AttPcnn: {
      Var f_obj = tape.row(x, input.obj_pos);
      Var f_subj = tape.row(x, input.subj_pos);
      FeatureAttentionOut a_obj = feature_attention(tape, x, f_obj, pv.at(kAttWwe),
                                                    pv.at(kAttBwe), pv.at(kAttWa), pv.at(kAttBa));
      FeatureAttentionOut a_subj = feature_attention(tape, x, f_subj, pv.at(kAttWwe),
                                                     pv.at(kAttBwe), pv.at(kAttWa), pv.at(kAttBa));
      alphas.push_back(a_obj.alpha);
      alphas.push_back(a_subj.alpha);
      Var s_f = tape.scale(tape.add(a_obj.s_hat, a_subj.s_hat), 0.5);
      Var c = tape.conv1d(x, pv.at(kConvW), cfg_.conv_window);
      Var s_conv = cfg_.kind == EncoderKind::AttCnn
                       ? tape.col_max(c)
                       : piecewise_max_pool(tape, c, input.subj_pos, input.obj_pos);
      s = tape.concat_vec({s_f, s_conv});
      break;
    }
    case EncoderKind::BiLstm: {
      Var h = bilstm_encode(tape, x, pv.at(kLstmFwdW), pv.at(kLstmFwdU), pv.at(kLstmFwdB),
                            pv.at(kLstmBwdW), pv.at(kLstmBwdU), pv.at(kLstmBwdB),
                            cfg_.lstm_hidden, cfg_.sum_bidirectional);
      s = tape.col_max(h);
      break;
    }
    case EncoderKind::AttBLstm: {
      Var h = bilstm_encode(tape, x, pv.at(kLstmFwdW), pv.at(kLstmFwdU), pv.at(kLstmFwdB),
                            pv.at(kLstmBwdW), pv.at(kLstmBwdU), pv.at(kLstmBwdB),
                            cfg_.lstm_hidden, cfg_.sum_bidirectional);
      SelfAttentionOut att = self_attention(tape, h, pv.at(kSelfAttW));
      alphas.push_back(att.alpha);
      s = att.s;
      break;
    }
  }
  Var probs =
      classify(tape, s, pv.at(kClfW), pv.at(kClfB), opts.training, opts.keep_prob,
               opts.dropout_rng);
  return {probs, std::move(alphas)};
}

ForwardTrace ContextModel::forward(Tape& tape, const ContextInput& input,
                                   const ForwardOptions& opts) const {
  std::map<std::string, Var> pv = lift_params(tape, false);
  return forward(tape, pv, input, opts);
}

}  // namespace attex
