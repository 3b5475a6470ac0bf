#pragma once

#include <map>
#include <string>
#include <vector>

#include "attex/embedding.hpp"
#include "attex/optim.hpp"
#include "attex/tape.hpp"

namespace attex {

enum class EncoderKind { Cnn, Pcnn, AttCnn, AttPcnn, BiLstm, AttBLstm };

std::string encoder_kind_str(EncoderKind k);
EncoderKind parse_encoder_kind(const std::string& s);
bool encoder_has_attention(EncoderKind k);

struct EncoderConfig {
  EncoderKind kind = EncoderKind::Cnn;
  std::size_t conv_window = 3;
  std::size_t filter_count = 300;
  std::size_t lstm_hidden = 128;
  std::size_t mlp_hidden = 10;
  std::size_t class_count = 3;
  bool sum_bidirectional = false;  // ablation switch; default is concatenation

  void validate() const;
};

/// Dimension of the embedded context vector s for a given input width m.
std::size_t context_vector_dim(const EncoderConfig& cfg, std::size_t m);

/// Feature attention (AttCNN-style scorer): h_i = [x_i, f];
/// u_i = w_a . tanh(W_we h_i + b_we) + b_a; alpha = softmax(u);
/// s_hat = sum_i alpha_i x_i.
struct FeatureAttentionOut {
  Var s_hat;   // [m]
  Var alpha;   // [n]
};
FeatureAttentionOut feature_attention(Tape& tape, Var x, Var f, Var w_we, Var b_we, Var w_a,
                                      Var b_a);

/// Self attention over hidden states: m_i = tanh(h_i); u_i = m_i . w;
/// alpha = softmax(u); s = tanh(H^T alpha).
struct SelfAttentionOut {
  Var s;       // [2h]
  Var alpha;   // [n]
};
SelfAttentionOut self_attention(Tape& tape, Var h, Var w);

/// Bidirectional LSTM over the rows of x; returns H [n x 2h] (or [n x h]
/// when the sum switch combines directions by addition).
Var bilstm_encode(Tape& tape, Var x, Var w_fwd, Var u_fwd, Var b_fwd, Var w_bwd, Var u_bwd,
                  Var b_bwd, std::size_t hidden, bool sum_directions);

/// Piecewise max-pooling over conv output rows, segments delimited by the
/// participant positions: left [0, a], inner (a, b], right (b, n).
Var piecewise_max_pool(Tape& tape, Var conv, std::size_t subj_pos, std::size_t obj_pos);

/// Classifier head: o = softmax(W_r tanh(s) + b_r); dropout hits tanh(s)
/// in training mode.
Var classify(Tape& tape, Var s, Var w_r, Var b_r, bool training, double keep_prob, Rng* rng);

struct ForwardOptions {
  bool training = false;
  double keep_prob = 1.0;
  Rng* dropout_rng = nullptr;
};

struct ForwardTrace {
  Var probs;                 // [c]
  std::vector<Var> alphas;   // attention traces; empty for plain encoders
};

/// One context classification model: feature tables, encoder, classifier.
class ContextModel {
 public:
  ContextModel(EncoderConfig cfg, std::size_t d_word, FeatureDims feat_dims);

  void init_params(Rng& rng);

  const EncoderConfig& config() const { return cfg_; }
  std::size_t d_word() const { return d_word_; }
  const FeatureDims& feature_dims() const { return feat_dims_; }
  std::size_t input_width() const { return d_word_ + feat_dims_.feature_width(); }
  std::size_t context_dim() const { return context_vector_dim(cfg_, input_width()); }
  bool has_attention() const { return encoder_has_attention(cfg_.kind); }

  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }

  /// Inserts every parameter as a tape leaf; call once per tape.
  std::map<std::string, Var> lift_params(Tape& tape, bool needs_grad) const;

  ForwardTrace forward(Tape& tape, const std::map<std::string, Var>& pv,
                       const ContextInput& input, const ForwardOptions& opts) const;

  /// Convenience single-context inference.
  ForwardTrace forward(Tape& tape, const ContextInput& input,
                       const ForwardOptions& opts = {}) const;

 private:
  EncoderConfig cfg_;
  std::size_t d_word_;
  FeatureDims feat_dims_;
  ParamStore params_;
};

}  // namespace attex
