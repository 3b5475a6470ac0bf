#pragma once

#include <map>
#include <string>

#include "attex/rng.hpp"
#include "attex/tensor.hpp"

namespace attex {

/// Uniform Xavier/Glorot initialization: values in +-sqrt(6/(fan_in+fan_out)).
/// Vectors use fan_in = fan_out = length; matrices use rows + cols.
Tensor xavier_init(const std::vector<std::size_t>& shape, Rng& rng);

/// Inverted dropout mask: entries are 1/keep_prob with probability keep_prob,
/// else 0. Multiplying by the mask is the training-mode transform; inference
/// applies no mask at all.
Tensor dropout_mask(const std::vector<std::size_t>& shape, double keep_prob, Rng& rng);

/// Applies dropout directly to a tensor (outside any tape).
Tensor dropout(const Tensor& x, double keep_prob, bool training, Rng& rng);

/// Named trainable tensors. std::map keeps iteration deterministic, which
/// the checkpoint format and the optimizer sweep both rely on.
struct ParamStore {
  std::map<std::string, Tensor> values;

  Tensor& add(const std::string& name, Tensor init);
  Tensor& get(const std::string& name);
  const Tensor& get(const std::string& name) const;
  bool has(const std::string& name) const { return values.count(name) > 0; }
};

/// AdaDelta: two decayed accumulators per parameter, no learning rate.
class AdaDelta {
 public:
  AdaDelta(double rho, double epsilon);

  /// In-place update of param from grad; accumulator state is keyed by name
  /// and created on first use.
  void step(const std::string& name, Tensor& param, const Tensor& grad);

  double rho() const { return rho_; }
  double epsilon() const { return epsilon_; }

  std::map<std::string, Tensor>& acc_grad_sq() { return acc_grad_sq_; }
  std::map<std::string, Tensor>& acc_update_sq() { return acc_update_sq_; }

 private:
  double rho_;
  double epsilon_;
  std::map<std::string, Tensor> acc_grad_sq_;
  std::map<std::string, Tensor> acc_update_sq_;
};

}  // namespace attex
