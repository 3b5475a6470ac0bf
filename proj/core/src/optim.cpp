#include "attex/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace attex {

Tensor xavier_init(const std::vector<std::size_t>& shape, Rng& rng) {
  double fan_sum;
  if (shape.size() == 1) {
    fan_sum = 2.0 * static_cast<double>(shape[0]);
  } else {
    fan_sum = static_cast<double>(shape.front()) + static_cast<double>(shape.back());
  }
  double limit = std::sqrt(6.0 / fan_sum);
  Tensor t(shape);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-limit, limit);
  return t;
}

Tensor dropout_mask(const std::vector<std::size_t>& shape, double keep_prob, Rng& rng) {
  if (keep_prob <= 0.0 || keep_prob > 1.0) {
    throw std::invalid_argument("dropout: keep_prob must be in (0, 1], got " +
                                std::to_string(keep_prob));
  }
  Tensor mask(shape);
  double inv = 1.0 / keep_prob;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask[i] = rng.uniform01() < keep_prob ? inv : 0.0;
  }
  return mask;
}

Tensor dropout(const Tensor& x, double keep_prob, bool training, Rng& rng) {
  if (keep_prob <= 0.0 || keep_prob > 1.0) {
    throw std::invalid_argument("dropout: keep_prob must be in (0, 1], got " +
                                std::to_string(keep_prob));
  }
  if (!training || keep_prob == 1.0) return x;
  Tensor mask = dropout_mask(x.shape(), keep_prob, rng);
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  return out;
}

Tensor& ParamStore::add(const std::string& name, Tensor init) {
  auto [it, inserted] = values.emplace(name, std::move(init));
  if (!inserted) throw std::logic_error("ParamStore: duplicate parameter " + name);
  return it->second;
}

Tensor& ParamStore::get(const std::string& name) {
  auto it = values.find(name);
  if (it == values.end()) throw std::out_of_range("ParamStore: unknown parameter " + name);
  return it->second;
}

const Tensor& ParamStore::get(const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end()) throw std::out_of_range("ParamStore: unknown parameter " + name);
  return it->second;
}

AdaDelta::AdaDelta(double rho, double epsilon) : rho_(rho), epsilon_(epsilon) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("AdaDelta: rho must be in (0,1)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("AdaDelta: epsilon must be positive");
}

void AdaDelta::step(const std::string& name, Tensor& param, const Tensor& grad) {
  check_same_shape(param, grad, "adadelta_step");
  auto eg = acc_grad_sq_.find(name);
  if (eg == acc_grad_sq_.end()) {
    eg = acc_grad_sq_.emplace(name, Tensor::zeros(param.shape())).first;
    acc_update_sq_.emplace(name, Tensor::zeros(param.shape()));
  }
  Tensor& g2 = eg->second;
  Tensor& u2 = acc_update_sq_.at(name);
  check_same_shape(param, g2, "adadelta_step");
  for (std::size_t i = 0; i < param.size(); ++i) {
    double g = grad[i];
    g2[i] = rho_ * g2[i] + (1.0 - rho_) * g * g;
    double delta = -std::sqrt(u2[i] + epsilon_) / std::sqrt(g2[i] + epsilon_) * g;
    u2[i] = rho_ * u2[i] + (1.0 - rho_) * delta * delta;
    param[i] += delta;
  }
}

}  // namespace attex
