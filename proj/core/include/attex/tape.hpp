#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "attex/tensor.hpp"

namespace attex {

class Tape;

/// Handle to a node on a tape. Cheap to copy; valid for the tape's lifetime.
struct Var {
  Tape* tape = nullptr;
  int id = -1;
  bool valid() const { return tape != nullptr && id >= 0; }
};

/// Reverse-mode autodiff over a closed op set. Nodes are appended in
/// evaluation order, so the tape itself is a topological order and the
/// backward sweep is a single reverse pass. A tape instance is
/// single-threaded; parameters live outside and enter as leaves.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var leaf(Tensor value, bool needs_grad = false);
  Var constant(Tensor value) { return leaf(std::move(value), false); }
  Var scalar(double v) { return constant(Tensor::vector({v})); }

  // Elementwise and broadcasting arithmetic.
  Var add(Var a, Var b);
  Var add_rowvec(Var m, Var v);      // [n x d] + [d], per row
  Var add_scalar_bcast(Var v, Var s);  // vector + scalar node
  Var scale(Var a, double k);
  Var mul(Var a, Var b);

  // Linear algebra.
  Var matmul(Var a, Var b);          // [m x k] * [k x n]
  Var matvec(Var a, Var x);          // [m x n] * [n] -> [m]
  Var tmatvec(Var a, Var x);         // [m x n]^T * [m] -> [n]

  // Nonlinearities.
  Var tanh_op(Var x);
  Var sigmoid_op(Var x);
  Var exp_op(Var x);
  Var log_clamped(Var x, double floor);  // log(max(x, floor))

  // Reductions and reshaping.
  Var softmax_vec(Var v);            // max-subtracted, stable
  Var sum_vec(Var v);                // -> scalar (shape [1])
  Var mean_vec(Var v);
  Var concat_vec(const std::vector<Var>& parts);
  Var slice_vec(Var v, std::size_t begin, std::size_t len);
  Var row(Var m, std::size_t i);
  Var rows_gather(Var table, std::vector<std::size_t> indices);
  Var hstack(const std::vector<Var>& mats);  // [n x d_i] blocks -> [n x sum d_i]
  Var stack_rows(const std::vector<Var>& rows);  // n vectors of length d -> [n x d]
  Var concat_each_row(Var x, Var f); // append vector f to every row of x
  Var pick(Var v, std::size_t i);    // -> scalar
  Var max_of(const std::vector<Var>& scalars);  // gradient to the argmax only

  // Sequence ops.
  Var conv1d(Var x, Var w, std::size_t window);  // x [n x m], w [t x window*m] -> [n x t]
  Var col_max(Var m);                            // column maxima -> [t]
  Var col_max_range(Var m, std::size_t r0, std::size_t r1);  // rows [r0, r1); empty -> zeros
  // Fused LSTM step: gate order (input, forget, cell, output) in w, u, b.
  // Returns [h_t ; c_t] as a vector of length 2h.
  Var lstm_cell(Var x, Var h_prev, Var c_prev, Var w, Var u, Var b);

  /// Reverse sweep from a scalar loss; accumulates into grad() of every
  /// needs_grad node. Throws if loss is not scalar.
  void backward(Var loss);

  const Tensor& val(Var v) const { return nodes_[check(v)].value; }
  Tensor& val(Var v) { return nodes_[check(v)].value; }
  const Tensor& grad(Var v) const;
  /// True when backward reached this node (its gradient is materialized).
  bool has_grad(Var v) const { return nodes_[check(v)].grad.size() > 0; }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;  // materialized lazily at backward time
    bool needs_grad = false;
    std::function<void(Tape&)> back;  // empty for leaves
  };

  int check(Var v) const;
  Var push(Tensor value, bool needs_grad, std::function<void(Tape&)> back);
  Tensor& grad_ref(int id);
  bool wants(int id) const { return nodes_[id].needs_grad; }

  std::deque<Node> nodes_;
};

}  // namespace attex
