#include "attex/tape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace attex {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

int Tape::check(Var v) const {
  if (v.tape != this || v.id < 0 || static_cast<std::size_t>(v.id) >= nodes_.size()) {
    throw std::invalid_argument("Tape: variable does not belong to this tape");
  }
  return v.id;
}

Var Tape::push(Tensor value, bool needs_grad, std::function<void(Tape&)> back) {
  Node n;
  n.value = std::move(value);
  n.needs_grad = needs_grad;
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return Var{this, static_cast<int>(nodes_.size() - 1)};
}

Tensor& Tape::grad_ref(int id) {
  Node& n = nodes_[id];
  if (n.grad.size() == 0) n.grad = Tensor::zeros(n.value.shape());
  return n.grad;
}

const Tensor& Tape::grad(Var v) const {
  int id = check(v);
  const Node& n = nodes_[id];
  if (n.grad.size() == 0) {
    throw std::logic_error("Tape::grad: gradient not materialized; run backward() first");
  }
  return n.grad;
}

Var Tape::leaf(Tensor value, bool needs_grad) {
  return push(std::move(value), needs_grad, nullptr);
}

// Backward closures capture the output node id explicitly; push() runs
// first so the id is known, then the closure is attached.

Var Tape::add(Var a, Var b) {
  int ia = check(a), ib = check(b);
  check_same_shape(nodes_[ia].value, nodes_[ib].value, "add");
  Tensor out = nodes_[ia].value;
  const Tensor& vb = nodes_[ib].value;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += vb[i];
  Var res = push(std::move(out), wants(ia) || wants(ib), nullptr);
  int self = res.id;
  nodes_[self].back = [self, ia, ib](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    if (t.wants(ia)) {
      Tensor& ga = t.grad_ref(ia);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    }
    if (t.wants(ib)) {
      Tensor& gb = t.grad_ref(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i];
    }
  };
  return res;
}

Var Tape::add_rowvec(Var m, Var v) {
  int im = check(m), iv = check(v);
  const Tensor& vm = nodes_[im].value;
  const Tensor& vv = nodes_[iv].value;
  require(vm.rank() == 2 && vv.rank() == 1 && vm.cols() == vv.size(),
          "add_rowvec: need [n x d] and [d], got " + vm.shape_str() + " and " + vv.shape_str());
  Tensor out = vm;
  for (std::size_t r = 0; r < vm.rows(); ++r)
    for (std::size_t c = 0; c < vm.cols(); ++c) out.at(r, c) += vv[c];
  Var res = push(std::move(out), wants(im) || wants(iv), nullptr);
  int self = res.id;
  nodes_[self].back = [self, im, iv](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    if (t.wants(im)) {
      Tensor& gm = t.grad_ref(im);
      for (std::size_t i = 0; i < g.size(); ++i) gm[i] += g[i];
    }
    if (t.wants(iv)) {
      Tensor& gv = t.grad_ref(iv);
      std::size_t rows = t.nodes_[im].value.rows(), cols = t.nodes_[im].value.cols();
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) gv[c] += g[r * cols + c];
    }
  };
  return res;
}

Var Tape::add_scalar_bcast(Var v, Var s) {
  int iv = check(v), is = check(s);
  const Tensor& vv = nodes_[iv].value;
  const Tensor& vs = nodes_[is].value;
  require(vs.size() == 1, "add_scalar_bcast: second argument must be scalar");
  Tensor out = vv;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += vs[0];
  Var res = push(std::move(out), wants(iv) || wants(is), nullptr);
  int self = res.id;
  nodes_[self].back = [self, iv, is](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    if (t.wants(iv)) {
      Tensor& gv = t.grad_ref(iv);
      for (std::size_t i = 0; i < g.size(); ++i) gv[i] += g[i];
    }
    if (t.wants(is)) {
      Tensor& gs = t.grad_ref(is);
      for (std::size_t i = 0; i < g.size(); ++i) gs[0] += g[i];
    }
  };
  return res;
}

Var Tape::scale(Var a, double k) {
  int ia = check(a);
  Tensor out = nodes_[ia].value;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= k;
  Var res = push(std::move(out), wants(ia), nullptr);
  int self = res.id;
  nodes_[self].back = [self, ia, k](Tape& t) {
    if (!t.wants(ia)) return;
    const Tensor& g = t.nodes_[self].grad;
    Tensor& ga = t.grad_ref(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += k * g[i];
  };
  return res;
}

Var Tape::mul(Var a, Var b) {
  int ia = check(a), ib = check(b);
  check_same_shape(nodes_[ia].value, nodes_[ib].value, "mul");
  Tensor out = nodes_[ia].value;
  const Tensor& vb = nodes_[ib].value;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= vb[i];
  Var res = push(std::move(out), wants(ia) || wants(ib), nullptr);
  int self = res.id;
  nodes_[self].back = [self, ia, ib](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& va = t.nodes_[ia].value;
    const Tensor& vb2 = t.nodes_[ib].value;
    if (t.wants(ia)) {
      Tensor& ga = t.grad_ref(ia);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * vb2[i];
    }
    if (t.wants(ib)) {
      Tensor& gb = t.grad_ref(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * va[i];
    }
  };
  return res;
}

Var Tape::matmul(Var a, Var b) {
  int ia = check(a), ib = check(b);
  const Tensor& va = nodes_[ia].value;
  const Tensor& vb = nodes_[ib].value;
  require(va.rank() == 2 && vb.rank() == 2 && va.cols() == vb.rows(),
          "matmul: shape mismatch " + va.shape_str() + " vs " + vb.shape_str());
  std::size_t m = va.rows(), k = va.cols(), n = vb.cols();
  Tensor out({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = va.data() + i * k;
    double* orow = out.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      double av = arow[p];
      const double* brow = vb.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
  }
  Var res = push(std::move(out), wants(ia) || wants(ib), nullptr);
  int self = res.id;
  nodes_[self].back = [self, ia, ib, m, k, n](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& va2 = t.nodes_[ia].value;
    const Tensor& vb2 = t.nodes_[ib].value;
    if (t.wants(ia)) {  // dA += dC * B^T
      Tensor& ga = t.grad_ref(ia);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          double acc = 0;
          const double* grow = g.data() + i * n;
          const double* brow = vb2.data() + p * n;
          for (std::size_t j = 0; j < n; ++j) acc += grow[j] * brow[j];
          ga[i * k + p] += acc;
        }
    }
    if (t.wants(ib)) {  // dB += A^T * dC
      Tensor& gb = t.grad_ref(ib);
      for (std::size_t p = 0; p < k; ++p)
        for (std::size_t i = 0; i < m; ++i) {
          double av = va2[i * k + p];
          const double* grow = g.data() + i * n;
          double* gbrow = gb.data() + p * n;
          for (std::size_t j = 0; j < n; ++j) gbrow[j] += av * grow[j];
        }
    }
  };
  return res;
}

Var Tape::matvec(Var a, Var x) {
  int ia = check(a), ix = check(x);
  const Tensor& va = nodes_[ia].value;
  const Tensor& vx = nodes_[ix].value;
  require(va.rank() == 2 && vx.rank() == 1 && va.cols() == vx.size(),
          "matvec: shape mismatch " + va.shape_str() + " vs " + vx.shape_str());
  std::size_t m = va.rows(), n = va.cols();
  Tensor out({m});
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = va.data() + i * n;
    double acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc += arow[j] * vx[j];
    out[i] = acc;
  }
  Var res = push(std::move(out), wants(ia) || wants(ix), nullptr);
  int self = res.id;
  nodes_[self].back = [self, ia, ix, m, n](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& va2 = t.nodes_[ia].value;
    const Tensor& vx2 = t.nodes_[ix].value;
    if (t.wants(ia)) {
      Tensor& ga = t.grad_ref(ia);
      for (std::size_t i = 0; i < m; ++i) {
        double gv = g[i];
        double* garow = ga.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) garow[j] += gv * vx2[j];
      }
    }
    if (t.wants(ix)) {
      Tensor& gx = t.grad_ref(ix);
      for (std::size_t i = 0; i < m; ++i) {
        double gv = g[i];
        const double* arow = va2.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) gx[j] += gv * arow[j];
      }
    }
  };
  return res;
}

Var Tape::tmatvec(Var a, Var x) {
  int ia = check(a), ix = check(x);
  const Tensor& va = nodes_[ia].value;
  const Tensor& vx = nodes_[ix].value;
  require(va.rank() == 2 && vx.rank() == 1 && va.rows() == vx.size(),
          "tmatvec: shape mismatch " + va.shape_str() + " vs " + vx.shape_str());
  std::size_t m = va.rows(), n = va.cols();
  Tensor out({n});
  for (std::size_t i = 0; i < m; ++i) {
    double xv = vx[i];
    const double* arow = va.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) out[j] += xv * arow[j];
  }
  Var res = push(std::move(out), wants(ia) || wants(ix), nullptr);
  int self = res.id;
  nodes_[self].back = [self, ia, ix, m, n](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& va2 = t.nodes_[ia].value;
    const Tensor& vx2 = t.nodes_[ix].value;
    if (t.wants(ia)) {
      Tensor& ga = t.grad_ref(ia);
      for (std::size_t i = 0; i < m; ++i) {
        double xv = vx2[i];
        double* garow = ga.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) garow[j] += xv * g[j];
      }
    }
    if (t.wants(ix)) {
      Tensor& gx = t.grad_ref(ix);
      for (std::size_t i = 0; i < m; ++i) {
        const double* arow = va2.data() + i * n;
        double acc = 0;
        for (std::size_t j = 0; j < n; ++j) acc += arow[j] * g[j];
        gx[i] += acc;
      }
    }
  };
  return res;
}

Var Tape::tanh_op(Var x) {
  int ix = check(x);
  Tensor out = nodes_[ix].value;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(out[i]);
  Var res = push(std::move(out), wants(ix), nullptr);
  int self = res.id;
  nodes_[self].back = [self, ix](Tape& t) {
    if (!t.wants(ix)) return;
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& y = t.nodes_[self].value;
    Tensor& gx = t.grad_ref(ix);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * (1.0 - y[i] * y[i]);
  };
  return res;
}

Var Tape::sigmoid_op(Var x) {
  int ix = check(x);
  Tensor out = nodes_[ix].value;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-out[i]));
  Var res = push(std::move(out), wants(ix), nullptr);
  int self = res.id;
  nodes_[self].back = [self, ix](Tape& t) {
    if (!t.wants(ix)) return;
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& y = t.nodes_[self].value;
    Tensor& gx = t.grad_ref(ix);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * y[i] * (1.0 - y[i]);
  };
  return res;
}

Var Tape::exp_op(Var x) {
  int ix = check(x);
  Tensor out = nodes_[ix].value;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(out[i]);
  Var res = push(std::move(out), wants(ix), nullptr);
  int self = res.id;
  nodes_[self].back = [self, ix](Tape& t) {
    if (!t.wants(ix)) return;
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& y = t.nodes_[self].value;
    Tensor& gx = t.grad_ref(ix);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * y[i];
  };
  return res;
}

Var Tape::log_clamped(Var x, double floor) {
  int ix = check(x);
  require(floor > 0, "log_clamped: floor must be positive");
  const Tensor& vx = nodes_[ix].value;
  Tensor out = vx;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::log(std::max(out[i], floor));
  Var res = push(std::move(out), wants(ix), nullptr);
  int self = res.id;
  nodes_[self].back = [self, ix, floor](Tape& t) {
    if (!t.wants(ix)) return;
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& vx2 = t.nodes_[ix].value;
    Tensor& gx = t.grad_ref(ix);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (vx2[i] > floor) gx[i] += g[i] / vx2[i];
    }
  };
  return res;
}

Var Tape::softmax_vec(Var v) {
  int iv = check(v);
  const Tensor& x = nodes_[iv].value;
  require(x.rank() == 1 && x.size() >= 1, "softmax: need non-empty vector");
  double mx = x[0];
  for (std::size_t i = 1; i < x.size(); ++i) mx = std::max(mx, x[i]);
  Tensor out({x.size()});
  double z = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::exp(x[i] - mx);
    z += out[i];
  }
  for (std::size_t i = 0; i < x.size(); ++i) out[i] /= z;
  Var res = push(std::move(out), wants(iv), nullptr);
  int self = res.id;
  nodes_[self].back = [self, iv](Tape& t) {
    if (!t.wants(iv)) return;
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& y = t.nodes_[self].value;
    Tensor& gx = t.grad_ref(iv);
    double dot = 0;
    for (std::size_t i = 0; i < g.size(); ++i) dot += g[i] * y[i];
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += y[i] * (g[i] - dot);
  };
  return res;
}

Var Tape::sum_vec(Var v) {
  int iv = check(v);
  const Tensor& x = nodes_[iv].value;
  double acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i];
  Var res = push(Tensor::vector({acc}), wants(iv), nullptr);
  int self = res.id;
  nodes_[self].back = [self, iv](Tape& t) {
    if (!t.wants(iv)) return;
    double g = t.nodes_[self].grad[0];
    Tensor& gx = t.grad_ref(iv);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g;
  };
  return res;
}

Var Tape::mean_vec(Var v) {
  std::size_t n = val(v).size();
  require(n > 0, "mean_vec: empty vector");
  return scale(sum_vec(v), 1.0 / static_cast<double>(n));
}

Var Tape::concat_vec(const std::vector<Var>& parts) {
  require(!parts.empty(), "concat_vec: no parts");
  std::vector<int> ids;
  std::size_t total = 0;
  bool ng = false;
  for (Var p : parts) {
    int ip = check(p);
    require(nodes_[ip].value.rank() == 1, "concat_vec: parts must be vectors");
    total += nodes_[ip].value.size();
    ng = ng || wants(ip);
    ids.push_back(ip);
  }
  Tensor out({total});
  std::size_t off = 0;
  for (int ip : ids) {
    const Tensor& p = nodes_[ip].value;
    std::copy(p.data(), p.data() + p.size(), out.data() + off);
    off += p.size();
  }
  Var res = push(std::move(out), ng, nullptr);
  int self = res.id;
  nodes_[self].back = [self, ids](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    std::size_t off2 = 0;
    for (int ip : ids) {
      std::size_t sz = t.nodes_[ip].value.size();
      if (t.wants(ip)) {
        Tensor& gp = t.grad_ref(ip);
        for (std::size_t i = 0; i < sz; ++i) gp[i] += g[off2 + i];
      }
      off2 += sz;
    }
  };
  return res;
}

Var Tape::slice_vec(Var v, std::size_t begin, std::size_t len) {
  int iv = check(v);
  const Tensor& x = nodes_[iv].value;
  require(x.rank() == 1 && begin + len <= x.size(), "slice_vec: range out of bounds");
  Tensor out({len});
  std::copy(x.data() + begin, x.data() + begin + len, out.data());
  Var res = push(std::move(out), wants(iv), nullptr);
  int self = res.id;
  nodes_[self].back = [self, iv, begin, len](Tape& t) {
    if (!t.wants(iv)) return;
    const Tensor& g = t.nodes_[self].grad;
    Tensor& gx = t.grad_ref(iv);
    for (std::size_t i = 0; i < len; ++i) gx[begin + i] += g[i];
  };
  return res;
}

Var Tape::row(Var m, std::size_t i) {
  int im = check(m);
  const Tensor& x = nodes_[im].value;
  require(x.rank() == 2 && i < x.rows(), "row: index out of bounds");
  std::size_t cols = x.cols();
  Tensor out({cols});
  std::copy(x.data() + i * cols, x.data() + (i + 1) * cols, out.data());
  Var res = push(std::move(out), wants(im), nullptr);
  int self = res.id;
  nodes_[self].back = [self, im, i, cols](Tape& t) {
    if (!t.wants(im)) return;
    const Tensor& g = t.nodes_[self].grad;
    Tensor& gx = t.grad_ref(im);
    for (std::size_t c = 0; c < cols; ++c) gx[i * cols + c] += g[c];
  };
  return res;
}

Var Tape::rows_gather(Var table, std::vector<std::size_t> indices) {
  int it = check(table);
  const Tensor& x = nodes_[it].value;
  require(x.rank() == 2, "rows_gather: table must be a matrix");
  std::size_t cols = x.cols();
  for (std::size_t idx : indices)
    require(idx < x.rows(), "rows_gather: index out of bounds");
  Tensor out({indices.size(), cols});
  for (std::size_t r = 0; r < indices.size(); ++r)
    std::copy(x.data() + indices[r] * cols, x.data() + (indices[r] + 1) * cols,
              out.data() + r * cols);
  Var res = push(std::move(out), wants(it), nullptr);
  int self = res.id;
  nodes_[self].back = [self, it, indices = std::move(indices), cols](Tape& t) {
    if (!t.wants(it)) return;
    const Tensor& g = t.nodes_[self].grad;
    Tensor& gx = t.grad_ref(it);
    for (std::size_t r = 0; r < indices.size(); ++r)
      for (std::size_t c = 0; c < cols; ++c) gx[indices[r] * cols + c] += g[r * cols + c];
  };
  return res;
}

Var Tape::hstack(const std::vector<Var>& mats) {
  require(!mats.empty(), "hstack: no blocks");
  std::vector<int> ids;
  std::size_t rows = 0, total_cols = 0;
  bool ng = false;
  for (Var m : mats) {
    int im = check(m);
    const Tensor& x = nodes_[im].value;
    require(x.rank() == 2, "hstack: blocks must be matrices");
    if (ids.empty()) rows = x.rows();
    require(x.rows() == rows, "hstack: row count mismatch");
    total_cols += x.cols();
    ng = ng || wants(im);
    ids.push_back(im);
  }
  Tensor out({rows, total_cols});
  std::size_t coff = 0;
  for (int im : ids) {
    const Tensor& x = nodes_[im].value;
    for (std::size_t r = 0; r < rows; ++r)
      std::copy(x.data() + r * x.cols(), x.data() + (r + 1) * x.cols(),
                out.data() + r * total_cols + coff);
    coff += x.cols();
  }
  Var res = push(std::move(out), ng, nullptr);
  int self = res.id;
  nodes_[self].back = [self, ids, rows, total_cols](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    std::size_t coff2 = 0;
    for (int im : ids) {
      std::size_t bc = t.nodes_[im].value.cols();
      if (t.wants(im)) {
        Tensor& gx = t.grad_ref(im);
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t c = 0; c < bc; ++c) gx[r * bc + c] += g[r * total_cols + coff2 + c];
      }
      coff2 += bc;
    }
  };
  return res;
}

Var Tape::stack_rows(const std::vector<Var>& rows) {
  require(!rows.empty(), "stack_rows: no rows");
  std::vector<int> ids;
  std::size_t d = 0;
  bool ng = false;
  for (Var r : rows) {
    int ir = check(r);
    const Tensor& x = nodes_[ir].value;
    require(x.rank() == 1, "stack_rows: rows must be vectors");
    if (ids.empty()) d = x.size();
    require(x.size() == d, "stack_rows: length mismatch");
    ng = ng || wants(ir);
    ids.push_back(ir);
  }
  Tensor out({ids.size(), d});
  for (std::size_t r = 0; r < ids.size(); ++r) {
    const Tensor& x = nodes_[ids[r]].value;
    std::copy(x.data(), x.data() + d, out.data() + r * d);
  }
  Var res = push(std::move(out), ng, nullptr);
  int self = res.id;
  nodes_[self].back = [self, ids, d](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    for (std::size_t r = 0; r < ids.size(); ++r) {
      if (!t.wants(ids[r])) continue;
      Tensor& gr = t.grad_ref(ids[r]);
      for (std::size_t c = 0; c < d; ++c) gr[c] += g[r * d + c];
    }
  };
  return res;
}

Var Tape::concat_each_row(Var x, Var f) {
  int ix = check(x), iff = check(f);
  const Tensor& vx = nodes_[ix].value;
  const Tensor& vf = nodes_[iff].value;
  require(vx.rank() == 2 && vf.rank() == 1, "concat_each_row: need matrix and vector");
  std::size_t n = vx.rows(), m = vx.cols(), d = vf.size();
  Tensor out({n, m + d});
  for (std::size_t r = 0; r < n; ++r) {
    std::copy(vx.data() + r * m, vx.data() + (r + 1) * m, out.data() + r * (m + d));
    std::copy(vf.data(), vf.data() + d, out.data() + r * (m + d) + m);
  }
  Var res = push(std::move(out), wants(ix) || wants(iff), nullptr);
  int self = res.id;
  nodes_[self].back = [self, ix, iff, n, m, d](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    if (t.wants(ix)) {
      Tensor& gx = t.grad_ref(ix);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < m; ++c) gx[r * m + c] += g[r * (m + d) + c];
    }
    if (t.wants(iff)) {
      Tensor& gf = t.grad_ref(iff);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) gf[c] += g[r * (m + d) + m + c];
    }
  };
  return res;
}

Var Tape::pick(Var v, std::size_t i) {
  int iv = check(v);
  const Tensor& x = nodes_[iv].value;
  require(x.rank() == 1 && i < x.size(), "pick: index out of bounds");
  Var res = push(Tensor::vector({x[i]}), wants(iv), nullptr);
  int self = res.id;
  nodes_[self].back = [self, iv, i](Tape& t) {
    if (!t.wants(iv)) return;
    t.grad_ref(iv)[i] += t.nodes_[self].grad[0];
  };
  return res;
}

Var Tape::max_of(const std::vector<Var>& scalars) {
  require(!scalars.empty(), "max_of: empty argument list");
  std::vector<int> ids;
  for (Var s : scalars) {
    int is = check(s);
    require(nodes_[is].value.size() == 1, "max_of: arguments must be scalars");
    ids.push_back(is);
  }
  std::size_t arg = 0;
  double best = nodes_[ids[0]].value[0];
  for (std::size_t i = 1; i < ids.size(); ++i) {
    if (nodes_[ids[i]].value[0] > best) {
      best = nodes_[ids[i]].value[0];
      arg = i;
    }
  }
  bool ng = false;
  for (int is : ids) ng = ng || wants(is);
  Var res = push(Tensor::vector({best}), ng, nullptr);
  int self = res.id;
  int winner = ids[arg];
  nodes_[self].back = [self, winner](Tape& t) {
    if (!t.wants(winner)) return;
    t.grad_ref(winner)[0] += t.nodes_[self].grad[0];
  };
  return res;
}

Var Tape::conv1d(Var x, Var w, std::size_t window) {
  int ix = check(x), iw = check(w);
  const Tensor& vx = nodes_[ix].value;
  const Tensor& vw = nodes_[iw].value;
  require(vx.rank() == 2 && vw.rank() == 2, "conv1d: need matrices");
  std::size_t n = vx.rows(), m = vx.cols(), t_filters = vw.rows();
  require(window >= 1 && vw.cols() == window * m,
          "conv1d: filter width " + vw.shape_str() + " does not match window*m");
  // c[j, i] = w_i . [x_{j-window+1} ... x_j], zero-padded on the left.
  Tensor out({n, t_filters});
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < t_filters; ++i) {
      const double* wr = vw.data() + i * window * m;
      double acc = 0;
      for (std::size_t u = 0; u < window; ++u) {
        std::ptrdiff_t src = static_cast<std::ptrdiff_t>(j) -
                             static_cast<std::ptrdiff_t>(window) + 1 +
                             static_cast<std::ptrdiff_t>(u);
        if (src < 0) continue;
        const double* xr = vx.data() + static_cast<std::size_t>(src) * m;
        const double* wu = wr + u * m;
        for (std::size_t v = 0; v < m; ++v) acc += wu[v] * xr[v];
      }
      out.at(j, i) = acc;
    }
  }
  Var res = push(std::move(out), wants(ix) || wants(iw), nullptr);
  int self = res.id;
  nodes_[self].back = [self, ix, iw, window, n, m, t_filters](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& vx2 = t.nodes_[ix].value;
    const Tensor& vw2 = t.nodes_[iw].value;
    bool wx = t.wants(ix), ww = t.wants(iw);
    if (!wx && !ww) return;
    Tensor* gx = wx ? &t.grad_ref(ix) : nullptr;
    Tensor* gw = ww ? &t.grad_ref(iw) : nullptr;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < t_filters; ++i) {
        double gv = g[j * t_filters + i];
        if (gv == 0) continue;
        for (std::size_t u = 0; u < window; ++u) {
          std::ptrdiff_t src = static_cast<std::ptrdiff_t>(j) -
                               static_cast<std::ptrdiff_t>(window) + 1 +
                               static_cast<std::ptrdiff_t>(u);
          if (src < 0) continue;
          std::size_t s = static_cast<std::size_t>(src);
          for (std::size_t v = 0; v < m; ++v) {
            if (gw) (*gw)[i * window * m + u * m + v] += gv * vx2[s * m + v];
            if (gx) (*gx)[s * m + v] += gv * vw2[i * window * m + u * m + v];
          }
        }
      }
    }
  };
  return res;
}

Var Tape::col_max(Var m) {
  const Tensor& x = val(m);
  require(x.rank() == 2, "col_max: need matrix");
  return col_max_range(m, 0, x.rows());
}

Var Tape::col_max_range(Var m, std::size_t r0, std::size_t r1) {
  int im = check(m);
  const Tensor& x = nodes_[im].value;
  require(x.rank() == 2 && r0 <= r1 && r1 <= x.rows(), "col_max_range: bad row range");
  std::size_t cols = x.cols();
  Tensor out({cols});
  std::vector<std::size_t> argmax(cols, 0);
  if (r0 == r1) {
    // Empty segment contributes a zero block and no gradient.
    Var res = push(std::move(out), false, nullptr);
    return res;
  }
  for (std::size_t c = 0; c < cols; ++c) {
    double best = x.at(r0, c);
    std::size_t arg = r0;
    for (std::size_t r = r0 + 1; r < r1; ++r) {
      if (x.at(r, c) > best) {
        best = x.at(r, c);
        arg = r;
      }
    }
    out[c] = best;
    argmax[c] = arg;
  }
  Var res = push(std::move(out), wants(im), nullptr);
  int self = res.id;
  nodes_[self].back = [self, im, cols, argmax = std::move(argmax)](Tape& t) {
    if (!t.wants(im)) return;
    const Tensor& g = t.nodes_[self].grad;
    Tensor& gx = t.grad_ref(im);
    for (std::size_t c = 0; c < cols; ++c) gx[argmax[c] * cols + c] += g[c];
  };
  return res;
}

Var Tape::lstm_cell(Var x, Var h_prev, Var c_prev, Var w, Var u, Var b) {
  int ix = check(x), ih = check(h_prev), ic = check(c_prev);
  int iw = check(w), iu = check(u), ib = check(b);
  const Tensor& vx = nodes_[ix].value;
  const Tensor& vh = nodes_[ih].value;
  const Tensor& vc = nodes_[ic].value;
  const Tensor& vw = nodes_[iw].value;
  const Tensor& vu = nodes_[iu].value;
  const Tensor& vb = nodes_[ib].value;
  std::size_t hdim = vh.size();
  std::size_t mdim = vx.size();
  require(vc.size() == hdim && vw.rank() == 2 && vu.rank() == 2 && vw.rows() == 4 * hdim &&
              vw.cols() == mdim && vu.rows() == 4 * hdim && vu.cols() == hdim &&
              vb.size() == 4 * hdim,
          "lstm_cell: inconsistent shapes");
  // z = W x + U h_prev + b, gates (i, f, g, o)
  std::vector<double> z(4 * hdim);
  for (std::size_t r = 0; r < 4 * hdim; ++r) {
    const double* wr = vw.data() + r * mdim;
    double acc = vb[r];
    for (std::size_t j2 = 0; j2 < mdim; ++j2) acc += wr[j2] * vx[j2];
    const double* ur = vu.data() + r * hdim;
    for (std::size_t j2 = 0; j2 < hdim; ++j2) acc += ur[j2] * vh[j2];
    z[r] = acc;
  }
  std::vector<double> gi(hdim), gf(hdim), gg(hdim), go(hdim), tc(hdim);
  Tensor out({2 * hdim});
  for (std::size_t j2 = 0; j2 < hdim; ++j2) {
    gi[j2] = 1.0 / (1.0 + std::exp(-z[j2]));
    gf[j2] = 1.0 / (1.0 + std::exp(-z[hdim + j2]));
    gg[j2] = std::tanh(z[2 * hdim + j2]);
    go[j2] = 1.0 / (1.0 + std::exp(-z[3 * hdim + j2]));
    double c_new = gf[j2] * vc[j2] + gi[j2] * gg[j2];
    tc[j2] = std::tanh(c_new);
    out[j2] = go[j2] * tc[j2];
    out[hdim + j2] = c_new;
  }
  bool ng = wants(ix) || wants(ih) || wants(ic) || wants(iw) || wants(iu) || wants(ib);
  Var res = push(std::move(out), ng, nullptr);
  int self = res.id;
  nodes_[self].back = [self, ix, ih, ic, iw, iu, ib, hdim, mdim, gi = std::move(gi),
                       gf = std::move(gf), gg = std::move(gg), go = std::move(go),
                       tc = std::move(tc)](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& vx2 = t.nodes_[ix].value;
    const Tensor& vh2 = t.nodes_[ih].value;
    const Tensor& vc2 = t.nodes_[ic].value;
    const Tensor& vw2 = t.nodes_[iw].value;
    const Tensor& vu2 = t.nodes_[iu].value;
    std::vector<double> dz(4 * hdim);
    std::vector<double> dcprev(hdim);
    for (std::size_t j2 = 0; j2 < hdim; ++j2) {
      double dh = g[j2];
      double dc = g[hdim + j2] + dh * go[j2] * (1.0 - tc[j2] * tc[j2]);
      double d_o = dh * tc[j2];
      double d_i = dc * gg[j2];
      double d_g = dc * gi[j2];
      double d_f = dc * vc2[j2];
      dcprev[j2] = dc * gf[j2];
      dz[j2] = d_i * gi[j2] * (1.0 - gi[j2]);
      dz[hdim + j2] = d_f * gf[j2] * (1.0 - gf[j2]);
      dz[2 * hdim + j2] = d_g * (1.0 - gg[j2] * gg[j2]);
      dz[3 * hdim + j2] = d_o * go[j2] * (1.0 - go[j2]);
    }
    if (t.wants(ic)) {
      Tensor& gc = t.grad_ref(ic);
      for (std::size_t j2 = 0; j2 < hdim; ++j2) gc[j2] += dcprev[j2];
    }
    if (t.wants(ib)) {
      Tensor& gb = t.grad_ref(ib);
      for (std::size_t r = 0; r < 4 * hdim; ++r) gb[r] += dz[r];
    }
    if (t.wants(iw)) {
      Tensor& gw = t.grad_ref(iw);
      for (std::size_t r = 0; r < 4 * hdim; ++r) {
        double d = dz[r];
        if (d == 0) continue;
        double* gwr = gw.data() + r * mdim;
        for (std::size_t j2 = 0; j2 < mdim; ++j2) gwr[j2] += d * vx2[j2];
      }
    }
    if (t.wants(iu)) {
      Tensor& gu = t.grad_ref(iu);
      for (std::size_t r = 0; r < 4 * hdim; ++r) {
        double d = dz[r];
        if (d == 0) continue;
        double* gur = gu.data() + r * hdim;
        for (std::size_t j2 = 0; j2 < hdim; ++j2) gur[j2] += d * vh2[j2];
      }
    }
    if (t.wants(ix)) {
      Tensor& gx = t.grad_ref(ix);
      for (std::size_t r = 0; r < 4 * hdim; ++r) {
        double d = dz[r];
        if (d == 0) continue;
        const double* wr = vw2.data() + r * mdim;
        for (std::size_t j2 = 0; j2 < mdim; ++j2) gx[j2] += d * wr[j2];
      }
    }
    if (t.wants(ih)) {
      Tensor& gh = t.grad_ref(ih);
      for (std::size_t r = 0; r < 4 * hdim; ++r) {
        double d = dz[r];
        if (d == 0) continue;
        const double* ur = vu2.data() + r * hdim;
        for (std::size_t j2 = 0; j2 < hdim; ++j2) gh[j2] += d * ur[j2];
      }
    }
  };
  return res;
}

void Tape::backward(Var loss) {
  int il = check(loss);
  if (nodes_[il].value.size() != 1) {
    throw std::invalid_argument("backward: loss must be scalar, got shape " +
                                nodes_[il].value.shape_str());
  }
  grad_ref(il)[0] += 1.0;
  for (int i = il; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.needs_grad || !n.back) continue;
    if (n.grad.size() == 0) continue;  // not reached from the loss
    n.back(*this);
  }
}

}  // namespace attex
