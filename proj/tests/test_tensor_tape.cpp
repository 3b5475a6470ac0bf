#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <functional>

#include "attex/tape.hpp"
#include "attex/tensor.hpp"
#include "testutil.hpp"

using namespace attex;
using testutil::fd_gradient;
using testutil::matmul_oracle;
using testutil::max_rel_err;
using testutil::random_tensor;

TEST_CASE("tensor shape bookkeeping") {
  Tensor t({2, 3});
  CHECK(t.size() == 6);
  CHECK(t.rows() == 2);
  CHECK(t.cols() == 3);
  CHECK(t.all_finite());
  CHECK_THROWS_AS(Tensor({2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Tensor({2, 2}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("matmul identity and hand cases") {
  Tape tape;
  Var eye = tape.constant(Tensor::matrix(2, 2, {1, 0, 0, 1}));
  Var v = tape.constant(Tensor::matrix(2, 1, {3, 4}));
  const Tensor& r = tape.val(tape.matmul(eye, v));
  CHECK(r.at(0, 0) == doctest::Approx(3.0));
  CHECK(r.at(1, 0) == doctest::Approx(4.0));

  Var a = tape.constant(Tensor::matrix(1, 2, {1, 2}));
  Var b = tape.constant(Tensor::matrix(2, 1, {3, 4}));
  CHECK(tape.val(tape.matmul(a, b))[0] == doctest::Approx(11.0));
}

TEST_CASE("matmul matches triple-loop oracle") {
  Rng rng(42);
  Tensor a = random_tensor({3, 4}, rng);
  Tensor b = random_tensor({4, 2}, rng);
  Tape tape;
  const Tensor& got = tape.val(tape.matmul(tape.constant(a), tape.constant(b)));
  Tensor expect = matmul_oracle(a, b);
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(std::abs(got[i] - expect[i]) < 1e-12);
  }
}

TEST_CASE("matmul shape mismatch names both shapes") {
  Tape tape;
  Var a = tape.constant(Tensor({2, 3}));
  Var b = tape.constant(Tensor({2, 3}));
  CHECK_THROWS_WITH_AS(tape.matmul(a, b), doctest::Contains("[2x3]"), std::invalid_argument);
}

TEST_CASE("softmax trivial identities") {
  Tape tape;
  const Tensor& two = tape.val(tape.softmax_vec(tape.constant(Tensor::vector({0.0, 0.0}))));
  CHECK(two[0] == doctest::Approx(0.5));
  CHECK(two[1] == doctest::Approx(0.5));

  const Tensor& three =
      tape.val(tape.softmax_vec(tape.constant(Tensor::vector({7.3, 7.3, 7.3}))));
  for (std::size_t i = 0; i < 3; ++i) CHECK(three[i] == doctest::Approx(1.0 / 3.0));

  const Tensor& closed =
      tape.val(tape.softmax_vec(tape.constant(Tensor::vector({std::log(2.0), 0.0}))));
  CHECK(closed[0] == doctest::Approx(2.0 / 3.0));
  CHECK(closed[1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("softmax is a shift-invariant probability vector") {
  Rng rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    std::size_t n = 1 + rng.below(8);
    Tensor z = random_tensor({n}, rng, 5.0);
    Tensor shifted = z;
    double c = rng.uniform(-100.0, 100.0);
    for (std::size_t i = 0; i < n; ++i) shifted[i] += c;
    Tape tape;
    const Tensor& p = tape.val(tape.softmax_vec(tape.constant(z)));
    const Tensor& q = tape.val(tape.softmax_vec(tape.constant(shifted)));
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(p[i] >= 0.0);
      sum += p[i];
      CHECK(p[i] == doctest::Approx(q[i]).epsilon(1e-9));
    }
    CHECK(std::abs(sum - 1.0) < 1e-6);
  }
}

TEST_CASE("tanh op values and saturation") {
  Tape tape;
  CHECK(tape.val(tape.tanh_op(tape.constant(Tensor::vector({0.0}))))[0] == 0.0);
  Var big = tape.leaf(Tensor::vector({30.0}), true);
  Var out = tape.tanh_op(big);
  CHECK(tape.val(out)[0] == doctest::Approx(1.0));
  Var loss = tape.sum_vec(out);
  tape.backward(loss);
  CHECK(tape.grad(big)[0] == doctest::Approx(0.0));
}

TEST_CASE("tanh gradient matches finite differences") {
  auto f = [](const Tensor& x) { return std::tanh(x[0]); };
  Tensor at = Tensor::vector({0.5});
  Tensor fd = fd_gradient(f, at);
  Tape tape;
  Var x = tape.leaf(at, true);
  tape.backward(tape.sum_vec(tape.tanh_op(x)));
  CHECK(testutil::rel_err(tape.grad(x)[0], fd[0]) < 1e-6);
}

TEST_CASE("backward of a linear map broadcasts the input") {
  // loss = sum(W x): dW = x broadcast over rows.
  Rng rng(3);
  Tensor w = random_tensor({3, 4}, rng);
  Tensor x = random_tensor({4}, rng);
  Tape tape;
  Var wv = tape.leaf(w, true);
  Var xv = tape.constant(x);
  tape.backward(tape.sum_vec(tape.matvec(wv, xv)));
  const Tensor& gw = tape.grad(wv);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 4; ++c) CHECK(gw.at(r, c) == doctest::Approx(x[c]));
}

TEST_CASE("backward rejects non-scalar losses") {
  Tape tape;
  Var v = tape.leaf(Tensor::vector({1.0, 2.0}), true);
  CHECK_THROWS_AS(tape.backward(v), std::invalid_argument);
}

TEST_CASE("constant loss produces zero gradients") {
  Tape tape;
  Var x = tape.leaf(Tensor::vector({1.0, -2.0}), true);
  Var zero = tape.scale(tape.sum_vec(x), 0.0);
  tape.backward(zero);
  CHECK(tape.grad(x)[0] == 0.0);
  CHECK(tape.grad(x)[1] == 0.0);
}

namespace {

// Generic finite-difference check: the op output is contracted against a
// fixed weight vector so every output coordinate influences the loss.
void check_unary_op(const char* name, const std::function<Var(Tape&, Var)>& apply,
                    const Tensor& at, Rng& rng) {
  std::size_t out_size;
  {
    Tape probe;
    out_size = probe.val(apply(probe, probe.leaf(at))).size();
  }
  Tensor weights = random_tensor({out_size}, rng);
  auto loss = [&](const Tensor& input) {
    Tape t;
    Var y = apply(t, t.leaf(input));
    return t.val(t.sum_vec(t.mul(y, t.constant(weights))))[0];
  };
  Tape t;
  Var v = t.leaf(at, true);
  Var y = apply(t, v);
  t.backward(t.sum_vec(t.mul(y, t.constant(weights))));
  Tensor fd = fd_gradient(loss, at);
  CHECK_MESSAGE(max_rel_err(t.grad(v), fd) < 1e-5, name);
}

}  // namespace

TEST_CASE("elementwise and reduction ops match finite differences") {
  Rng rng(99);
  for (int rep = 0; rep < 5; ++rep) {
    std::size_t n = 2 + rng.below(6);
    Tensor at = random_tensor({n}, rng, 1.5);
    check_unary_op("tanh", [](Tape& t, Var v) { return t.tanh_op(v); }, at, rng);
    check_unary_op("sigmoid", [](Tape& t, Var v) { return t.sigmoid_op(v); }, at, rng);
    check_unary_op("exp", [](Tape& t, Var v) { return t.exp_op(v); }, at, rng);
    check_unary_op("log_of_exp",
                   [](Tape& t, Var v) { return t.log_clamped(t.exp_op(v), 1e-12); }, at, rng);
    check_unary_op("softmax", [](Tape& t, Var v) { return t.softmax_vec(v); }, at, rng);
    check_unary_op("scale", [](Tape& t, Var v) { return t.scale(v, -1.7); }, at, rng);
    check_unary_op("slice",
                   [n](Tape& t, Var v) { return t.slice_vec(v, 1, n - 1); }, at, rng);
    check_unary_op("sum", [](Tape& t, Var v) { return t.sum_vec(v); }, at, rng);
    check_unary_op("mean", [](Tape& t, Var v) { return t.mean_vec(v); }, at, rng);

    Tensor mat = random_tensor({3, n}, rng, 1.5);
    check_unary_op("row", [](Tape& t, Var v) { return t.row(v, 1); }, mat, rng);
    check_unary_op("col_max", [](Tape& t, Var v) { return t.col_max(v); }, mat, rng);
    check_unary_op("col_max_range",
                   [](Tape& t, Var v) { return t.col_max_range(v, 1, 3); }, mat, rng);
    check_unary_op("rows_gather",
                   [](Tape& t, Var v) {
                     Var g = t.rows_gather(v, {2, 0, 2});
                     return t.concat_vec({t.row(g, 0), t.row(g, 1), t.row(g, 2)});
                   },
                   mat, rng);
  }
}

TEST_CASE("binary and structural ops match finite differences") {
  Rng rng(123);
  // matmul: both sides.
  {
    Tensor a = random_tensor({3, 4}, rng), b = random_tensor({4, 2}, rng);
    Tensor w = random_tensor({3 * 2}, rng);
    auto build = [&](Tape& t, Var av, Var bv) {
      Var c = t.matmul(av, bv);
      Var flat = t.concat_vec({t.row(c, 0), t.row(c, 1), t.row(c, 2)});
      return t.sum_vec(t.mul(flat, t.constant(w)));
    };
    Tape t;
    Var av = t.leaf(a, true), bv = t.leaf(b, true);
    t.backward(build(t, av, bv));
    auto loss_a = [&](const Tensor& at) {
      Tape t2;
      return t2.val(build(t2, t2.leaf(at), t2.leaf(b)))[0];
    };
    auto loss_b = [&](const Tensor& bt) {
      Tape t2;
      return t2.val(build(t2, t2.leaf(a), t2.leaf(bt)))[0];
    };
    CHECK(max_rel_err(t.grad(av), fd_gradient(loss_a, a)) < 1e-5);
    CHECK(max_rel_err(t.grad(bv), fd_gradient(loss_b, b)) < 1e-5);
  }
  // mul, add, concat, pick, max_of composite.
  {
    Tensor a = random_tensor({5}, rng), b = random_tensor({5}, rng);
    auto build = [&](Tape& t, Var av, Var bv) {
      Var m = t.mul(av, bv);
      Var s = t.add(m, bv);
      Var c = t.concat_vec({s, m});
      return t.max_of({t.pick(c, 2), t.pick(c, 7), t.sum_vec(c)});
    };
    Tape t;
    Var av = t.leaf(a, true), bv = t.leaf(b, true);
    t.backward(build(t, av, bv));
    auto loss_a = [&](const Tensor& at) {
      Tape t2;
      return t2.val(build(t2, t2.leaf(at), t2.leaf(b)))[0];
    };
    auto loss_b = [&](const Tensor& bt) {
      Tape t2;
      return t2.val(build(t2, t2.leaf(a), t2.leaf(bt)))[0];
    };
    CHECK(max_rel_err(t.grad(av), fd_gradient(loss_a, a)) < 1e-5);
    CHECK(max_rel_err(t.grad(bv), fd_gradient(loss_b, b)) < 1e-5);
  }
  // add_rowvec, add_scalar_bcast, matvec, tmatvec, hstack, stack_rows,
  // concat_each_row via a feature-attention-like block.
  {
    Tensor x = random_tensor({4, 3}, rng), f = random_tensor({3}, rng);
    Tensor wm = random_tensor({6, 2}, rng), bv2 = random_tensor({2}, rng);
    Tensor wa = random_tensor({2}, rng);
    auto build = [&](Tape& t, Var xv, Var fv, Var wmv, Var bvv, Var wav) {
      Var h = t.concat_each_row(xv, fv);
      Var m = t.tanh_op(t.add_rowvec(t.matmul(h, wmv), bvv));
      Var u = t.add_scalar_bcast(t.matvec(m, wav), t.scalar(0.3));
      Var alpha = t.softmax_vec(u);
      return t.sum_vec(t.tmatvec(xv, alpha));
    };
    Tape t;
    Var xv = t.leaf(x, true), fv = t.leaf(f, true);
    Var wmv = t.leaf(wm, true), bvv = t.leaf(bv2, true), wav = t.leaf(wa, true);
    t.backward(build(t, xv, fv, wmv, bvv, wav));
    auto eval = [&](const Tensor& xs, const Tensor& fs, const Tensor& wms, const Tensor& bs,
                    const Tensor& was) {
      Tape t2;
      return t2.val(build(t2, t2.leaf(xs), t2.leaf(fs), t2.leaf(wms), t2.leaf(bs),
                          t2.leaf(was)))[0];
    };
    CHECK(max_rel_err(t.grad(xv), fd_gradient([&](const Tensor& v) {
                        return eval(v, f, wm, bv2, wa);
                      }, x)) < 1e-5);
    CHECK(max_rel_err(t.grad(fv), fd_gradient([&](const Tensor& v) {
                        return eval(x, v, wm, bv2, wa);
                      }, f)) < 1e-5);
    CHECK(max_rel_err(t.grad(wmv), fd_gradient([&](const Tensor& v) {
                        return eval(x, f, v, bv2, wa);
                      }, wm)) < 1e-5);
    CHECK(max_rel_err(t.grad(bvv), fd_gradient([&](const Tensor& v) {
                        return eval(x, f, wm, v, wa);
                      }, bv2)) < 1e-5);
    CHECK(max_rel_err(t.grad(wav), fd_gradient([&](const Tensor& v) {
                        return eval(x, f, wm, bv2, v);
                      }, wa)) < 1e-5);
  }
}

TEST_CASE("finite inputs stay finite through op chains") {
  Rng rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    Tensor x = random_tensor({4, 6}, rng, 3.0);
    Tape t;
    Var xv = t.leaf(x, true);
    Var y = t.tanh_op(t.matmul(xv, t.constant(random_tensor({6, 3}, rng))));
    Var z = t.softmax_vec(t.col_max(y));
    Var loss = t.sum_vec(t.log_clamped(z, 1e-12));
    t.backward(loss);
    CHECK(t.val(loss).all_finite());
    CHECK(t.grad(xv).all_finite());
  }
}
