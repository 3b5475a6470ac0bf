#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "attex/optim.hpp"
#include "attex/tape.hpp"

using namespace attex;

TEST_CASE("xavier init: support bound, mean, determinism") {
  Rng rng_a(11), rng_b(11);
  Tensor a = xavier_init({100, 100}, rng_a);
  Tensor b = xavier_init({100, 100}, rng_b);
  double limit = std::sqrt(6.0 / 200.0);
  double mean = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] >= -limit);
    CHECK(a[i] <= limit);
    CHECK(a[i] == b[i]);  // bit-identical under the same seed
    mean += a[i];
  }
  mean /= static_cast<double>(a.size());
  CHECK(std::abs(mean) < 0.01);
}

TEST_CASE("dropout identities") {
  Rng rng(5);
  Tensor x = Tensor::full({10}, 2.0);
  Tensor kept = dropout(x, 1.0, true, rng);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(kept[i] == 2.0);
  Tensor inference = dropout(x, 0.3, false, rng);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(inference[i] == 2.0);
  CHECK_THROWS_AS(dropout(x, 0.0, true, rng), std::invalid_argument);
  CHECK_THROWS_AS(dropout(x, -0.5, true, rng), std::invalid_argument);
}

TEST_CASE("inverted dropout keeps the mean") {
  Rng rng(17);
  Tensor x = Tensor::full({100000}, 1.0);
  Tensor out = dropout(x, 0.8, true, rng);
  double mean = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) mean += out[i];
  mean /= static_cast<double>(out.size());
  CHECK(std::abs(mean - 1.0) < 0.01);
}

TEST_CASE("dropout masks are deterministic per seed") {
  Rng a(23), b(23);
  Tensor ma = dropout_mask({64}, 0.8, a);
  Tensor mb = dropout_mask({64}, 0.8, b);
  for (std::size_t i = 0; i < ma.size(); ++i) CHECK(ma[i] == mb[i]);
}

TEST_CASE("adadelta zero gradient leaves parameters, decays accumulators") {
  AdaDelta opt(0.95, 1e-6);
  Tensor p = Tensor::vector({1.0, -2.0});
  // One real step to charge accumulators.
  opt.step("p", p, Tensor::vector({0.5, -0.25}));
  Tensor before = p;
  Tensor g2_before = opt.acc_grad_sq().at("p");
  opt.step("p", p, Tensor::zeros({2}));
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(p[i] == before[i]);
    CHECK(opt.acc_grad_sq().at("p")[i] == doctest::Approx(0.95 * g2_before[i]));
  }
}

TEST_CASE("adadelta first step matches the hand-evaluated recurrence") {
  AdaDelta opt(0.95, 1e-6);
  double g = 0.7;
  Tensor p = Tensor::vector({2.0});
  opt.step("p", p, Tensor::vector({g}));
  double expected_delta = -std::sqrt(1e-6) / std::sqrt(1e-6 + 0.05 * g * g) * g;
  CHECK(p[0] == doctest::Approx(2.0 + expected_delta).epsilon(1e-12));
}

TEST_CASE("adadelta updates stay bounded under repeated identical gradients") {
  // Iterating the recurrence numerically: with a constant gradient the step
  // magnitude stays far below |g| and its per-step change shrinks below
  // 1e-5 once the accumulators saturate.
  AdaDelta opt(0.95, 1e-6);
  Tensor p = Tensor::vector({0.0});
  double g = 1.3;
  std::vector<double> magnitudes;
  for (int i = 0; i < 2000; ++i) {
    double before = p[0];
    opt.step("p", p, Tensor::vector({g}));
    magnitudes.push_back(std::abs(p[0] - before));
  }
  double max_step = *std::max_element(magnitudes.begin(), magnitudes.end());
  CHECK(max_step < 0.02);
  for (std::size_t i = 200; i + 1 < magnitudes.size(); ++i) {
    CHECK(std::abs(magnitudes[i + 1] - magnitudes[i]) < 1e-5);
  }
}

TEST_CASE("adadelta shape mismatch is an error") {
  AdaDelta opt(0.95, 1e-6);
  Tensor p = Tensor::vector({1.0, 2.0});
  CHECK_THROWS_AS(opt.step("p", p, Tensor::zeros({3})), std::invalid_argument);
}

TEST_CASE("saturated outputs yield an exactly-zero step apart from decay") {
  // loss = sum(tanh(w * 30)) with tanh saturated to exactly 1.0: the
  // analytic gradient underflows to zero, so the parameter must not move.
  Tape tape;
  Var w = tape.leaf(Tensor::vector({30.0}), true);
  tape.backward(tape.sum_vec(tape.tanh_op(w)));
  CHECK(tape.grad(w)[0] == 0.0);
  AdaDelta opt(0.95, 1e-6);
  Tensor p = Tensor::vector({30.0});
  opt.step("w", p, tape.grad(w));
  CHECK(p[0] == 30.0);
}

TEST_CASE("rng streams are reproducible and independent") {
  Rng a(mix_seed(1, 2)), b(mix_seed(1, 2)), c(mix_seed(1, 3));
  bool all_equal = true, any_differs = false;
  for (int i = 0; i < 100; ++i) {
    double va = a.uniform01(), vb = b.uniform01(), vc = c.uniform01();
    all_equal = all_equal && va == vb;
    any_differs = any_differs || va != vc;
  }
  CHECK(all_equal);
  CHECK(any_differs);
}
