#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "tutor_rl/nn/mlp.hpp"
#include "tutor_rl/nn/optim.hpp"

using namespace tutor_rl::nn;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Textbook forward pass written out independently of Mlp's layout helpers.
std::vector<double> reference_forward(const Mlp& net, std::vector<double> a) {
  const auto dims = net.dims();
  const auto p = net.parameters();
  std::size_t offset = 0;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    const std::size_t in = dims[k], out = dims[k + 1];
    std::vector<double> z(out);
    for (std::size_t r = 0; r < out; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < in; ++c) acc += p[offset + r * in + c] * a[c];
      z[r] = acc + p[offset + out * in + r];
    }
    offset += out * in + out;
    if (k + 2 < dims.size()) {
      for (auto& v : z) {
        switch (net.hidden_activation()) {
          case Activation::relu: v = v > 0 ? v : 0; break;
          case Activation::tanh: v = std::tanh(v); break;
          case Activation::identity: break;
        }
      }
    }
    a = std::move(z);
  }
  return a;
}

double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-6});
}

}  // namespace

TEST_CASE("forward matches an independent matrix-multiply oracle") {
  for (auto act : {Activation::relu, Activation::tanh}) {
    Mlp net({4, 8, 2}, act, 42);
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = random_vector(4, rng);
      const auto got = net.predict(x);
      const auto want = reference_forward(net, x);
      REQUIRE(got.size() == 2);
      for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-12);
      CHECK(net.forward(x) == got);
    }
  }
}

TEST_CASE("zero network outputs zeros, identity layer passes input through") {
  Mlp zero = Mlp::zeros({5, 7, 3}, Activation::relu);
  CHECK(zero.predict(std::vector<double>{1, -2, 3, 4, 5}) == std::vector<double>(3, 0.0));

  Mlp id = Mlp::zeros({3, 3}, Activation::identity);
  auto w = id.weights(0);
  for (std::size_t i = 0; i < 3; ++i) w[i * 3 + i] = 1.0;
  const std::vector<double> x{0.5, -1.25, 3.0};
  CHECK(id.predict(x) == x);
}

TEST_CASE("shape errors") {
  Mlp net({3, 4, 2}, Activation::relu, 1);
  CHECK_THROWS_AS(net.predict(std::vector<double>{1, 2}), DimensionMismatch);
  CHECK_THROWS_AS(net.backward(std::vector<double>{1, 2}), NoForwardRecorded);
  net.forward(std::vector<double>{1, 2, 3});
  CHECK_THROWS_AS(net.backward(std::vector<double>{1, 2, 3}), DimensionMismatch);
}

TEST_CASE("backward of a constant loss is zero") {
  Mlp net({3, 5, 2}, Activation::relu, 9);
  net.forward(std::vector<double>{0.1, 0.2, 0.3});
  const Gradients g = net.backward(std::vector<double>{0.0, 0.0});
  for (double v : g.values) CHECK(v == 0.0);
}

TEST_CASE("single linear layer squared error matches closed form 2(Wx+b-y)x^T") {
  Mlp net({3, 2}, Activation::identity, 5);
  const std::vector<double> x{0.3, -0.7, 1.1};
  const std::vector<double> y{0.25, -0.5};
  const auto out = net.forward(x);
  std::vector<double> d(2);
  for (int i = 0; i < 2; ++i) d[i] = 2.0 * (out[i] - y[i]);
  const Gradients g = net.backward(d);
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 3; ++c) CHECK(g.values[r * 3 + c] == doctest::Approx(d[r] * x[c]).epsilon(1e-14));
    CHECK(g.values[6 + r] == doctest::Approx(d[r]).epsilon(1e-14));
  }
}

TEST_CASE("gradients agree with central finite differences") {
  std::size_t total = 0, close = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::mt19937_64 rng(100 + trial);
    const auto act = trial % 2 ? Activation::tanh : Activation::relu;
    Mlp net({5, 6, 4, 3}, act, 1000 + trial);
    const auto x = random_vector(5, rng);
    const auto target = random_vector(3, rng);
    auto loss = [&](const Mlp& m) {
      const auto o = m.predict(x);
      double l = 0.0;
      for (std::size_t i = 0; i < o.size(); ++i) l += (o[i] - target[i]) * (o[i] - target[i]);
      return l;
    };
    const auto out = net.forward(x);
    std::vector<double> d(3);
    for (std::size_t i = 0; i < 3; ++i) d[i] = 2.0 * (out[i] - target[i]);
    const Gradients g = net.backward(d);

    const double h = 1e-5;
    auto params = net.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double keep = params[i];
      params[i] = keep + h;
      const double up = loss(net);
      params[i] = keep - h;
      const double down = loss(net);
      params[i] = keep;
      ++total;
      if (relative_error(g.values[i], (up - down) / (2 * h)) <= 1e-3) ++close;
    }
  }
  CHECK(static_cast<double>(close) / static_cast<double>(total) >= 0.99);
}

TEST_CASE("backward_accumulate sums per-sample gradients") {
  Mlp net({2, 3, 1}, Activation::tanh, 3);
  Gradients acc = net.zero_gradients();
  Gradients sum = net.zero_gradients();
  for (double s : {0.5, -1.0, 2.0}) {
    net.forward(std::vector<double>{s, 1.0 - s});
    net.backward_accumulate(std::vector<double>{s}, acc);
    const Gradients one = net.backward(std::vector<double>{s});
    for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += one.values[i];
  }
  for (std::size_t i = 0; i < sum.values.size(); ++i) CHECK(acc.values[i] == doctest::Approx(sum.values[i]));
}

TEST_CASE("gradient clipping rescales to the requested norm") {
  Gradients g{{3.0, 4.0}};
  CHECK(g.clip_by_norm(1.0) == doctest::Approx(5.0));
  CHECK(g.l2_norm() == doctest::Approx(1.0));
  Gradients small{{0.1, 0.1}};
  small.clip_by_norm(1.0);
  CHECK(small.values == std::vector<double>{0.1, 0.1});
}

TEST_CASE("Adam: zero gradient is a fixed point, first step moves by lr") {
  AdamState s = AdamState::for_parameters(3, 1e-3);
  std::vector<double> p{1.0, -2.0, 0.5};
  const auto before = p;
  adam_step(p, std::vector<double>(3, 0.0), s);
  CHECK(p == before);
  CHECK(s.step_count == 1);

  AdamState t = AdamState::for_parameters(1, 1e-3);
  std::vector<double> q{0.0};
  adam_step(q, std::vector<double>{1.0}, t);
  // m_hat = 1, v_hat = 1, so the step is lr / (1 + eps).
  CHECK(q[0] == doctest::Approx(-1e-3 / (1.0 + 1e-8)).epsilon(1e-12));
  CHECK_THROWS_AS(adam_step(q, std::vector<double>{1.0, 2.0}, t), DimensionMismatch);
}

TEST_CASE("Adam decreases a convex quadratic") {
  Mlp net({2, 1}, Activation::identity, 4);
  AdamState s = AdamState::for_parameters(net.parameter_count(), 1e-2);
  const std::vector<double> x{1.0, -1.0};
  auto loss = [&] {
    const double o = net.predict(x)[0] - 3.0;
    return o * o;
  };
  const double start = loss();
  for (int i = 0; i < 100; ++i) {
    const double o = net.forward(x)[0];
    const Gradients g = net.backward(std::vector<double>{2.0 * (o - 3.0)});
    adam_step(net.parameters(), g.values, s);
  }
  CHECK(loss() < start);
  CHECK(s.step_count == 100);
}

TEST_CASE("softmax forms a shift-invariant distribution") {
  const auto u = softmax(std::vector<double>{2, 2, 2, 2});
  for (double p : u) CHECK(p == doctest::Approx(0.25));

  const std::vector<double> logits{0.3, -1.2, 2.5, 0.0};
  const auto a = softmax(logits);
  std::vector<double> shifted = logits;
  for (auto& l : shifted) l += 10.0;
  const auto b = softmax(shifted);
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i] - b[i]) <= 1e-12);
    CHECK(a[i] >= 0.0);
    total += a[i];
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);

  const auto peaked = softmax(std::vector<double>{1.0, 1.0 + 800.0});
  CHECK(peaked[0] == doctest::Approx(0.0));
  CHECK(peaked[1] == doctest::Approx(1.0));

  const auto masked = masked_softmax(std::vector<double>{5.0, 1.0, 1.0}, std::vector<std::uint8_t>{0, 1, 1});
  CHECK(masked[0] == 0.0);
  CHECK(masked[1] == doctest::Approx(0.5));
}

TEST_CASE("same seed gives identical weights; serialization round-trips") {
  Mlp a({6, 9, 3}, Activation::relu, 77);
  Mlp b({6, 9, 3}, Activation::relu, 77);
  Mlp c({6, 9, 3}, Activation::relu, 78);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  const double bound = std::sqrt(6.0 / (6 + 9));
  for (double w : a.weights(0)) CHECK(std::abs(w) <= bound);
  for (double v : a.biases(0)) CHECK(v == 0.0);

  std::stringstream buffer;
  a.save(buffer);
  CHECK(Mlp::load(buffer) == a);

  const auto path = std::filesystem::temp_directory_path() / "tutor_rl_ckpt_test.bin";
  const Mlp* nets[] = {&a, &c};
  save_checkpoint(path, nets);
  const auto loaded = load_checkpoint(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0] == a);
  CHECK(loaded[1] == c);
  std::filesystem::remove(path);

  std::stringstream junk("not a network");
  CHECK_THROWS(Mlp::load(junk));
}
