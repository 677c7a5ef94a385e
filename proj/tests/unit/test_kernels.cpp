#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "tutor_rl/kernels/kernels.hpp"

using namespace tutor_rl::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Odd sizes exercise the vector tails.
const std::size_t kSizes[] = {1, 3, 4, 7, 8, 13, 64, 104};

}  // namespace

TEST_CASE("scalar kernels match straight-line loops") {
  std::mt19937_64 rng(7);
  const KernelTable& k = table(Isa::scalar);
  for (std::size_t rows : kSizes) {
    for (std::size_t cols : kSizes) {
      const auto w = random_vector(rows * cols, rng);
      const auto b = random_vector(rows, rng);
      const auto x = random_vector(cols, rng);
      std::vector<double> y(rows);
      k.affine(w.data(), b.data(), x.data(), rows, cols, y.data());
      for (std::size_t r = 0; r < rows; ++r) {
        double acc = b[r];
        for (std::size_t c = 0; c < cols; ++c) acc += w[r * cols + c] * x[c];
        CHECK(y[r] == doctest::Approx(acc).epsilon(1e-13));
      }

      const auto dy = random_vector(rows, rng);
      std::vector<double> dx(cols, 0.5);
      k.affine_transpose_acc(w.data(), dy.data(), rows, cols, dx.data());
      for (std::size_t c = 0; c < cols; ++c) {
        double acc = 0.5;
        for (std::size_t r = 0; r < rows; ++r) acc += w[r * cols + c] * dy[r];
        CHECK(dx[c] == doctest::Approx(acc).epsilon(1e-13));
      }

      std::vector<double> g(rows * cols, 1.0);
      k.outer_acc(dy.data(), x.data(), rows, cols, g.data());
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) CHECK(g[r * cols + c] == 1.0 + dy[r] * x[c]);
      }
    }
  }
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  if (!isa_available(Isa::avx2)) {
    MESSAGE("AVX2 not available on this machine; only the scalar path is exercised");
    return;
  }
  std::mt19937_64 rng(11);
  const KernelTable& s = table(Isa::scalar);
  const KernelTable& v = table(Isa::avx2);
  for (std::size_t rows : kSizes) {
    for (std::size_t cols : kSizes) {
      const auto w = random_vector(rows * cols, rng);
      const auto b = random_vector(rows, rng);
      const auto x = random_vector(cols, rng);
      const auto dy = random_vector(rows, rng);

      CHECK(v.dot(x.data(), x.data(), cols) == doctest::Approx(s.dot(x.data(), x.data(), cols)).epsilon(1e-13));

      std::vector<double> ys(rows), yv(rows);
      s.affine(w.data(), b.data(), x.data(), rows, cols, ys.data());
      v.affine(w.data(), b.data(), x.data(), rows, cols, yv.data());
      for (std::size_t r = 0; r < rows; ++r) CHECK(yv[r] == doctest::Approx(ys[r]).epsilon(1e-12));

      std::vector<double> dxs(cols, 0.0), dxv(cols, 0.0);
      s.affine_transpose_acc(w.data(), dy.data(), rows, cols, dxs.data());
      v.affine_transpose_acc(w.data(), dy.data(), rows, cols, dxv.data());
      for (std::size_t c = 0; c < cols; ++c) CHECK(dxv[c] == doctest::Approx(dxs[c]).epsilon(1e-12));

      std::vector<double> gs(rows * cols, 0.25), gv(rows * cols, 0.25);
      s.outer_acc(dy.data(), x.data(), rows, cols, gs.data());
      v.outer_acc(dy.data(), x.data(), rows, cols, gv.data());
      for (std::size_t i = 0; i < gs.size(); ++i) CHECK(gv[i] == doctest::Approx(gs[i]).epsilon(1e-14));
    }
  }

  for (std::size_t n : kSizes) {
    const auto x = random_vector(n, rng);
    auto ys = random_vector(n, rng);
    auto yv = ys;
    s.axpy(0.3, x.data(), ys.data(), n);
    v.axpy(0.3, x.data(), yv.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(yv[i] == doctest::Approx(ys[i]).epsilon(1e-15));
  }
}

TEST_CASE("AVX2 Adam is bit-identical to the scalar reference") {
  if (!isa_available(Isa::avx2)) return;
  std::mt19937_64 rng(3);
  for (std::size_t n : kSizes) {
    auto ps = random_vector(n, rng);
    auto ms = std::vector<double>(n, 0.0), vs = std::vector<double>(n, 0.0);
    auto pv = ps, mv = ms, vv = vs;
    for (int t = 1; t <= 5; ++t) {
      const auto g = random_vector(n, rng);
      const AdamCoefficients c{1e-3, 0.9, 0.999, 1e-8, 1 - std::pow(0.9, t), 1 - std::pow(0.999, t)};
      table(Isa::scalar).adam(ps.data(), g.data(), ms.data(), vs.data(), n, c);
      table(Isa::avx2).adam(pv.data(), g.data(), mv.data(), vv.data(), n, c);
    }
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(pv[i] == ps[i]);
      CHECK(mv[i] == ms[i]);
      CHECK(vv[i] == vs[i]);
    }
  }
}

TEST_CASE("span wrappers reject mismatched sizes") {
  std::vector<double> a(3), b(4), y(2);
  CHECK_THROWS_AS(dot(a, b), std::invalid_argument);
  CHECK_THROWS_AS(affine(a, y, b, y), std::invalid_argument);
  CHECK_THROWS_AS(axpy(1.0, a, b), std::invalid_argument);
}

TEST_CASE("active ISA is one the machine supports") {
  CHECK(isa_available(active_isa()));
  CHECK(isa_available(Isa::scalar));
  CHECK(isa_name(Isa::scalar) == "scalar");
}
