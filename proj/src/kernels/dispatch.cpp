#include <cstdlib>
#include <stdexcept>
#include <string>

#include "tutor_rl/kernels/kernels.hpp"

namespace tutor_rl::kernels {
namespace {

Isa detect() {
  if (const char* forced = std::getenv("TUTOR_RL_SIMD")) {
    const std::string value(forced);
    if (value == "scalar") return Isa::scalar;
    if (value == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
  }
  return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

void check_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string("kernel size mismatch: ") + what);
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
#if defined(TUTOR_RL_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& table(Isa isa) {
#if defined(TUTOR_RL_HAVE_AVX2)
  if (isa == Isa::avx2) {
    if (!isa_available(Isa::avx2)) throw std::runtime_error("AVX2 not supported on this CPU");
    return detail::avx2_table;
  }
#else
  if (isa == Isa::avx2) throw std::runtime_error("AVX2 kernels not compiled in");
#endif
  return detail::scalar_table;
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

namespace {
const KernelTable& active() {
  static const KernelTable& t = table(active_isa());
  return t;
}
}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  check_same(a.size(), b.size(), "dot");
  return active().dot(a.data(), b.data(), a.size());
}

void affine(std::span<const double> w, std::span<const double> b,
            std::span<const double> x, std::span<double> y) {
  check_same(b.size(), y.size(), "affine bias/output");
  check_same(w.size(), y.size() * x.size(), "affine weight");
  active().affine(w.data(), b.data(), x.data(), y.size(), x.size(), y.data());
}

void affine_transpose_acc(std::span<const double> w, std::span<const double> dy,
                          std::span<double> dx) {
  check_same(w.size(), dy.size() * dx.size(), "affine_transpose weight");
  active().affine_transpose_acc(w.data(), dy.data(), dy.size(), dx.size(), dx.data());
}

void outer_acc(std::span<const double> dy, std::span<const double> x,
               std::span<double> g) {
  check_same(g.size(), dy.size() * x.size(), "outer");
  active().outer_acc(dy.data(), x.data(), dy.size(), x.size(), g.data());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  check_same(x.size(), y.size(), "axpy");
  active().axpy(a, x.data(), y.data(), x.size());
}

void adam(std::span<double> param, std::span<const double> grad,
          std::span<double> m, std::span<double> v, const AdamCoefficients& c) {
  check_same(param.size(), grad.size(), "adam grad");
  check_same(param.size(), m.size(), "adam m");
  check_same(param.size(), v.size(), "adam v");
  active().adam(param.data(), grad.data(), m.data(), v.data(), param.size(), c);
}

}  // namespace tutor_rl::kernels
