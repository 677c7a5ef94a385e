#pragma once

// Dense double-precision kernels used by the network code.
//
// Every kernel has a portable scalar reference implementation. On x86-64 an
// AVX2+FMA variant is compiled into a separate translation unit and selected
// at runtime when the CPU supports it. Set TUTOR_RL_SIMD=scalar in the
// environment to force the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace tutor_rl::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct AdamCoefficients {
  double learning_rate;
  double beta1;
  double beta2;
  double epsilon;
  double bias_correction1;  // 1 - beta1^t
  double bias_correction2;  // 1 - beta2^t
};

// Raw-pointer table; the span wrappers below are the public surface.
struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y = W x + b, W is rows x cols row-major.
  void (*affine)(const double* w, const double* b, const double* x,
                 std::size_t rows, std::size_t cols, double* y);
  // dx += W^T dy
  void (*affine_transpose_acc)(const double* w, const double* dy,
                               std::size_t rows, std::size_t cols, double* dx);
  // g += dy x^T
  void (*outer_acc)(const double* dy, const double* x, std::size_t rows,
                    std::size_t cols, double* g);
  // y += a x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  void (*adam)(double* param, const double* grad, double* m, double* v,
               std::size_t n, const AdamCoefficients& c);
};

const KernelTable& table(Isa isa);
bool isa_available(Isa isa);

// The ISA chosen for this process (first call decides).
Isa active_isa();

double dot(std::span<const double> a, std::span<const double> b);
void affine(std::span<const double> w, std::span<const double> b,
            std::span<const double> x, std::span<double> y);
void affine_transpose_acc(std::span<const double> w,
                          std::span<const double> dy, std::span<double> dx);
void outer_acc(std::span<const double> dy, std::span<const double> x,
               std::span<double> g);
void axpy(double a, std::span<const double> x, std::span<double> y);
void adam(std::span<double> param, std::span<const double> grad,
          std::span<double> m, std::span<double> v,
          const AdamCoefficients& c);

namespace detail {
extern const KernelTable scalar_table;
#if defined(TUTOR_RL_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace tutor_rl::kernels
