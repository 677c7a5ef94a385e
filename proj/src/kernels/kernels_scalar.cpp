#include <cmath>

#include "tutor_rl/kernels/kernels.hpp"

namespace tutor_rl::kernels::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void affine_scalar(const double* w, const double* b, const double* x,
                   std::size_t rows, std::size_t cols, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = b[r] + dot_scalar(w + r * cols, x, cols);
  }
}

void affine_transpose_acc_scalar(const double* w, const double* dy,
                                 std::size_t rows, std::size_t cols,
                                 double* dx) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double d = dy[r];
    if (d == 0.0) continue;
    const double* row = w + r * cols;
    for (std::size_t c = 0; c < cols; ++c) dx[c] += d * row[c];
  }
}

void outer_acc_scalar(const double* dy, const double* x, std::size_t rows,
                      std::size_t cols, double* g) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double d = dy[r];
    if (d == 0.0) continue;
    double* row = g + r * cols;
    for (std::size_t c = 0; c < cols; ++c) row[c] += d * x[c];
  }
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void adam_scalar(double* param, const double* grad, double* m, double* v,
                 std::size_t n, const AdamCoefficients& c) {
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grad[i];
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g;
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * (g * g);
    const double m_hat = m[i] / c.bias_correction1;
    const double v_hat = v[i] / c.bias_correction2;
    param[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
  }
}

}  // namespace

const KernelTable scalar_table{
    dot_scalar,       affine_scalar, affine_transpose_acc_scalar,
    outer_acc_scalar, axpy_scalar,   adam_scalar,
};

}  // namespace tutor_rl::kernels::detail
