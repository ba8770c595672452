#pragma once

#include <cstddef>
#include <vector>

#include "qisvt/rng.hpp"

namespace qisvt {

using DenseVector = std::vector<double>;

// Plain row-major dense matrix. Small and boring on purpose: this is the
// ground-truth side of the code base (reference oracles, desk-scale tests),
// not a performance target.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // row-major, rows*cols

  DenseMatrix() = default;
  DenseMatrix(int m, int n) : rows(m), cols(n), data(static_cast<size_t>(m) * n, 0.0) {}

  double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  static DenseMatrix identity(int n) {
    DenseMatrix I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
  }
};

DenseMatrix transpose(const DenseMatrix& A);
DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);
DenseVector matvec(const DenseMatrix& A, const DenseVector& x);    // A x
DenseVector matvec_t(const DenseMatrix& A, const DenseVector& x);  // A^T x

double dot(const DenseVector& a, const DenseVector& b);
double norm2(const DenseVector& a);
double norm2sq(const DenseVector& a);
// y += alpha * x
void axpy(double alpha, const DenseVector& x, DenseVector& y);
DenseVector scaled(const DenseVector& x, double alpha);
DenseVector vec_sub(const DenseVector& a, const DenseVector& b);

double frobenius_norm(const DenseMatrix& A);
double frobenius_norm_sq(const DenseMatrix& A);

// Largest singular value by power iteration on A^T A (dense path).
double spectral_norm_dense(const DenseMatrix& A, int iterations = 100, std::uint64_t seed = 12345);

// Test-instance helpers.
DenseMatrix random_gaussian_matrix(int m, int n, Rng& rng);
DenseVector random_gaussian_vector(int n, Rng& rng);
DenseVector random_unit_vector(int n, Rng& rng);
// Random matrix with prescribed singular values (orthonormal factors from
// Gaussian QR). sigma.size() <= min(m,n).
DenseMatrix random_matrix_with_spectrum(int m, int n, const std::vector<double>& sigma, Rng& rng);

// Kahan-compensated sum; used wherever the tested bounds are logarithmic and
// naive accumulation error would be visible.
double kahan_sum(const std::vector<double>& xs);

}  // namespace qisvt
