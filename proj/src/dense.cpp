#include "qisvt/dense.hpp"

#include <cmath>
#include <stdexcept>

namespace qisvt {

DenseMatrix transpose(const DenseMatrix& A) {
  DenseMatrix T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
  return T;
}

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
  if (A.cols != B.rows) throw std::invalid_argument("matmul: inner dimensions disagree");
  DenseMatrix C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int k = 0; k < A.cols; ++k) {
      const double aik = A(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
    }
  }
  return C;
}

DenseVector matvec(const DenseMatrix& A, const DenseVector& x) {
  if (static_cast<int>(x.size()) != A.cols) throw std::invalid_argument("matvec: dimension mismatch");
  DenseVector y(A.rows, 0.0);
  for (int i = 0; i < A.rows; ++i) {
    double acc = 0.0;
    const double* row = &A.data[static_cast<size_t>(i) * A.cols];
    for (int j = 0; j < A.cols; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  return y;
}

DenseVector matvec_t(const DenseMatrix& A, const DenseVector& x) {
  if (static_cast<int>(x.size()) != A.rows) throw std::invalid_argument("matvec_t: dimension mismatch");
  DenseVector y(A.cols, 0.0);
  for (int i = 0; i < A.rows; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* row = &A.data[static_cast<size_t>(i) * A.cols];
    for (int j = 0; j < A.cols; ++j) y[j] += row[j] * xi;
  }
  return y;
}

double dot(const DenseVector& a, const DenseVector& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2sq(const DenseVector& a) { return dot(a, a); }
double norm2(const DenseVector& a) { return std::sqrt(norm2sq(a)); }

void axpy(double alpha, const DenseVector& x, DenseVector& y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

DenseVector scaled(const DenseVector& x, double alpha) {
  DenseVector y(x);
  for (double& v : y) v *= alpha;
  return y;
}

DenseVector vec_sub(const DenseVector& a, const DenseVector& b) {
  DenseVector c(a);
  for (size_t i = 0; i < c.size(); ++i) c[i] -= b[i];
  return c;
}

double frobenius_norm_sq(const DenseMatrix& A) {
  double acc = 0.0;
  for (double v : A.data) acc += v * v;
  return acc;
}

double frobenius_norm(const DenseMatrix& A) { return std::sqrt(frobenius_norm_sq(A)); }

double spectral_norm_dense(const DenseMatrix& A, int iterations, std::uint64_t seed) {
  if (A.rows == 0 || A.cols == 0) return 0.0;
  Rng rng = make_rng(seed, 0xa11ce);
  DenseVector v = random_unit_vector(A.cols, rng);
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    DenseVector w = matvec_t(A, matvec(A, v));  // A^T A v
    double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    lambda = nw;  // converges to sigma_max^2
    for (size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nw;
  }
  return std::sqrt(lambda);
}

DenseMatrix random_gaussian_matrix(int m, int n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  DenseMatrix A(m, n);
  for (double& v : A.data) v = gauss(rng);
  return A;
}

DenseVector random_gaussian_vector(int n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  DenseVector v(n);
  for (double& x : v) x = gauss(rng);
  return v;
}

DenseVector random_unit_vector(int n, Rng& rng) {
  DenseVector v = random_gaussian_vector(n, rng);
  double nv = norm2(v);
  while (nv < 1e-12) {  // essentially impossible, but keep it total
    v = random_gaussian_vector(n, rng);
    nv = norm2(v);
  }
  for (double& x : v) x /= nv;
  return v;
}

namespace {

// Orthonormalize the first k columns of an m x k Gaussian matrix
// (modified Gram-Schmidt, re-orthogonalized once).
DenseMatrix random_orthonormal_columns(int m, int k, Rng& rng) {
  DenseMatrix Q = random_gaussian_matrix(m, k, rng);
  for (int j = 0; j < k; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int p = 0; p < j; ++p) {
        double proj = 0.0;
        for (int i = 0; i < m; ++i) proj += Q(i, p) * Q(i, j);
        for (int i = 0; i < m; ++i) Q(i, j) -= proj * Q(i, p);
      }
    }
    double nj = 0.0;
    for (int i = 0; i < m; ++i) nj += Q(i, j) * Q(i, j);
    nj = std::sqrt(nj);
    if (nj < 1e-12) throw std::runtime_error("random_orthonormal_columns: degenerate draw");
    for (int i = 0; i < m; ++i) Q(i, j) /= nj;
  }
  return Q;
}

}  // namespace

DenseMatrix random_matrix_with_spectrum(int m, int n, const std::vector<double>& sigma, Rng& rng) {
  const int k = static_cast<int>(sigma.size());
  if (k > std::min(m, n)) throw std::invalid_argument("random_matrix_with_spectrum: too many singular values");
  DenseMatrix U = random_orthonormal_columns(m, k, rng);
  DenseMatrix V = random_orthonormal_columns(n, k, rng);
  DenseMatrix A(m, n);
  for (int r = 0; r < k; ++r) {
    const double s = sigma[r];
    for (int i = 0; i < m; ++i) {
      const double us = U(i, r) * s;
      if (us == 0.0) continue;
      for (int j = 0; j < n; ++j) A(i, j) += us * V(j, r);
    }
  }
  return A;
}

double kahan_sum(const std::vector<double>& xs) {
  double sum = 0.0, c = 0.0;
  for (double x : xs) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace qisvt
