#pragma once

#include <vector>

#include "qisvt/chebyshev.hpp"
#include "qisvt/dense.hpp"

namespace qisvt {

// Trusted desk-scale reference computations (tests and residual reporting
// only). Accuracy over speed; everything here is O(dim^3) or worse.

struct SvdResult {
  DenseMatrix U;              // m x k, orthonormal columns (k = min(m,n))
  std::vector<double> sigma;  // descending, >= 0
  DenseMatrix V;              // n x k, orthonormal columns
};

// One-sided Jacobi, 100-sweep cap, rotation tolerance 1e-12.
// Throws std::runtime_error on non-convergence.
SvdResult dense_svd(const DenseMatrix& A);

struct EigResult {
  std::vector<double> lambda;  // ascending
  DenseMatrix W;               // orthonormal, H = W diag(lambda) W^T
};

// Cyclic two-sided Jacobi for symmetric H.
EigResult dense_eig_sym(const DenseMatrix& H);

struct ComplexDense {
  DenseMatrix re, im;
};
struct ComplexVector {
  DenseVector re, im;
};

// exp(i H t) for symmetric H, via the eigendecomposition.
ComplexDense dense_expm_sym(const DenseMatrix& H, double t);
ComplexVector apply_complex(const ComplexDense& M, const DenseVector& b);
double complex_vec_norm(const ComplexVector& v);

// p(A) b in the singular-value-transform sense:
//   odd  p(x) = x q(x^2):  p(A) = A q(A^T A) = sum_i p(sigma_i) u_i v_i^T   (output in R^m)
//   even p(x) = q(x^2):    p(A) = q(A^T A)                                   (output in R^n)
// The even case handles the null space exactly via
//   y = p(0) b + sum_i (p(sigma_i) - p(0)) v_i (v_i^T b),
// so no full V basis is ever needed. Throws for general-parity polynomials.
DenseVector dense_apply_poly(const DenseMatrix& A, const DenseVector& b, const ChebPoly& p);

// Same, but reusing a precomputed SVD (the apps run many polynomials against
// one factorization).
DenseVector dense_apply_poly(const SvdResult& svd, const DenseVector& b, const ChebPoly& p);

}  // namespace qisvt
