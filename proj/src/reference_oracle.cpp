#include "qisvt/reference_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qisvt {

namespace {
constexpr int kMaxSweeps = 100;
constexpr double kRotTol = 1e-12;
}  // namespace

SvdResult dense_svd(const DenseMatrix& A) {
  if (A.rows == 0 || A.cols == 0) throw std::invalid_argument("empty matrix");
  if (A.rows < A.cols) {
    SvdResult r = dense_svd(transpose(A));
    return {std::move(r.V), std::move(r.sigma), std::move(r.U)};
  }
  const int m = A.rows, n = A.cols;
  DenseMatrix B = A;
  DenseMatrix V = DenseMatrix::identity(n);

  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (int i = 0; i < m; ++i) {
          alpha += B(i, p) * B(i, p);
          beta += B(i, q) * B(i, q);
          gamma += B(i, p) * B(i, q);
        }
        if (std::abs(gamma) <= kRotTol * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double tau = (beta - alpha) / (2.0 * gamma);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < m; ++i) {
          const double bp = B(i, p), bq = B(i, q);
          B(i, p) = c * bp - s * bq;
          B(i, q) = s * bp + c * bq;
        }
        for (int i = 0; i < n; ++i) {
          const double vp = V(i, p), vq = V(i, q);
          V(i, p) = c * vp - s * vq;
          V(i, q) = s * vp + c * vq;
        }
      }
    }
    converged = !rotated;
  }
  if (!converged) throw std::runtime_error("svd did not converge");

  std::vector<double> sigma(static_cast<size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    double nj = 0.0;
    for (int i = 0; i < m; ++i) nj += B(i, j) * B(i, j);
    sigma[j] = std::sqrt(nj);
  }
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sigma[a] > sigma[b]; });

  SvdResult out;
  out.sigma.resize(static_cast<size_t>(n));
  out.U = DenseMatrix(m, n);
  out.V = DenseMatrix(n, n);
  const double smax = sigma.empty() ? 0.0 : sigma[order[0]];
  for (int j = 0; j < n; ++j) {
    const int src = order[j];
    out.sigma[j] = sigma[src];
    // Left vector only meaningful when sigma is resolvable from zero.
    const double s = sigma[src];
    if (s > 1e-300 && s > 1e-15 * smax) {
      for (int i = 0; i < m; ++i) out.U(i, j) = B(i, src) / s;
    }
    for (int i = 0; i < n; ++i) out.V(i, j) = V(i, src);
  }
  return out;
}

EigResult dense_eig_sym(const DenseMatrix& H) {
  if (H.rows != H.cols) throw std::invalid_argument("matrix not square");
  const int n = H.rows;
  const double fro = frobenius_norm(H);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(H(i, j) - H(j, i)) > 1e-10 * std::max(1.0, fro))
        throw std::invalid_argument("matrix not symmetric");

  DenseMatrix B = H;
  DenseMatrix W = DenseMatrix::identity(n);
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += 2.0 * B(p, q) * B(p, q);
    if (std::sqrt(off) <= 1e-12 * std::max(fro, 1e-300)) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double bpq = B(p, q);
        if (std::abs(bpq) <= 1e-300) continue;
        const double tau = (B(q, q) - B(p, p)) / (2.0 * bpq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < n; ++i) {
          const double bip = B(i, p), biq = B(i, q);
          B(i, p) = c * bip - s * biq;
          B(i, q) = s * bip + c * biq;
        }
        for (int i = 0; i < n; ++i) {
          const double bpi = B(p, i), bqi = B(q, i);
          B(p, i) = c * bpi - s * bqi;
          B(q, i) = s * bpi + c * bqi;
        }
        for (int i = 0; i < n; ++i) {
          const double wip = W(i, p), wiq = W(i, q);
          W(i, p) = c * wip - s * wiq;
          W(i, q) = s * wip + c * wiq;
        }
      }
    }
  }
  if (!converged) throw std::runtime_error("eigendecomposition did not converge");

  std::vector<double> lambda(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) lambda[i] = B(i, i);
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return lambda[a] < lambda[b]; });
  EigResult out;
  out.lambda.resize(static_cast<size_t>(n));
  out.W = DenseMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.lambda[j] = lambda[order[j]];
    for (int i = 0; i < n; ++i) out.W(i, j) = W(i, order[j]);
  }
  return out;
}

ComplexDense dense_expm_sym(const DenseMatrix& H, double t) {
  const EigResult eig = dense_eig_sym(H);
  const int n = H.rows;
  ComplexDense out{DenseMatrix(n, n), DenseMatrix(n, n)};
  for (int r = 0; r < n; ++r) {
    const double cr = std::cos(eig.lambda[r] * t);
    const double sr = std::sin(eig.lambda[r] * t);
    for (int i = 0; i < n; ++i) {
      const double wir = eig.W(i, r);
      if (wir == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        out.re(i, j) += cr * wir * eig.W(j, r);
        out.im(i, j) += sr * wir * eig.W(j, r);
      }
    }
  }
  return out;
}

ComplexVector apply_complex(const ComplexDense& M, const DenseVector& b) {
  return {matvec(M.re, b), matvec(M.im, b)};
}

double complex_vec_norm(const ComplexVector& v) {
  return std::sqrt(norm2sq(v.re) + norm2sq(v.im));
}

DenseVector dense_apply_poly(const SvdResult& svd, const DenseVector& b, const ChebPoly& p) {
  const int m = svd.U.rows;
  const int n = svd.V.rows;
  const int k = static_cast<int>(svd.sigma.size());
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("vector length mismatch");
  validate_parity(p);
  if (p.parity == Parity::odd) {
    DenseVector y(static_cast<size_t>(m), 0.0);
    for (int r = 0; r < k; ++r) {
      if (svd.sigma[r] == 0.0) continue;  // odd p has p(0) = 0
      double vb = 0.0;
      for (int i = 0; i < n; ++i) vb += svd.V(i, r) * b[i];
      const double w = cheb_eval_direct(p, svd.sigma[r]) * vb;
      for (int i = 0; i < m; ++i) y[i] += w * svd.U(i, r);
    }
    return y;
  }
  if (p.parity == Parity::even) {
    const double p0 = cheb_eval_direct(p, 0.0);
    DenseVector y = scaled(b, p0);
    for (int r = 0; r < k; ++r) {
      double vb = 0.0;
      for (int i = 0; i < n; ++i) vb += svd.V(i, r) * b[i];
      const double w = (cheb_eval_direct(p, svd.sigma[r]) - p0) * vb;
      for (int i = 0; i < n; ++i) y[i] += w * svd.V(i, r);
    }
    return y;
  }
  throw std::invalid_argument("general-parity polynomial has no singular value transform");
}

DenseVector dense_apply_poly(const DenseMatrix& A, const DenseVector& b, const ChebPoly& p) {
  return dense_apply_poly(dense_svd(A), b, p);
}

}  // namespace qisvt
