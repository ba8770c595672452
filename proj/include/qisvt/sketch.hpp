#pragma once

#include <tuple>
#include <vector>

#include "qisvt/dense.hpp"
#include "qisvt/io.hpp"
#include "qisvt/rng.hpp"
#include "qisvt/sq_access.hpp"

namespace qisvt {

// Column-selection sketch: interpreting it as S with s columns e_k / sqrt(s p_k),
// E[S S^T] = I, so A S S^T B estimates AB.
struct AampSketch {
  int s = 0;
  std::vector<int> indices;      // k_1 .. k_s
  std::vector<double> scalings;  // 1 / sqrt(s * p_{k_j})
  std::vector<double> p;         // the source distribution (copy, for checks)
};

// Normalize nonnegative weights into a probability vector (Kahan total).
std::vector<double> distribution_from_weights(const std::vector<double>& weights);

// p_i = (w1_i/sum(w1) + w2_i/sum(w2)) / 2. A side with zero total drops out
// and the other side carries full weight; both zero is an error.
std::vector<double> half_mixture_distribution(const std::vector<double>& w1,
                                              const std::vector<double>& w2);

// s i.i.d. indices from dist (must sum to 1 within 1e-10) with the
// 1/sqrt(s p_k) scalings attached.
AampSketch sample_aamp(const std::vector<double>& dist, int s, Rng& rng);

// A S for dense A (columns of A selected and scaled). Result is m x s.
DenseMatrix apply_aamp_columns(const DenseMatrix& A, const AampSketch& sk);

// Sparse row selection: row j of the result is scaling_j * (row k_j of A).
// Returned as triples (s x n), so the cost is the nnz of the touched rows,
// never O(s*n).
SparseMatrix select_scaled_rows(const SqMatrix& A, const AampSketch& sk);

// Sparse column selection: column j is scaling_j * (row k_j of At), where At
// holds the transpose of the matrix whose columns are wanted. Result is
// At.cols() x s.
SparseMatrix select_scaled_columns(const SqMatrix& At, const AampSketch& sk);

// Entry-wise sampling transform: T i.i.d. entry draws with
// p_ij = |A_ij|^2 / ||A||_F^2, each contributing A_ij/(T p_ij); repeated
// draws accumulate into one triple, so nnz(M) <= T.
struct BestSketch {
  int rows = 0;
  int cols = 0;
  long T = 0;
  SparseMatrix M;

  DenseVector matvec(const DenseVector& x) const;    // M x
  DenseVector matvec_t(const DenseVector& x) const;  // M^T x
};

// O(1)-per-draw entry sampler for a dense matrix (alias table over all
// entries, built once and reused across the Clenshaw iterations).
class DenseEntrySampler {
 public:
  explicit DenseEntrySampler(DenseMatrix A);

  std::tuple<int, int, double> sample(Rng& rng) const;  // (i, j, A_ij)
  // Stored-nonzero view (row-major order), for the count-based bulk sampler.
  int entry_count() const { return static_cast<int>(entry_row_.size()); }
  std::tuple<int, int, double> entry(int pos) const {
    const int i = entry_row_[pos];
    const int j = entry_col_[pos];
    return {i, j, A_(i, j)};
  }
  double frobenius_norm_sq() const { return fro_sq_; }
  int rows() const { return A_.rows; }
  int cols() const { return A_.cols; }
  const DenseMatrix& matrix() const { return A_; }

 private:
  DenseMatrix A_;
  AliasTable alias_;  // over the nonzero entries
  std::vector<int> entry_row_, entry_col_;
  double fro_sq_ = 0.0;
};

BestSketch sample_best(const DenseEntrySampler& A, long T, Rng& rng);
// Two-stage (row, then entry within row) sampling straight off SQ access.
BestSketch sample_best(const SqMatrix& A, long T, Rng& rng);

// Empirical check of the tail bound
//   Pr[ ||XMY||_F >= ||XAY||_F + ||X||_F ||A||_F ||Y||_F / sqrt(delta T) ] <= delta.
struct BestTailReport {
  int trials = 0;
  int violations = 0;
  double threshold = 0.0;
  double violation_fraction = 0.0;
};
BestTailReport best_product_bound_check(const DenseMatrix& X, const DenseMatrix& A,
                                        const DenseMatrix& Y, long T, int trials, double delta,
                                        Rng& rng);

}  // namespace qisvt
