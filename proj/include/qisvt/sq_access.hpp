#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "qisvt/dense.hpp"
#include "qisvt/io.hpp"
#include "qisvt/rng.hpp"

namespace qisvt {

// Walker/Vose alias table over nonnegative weights; O(K) build, O(1) sample.
// Ties between the small/large queues are broken by lowest index so a fixed
// seed reproduces exactly.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(const std::vector<double>& weights);

  // Throws std::runtime_error("zero-norm distribution") when total() == 0.
  int sample(Rng& rng) const;

  double total() const { return total_; }
  int size() const { return static_cast<int>(prob_.size()); }

 private:
  std::vector<double> prob_;  // residence probability of each bucket
  std::vector<int> alias_;
  double total_ = 0.0;
};

// Sampling-and-query access to a fixed vector: O(1) entry query (O(log nnz)
// when built sparse), O(1) draw of index i with probability |v_i|^2/||v||^2,
// and the exact squared norm.
class SqVector {
 public:
  SqVector() = default;

  static SqVector from_dense(const DenseVector& v);
  // entries: (index, value) pairs; throws "duplicate entry" on repeated index.
  static SqVector from_sparse(int n, std::vector<std::pair<int, double>> entries);

  int size() const { return n_; }
  int nnz() const { return static_cast<int>(support_.size()); }
  double entry(int i) const;
  double squared_norm() const { return sq_norm_; }
  double norm() const;
  // Throws std::runtime_error("zero-norm distribution") if the vector is 0.
  int sample(Rng& rng) const;
  // Same draw but also returns the entry value (no lookup needed).
  std::pair<int, double> sample_with_value(Rng& rng) const;

  const std::vector<int>& support() const { return support_; }
  const std::vector<double>& support_values() const { return values_; }

 private:
  int n_ = 0;
  bool has_dense_ = false;
  std::vector<double> dense_;    // only when built from a dense vector
  std::vector<int> support_;     // sorted indices of stored entries
  std::vector<double> values_;   // matching values
  double sq_norm_ = 0.0;
  AliasTable alias_;             // over support positions, weights |v_i|^2
};

// SQ access to a matrix: per-row SqVector handles plus an SqVector over the
// row norms, so entries can be drawn with probability |A_ij|^2/||A||_F^2 in
// two stages (row by squared row norm, then column within the row).
class SqMatrix {
 public:
  SqMatrix() = default;

  // Throws "duplicate entry" on repeated (i,j). O(nnz log nnz).
  static SqMatrix from_triples(const SparseMatrix& A);
  static SqMatrix from_dense(const DenseMatrix& A);

  int rows() const { return m_; }
  int cols() const { return n_; }
  int nnz() const;
  const SqVector& row(int i) const { return rows_[i]; }
  const SqVector& row_norms() const { return row_norms_; }
  double frobenius_norm_sq() const { return fro_sq_; }
  double entry(int i, int j) const { return rows_[i].entry(j); }

  int sample_row(Rng& rng) const { return row_norms_.sample(rng); }
  std::pair<int, int> sample_entry(Rng& rng) const;

  // SQ access to A^T (i.e. column access to A). O(nnz) rebuild.
  SqMatrix transposed() const;

  const SparseMatrix& triples() const { return triples_; }

 private:
  int m_ = 0, n_ = 0;
  std::vector<SqVector> rows_;
  SqVector row_norms_;
  double fro_sq_ = 0.0;
  SparseMatrix triples_;
};

SqVector build_sq_vector(const DenseVector& v);
SqMatrix build_sq_matrix(const SparseMatrix& A);

// Oversampled access: SQ access to a dominating vector vt with
// ||vt||^2 = phi * ||v||^2 and |vt_i| >= |v_i|, plus entry queries to v
// itself. Stored behaviorally so linear combinations compose without
// materializing anything of length n.
struct OversampledVector {
  int n = 0;
  double phi = 1.0;
  double tilde_sq_norm = 0.0;              // ||vt||^2
  std::function<double(int)> query;        // v_i
  std::function<double(int)> tilde_sq_entry;  // vt_i^2
  std::function<int(Rng&)> sample_tilde;   // draw from D_vt
};

// phi = 1 wrapper: vt = v.
OversampledVector oversample(std::shared_ptr<const SqVector> v);
OversampledVector oversample(SqVector v);

// Explicit dominating vector (test construction). Validates ||vt||^2 =
// phi ||v||^2 by direct computation and |vt_i| >= |v_i| entrywise.
OversampledVector make_oversampled(const DenseVector& v, const DenseVector& vt);

// Rejection sampling back to the exact distribution D_v. Draws from D_vt and
// accepts with probability v_j^2 / vt_j^2; gives up after
// ceil(phi * (ln(1/delta) + 1)) attempts with "rejection budget exceeded".
int oversample_to_sample(const OversampledVector& ov, double delta, Rng& rng);

// Multiplicative norm estimate: median of ceil(8 ln(1/delta)) groups of
// ceil(4 phi / nu^2)-sample means of X = ||vt||^2 v_i^2 / vt_i^2, i ~ D_vt.
// E[X] = ||v||^2 and Var[X] <= phi ||v||^4.
double oversample_norm_estimate(const OversampledVector& ov, double nu, double delta, Rng& rng);

// Oversampled access to u = sum_t lambda_t v_t. The dominating vector is the
// weighted mixture vt_i^2 = tau * sum_t lambda_t^2 vt_{t,i}^2 (tau = number of
// terms), which dominates u by Cauchy-Schwarz, giving
//   phi = tau * sum_t phi_t ||lambda_t v_t||^2 / ||u||^2.
// u_norm_sq must be the true ||u||^2; pass the estimated variant when it is
// not known. Throws std::runtime_error("vanishing combination") when
// ||u||^2 == 0.
OversampledVector linear_combination_access(std::vector<OversampledVector> terms,
                                            std::vector<double> lambdas, double u_norm_sq);

// Same, but ||u||^2 is estimated by a few bootstrap rounds of
// oversample_norm_estimate (group sizes re-derived from the running phi guess).
OversampledVector linear_combination_access_estimated(std::vector<OversampledVector> terms,
                                                      std::vector<double> lambdas, double nu,
                                                      double delta, Rng& rng);

// Access to u = R^T x + eta * b where R is held as an SqMatrix over its rows
// (so u combines rows of R) and x is sparse. The eta*b term participates even
// when eta == 0, so phi = (nnz(x)+1)(sum_k ||x_k R_k||^2 + ||eta b||^2)/||u||^2.
OversampledVector row_combination_access(std::shared_ptr<const SqMatrix> R,
                                         const std::vector<std::pair<int, double>>& x_support,
                                         double eta, std::shared_ptr<const SqVector> b,
                                         double u_norm_sq);

}  // namespace qisvt
