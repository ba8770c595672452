#include "qisvt/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qisvt {

std::vector<double> distribution_from_weights(const std::vector<double>& weights) {
  for (double w : weights)
    if (w < 0.0 || !std::isfinite(w)) throw std::invalid_argument("weights must be finite and nonnegative");
  const double total = kahan_sum(weights);
  if (total <= 0.0) throw std::runtime_error("zero-norm distribution");
  std::vector<double> p(weights);
  for (double& x : p) x /= total;
  return p;
}

std::vector<double> half_mixture_distribution(const std::vector<double>& w1,
                                              const std::vector<double>& w2) {
  if (w1.size() != w2.size()) throw std::invalid_argument("mixture parts must have equal length");
  const double t1 = kahan_sum(w1);
  const double t2 = kahan_sum(w2);
  if (t1 <= 0.0 && t2 <= 0.0) throw std::runtime_error("zero-norm distribution");
  std::vector<double> p(w1.size(), 0.0);
  if (t1 > 0.0 && t2 > 0.0) {
    for (size_t i = 0; i < p.size(); ++i) p[i] = 0.5 * (w1[i] / t1 + w2[i] / t2);
  } else if (t1 > 0.0) {
    for (size_t i = 0; i < p.size(); ++i) p[i] = w1[i] / t1;
  } else {
    for (size_t i = 0; i < p.size(); ++i) p[i] = w2[i] / t2;
  }
  return p;
}

AampSketch sample_aamp(const std::vector<double>& dist, int s, Rng& rng) {
  if (s < 1) throw std::invalid_argument("sketch size must be >= 1");
  const double total = kahan_sum(dist);
  if (std::abs(total - 1.0) > 1e-10) throw std::invalid_argument("distribution must sum to 1");
  AliasTable alias(dist);  // throws "zero-norm distribution" only if all-zero
  AampSketch sk;
  sk.s = s;
  sk.p = dist;
  sk.indices.resize(static_cast<size_t>(s));
  sk.scalings.resize(static_cast<size_t>(s));
  for (int j = 0; j < s; ++j) {
    const int k = alias.sample(rng);
    sk.indices[j] = k;
    sk.scalings[j] = 1.0 / std::sqrt(static_cast<double>(s) * dist[k]);
  }
  return sk;
}

DenseMatrix apply_aamp_columns(const DenseMatrix& A, const AampSketch& sk) {
  DenseMatrix out(A.rows, sk.s);
  for (int j = 0; j < sk.s; ++j) {
    const int k = sk.indices[j];
    if (k < 0 || k >= A.cols) throw std::invalid_argument("sketch index out of range");
    const double c = sk.scalings[j];
    for (int i = 0; i < A.rows; ++i) out(i, j) = c * A(i, k);
  }
  return out;
}

SparseMatrix select_scaled_rows(const SqMatrix& A, const AampSketch& sk) {
  SparseMatrix out;
  out.rows = sk.s;
  out.cols = A.cols();
  for (int j = 0; j < sk.s; ++j) {
    const int k = sk.indices[j];
    if (k < 0 || k >= A.rows()) throw std::invalid_argument("sketch index out of range");
    const SqVector& row = A.row(k);
    const double c = sk.scalings[j];
    const auto& idx = row.support();
    const auto& val = row.support_values();
    for (size_t q = 0; q < idx.size(); ++q) out.entries.push_back({j, idx[q], c * val[q]});
  }
  return out;
}

SparseMatrix select_scaled_columns(const SqMatrix& At, const AampSketch& sk) {
  SparseMatrix rows = select_scaled_rows(At, sk);
  SparseMatrix out;
  out.rows = rows.cols;
  out.cols = rows.rows;
  out.entries.reserve(rows.entries.size());
  for (const Triple& t : rows.entries) out.entries.push_back({t.col, t.row, t.value});
  return out;
}

DenseVector BestSketch::matvec(const DenseVector& x) const {
  if (static_cast<int>(x.size()) != cols) throw std::invalid_argument("matvec: dimension mismatch");
  DenseVector y(static_cast<size_t>(rows), 0.0);
  for (const Triple& t : M.entries) y[t.row] += t.value * x[t.col];
  return y;
}

DenseVector BestSketch::matvec_t(const DenseVector& x) const {
  if (static_cast<int>(x.size()) != rows) throw std::invalid_argument("matvec_t: dimension mismatch");
  DenseVector y(static_cast<size_t>(cols), 0.0);
  for (const Triple& t : M.entries) y[t.col] += t.value * x[t.row];
  return y;
}

DenseEntrySampler::DenseEntrySampler(DenseMatrix A) : A_(std::move(A)) {
  std::vector<double> weights;
  for (int i = 0; i < A_.rows; ++i) {
    for (int j = 0; j < A_.cols; ++j) {
      const double v = A_(i, j);
      if (v != 0.0) {
        entry_row_.push_back(i);
        entry_col_.push_back(j);
        weights.push_back(v * v);
      }
    }
  }
  fro_sq_ = kahan_sum(weights);
  alias_ = AliasTable(weights);
}

std::tuple<int, int, double> DenseEntrySampler::sample(Rng& rng) const {
  const int pos = alias_.sample(rng);  // throws "zero-norm distribution" on A == 0
  const int i = entry_row_[pos];
  const int j = entry_col_[pos];
  return {i, j, A_(i, j)};
}

namespace {

// Shared tail: turn T draws of (i, j, A_ij) into the accumulated sparse M.
// Each draw contributes A_ij / (T p_ij) = ||A||_F^2 / (T A_ij) at (i, j).
BestSketch accumulate_best(std::vector<Triple> draws, int rows, int cols, long T, double fro_sq) {
  std::sort(draws.begin(), draws.end(), [](const Triple& a, const Triple& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  BestSketch sk;
  sk.rows = rows;
  sk.cols = cols;
  sk.T = T;
  sk.M.rows = rows;
  sk.M.cols = cols;
  for (size_t k = 0; k < draws.size();) {
    size_t e = k;
    while (e < draws.size() && draws[e].row == draws[k].row && draws[e].col == draws[k].col) ++e;
    const double count = static_cast<double>(e - k);
    const double aij = draws[k].value;
    sk.M.entries.push_back({draws[k].row, draws[k].col, count * fro_sq / (static_cast<double>(T) * aij)});
    k = e;
  }
  return sk;
}

}  // namespace

BestSketch sample_best(const DenseEntrySampler& A, long T, Rng& rng) {
  if (T < 1) throw std::invalid_argument("sample count must be >= 1");
  if (A.frobenius_norm_sq() <= 0.0) throw std::runtime_error("zero-norm distribution");
  const long K = A.entry_count();
  if (T >= 4 * K) {
    // Bulk path: the multiset of T i.i.d. entry draws is multinomial over the
    // stored nonzeros, so the per-entry counts can be drawn by the
    // conditional-binomial chain in O(nnz) rather than O(T). Identical in
    // distribution to the loop below; the large-T sketches would otherwise
    // dominate the whole run.
    const double fro_sq = A.frobenius_norm_sq();
    BestSketch sk;
    sk.rows = A.rows();
    sk.cols = A.cols();
    sk.T = T;
    sk.M.rows = A.rows();
    sk.M.cols = A.cols();
    long remaining = T;
    double wsum = fro_sq;
    for (long pos = 0; pos < K && remaining > 0; ++pos) {
      auto [i, j, v] = A.entry(static_cast<int>(pos));
      const double w = v * v;
      long count = remaining;
      if (pos < K - 1 && wsum > w) {
        count = std::binomial_distribution<long>(remaining, w / wsum)(rng);
      }
      remaining -= count;
      wsum -= w;
      if (count > 0) {
        sk.M.entries.push_back(
            {i, j, static_cast<double>(count) * fro_sq / (static_cast<double>(T) * v)});
      }
    }
    return sk;
  }
  std::vector<Triple> draws;
  draws.reserve(static_cast<size_t>(T));
  for (long k = 0; k < T; ++k) {
    auto [i, j, v] = A.sample(rng);
    draws.push_back({i, j, v});
  }
  return accumulate_best(std::move(draws), A.rows(), A.cols(), T, A.frobenius_norm_sq());
}

BestSketch sample_best(const SqMatrix& A, long T, Rng& rng) {
  if (T < 1) throw std::invalid_argument("sample count must be >= 1");
  if (A.frobenius_norm_sq() <= 0.0) throw std::runtime_error("zero-norm distribution");
  std::vector<Triple> draws;
  draws.reserve(static_cast<size_t>(T));
  for (long k = 0; k < T; ++k) {
    const int i = A.sample_row(rng);
    auto [j, v] = A.row(i).sample_with_value(rng);
    draws.push_back({i, j, v});
  }
  return accumulate_best(std::move(draws), A.rows(), A.cols(), T, A.frobenius_norm_sq());
}

BestTailReport best_product_bound_check(const DenseMatrix& X, const DenseMatrix& A,
                                        const DenseMatrix& Y, long T, int trials, double delta,
                                        Rng& rng) {
  if (X.cols != A.rows || A.cols != Y.rows) throw std::invalid_argument("shapes not conformal");
  DenseEntrySampler sampler(A);
  const DenseMatrix XAY = matmul(matmul(X, A), Y);
  const double base = frobenius_norm(XAY);
  const double slack = frobenius_norm(X) * frobenius_norm(A) * frobenius_norm(Y) /
                       std::sqrt(delta * static_cast<double>(T));
  BestTailReport rep;
  rep.trials = trials;
  rep.threshold = base + slack;
  for (int t = 0; t < trials; ++t) {
    const BestSketch sk = sample_best(sampler, T, rng);
    const DenseMatrix XMY = matmul(matmul(X, to_dense(sk.M)), Y);
    if (frobenius_norm(XMY) >= rep.threshold) ++rep.violations;
  }
  rep.violation_fraction = static_cast<double>(rep.violations) / std::max(1, trials);
  return rep;
}

}  // namespace qisvt
