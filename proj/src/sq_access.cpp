#include "qisvt/sq_access.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace qisvt {

namespace {
// Rejection-budget and group-size guards so a degenerate phi (e.g. a zero
// target vector, where phi is formally infinite) cannot hang the process.
constexpr double kPhiBudgetCap = 1e7;
constexpr long kGroupSizeCap = 1L << 21;
}  // namespace

AliasTable::AliasTable(const std::vector<double>& weights) {
  const int K = static_cast<int>(weights.size());
  prob_.assign(K, 1.0);
  alias_.resize(K);
  for (int i = 0; i < K; ++i) alias_[i] = i;
  std::vector<double> w = weights;
  for (double x : w)
    if (x < 0.0 || !std::isfinite(x)) throw std::invalid_argument("alias weights must be finite and nonnegative");
  total_ = kahan_sum(w);
  if (K == 0 || total_ <= 0.0) {
    total_ = std::max(total_, 0.0);
    return;
  }
  std::vector<double> scaled(w);
  for (double& x : scaled) x = x * K / total_;
  // Two-queue construction; queues are filled in increasing index order and
  // consumed FIFO, which pins the table layout for a given weight vector.
  std::deque<int> small, large;
  for (int i = 0; i < K; ++i) (scaled[i] < 1.0 ? small : large).push_back(i);
  while (!small.empty() && !large.empty()) {
    const int s = small.front();
    small.pop_front();
    const int l = large.front();
    large.pop_front();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  // Leftovers (numerically ~1) become self-loops.
  for (std::deque<int>* q : {&large, &small}) {
    while (!q->empty()) {
      prob_[q->front()] = 1.0;
      alias_[q->front()] = q->front();
      q->pop_front();
    }
  }
}

int AliasTable::sample(Rng& rng) const {
  if (prob_.empty() || total_ <= 0.0) throw std::runtime_error("zero-norm distribution");
  const int k = static_cast<int>(uniform_below(rng, prob_.size()));
  return uniform01(rng) < prob_[k] ? k : alias_[k];
}

SqVector SqVector::from_dense(const DenseVector& v) {
  SqVector out;
  out.n_ = static_cast<int>(v.size());
  out.has_dense_ = true;
  out.dense_ = v;
  std::vector<double> weights;
  for (int i = 0; i < out.n_; ++i) {
    if (v[i] != 0.0) {
      out.support_.push_back(i);
      out.values_.push_back(v[i]);
      weights.push_back(v[i] * v[i]);
    }
  }
  out.sq_norm_ = kahan_sum(weights);
  out.alias_ = AliasTable(weights);
  return out;
}

SqVector SqVector::from_sparse(int n, std::vector<std::pair<int, double>> entries) {
  if (n < 0) throw std::invalid_argument("vector length must be nonnegative");
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SqVector out;
  out.n_ = n;
  std::vector<double> weights;
  int prev = -1;
  for (const auto& [idx, val] : entries) {
    if (idx < 0 || idx >= n) throw std::invalid_argument("sparse index out of range");
    if (idx == prev) throw std::runtime_error("duplicate entry");
    prev = idx;
    if (val == 0.0) continue;
    out.support_.push_back(idx);
    out.values_.push_back(val);
    weights.push_back(val * val);
  }
  out.sq_norm_ = kahan_sum(weights);
  out.alias_ = AliasTable(weights);
  return out;
}

double SqVector::entry(int i) const {
  if (i < 0 || i >= n_) throw std::invalid_argument("entry index out of range");
  if (has_dense_) return dense_[i];
  auto it = std::lower_bound(support_.begin(), support_.end(), i);
  if (it == support_.end() || *it != i) return 0.0;
  return values_[static_cast<size_t>(it - support_.begin())];
}

double SqVector::norm() const { return std::sqrt(sq_norm_); }

int SqVector::sample(Rng& rng) const {
  const int pos = alias_.sample(rng);  // throws on zero norm
  return support_[pos];
}

std::pair<int, double> SqVector::sample_with_value(Rng& rng) const {
  const int pos = alias_.sample(rng);
  return {support_[pos], values_[pos]};
}

SqMatrix SqMatrix::from_triples(const SparseMatrix& A) {
  if (A.rows < 1 || A.cols < 1) throw std::invalid_argument("dimensions must be positive");
  SparseMatrix sorted = A;
  std::sort(sorted.entries.begin(), sorted.entries.end(), [](const Triple& a, const Triple& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (size_t k = 0; k < sorted.entries.size(); ++k) {
    const Triple& t = sorted.entries[k];
    if (t.row < 0 || t.row >= A.rows || t.col < 0 || t.col >= A.cols)
      throw std::invalid_argument("triple index out of range");
    if (k > 0 && t.row == sorted.entries[k - 1].row && t.col == sorted.entries[k - 1].col)
      throw std::runtime_error("duplicate entry");
  }

  SqMatrix out;
  out.m_ = A.rows;
  out.n_ = A.cols;
  out.triples_ = sorted;
  out.rows_.resize(static_cast<size_t>(A.rows));
  size_t k = 0;
  std::vector<double> fro_terms;
  DenseVector norms(static_cast<size_t>(A.rows), 0.0);
  for (int i = 0; i < A.rows; ++i) {
    std::vector<std::pair<int, double>> row_entries;
    while (k < sorted.entries.size() && sorted.entries[k].row == i) {
      row_entries.emplace_back(sorted.entries[k].col, sorted.entries[k].value);
      ++k;
    }
    out.rows_[i] = SqVector::from_sparse(A.cols, std::move(row_entries));
    fro_terms.push_back(out.rows_[i].squared_norm());
    norms[i] = out.rows_[i].norm();
  }
  out.fro_sq_ = kahan_sum(fro_terms);
  out.row_norms_ = SqVector::from_dense(norms);

  // Construction-time invariant: the row-norm vector's squared norm must
  // reproduce ||A||_F^2 (they are computed along different groupings).
  const double rn = out.row_norms_.squared_norm();
  const double scale = std::max({out.fro_sq_, rn, 1e-300});
  if (std::abs(rn - out.fro_sq_) > 1e-12 * scale)
    throw std::runtime_error("sq matrix invariant violated: row norms vs frobenius");
  return out;
}

SqMatrix SqMatrix::from_dense(const DenseMatrix& A) { return from_triples(to_sparse(A)); }

int SqMatrix::nnz() const { return static_cast<int>(triples_.entries.size()); }

std::pair<int, int> SqMatrix::sample_entry(Rng& rng) const {
  const int i = sample_row(rng);
  const int j = rows_[i].sample(rng);
  return {i, j};
}

SqMatrix SqMatrix::transposed() const {
  SparseMatrix T;
  T.rows = n_;
  T.cols = m_;
  T.entries.reserve(triples_.entries.size());
  for (const Triple& t : triples_.entries) T.entries.push_back({t.col, t.row, t.value});
  return from_triples(T);
}

SqVector build_sq_vector(const DenseVector& v) { return SqVector::from_dense(v); }
SqMatrix build_sq_matrix(const SparseMatrix& A) { return SqMatrix::from_triples(A); }

OversampledVector oversample(std::shared_ptr<const SqVector> v) {
  OversampledVector ov;
  ov.n = v->size();
  ov.phi = 1.0;
  ov.tilde_sq_norm = v->squared_norm();
  ov.query = [v](int i) { return v->entry(i); };
  ov.tilde_sq_entry = [v](int i) {
    const double e = v->entry(i);
    return e * e;
  };
  ov.sample_tilde = [v](Rng& rng) { return v->sample(rng); };
  return ov;
}

OversampledVector oversample(SqVector v) {
  return oversample(std::make_shared<const SqVector>(std::move(v)));
}

OversampledVector make_oversampled(const DenseVector& v, const DenseVector& vt) {
  if (v.size() != vt.size()) throw std::invalid_argument("dominating vector has wrong length");
  for (size_t i = 0; i < v.size(); ++i)
    if (std::abs(vt[i]) < std::abs(v[i])) throw std::invalid_argument("dominating vector violated");
  const double vsq = norm2sq(v);
  auto vt_sq = std::make_shared<const SqVector>(SqVector::from_dense(vt));
  auto v_copy = std::make_shared<const DenseVector>(v);
  OversampledVector ov;
  ov.n = static_cast<int>(v.size());
  ov.tilde_sq_norm = vt_sq->squared_norm();
  ov.phi = vsq > 0.0 ? ov.tilde_sq_norm / vsq : std::numeric_limits<double>::infinity();
  ov.query = [v_copy](int i) { return (*v_copy)[i]; };
  ov.tilde_sq_entry = [vt_sq](int i) {
    const double e = vt_sq->entry(i);
    return e * e;
  };
  ov.sample_tilde = [vt_sq](Rng& rng) { return vt_sq->sample(rng); };
  return ov;
}

int oversample_to_sample(const OversampledVector& ov, double delta, Rng& rng) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("failure probability must be in (0,1)");
  const double phi_eff = std::min(std::max(ov.phi, 1.0), kPhiBudgetCap);
  const long budget = std::max(1L, static_cast<long>(std::ceil(phi_eff * (std::log(1.0 / delta) + 1.0))));
  for (long attempt = 0; attempt < budget; ++attempt) {
    const int j = ov.sample_tilde(rng);
    const double vt2 = ov.tilde_sq_entry(j);
    if (vt2 <= 0.0) continue;  // cannot happen for a faithful D_vt sampler
    const double vj = ov.query(j);
    const double ratio = (vj * vj) / vt2;
    if (ratio >= 1.0 || uniform01(rng) < ratio) return j;
  }
  throw std::runtime_error("rejection budget exceeded");
}

double oversample_norm_estimate(const OversampledVector& ov, double nu, double delta, Rng& rng) {
  if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("relative error must be in (0,1]");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("failure probability must be in (0,1)");
  const int groups = std::max(1, static_cast<int>(std::ceil(8.0 * std::log(1.0 / delta))));
  const double phi_eff = std::min(std::max(ov.phi, 1.0), static_cast<double>(kGroupSizeCap));
  const long B = std::min(kGroupSizeCap,
                          std::max(1L, static_cast<long>(std::ceil(4.0 * phi_eff / (nu * nu)))));
  std::vector<double> means(static_cast<size_t>(groups), 0.0);
  for (int g = 0; g < groups; ++g) {
    double sum = 0.0, comp = 0.0;
    for (long s = 0; s < B; ++s) {
      const int j = ov.sample_tilde(rng);
      const double vt2 = ov.tilde_sq_entry(j);
      if (vt2 <= 0.0) continue;
      const double vj = ov.query(j);
      const double x = ov.tilde_sq_norm * (vj * vj) / vt2;
      const double y = x - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    means[g] = sum / static_cast<double>(B);
  }
  std::sort(means.begin(), means.end());
  if (groups % 2 == 1) return means[groups / 2];
  return 0.5 * (means[groups / 2 - 1] + means[groups / 2]);
}

OversampledVector linear_combination_access(std::vector<OversampledVector> terms,
                                            std::vector<double> lambdas, double u_norm_sq) {
  if (terms.empty()) throw std::invalid_argument("empty combination");
  if (terms.size() != lambdas.size()) throw std::invalid_argument("coefficient count mismatch");
  const int n = terms.front().n;
  for (const auto& t : terms)
    if (t.n != n) throw std::invalid_argument("combination length mismatch");
  if (!(u_norm_sq > 0.0)) throw std::runtime_error("vanishing combination");

  const double tau = static_cast<double>(terms.size());
  std::vector<double> weights(terms.size());
  for (size_t t = 0; t < terms.size(); ++t) weights[t] = lambdas[t] * lambdas[t] * terms[t].tilde_sq_norm;
  const double W = kahan_sum(weights);

  auto shared_terms = std::make_shared<std::vector<OversampledVector>>(std::move(terms));
  auto shared_lambdas = std::make_shared<std::vector<double>>(std::move(lambdas));
  auto term_alias = std::make_shared<AliasTable>(weights);

  OversampledVector ov;
  ov.n = n;
  ov.tilde_sq_norm = tau * W;
  ov.phi = ov.tilde_sq_norm / u_norm_sq;
  ov.query = [shared_terms, shared_lambdas](int i) {
    double acc = 0.0;
    for (size_t t = 0; t < shared_terms->size(); ++t)
      acc += (*shared_lambdas)[t] * (*shared_terms)[t].query(i);
    return acc;
  };
  ov.tilde_sq_entry = [shared_terms, shared_lambdas, tau](int i) {
    double acc = 0.0;
    for (size_t t = 0; t < shared_terms->size(); ++t) {
      const double l = (*shared_lambdas)[t];
      acc += l * l * (*shared_terms)[t].tilde_sq_entry(i);
    }
    return tau * acc;
  };
  ov.sample_tilde = [shared_terms, term_alias](Rng& rng) {
    const int t = term_alias->sample(rng);
    return (*shared_terms)[t].sample_tilde(rng);
  };
  return ov;
}

OversampledVector linear_combination_access_estimated(std::vector<OversampledVector> terms,
                                                      std::vector<double> lambdas, double nu,
                                                      double delta, Rng& rng) {
  // Bootstrap: assume no cancellation first (||u||^2 ~ ||vt||^2, i.e. phi ~ 1),
  // then re-estimate with group sizes derived from the running phi guess.
  std::vector<double> weights(terms.size());
  for (size_t t = 0; t < terms.size(); ++t) weights[t] = lambdas[t] * lambdas[t] * terms[t].tilde_sq_norm;
  const double tilde_sq = static_cast<double>(terms.size()) * kahan_sum(weights);
  if (tilde_sq <= 0.0) throw std::runtime_error("vanishing combination");

  double guess = tilde_sq;
  OversampledVector ov = linear_combination_access(std::move(terms), std::move(lambdas), guess);
  const int rounds = 3;
  for (int r = 0; r < rounds; ++r) {
    const double est = oversample_norm_estimate(ov, nu, delta / rounds, rng);
    if (!(est > 0.0)) throw std::runtime_error("vanishing combination");
    guess = est;
    ov.phi = ov.tilde_sq_norm / guess;
  }
  return ov;
}

OversampledVector row_combination_access(std::shared_ptr<const SqMatrix> R,
                                         const std::vector<std::pair<int, double>>& x_support,
                                         double eta, std::shared_ptr<const SqVector> b,
                                         double u_norm_sq) {
  if (static_cast<int>(b->size()) != R->cols())
    throw std::invalid_argument("offset vector length mismatch");
  std::vector<OversampledVector> terms;
  std::vector<double> lambdas;
  terms.reserve(x_support.size() + 1);
  for (const auto& [k, xk] : x_support) {
    if (k < 0 || k >= R->rows()) throw std::invalid_argument("support index out of range");
    OversampledVector t;
    t.n = R->cols();
    t.phi = 1.0;
    t.tilde_sq_norm = R->row(k).squared_norm();
    t.query = [R, k](int i) { return R->row(k).entry(i); };
    t.tilde_sq_entry = [R, k](int i) {
      const double e = R->row(k).entry(i);
      return e * e;
    };
    t.sample_tilde = [R, k](Rng& rng) { return R->row(k).sample(rng); };
    terms.push_back(std::move(t));
    lambdas.push_back(xk);
  }
  // The offset term is part of the combination even when eta == 0; it then
  // contributes nothing to the mixture weight but still counts toward tau.
  terms.push_back(oversample(b));
  lambdas.push_back(eta);
  return linear_combination_access(std::move(terms), std::move(lambdas), u_norm_sq);
}

}  // namespace qisvt
