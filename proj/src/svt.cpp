#include "qisvt/svt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qisvt {

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

double default_mu(int d_steps) {
  const double d = std::max(1, d_steps);
  return 1.0 / (4.0 * d * d * std::log(d + 2.0));
}

struct Resolved {
  double mu = 0.0;
  long s = 0, t = 0, r = 0;
};

// Formula defaults are faithful to the analysis and therefore enormous;
// callers at desk scale pass explicit sizes. We refuse rather than clamp.
constexpr double kMaxSketchSize = 1e8;
constexpr double kMaxBestSize = 1e9;

Resolved resolve_params(const SvtParams& p, int d_steps, double fro_sq, int ambient_n) {
  Resolved rp;
  rp.mu = p.mu > 0.0 ? p.mu : default_mu(d_steps);
  if (p.exact_mode) {
    // the sketched budgets are never consulted in exact mode
    rp.s = rp.t = rp.r = 1;
    return rp;
  }
  const double d = std::max(1, d_steps);
  const double mueps = rp.mu * p.eps;
  if (p.s > 0) {
    rp.s = p.s;
  } else {
    const double s = std::ceil(p.c1 * fro_sq * std::log(ambient_n / p.delta) / (mueps * mueps));
    if (!(s <= kMaxSketchSize)) throw std::invalid_argument("computed sketch size s too large; pass explicit s");
    rp.s = std::max(1L, static_cast<long>(s));
  }
  if (p.t > 0) {
    rp.t = p.t;
  } else {
    const double t = std::ceil(p.c1 * fro_sq * std::log(ambient_n / p.delta) / (mueps * mueps));
    if (!(t <= kMaxSketchSize)) throw std::invalid_argument("computed sketch size t too large; pass explicit t");
    rp.t = std::max(1L, static_cast<long>(t));
  }
  if (p.r > 0) {
    rp.r = p.r;
  } else {
    const double r = std::ceil(p.c2 * d * d * d * d * fro_sq * static_cast<double>(rp.s + rp.t));
    if (!(r <= kMaxBestSize)) throw std::invalid_argument("computed sample count r too large; pass explicit r");
    rp.r = std::max(1L, static_cast<long>(r));
  }
  return rp;
}

std::vector<double> squared_entries_dense(const SqVector& b, int n) {
  std::vector<double> w(static_cast<size_t>(n), 0.0);
  const auto& idx = b.support();
  const auto& val = b.support_values();
  for (size_t q = 0; q < idx.size(); ++q) w[idx[q]] = val[q] * val[q];
  return w;
}

void check_shared_preconditions(const SqMatrix& A, const SqVector& b, const SvtParams& params,
                                std::vector<std::string>& warnings) {
  if (!params.check_conditions) return;
  const double sn = spectral_norm_check(A, 60);
  if (sn > 1.0 + 1e-6)
    warnings.push_back("spectral norm exceeds 1 (estimate " + std::to_string(sn) +
                       "); output is best-effort");
  if (b.norm() > 1.0 + 1e-9)
    warnings.push_back("vector norm exceeds 1 (" + std::to_string(b.norm()) + ")");
}

// Stability conditions of the sketched analysis, evaluated numerically per
// polynomial. Violations degrade the guarantee, they do not invalidate the
// computation — hence warnings, not errors.
void check_coefficient_conditions(const std::vector<double>& step_coeffs, bool even_case,
                                  double mu, double eps, std::vector<std::string>& warnings) {
  const int d = std::max(0, static_cast<int>(step_coeffs.size()) - 1);
  const double de = std::max(1, d);
  if (mu * eps > 1.0 / (100.0 * de * de) * (1.0 + 1e-12))
    warnings.push_back("condition (a) violated: mu*eps > 1/(100 d^2)");
  std::vector<double> absc(step_coeffs.size());
  for (size_t i = 0; i < step_coeffs.size(); ++i) absc[i] = std::abs(step_coeffs[i]);
  if (mu * kahan_sum(absc) > 1.0 + 1e-12)
    warnings.push_back("condition (b) violated: mu * sum|coeff| > 1");
  // Condition (c): iterate polynomials in the T_2(x) variable.
  std::vector<double> iter_coeffs;
  if (even_case) {
    // the even iterate carries coefficients at_{2k+2} and an extra |4x| <= 4
    iter_coeffs.assign(step_coeffs.size(), 0.0);
    for (size_t i = 0; i + 1 < step_coeffs.size(); ++i) iter_coeffs[i] = step_coeffs[i + 1];
  } else {
    iter_coeffs = step_coeffs;
  }
  const double extra = even_case ? 4.0 : 1.0;
  for (int k = 0; k <= d; ++k) {
    const ChebPoly qk = iterate_poly_from_coeffs(iter_coeffs, k);
    const double bound = static_cast<double>(d - k + 1) / (de * de);
    if (mu * extra * supnorm_estimate(qk) > bound * (1.0 + 1e-9)) {
      warnings.push_back("condition (c) violated at iterate " + std::to_string(k));
      break;  // one notice is enough
    }
  }
}

// Accumulate sketch-position values into ambient indices (duplicate sampled
// indices sum), producing the sorted sparse x.
void scatter_support(const std::vector<int>& indices, const std::vector<double>& scalings,
                     const DenseVector& u, std::vector<int>& x_idx, std::vector<double>& x_val) {
  std::map<int, double> acc;
  for (size_t j = 0; j < indices.size(); ++j) {
    const double v = scalings[j] * u[j];
    if (v != 0.0) acc[indices[j]] += v;
  }
  x_idx.clear();
  x_val.clear();
  for (const auto& [i, v] : acc) {
    if (v != 0.0) {
      x_idx.push_back(i);
      x_val.push_back(v);
    }
  }
}

void dense_to_support(const DenseVector& x, std::vector<int>& x_idx, std::vector<double>& x_val) {
  x_idx.clear();
  x_val.clear();
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) {
      x_idx.push_back(static_cast<int>(i));
      x_val.push_back(x[i]);
    }
  }
}

DenseVector dense_vector_of(const SqVector& b) {
  DenseVector out(static_cast<size_t>(b.size()), 0.0);
  const auto& idx = b.support();
  const auto& val = b.support_values();
  for (size_t q = 0; q < idx.size(); ++q) out[idx[q]] = val[q];
  return out;
}

}  // namespace

std::vector<std::pair<int, double>> SvtOutput::x_support() const {
  std::vector<std::pair<int, double>> s;
  s.reserve(x_idx.size());
  for (size_t j = 0; j < x_idx.size(); ++j) s.emplace_back(x_idx[j], x_val[j]);
  return s;
}

SvtOutput odd_svt(std::shared_ptr<const SqMatrix> A, std::shared_ptr<const SqVector> b,
                  const ChebPoly& p, const SvtParams& params, Rng& rng) {
  if (p.parity != Parity::odd) throw std::invalid_argument("parity mismatch");
  validate_parity(p);
  if (b->squared_norm() <= 0.0) throw std::runtime_error("zero-norm vector");
  if (b->size() != A->cols()) throw std::invalid_argument("vector length mismatch");

  std::vector<double> slice = odd_coefficient_slice(p);  // a_{2k+1}
  if (slice.empty()) slice.push_back(0.0);
  const int d = static_cast<int>(slice.size()) - 1;
  const int n = A->cols();

  SvtOutput out;
  out.side = SvtOutput::Side::left;
  out.b = b;
  out.iterate_norms.assign(static_cast<size_t>(d) + 1, 0.0);

  const Resolved rp = resolve_params(params, d, A->frobenius_norm_sq(), n);
  check_shared_preconditions(*A, *b, params, out.warnings);
  if (params.check_conditions)
    check_coefficient_conditions(slice, /*even_case=*/false, rp.mu, params.eps, out.warnings);

  const double t0 = now_ms();

  if (params.exact_mode) {
    const DenseMatrix Ad = to_dense(A->triples());
    out.mat = std::make_shared<const SqMatrix>(A->transposed());
    const DenseVector bd = dense_vector_of(*b);
    out.timings.preprocess_ms = now_ms() - t0;

    DenseVector v_next(static_cast<size_t>(n), 0.0), v_next2(static_cast<size_t>(n), 0.0);
    for (int k = d; k >= 0; --k) {
      const double it0 = now_ms();
      const DenseVector w = matvec(Ad, v_next);
      const DenseVector z = matvec_t(Ad, w);
      DenseVector v(static_cast<size_t>(n), 0.0);
      for (int i = 0; i < n; ++i)
        v[i] = 4.0 * z[i] - 2.0 * v_next[i] - v_next2[i] + 2.0 * slice[k] * bd[i];
      out.iterate_norms[k] = norm2(v);
      v_next2 = std::move(v_next);
      v_next = std::move(v);
      out.timings.per_iter_ms.push_back(now_ms() - it0);
    }
    DenseVector x(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) x[i] = 0.5 * (v_next[i] - v_next2[i]);
    dense_to_support(x, out.x_idx, out.x_val);
    return out;
  }

  // --- sketched path ---
  auto At = std::make_shared<const SqMatrix>(A->transposed());
  out.mat = At;

  // Column mixture: columns of A weighted with |b_i|^2.
  std::vector<double> colw(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) colw[i] = At->row(i).squared_norm();
  const std::vector<double> pS =
      half_mixture_distribution(colw, squared_entries_dense(*b, n));
  const AampSketch S = sample_aamp(pS, static_cast<int>(rp.s), rng);

  const SparseMatrix AS = select_scaled_columns(*At, S);
  const SqMatrix AS_sq = SqMatrix::from_triples(AS);

  // Row distribution of AS for the second selection.
  std::vector<double> roww(static_cast<size_t>(AS_sq.rows()), 0.0);
  for (int i = 0; i < AS_sq.rows(); ++i) roww[i] = AS_sq.row(i).squared_norm();
  const AampSketch T = sample_aamp(distribution_from_weights(roww), static_cast<int>(rp.t), rng);

  DenseMatrix TAS(static_cast<int>(rp.t), static_cast<int>(rp.s));
  for (int l = 0; l < TAS.rows; ++l) {
    const SqVector& row = AS_sq.row(T.indices[l]);
    const auto& idx = row.support();
    const auto& val = row.support_values();
    for (size_t q = 0; q < idx.size(); ++q) TAS(l, idx[q]) = T.scalings[l] * val[q];
  }
  const DenseEntrySampler best_fwd(TAS);
  const DenseEntrySampler best_adj(transpose(TAS));

  DenseVector Stb(static_cast<size_t>(rp.s), 0.0);
  for (long j = 0; j < rp.s; ++j) Stb[j] = S.scalings[j] * b->entry(S.indices[j]);

  out.timings.preprocess_ms = now_ms() - t0;

  BestSketch B_reused, Bt_reused;
  if (params.reuse_best) {
    B_reused = sample_best(best_fwd, rp.r, rng);
    Bt_reused = sample_best(best_adj, rp.r, rng);
  }

  DenseVector v_next(static_cast<size_t>(rp.s), 0.0), v_next2(static_cast<size_t>(rp.s), 0.0);
  BestSketch B_fresh, Bt_fresh;
  for (int k = d; k >= 0; --k) {
    const double it0 = now_ms();
    if (!params.reuse_best) {
      B_fresh = sample_best(best_fwd, rp.r, rng);
      Bt_fresh = sample_best(best_adj, rp.r, rng);
    }
    const BestSketch& B = params.reuse_best ? B_reused : B_fresh;
    const BestSketch& Bt = params.reuse_best ? Bt_reused : Bt_fresh;
    const DenseVector w = B.matvec(v_next);    // in C^t
    const DenseVector z = Bt.matvec(w);        // back in C^s
    DenseVector v(static_cast<size_t>(rp.s), 0.0);
    for (long i = 0; i < rp.s; ++i)
      v[i] = 4.0 * z[i] - 2.0 * v_next[i] - v_next2[i] + 2.0 * slice[k] * Stb[i];
    out.iterate_norms[k] = norm2(v);
    v_next2 = std::move(v_next);
    v_next = std::move(v);
    out.timings.per_iter_ms.push_back(now_ms() - it0);
  }

  DenseVector u(static_cast<size_t>(rp.s), 0.0);
  for (long j = 0; j < rp.s; ++j) u[j] = 0.5 * (v_next[j] - v_next2[j]);
  scatter_support(S.indices, S.scalings, u, out.x_idx, out.x_val);
  return out;
}

SvtOutput even_svt(std::shared_ptr<const SqMatrix> A, std::shared_ptr<const SqVector> b,
                   const ChebPoly& p, const SvtParams& params, Rng& rng) {
  if (p.parity != Parity::even) throw std::invalid_argument("parity mismatch");
  validate_parity(p);
  if (b->squared_norm() <= 0.0) throw std::runtime_error("zero-norm vector");
  if (b->size() != A->cols()) throw std::invalid_argument("vector length mismatch");

  std::vector<double> slice = even_coefficient_slice(p);  // a_{2k}
  if (slice.empty()) slice.push_back(0.0);
  const std::vector<double> at = even_tilde_coeffs(slice);
  const int d = static_cast<int>(slice.size()) - 1;
  const int m = A->rows();
  const int n = A->cols();

  SvtOutput out;
  out.side = SvtOutput::Side::right;
  out.mat = A;
  out.b = b;
  out.eta = at[0];
  out.iterate_norms.assign(static_cast<size_t>(d) + 1, 0.0);

  const Resolved rp = resolve_params(params, d, A->frobenius_norm_sq(), n);
  check_shared_preconditions(*A, *b, params, out.warnings);
  if (params.check_conditions)
    check_coefficient_conditions(at, /*even_case=*/true, rp.mu, params.eps, out.warnings);

  const double t0 = now_ms();

  if (params.exact_mode) {
    const DenseMatrix Ad = to_dense(A->triples());
    const DenseVector bd = dense_vector_of(*b);
    const DenseVector Ab = matvec(Ad, bd);
    out.timings.preprocess_ms = now_ms() - t0;

    DenseVector v_next(static_cast<size_t>(m), 0.0), v_next2(static_cast<size_t>(m), 0.0);
    for (int k = d; k >= 0; --k) {
      const double it0 = now_ms();
      const double atk2 = (k + 1 <= d) ? at[k + 1] : 0.0;
      const DenseVector w = matvec_t(Ad, v_next);
      const DenseVector z = matvec(Ad, w);
      DenseVector v(static_cast<size_t>(m), 0.0);
      for (int i = 0; i < m; ++i)
        v[i] = 4.0 * z[i] - 2.0 * v_next[i] - v_next2[i] + 4.0 * atk2 * Ab[i];
      out.iterate_norms[k] = norm2(v);
      v_next2 = std::move(v_next);
      v_next = std::move(v);
      out.timings.per_iter_ms.push_back(now_ms() - it0);
    }
    DenseVector x(static_cast<size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) x[i] = 0.5 * (v_next[i] - v_next2[i]);
    dense_to_support(x, out.x_idx, out.x_val);
    return out;
  }

  // --- sketched path ---
  std::vector<double> roww(static_cast<size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) roww[i] = A->row(i).squared_norm();
  const AampSketch S = sample_aamp(distribution_from_weights(roww), static_cast<int>(rp.s), rng);

  const SparseMatrix SA = select_scaled_rows(*A, S);
  SparseMatrix SAt;
  SAt.rows = SA.cols;
  SAt.cols = SA.rows;
  SAt.entries.reserve(SA.entries.size());
  for (const Triple& tr : SA.entries) SAt.entries.push_back({tr.col, tr.row, tr.value});
  const SqMatrix SAt_sq = SqMatrix::from_triples(SAt);  // rows = columns of SA

  std::vector<double> colw(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) colw[i] = SAt_sq.row(i).squared_norm();
  const std::vector<double> pT =
      half_mixture_distribution(colw, squared_entries_dense(*b, n));
  const AampSketch T = sample_aamp(pT, static_cast<int>(rp.t), rng);

  DenseMatrix SAT(static_cast<int>(rp.s), static_cast<int>(rp.t));
  for (int l = 0; l < SAT.cols; ++l) {
    const SqVector& col = SAt_sq.row(T.indices[l]);
    const auto& idx = col.support();
    const auto& val = col.support_values();
    for (size_t q = 0; q < idx.size(); ++q) SAT(idx[q], l) = T.scalings[l] * val[q];
  }
  const DenseEntrySampler best_fwd(SAT);
  const DenseEntrySampler best_adj(transpose(SAT));

  DenseVector Ttb(static_cast<size_t>(rp.t), 0.0);
  for (long l = 0; l < rp.t; ++l) Ttb[l] = T.scalings[l] * b->entry(T.indices[l]);

  out.timings.preprocess_ms = now_ms() - t0;

  BestSketch B_reused, Bt_reused;
  if (params.reuse_best) {
    B_reused = sample_best(best_fwd, rp.r, rng);
    Bt_reused = sample_best(best_adj, rp.r, rng);
  }

  DenseVector v_next(static_cast<size_t>(rp.s), 0.0), v_next2(static_cast<size_t>(rp.s), 0.0);
  BestSketch B_fresh, Bt_fresh;
  for (int k = d; k >= 0; --k) {
    const double it0 = now_ms();
    const double atk2 = (k + 1 <= d) ? at[k + 1] : 0.0;
    if (!params.reuse_best) {
      B_fresh = sample_best(best_fwd, rp.r, rng);
      Bt_fresh = sample_best(best_adj, rp.r, rng);
    }
    const BestSketch& B = params.reuse_best ? B_reused : B_fresh;
    const BestSketch& Bt = params.reuse_best ? Bt_reused : Bt_fresh;
    const DenseVector w = Bt.matvec(v_next);       // in C^t
    const DenseVector z = B.matvec(w);             // back in C^s
    const DenseVector g = B.matvec(Ttb);           // B T^T b
    DenseVector v(static_cast<size_t>(rp.s), 0.0);
    for (long i = 0; i < rp.s; ++i)
      v[i] = 4.0 * z[i] - 2.0 * v_next[i] - v_next2[i] + 4.0 * atk2 * g[i];
    out.iterate_norms[k] = norm2(v);
    v_next2 = std::move(v_next);
    v_next = std::move(v);
    out.timings.per_iter_ms.push_back(now_ms() - it0);
  }

  DenseVector u(static_cast<size_t>(rp.s), 0.0);
  for (long j = 0; j < rp.s; ++j) u[j] = 0.5 * (v_next[j] - v_next2[j]);
  scatter_support(S.indices, S.scalings, u, out.x_idx, out.x_val);
  return out;
}

void require_symmetric(const SqMatrix& H) {
  if (H.rows() != H.cols()) throw std::invalid_argument("matrix not symmetric");
  const auto& e = H.triples().entries;  // sorted by (row, col)
  for (const Triple& t : e) {
    const Triple key{t.col, t.row, 0.0};
    auto it = std::lower_bound(e.begin(), e.end(), key, [](const Triple& a, const Triple& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    const double mirror =
        (it != e.end() && it->row == t.col && it->col == t.row) ? it->value : 0.0;
    if (std::abs(t.value - mirror) > 1e-10 * std::max(1.0, std::abs(t.value)))
      throw std::invalid_argument("matrix not symmetric");
  }
}

SvtOutput hermitian_svt(std::shared_ptr<const SqMatrix> A, std::shared_ptr<const SqVector> b,
                        const ChebPoly& p, const SvtParams& params, Rng& rng) {
  require_symmetric(*A);
  std::vector<double> even_c(p.coefficients), odd_c(p.coefficients);
  for (size_t k = 0; k < p.coefficients.size(); ++k) (k % 2 ? even_c : odd_c)[k] = 0.0;
  const bool has_even = std::any_of(even_c.begin(), even_c.end(), [](double v) { return v != 0.0; });
  const bool has_odd = std::any_of(odd_c.begin(), odd_c.end(), [](double v) { return v != 0.0; });

  if (!has_even && !has_odd) {
    // Zero polynomial: empty combination, eta = 0.
    SvtOutput o;
    o.side = SvtOutput::Side::right;
    o.mat = A;
    o.b = b;
    return o;
  }
  if (has_odd && !has_even) {
    SvtOutput o = odd_svt(A, b, ChebPoly(odd_c, Parity::odd), params, rng);
    // Rows and columns coincide for symmetric A; expose the right-side form.
    o.side = SvtOutput::Side::right;
    o.mat = A;
    return o;
  }
  if (has_even && !has_odd)
    return even_svt(A, b, ChebPoly(even_c, Parity::even), params, rng);

  SvtOutput oe = even_svt(A, b, ChebPoly(even_c, Parity::even), params, rng);
  if (!has_odd) return oe;
  SvtOutput oo = odd_svt(A, b, ChebPoly(odd_c, Parity::odd), params, rng);

  SvtOutput merged;
  merged.side = SvtOutput::Side::right;
  merged.mat = A;
  merged.b = b;
  merged.eta = oe.eta;
  std::map<int, double> acc;
  for (size_t j = 0; j < oe.x_idx.size(); ++j) acc[oe.x_idx[j]] += oe.x_val[j];
  for (size_t j = 0; j < oo.x_idx.size(); ++j) acc[oo.x_idx[j]] += oo.x_val[j];
  for (const auto& [i, v] : acc) {
    if (v != 0.0) {
      merged.x_idx.push_back(i);
      merged.x_val.push_back(v);
    }
  }
  merged.iterate_norms = oe.iterate_norms;
  merged.iterate_norms.insert(merged.iterate_norms.end(), oo.iterate_norms.begin(),
                              oo.iterate_norms.end());
  merged.warnings = oe.warnings;
  merged.warnings.insert(merged.warnings.end(), oo.warnings.begin(), oo.warnings.end());
  merged.timings.preprocess_ms = oe.timings.preprocess_ms + oo.timings.preprocess_ms;
  merged.timings.per_iter_ms = oe.timings.per_iter_ms;
  merged.timings.per_iter_ms.insert(merged.timings.per_iter_ms.end(),
                                    oo.timings.per_iter_ms.begin(), oo.timings.per_iter_ms.end());
  return merged;
}

DenseVector exact_matrix_clenshaw_hermitian(const DenseMatrix& A, const DenseVector& b,
                                            const ChebPoly& p) {
  if (A.rows != A.cols) throw std::invalid_argument("matrix not square");
  if (static_cast<int>(b.size()) != A.cols) throw std::invalid_argument("vector length mismatch");
  const auto& a = p.coefficients;
  const int n = A.rows;
  DenseVector u_next(static_cast<size_t>(n), 0.0), u_next2(static_cast<size_t>(n), 0.0);
  DenseVector u2_saved(static_cast<size_t>(n), 0.0);
  if (a.empty()) return DenseVector(static_cast<size_t>(n), 0.0);
  const int dd = static_cast<int>(a.size()) - 1;
  for (int k = dd; k >= 0; --k) {
    DenseVector u = matvec(A, u_next);
    for (int i = 0; i < n; ++i) u[i] = 2.0 * u[i] - u_next2[i] + a[k] * b[i];
    if (k == 0) u2_saved = u_next2;
    u_next2 = std::move(u_next);
    u_next = std::move(u);
  }
  DenseVector y(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) y[i] = 0.5 * (a[0] * b[i] + u_next[i] - u2_saved[i]);
  return y;
}

DenseVector svt_oracle_svd(const DenseMatrix& A, const DenseVector& b, const ChebPoly& p) {
  return dense_apply_poly(A, b, p);
}

double spectral_norm_check(const SqMatrix& A, int iterations) {
  const auto& tr = A.triples().entries;
  if (tr.empty()) return 0.0;
  Rng rng = make_rng(0x5bec7, 0);
  DenseVector v = random_unit_vector(A.cols(), rng);
  double lambda = 0.0;
  DenseVector w(static_cast<size_t>(A.rows()), 0.0);
  DenseVector u(static_cast<size_t>(A.cols()), 0.0);
  for (int it = 0; it < iterations; ++it) {
    std::fill(w.begin(), w.end(), 0.0);
    for (const Triple& t : tr) w[t.row] += t.value * v[t.col];
    std::fill(u.begin(), u.end(), 0.0);
    for (const Triple& t : tr) u[t.col] += t.value * w[t.row];
    const double nu_ = norm2(u);
    if (nu_ == 0.0) return 0.0;
    lambda = nu_;
    for (size_t i = 0; i < u.size(); ++i) v[i] = u[i] / nu_;
  }
  return std::sqrt(lambda);
}

double output_entry(const SvtOutput& o, int i) {
  if (i < 0 || i >= o.mat->cols()) throw std::out_of_range("index out of range");
  double acc = 0.0;
  for (size_t j = 0; j < o.x_idx.size(); ++j) acc += o.x_val[j] * o.mat->entry(o.x_idx[j], i);
  if (o.eta != 0.0) acc += o.eta * o.b->entry(i);
  return acc;
}

DenseVector output_dense(const SvtOutput& o) {
  DenseVector y(static_cast<size_t>(o.mat->cols()), 0.0);
  for (size_t j = 0; j < o.x_idx.size(); ++j) {
    const SqVector& row = o.mat->row(o.x_idx[j]);
    const auto& idx = row.support();
    const auto& val = row.support_values();
    for (size_t q = 0; q < idx.size(); ++q) y[idx[q]] += o.x_val[j] * val[q];
  }
  if (o.eta != 0.0) {
    const auto& idx = o.b->support();
    const auto& val = o.b->support_values();
    for (size_t q = 0; q < idx.size(); ++q) y[idx[q]] += o.eta * val[q];
  }
  return y;
}

OversampledVector output_access(const SvtOutput& o, double nu, double delta, Rng& rng) {
  std::vector<OversampledVector> terms;
  std::vector<double> lambdas;
  terms.reserve(o.x_idx.size() + 1);
  const std::shared_ptr<const SqMatrix> mat = o.mat;
  for (size_t j = 0; j < o.x_idx.size(); ++j) {
    const int k = o.x_idx[j];
    OversampledVector t;
    t.n = mat->cols();
    t.phi = 1.0;
    t.tilde_sq_norm = mat->row(k).squared_norm();
    t.query = [mat, k](int i) { return mat->row(k).entry(i); };
    t.tilde_sq_entry = [mat, k](int i) {
      const double e = mat->row(k).entry(i);
      return e * e;
    };
    t.sample_tilde = [mat, k](Rng& r) { return mat->row(k).sample(r); };
    terms.push_back(std::move(t));
    lambdas.push_back(o.x_val[j]);
  }
  if (o.side == SvtOutput::Side::right) {
    // left-side outputs live in row space, where the b term has no place
    terms.push_back(oversample(o.b));
    lambdas.push_back(o.eta);
  }
  return linear_combination_access_estimated(std::move(terms), std::move(lambdas), nu, delta, rng);
}

int output_sample(const SvtOutput& o, double delta, Rng& rng) {
  const OversampledVector ov = output_access(o, 0.25, delta / 2.0, rng);
  return oversample_to_sample(ov, delta / 2.0, rng);
}

double output_norm(const SvtOutput& o, double nu, double delta, Rng& rng) {
  const OversampledVector ov = output_access(o, std::min(nu, 0.25), delta / 2.0, rng);
  return oversample_norm_estimate(ov, nu, delta / 2.0, rng);
}

}  // namespace qisvt
