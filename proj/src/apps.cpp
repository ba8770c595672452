#include "qisvt/apps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qisvt/reference_oracle.hpp"

namespace qisvt {

namespace {

bool oracle_feasible(const SqMatrix& A) {
  return static_cast<double>(A.rows()) * static_cast<double>(A.cols()) <= 1e7;
}

// The SVT pipelines want sup|p| <= 1; the apps rescale the polynomial down
// before the run and the (linear) output back up afterwards.
void scale_output(SvtOutput& o, double factor) {
  for (double& v : o.x_val) v *= factor;
  o.eta *= factor;
}

ChebPoly scaled_poly(const ChebPoly& p, double factor) {
  ChebPoly q = p;
  for (double& c : q.coefficients) c *= factor;
  return q;
}

DenseVector dense_vector_of(const SqVector& b) {
  DenseVector out(static_cast<size_t>(b.size()), 0.0);
  const auto& idx = b.support();
  const auto& val = b.support_values();
  for (size_t q = 0; q < idx.size(); ++q) out[idx[q]] = val[q];
  return out;
}

}  // namespace

AppResult regress(std::shared_ptr<const SqMatrix> A, std::shared_ptr<const SqVector> b,
                  double sigma, double eps, const SvtParams& sp, Rng& rng) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("sigma must be in (0, 1)");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");

  const double kappa = 1.0 / sigma;
  ApproxSpec g = inverse_poly(kappa, std::min(eps, 0.25));
  const double s0 = 1.0 / std::max(1.0, g.cert.sup_norm);

  auto At = std::make_shared<const SqMatrix>(A->transposed());
  AppResult res;
  res.app = "regress";
  res.out = odd_svt(At, b, scaled_poly(g.poly, s0), sp, rng);
  scale_output(res.out, 1.0 / s0);
  res.params = {{"sigma", sigma},
                {"eps", eps},
                {"kappa", kappa},
                {"degree", static_cast<double>(g.poly.degree())},
                {"scale", s0}};
  res.polys.push_back(std::move(g));

  if (oracle_feasible(*A)) {
    const DenseMatrix Atd = to_dense(At->triples());
    const DenseVector bd = dense_vector_of(*b);
    // Polynomial-level oracle: the same certified polynomial through the
    // dense SVD. The smoothing gap to the hard-threshold pseudoinverse is
    // reported separately, never folded into the residual.
    const SvdResult svd = dense_svd(Atd);
    const DenseVector y_poly = dense_apply_poly(svd, bd, res.polys[0].poly);
    DenseVector y_hard(static_cast<size_t>(At->rows()), 0.0);
    for (size_t i = 0; i < svd.sigma.size(); ++i) {
      if (svd.sigma[i] < sigma) continue;
      double proj = 0.0;
      for (int r = 0; r < Atd.cols; ++r) proj += svd.V(r, static_cast<int>(i)) * bd[r];
      proj /= svd.sigma[i];
      for (int r = 0; r < Atd.rows; ++r) y_hard[r] += proj * svd.U(r, static_cast<int>(i));
    }
    res.y_re = output_dense(res.out);
    res.residual = norm2(vec_sub(res.y_re, y_poly));
    res.residual_relative = res.residual / std::max(1e-300, b->norm());
    res.oracle_gap = norm2(vec_sub(y_poly, y_hard));
    res.oracle_computed = true;
  }
  return res;
}

AppResult recommend(std::shared_ptr<const SqMatrix> A, int row, double sigma, double eps,
                    const SvtParams& sp, Rng& rng, double eta_smooth) {
  if (row < 0 || row >= A->rows()) throw std::invalid_argument("row index out of range");
  if (A->row(row).squared_norm() <= 0.0) throw std::runtime_error("zero row");
  if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("sigma must be in (0, 1]");

  const double varsigma = std::min(eps / 2.0, 0.25);
  ApproxSpec th = threshold_poly(sigma, eta_smooth, varsigma);
  const double s0 = 1.0 / std::max(1.0, th.cert.sup_norm);

  auto At = std::make_shared<const SqMatrix>(A->transposed());
  auto e_row = std::make_shared<const SqVector>(
      SqVector::from_sparse(A->rows(), {{row, 1.0}}));

  AppResult res;
  res.app = "recommend";
  res.out = even_svt(At, e_row, scaled_poly(th.poly, s0), sp, rng);
  scale_output(res.out, 1.0 / s0);
  res.params = {{"row", static_cast<double>(row)},
                {"sigma", sigma},
                {"eps", eps},
                {"eta_smooth", eta_smooth},
                {"varsigma", varsigma},
                {"degree", static_cast<double>(th.poly.degree())}};
  res.polys.push_back(std::move(th));

  if (oracle_feasible(*A)) {
    const DenseMatrix Ad = to_dense(A->triples());
    const DenseMatrix Atd = to_dense(At->triples());
    const DenseVector e_dense = dense_vector_of(*e_row);

    // Flattened output: the stored description is x'' = A x' + eta e_row,
    // and the recommendation row is A^T x''.
    const DenseVector x_flat = output_dense(res.out);
    const DenseVector r_vec = matvec_t(Ad, x_flat);

    const SvdResult svd = dense_svd(Ad);  // A = U S V^T
    DenseVector r_hard(static_cast<size_t>(A->cols()), 0.0);
    for (size_t j = 0; j < svd.sigma.size(); ++j) {
      if (svd.sigma[j] < sigma) continue;
      const double w = svd.sigma[j] * svd.U(row, static_cast<int>(j));
      for (int q = 0; q < Ad.cols; ++q) r_hard[q] += w * svd.V(q, static_cast<int>(j));
    }
    const DenseVector y_poly = dense_apply_poly(Atd, e_dense, res.polys[0].poly);
    const DenseVector r_poly = matvec_t(Ad, y_poly);

    res.y_re = r_vec;
    res.residual = norm2(vec_sub(r_vec, r_hard));
    res.residual_relative = res.residual / std::sqrt(A->row(row).squared_norm());
    res.oracle_gap = norm2(vec_sub(r_poly, r_hard));
    res.oracle_computed = true;
  }
  return res;
}

AppResult hamsim(std::shared_ptr<const SqMatrix> H, std::shared_ptr<const SqVector> b, double t,
                 double eps, const SvtParams& sp, Rng& rng) {
  require_symmetric(*H);
  if (!(eps > 0.0 && eps < 1.0 / 2.718281828459045))
    throw std::invalid_argument("eps must be in (0, 1/e)");

  auto [cs, sn] = trig_polys(t, eps / 4.0);
  const double scale = 1.0 / (1.0 + eps / 4.0);

  AppResult res;
  res.app = "hamsim";
  res.out = even_svt(H, b, scaled_poly(cs.poly, scale), sp, rng);
  scale_output(res.out, 1.0 / scale);
  res.out_secondary = odd_svt(H, b, scaled_poly(sn.poly, scale), sp, rng);
  scale_output(res.out_secondary, 1.0 / scale);
  res.has_secondary = true;
  res.params = {{"t", t},
                {"eps", eps},
                {"cos_degree", static_cast<double>(cs.poly.degree())},
                {"sin_degree", static_cast<double>(sn.poly.degree())}};
  res.polys.push_back(std::move(cs));
  res.polys.push_back(std::move(sn));

  if (oracle_feasible(*H)) {
    const DenseMatrix Hd = to_dense(H->triples());
    const DenseVector bd = dense_vector_of(*b);
    const ComplexDense E = dense_expm_sym(Hd, t);
    const ComplexVector yo = apply_complex(E, bd);
    res.y_re = output_dense(res.out);
    res.y_im = output_dense(res.out_secondary);
    const double dr = norm2sq(vec_sub(res.y_re, yo.re));
    const double di = norm2sq(vec_sub(res.y_im, yo.im));
    res.residual = std::sqrt(dr + di);
    res.residual_relative = res.residual / std::max(1e-300, b->norm());
    res.oracle_computed = true;
  }
  return res;
}

}  // namespace qisvt
