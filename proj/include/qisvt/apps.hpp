#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qisvt/polyapprox.hpp"
#include "qisvt/svt.hpp"

namespace qisvt {

// Result of one application run: the implicit output(s), the polynomial(s)
// that drove them, and residuals against the dense oracle when the instance
// is small enough (rows*cols <= 10^7) to compute one.
struct AppResult {
  std::string app;  // regress | recommend | hamsim
  std::map<std::string, double> params;

  SvtOutput out;            // primary output (cos branch for hamsim)
  SvtOutput out_secondary;  // sin branch (hamsim only)
  bool has_secondary = false;

  std::vector<ApproxSpec> polys;  // constructed polynomial(s), pre-scaling

  bool oracle_computed = false;
  double residual = 0.0;           // || y - oracle ||
  double residual_relative = 0.0;  // residual / app-specific reference scale
  double oracle_gap = 0.0;         // see each op's doc

  // Dense reconstruction of the final application vector (when computed).
  DenseVector y_re, y_im;  // y_im only for hamsim
};

// Regularized regression: y ~= g(sigma_i)-transform of b with g the odd
// truncated-inverse polynomial for kappa = 1/sigma, i.e. y approximates the
// pseudoinverse applied to b with singular values below sigma suppressed.
// residual is measured against the same certified polynomial applied through
// the dense SVD (no hidden idealization); oracle_gap reports the distance
// from that to the hard-threshold pseudoinverse solution.
AppResult regress(std::shared_ptr<const SqMatrix> A, std::shared_ptr<const SqVector> b,
                  double sigma, double eps, const SvtParams& sp, Rng& rng);

// Recommendation: even SVT on A^T with b = e_row applies the even threshold
// filter q to AA^T; the composite A^T(A x' + eta e_row) approximates the
// hard-thresholded row [A_{>=sigma}]_{row,*}^T when the spectrum avoids the
// (1±eta_smooth) sigma smoothing band. residual is against that dense
// thresholded-SVD row; oracle_gap is the polynomial-level distance.
// The stored SvtOutput describes the flattened combination A x' + eta e_row,
// so output_sample draws from the x of the A^T x output form.
AppResult recommend(std::shared_ptr<const SqMatrix> A, int row, double sigma, double eps,
                    const SvtParams& sp, Rng& rng, double eta_smooth = 1.0 / 3.0);

// Hamiltonian simulation: y_cos + i y_sin ~= e^{iHt} b for symmetric H with
// ||H|| <= 1. Each trig branch gets an eps/2 budget; residual is the complex
// l2 distance to the dense eigendecomposition exponential (target <= 2 eps
// ||b||).
AppResult hamsim(std::shared_ptr<const SqMatrix> H, std::shared_ptr<const SqVector> b, double t,
                 double eps, const SvtParams& sp, Rng& rng);

}  // namespace qisvt
