#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qisvt/chebyshev.hpp"
#include "qisvt/dense.hpp"
#include "qisvt/reference_oracle.hpp"
#include "qisvt/sq_access.hpp"
#include "qisvt/sketch.hpp"

namespace qisvt {

struct SvtParams {
  double eps = 0.1;
  double delta = 0.1;
  // 0 means "use the default" 1/(4 max(d,1)^2 ln(max(d,1)+2)), d = Clenshaw
  // step count (half-degree).
  double mu = 0.0;
  // Sketch sizes; 0 means the formula defaults s = t = ceil(c1 ||A||_F^2
  // ln(n/delta) / (mu eps)^2), r = ceil(c2 d^4 ||A||_F^2 (s+t)). The formula
  // defaults are extremely conservative — experiments normally pass tuned
  // values.
  long s = 0;
  long t = 0;
  long r = 0;
  double c1 = 1.0;
  double c2 = 1.0;
  bool exact_mode = false;       // bypass all sketches (testing)
  bool reuse_best = false;       // debug: reuse one BEST pair across steps
  bool check_conditions = true;  // emit precondition warnings
};

// Implicit description of y ~= p(A) b. Both sides reduce to
//   y = mat^T x + eta * b
// where mat's rows are the vectors being combined: for the left side
// (y = A x) mat holds A^T, for the right side (y = A^T x + eta b) mat holds A.
struct SvtOutput {
  enum class Side { left, right };
  Side side = Side::left;

  std::vector<int> x_idx;     // sorted support of x (into rows of mat)
  std::vector<double> x_val;  // matching values
  double eta = 0.0;

  std::shared_ptr<const SqMatrix> mat;
  std::shared_ptr<const SqVector> b;

  std::vector<double> iterate_norms;  // ||v_k||_2, index k = 0..d
  std::vector<std::string> warnings;
  struct Timings {
    double preprocess_ms = 0.0;
    std::vector<double> per_iter_ms;
  } timings;

  std::vector<std::pair<int, double>> x_support() const;
};

// Sketched odd pipeline. A is row-access SQ (the transpose handle is built
// internally); p must be odd with supnorm <= 1 intended; b nonzero.
// Output side = left: y = A x with nnz(x) <= s.
SvtOutput odd_svt(std::shared_ptr<const SqMatrix> A, std::shared_ptr<const SqVector> b,
                  const ChebPoly& p, const SvtParams& params, Rng& rng);

// Sketched even pipeline. Output side = right: y = A^T x + eta b,
// nnz(x) <= s, eta = alternating tail sum of the even coefficients at 0.
SvtOutput even_svt(std::shared_ptr<const SqMatrix> A, std::shared_ptr<const SqVector> b,
                   const ChebPoly& p, const SvtParams& params, Rng& rng);

// Convenience wrapper for symmetric A and arbitrary-parity p: splits p into
// odd and even parts, runs both pipelines, and merges the two row
// combinations (valid because rows and columns coincide).
SvtOutput hermitian_svt(std::shared_ptr<const SqMatrix> A, std::shared_ptr<const SqVector> b,
                        const ChebPoly& p, const SvtParams& params, Rng& rng);

// Unsketched matrix Clenshaw for Hermitian A (any parity): p(A) b directly.
DenseVector exact_matrix_clenshaw_hermitian(const DenseMatrix& A, const DenseVector& b,
                                            const ChebPoly& p);

// Dense ground truth for the parity pipelines (delegates to the dense SVD
// reference path).
DenseVector svt_oracle_svd(const DenseMatrix& A, const DenseVector& b, const ChebPoly& p);

// Power-iteration estimate of the top singular value over the sparse triples.
double spectral_norm_check(const SqMatrix& A, int iterations = 100);

// Throws std::invalid_argument("matrix not symmetric") unless A matches its
// transpose entrywise to 1e-10 relative.
void require_symmetric(const SqMatrix& A);

// --- Access to the implicit output ------------------------------------------

// y_i, exact, in O(nnz(x)) entry queries.
double output_entry(const SvtOutput& o, int i);

// Dense reconstruction (tests / small instances).
DenseVector output_dense(const SvtOutput& o);

// Oversampled access to y (the combination of nnz(x)+1 SQ vectors); ||y||^2
// is estimated internally by the bootstrap rounds. Build once, then draw.
OversampledVector output_access(const SvtOutput& o, double nu, double delta, Rng& rng);

// One-shot wrappers: sample an index / estimate the squared norm, then discard
// the access object.
int output_sample(const SvtOutput& o, double delta, Rng& rng);
double output_norm(const SvtOutput& o, double nu, double delta, Rng& rng);

}  // namespace qisvt
