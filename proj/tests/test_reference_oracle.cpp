#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <iostream>
#include <vector>

#include "qisvt/chebyshev.hpp"
#include "qisvt/dense.hpp"
#include "qisvt/reference_oracle.hpp"
#include "qisvt/rng.hpp"

using namespace qisvt;

namespace {

double orthonormality_defect(const DenseMatrix& Q) {
  const DenseMatrix G = matmul(transpose(Q), Q);
  double worst = 0.0;
  for (int i = 0; i < G.rows; ++i)
    for (int j = 0; j < G.cols; ++j)
      worst = std::max(worst, std::abs(G(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

double reconstruction_error(const DenseMatrix& A, const SvdResult& svd) {
  DenseMatrix rec(A.rows, A.cols);
  const int k = static_cast<int>(svd.sigma.size());
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      double acc = 0.0;
      for (int q = 0; q < k; ++q) acc += svd.U(i, q) * svd.sigma[q] * svd.V(j, q);
      rec(i, j) = acc;
    }
  double err = 0.0;
  for (size_t q = 0; q < A.data.size(); ++q)
    err += (A.data[q] - rec.data[q]) * (A.data[q] - rec.data[q]);
  return std::sqrt(err);
}

}  // namespace

TEST_CASE("svd of a diagonal matrix recovers the absolute diagonal, sorted") {
  DenseMatrix A(4, 4);
  A(0, 0) = -3.0;
  A(1, 1) = 1.0;
  A(2, 2) = 7.0;
  A(3, 3) = 0.5;
  const SvdResult svd = dense_svd(A);
  REQUIRE(svd.sigma.size() == 4);
  CHECK(svd.sigma[0] == doctest::Approx(7.0));
  CHECK(svd.sigma[1] == doctest::Approx(3.0));
  CHECK(svd.sigma[2] == doctest::Approx(1.0));
  CHECK(svd.sigma[3] == doctest::Approx(0.5));
  for (size_t q = 1; q < svd.sigma.size(); ++q) CHECK(svd.sigma[q - 1] >= svd.sigma[q]);
}

TEST_CASE("svd factors are orthonormal and reconstruct the matrix") {
  Rng rng = make_rng(401, 0);
  for (auto [m, n] : {std::pair<int, int>{8, 5}, {5, 8}, {10, 10}}) {
    const DenseMatrix A = random_gaussian_matrix(m, n, rng);
    const SvdResult svd = dense_svd(A);
    const double du = orthonormality_defect(svd.U);
    const double dv = orthonormality_defect(svd.V);
    const double re = reconstruction_error(A, svd);
    std::cout << m << "x" << n << ": U defect " << du << ", V defect " << dv
              << ", reconstruction " << re << "\n";
    CHECK(du < 1e-9);
    CHECK(dv < 1e-9);
    CHECK(re < 1e-8);
  }
}

TEST_CASE("svd of a prescribed-spectrum matrix returns that spectrum") {
  Rng rng = make_rng(402, 0);
  const std::vector<double> sigma = {2.0, 1.5, 0.9, 0.3};
  const DenseMatrix A = random_matrix_with_spectrum(9, 6, sigma, rng);
  const SvdResult svd = dense_svd(A);
  for (size_t q = 0; q < sigma.size(); ++q)
    CHECK(svd.sigma[q] == doctest::Approx(sigma[q]).epsilon(1e-8));
  for (size_t q = sigma.size(); q < svd.sigma.size(); ++q)
    CHECK(svd.sigma[q] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("symmetric eigendecomposition reconstructs and sorts ascending") {
  Rng rng = make_rng(403, 0);
  const DenseMatrix G = random_gaussian_matrix(7, 7, rng);
  DenseMatrix H(7, 7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) H(i, j) = 0.5 * (G(i, j) + G(j, i));
  const EigResult eig = dense_eig_sym(H);
  for (size_t q = 1; q < eig.lambda.size(); ++q) CHECK(eig.lambda[q - 1] <= eig.lambda[q]);
  CHECK(orthonormality_defect(eig.W) < 1e-9);
  DenseMatrix rec(7, 7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      double acc = 0.0;
      for (int q = 0; q < 7; ++q) acc += eig.W(i, q) * eig.lambda[q] * eig.W(j, q);
      rec(i, j) = acc;
    }
  double err = 0.0;
  for (size_t q = 0; q < H.data.size(); ++q)
    err += (H.data[q] - rec.data[q]) * (H.data[q] - rec.data[q]);
  std::cout << "eig reconstruction error = " << std::sqrt(err) << "\n";
  CHECK(std::sqrt(err) < 1e-8);
}

TEST_CASE("matrix exponential at t = 0 is the identity") {
  Rng rng = make_rng(404, 0);
  const DenseMatrix G = random_gaussian_matrix(5, 5, rng);
  DenseMatrix H(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) H(i, j) = 0.5 * (G(i, j) + G(j, i));
  const ComplexDense E = dense_expm_sym(H, 0.0);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      CHECK(E.re(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0));
      CHECK(E.im(i, j) == doctest::Approx(0.0).scale(1.0));
    }
}

TEST_CASE("matrix exponential of the 2x2 swap is the rotation formula") {
  // e^{iHt} = cos(t) I + i sin(t) H for H = [[0,1],[1,0]]
  DenseMatrix H(2, 2);
  H(0, 1) = 1.0;
  H(1, 0) = 1.0;
  const double t = 0.7;
  const ComplexDense E = dense_expm_sym(H, t);
  CHECK(E.re(0, 0) == doctest::Approx(std::cos(t)));
  CHECK(E.re(0, 1) == doctest::Approx(0.0).scale(1.0));
  CHECK(E.im(0, 1) == doctest::Approx(std::sin(t)));
  CHECK(E.im(1, 0) == doctest::Approx(std::sin(t)));
}

TEST_CASE("evolution preserves norm") {
  Rng rng = make_rng(405, 0);
  const DenseMatrix G = random_gaussian_matrix(6, 6, rng);
  DenseMatrix H(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) H(i, j) = 0.5 * (G(i, j) + G(j, i));
  const DenseVector b = random_unit_vector(6, rng);
  for (double t : {0.3, 1.0, 4.0, 20.0}) {
    const ComplexVector y = apply_complex(dense_expm_sym(H, t), b);
    CHECK(complex_vec_norm(y) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("polynomial application: identity and quadratic sanity cases") {
  Rng rng = make_rng(406, 0);
  const DenseMatrix A = random_gaussian_matrix(6, 4, rng);
  // normalize so the top singular value is < 1
  const double nrm = spectral_norm_dense(A);
  DenseMatrix An = A;
  for (auto& v : An.data) v /= (1.1 * nrm);
  const DenseVector b4 = random_gaussian_vector(4, rng);
  const DenseVector b6 = random_gaussian_vector(6, rng);

  // p(x) = T_1 = x (odd): p(A) b = A b
  const ChebPoly px({0.0, 1.0}, Parity::odd);
  const DenseVector y1 = dense_apply_poly(An, b4, px);
  const DenseVector y1_ref = matvec(An, b4);
  for (int i = 0; i < 6; ++i) CHECK(y1[i] == doctest::Approx(y1_ref[i]).epsilon(1e-10));

  // p(x) = T_2 = 2x^2 - 1 (even): p(A) b = 2 A^T A b - b
  const ChebPoly pt2({0.0, 0.0, 1.0}, Parity::even);
  const DenseVector y2 = dense_apply_poly(An, b4, pt2);
  DenseVector y2_ref = matvec_t(An, matvec(An, b4));
  for (auto& v : y2_ref) v *= 2.0;
  axpy(-1.0, b4, y2_ref);
  for (int i = 0; i < 4; ++i) CHECK(y2[i] == doctest::Approx(y2_ref[i]).epsilon(1e-9));

  // general parity is not a singular-value transform
  const ChebPoly pg({0.5, 0.5, 0.25});
  CHECK_THROWS_AS(dense_apply_poly(An, b4, pg), std::invalid_argument);
  (void)b6;
}

TEST_CASE("even polynomials act on the null space through p(0)") {
  // A = diag(0.8) embedded in 3x2: second input direction is null
  DenseMatrix A(3, 2);
  A(0, 0) = 0.8;
  const ChebPoly pt2({0.0, 0.0, 1.0}, Parity::even);  // p(0) = -1
  const DenseVector b = {0.0, 1.0};                    // entirely in the null space
  const DenseVector y = dense_apply_poly(A, b, pt2);
  CHECK(y[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(y[1] == doctest::Approx(-1.0));  // p(0) * b
}

TEST_CASE("svd-reuse overload agrees with the direct one") {
  Rng rng = make_rng(407, 0);
  DenseMatrix A = random_gaussian_matrix(5, 5, rng);
  const double nrm = spectral_norm_dense(A);
  for (auto& v : A.data) v /= (1.05 * nrm);
  const DenseVector b = random_gaussian_vector(5, rng);
  const SvdResult svd = dense_svd(A);
  const ChebPoly p({0.0, 0.25, 0.0, -0.5, 0.0, 0.125}, Parity::odd);
  const DenseVector y1 = dense_apply_poly(A, b, p);
  const DenseVector y2 = dense_apply_poly(svd, b, p);
  for (int i = 0; i < 5; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-10));
}
