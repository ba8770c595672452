#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qisvt/rng.hpp"

namespace qisvt {

enum class Parity { even, odd, general };

std::string parity_name(Parity p);
Parity parity_from_name(const std::string& name);

// Polynomial in the Chebyshev T-basis: p(x) = sum_k a_k T_k(x).
struct ChebPoly {
  std::vector<double> coefficients;  // a_0 .. a_d
  Parity parity = Parity::general;

  ChebPoly() = default;
  ChebPoly(std::vector<double> coeffs, Parity par = Parity::general)
      : coefficients(std::move(coeffs)), parity(par) {}

  int degree() const { return coefficients.empty() ? 0 : static_cast<int>(coefficients.size()) - 1; }
};

// Throws std::invalid_argument if the parity tag contradicts the coefficients
// (odd => all even-index coefficients are zero, and vice versa).
void validate_parity(const ChebPoly& p, double tol = 0.0);

enum class NoiseMode { off, worst_sign_random, uniform_random };

// Finite-precision arithmetic model: every elementary +,-,* result is
// multiplied by (1 + mu_eps * u), with u in {-1,+1} (worst_sign_random) or
// u in [-1,1] (uniform_random).
struct NoiseConfig {
  double mu_eps = 0.0;
  NoiseMode mode = NoiseMode::off;
  std::uint64_t seed = 0;
};

// --- Evaluation -------------------------------------------------------------

// Three-term T-recurrence, exact arithmetic. Works for |x| > 1 too (the
// recurrence is the analytic continuation), which the beyond-interval tests
// rely on.
double cheb_eval_direct(const ChebPoly& p, double x);

// Standard Clenshaw: q_k = 2x q_{k+1} - q_{k+2} + a_k, output (a_0 + q_0 - q_2)/2.
// With noise.mode == off this is exact Clenshaw.
double cheb_eval_clenshaw(const ChebPoly& p, double x, const NoiseConfig& noise = {});

// Odd-only Clenshaw over a_{2k+1}: q_k = 2 T_2(x) q_{k+1} - q_{k+2} + a_{2k+1} U_1(x),
// output (q_0 - q_1)/2. Requires parity == odd.
double odd_clenshaw_scalar(const ChebPoly& p, double x, const NoiseConfig& noise = {});

// Backward alternating-sum transform on the even coefficients:
// given (a_0, a_2, ..., a_{2d}) returns (at_0, ..., at_{2d}) with
// at_{2k} = a_{2k} - at_{2k+2} and at_0 = p(0).
std::vector<double> even_tilde_coeffs(const std::vector<double>& even_coeffs);

// Even-only Clenshaw over the transformed coefficients:
// q_k = 2 T_2(x) q_{k+1} - q_{k+2} + at_{2k+2} U_1(x)^2, output at_0 + (q_0 - q_1)/2.
// Requires parity == even.
double even_clenshaw_scalar(const ChebPoly& p, double x, const NoiseConfig& noise = {});

// --- Coefficient extraction helpers -----------------------------------------

// For odd p of degree 2d+1: returns (a_1, a_3, ..., a_{2d+1}), length d+1.
std::vector<double> odd_coefficient_slice(const ChebPoly& p);
// For even p of degree 2d: returns (a_0, a_2, ..., a_{2d}), length d+1.
std::vector<double> even_coefficient_slice(const ChebPoly& p);

// --- Clenshaw iterates -------------------------------------------------------

// q_k as a polynomial: q_k(x) = sum_{i=k}^{d} a_i U_{i-k}(x), converted to the
// T-basis with exact integer weights (U_j = T_j + 2*sum of lower same-parity T's...
// precisely U_j = sum_{l>=0, j-2l>=0} w T_{j-2l}, w = 1 if j-2l == 0 else 2).
ChebPoly clenshaw_iterate_poly(const ChebPoly& p, int k);

// Same closed form over a bare coefficient vector (used for the odd/even
// matrix recurrences, whose iterates live in the T_2(x) variable).
ChebPoly iterate_poly_from_coeffs(const std::vector<double>& coeffs, int k);

// All iterate values q_d(x), ..., q_0(x) at one point in a single backward
// recurrence pass (O(d) total). out[k] = q_k(x).
void clenshaw_iterates_at(const ChebPoly& p, double x, std::vector<double>& out);

// --- Coefficient progressions -----------------------------------------------

// Sum of a_{offset + j*step} for j = 0,1,2,... within range, optionally with
// sign (-1)^j. Kahan-compensated.
double coeff_progression_sum(const ChebPoly& p, int step, int offset, bool sign_alternating);

// The a-priori bound the progression sums are tested against:
//   step 2, alternating: (16 + 4 ln^2(d+1)) * supnorm
//   step 4, any offset:  (32 + 8 ln^2(d+1)) * supnorm
// d = p.degree(). Other combinations return +inf (no bound claimed).
double coeff_progression_bound(const ChebPoly& p, int step, bool sign_alternating,
                               double sup_norm);

// --- Certificate recurrence ---------------------------------------------------

// Backward substitution on the upper-unitriangular system
//   c_s = 1 - sum_{t=s+1}^{d} sin(pi/2 * (2s+1)/(2t+1)) c_t.
// All entries are provably positive and sum to at most ln(d) + 2.
std::vector<double> odd_sum_certificate(int d);

// --- Sup-norm ----------------------------------------------------------------

// Chebyshev-Lobatto grid x_j = cos(pi j / (N-1)), j = 0..N-1 (includes +-1).
std::vector<double> chebyshev_lobatto_grid(int N);

// max |p(x)| over an 8(d+1)-point Lobatto grid.
double supnorm_estimate(const ChebPoly& p);

// --- Test-instance helpers ----------------------------------------------------

// Random polynomial with supnorm_estimate == 1: Gaussian coefficients,
// normalized on the grid. Parity general/odd/even per request.
ChebPoly random_bounded_poly(int degree, Parity parity, Rng& rng);

}  // namespace qisvt
