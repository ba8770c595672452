#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qisvt/chebyshev.hpp"

namespace qisvt {

// Outcome of grid certification of a constructed polynomial: the sup of |p|
// over the boundedness interval, the worst error against the target on the
// approximation domain, and whether both met their thresholds.
struct CertReport {
  int grid_points = 0;
  double sup_norm = 0.0;        // max |p| over the boundedness interval
  double sup_bound = 0.0;       // what it had to stay under
  double domain_error = 0.0;    // worst |p - target| over the target domain
  double domain_tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

// A constructed approximation: the polynomial, the parameters that built it,
// and its certification.
struct ApproxSpec {
  std::string kind;  // sign | threshold | inverse | cos | sin
  std::map<std::string, double> params;
  ChebPoly poly;
  CertReport cert;
};

// Exact projection of f onto T_0..T_degree by the discrete cosine transform
// at degree+1 Chebyshev-Gauss nodes (interpolation when f is not already a
// polynomial of that degree).
std::vector<double> chebyshev_coeffs_from_function(const std::function<double(double)>& f,
                                                   int degree);

// Smoothed sign: odd polynomial with |p| <= 1 on [-2,2] and
// |p - sign| <= err on [-2,-gap] u [gap,2]. Degree O((1/gap) log(1/err)),
// doubled until a dense grid certifies both properties. Throws
// std::runtime_error (message includes the worst violation) if the degree
// cap is reached without certifying.
ApproxSpec sign_poly(double gap, double err);

// Even "rectangle" filter: ~0 on [0, (1-eta)*sigma], ~1 on [(1+eta)*sigma, 1],
// within band width varsigma. Built from two shifted smoothed signs and
// re-expanded in the T-basis by projection.
ApproxSpec threshold_poly(double sigma, double eta, double varsigma);

// Odd truncation of 1/x: explicit alternating binomial-tail coefficients on
// T_1, T_3, ..., T_{2J+1}. Certified against the closed-form target
// normalization * (1 - (1-x^2)^b)/x on [1/kappa, 1] and |g| <= 4J on [-1,1].
// b_override = 0 uses b = ceil(kappa^2 log(kappa/err)).
ApproxSpec inverse_poly(double kappa, double err, long b_override = 0,
                        double normalization = 1.0);

// Bessel function of the first kind, integer order, by compensated series;
// accurate for |x| <= 50.
double bessel_j(int order, double x);

// Chebyshev expansions of cos(t x) (even) and sin(t x) (odd) with Bessel
// coefficients, truncated at r = ceil(|t| + 2 log(1/err)/max(1, loglog(1/err)))
// and extended until a dense grid certifies err-closeness.
std::pair<ApproxSpec, ApproxSpec> trig_polys(double t, double err);

}  // namespace qisvt
