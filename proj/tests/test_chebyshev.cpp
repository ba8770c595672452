#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <iostream>
#include <vector>

#include "qisvt/chebyshev.hpp"
#include "qisvt/dense.hpp"
#include "qisvt/rng.hpp"

using namespace qisvt;

namespace {

// Independent oracle: T_k(x) = cos(k arccos x) on [-1,1]. Never touches the
// recurrence code under test.
double trig_eval(const ChebPoly& p, double x) {
  const double theta = std::acos(x);
  std::vector<double> terms;
  terms.reserve(p.coefficients.size());
  for (size_t k = 0; k < p.coefficients.size(); ++k)
    terms.push_back(p.coefficients[k] * std::cos(static_cast<double>(k) * theta));
  return kahan_sum(terms);
}

}  // namespace

TEST_CASE("direct evaluation matches the trig identity") {
  Rng rng = make_rng(101, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + static_cast<int>(uniform_below(rng, 60));
    const ChebPoly p = random_bounded_poly(d, Parity::general, rng);
    const double x = 2.0 * uniform01(rng) - 1.0;
    const double a = cheb_eval_direct(p, x);
    const double b = trig_eval(p, x);
    worst = std::max(worst, std::abs(a - b));
  }
  std::cout << "direct vs trig oracle, worst abs diff = " << worst << "\n";
  CHECK(worst < 1e-11);
}

TEST_CASE("clenshaw equals direct up to degree 200") {
  Rng rng = make_rng(102, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 1 + static_cast<int>(uniform_below(rng, 200));
    const ChebPoly p = random_bounded_poly(d, Parity::general, rng);
    const double x = 2.0 * uniform01(rng) - 1.0;
    const double a = cheb_eval_direct(p, x);
    const double b = cheb_eval_clenshaw(p, x);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  std::cout << "clenshaw vs direct, worst rel diff = " << worst << "\n";
  CHECK(worst < 1e-10);
}

TEST_CASE("odd clenshaw equals direct on odd polynomials") {
  Rng rng = make_rng(103, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const int half = static_cast<int>(uniform_below(rng, 100));
    const ChebPoly p = random_bounded_poly(2 * half + 1, Parity::odd, rng);
    const double x = 2.0 * uniform01(rng) - 1.0;
    worst = std::max(worst, std::abs(odd_clenshaw_scalar(p, x) - cheb_eval_direct(p, x)));
  }
  std::cout << "odd clenshaw vs direct, worst abs diff = " << worst << "\n";
  CHECK(worst < 1e-10);
}

TEST_CASE("even clenshaw equals direct on even polynomials") {
  Rng rng = make_rng(104, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const int half = static_cast<int>(uniform_below(rng, 100));
    const ChebPoly p = random_bounded_poly(2 * half, Parity::even, rng);
    const double x = 2.0 * uniform01(rng) - 1.0;
    worst = std::max(worst, std::abs(even_clenshaw_scalar(p, x) - cheb_eval_direct(p, x)));
  }
  std::cout << "even clenshaw vs direct, worst abs diff = " << worst << "\n";
  CHECK(worst < 1e-10);
}

TEST_CASE("noise mode off leaves clenshaw bit-identical") {
  Rng rng = make_rng(105, 0);
  const ChebPoly p = random_bounded_poly(40, Parity::general, rng);
  NoiseConfig zero;
  zero.mu_eps = 0.0;
  zero.mode = NoiseMode::worst_sign_random;
  zero.seed = 999;
  for (int i = 0; i < 20; ++i) {
    const double x = 2.0 * uniform01(rng) - 1.0;
    CHECK(cheb_eval_clenshaw(p, x) == cheb_eval_clenshaw(p, x, zero));
  }
}

TEST_CASE("even tilde transform: backward alternating tails and p(0)") {
  Rng rng = make_rng(106, 0);
  const ChebPoly p = random_bounded_poly(12, Parity::even, rng);
  const std::vector<double> even = even_coefficient_slice(p);
  const std::vector<double> at = even_tilde_coeffs(even);
  REQUIRE(at.size() == even.size());
  // at_k = a_{2k} - at_{k+1}
  for (size_t k = 0; k + 1 < at.size(); ++k)
    CHECK(std::abs(at[k] - (even[k] - at[k + 1])) < 1e-15);
  CHECK(std::abs(at.back() - even.back()) < 1e-15);
  // T_{2k}(0) = (-1)^k makes the alternating tail at index 0 equal p(0)
  std::cout << "tilde[0] = " << at[0] << "  p(0) = " << cheb_eval_direct(p, 0.0) << "\n";
  CHECK(std::abs(at[0] - cheb_eval_direct(p, 0.0)) < 1e-12);
}

TEST_CASE("iterate polynomials reproduce the backward recurrence values") {
  Rng rng = make_rng(107, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 3 + static_cast<int>(uniform_below(rng, 30));
    const ChebPoly p = random_bounded_poly(d, Parity::general, rng);
    const double x = 2.0 * uniform01(rng) - 1.0;
    std::vector<double> iterates;
    clenshaw_iterates_at(p, x, iterates);
    REQUIRE(static_cast<int>(iterates.size()) == d + 1);
    for (int k = 0; k <= d; ++k) {
      const ChebPoly qk = clenshaw_iterate_poly(p, k);
      const double via_poly = cheb_eval_direct(qk, x);
      CHECK(std::abs(via_poly - iterates[k]) < 1e-9);
    }
  }
}

TEST_CASE("iterate polynomial closed form: q_d picks up the top coefficient") {
  // q_d(x) = a_d U_0(x) = a_d for every x.
  ChebPoly p({0.5, -0.25, 0.125, 0.75});
  const ChebPoly qd = clenshaw_iterate_poly(p, 3);
  CHECK(std::abs(cheb_eval_direct(qd, 0.3) - 0.75) < 1e-15);
  CHECK(std::abs(cheb_eval_direct(qd, -0.9) - 0.75) < 1e-15);
}

TEST_CASE("iterate sup-norms obey the logarithmic envelope (small sweep)") {
  // Full 200-polynomial sweep lives in the acceptance suite; this is the
  // smoke-test version of the same invariant.
  Rng rng = make_rng(108, 0);
  const std::vector<double> grid = chebyshev_lobatto_grid(257);
  int violations = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 4 + static_cast<int>(uniform_below(rng, 60));
    const ChebPoly p = random_bounded_poly(d, Parity::general, rng);
    const double sup = supnorm_estimate(p);
    std::vector<double> sup_k(static_cast<size_t>(d) + 1, 0.0);
    std::vector<double> iterates;
    for (double x : grid) {
      clenshaw_iterates_at(p, x, iterates);
      for (int k = 0; k <= d; ++k) sup_k[k] = std::max(sup_k[k], std::abs(iterates[k]));
    }
    const double factor = 16.0 + (16.0 / (3.14159265358979323846 * 3.14159265358979323846)) *
                                     std::log(static_cast<double>(d));
    for (int k = 0; k <= d; ++k) {
      const double bound = (d - k + 1.0) * factor * sup;
      worst_ratio = std::max(worst_ratio, sup_k[k] / bound);
      if (sup_k[k] > bound) ++violations;
    }
  }
  std::cout << "iterate envelope: worst sup_k/bound = " << worst_ratio << ", violations = "
            << violations << "\n";
  CHECK(violations == 0);
}

TEST_CASE("chebyshev polynomials stay below e just outside the interval") {
  for (int d : {4, 16, 64, 256, 1024}) {
    std::vector<double> coeffs(static_cast<size_t>(d) + 1, 0.0);
    coeffs.back() = 1.0;
    const ChebPoly td(coeffs);
    const double edge = 1.0 + 1.0 / (4.0 * static_cast<double>(d) * d);
    const double val = std::abs(cheb_eval_direct(td, edge));
    std::cout << "T_" << d << "(1 + 1/(4d^2)) = " << val << "\n";
    CHECK(val <= std::exp(1.0) + 1e-9);
    CHECK(std::abs(cheb_eval_direct(td, -edge)) <= std::exp(1.0) + 1e-9);
  }
}

TEST_CASE("progression sums reproduce endpoint values exactly") {
  Rng rng = make_rng(109, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + static_cast<int>(uniform_below(rng, 120));
    const ChebPoly p = random_bounded_poly(d, Parity::general, rng);
    const double p1 = cheb_eval_direct(p, 1.0);
    const double pm1 = cheb_eval_direct(p, -1.0);
    // T_k(1) = 1 and T_k(-1) = (-1)^k turn these sums into endpoint values.
    const double even_plain = coeff_progression_sum(p, 2, 0, false);
    const double odd_plain = (d >= 1) ? coeff_progression_sum(p, 2, 1, false) : 0.0;
    const double full_signed = coeff_progression_sum(p, 1, 0, true);
    CHECK(std::abs(even_plain - 0.5 * (p1 + pm1)) < 1e-11);
    CHECK(std::abs(odd_plain - 0.5 * (p1 - pm1)) < 1e-11);
    CHECK(std::abs(full_signed - pm1) < 1e-11);
  }
}

TEST_CASE("alternating progression sums respect the log-squared bounds") {
  Rng rng = make_rng(110, 0);
  double worst2 = 0.0, worst4 = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + static_cast<int>(uniform_below(rng, 256));
    const ChebPoly p = random_bounded_poly(d, Parity::general, rng);
    const double sup = supnorm_estimate(p);
    const double b2 = coeff_progression_bound(p, 2, true, sup);
    worst2 = std::max(worst2, std::abs(coeff_progression_sum(p, 2, 1, true)) / b2);
    const double b4 = coeff_progression_bound(p, 4, true, sup);
    for (int off = 0; off < 4 && off <= p.degree(); ++off) {
      worst4 = std::max(worst4, std::abs(coeff_progression_sum(p, 4, off, true)) / b4);
      worst4 = std::max(worst4, std::abs(coeff_progression_sum(p, 4, off, false)) / b4);
    }
  }
  std::cout << "alternating step-2 worst ratio = " << worst2 << ", step-4 worst ratio = "
            << worst4 << "\n";
  CHECK(worst2 <= 1.0);
  CHECK(worst4 <= 1.0);
}

TEST_CASE("certificate: positive, bounded sum, solves its triangular system") {
  for (int d : {10, 100, 1000}) {
    const std::vector<double> c = odd_sum_certificate(d);
    REQUIRE(static_cast<int>(c.size()) == d + 1);
    bool positive = true;
    for (double v : c) positive = positive && v > 0.0;
    const double total = kahan_sum(c);
    double worst_res = 0.0;
    for (int s = 0; s <= d; ++s) {
      double acc = c[s];
      for (int t = s + 1; t <= d; ++t)
        acc += std::sin(0.5 * 3.14159265358979323846 * (2.0 * s + 1.0) / (2.0 * t + 1.0)) * c[t];
      worst_res = std::max(worst_res, std::abs(acc - 1.0));
    }
    std::cout << "certificate d=" << d << ": sum = " << total << " (bound " << std::log(d) + 2.0
              << "), system residual = " << worst_res << "\n";
    CHECK(positive);
    CHECK(total <= std::log(static_cast<double>(d)) + 2.0);
    CHECK(worst_res <= 1e-10);
  }
}

TEST_CASE("coefficients of a bounded polynomial are at most twice its sup") {
  Rng rng = make_rng(111, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + static_cast<int>(uniform_below(rng, 64));
    const ChebPoly p = random_bounded_poly(d, Parity::general, rng);
    const double sup = supnorm_estimate(p);
    for (double a : p.coefficients) worst = std::max(worst, std::abs(a) / (2.0 * sup));
  }
  std::cout << "coefficient bound |a_k|/(2 sup): worst = " << worst << "\n";
  CHECK(worst <= 1.0 + 1e-9);
}

TEST_CASE("lobatto grid shape") {
  const std::vector<double> g = chebyshev_lobatto_grid(9);
  REQUIRE(g.size() == 9);
  CHECK(std::abs(g.front() - 1.0) < 1e-15);
  CHECK(std::abs(g.back() + 1.0) < 1e-15);
  CHECK(std::abs(g[4]) < 1e-15);  // middle point of an odd grid is 0
}

TEST_CASE("supnorm estimate is exact for pure chebyshev polynomials") {
  for (int k : {1, 5, 17, 50}) {
    std::vector<double> coeffs(static_cast<size_t>(k) + 1, 0.0);
    coeffs.back() = 3.5;
    CHECK(std::abs(supnorm_estimate(ChebPoly(coeffs)) - 3.5) < 1e-12);
  }
}

TEST_CASE("random bounded polynomials are normalized and tagged") {
  Rng rng = make_rng(112, 0);
  for (Parity par : {Parity::general, Parity::odd, Parity::even}) {
    const int d = par == Parity::odd ? 21 : 20;
    const ChebPoly p = random_bounded_poly(d, par, rng);
    CHECK(std::abs(supnorm_estimate(p) - 1.0) < 1e-12);
    CHECK(p.parity == par);
    validate_parity(p);  // must not throw
  }
}

TEST_CASE("parity validation rejects mistagged polynomials") {
  ChebPoly bad({0.0, 1.0, 0.5}, Parity::odd);  // nonzero even-index coeff
  CHECK_THROWS_AS(validate_parity(bad), std::invalid_argument);
  ChebPoly good({0.0, 1.0, 0.0, -0.25}, Parity::odd);
  CHECK_NOTHROW(validate_parity(good));
}

TEST_CASE("noisy clenshaw stays within the stability envelope (smoke)") {
  // The 1000-trial sweep over d in {8,16,32,64} is acceptance criterion
  // territory; here we only check the machinery wires up and stays sane.
  Rng rng = make_rng(113, 0);
  const int d = 16;
  const double mu = 1.0 / (4.0 * d * d * std::log(d + 2.0));
  const double eps = 1e-3;
  int fails = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const ChebPoly p = random_bounded_poly(d, Parity::general, rng);
    const double x = 2.0 * uniform01(rng) - 1.0;
    NoiseConfig noise;
    noise.mu_eps = mu * eps;
    noise.mode = NoiseMode::worst_sign_random;
    noise.seed = rng();
    const double err = std::abs(cheb_eval_clenshaw(p, x, noise) - cheb_eval_direct(p, x));
    const double bound = 50.0 * eps * supnorm_estimate(p);
    worst_ratio = std::max(worst_ratio, err / bound);
    if (err > bound) ++fails;
  }
  std::cout << "noisy clenshaw d=16: worst err/bound = " << worst_ratio << ", fails = " << fails
            << "/100\n";
  CHECK(fails <= 1);
}
