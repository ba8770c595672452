#include "qisvt/chebyshev.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qisvt/dense.hpp"

namespace qisvt {

std::string parity_name(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    default: return "general";
  }
}

Parity parity_from_name(const std::string& name) {
  if (name == "even") return Parity::even;
  if (name == "odd") return Parity::odd;
  if (name == "general") return Parity::general;
  throw std::invalid_argument("unknown parity: " + name);
}

void validate_parity(const ChebPoly& p, double tol) {
  if (p.parity == Parity::general) return;
  const int bad_residue = (p.parity == Parity::odd) ? 0 : 1;
  for (size_t k = 0; k < p.coefficients.size(); ++k) {
    if (static_cast<int>(k % 2) == bad_residue && std::abs(p.coefficients[k]) > tol)
      throw std::invalid_argument("parity mismatch");
  }
}

namespace {

// Every elementary result passes through op(); in mode off it is the identity,
// so the exact and noisy code paths are literally the same code.
class NoisyOps {
 public:
  explicit NoisyOps(const NoiseConfig& cfg)
      : mu_eps_(cfg.mu_eps), mode_(cfg.mode), rng_(make_rng(cfg.seed, 0xc1e7540u)) {}

  double op(double v) {
    if (mode_ == NoiseMode::off || mu_eps_ == 0.0) return v;
    double u;
    if (mode_ == NoiseMode::worst_sign_random) {
      u = (rng_() & 1u) ? 1.0 : -1.0;
    } else {
      u = 2.0 * uniform01(rng_) - 1.0;
    }
    return v * (1.0 + mu_eps_ * u);
  }
  double add(double a, double b) { return op(a + b); }
  double sub(double a, double b) { return op(a - b); }
  double mul(double a, double b) { return op(a * b); }

 private:
  double mu_eps_;
  NoiseMode mode_;
  Rng rng_;
};

}  // namespace

double cheb_eval_direct(const ChebPoly& p, double x) {
  const auto& a = p.coefficients;
  if (a.empty()) return 0.0;
  double acc = a[0];
  if (a.size() == 1) return acc;
  double t_prev = 1.0;  // T_0
  double t_cur = x;     // T_1
  acc += a[1] * t_cur;
  for (size_t k = 2; k < a.size(); ++k) {
    double t_next = 2.0 * x * t_cur - t_prev;
    t_prev = t_cur;
    t_cur = t_next;
    acc += a[k] * t_cur;
  }
  return acc;
}

double cheb_eval_clenshaw(const ChebPoly& p, double x, const NoiseConfig& noise) {
  const auto& a = p.coefficients;
  if (a.empty()) return 0.0;
  NoisyOps ops(noise);
  const int d = static_cast<int>(a.size()) - 1;
  const double tx = ops.mul(2.0, x);
  double q_next = 0.0;   // q_{k+1}
  double q_next2 = 0.0;  // q_{k+2}
  double q2_saved = 0.0;
  for (int k = d; k >= 0; --k) {
    const double t1 = ops.mul(tx, q_next);
    const double t2 = ops.sub(q_next2, a[k]);
    const double q = ops.sub(t1, t2);
    if (k == 0) q2_saved = q_next2;  // this is q_2
    q_next2 = q_next;
    q_next = q;
  }
  return ops.mul(0.5, ops.sub(ops.add(a[0], q_next), q2_saved));
}

std::vector<double> odd_coefficient_slice(const ChebPoly& p) {
  std::vector<double> out;
  for (size_t k = 1; k < p.coefficients.size(); k += 2) out.push_back(p.coefficients[k]);
  return out;
}

std::vector<double> even_coefficient_slice(const ChebPoly& p) {
  std::vector<double> out;
  for (size_t k = 0; k < p.coefficients.size(); k += 2) out.push_back(p.coefficients[k]);
  return out;
}

double odd_clenshaw_scalar(const ChebPoly& p, double x, const NoiseConfig& noise) {
  if (p.parity != Parity::odd) throw std::invalid_argument("parity mismatch");
  const std::vector<double> a = odd_coefficient_slice(p);  // a[k] = a_{2k+1}
  if (a.empty()) return 0.0;
  NoisyOps ops(noise);
  const int d = static_cast<int>(a.size()) - 1;
  const double u1 = ops.mul(2.0, x);       // U_1(x)
  const double x2 = ops.mul(u1, x);        // 2x^2
  const double t2x = ops.sub(x2, 1.0);     // T_2(x)
  const double ty = ops.mul(2.0, t2x);     // 2 T_2(x)
  double q_next = 0.0, q_next2 = 0.0;
  for (int k = d; k >= 0; --k) {
    const double term = ops.mul(a[k], u1);
    const double t1 = ops.mul(ty, q_next);
    const double q = ops.sub(t1, ops.sub(q_next2, term));
    q_next2 = q_next;
    q_next = q;
  }
  // q_next = q_0, q_next2 = q_1
  return ops.mul(0.5, ops.sub(q_next, q_next2));
}

std::vector<double> even_tilde_coeffs(const std::vector<double>& even_coeffs) {
  std::vector<double> at(even_coeffs.size(), 0.0);
  double running = 0.0;  // at_{2k+2}
  for (int k = static_cast<int>(even_coeffs.size()) - 1; k >= 0; --k) {
    at[k] = even_coeffs[k] - running;
    running = at[k];
  }
  return at;
}

double even_clenshaw_scalar(const ChebPoly& p, double x, const NoiseConfig& noise) {
  if (p.parity != Parity::even) throw std::invalid_argument("parity mismatch");
  const std::vector<double> a = even_coefficient_slice(p);  // a[k] = a_{2k}
  if (a.empty()) return 0.0;
  const std::vector<double> at = even_tilde_coeffs(a);
  NoisyOps ops(noise);
  const int d = static_cast<int>(a.size()) - 1;
  const double u1 = ops.mul(2.0, x);
  const double u1sq = ops.mul(u1, u1);  // U_1(x)^2 = 4x^2
  const double x2 = ops.mul(u1, x);
  const double t2x = ops.sub(x2, 1.0);
  const double ty = ops.mul(2.0, t2x);
  double q_next = 0.0, q_next2 = 0.0;
  for (int k = d; k >= 0; --k) {
    const double atk2 = (k + 1 <= d) ? at[k + 1] : 0.0;  // at_{2k+2}
    const double term = ops.mul(atk2, u1sq);
    const double t1 = ops.mul(ty, q_next);
    const double q = ops.sub(t1, ops.sub(q_next2, term));
    q_next2 = q_next;
    q_next = q;
  }
  return ops.add(at[0], ops.mul(0.5, ops.sub(q_next, q_next2)));
}

ChebPoly iterate_poly_from_coeffs(const std::vector<double>& coeffs, int k) {
  const int d = static_cast<int>(coeffs.size()) - 1;
  if (k < 0 || k > d) throw std::invalid_argument("iterate index out of range");
  std::vector<double> r(static_cast<size_t>(d - k) + 1, 0.0);
  for (int i = k; i <= d; ++i) {
    const double ai = coeffs[i];
    if (ai == 0.0) continue;
    // U_{i-k} = sum over m = i-k, i-k-2, ..., of (m == 0 ? 1 : 2) T_m
    for (int m = i - k; m >= 0; m -= 2) r[m] += ai * (m == 0 ? 1.0 : 2.0);
  }
  return ChebPoly(std::move(r), Parity::general);
}

ChebPoly clenshaw_iterate_poly(const ChebPoly& p, int k) {
  return iterate_poly_from_coeffs(p.coefficients, k);
}

void clenshaw_iterates_at(const ChebPoly& p, double x, std::vector<double>& out) {
  const auto& a = p.coefficients;
  const int d = static_cast<int>(a.size()) - 1;
  out.assign(a.size(), 0.0);
  if (a.empty()) return;
  double q_next = 0.0, q_next2 = 0.0;
  for (int k = d; k >= 0; --k) {
    const double q = 2.0 * x * q_next - q_next2 + a[k];
    out[k] = q;
    q_next2 = q_next;
    q_next = q;
  }
}

double coeff_progression_sum(const ChebPoly& p, int step, int offset, bool sign_alternating) {
  if (step < 1) throw std::invalid_argument("step must be >= 1");
  const int d = p.degree();
  if (offset < 0 || offset > d) throw std::invalid_argument("offset out of range");
  std::vector<double> terms;
  double sign = 1.0;
  for (int idx = offset; idx <= d; idx += step) {
    terms.push_back(sign * p.coefficients[idx]);
    if (sign_alternating) sign = -sign;
  }
  return kahan_sum(terms);
}

double coeff_progression_bound(const ChebPoly& p, int step, bool sign_alternating,
                               double sup_norm) {
  const double d = static_cast<double>(p.degree());
  const double L = std::log(d + 1.0);
  if (step == 2 && sign_alternating) return (16.0 + 4.0 * L * L) * sup_norm;
  if (step == 4) return (32.0 + 8.0 * L * L) * sup_norm;
  return std::numeric_limits<double>::infinity();
}

std::vector<double> odd_sum_certificate(int d) {
  if (d < 0) throw std::invalid_argument("degree must be nonnegative");
  std::vector<double> c(static_cast<size_t>(d) + 1, 0.0);
  c[d] = 1.0;
  const double half_pi = std::acos(-1.0) / 2.0;
  for (int s = d - 1; s >= 0; --s) {
    std::vector<double> terms;
    terms.reserve(static_cast<size_t>(d - s));
    for (int t = s + 1; t <= d; ++t) {
      terms.push_back(std::sin(half_pi * (2.0 * s + 1.0) / (2.0 * t + 1.0)) * c[t]);
    }
    c[s] = 1.0 - kahan_sum(terms);
  }
  return c;
}

std::vector<double> chebyshev_lobatto_grid(int N) {
  if (N < 2) return {1.0};
  std::vector<double> xs(static_cast<size_t>(N));
  const double pi = std::acos(-1.0);
  for (int j = 0; j < N; ++j) xs[j] = std::cos(pi * j / (N - 1));
  return xs;
}

double supnorm_estimate(const ChebPoly& p) {
  const int N = 8 * (p.degree() + 1);
  double best = 0.0;
  for (double x : chebyshev_lobatto_grid(N)) best = std::max(best, std::abs(cheb_eval_direct(p, x)));
  return best;
}

ChebPoly random_bounded_poly(int degree, Parity parity, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> a(static_cast<size_t>(degree) + 1, 0.0);
  for (int k = 0; k <= degree; ++k) {
    if (parity == Parity::odd && k % 2 == 0) continue;
    if (parity == Parity::even && k % 2 == 1) continue;
    a[k] = gauss(rng);
  }
  ChebPoly p(std::move(a), parity);
  const double m = supnorm_estimate(p);
  if (m > 0.0)
    for (double& v : p.coefficients) v /= m;
  return p;
}

}  // namespace qisvt
