#include "qisvt/polyapprox.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qisvt {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Certification grids: at least 20x the degree, never fewer than 1e4 points.
int cert_grid_points(int degree) { return std::max(10000, 20 * std::max(1, degree)); }

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// --- smoothed sign in the half-argument variable ------------------------------
//
// The shifted compositions in the threshold filter evaluate the sign
// polynomial on [-2,2], where the T-basis in x is numerically explosive. We
// therefore build and certify sign in u = x/2 on [-1,1] and only convert to
// the x-basis at the end (by sampling, which is stable since |x/2| <= 1/2).

struct SignBuild {
  std::vector<double> u_coeffs;  // odd T-basis polynomial q(u), p(x) = q(x/2)
  int degree = 0;
  double k = 0.0;
  CertReport cert;
};

constexpr int kMaxSignDegree = 1 << 16;

SignBuild build_sign_u(double gap, double err) {
  if (!(gap > 0.0)) throw std::invalid_argument("gap must be positive");
  if (!(err > 0.0 && err < 0.5)) throw std::invalid_argument("err must be in (0, 1/2)");

  SignBuild out;
  out.k = (std::sqrt(2.0) / gap) * std::sqrt(std::log(2.0 / (kPi * err * err)));
  const double K = 2.0 * out.k;  // erf steepness in the u variable
  auto target = [K](double u) { return std::erf(K * u); };

  int degree = std::max(3, static_cast<int>(std::ceil(2.0 * K)));
  degree |= 1;

  for (;;) {
    std::vector<double> qc = chebyshev_coeffs_from_function(target, degree);
    for (size_t j = 0; j < qc.size(); j += 2) qc[j] = 0.0;  // odd symmetrization
    ChebPoly q{qc, Parity::odd};
    const double m = supnorm_estimate(q);
    const double scale = (1.0 - err / 4.0) / std::max(1.0, m);
    for (double& c : qc) c *= scale;
    q.coefficients = qc;

    const int G = cert_grid_points(degree);
    double sup = 0.0, dom = 0.0;
    for (int i = 0; i <= G; ++i) {
      const double u = static_cast<double>(i) / G;  // [0,1]; odd symmetry covers [-1,0]
      const double pu = cheb_eval_direct(q, u);
      sup = std::max(sup, std::abs(pu));
      if (2.0 * u >= gap) dom = std::max(dom, std::abs(pu - 1.0));
    }
    out.cert.grid_points = G + 1;
    out.cert.sup_norm = sup;
    out.cert.sup_bound = 1.0;
    out.cert.domain_error = dom;
    out.cert.domain_tolerance = err;
    out.cert.passed = sup <= 1.0 && dom <= err;
    out.cert.detail = "half-domain grid by odd symmetry; interval [-2,2] in the original variable";
    if (out.cert.passed) {
      out.u_coeffs = std::move(qc);
      out.degree = degree;
      return out;
    }
    if (degree >= kMaxSignDegree)
      throw std::runtime_error("sign polynomial failed to certify: worst |p| = " + fmt(sup) +
                               ", worst domain error = " + fmt(dom));
    degree = 2 * degree + 1;
  }
}

}  // namespace

std::vector<double> chebyshev_coeffs_from_function(const std::function<double(double)>& f,
                                                   int degree) {
  if (degree < 0) throw std::invalid_argument("degree must be nonnegative");
  const int N = degree + 1;
  std::vector<double> vals(N);
  for (int j = 0; j < N; ++j) vals[j] = f(std::cos(kPi * (j + 0.5) / N));
  std::vector<double> coeffs(N, 0.0);
  for (int k = 0; k < N; ++k) {
    double acc = 0.0, comp = 0.0;
    for (int j = 0; j < N; ++j) {
      const double term = vals[j] * std::cos(kPi * k * (j + 0.5) / N) - comp;
      const double next = acc + term;
      comp = (next - acc) - term;
      acc = next;
    }
    coeffs[k] = (k == 0 ? 1.0 : 2.0) * acc / N;
  }
  return coeffs;
}

ApproxSpec sign_poly(double gap, double err) {
  const SignBuild s = build_sign_u(gap, err);

  // Convert q(u) to the x-basis p(x) = q(x/2); all sample points satisfy
  // |x/2| <= 1/2, so the conversion is stable.
  const ChebPoly q{s.u_coeffs, Parity::odd};
  std::vector<double> pc =
      chebyshev_coeffs_from_function([&q](double x) { return cheb_eval_direct(q, x / 2.0); },
                                     s.degree);
  for (size_t j = 0; j < pc.size(); j += 2) pc[j] = 0.0;

  ApproxSpec spec;
  spec.kind = "sign";
  spec.params = {{"gap", gap}, {"err", err}, {"k", s.k}, {"degree", static_cast<double>(s.degree)}};
  spec.poly = ChebPoly{std::move(pc), Parity::odd};
  spec.cert = s.cert;
  return spec;
}

ApproxSpec threshold_poly(double sigma, double eta, double varsigma) {
  if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("sigma must be in (0, 1]");
  if (!(eta > 0.0 && eta < 0.5)) throw std::invalid_argument("eta must be in (0, 1/2)");
  if (!(varsigma > 0.0 && varsigma < 0.5))
    throw std::invalid_argument("varsigma must be in (0, 1/2)");

  // The flat-band scaling: with |s - sign| <= eps_s on the live bands, the
  // mixture 1 + (s(x-sigma)+s(-x-sigma))/2 lands in [1-eps_s/2, 1+eps_s/2] on
  // the outer band, so dividing by (1 + varsigma/4) puts it inside
  // [1-varsigma, 1] once eps_s <= varsigma/2.
  const double c = 1.0 / (1.0 + varsigma / 4.0);
  double eps_s = varsigma / 2.0;
  CertReport last;

  for (int attempt = 0; attempt < 4; ++attempt, eps_s /= 2.0) {
    const SignBuild s = build_sign_u(eta * sigma, eps_s);
    const ChebPoly q{s.u_coeffs, Parity::odd};
    auto F = [&](double x) {
      return c * (1.0 + 0.5 * (cheb_eval_direct(q, (x - sigma) / 2.0) +
                               cheb_eval_direct(q, (-x - sigma) / 2.0)));
    };
    // Exact projection at 4x the needed node count; the odd-degree terms of
    // the two shifts cancel, so the true degree is at most s.degree - 1.
    std::vector<double> pc = chebyshev_coeffs_from_function(F, 4 * s.degree);
    pc.resize(static_cast<size_t>(s.degree));
    for (size_t j = 1; j < pc.size(); j += 2) pc[j] = 0.0;
    ChebPoly p{pc, Parity::even};

    const int G = cert_grid_points(p.degree());
    double sup = 0.0, violation = 0.0;
    for (int i = 0; i <= G; ++i) {
      const double x = static_cast<double>(i) / G;
      const double px = cheb_eval_direct(p, x);
      sup = std::max(sup, std::abs(px));
      violation = std::max(violation, std::abs(px) - 1.0);
      if (x <= (1.0 - eta) * sigma) {
        violation = std::max(violation, px - varsigma);  // middle band [0, varsigma]
        violation = std::max(violation, -px);
      } else if (x >= (1.0 + eta) * sigma) {
        violation = std::max(violation, (1.0 - varsigma) - px);  // outer band [1-varsigma, 1]
      }
    }
    last.grid_points = G + 1;
    last.sup_norm = sup;
    last.sup_bound = 1.0 + 1e-9;
    last.domain_error = std::max(0.0, violation);
    last.domain_tolerance = 1e-9;
    last.passed = violation <= 1e-9;
    last.detail = "band check on [0,1] by even symmetry; inner sign err " + fmt(eps_s);
    if (last.passed) {
      ApproxSpec spec;
      spec.kind = "threshold";
      spec.params = {{"sigma", sigma},
                     {"eta", eta},
                     {"varsigma", varsigma},
                     {"degree", static_cast<double>(p.degree())}};
      spec.poly = std::move(p);
      spec.cert = last;
      return spec;
    }
  }
  throw std::runtime_error("threshold polynomial failed to certify: worst band violation = " +
                           fmt(last.domain_error));
}

ApproxSpec inverse_poly(double kappa, double err, long b_override, double normalization) {
  if (!(kappa > 1.0)) throw std::invalid_argument("kappa must exceed 1");
  if (!(err > 0.0 && err <= 0.5)) throw std::invalid_argument("err must be in (0, 1/2]");
  if (!(normalization > 0.0) || !std::isfinite(normalization))
    throw std::invalid_argument("normalization must be positive");

  const long b = b_override > 0
                     ? b_override
                     : static_cast<long>(std::ceil(kappa * kappa * std::log(kappa / err)));
  const long J = static_cast<long>(
      std::ceil(std::sqrt(static_cast<double>(b) * std::log(4.0 * static_cast<double>(b) / err))));

  // tail[j] = sum_{i=j+1}^{b} C(2b, b+i) / 4^b, accumulated from the top in
  // the log domain so the binomials never overflow.
  const double log4b = 2.0 * static_cast<double>(b) * std::log(2.0);
  const long jmax = std::min(J, b - 1);
  std::vector<double> tail(static_cast<size_t>(jmax) + 1, 0.0);
  {
    double running = 0.0, comp = 0.0;
    for (long i = b; i >= 1; --i) {
      const double lp = std::lgamma(2.0 * b + 1.0) - std::lgamma(b + i + 1.0) -
                        std::lgamma(b - i + 1.0) - log4b;
      const double term = std::exp(lp) - comp;
      const double next = running + term;
      comp = (next - running) - term;
      running = next;
      if (i - 1 <= jmax) tail[i - 1] = running;  // = sum over i' >= i = (i-1)+1
    }
  }

  std::vector<double> coeffs(static_cast<size_t>(2 * J + 2), 0.0);
  for (long j = 0; j <= jmax; ++j)
    coeffs[2 * j + 1] = normalization * 4.0 * (j % 2 ? -1.0 : 1.0) * tail[j];
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  ChebPoly g{std::move(coeffs), Parity::odd};

  auto closed_form = [b, normalization](double x) {
    const double one_minus = (x * x >= 1.0) ? 0.0 : std::exp(b * std::log1p(-x * x));
    return normalization * (1.0 - one_minus) / x;
  };

  const int G = cert_grid_points(g.degree());
  double sup = 0.0, dom = 0.0;
  for (int i = 0; i <= G; ++i) {
    const double x = static_cast<double>(i) / G;
    const double gx = cheb_eval_direct(g, x);
    sup = std::max(sup, std::abs(gx));
    if (x >= 1.0 / kappa) dom = std::max(dom, std::abs(gx - closed_form(x)));
  }

  ApproxSpec spec;
  spec.kind = "inverse";
  spec.params = {{"kappa", kappa},
                 {"err", err},
                 {"b", static_cast<double>(b)},
                 {"J", static_cast<double>(J)},
                 {"normalization", normalization}};
  spec.poly = std::move(g);
  spec.cert.grid_points = G + 1;
  spec.cert.sup_norm = sup;
  spec.cert.sup_bound = normalization * 4.0 * static_cast<double>(J);
  spec.cert.domain_error = dom;
  spec.cert.domain_tolerance = normalization * err;
  spec.cert.passed = sup <= spec.cert.sup_bound * (1.0 + 1e-12) && dom <= spec.cert.domain_tolerance;
  spec.cert.detail = "closed-form target (1-(1-x^2)^b)/x on [1/kappa, 1]";
  if (!spec.cert.passed)
    throw std::runtime_error("inverse polynomial failed to certify: domain error = " + fmt(dom) +
                             ", sup = " + fmt(sup));
  return spec;
}

double bessel_j(int order, double x) {
  if (order < 0) throw std::invalid_argument("order must be nonnegative");
  double sign = 1.0;
  if (x < 0.0) {
    x = -x;
    if (order % 2) sign = -1.0;
  }
  if (x < 1e-290) return order == 0 ? 1.0 : 0.0;

  // Miller's downward recurrence J_{m-1} = (2m/x) J_m - J_{m+1}, normalized by
  // J_0 + 2 sum_k J_{2k} = 1.  Unlike the power series it has no cancellation,
  // so it stays accurate at large |x| where the series digits collapse.
  //
  // Seed high enough that the true J_start is below ~1e-26; the asymptotic
  // magnitude for m > x is (2 pi m)^{-1/2} (e x / 2m)^m.
  int start = std::max(order + 10, static_cast<int>(std::ceil(1.5 * x)) + 2);
  while (start * std::log(2.0 * start / (2.718281828459045 * x)) -
             0.5 * std::log(2.0 * 3.141592653589793 * start) <
         60.0)
    ++start;

  double jp = 0.0;      // J_{m+1}, up to a common scale
  double jc = 1e-30;    // J_m at m = start
  double norm = (start % 2 == 0) ? 2.0 * jc : 0.0;
  double target = (order == start) ? jc : 0.0;
  for (int m = start; m >= 1; --m) {
    const double jm = (2.0 * m / x) * jc - jp;  // J_{m-1}
    jp = jc;
    jc = jm;
    const int idx = m - 1;
    if (idx == order) target = jc;
    if (idx == 0)
      norm += jc;
    else if (idx % 2 == 0)
      norm += 2.0 * jc;
    if (std::abs(jc) > 1e250) {
      jc *= 1e-250;
      jp *= 1e-250;
      norm *= 1e-250;
      target *= 1e-250;
    }
  }
  return sign * target / norm;
}

std::pair<ApproxSpec, ApproxSpec> trig_polys(double t, double err) {
  if (!(err > 0.0 && err < 1.0 / 2.718281828459045))
    throw std::invalid_argument("err must be in (0, 1/e)");
  if (!(std::abs(t) <= 50.0)) throw std::invalid_argument("time parameter out of supported range");

  const double L = std::log(1.0 / err);
  const long r = static_cast<long>(std::ceil(std::abs(t) + 2.0 * L / std::max(1.0, std::log(L))));
  long R = (r + 1) / 2;
  const long R_cap = 10 * std::max(r, 4L) + 100;

  for (;;) {
    std::vector<double> ac(static_cast<size_t>(2 * R) + 1, 0.0);
    ac[0] = bessel_j(0, t);
    for (long i = 1; i <= R; ++i) ac[2 * i] = 2.0 * (i % 2 ? -1.0 : 1.0) * bessel_j(2 * i, t);
    std::vector<double> as(static_cast<size_t>(2 * R) + 2, 0.0);
    for (long i = 0; i <= R; ++i) as[2 * i + 1] = 2.0 * (i % 2 ? -1.0 : 1.0) * bessel_j(2 * i + 1, t);
    while (ac.size() > 1 && ac.back() == 0.0) ac.pop_back();
    while (as.size() > 1 && as.back() == 0.0) as.pop_back();
    ChebPoly pc{ac, Parity::even};
    ChebPoly ps{as, Parity::odd};

    const int G = cert_grid_points(static_cast<int>(2 * R + 1));
    double dc = 0.0, ds = 0.0, supc = 0.0, sups = 0.0;
    for (int i = 0; i <= G; ++i) {
      const double x = static_cast<double>(i) / G;  // parity covers [-1,0]
      const double vc = cheb_eval_direct(pc, x);
      const double vs = cheb_eval_direct(ps, x);
      dc = std::max(dc, std::abs(vc - std::cos(t * x)));
      ds = std::max(ds, std::abs(vs - std::sin(t * x)));
      supc = std::max(supc, std::abs(vc));
      sups = std::max(sups, std::abs(vs));
    }
    if ((dc <= err && ds <= err) || R >= R_cap) {
      if (dc > err || ds > err)
        throw std::runtime_error("trigonometric polynomials failed to certify: cos error = " +
                                 fmt(dc) + ", sin error = " + fmt(ds));
      ApproxSpec cs, sn;
      cs.kind = "cos";
      sn.kind = "sin";
      cs.params = sn.params = {{"t", t},
                               {"err", err},
                               {"r", static_cast<double>(r)},
                               {"R", static_cast<double>(R)}};
      cs.poly = std::move(pc);
      sn.poly = std::move(ps);
      cs.cert.grid_points = sn.cert.grid_points = G + 1;
      cs.cert.sup_norm = supc;
      sn.cert.sup_norm = sups;
      cs.cert.sup_bound = sn.cert.sup_bound = 1.0 + err;
      cs.cert.domain_error = dc;
      sn.cert.domain_error = ds;
      cs.cert.domain_tolerance = sn.cert.domain_tolerance = err;
      cs.cert.passed = sn.cert.passed = true;
      cs.cert.detail = sn.cert.detail = "grid vs library cos/sin on [0,1] by parity";
      return {std::move(cs), std::move(sn)};
    }
    R += std::max(2L, R / 4);
  }
}

}  // namespace qisvt
