#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mtm/errors.hpp"

namespace mtm::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;  // accumulated local error estimates
  std::size_t evals = 0;
  bool converged = true;
};

namespace detail {

template <class F>
void simpson_rec(const F& f, double a, double m, double b, double fa, double fm,
                 double fb, double whole, double tol, int depth, Result& res) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  res.evals += 2;
  const double h6 = (b - a) / 12.0;
  const double left = h6 * (fa + 4.0 * flm + fm);
  const double right = h6 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    res.value += left + right + delta / 15.0;
    res.error += std::abs(delta) / 15.0;
    if (depth <= 0 && std::abs(delta) > 15.0 * tol) res.converged = false;
    return;
  }
  simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1, res);
  simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1, res);
}

}  // namespace detail

//! Adaptive Simpson on [a, b] to absolute tolerance abs_tol.
template <class F>
Result adaptive_simpson(const F& f, double a, double b, double abs_tol,
                        int max_depth = 44) {
  Result res;
  if (a == b) return res;
  if (!(b > a)) throw std::invalid_argument("adaptive_simpson: b < a");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("adaptive_simpson: tol <= 0");
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  res.evals = 3;
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  detail::simpson_rec(f, a, m, b, fa, fm, fb, whole, abs_tol, max_depth, res);
  return res;
}

//! Adaptive Simpson over a list of panel knots (breakpoints of the integrand);
//! the tolerance is split evenly across panels.
template <class F>
Result adaptive_on_panels(const F& f, const std::vector<double>& knots,
                          double abs_tol, int max_depth = 44) {
  if (knots.size() < 2) throw std::invalid_argument("adaptive_on_panels: need >= 2 knots");
  Result total;
  const double per = abs_tol / static_cast<double>(knots.size() - 1);
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    Result r = adaptive_simpson(f, knots[k], knots[k + 1], per, max_depth);
    total.value += r.value;
    total.error += r.error;
    total.evals += r.evals;
    total.converged = total.converged && r.converged;
  }
  return total;
}

//! Gauss-Legendre rule on [-1, 1], nodes computed at first use by Newton
//! iteration on the Legendre recurrence (no hard-coded tables).
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

inline GaussRule make_gauss_rule(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    r.w[n - 1 - i] = r.w[i];
  }
  return r;
}

inline const GaussRule& gauss_rule_16() {
  static const GaussRule r = make_gauss_rule(16);
  return r;
}

//! Composite Gauss-Legendre over uniform panels of [a, b].
template <class F>
double gauss_panels(const F& f, double a, double b, int panels,
                    const GaussRule& rule = gauss_rule_16()) {
  if (panels < 1) throw std::invalid_argument("gauss_panels: panels < 1");
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    const double r2 = 0.5 * h;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * f(c + r2 * rule.x[i]);
    sum += s * r2;
  }
  return sum;
}

//! Composite Gauss-Legendre over explicit knots.
template <class F>
double gauss_on_knots(const F& f, const std::vector<double>& knots, int panels_per,
                      const GaussRule& rule = gauss_rule_16()) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k)
    sum += gauss_panels(f, knots[k], knots[k + 1], panels_per, rule);
  return sum;
}

//! tanh-sinh quadrature on (a, b) for integrands with integrable endpoint
//! singularities. The callback receives (x, x-a, b-x) so it can form distances
//! to the endpoints at full precision.
template <class F2>
Result tanh_sinh(const F2& f, double a, double b, double rel_tol,
                 int max_level = 11) {
  if (!(b > a)) throw std::invalid_argument("tanh_sinh: b <= a");
  const double pi_half = 1.57079632679489661923;
  const double r = 0.5 * (b - a);
  const double u_max = 3.8;  // weights underflow beyond this
  Result res;

  // Abscissa pair at +-u: y = tanh(pi/2 sinh u); the distance of the upper
  // abscissa to b is (b-a)/(1+e^{pi sinh u}), computed without cancellation.
  double h = 1.0;
  auto weight_at = [&](double u, double& x_hi, double& dist_hi, double& w) {
    const double s = std::sinh(u);
    const double es = std::exp(-2.0 * pi_half * s);
    dist_hi = (b - a) * es / (1.0 + es);  // distance of upper abscissa to b
    x_hi = b - dist_hi;
    w = pi_half * std::cosh(u) * 4.0 * es / ((1.0 + es) * (1.0 + es));
  };

  auto term = [&](double u) {
    double x_hi, dist_hi, w;
    weight_at(u, x_hi, dist_hi, w);
    if (w == 0.0 || dist_hi == 0.0) return 0.0;
    const double x_lo = a + dist_hi;
    // f(x, dist_to_a, dist_to_b)
    double v = f(x_hi, x_hi - a, dist_hi);
    if (u > 0.0) v += f(x_lo, dist_hi, b - x_lo);
    return w * v;
  };

  double sum = term(0.0);
  res.evals += 1;
  for (double u = h; u <= u_max; u += h) {
    sum += term(u);
    res.evals += 2;
  }
  double prev = sum * h * r;

  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (double u = h; u <= u_max; u += 2.0 * h) {
      add += term(u);
      res.evals += 2;
    }
    sum += add;
    const double cur = sum * h * r;
    const double change = std::abs(cur - prev);
    prev = cur;
    if (level >= 3 && change <= rel_tol * std::max(std::abs(cur), 1e-300)) {
      res.value = cur;
      res.error = change;
      return res;
    }
  }
  res.value = prev;
  res.error = std::abs(prev) * 1e-8;
  res.converged = false;
  return res;
}

//! Trapezoid rule on a doubly-exponentially decaying integrand over [lo, hi]
//! with fixed spacing; spectrally accurate for analytic integrands.
template <class F>
double trapezoid(const F& f, double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("trapezoid: n < 2");
  const double h = (hi - lo) / (n - 1);
  double sum = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i + 1 < n; ++i) sum += f(lo + i * h);
  return sum * h;
}

}  // namespace mtm::quad
