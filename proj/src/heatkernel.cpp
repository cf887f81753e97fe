#include "mtm/heatkernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mtm/quadrature.hpp"

namespace mtm::heat {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
// e^{-40} ~ 4e-18: summing past this point only adds rounding noise.
constexpr double kLogTailCut = 40.0;

void require_time(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("heat kernel: t must be > 0");
}

}  // namespace

void TaParams::validate() const {
  if (!(a >= 0.0 && a <= 0.5))
    throw std::invalid_argument("TaParams: a outside [0, 1/2]");
  if (!(eps > 0.0)) throw std::invalid_argument("TaParams: eps <= 0");
}

double TaParams::eps1() const { return 1.0 - 2.0 * a / std::sqrt(1.0 + eps); }

double TaParams::symbol(double n) const {
  return n * n * (1.0 - 2.0 * a / std::sqrt(n * n + eps));
}

double default_eps(double a, double lambda) {
  if (a == 0.0) return 0.5;
  const double e = std::min(0.5, (lambda + a * a) / (2.0 * a));
  if (!(e > 0.0)) throw std::invalid_argument("default_eps: lambda <= -a^2");
  return e;
}

double heat_s1_spectral(double t, double dtheta) {
  require_time(t);
  double acc = 1.0;
  const int n_max = static_cast<int>(std::ceil(std::sqrt(kLogTailCut / t)));
  for (int n = 1; n <= n_max; ++n)
    acc += 2.0 * std::exp(-static_cast<double>(n) * n * t) * std::cos(n * dtheta);
  return acc / kTwoPi;
}

double heat_s1_poisson(double t, double dtheta) {
  require_time(t);
  const double d = std::fmod(dtheta, kTwoPi);  // images restore periodicity
  const int n_max =
      static_cast<int>(std::ceil((std::abs(d) + std::sqrt(4.0 * kLogTailCut * t)) /
                                 kTwoPi)) +
      1;
  double acc = 0.0;
  for (int n = -n_max; n <= n_max; ++n) {
    const double x = d - kTwoPi * n;
    acc += std::exp(-x * x / (4.0 * t));
  }
  return acc / std::sqrt(4.0 * kPi * t);
}

double heat_s1(double t, double dtheta) {
  return t >= 1.0 ? heat_s1_spectral(t, dtheta) : heat_s1_poisson(t, dtheta);
}

double heat_ta(double t, double dtheta, const TaParams& p) {
  require_time(t);
  p.validate();
  // symbol(n) >= n^2 - 2 a n, so terms past this index are below e^{-40}.
  const int n_max = static_cast<int>(
      std::ceil(p.a + std::sqrt(p.a * p.a + kLogTailCut / t)));
  double acc = std::exp(-p.symbol(0.0) * t);  // symbol(0) = 0
  for (int n = 1; n <= n_max; ++n)
    acc += 2.0 * std::exp(-p.symbol(n) * t) * std::cos(n * dtheta);
  return acc / kTwoPi;
}

double heat_line(double t, double x) {
  require_time(t);
  return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * kPi * t);
}

FourierBounds ta_fourier_bounds(double t, double theta, const TaParams& p) {
  require_time(t);
  p.validate();
  FourierBounds out;
  const double xi_max = p.a + std::sqrt(p.a * p.a + kLogTailCut / t);
  // Resolve both the oscillation (period 2pi/|theta|) and the decay profile:
  // a 16-point Gauss panel per ~third of either scale is spectrally accurate.
  const int panels = std::max(
      8, static_cast<int>(std::ceil(xi_max * (std::abs(theta) + 1.0) / 3.0)));
  out.integral =
      2.0 * quad::gauss_panels(
                [&](double xi) {
                  return std::cos(theta * xi) * std::exp(-p.symbol(xi) * t);
                },
                0.0, xi_max, panels);
  const double lift = std::exp(p.a * p.a * t);
  out.bound1 = 2.0 * std::sqrt(kPi / t) * lift;
  out.bound2 = theta == 0.0
                   ? std::numeric_limits<double>::infinity()
                   : std::sqrt(t) * (1.0 + t) * lift / (theta * theta);
  return out;
}

Comparison ta_comparison(double t, double dtheta, const TaParams& p) {
  Comparison c;
  c.diff = std::abs(heat_ta(t, dtheta, p) - heat_s1(t, dtheta));
  c.envelope = (1.0 + t) * std::exp(-p.eps1() * t);
  return c;
}

namespace {

std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

std::vector<double> geometric_midpoints(const std::vector<double>& g) {
  std::vector<double> m;
  m.reserve(g.size() - 1);
  for (size_t i = 0; i + 1 < g.size(); ++i) m.push_back(std::sqrt(g[i] * g[i + 1]));
  return m;
}

double max_ratio_over_grid(const std::vector<double>& ts,
                           const std::vector<double>& xs,
                           const std::function<double(double, double)>& ratio,
                           Exec exec) {
  const size_t n = ts.size() * xs.size();
  const std::vector<double> r = par::map<double>(
      n,
      [&](size_t k) { return ratio(ts[k / xs.size()], xs[k % xs.size()]); },
      exec);
  return *std::max_element(r.begin(), r.end());
}

FittedComparison fit_on_grids(const std::vector<double>& t_train,
                              const std::vector<double>& x_train,
                              const std::vector<double>& t_held,
                              const std::vector<double>& x_held,
                              const std::function<double(double, double)>& ratio,
                              Exec exec) {
  FittedComparison f;
  f.n_train = static_cast<int>(t_train.size() * x_train.size());
  f.n_heldout = static_cast<int>(t_held.size() * x_held.size());
  f.train_max_ratio = max_ratio_over_grid(t_train, x_train, ratio, exec);
  f.constant = 1.25 * f.train_max_ratio;
  f.heldout_max_ratio = max_ratio_over_grid(t_held, x_held, ratio, exec);
  return f;
}

}  // namespace

FittedComparison fit_ta_comparison(const TaParams& p, Exec exec) {
  p.validate();
  const std::vector<double> t_train = geometric_grid(1e-3, 50.0, 36);
  const std::vector<double> t_held = geometric_midpoints(t_train);
  std::vector<double> th_train(24), th_held(24);
  for (int j = 0; j < 24; ++j) {
    th_train[j] = -kPi + j * (kTwoPi / 24);
    th_held[j] = -kPi + (j + 0.5) * (kTwoPi / 24);
  }
  const auto ratio = [&p](double t, double dtheta) {
    const Comparison c = ta_comparison(t, dtheta, p);
    return c.diff / c.envelope;
  };
  return fit_on_grids(t_train, th_train, t_held, th_held, ratio, exec);
}

FittedComparison fit_fourier_bound2(const TaParams& p, Exec exec) {
  p.validate();
  const std::vector<double> t_train = geometric_grid(1e-2, 10.0, 22);
  const std::vector<double> t_held = geometric_midpoints(t_train);
  const std::vector<double> th_train = geometric_grid(0.05, kPi, 18);
  const std::vector<double> th_held = geometric_midpoints(th_train);
  const auto ratio = [&p](double t, double theta) {
    const FourierBounds b = ta_fourier_bounds(t, theta, p);
    return std::abs(b.integral) / b.bound2;  // integral is even in theta
  };
  return fit_on_grids(t_train, th_train, t_held, th_held, ratio, exec);
}

double heat_halfline_hardy(double t, double w, double wp) {
  require_time(t);
  if (!(w > 0.0 && wp > 0.0))
    throw std::invalid_argument("heat_halfline_hardy: w, w' must be > 0");
  const double kappa = w * wp / t;
  // Peak of e^{-kappa sin^2(v/2)} at v = 0 has width ~ 2/sqrt(kappa); the
  // periodic trapezoid rule converges super-algebraically once the spacing
  // resolves it.
  const int n = std::max(
      64, static_cast<int>(std::ceil(8.0 * kPi * std::sqrt(std::min(kappa, 4e9)))));
  const double h = kTwoPi / n;
  double ring = 0.0;
  for (int j = 0; j < n; ++j) {
    const double s = std::sin(0.5 * j * h);
    ring += std::exp(-kappa * s * s);
  }
  ring *= h;
  const double dw = w - wp;
  return std::sqrt(w * wp) / (4.0 * kPi * t) * std::exp(-dw * dw / (4.0 * t)) * ring;
}

}  // namespace mtm::heat
