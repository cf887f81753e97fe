#include "mtm/sharpness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mtm/quadrature.hpp"
#include "mtm/specfun.hpp"

namespace mtm::sharp {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kE = 2.71828182845904523536;
constexpr double kExpOverflow = 700.0;  // exp argument ceiling for doubles

}  // namespace

void MoserBump::validate() const {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("MoserBump: delta outside (0, 1)");
}

double MoserBump::value(double w, double theta) const {
  validate();
  const double rho = std::hypot(w - center_w, theta);
  if (rho >= 1.0) return 0.0;
  return -std::log(std::max(rho, delta));
}

cyl::SampledField sample_bump(const MoserBump& bump, const cyl::CylinderGrid& grid,
                              double scale) {
  bump.validate();
  cyl::SampledField f = cyl::make_field(grid);
  for (int i = 0; i < grid.n_w; ++i)
    for (int j = 0; j < grid.n_theta; ++j)
      f.at(i, j) = scale * bump.value(grid.w(i), grid.theta(j));
  return f;
}

double moser_energy_closed(double delta, double lambda) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("moser_energy_closed: delta outside (0, 1)");
  const double d2 = delta * delta;
  return -kTwoPi * std::log(delta) +
         lambda * kPi * (0.5 - 0.5 * d2 + d2 * std::log(delta));
}

double moser_energy_quadrature(double delta, double lambda) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("moser_energy_quadrature: delta outside (0, 1)");
  // The profile is radial, so the angular Gauss factor integrates a constant
  // exactly; only the radial integral needs quadrature. Panel edges sit on
  // the kinks at rho = delta and rho = 1.
  const double radial = quad::gauss_on_knots(
      [&](double rho) {
        const double u = -std::log(std::max(rho, delta));
        const double grad = rho < delta ? 0.0 : 1.0 / rho;
        return rho * (grad * grad + lambda * u * u);
      },
      {0.0, delta, 1.0}, 8);
  return kTwoPi * radial;
}

double sharpness_threshold(double delta, double lambda, double cap) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("sharpness_threshold: delta outside (0, 1)");
  if (!(cap > 0.0)) throw std::invalid_argument("sharpness_threshold: cap <= 0");
  if (!(lambda >= 0.0)) throw std::invalid_argument("sharpness_threshold: lambda < 0");
  const double ld = std::log(delta);
  // ln(cap/(pi delta^2) + 1) without forming delta^{-2}, which overflows for
  // delta below ~1e-154.
  const double pid2_over_cap = kPi * delta * (delta / cap);  // may underflow to 0
  const double log_term =
      std::log(cap) - std::log(kPi) - 2.0 * ld + std::log1p(pid2_over_cap);
  return log_term * moser_energy_closed(delta, lambda) / (ld * ld);
}

std::vector<cyl::TmValue> tm_blowup_scan(double beta, double lambda,
                                         const std::vector<double>& deltas) {
  if (!(beta > 0.0)) throw std::invalid_argument("tm_blowup_scan: beta <= 0");
  if (!(lambda >= 0.0)) throw std::invalid_argument("tm_blowup_scan: lambda < 0");
  std::vector<cyl::TmValue> out;
  out.reserve(deltas.size());
  for (double delta : deltas) {
    if (!(delta > 0.0 && delta < 1.0))
      throw std::invalid_argument("tm_blowup_scan: delta outside (0, 1)");
    const double energy = moser_energy_closed(delta, lambda);
    const double big_l = -std::log(delta);
    const double peak_exp = beta * big_l * big_l / energy;  // exponent at the plateau
    cyl::TmValue v;
    if (peak_exp > kExpOverflow) {
      v.overflow = true;
      v.value = std::numeric_limits<double>::infinity();
      out.push_back(v);
      continue;
    }
    // Plateau rho < delta, where the normalized bump equals big_l/sqrt(E):
    const double disc = kPi * delta * delta * std::expm1(peak_exp);
    // Annulus via s = -ln(rho): 2 pi int_0^L (e^{beta s^2/E} - 1) e^{-2s} ds.
    const int panels = std::max(64, static_cast<int>(std::ceil(8.0 * big_l)));
    const double annulus =
        kTwoPi * quad::gauss_panels(
                     [&](double s) {
                       return std::expm1(beta * s * s / energy) * std::exp(-2.0 * s);
                     },
                     0.0, big_l, panels);
    v.value = disc + annulus;
    out.push_back(v);
  }
  return out;
}

void HardySobolevParams::validate() const {
  if (!(p > 2.0)) throw std::invalid_argument("HardySobolevParams: p <= 2");
  if (!(a >= 0.0 && a <= 0.5))
    throw std::invalid_argument("HardySobolevParams: a outside [0, 1/2]");
  if (!(lambda + a * a > 0.0))
    throw std::invalid_argument("HardySobolevParams: lambda <= -a^2");
}

double HardySobolevParams::alpha() const {
  return 0.5 * (p - 2.0) * std::sqrt(kappa());
}

double HardySobolevParams::lambda_star() const {
  return 4.0 * (1.0 - 4.0 * a * a) / (p * p - 4.0) - a * a;
}

double mu_p_closed(const HardySobolevParams& hp) {
  hp.validate();
  if (!hp.in_closed_form_regime())
    throw std::domain_error("mu_p_closed: lambda above lambda_star");
  const double p = hp.p;
  const double q = p / (p - 2.0);
  const double expo = 1.0 - 2.0 / p;
  const double gamma_factor = 2.0 * std::sqrt(kPi) * specfun::gamma_fn(q) /
                              ((p - 2.0) * specfun::gamma_fn(q + 0.5));
  return 0.5 * p * std::pow(kTwoPi, expo) *
         std::pow(hp.kappa(), 0.5 * (1.0 + 2.0 / p)) *
         std::pow(gamma_factor, expo);
}

double extremal_quotient(const HardySobolevParams& hp) {
  hp.validate();
  const double kappa = hp.kappa();
  const double alpha = hp.alpha();
  const double m = 2.0 / (hp.p - 2.0);
  const double w_max = 50.0 / std::sqrt(kappa);
  const int n = std::max(4001, 2 * static_cast<int>(100.0 * hp.p) + 1);
  auto u = [&](double w) { return std::pow(2.0 * std::cosh(alpha * w), -m); };
  const double num_integral = quad::trapezoid(
      [&](double w) {
        const double uw = u(w);
        const double t = std::tanh(alpha * w);
        return (m * m * alpha * alpha * t * t + kappa) * uw * uw;
      },
      -w_max, w_max, n);
  const double den_integral = quad::trapezoid(
      [&](double w) { return std::pow(u(w), hp.p); }, -w_max, w_max, n);
  return kTwoPi * num_integral / std::pow(kTwoPi * den_integral, 2.0 / hp.p);
}

double hardy_sobolev_quotient(const cyl::SampledField& field,
                              const HardySobolevParams& hp) {
  hp.validate();
  cyl::MagneticParams mp;
  mp.a = hp.a;
  mp.lambda = hp.lambda;
  const double energy = cyl::magnetic_energy(field, mp);
  double lp = 0.0;
  for (int i = 0; i < field.grid.n_w; ++i) {
    const double ww = field.grid.w_weight(i) * field.grid.dtheta();
    for (int j = 0; j < field.grid.n_theta; ++j)
      lp += ww * std::pow(std::abs(field.at(i, j)), hp.p);
  }
  if (!(lp > 0.0)) throw std::invalid_argument("hardy_sobolev_quotient: zero field");
  return energy / std::pow(lp, 2.0 / hp.p);
}

double asymptotic_8pie(double p, double lambda, double a) {
  if (!(p > 2.0)) throw std::invalid_argument("asymptotic_8pie: p <= 2");
  if (!(a >= 0.0 && a <= 0.5))
    throw std::invalid_argument("asymptotic_8pie: a outside [0, 1/2]");
  const double kappa = lambda + a * a;
  if (!(kappa > 0.0)) throw std::invalid_argument("asymptotic_8pie: lambda <= -a^2");
  const double ep = std::exp(-0.5 * p);  // underflows harmlessly for large p
  const double energy = 0.5 * kPi * p + kappa * kPi * (0.5 - 0.5 * ep - 0.25 * p * ep);
  return 16.0 * energy / p * std::pow(kPi, -2.0 / p) * kE;
}

void AdmissibleShift::validate() const {
  if (!(a >= 0.0 && a <= 0.5))
    throw std::invalid_argument("AdmissibleShift: a outside [0, 1/2]");
  if (!(eps > 0.0)) throw std::invalid_argument("AdmissibleShift: eps <= 0");
  if (a > 0.0 && !(eps < (lambda + a * a) / a))
    throw std::invalid_argument("AdmissibleShift: eps >= (lambda + a^2)/a");
  if (!(lambda_prime > 0.0))
    throw std::invalid_argument("AdmissibleShift: lambda' <= 0");
  if (!(lambda_prime < lambda + a * a - a * eps))
    throw std::invalid_argument("AdmissibleShift: lambda' >= lambda + a^2 - a eps");
}

double mode_domination(const AdmissibleShift& shift, Exec exec) {
  shift.validate();
  const double base = shift.a * shift.a + shift.lambda - shift.lambda_prime;
  auto g = [&](double n) {
    return base +
           2.0 * shift.a * (n * n / std::sqrt(n * n + shift.eps) - n);
  };
  constexpr long long kScanLimit = 1000000;
  constexpr long long kBlock = 8192;
  const long long n_values = 2 * kScanLimit + 1;
  const size_t n_blocks = static_cast<size_t>((n_values + kBlock - 1) / kBlock);
  const std::vector<double> block_min = par::map<double>(
      n_blocks,
      [&](size_t b) {
        const long long lo = -kScanLimit + static_cast<long long>(b) * kBlock;
        const long long hi = std::min(lo + kBlock, kScanLimit + 1);
        double mn = std::numeric_limits<double>::infinity();
        for (long long n = lo; n < hi; ++n)
          mn = std::min(mn, g(static_cast<double>(n)));
        return mn;
      },
      exec);
  const double scanned = *std::min_element(block_min.begin(), block_min.end());
  // |n^2/sqrt(n^2+eps) - n| <= eps/(2n) for n >= 1, so beyond the scan the
  // gap is at least base - a eps / kScanLimit (and negative n only add).
  const double tail_bound =
      base - shift.a * shift.eps / static_cast<double>(kScanLimit);
  return std::min(scanned, tail_bound);
}

}  // namespace mtm::sharp
