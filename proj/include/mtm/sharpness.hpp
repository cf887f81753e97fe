#pragma once

#include <vector>

#include "mtm/cylinder.hpp"
#include "mtm/parallel.hpp"

namespace mtm::sharp {

// Truncated-logarithm bump on the (w, theta) chart, centered at
// (center_w, 0): value -ln(delta) inside radius delta, -ln(rho) on
// delta <= rho < 1, zero outside the unit chart disc.
struct MoserBump {
  double delta = 0.1;    // in (0, 1)
  double center_w = 0.0;

  void validate() const;
  double value(double w, double theta) const;
};

cyl::SampledField sample_bump(const MoserBump& bump, const cyl::CylinderGrid& grid,
                              double scale = 1.0);

// Closed-form chart energy of the bump:
//   -2 pi ln(delta) + lambda pi (1/2 - delta^2/2 + delta^2 ln(delta)).
double moser_energy_closed(double delta, double lambda);

// Independent polar product-Gauss quadrature of the same energy, with panel
// edges pinned to the profile kinks at rho = delta and rho = 1.
double moser_energy_quadrature(double delta, double lambda);

// The exponent bound ln(cap/(pi delta^2) + 1) * E(delta, lambda) / ln^2(delta),
// evaluated in log-space so delta may underflow (delta ~ 1e-300 is fine).
// Tends to 4 pi as delta -> 0+ with gap ~ (ln pi - ln cap - lambda/2)/(2 ln(1/delta)).
double sharpness_threshold(double delta, double lambda, double cap);

// Exponential functional of the energy-normalized bump, one value per delta,
// evaluated semi-analytically (exact radial reduction, 1-D quadrature).
// Entries overflow to +infinity with the flag set rather than crashing.
std::vector<cyl::TmValue> tm_blowup_scan(double beta, double lambda,
                                         const std::vector<double>& deltas);

// Parameter pack for the weighted Sobolev constant.
struct HardySobolevParams {
  double p = 3.0;       // exponent, > 2
  double a = 0.25;      // flux, in [0, 1/2]
  double lambda = 0.4;  // shift, > -a^2

  void validate() const;
  double kappa() const { return lambda + a * a; }
  double alpha() const;        // (p-2)/2 sqrt(lambda + a^2)
  double lambda_star() const;  // from (lambda* + a^2)(p^2 - 4) = 4(1 - 4 a^2)
  bool in_closed_form_regime() const { return lambda <= lambda_star() + 1e-15; }
};

// Closed form of the sharp constant in the regime lambda <= lambda*:
//   (p/2) (2 pi)^{1-2/p} (lambda+a^2)^{(1/2)(1+2/p)}
//     (2 sqrt(pi) Gamma(q) / ((p-2) Gamma(q+1/2)))^{1-2/p},  q = p/(p-2).
// The (lambda+a^2) exponent is half the commonly transcribed 1+2/p; this is
// the value the optimizer (2 cosh(alpha w))^{-2/(p-2)} actually attains,
// which extremal_quotient verifies independently. Errors outside the regime.
double mu_p_closed(const HardySobolevParams& hp);

// Rayleigh quotient of the radial optimizer u = (2 cosh(alpha w))^{-2/(p-2)}:
//   2 pi int (|u'|^2 + kappa u^2) dw / (2 pi int u^p dw)^{2/p},
// by trapezoid quadrature on |w| <= 50/sqrt(kappa) (spectrally accurate for
// this analytic, exponentially decaying integrand).
double extremal_quotient(const HardySobolevParams& hp);

// (magnetic_energy) / (int |u|^p dw dtheta)^{2/p} for a sampled field.
double hardy_sobolev_quotient(const cyl::SampledField& field,
                              const HardySobolevParams& hp);

// p times the upper-bound ratio from the energy-normalized bump with
// delta = e^{-p/4} (delta enters only through e^{-p/2} terms, so large p
// underflows harmlessly):
//   (16 E / p) pi^{-2/p} e,  E = pi p/2 + kappa pi (1/2 - e^{-p/2}/2 - (p/4) e^{-p/2}).
// Tends to 8 pi e like 1 + (kappa - 2 ln pi)/p: decreasing toward the limit
// when kappa > 2 ln(pi), increasing toward it otherwise.
double asymptotic_8pie(double p, double lambda, double a);

// Admissible spectral shift for the mode-wise domination gap.
struct AdmissibleShift {
  double a = 0.25;
  double lambda = 1.0;
  double eps = 0.5;           // 0 < eps < (lambda + a^2)/a when a > 0
  double lambda_prime = 0.5;  // 0 < lambda' < lambda + a^2 - a eps

  void validate() const;
};

// min over n in Z of g(n) = a^2 + 2a (n^2/sqrt(n^2+eps) - n) + lambda - lambda'.
// Scans |n| <= 1e6 and closes the tail with |n^2/sqrt(n^2+eps) - n| <= eps/(2n).
double mode_domination(const AdmissibleShift& shift, Exec exec = Exec::parallel);

}  // namespace mtm::sharp
