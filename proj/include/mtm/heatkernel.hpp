#pragma once

#include "mtm/parallel.hpp"

namespace mtm::heat {

// Parameters of the perturbed angular operator with spectral multiplier
// symbol(n) = n^2 - 2 a n^2 / sqrt(n^2 + eps)  (nonnegative for a <= 1/2).
struct TaParams {
  double a = 0.25;   // flux, in [0, 1/2]
  double eps = 0.5;  // regularization, > 0

  void validate() const;          // throws std::invalid_argument
  double eps1() const;            // 1 - 2a/sqrt(1+eps), the spectral gap rate
  double symbol(double n) const;  // continuous extension of the multiplier
};

// Default regularization used by drivers when only (a, lambda) are given:
// eps = min(0.5, (lambda + a^2) / (2a)) for a > 0, else 0.5.
double default_eps(double a, double lambda);

// Heat kernel on S^1 at angular separation dtheta.
// Spectral sum: (1/2pi) sum_n e^{-n^2 t} e^{i n dtheta} (fast for t >= 1);
// periodic-image sum: (1/sqrt(4 pi t)) sum_n e^{-(dtheta-2 pi n)^2/(4t)}
// (fast for t < 1). Both carry certified tails <= 1e-15.
double heat_s1_spectral(double t, double dtheta);
double heat_s1_poisson(double t, double dtheta);
double heat_s1(double t, double dtheta);  // representation switch at t = 1

// Heat kernel of the perturbed operator, by direct spectral sum at every t
// (the multiplier has no Gaussian image form). Tail cut where
// symbol(n) t >= 40 via the majorant symbol(n) >= n^2 - 2a|n|.
double heat_ta(double t, double dtheta, const TaParams& p);

// Line heat kernel e^{-x^2/4t}/sqrt(4 pi t) (radial factor of product kernels).
double heat_line(double t, double x);

// Oscillatory Fourier integral F(t,theta) = int e^{i theta xi - symbol(xi) t} dxi
// with its two analytic envelopes:
//   bound1 = 2 sqrt(pi) t^{-1/2} e^{a^2 t}          (provable: |F| <= bound1)
//   bound2 = theta^{-2} sqrt(t) (1+t) e^{a^2 t}     (holds up to a fitted factor)
struct FourierBounds {
  double integral = 0.0;
  double bound1 = 0.0;
  double bound2 = 0.0;  // +infinity at theta = 0
};
FourierBounds ta_fourier_bounds(double t, double theta, const TaParams& p);

// Pointwise kernel comparison diff = |heat_ta - heat_s1| against the envelope
// (1+t) e^{-eps1 t}; the proportionality constant is fitted, not proved.
struct Comparison {
  double diff = 0.0;
  double envelope = 0.0;
};
Comparison ta_comparison(double t, double dtheta, const TaParams& p);

// Fit the comparison constant on a deterministic (t, dtheta) training grid:
// constant = 1.25 * max training ratio. verify_max_ratio is the largest
// diff/envelope seen on the interleaved held-out grid (must stay <= constant).
struct FittedComparison {
  double constant = 0.0;
  double train_max_ratio = 0.0;
  double heldout_max_ratio = 0.0;
  int n_train = 0;
  int n_heldout = 0;
};
FittedComparison fit_ta_comparison(const TaParams& p, Exec exec = Exec::parallel);

// Fitted multiple for bound2 of ta_fourier_bounds on a theta != 0 grid.
FittedComparison fit_fourier_bound2(const TaParams& p, Exec exec = Exec::parallel);

// Heat kernel of the half-line operator with inverse-square potential
// (quadratic form |f'|^2 - |f|^2/(4w^2)):
//   (sqrt(w w')/(4 pi t)) int_0^{2pi} e^{-(w^2+w'^2-2 w w' cos v)/(4t)} dv,
// evaluated with the bounded factorization
//   e^{-(w-w')^2/4t} * e^{-(w w'/t) sin^2(v/2)}
// and a peak-width-adapted periodic trapezoid rule.
double heat_halfline_hardy(double t, double w, double wp);

}  // namespace mtm::heat
