#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace mtm::cyl {

using cplx = std::complex<double>;

// Point on the cylinder in (w, theta) coordinates, theta reduced to [-pi, pi).
struct CylinderPoint {
  double w = 0.0;
  double theta = 0.0;
};

double reduce_angle(double theta);  // maps to [-pi, pi)

// Tensor grid: n_w nodes uniformly spaced on [w_min, w_max] (trapezoid
// weights), n_theta nodes uniformly spaced on [-pi, pi) (periodic rule).
struct CylinderGrid {
  double w_min = 0.0;
  double w_max = 1.0;
  int n_w = 2;
  int n_theta = 2;
  bool half_line = false;  // domain (0, inf) x S^1; requires w_min >= 0

  void validate() const;  // throws std::invalid_argument on bad shape
  double dw() const { return (w_max - w_min) / (n_w - 1); }
  double dtheta() const;
  double w(int i) const { return w_min + i * dw(); }
  double theta(int j) const;
  double w_weight(int i) const;  // trapezoid weight in w
};

// Complex field sampled on a grid, with per-node quadrature weights
// (w-trapezoid x uniform theta). Weights sum to (w_max - w_min) * 2*pi.
struct SampledField {
  CylinderGrid grid;
  std::vector<cplx> values;  // row-major: index i_w * n_theta + i_theta

  void validate() const;
  cplx& at(int i, int j) { return values[static_cast<size_t>(i) * grid.n_theta + j]; }
  const cplx& at(int i, int j) const {
    return values[static_cast<size_t>(i) * grid.n_theta + j];
  }
  double weight(int i, int j) const;
  double mass() const;  // integral of |u|^2
};

SampledField make_field(const CylinderGrid& grid);  // zero-initialized

// Angular Fourier data: radial profile u_n(w) per mode n, |n| <= n_theta/2.
// Convention: u(w, theta) = (1/2pi) sum_n u_n(w) e^{i n theta},
//             u_n(w)      = (2pi/N) sum_j u(w, theta_j) e^{-i n theta_j}.
struct ModeCoefficients {
  CylinderGrid grid;
  std::map<int, std::vector<cplx>> modes;  // n -> profile over w nodes
};

ModeCoefficients decompose(const SampledField& field);
SampledField reconstruct(const ModeCoefficients& coeffs);

// Flux/shift parameter pack for the quadratic forms.
struct MagneticParams {
  double a = 0.0;       // flux, in [0, 1/2]
  double lambda = 0.0;  // spectral shift, > -a^2
  double beta = 4.0 * 3.14159265358979323846;  // exponential-integrand exponent

  void validate() const;
};

// Energy form int ( |d_w u|^2 + |(d_theta - i a) u|^2 + lambda |u|^2 ) dw dtheta.
// Radial derivative: fourth-order centered differences with zero extension
// (hence the compact-support precondition: |u| <= 1e-12 on the two rows at
// each w boundary). Angular part and the lambda term are evaluated mode-wise
// (exact Parseval transport of the physical-space sums).
double magnetic_energy(const SampledField& field, const MagneticParams& p);

// magnetic_energy(lambda = 0) / int |u|^2; >= min_n (n-a)^2 up to
// discretization error.
double hardy_quotient(const SampledField& field, double a);

// int ( e^{beta |u|^2} - 1 ); overflow reported, not thrown.
struct TmValue {
  double value = 0.0;
  bool overflow = false;  // value is +infinity because some node overflowed
};
TmValue tm_functional(const SampledField& field, double beta);

// Quadratic form on the half-line cylinder with the Hardy weight subtracted:
// int ( |d_w u|^2 - |u|^2/(4 w^2) + |(d_theta - i a) u|^2 + lambda |u|^2 ).
// Requires grid.half_line and |u| <= 1e-12 on the two rows nearest w = 0 (so
// the singular weight is never sampled where the field lives); nodes under
// that threshold are excluded from the 1/w^2 sum.
double ball_hardy_energy(const SampledField& field, const MagneticParams& p);

// CSV (columns i_w, i_theta, re, im) with a JSON header describing the grid.
void save_field(const SampledField& field, const std::string& path);
SampledField load_field(const std::string& path);

}  // namespace mtm::cyl
