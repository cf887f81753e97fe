#pragma once

#include <string>
#include <vector>

namespace mtm::rearrange {

// Weighted sample of |f| over its domain: value v_i carried on measure w_i.
struct MeasuredSamples {
  std::vector<double> values;   // nonnegative
  std::vector<double> weights;  // positive

  void validate() const;  // throws std::invalid_argument
  void add(double value, double weight);
  double total_measure() const;
};

// Exact step-function rearrangement of a weighted sample: f* is the
// right-continuous non-increasing step function equimeasurable with the
// sample, f**(t) = (1/t) int_0^t f* its running average (piecewise exact).
struct DecreasingProfile {
  // After breakpoints_[k] of accumulated measure, the value drops below
  // values_[k]; f* = values_[k] on [breakpoints_[k-1], breakpoints_[k]).
  std::vector<double> breakpoints;
  std::vector<double> values;

  double star(double t) const;         // f*(t); f*(t) = 0 beyond total measure
  double starstar(double t) const;     // f**(t), exact piecewise evaluation
  double integral_to(double t) const;  // int_0^t f* ds, exact
  double total_integral() const;
};

// m(f, s) = measure of { |f| > s } (strict superlevel), non-increasing in s.
double distribution(const MeasuredSamples& samples, double s);

DecreasingProfile rearrange(const MeasuredSamples& samples);

// int_t^inf f*(s) g*(s) ds, exact on the common step refinement.
double tail_product_integral(const DecreasingProfile& f,
                             const DecreasingProfile& g, double t);

// Convolution rearrangement bound: t f**(t) g**(t) + int_t^inf f* g*.
double oneil_bound(const DecreasingProfile& f, const DecreasingProfile& g,
                   double t);

// Residual of the exact average-rearrangement identity
//   t f**(t) = t f*(t) + int_{f*(t)}^inf m(f, s) ds,
// which step profiles satisfy to rounding.
double duhamel_residual(const MeasuredSamples& samples, double t);

// CSV export (t, f_star, f_starstar) at the profile breakpoints.
void save_profile(const DecreasingProfile& profile, const std::string& path);

}  // namespace mtm::rearrange
