#pragma once

#include <stdexcept>

namespace mtm::specfun {

//! Budget/accuracy knobs shared by the special-function evaluators.
struct EvalPolicy {
  double rel_tol = 1e-12;
  int max_terms = 200000;
  int quad_points = 4000;

  void validate() const {
    if (!(rel_tol > 0.0) || rel_tol > 1e-2)
      throw std::invalid_argument("EvalPolicy: rel_tol out of range");
    if (max_terms < 16) throw std::invalid_argument("EvalPolicy: max_terms < 16");
    if (quad_points < 16) throw std::invalid_argument("EvalPolicy: quad_points < 16");
  }
};

struct BesselArgs {
  double nu;  // order, >= 0
  double z;   // argument, > 0

  void validate() const {
    if (!(nu >= 0.0)) throw std::domain_error("BesselArgs: nu < 0");
    if (!(z > 0.0)) throw std::domain_error("BesselArgs: z <= 0");
  }
};

struct HypArgs {
  double a, b, c;
  double z;  // real argument in [0, 1)

  void validate() const {
    if (!(z >= 0.0) || !(z < 1.0)) throw std::domain_error("HypArgs: z outside [0,1)");
    if (c <= 0.0 && c == static_cast<double>(static_cast<long long>(c)))
      throw std::domain_error("HypArgs: c is a nonpositive integer");
  }
};

struct ValueWithError {
  double value;
  double error;  // self-reported absolute error estimate
};

//! Gamma function by the Lanczos rational approximation (g = 7, 9 terms);
//! relative error well under 1e-13 on [0.5, 30], reflection for x < 0.5.
double gamma_fn(double x);

//! Modified Bessel function of the second kind K_nu(z), nu >= 0, z > 0.
//! Branches: power series / connection formula for z <= 2, Watson-integral
//! quadrature for 2 < z < 16, asymptotic expansion for z >= 16.
double besselK(const BesselArgs& args, const EvalPolicy& policy = {});

//! besselK with a self-reported error estimate.
ValueWithError besselK_with_error(const BesselArgs& args, const EvalPolicy& policy = {});

//! Small-argument upper bound 2^{nu-1} Gamma(nu) z^{-nu}, valid for all z > 0,
//! nu > 0 (monotonicity of the integral representation).
double besselK_upper_bound(const BesselArgs& args);

//! Gauss hypergeometric 2F1(a, b; c; z) for real z in [0, 1) by the defining
//! series; near z = 1 the evaluation is delegated to the Euler transformation
//! when c - a - b > 0, otherwise a NonConvergenceError is raised.
double hyp2f1(const HypArgs& args, const EvalPolicy& policy = {});

//! Residual |lhs - rhs| of the Euler transformation
//! F(a,b;c;z) = (1-z)^{c-a-b} F(c-a, c-b; c; z), both sides evaluated
//! independently by series.
double check_transformation(const HypArgs& args, const EvalPolicy& policy = {});

}  // namespace mtm::specfun
