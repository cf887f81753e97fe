#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mtm/heatkernel.hpp"
#include "oracles.hpp"

using namespace mtm;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("TaParams validation and derived quantities") {
  heat::TaParams p;
  p.a = 0.25;
  p.eps = 0.5;
  CHECK_NOTHROW(p.validate());
  CHECK(p.eps1() == doctest::Approx(1.0 - 0.5 / std::sqrt(1.5)).epsilon(1e-15));
  CHECK(p.symbol(0.0) == 0.0);
  // symbol(n) = n^2 (1 - 2a/sqrt(n^2+eps)) stays nonnegative for a <= 1/2.
  for (double n = 0.0; n <= 8.0; n += 0.25) CHECK(p.symbol(n) >= 0.0);
  p.a = 0.6;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.a = 0.25;
  p.eps = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  CHECK(heat::default_eps(0.0, 1.0) == 0.5);
  CHECK(heat::default_eps(0.25, 1.0) == 0.5);
  CHECK(heat::default_eps(0.5, -0.2) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK_THROWS_AS(heat::default_eps(0.5, -0.25), std::invalid_argument);
}

TEST_CASE("the two circle-kernel representations agree to near rounding") {
  for (double t : {0.01, 0.1, 1.0, 10.0}) {
    for (int k = 0; k < 64; ++k) {
      const double dtheta = -kPi + k * (2.0 * kPi / 64);
      const double diff =
          std::abs(heat::heat_s1_spectral(t, dtheta) - heat::heat_s1_poisson(t, dtheta));
      CAPTURE(t);
      CAPTURE(dtheta);
      CHECK(diff <= 1e-12);
    }
  }
}

TEST_CASE("circle kernel integrates to one") {
  const int n = 256;
  for (double t : {0.01, 0.1, 1.0, 5.0}) {
    double total = 0.0;
    for (int j = 0; j < n; ++j)
      total += heat::heat_s1(t, -kPi + j * (2.0 * kPi / n));
    total *= 2.0 * kPi / n;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("perturbed kernel reduces to the circle kernel at zero flux") {
  heat::TaParams p;
  p.a = 0.0;
  p.eps = 0.37;  // symbol is n^2 regardless of eps when a = 0
  for (double t : {0.02, 0.5, 3.0}) {
    for (double dtheta : {0.0, 0.4, -2.2, 3.0}) {
      CHECK(heat::heat_ta(t, dtheta, p) ==
            doctest::Approx(heat::heat_s1(t, dtheta)).epsilon(1e-12));
    }
  }
}

TEST_CASE("perturbed kernel satisfies the semigroup identity") {
  heat::TaParams p;
  p.a = 0.25;
  p.eps = 0.5;
  const int n = 128;  // resolves every mode alive at t = 0.5
  for (double dtheta : {0.0, 0.9, -2.0}) {
    double conv = 0.0;
    for (int j = 0; j < n; ++j) {
      const double phi = -kPi + j * (2.0 * kPi / n);
      conv += heat::heat_ta(0.5, dtheta - phi, p) * heat::heat_ta(0.5, phi, p);
    }
    conv *= 2.0 * kPi / n;
    CHECK(conv == doctest::Approx(heat::heat_ta(1.0, dtheta, p)).epsilon(1e-12));
  }
}

TEST_CASE("Fourier integral bound1 holds and the zero-flux case is Gaussian") {
  heat::TaParams p;
  p.a = 0.25;
  p.eps = 0.5;
  for (double t : {0.01, 0.1, 1.0, 10.0}) {
    for (double theta : {0.0, 0.5, 1.5, 3.0}) {
      const heat::FourierBounds b = heat::ta_fourier_bounds(t, theta, p);
      CHECK(std::abs(b.integral) <= b.bound1 * (1.0 + 1e-12));
    }
  }
  heat::TaParams a0;
  a0.a = 0.0;
  a0.eps = 0.5;
  for (double t : {0.05, 0.4, 2.0}) {
    for (double theta : {0.0, 0.8, 2.5}) {
      const heat::FourierBounds b = heat::ta_fourier_bounds(t, theta, a0);
      const double exact = std::sqrt(kPi / t) * std::exp(-theta * theta / (4.0 * t));
      CHECK(b.integral == doctest::Approx(exact).epsilon(1e-9));
    }
  }
  CHECK(std::isinf(heat::ta_fourier_bounds(1.0, 0.0, p).bound2));
}

TEST_CASE("fitted comparison constants cover their held-out grids") {
  heat::TaParams p;
  p.a = 0.25;
  p.eps = 0.5;
  const heat::FittedComparison fc = heat::fit_ta_comparison(p);
  CHECK(fc.n_train > 0);
  CHECK(fc.n_heldout > 0);
  CHECK(fc.constant == doctest::Approx(1.25 * fc.train_max_ratio));
  CHECK(fc.train_max_ratio > 0.0);
  CHECK(fc.heldout_max_ratio <= fc.constant);

  const heat::FittedComparison fb = heat::fit_fourier_bound2(p);
  CHECK(fb.train_max_ratio > 0.0);
  CHECK(fb.heldout_max_ratio <= fb.constant);
}

TEST_CASE("fitted comparisons are identical under serial and parallel execution") {
  heat::TaParams p;
  p.a = 0.25;
  p.eps = 0.5;
  const heat::FittedComparison s = heat::fit_ta_comparison(p, Exec::serial);
  const heat::FittedComparison q = heat::fit_ta_comparison(p, Exec::parallel);
  CHECK(s.constant == q.constant);
  CHECK(s.train_max_ratio == q.train_max_ratio);
  CHECK(s.heldout_max_ratio == q.heldout_max_ratio);
}

TEST_CASE("half-line Hardy kernel matches the Bessel reduction oracle") {
  struct Pair {
    double w, wp;
  };
  for (double t : {0.01, 0.1, 1.0, 10.0}) {
    for (const Pair& q : {Pair{0.5, 0.7}, Pair{1.0, 1.0}, Pair{2.0, 0.3},
                          Pair{3.0, 3.0}}) {
      const double got = heat::heat_halfline_hardy(t, q.w, q.wp);
      const double want = oracles::halfline_hardy_heat(t, q.w, q.wp);
      CAPTURE(t);
      CAPTURE(q.w);
      CAPTURE(q.wp);
      CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("half-line Hardy kernel is symmetric and Gaussian at short times") {
  CHECK(heat::heat_halfline_hardy(0.3, 1.2, 0.4) ==
        doctest::Approx(heat::heat_halfline_hardy(0.3, 0.4, 1.2)).epsilon(1e-14));
  const double t = 1e-6;
  const double got = heat::heat_halfline_hardy(t, 1.0, 1.2);
  const double line = heat::heat_line(t, 0.2);
  CHECK(got == doctest::Approx(line).epsilon(1e-4));
}

TEST_CASE("domain validation of the kernel evaluators") {
  heat::TaParams p;
  CHECK_THROWS_AS(heat::heat_s1(0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(heat::heat_ta(-1.0, 0.1, p), std::invalid_argument);
  CHECK_THROWS_AS(heat::heat_halfline_hardy(1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(heat::heat_halfline_hardy(1.0, 1.0, -2.0), std::invalid_argument);
}
