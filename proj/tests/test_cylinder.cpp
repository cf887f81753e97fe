#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>

#include "doctest.h"
#include "mtm/cylinder.hpp"
#include "mtm/errors.hpp"
#include "oracles.hpp"

using namespace mtm;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Smooth random field with compact support well inside the w range: a few
// Gaussians in w times single angular harmonics.  Centers within [-1, 1] and
// widths below 0.55 keep the boundary rows under e^{-50} on every grid used
// here, comfortably inside the vanishing-rows contract.
cyl::SampledField random_field(const cyl::CylinderGrid& grid, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> uc(-1.0, 1.0);
  std::uniform_real_distribution<double> us(0.35, 0.55);
  std::uniform_real_distribution<double> ua(-1.5, 1.5);
  std::uniform_int_distribution<int> um(-3, 3);
  cyl::SampledField f = cyl::make_field(grid);
  for (int bump = 0; bump < 3; ++bump) {
    const double c = uc(gen), s = us(gen), amp = ua(gen);
    const int mode = um(gen);
    for (int i = 0; i < grid.n_w; ++i) {
      const double w = grid.w(i);
      const double radial = amp * std::exp(-(w - c) * (w - c) / (s * s));
      for (int j = 0; j < grid.n_theta; ++j) {
        const double th = grid.theta(j);
        f.at(i, j) += radial * std::complex<double>(std::cos(mode * th),
                                                    std::sin(mode * th));
      }
    }
  }
  return f;
}
}  // namespace

TEST_CASE("grid validation rejects malformed shapes") {
  cyl::CylinderGrid g;
  g.w_min = 0.0;
  g.w_max = 1.0;
  g.n_w = 1;
  g.n_theta = 8;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g.n_w = 10;
  g.n_theta = 7;  // odd
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g.n_theta = 8;
  g.w_max = -1.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g.w_max = 1.0;
  g.half_line = true;
  g.w_min = -0.5;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("quadrature weights sum to the chart area") {
  cyl::CylinderGrid g;
  g.w_min = -2.0;
  g.w_max = 3.0;
  g.n_w = 37;
  g.n_theta = 24;
  cyl::SampledField f = cyl::make_field(g);
  double total = 0.0;
  for (int i = 0; i < g.n_w; ++i)
    for (int j = 0; j < g.n_theta; ++j) total += f.weight(i, j);
  CHECK(total == doctest::Approx((g.w_max - g.w_min) * 2.0 * kPi).epsilon(1e-13));
}

TEST_CASE("reduce_angle maps onto [-pi, pi)") {
  CHECK(cyl::reduce_angle(0.0) == doctest::Approx(0.0));
  CHECK(cyl::reduce_angle(3.0 * kPi + 0.1) == doctest::Approx(-kPi + 0.1));
  CHECK(cyl::reduce_angle(-3.0 * kPi) == doctest::Approx(-kPi));
  CHECK(cyl::reduce_angle(kPi) == doctest::Approx(-kPi));
  CHECK(cyl::reduce_angle(kPi - 1e-6) == doctest::Approx(kPi - 1e-6));
}

TEST_CASE("decompose/reconstruct round-trips and satisfies Parseval") {
  cyl::CylinderGrid g;
  g.w_min = -4.0;
  g.w_max = 4.0;
  g.n_w = 41;
  g.n_theta = 16;
  const cyl::SampledField f = random_field(g, 7);
  const cyl::ModeCoefficients mc = cyl::decompose(f);
  const cyl::SampledField back = cyl::reconstruct(mc);
  double max_err = 0.0;
  for (int i = 0; i < g.n_w; ++i)
    for (int j = 0; j < g.n_theta; ++j)
      max_err = std::max(max_err, std::abs(f.at(i, j) - back.at(i, j)));
  CHECK(max_err <= 1e-12);

  double mode_mass = 0.0;
  for (const auto& [n, profile] : mc.modes) {
    (void)n;
    for (int i = 0; i < g.n_w; ++i)
      mode_mass += g.w_weight(i) * std::norm(profile[i]);
  }
  mode_mass /= 2.0 * kPi;
  CHECK(mode_mass == doctest::Approx(f.mass()).epsilon(1e-13));
}

TEST_CASE("magnetic energy matches the analytic Gaussian values") {
  cyl::CylinderGrid g;
  g.w_min = -7.0;
  g.w_max = 7.0;
  g.n_w = 561;
  g.n_theta = 8;
  cyl::SampledField f = cyl::make_field(g);
  for (int i = 0; i < g.n_w; ++i) {
    const double w = g.w(i);
    for (int j = 0; j < g.n_theta; ++j) f.at(i, j) = std::exp(-w * w);
  }
  cyl::MagneticParams p;
  p.a = 0.25;
  p.lambda = 0.7;
  // For u = e^{-w^2}: int u'^2 dw = int u^2 dw = sqrt(pi/2); the field is
  // angularly constant so only the n = 0 multiplier a^2 + lambda acts.
  const double base = std::sqrt(0.5 * kPi);
  const double want = 2.0 * kPi * (base + (p.a * p.a + p.lambda) * base);
  CHECK(cyl::magnetic_energy(f, p) == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("magnetic energy equals the mode-wise oracle to rounding") {
  cyl::CylinderGrid g;
  g.w_min = -5.0;
  g.w_max = 5.0;
  g.n_w = 161;
  g.n_theta = 16;
  const cyl::SampledField f = random_field(g, 21);
  cyl::MagneticParams p;
  p.a = 0.25;
  p.lambda = 0.9;
  const double got = cyl::magnetic_energy(f, p);
  const double want = oracles::mode_energy(f, p.a, p.lambda);
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("magnetic energy enforces the compact-support contract") {
  cyl::CylinderGrid g;
  g.w_min = -2.0;
  g.w_max = 2.0;
  g.n_w = 21;
  g.n_theta = 8;
  cyl::SampledField f = cyl::make_field(g);
  f.at(0, 3) = 1e-6;  // touches the boundary row
  cyl::MagneticParams p;
  CHECK_THROWS_AS(cyl::magnetic_energy(f, p), mtm::FieldContractError);
}

TEST_CASE("hardy quotient dominates the squared flux") {
  cyl::CylinderGrid g;
  g.w_min = -6.0;
  g.w_max = 6.0;
  g.n_w = 201;
  g.n_theta = 16;
  for (double a : {0.0, 0.1, 0.25, 0.5}) {
    const cyl::SampledField f = random_field(g, 40 + static_cast<unsigned>(a * 100));
    CHECK(cyl::hardy_quotient(f, a) >= a * a - 1e-12);
  }
}

TEST_CASE("tm_functional sums the exponential integrand and flags overflow") {
  cyl::CylinderGrid g;
  g.w_min = 0.0;
  g.w_max = 1.0;
  g.n_w = 3;
  g.n_theta = 2;
  cyl::SampledField f = cyl::make_field(g);
  for (auto& v : f.values) v = 0.5;
  const double beta = 2.0;
  const cyl::TmValue tv = cyl::tm_functional(f, beta);
  CHECK(!tv.overflow);
  CHECK(tv.value ==
        doctest::Approx(2.0 * kPi * 1.0 * std::expm1(beta * 0.25)).epsilon(1e-13));

  f.at(1, 1) = 40.0;  // beta |u|^2 = 3200: exp would overflow
  const cyl::TmValue ov = cyl::tm_functional(f, beta);
  CHECK(ov.overflow);
  CHECK(std::isinf(ov.value));
}

TEST_CASE("ball hardy energy requires a half-line grid and stays nonnegative") {
  cyl::CylinderGrid g;
  g.w_min = 0.0;
  g.w_max = 6.0;
  g.n_w = 301;
  g.n_theta = 8;
  g.half_line = true;
  cyl::SampledField f = cyl::make_field(g);
  for (int i = 0; i < g.n_w; ++i) {
    const double w = g.w(i);
    for (int j = 0; j < g.n_theta; ++j)
      f.at(i, j) = std::exp(-(w - 3.0) * (w - 3.0) * 4.0);
  }
  cyl::MagneticParams p;
  p.a = 0.0;
  p.lambda = 0.0;
  CHECK(cyl::ball_hardy_energy(f, p) >= 0.0);

  cyl::CylinderGrid full = g;
  full.half_line = false;
  cyl::SampledField f2 = f;
  f2.grid = full;
  CHECK_THROWS_AS(cyl::ball_hardy_energy(f2, p), std::invalid_argument);
}

TEST_CASE("save/load round-trips fields exactly") {
  cyl::CylinderGrid g;
  g.w_min = -1.0;
  g.w_max = 2.0;
  g.n_w = 9;
  g.n_theta = 6;
  const cyl::SampledField f = random_field(g, 99);
  const std::string path = "/tmp/mtm_test_field.csv";
  cyl::save_field(f, path);
  const cyl::SampledField back = cyl::load_field(path);
  REQUIRE(back.grid.n_w == g.n_w);
  REQUIRE(back.grid.n_theta == g.n_theta);
  CHECK(back.grid.w_min == g.w_min);
  CHECK(back.grid.w_max == g.w_max);
  for (int i = 0; i < g.n_w; ++i)
    for (int j = 0; j < g.n_theta; ++j) CHECK(back.at(i, j) == f.at(i, j));
  std::remove(path.c_str());
}
