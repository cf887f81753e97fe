#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mtm/greens.hpp"
#include "mtm/rearrange.hpp"
#include "oracles.hpp"

using namespace mtm;

namespace {

constexpr double kPi = 3.14159265358979323846;

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

greens::Displacement disp(double dw, double dtheta) {
  greens::Displacement d;
  d.dw = dw;
  d.dtheta = dtheta;
  return d;
}

// Brute-force Laplace quadrature of phi2/phi5 with the library's own angular
// kernel.  The angular factor is only O(t) small at short times (its symbol
// grows like n^2 - 2a|n|, so the kernel has an algebraic, signed short-time
// tail), so the cutoff must come from the radial Gaussian alone: below
// t = dw^2/200 the radial factor is under e^{-50} while |heat_ta| <= c/sqrt(t),
// making the dropped mass negligible.  The cutoff also caps the spectral term
// count, which would otherwise grow like 1/sqrt(t) along the u-grid.
template <class Radial>
double laplace_oracle(double lambda, double dw, const Radial& radial,
                      double dtheta, const heat::TaParams& p) {
  const double t_floor = dw * dw / 200.0;
  return oracles::laplace_sqrt_kernel(lambda, radial, [&](double t) {
    return t < t_floor ? 0.0 : heat::heat_ta(t, dtheta, p);
  });
}

}  // namespace

TEST_CASE("kernel names and displacement validation") {
  CHECK(std::string(greens::kernel_name(greens::KernelId::PHI1)) == "phi1");
  CHECK(std::string(greens::kernel_name(greens::KernelId::PHI2)) == "phi2");
  CHECK(std::string(greens::kernel_name(greens::KernelId::PHI4)) == "phi4");
  CHECK(std::string(greens::kernel_name(greens::KernelId::PHI5)) == "phi5");

  CHECK_THROWS_AS(disp(0.0, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(disp(0.1, 3.3).validate(), std::invalid_argument);
  CHECK_NOTHROW(disp(0.0, 0.1).validate());
  CHECK(disp(3.0, 4.0).rho() == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("translation-invariant free kernel matches its Laplace definition") {
  for (double lambda : {0.5, 1.0, 2.0}) {
    for (const auto& d : {disp(0.3, 0.0), disp(0.1, 1.0), disp(1.5, -2.0),
                          disp(0.02, 0.3)}) {
      const double got = greens::phi1(d, lambda);
      const double want = oracles::phi1_laplace(d.dw, d.dtheta, lambda);
      CAPTURE(lambda);
      CAPTURE(d.dw);
      CAPTURE(d.dtheta);
      CHECK(rel(got, want) <= 1e-9);
    }
  }
  CHECK_THROWS_AS(greens::phi1(disp(0.5, 0.0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(greens::phi1(disp(0.5, 0.0), -1.0), std::invalid_argument);
}

TEST_CASE("free kernel is even in both displacement components") {
  const double base = greens::phi1(disp(0.4, 1.1), 1.3);
  CHECK(rel(greens::phi1(disp(-0.4, 1.1), 1.3), base) <= 1e-14);
  CHECK(rel(greens::phi1(disp(0.4, -1.1), 1.3), base) <= 1e-14);
  CHECK(rel(greens::phi1(disp(-0.4, -1.1), 1.3), base) <= 1e-14);
}

TEST_CASE("perturbed kernel reduces to the free kernel at zero flux") {
  heat::TaParams p;
  p.a = 0.0;
  p.eps = 0.5;
  for (const auto& d : {disp(0.3, 0.0), disp(0.1, 1.0), disp(1.5, -2.0),
                        disp(0.6, 2.8)}) {
    const double got = greens::phi2(d, 1.0, p);
    const double want = greens::phi1(d, 1.0);
    CAPTURE(d.dw);
    CAPTURE(d.dtheta);
    CHECK(rel(got, want) <= 1e-8);
  }
}

TEST_CASE("perturbed kernel matches brute-force Laplace quadrature") {
  heat::TaParams p;
  p.a = 0.25;
  p.eps = 0.5;
  for (const auto& d : {disp(0.3, 0.0), disp(0.5, 1.2)}) {
    const double want = laplace_oracle(
        1.0, d.dw, [&](double t) { return heat::heat_line(t, d.dw); }, d.dtheta, p);
    const double got = greens::phi2(d, 1.0, p);
    CAPTURE(d.dw);
    CAPTURE(d.dtheta);
    CHECK(rel(got, want) <= 1e-7);
  }
}

TEST_CASE("Hardy-weight kernel matches brute-force Laplace quadrature") {
  struct Case {
    double w, wp, dtheta;
  };
  for (const Case& c : {Case{1.0, 1.5, 0.7}, Case{0.8, 1.2, 0.0},
                        Case{2.0, 2.0, 1.5}, Case{0.5, 0.5, 0.1}}) {
    // s1_heat switches to an image sum at short times, so no cutoff is needed:
    // every factor is cheap and well-behaved on the whole u-grid.
    const double want = oracles::laplace_sqrt_kernel(
        1.0,
        [&](double t) { return oracles::halfline_hardy_heat(t, c.w, c.wp); },
        [&](double t) { return oracles::s1_heat(t, c.dtheta); });
    const double got = greens::phi4(c.w, c.wp, c.dtheta, 1.0);
    CAPTURE(c.w);
    CAPTURE(c.wp);
    CAPTURE(c.dtheta);
    CHECK(rel(got, want) <= 1e-8);
  }
  CHECK(rel(greens::phi4(0.7, 1.9, -0.8, 1.0), greens::phi4(1.9, 0.7, 0.8, 1.0)) <=
        1e-13);
  CHECK_THROWS_AS(greens::phi4(0.0, 1.0, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(greens::phi4(1.0, 1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(greens::phi4(1.0, 1.5, 0.7, -1.0), std::invalid_argument);
}

TEST_CASE("Hardy-weight perturbed kernel agrees with its two neighbours") {
  heat::TaParams p0;
  p0.a = 0.0;
  p0.eps = 0.5;
  struct Case {
    double w, wp, dtheta;
  };
  for (const Case& c :
       {Case{1.0, 1.5, 0.7}, Case{0.8, 1.2, 0.0}, Case{2.0, 2.0, 1.5}}) {
    const double got = greens::phi5(c.w, c.wp, c.dtheta, 1.0, p0);
    const double want = greens::phi4(c.w, c.wp, c.dtheta, 1.0);
    CAPTURE(c.w);
    CAPTURE(c.wp);
    CAPTURE(c.dtheta);
    CHECK(rel(got, want) <= 1e-7);
  }
  heat::TaParams p;
  p.a = 0.25;
  p.eps = 0.5;
  const double dw = 1.0 - 1.5, dtheta = 0.7;
  const double want = laplace_oracle(
      1.0, dw,
      [&](double t) { return oracles::halfline_hardy_heat(t, 1.0, 1.5); }, dtheta,
      p);
  CHECK(rel(greens::phi5(1.0, 1.5, dtheta, 1.0, p), want) <= 1e-7);
}

TEST_CASE("angular weight integral: closed form vs direct quadrature") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> logw(std::log(0.2), std::log(3.0));
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  int done = 0;
  while (done < 50) {
    const double w = std::exp(logw(gen));
    const double wp = std::exp(logw(gen));
    const double dtheta = ang(gen);
    const double rho = std::hypot(w - wp, dtheta);
    if (rho < 1e-3) continue;
    const double closed = greens::phi4_weight_integral_closed(w, wp, dtheta);
    const double quad = greens::phi4_weight_integral_quad(w, wp, dtheta);
    CAPTURE(w);
    CAPTURE(wp);
    CAPTURE(dtheta);
    CHECK(rel(quad, closed) <= 1e-10);
    ++done;
  }
}

TEST_CASE("bound certificates: fit, held-out check, determinism") {
  greens::CertifyParams params;
  params.lambda = 1.0;
  const greens::CertificateSet certs =
      greens::certify_all(greens::KernelId::PHI1, params);

  CHECK(certs.near.regime == greens::Regime::near);
  CHECK(certs.far.regime == greens::Regime::far);
  CHECK(certs.near.leading_coeff == doctest::Approx(1.0 / (2.0 * kPi)));
  CHECK(certs.far.leading_coeff == 0.0);
  CHECK(certs.near.correction_exponent == 0.0);
  CHECK(certs.far.decay_rate == doctest::Approx(1.0));
  CHECK(certs.near.fitted_constant >= 0.0);
  CHECK(certs.far.fitted_constant > 0.0);
  CHECK(certs.near.sample_report.n_samples > 0);
  CHECK(certs.near.sample_report.grid_hash.size() == 16);

  const greens::HeldoutReport near_rep =
      greens::check_certificate(certs.near, params);
  const greens::HeldoutReport far_rep = greens::check_certificate(certs.far, params);
  CHECK(near_rep.ok);
  CHECK(far_rep.ok);
  CHECK(near_rep.n_samples > 0);

  // The training grid is deterministic, so refitting reproduces everything.
  const greens::BoundCertificate again =
      greens::certify_bounds(greens::KernelId::PHI1, greens::Regime::far, params);
  CHECK(again.fitted_constant == certs.far.fitted_constant);
  CHECK(again.sample_report.max_ratio == certs.far.sample_report.max_ratio);
  CHECK(again.sample_report.grid_hash == certs.far.sample_report.grid_hash);

  // A different seed moves the held-out grid but must stay under the constant.
  greens::CertifyParams other = params;
  other.seed = 9;
  CHECK(greens::check_certificate(certs.far, other).ok);
}

TEST_CASE("certificate JSON round-trips through a parser") {
  greens::CertifyParams params;
  const greens::CertificateSet certs =
      greens::certify_all(greens::KernelId::PHI1, params);
  const nlohmann::json one = nlohmann::json::parse(greens::certificate_to_json(certs.near));
  CHECK(one.at("kernel").get<std::string>() == "phi1");
  CHECK(one.at("regime").get<std::string>() == "near");
  CHECK(one.at("sample_report").at("n_samples").get<int>() > 0);

  const nlohmann::json both = nlohmann::json::parse(
      greens::certificates_to_json({certs.near, certs.far}, params.seed));
  CHECK(both.at("seed").get<unsigned>() == params.seed);
  CHECK(both.at("certificates").size() == 2);
}

TEST_CASE("hash separates distinct sample sets") {
  const double a[3] = {1.0, 2.0, 3.0};
  const double b[3] = {1.0, 2.0, 4.0};
  CHECK(greens::fnv1a_hash(a, 3) == greens::fnv1a_hash(a, 3));
  CHECK(greens::fnv1a_hash(a, 3) != greens::fnv1a_hash(b, 3));
}

TEST_CASE("rearrangement envelope dominates the sampled rearrangement") {
  greens::CertifyParams params;
  params.lambda = 1.0;
  const greens::CertificateSet certs =
      greens::certify_all(greens::KernelId::PHI1, params);

  const int n_w = 200, n_t = 100;
  const double dw_cell = 10.0 / n_w, dt_cell = 2.0 * kPi / n_t;
  rearrange::MeasuredSamples samples;
  for (int i = 0; i < n_w; ++i) {
    const double dw = -5.0 + (i + 0.5) * dw_cell;
    for (int j = 0; j < n_t; ++j) {
      const double dtheta = -kPi + (j + 0.5) * dt_cell;
      samples.add(greens::phi1(disp(dw, dtheta), params.lambda), dw_cell * dt_cell);
    }
  }
  const rearrange::DecreasingProfile prof = rearrange::rearrange(samples);
  for (double t : {0.3, 0.5, 1.0, 2.0, 5.0}) {
    const double upper = greens::rearrangement_upper(greens::KernelId::PHI1, t, certs);
    CAPTURE(t);
    CHECK(upper > 0.0);
    CHECK(prof.star(t) <= upper);
  }

  CHECK_THROWS_AS(greens::rearrangement_upper(greens::KernelId::PHI1, 0.0, certs),
                  std::invalid_argument);
  CHECK_THROWS_AS(greens::rearrangement_upper(greens::KernelId::PHI2, 1.0, certs),
                  std::invalid_argument);
}

TEST_CASE("fitted domination of the perturbed kernel by the free one") {
  heat::TaParams p;
  p.a = 0.25;
  p.eps = 0.5;
  const greens::DominationFit fit = greens::fit_phi2_domination(1.0, p);
  CHECK(fit.ok);
  CHECK(fit.constant > 0.0);
  CHECK(fit.heldout_max_ratio <= fit.constant);
}
