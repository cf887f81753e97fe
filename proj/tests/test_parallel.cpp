#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mtm/greens.hpp"
#include "mtm/heatkernel.hpp"
#include "mtm/parallel.hpp"
#include "mtm/sharpness.hpp"

using namespace mtm;

TEST_CASE("map evaluates every index and matches the serial path bitwise") {
  const auto fn = [](std::size_t i) {
    return std::sin(static_cast<double>(i)) * std::sqrt(static_cast<double>(i) + 1.0);
  };
  const std::vector<double> serial = par::map<double>(10000, fn, Exec::serial);
  const std::vector<double> parallel = par::map<double>(10000, fn, Exec::parallel);
  REQUIRE(serial.size() == 10000);
  REQUIRE(parallel.size() == 10000);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    REQUIRE(serial[i] == parallel[i]);  // bitwise, not approximate
  }
  CHECK(par::map<int>(0, [](std::size_t) { return 1; }).empty());
}

TEST_CASE("thread introspection is consistent") {
  CHECK(par::max_threads() >= 1);
  if (!par::compiled_with_openmp()) CHECK(par::max_threads() == 1);
}

TEST_CASE("fitted heat-kernel comparison is execution-policy invariant") {
  heat::TaParams p;
  p.a = 0.25;
  p.eps = 0.5;
  const heat::FittedComparison s = heat::fit_ta_comparison(p, Exec::serial);
  const heat::FittedComparison q = heat::fit_ta_comparison(p, Exec::parallel);
  CHECK(s.constant == q.constant);
  CHECK(s.train_max_ratio == q.train_max_ratio);
  CHECK(s.heldout_max_ratio == q.heldout_max_ratio);
  CHECK(s.n_train == q.n_train);
  CHECK(s.n_heldout == q.n_heldout);
}

TEST_CASE("bound certification is execution-policy invariant") {
  greens::CertifyParams sp;
  sp.exec = Exec::serial;
  greens::CertifyParams pp;
  pp.exec = Exec::parallel;
  const greens::BoundCertificate cs =
      greens::certify_bounds(greens::KernelId::PHI1, greens::Regime::near, sp);
  const greens::BoundCertificate cp =
      greens::certify_bounds(greens::KernelId::PHI1, greens::Regime::near, pp);
  CHECK(cs.fitted_constant == cp.fitted_constant);
  CHECK(cs.sample_report.max_ratio == cp.sample_report.max_ratio);
  CHECK(cs.sample_report.grid_hash == cp.sample_report.grid_hash);
}

TEST_CASE("mode-domination scan is execution-policy invariant") {
  sharp::AdmissibleShift shift;
  CHECK(sharp::mode_domination(shift, Exec::serial) ==
        sharp::mode_domination(shift, Exec::parallel));
}
