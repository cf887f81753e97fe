// Benchmarks the OpenMP-parallel kernels against the serial reference path.
// Every benchmark first asserts that the two paths produce identical results
// (the parallelization only distributes independent evaluations), then reports
// wall times. `--quick` shrinks the workloads for use as a smoke test.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "mtm/greens.hpp"
#include "mtm/heatkernel.hpp"
#include "mtm/parallel.hpp"
#include "mtm/sharpness.hpp"

using namespace mtm;

namespace {

int g_mismatches = 0;

template <class F>
double run_ms(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   t0)
      .count();
}

void report(const char* name, bool equal, double serial_ms, double parallel_ms) {
  if (!equal) ++g_mismatches;
  std::printf("%-24s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              equal ? "results identical" : "RESULTS DIFFER");
}

void bench_fit_ta(bool /*quick*/) {
  heat::TaParams p;
  p.a = 0.25;
  p.eps = 0.5;
  heat::FittedComparison s, q;
  const double ms_s = run_ms([&] { s = heat::fit_ta_comparison(p, Exec::serial); });
  const double ms_p = run_ms([&] { q = heat::fit_ta_comparison(p, Exec::parallel); });
  const bool equal = s.constant == q.constant &&
                     s.train_max_ratio == q.train_max_ratio &&
                     s.heldout_max_ratio == q.heldout_max_ratio;
  report("heat comparison fit", equal, ms_s, ms_p);
}

void bench_phi2_batch(bool quick) {
  heat::TaParams p;
  p.a = 0.25;
  p.eps = 0.5;
  const int n_dw = quick ? 8 : 24;
  std::vector<greens::Displacement> pts;
  for (int i = 0; i < n_dw; ++i) {
    for (double dtheta : {0.0, 1.0, 2.0}) {
      greens::Displacement d;
      d.dw = 0.05 * std::pow(2.0 / 0.05, static_cast<double>(i) / (n_dw - 1));
      d.dtheta = dtheta;
      pts.push_back(d);
    }
  }
  const auto eval = [&](std::size_t i) { return greens::phi2(pts[i], 1.0, p); };
  std::vector<double> vs, vp;
  const double ms_s =
      run_ms([&] { vs = par::map<double>(pts.size(), eval, Exec::serial); });
  const double ms_p =
      run_ms([&] { vp = par::map<double>(pts.size(), eval, Exec::parallel); });
  report("phi2 batch", vs == vp, ms_s, ms_p);
}

void bench_mode_domination(bool /*quick*/) {
  sharp::AdmissibleShift shift;
  double s = 0.0, q = 0.0;
  const double ms_s = run_ms([&] { s = sharp::mode_domination(shift, Exec::serial); });
  const double ms_p =
      run_ms([&] { q = sharp::mode_domination(shift, Exec::parallel); });
  report("mode domination scan", s == q, ms_s, ms_p);
}

void bench_certify_phi4(bool quick) {
  if (quick) return;
  greens::CertifyParams sp;
  sp.exec = Exec::serial;
  greens::CertifyParams pp;
  pp.exec = Exec::parallel;
  greens::BoundCertificate cs, cp;
  const double ms_s = run_ms([&] {
    cs = greens::certify_bounds(greens::KernelId::PHI4, greens::Regime::near, sp);
  });
  const double ms_p = run_ms([&] {
    cp = greens::certify_bounds(greens::KernelId::PHI4, greens::Regime::near, pp);
  });
  const bool equal = cs.fitted_constant == cp.fitted_constant &&
                     cs.sample_report.grid_hash == cp.sample_report.grid_hash;
  report("phi4 near-bound fit", equal, ms_s, ms_p);
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;

  std::printf("threads: %d (OpenMP %s)%s\n", par::max_threads(),
              par::compiled_with_openmp() ? "enabled" : "disabled",
              quick ? "   [quick mode]" : "");

  bench_fit_ta(quick);
  bench_phi2_batch(quick);
  bench_mode_domination(quick);
  bench_certify_phi4(quick);

  if (g_mismatches > 0) {
    std::fprintf(stderr, "%d benchmark(s) produced diverging results\n",
                 g_mismatches);
    return 1;
  }
  return 0;
}
