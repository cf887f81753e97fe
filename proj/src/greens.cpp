#include "mtm/greens.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "mtm/quadrature.hpp"
#include "mtm/specfun.hpp"

namespace mtm::greens {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kInv2Pi = 1.0 / kTwoPi;
// Exponents past this leave terms below 1e-19 of the leading one.
constexpr double kLogTailCut = 45.0;

void require_lambda(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("green kernel: lambda <= 0");
}

void require_radii(double w, double wp) {
  if (!(w > 0.0 && wp > 0.0))
    throw std::invalid_argument("green kernel: w, w' must be > 0");
}

// Geometric knot chain lo, r*lo, ... clamped to hi (both endpoints included).
std::vector<double> knot_chain(double lo, double hi, double ratio) {
  std::vector<double> k{lo};
  while (k.back() < hi) k.push_back(std::min(hi, k.back() * ratio));
  return k;
}

// The radial Gaussian e^{-dw^2/4t} kills the integrand below t ~ (dw/25)^2,
// so the Laplace quadrature can start there instead of the global floor.
double laplace_s_floor(double dw, double global_floor) {
  return std::min(0.1, std::max(global_floor, std::abs(dw) / 25.0));
}

}  // namespace

const char* kernel_name(KernelId id) {
  switch (id) {
    case KernelId::PHI1: return "phi1";
    case KernelId::PHI2: return "phi2";
    case KernelId::PHI4: return "phi4";
    case KernelId::PHI5: return "phi5";
  }
  return "unknown";
}

void Displacement::validate() const {
  if (dw == 0.0 && dtheta == 0.0)
    throw std::invalid_argument("Displacement: kernels are evaluated off-diagonal");
  if (!(std::abs(dtheta) <= kPi + 1e-12))
    throw std::invalid_argument("Displacement: dtheta outside [-pi, pi]");
}

double Displacement::rho() const { return std::hypot(dw, dtheta); }

double phi1(const Displacement& d, double lambda) {
  d.validate();
  require_lambda(lambda);
  const double sl = std::sqrt(lambda);
  auto image = [&](int n) {
    const double rho_n = std::hypot(d.dw, d.dtheta - kTwoPi * n);
    return std::exp(-sl * rho_n) / rho_n;
  };
  double acc = image(0);
  for (int n = 1;; ++n) {
    acc += image(n) + image(-n);
    if (n >= 2 && sl * (kTwoPi * n - kPi) > kLogTailCut) break;
  }
  return acc * kInv2Pi;
}

namespace {

// (1/sqrt(pi)) int_0^inf t^{-1/2} e^{-lambda t} radial(t) angular(t) dt with
// t = s^2 on (0, 1] and a doubling direct rule on [1, T].
template <class Radial, class Angular>
double laplace_half_power(double lambda, double s_floor, const Radial& radial,
                          const Angular& angular) {
  const double near_part =
      2.0 * quad::gauss_on_knots(
                [&](double s) {
                  const double t = s * s;
                  return std::exp(-lambda * t) * radial(t) * angular(t);
                },
                knot_chain(s_floor, 1.0, 3.0), 4);
  const double t_max = std::max(2.0, (std::log(1e14) + 5.0) / lambda);
  const double far_part = quad::gauss_on_knots(
      [&](double t) {
        return std::exp(-lambda * t) * radial(t) * angular(t) / std::sqrt(t);
      },
      knot_chain(1.0, t_max, 2.0), 4);
  return (near_part + far_part) / std::sqrt(kPi);
}

}  // namespace

double phi2(const Displacement& d, double lambda, const heat::TaParams& p) {
  d.validate();
  require_lambda(lambda);
  p.validate();
  return laplace_half_power(
      lambda, laplace_s_floor(d.dw, 1e-4),
      [&](double t) { return heat::heat_line(t, d.dw); },
      [&](double t) { return heat::heat_ta(t, d.dtheta, p); });
}

double phi5(double w, double wp, double dtheta, double lambda,
            const heat::TaParams& p) {
  require_radii(w, wp);
  require_lambda(lambda);
  p.validate();
  Displacement d;
  d.dw = w - wp;
  d.dtheta = dtheta;
  d.validate();
  return laplace_half_power(
      lambda, laplace_s_floor(d.dw, 1e-3),
      [&](double t) { return heat::heat_halfline_hardy(t, w, wp); },
      [&](double t) { return heat::heat_ta(t, dtheta, p); });
}

namespace {

// Angular knots graded toward the v = 0 peak of width rho/sqrt(w w').
std::vector<double> graded_angle_knots(double rho, double wwp) {
  const double h = std::min(0.5 * kPi, rho / std::sqrt(wwp));
  std::vector<double> k{0.0, h};
  while (k.back() < kPi) k.push_back(std::min(kPi, 2.0 * k.back()));
  return k;
}

}  // namespace

double phi4(double w, double wp, double dtheta, double lambda) {
  require_radii(w, wp);
  require_lambda(lambda);
  Displacement d;
  d.dw = w - wp;
  d.dtheta = dtheta;
  d.validate();
  const double sl = std::sqrt(lambda);
  const double wwp = w * wp;
  const double dw2 = d.dw * d.dw;
  auto image_integral = [&](int n) {
    const double dth = dtheta - kTwoPi * n;
    const double base = dw2 + dth * dth;
    return quad::gauss_on_knots(
        [&](double v) {
          const double s = std::sin(0.5 * v);
          const double q = std::sqrt(base + 4.0 * wwp * s * s);
          return specfun::besselK({1.0, sl * q}) / q;
        },
        graded_angle_knots(std::sqrt(base), wwp), 2);
  };
  double acc = image_integral(0);
  for (int n = 1;; ++n) {
    const double reach = kTwoPi * n - kPi;  // minimal |dtheta - 2 pi n|
    if (sl * std::sqrt(dw2 + reach * reach) > kLogTailCut) break;
    acc += image_integral(n) + image_integral(-n);
  }
  return sl / (kPi * kPi) * std::sqrt(wwp) * acc;
}

double phi4_weight_integral_closed(double w, double wp, double dtheta) {
  require_radii(w, wp);
  Displacement d;
  d.dw = w - wp;
  d.dtheta = dtheta;
  d.validate();
  const double sum2 = (w + wp) * (w + wp) + dtheta * dtheta;
  const double diff2 = d.dw * d.dw + dtheta * dtheta;
  return kPi * std::sqrt(w * wp) / (std::sqrt(sum2) * std::sqrt(diff2));
}

double phi4_weight_integral_quad(double w, double wp, double dtheta) {
  require_radii(w, wp);
  Displacement d;
  d.dw = w - wp;
  d.dtheta = dtheta;
  d.validate();
  const double wwp = w * wp;
  const double base = d.dw * d.dw + dtheta * dtheta;
  return quad::gauss_on_knots(
      [&](double v) {
        const double s = std::sin(0.5 * v);
        return std::sqrt(wwp) / (base + 4.0 * wwp * s * s);
      },
      graded_angle_knots(std::sqrt(base), wwp), 4);
}

namespace {

struct SamplePoint {
  double dw = 0.0;
  double dtheta = 0.0;
  double wp = 0.0;  // anchor radius; meaningful for PHI4/PHI5 only
};

bool uses_anchor(KernelId k) {
  return k == KernelId::PHI4 || k == KernelId::PHI5;
}

std::vector<double> geometric(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

std::vector<double> midpoints(const std::vector<double>& g, bool geometric_mean) {
  std::vector<double> m;
  for (size_t i = 0; i + 1 < g.size(); ++i)
    m.push_back(geometric_mean ? std::sqrt(g[i] * g[i + 1])
                               : 0.5 * (g[i] + g[i + 1]));
  return m;
}

// Training grids are fixed; the held-out grid interleaves their midpoints and
// is jittered by the seed, staying strictly inside the training hull.
std::vector<SamplePoint> build_samples(KernelId kernel, Regime regime,
                                       bool heldout, unsigned seed) {
  std::vector<double> dws, dthetas, anchors;
  if (regime == Regime::near) {
    dws = geometric(0.02, 1.0, 8);
    dthetas = {0.0, 0.3, 0.9, 1.8, 2.7};
  } else {
    for (int i = 0; i < 9; ++i) dws.push_back(1.0 + 0.5 * i);
    dthetas = {0.0, 1.5, 3.0};
  }
  anchors = uses_anchor(kernel) ? std::vector<double>{0.7, 1.5, 3.0}
                                : std::vector<double>{0.0};
  if (heldout) {
    std::mt19937 gen(seed * 2654435761u + 16u * static_cast<unsigned>(kernel) +
                     static_cast<unsigned>(regime));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto jitter_geom = [&](std::vector<double> v) {
      for (double& x : v) x *= std::exp(0.08 * u(gen));
      return v;
    };
    auto jitter_lin = [&](std::vector<double> v, double amp) {
      for (double& x : v) x += amp * u(gen);
      return v;
    };
    dws = regime == Regime::near ? jitter_geom(midpoints(dws, true))
                                 : jitter_lin(midpoints(dws, false), 0.1);
    dthetas = jitter_lin(midpoints(dthetas, false), 0.05);
    if (uses_anchor(kernel)) anchors = jitter_geom(midpoints(anchors, true));
  }
  std::vector<SamplePoint> pts;
  for (double wp : anchors)
    for (double dw : dws)
      for (double dth : dthetas) pts.push_back({dw, dth, wp});
  return pts;
}

double eval_kernel(KernelId kernel, const SamplePoint& pt,
                   const CertifyParams& params) {
  Displacement d;
  d.dw = pt.dw;
  d.dtheta = pt.dtheta;
  switch (kernel) {
    case KernelId::PHI1: return phi1(d, params.lambda);
    case KernelId::PHI2: return phi2(d, params.lambda, params.ta);
    case KernelId::PHI4:
      return phi4(pt.wp + pt.dw, pt.wp, pt.dtheta, params.lambda);
    case KernelId::PHI5:
      return phi5(pt.wp + pt.dw, pt.wp, pt.dtheta, params.lambda, params.ta);
  }
  throw std::invalid_argument("eval_kernel: unknown kernel");
}

double correction_exponent_for(KernelId k) {
  return (k == KernelId::PHI2 || k == KernelId::PHI5) ? 0.25 : 0.0;
}

double decay_rate_for(KernelId k, double lambda) {
  const double sl = std::sqrt(lambda);
  return k == KernelId::PHI4 ? 0.5 * sl : sl;
}

// Smallest constant that makes the regime's bound hold at this sample.
double bound_ratio(const BoundCertificate& shape, const SamplePoint& pt,
                   double value) {
  if (shape.regime == Regime::near) {
    const double rho = std::hypot(pt.dw, pt.dtheta);
    const double excess = value - shape.leading_coeff / rho;
    if (excess <= 0.0) return 0.0;
    return excess * std::pow(std::abs(pt.dw), shape.correction_exponent);
  }
  return value * std::exp(shape.decay_rate * std::abs(pt.dw));
}

std::string hash_samples(const std::vector<SamplePoint>& pts) {
  std::vector<double> flat;
  flat.reserve(pts.size() * 3);
  for (const SamplePoint& p : pts) {
    flat.push_back(p.dw);
    flat.push_back(p.dtheta);
    flat.push_back(p.wp);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a_hash(flat.data(), flat.size())));
  return buf;
}

double max_bound_ratio(const BoundCertificate& shape,
                       const std::vector<SamplePoint>& pts,
                       const CertifyParams& params) {
  const std::vector<double> ratios = par::map<double>(
      pts.size(),
      [&](size_t i) {
        return bound_ratio(shape, pts[i], eval_kernel(shape.kernel, pts[i], params));
      },
      params.exec);
  return *std::max_element(ratios.begin(), ratios.end());
}

}  // namespace

BoundCertificate certify_bounds(KernelId kernel, Regime regime,
                                const CertifyParams& params) {
  require_lambda(params.lambda);
  params.ta.validate();
  BoundCertificate cert;
  cert.kernel = kernel;
  cert.regime = regime;
  cert.leading_coeff = regime == Regime::near ? kInv2Pi : 0.0;
  cert.correction_exponent =
      regime == Regime::near ? correction_exponent_for(kernel) : 0.0;
  cert.decay_rate = decay_rate_for(kernel, params.lambda);
  const std::vector<SamplePoint> pts =
      build_samples(kernel, regime, /*heldout=*/false, params.seed);
  cert.sample_report.max_ratio = max_bound_ratio(cert, pts, params);
  cert.sample_report.n_samples = static_cast<int>(pts.size());
  cert.sample_report.grid_hash = hash_samples(pts);
  cert.fitted_constant = 1.25 * cert.sample_report.max_ratio;
  return cert;
}

HeldoutReport check_certificate(const BoundCertificate& cert,
                                const CertifyParams& params) {
  require_lambda(params.lambda);
  params.ta.validate();
  const std::vector<SamplePoint> pts =
      build_samples(cert.kernel, cert.regime, /*heldout=*/true, params.seed);
  HeldoutReport report;
  report.max_ratio = max_bound_ratio(cert, pts, params);
  report.n_samples = static_cast<int>(pts.size());
  report.ok = report.max_ratio <= cert.fitted_constant;
  return report;
}

CertificateSet certify_all(KernelId kernel, const CertifyParams& params) {
  CertificateSet set;
  set.near = certify_bounds(kernel, Regime::near, params);
  set.far = certify_bounds(kernel, Regime::far, params);
  return set;
}

double rearrangement_upper(KernelId kernel, double t, const CertificateSet& certs) {
  if (!(t > 0.0)) throw std::invalid_argument("rearrangement_upper: t <= 0");
  if (certs.near.kernel != kernel || certs.far.kernel != kernel)
    throw std::invalid_argument("rearrangement_upper: certificates are for another kernel");
  if (t > 1.0) {
    const double rate = certs.far.decay_rate / (4.0 * kPi);
    return certs.far.fitted_constant * std::exp(-rate * (t - 4.0 * kPi));
  }
  const double tail = kInv2Pi + certs.far.fitted_constant;
  const double d = certs.near.correction_exponent;
  if (d == 0.0)
    return 1.0 / std::sqrt(4.0 * kPi * t) + certs.near.fitted_constant + tail;
  return 1.0 / std::sqrt(kPi * t) +
         certs.near.fitted_constant * std::pow(4.0 * kPi, d) / (1.0 - d) *
             std::pow(t, -d) +
         tail;
}

DominationFit fit_phi2_domination(double lambda, const heat::TaParams& p,
                                  Exec exec) {
  require_lambda(lambda);
  p.validate();
  const double sl = std::sqrt(lambda);
  auto ratio = [&](double dw, double dth) {
    Displacement d;
    d.dw = dw;
    d.dtheta = dth;
    const double excess = phi2(d, lambda, p) - phi1(d, lambda);
    if (excess <= 0.0) return 0.0;
    return excess / specfun::besselK({0.0, 2.0 * sl * dw});
  };
  auto max_over = [&](const std::vector<double>& dws,
                      const std::vector<double>& dths) {
    const std::vector<double> r = par::map<double>(
        dws.size() * dths.size(),
        [&](size_t k) {
          return ratio(dws[k / dths.size()], dths[k % dths.size()]);
        },
        exec);
    return *std::max_element(r.begin(), r.end());
  };
  const std::vector<double> dw_train = geometric(0.1, 4.0, 16);
  const std::vector<double> dth_train = {0.0, 1.0, 2.0, 3.0};
  DominationFit fit;
  fit.train_max_ratio = max_over(dw_train, dth_train);
  fit.constant = 1.25 * fit.train_max_ratio;
  fit.heldout_max_ratio =
      max_over(midpoints(dw_train, true), midpoints(dth_train, false));
  fit.ok = fit.heldout_max_ratio <= fit.constant;
  return fit;
}

namespace {

nlohmann::ordered_json certificate_json(const BoundCertificate& cert) {
  nlohmann::ordered_json j;
  j["kernel"] = kernel_name(cert.kernel);
  j["regime"] = cert.regime == Regime::near ? "near" : "far";
  j["leading_coeff"] = cert.leading_coeff;
  j["correction_exponent"] = cert.correction_exponent;
  j["decay_rate"] = cert.decay_rate;
  j["fitted_constant"] = cert.fitted_constant;
  j["sample_report"] = {{"max_ratio", cert.sample_report.max_ratio},
                        {"n_samples", cert.sample_report.n_samples},
                        {"grid_hash", cert.sample_report.grid_hash}};
  return j;
}

}  // namespace

std::string certificate_to_json(const BoundCertificate& cert) {
  return certificate_json(cert).dump(2);
}

std::string certificates_to_json(const std::vector<BoundCertificate>& certs,
                                 unsigned seed) {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["certificates"] = nlohmann::ordered_json::array();
  for (const BoundCertificate& c : certs) j["certificates"].push_back(certificate_json(c));
  return j.dump(2);
}

uint64_t fnv1a_hash(const double* data, size_t count) {
  uint64_t h = 14695981039346656037ull;
  for (size_t i = 0; i < count; ++i) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &data[i], sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
  }
  return h;
}

}  // namespace mtm::greens
