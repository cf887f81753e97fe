#include "mtm/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtm/greens.hpp"
#include "mtm/heatkernel.hpp"
#include "mtm/sharpness.hpp"

namespace mtm::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;
constexpr double k8PiE = 8.0 * kPi * 2.71828182845904523536;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Returns false (usage failure) when the output path cannot be opened.
bool write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return true;
  }
  std::ofstream f(cfg.out);
  if (!f) {
    std::cerr << "cannot open output path: " << cfg.out << "\n";
    return false;
  }
  f << text;
  return true;
}

heat::TaParams resolve_ta(const RunConfig& cfg) {
  heat::TaParams p;
  p.a = cfg.a;
  p.eps = cfg.eps == 0.0 ? heat::default_eps(cfg.a, cfg.lambda) : cfg.eps;
  p.validate();
  return p;
}

bool non_increasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) return false;
  return true;
}

}  // namespace

int run_heat_check(const RunConfig& cfg) {
  if (cfg.t_list.empty()) {
    std::cerr << "heat-check: --t-list is required\n";
    return kExitUsage;
  }
  if (!(cfg.tol > 0.0)) {
    std::cerr << "heat-check: --tol must be > 0\n";
    return kExitUsage;
  }
  const heat::TaParams p = resolve_ta(cfg);
  constexpr int kAngles = 64;
  double max_diff = 0.0;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::string csv = "t,dtheta,spectral,poisson,diff,ta_diff,envelope\n";
  for (double t : cfg.t_list) {
    if (!(t > 0.0)) {
      std::cerr << "heat-check: times must be > 0\n";
      return kExitUsage;
    }
    for (int k = 0; k < kAngles; ++k) {
      const double dtheta = -kPi + k * (2.0 * kPi / kAngles);
      const double spectral = heat::heat_s1_spectral(t, dtheta);
      const double poisson = heat::heat_s1_poisson(t, dtheta);
      const double diff = std::abs(spectral - poisson);
      const heat::Comparison cmp = heat::ta_comparison(t, dtheta, p);
      max_diff = std::max(max_diff, diff);
      if (cfg.format == Format::csv) {
        csv += num(t) + "," + num(dtheta) + "," + num(spectral) + "," +
               num(poisson) + "," + num(diff) + "," + num(cmp.diff) + "," +
               num(cmp.envelope) + "\n";
      } else {
        rows.push_back({{"t", t},
                        {"dtheta", dtheta},
                        {"spectral", spectral},
                        {"poisson", poisson},
                        {"diff", diff},
                        {"ta_diff", cmp.diff},
                        {"envelope", cmp.envelope}});
      }
    }
  }
  const bool pass = max_diff <= cfg.tol;
  std::string text;
  if (cfg.format == Format::csv) {
    text = csv;
  } else {
    nlohmann::ordered_json j;
    j["rows"] = rows;
    j["max_diff"] = max_diff;
    j["tol"] = cfg.tol;
    j["pass"] = pass;
    text = j.dump(2) + "\n";
  }
  if (!write_output(cfg, text)) return kExitUsage;
  return pass ? kExitOk : kExitContractViolation;
}

int run_sharpness(const RunConfig& cfg) {
  const std::vector<double> deltas =
      cfg.delta_list.empty() ? std::vector<double>{1e-2, 1e-4, 1e-6, 1e-8, 1e-12}
                             : cfg.delta_list;
  const std::vector<double> ps =
      cfg.p_list.empty() ? std::vector<double>{100.0, 1000.0, 10000.0} : cfg.p_list;

  std::vector<double> threshold_gaps, limit_gaps;
  nlohmann::ordered_json jt = nlohmann::ordered_json::array();
  nlohmann::ordered_json jp = nlohmann::ordered_json::array();
  std::string csv = "section,param,value,gap\n";
  for (double d : deltas) {
    const double bound = sharp::sharpness_threshold(d, cfg.lambda, 1.0);
    const double gap = std::abs(bound - kFourPi) / kFourPi;
    threshold_gaps.push_back(gap);
    csv += "threshold," + num(d) + "," + num(bound) + "," + num(gap) + "\n";
    jt.push_back({{"delta", d}, {"bound", bound}, {"gap_4pi", gap}});
  }
  for (double p : ps) {
    const double value = sharp::asymptotic_8pie(p, cfg.lambda, cfg.a);
    const double gap = std::abs(value - k8PiE) / k8PiE;
    limit_gaps.push_back(gap);
    csv += "limit_8pie," + num(p) + "," + num(value) + "," + num(gap) + "\n";
    jp.push_back({{"p", p}, {"value", value}, {"gap_8pie", gap}});
  }
  // Equality check at the fixed reference point inside the closed-form regime.
  sharp::HardySobolevParams hp;
  hp.p = 3.0;
  hp.a = 0.25;
  hp.lambda = 0.4;
  const double closed = sharp::mu_p_closed(hp);
  const double extremal = sharp::extremal_quotient(hp);
  const double mu_rel = std::abs(closed - extremal) / closed;
  csv += "mu_p," + num(hp.p) + "," + num(closed) + "," + num(mu_rel) + "\n";

  const bool pass =
      non_increasing(threshold_gaps) && non_increasing(limit_gaps) && mu_rel <= 1e-5;
  std::string text;
  if (cfg.format == Format::csv) {
    text = csv;
  } else {
    nlohmann::ordered_json j;
    j["threshold"] = jt;
    j["limit_8pie"] = jp;
    j["mu_p"] = {{"p", hp.p},         {"a", hp.a},
                 {"lambda", hp.lambda}, {"closed", closed},
                 {"extremal", extremal}, {"rel_err", mu_rel}};
    j["pass"] = pass;
    text = j.dump(2) + "\n";
  }
  if (!write_output(cfg, text)) return kExitUsage;
  return pass ? kExitOk : kExitContractViolation;
}

int run_certify(const RunConfig& cfg) {
  greens::CertifyParams params;
  params.lambda = cfg.lambda;
  params.ta = resolve_ta(cfg);
  params.seed = cfg.seed;
  const greens::KernelId kernels[] = {greens::KernelId::PHI1,
                                      greens::KernelId::PHI2,
                                      greens::KernelId::PHI4};
  std::vector<greens::BoundCertificate> certs;
  nlohmann::ordered_json held = nlohmann::ordered_json::array();
  std::string csv =
      "kernel,regime,leading_coeff,correction_exponent,decay_rate,"
      "fitted_constant,train_max_ratio,n_train,grid_hash,heldout_max_ratio,"
      "n_heldout,heldout_ok\n";
  bool all_ok = true;
  for (greens::KernelId k : kernels) {
    const greens::CertificateSet set = greens::certify_all(k, params);
    for (const greens::BoundCertificate& cert : {set.near, set.far}) {
      const greens::HeldoutReport report = greens::check_certificate(cert, params);
      all_ok = all_ok && report.ok;
      certs.push_back(cert);
      const char* regime = cert.regime == greens::Regime::near ? "near" : "far";
      csv += std::string(greens::kernel_name(k)) + "," + regime + "," +
             num(cert.leading_coeff) + "," + num(cert.correction_exponent) + "," +
             num(cert.decay_rate) + "," + num(cert.fitted_constant) + "," +
             num(cert.sample_report.max_ratio) + "," +
             std::to_string(cert.sample_report.n_samples) + "," +
             cert.sample_report.grid_hash + "," + num(report.max_ratio) + "," +
             std::to_string(report.n_samples) + "," + (report.ok ? "1" : "0") +
             "\n";
      held.push_back({{"kernel", greens::kernel_name(k)},
                      {"regime", regime},
                      {"max_ratio", report.max_ratio},
                      {"n_samples", report.n_samples},
                      {"ok", report.ok}});
    }
  }
  std::string text;
  if (cfg.format == Format::csv) {
    text = csv;
  } else {
    nlohmann::ordered_json j =
        nlohmann::ordered_json::parse(greens::certificates_to_json(certs, cfg.seed));
    j["lambda"] = cfg.lambda;
    j["heldout"] = held;
    j["pass"] = all_ok;
    text = j.dump(2) + "\n";
  }
  if (!write_output(cfg, text)) return kExitUsage;
  return all_ok ? kExitOk : kExitContractViolation;
}

int run(const RunConfig& cfg) {
  try {
    if (cfg.command == "heat-check") return run_heat_check(cfg);
    if (cfg.command == "sharpness") return run_sharpness(cfg);
    if (cfg.command == "certify") return run_certify(cfg);
    std::cerr << "unknown command: " << cfg.command << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "evaluation failed: " << e.what() << "\n";
    return kExitContractViolation;
  }
}

}  // namespace mtm::cli
