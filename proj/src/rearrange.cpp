#include "mtm/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace mtm::rearrange {

void MeasuredSamples::validate() const {
  if (values.size() != weights.size())
    throw std::invalid_argument("MeasuredSamples: size mismatch");
  if (values.empty()) throw std::invalid_argument("MeasuredSamples: empty");
  for (double v : values)
    if (!(v >= 0.0)) throw std::invalid_argument("MeasuredSamples: negative value");
  for (double w : weights)
    if (!(w > 0.0)) throw std::invalid_argument("MeasuredSamples: weight <= 0");
}

void MeasuredSamples::add(double value, double weight) {
  values.push_back(value);
  weights.push_back(weight);
}

double MeasuredSamples::total_measure() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

namespace {

void require_time(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("rearrangement: t must be >= 0");
}

// Index of the step active at accumulated measure t, or size() past the end.
size_t step_index(const DecreasingProfile& p, double t) {
  return static_cast<size_t>(
      std::upper_bound(p.breakpoints.begin(), p.breakpoints.end(), t) -
      p.breakpoints.begin());
}

}  // namespace

double DecreasingProfile::star(double t) const {
  require_time(t);
  const size_t k = step_index(*this, t);
  return k < values.size() ? values[k] : 0.0;
}

double DecreasingProfile::integral_to(double t) const {
  require_time(t);
  double acc = 0.0;
  double prev = 0.0;
  for (size_t k = 0; k < breakpoints.size(); ++k) {
    if (t <= breakpoints[k]) return acc + values[k] * (t - prev);
    acc += values[k] * (breakpoints[k] - prev);
    prev = breakpoints[k];
  }
  return acc;  // f* vanishes beyond the total measure
}

double DecreasingProfile::starstar(double t) const {
  require_time(t);
  if (t == 0.0) return values.empty() ? 0.0 : values.front();  // limit value
  return integral_to(t) / t;
}

double DecreasingProfile::total_integral() const {
  double acc = 0.0;
  double prev = 0.0;
  for (size_t k = 0; k < breakpoints.size(); ++k) {
    acc += values[k] * (breakpoints[k] - prev);
    prev = breakpoints[k];
  }
  return acc;
}

double distribution(const MeasuredSamples& samples, double s) {
  samples.validate();
  double m = 0.0;
  for (size_t i = 0; i < samples.values.size(); ++i)
    if (samples.values[i] > s) m += samples.weights[i];
  return m;
}

DecreasingProfile rearrange(const MeasuredSamples& samples) {
  samples.validate();
  std::vector<size_t> order(samples.values.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return samples.values[a] > samples.values[b];
  });
  DecreasingProfile p;
  double cum = 0.0;
  for (size_t i = 0; i < order.size(); ++i) {
    const double v = samples.values[order[i]];
    cum += samples.weights[order[i]];
    if (!p.values.empty() && p.values.back() == v) {
      p.breakpoints.back() = cum;  // merge ties into one step
    } else {
      p.values.push_back(v);
      p.breakpoints.push_back(cum);
    }
  }
  return p;
}

double tail_product_integral(const DecreasingProfile& f,
                             const DecreasingProfile& g, double t) {
  require_time(t);
  const double f_end = f.breakpoints.empty() ? 0.0 : f.breakpoints.back();
  const double g_end = g.breakpoints.empty() ? 0.0 : g.breakpoints.back();
  const double end = std::min(f_end, g_end);  // product vanishes beyond
  double x = t;
  double acc = 0.0;
  size_t kf = step_index(f, x);
  size_t kg = step_index(g, x);
  while (x < end && kf < f.values.size() && kg < g.values.size()) {
    const double next = std::min(f.breakpoints[kf], g.breakpoints[kg]);
    acc += f.values[kf] * g.values[kg] * (next - x);
    x = next;
    if (f.breakpoints[kf] == next) ++kf;
    if (g.breakpoints[kg] == next) ++kg;
  }
  return acc;
}

double oneil_bound(const DecreasingProfile& f, const DecreasingProfile& g,
                   double t) {
  if (!(t > 0.0)) throw std::invalid_argument("oneil_bound: t must be > 0");
  return t * f.starstar(t) * g.starstar(t) + tail_product_integral(f, g, t);
}

double duhamel_residual(const MeasuredSamples& samples, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("duhamel_residual: t must be > 0");
  const DecreasingProfile p = rearrange(samples);
  const double c = p.star(t);
  // int_c^inf m(f, s) ds: on s in [values[k+1], values[k]) the superlevel
  // measure equals breakpoints[k].
  double layers = 0.0;
  for (size_t k = 0; k < p.values.size(); ++k) {
    const double lo = std::max(c, k + 1 < p.values.size() ? p.values[k + 1] : 0.0);
    if (p.values[k] > lo) layers += p.breakpoints[k] * (p.values[k] - lo);
  }
  return t * p.starstar(t) - (t * c + layers);
}

void save_profile(const DecreasingProfile& profile, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_profile: cannot open " + path);
  out << "t,f_star,f_starstar\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", 0.0, profile.star(0.0),
                profile.starstar(0.0));
  out << buf;
  for (double b : profile.breakpoints) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", b, profile.star(b),
                  profile.starstar(b));
    out << buf;
  }
}

}  // namespace mtm::rearrange
