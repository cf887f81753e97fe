#include "mtm/cylinder.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mtm/errors.hpp"

namespace mtm::cyl {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kBoundaryTol = 1e-12;

}  // namespace

double reduce_angle(double theta) {
  double r = std::fmod(theta + kPi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r - kPi;
}

void CylinderGrid::validate() const {
  if (!(w_min < w_max)) throw std::invalid_argument("CylinderGrid: w_min >= w_max");
  if (n_w < 2) throw std::invalid_argument("CylinderGrid: n_w < 2");
  if (n_theta < 2 || n_theta % 2 != 0)
    throw std::invalid_argument("CylinderGrid: n_theta must be even and >= 2");
  if (half_line && w_min < 0.0)
    throw std::invalid_argument("CylinderGrid: half-line grid needs w_min >= 0");
}

double CylinderGrid::dtheta() const { return kTwoPi / n_theta; }

double CylinderGrid::theta(int j) const { return -kPi + j * dtheta(); }

double CylinderGrid::w_weight(int i) const {
  const double h = dw();
  return (i == 0 || i == n_w - 1) ? 0.5 * h : h;
}

void SampledField::validate() const {
  grid.validate();
  if (values.size() != static_cast<size_t>(grid.n_w) * grid.n_theta)
    throw std::invalid_argument("SampledField: value array does not match grid");
}

double SampledField::weight(int i, int) const {
  return grid.w_weight(i) * grid.dtheta();
}

double SampledField::mass() const {
  double m = 0.0;
  for (int i = 0; i < grid.n_w; ++i) {
    const double ww = grid.w_weight(i) * grid.dtheta();
    for (int j = 0; j < grid.n_theta; ++j) m += ww * std::norm(at(i, j));
  }
  return m;
}

SampledField make_field(const CylinderGrid& grid) {
  grid.validate();
  SampledField f;
  f.grid = grid;
  f.values.assign(static_cast<size_t>(grid.n_w) * grid.n_theta, cplx(0.0, 0.0));
  return f;
}

ModeCoefficients decompose(const SampledField& field) {
  field.validate();
  const int N = field.grid.n_theta;
  ModeCoefficients mc;
  mc.grid = field.grid;
  for (int n = -N / 2; n < N / 2; ++n) {
    std::vector<cplx> profile(field.grid.n_w);
    for (int i = 0; i < field.grid.n_w; ++i) {
      cplx acc(0.0, 0.0);
      for (int j = 0; j < N; ++j) {
        const double ang = -n * field.grid.theta(j);
        acc += field.at(i, j) * cplx(std::cos(ang), std::sin(ang));
      }
      profile[i] = acc * (kTwoPi / N);
    }
    mc.modes[n] = std::move(profile);
  }
  return mc;
}

SampledField reconstruct(const ModeCoefficients& coeffs) {
  SampledField f = make_field(coeffs.grid);
  for (const auto& [n, profile] : coeffs.modes) {
    for (int i = 0; i < coeffs.grid.n_w; ++i) {
      const cplx un = profile[i] / kTwoPi;
      for (int j = 0; j < coeffs.grid.n_theta; ++j) {
        const double ang = n * coeffs.grid.theta(j);
        f.at(i, j) += un * cplx(std::cos(ang), std::sin(ang));
      }
    }
  }
  return f;
}

void MagneticParams::validate() const {
  if (!(a >= 0.0 && a <= 0.5))
    throw std::invalid_argument("MagneticParams: a outside [0, 1/2]");
  if (!(lambda + a * a > 0.0) && lambda != 0.0)
    throw std::invalid_argument("MagneticParams: lambda <= -a^2");
  if (!(beta > 0.0)) throw std::invalid_argument("MagneticParams: beta <= 0");
}

namespace {

void require_w_support(const SampledField& f, bool near_zero_side) {
  const int n_w = f.grid.n_w;
  const int rows[2] = {near_zero_side ? 0 : n_w - 2, near_zero_side ? 1 : n_w - 1};
  for (int r : rows) {
    for (int j = 0; j < f.grid.n_theta; ++j) {
      if (std::abs(f.at(r, j)) > kBoundaryTol)
        throw FieldContractError(
            "field must vanish (<= 1e-12) on the two rows at each w boundary");
    }
  }
}

// Fourth-order centered first derivative in w with zero extension outside the
// grid (valid because the two boundary rows are required to vanish).
cplx dw4(const SampledField& f, int i, int j) {
  auto v = [&](int k) -> cplx {
    if (k < 0 || k >= f.grid.n_w) return cplx(0.0, 0.0);
    return f.at(k, j);
  };
  return (-v(i + 2) + 8.0 * v(i + 1) - 8.0 * v(i - 1) + v(i - 2)) /
         (12.0 * f.grid.dw());
}

// Radial-derivative energy int |d_w u|^2 dw dtheta by per-column differences.
double radial_energy(const SampledField& f) {
  double acc = 0.0;
  for (int i = 0; i < f.grid.n_w; ++i) {
    const double ww = f.grid.w_weight(i) * f.grid.dtheta();
    for (int j = 0; j < f.grid.n_theta; ++j) acc += ww * std::norm(dw4(f, i, j));
  }
  return acc;
}

// sum_n multiplier(n) * (1/2pi) int |u_n|^2 dw; by discrete Parseval this is
// the physical-space integral of the corresponding angular operator energy.
template <class Mult>
double mode_energy(const SampledField& f, Mult&& multiplier) {
  const ModeCoefficients mc = decompose(f);
  double acc = 0.0;
  for (const auto& [n, profile] : mc.modes) {
    const double m = multiplier(n);
    if (m == 0.0) continue;
    double norm2 = 0.0;
    for (int i = 0; i < f.grid.n_w; ++i)
      norm2 += f.grid.w_weight(i) * std::norm(profile[i]);
    acc += m * norm2 / kTwoPi;
  }
  return acc;
}

}  // namespace

double magnetic_energy(const SampledField& field, const MagneticParams& p) {
  field.validate();
  p.validate();
  require_w_support(field, true);
  require_w_support(field, false);
  const double radial = radial_energy(field);
  const double angular = mode_energy(field, [&](int n) {
    const double na = n - p.a;
    return na * na + p.lambda;
  });
  return radial + angular;
}

double hardy_quotient(const SampledField& field, double a) {
  MagneticParams p;
  p.a = a;
  p.lambda = 0.0;
  const double mass = field.mass();
  if (!(mass > 0.0)) throw std::invalid_argument("hardy_quotient: zero field");
  return magnetic_energy(field, p) / mass;
}

TmValue tm_functional(const SampledField& field, double beta) {
  field.validate();
  if (!(beta > 0.0)) throw std::invalid_argument("tm_functional: beta <= 0");
  TmValue out;
  for (int i = 0; i < field.grid.n_w; ++i) {
    const double ww = field.grid.w_weight(i) * field.grid.dtheta();
    for (int j = 0; j < field.grid.n_theta; ++j) {
      const double e = beta * std::norm(field.at(i, j));
      if (e > 700.0) {  // exp would overflow
        out.overflow = true;
        out.value = std::numeric_limits<double>::infinity();
        return out;
      }
      out.value += ww * std::expm1(e);
    }
  }
  return out;
}

double ball_hardy_energy(const SampledField& field, const MagneticParams& p) {
  field.validate();
  p.validate();
  if (!field.grid.half_line)
    throw std::invalid_argument("ball_hardy_energy: grid must be half-line");
  require_w_support(field, true);
  require_w_support(field, false);
  const double radial = radial_energy(field);
  const double angular = mode_energy(field, [&](int n) {
    const double na = n - p.a;
    return na * na + p.lambda;
  });
  double hardy = 0.0;
  for (int i = 0; i < field.grid.n_w; ++i) {
    const double w = field.grid.w(i);
    const double ww = field.grid.w_weight(i) * field.grid.dtheta();
    for (int j = 0; j < field.grid.n_theta; ++j) {
      const double amp2 = std::norm(field.at(i, j));
      // Nodes with negligible amplitude are excluded so the singular weight
      // is never evaluated where the support contract already forces u = 0.
      if (amp2 <= kBoundaryTol * kBoundaryTol) continue;
      hardy += ww * amp2 / (4.0 * w * w);
    }
  }
  return radial + angular - hardy;
}

void save_field(const SampledField& field, const std::string& path) {
  field.validate();
  nlohmann::ordered_json header;
  header["convention"] = "modes u(w,theta)=(1/2pi) sum u_n e^{i n theta}, v1";
  header["w_min"] = field.grid.w_min;
  header["w_max"] = field.grid.w_max;
  header["n_w"] = field.grid.n_w;
  header["n_theta"] = field.grid.n_theta;
  header["half_line"] = field.grid.half_line;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_field: cannot open " + path);
  out << "# " << header.dump() << "\n";
  out << "i_w,i_theta,re,im\n";
  char buf[80];
  for (int i = 0; i < field.grid.n_w; ++i) {
    for (int j = 0; j < field.grid.n_theta; ++j) {
      const cplx v = field.at(i, j);
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", i, j, v.real(), v.imag());
      out << buf;
    }
  }
}

SampledField load_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_field: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.size() < 3 || line[0] != '#')
    throw std::runtime_error("load_field: missing JSON header line");
  const nlohmann::json header = nlohmann::json::parse(line.substr(1));
  CylinderGrid grid;
  grid.w_min = header.at("w_min").get<double>();
  grid.w_max = header.at("w_max").get<double>();
  grid.n_w = header.at("n_w").get<int>();
  grid.n_theta = header.at("n_theta").get<int>();
  grid.half_line = header.at("half_line").get<bool>();
  SampledField f = make_field(grid);

  if (!std::getline(in, line))  // column header row
    throw std::runtime_error("load_field: missing column header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    int i = 0, j = 0;
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(row >> i >> comma >> j >> comma >> re >> comma >> im))
      throw std::runtime_error("load_field: bad row: " + line);
    if (i < 0 || i >= grid.n_w || j < 0 || j >= grid.n_theta)
      throw std::runtime_error("load_field: index out of range: " + line);
    f.at(i, j) = cplx(re, im);
  }
  return f;
}

}  // namespace mtm::cyl
