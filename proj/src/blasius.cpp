#include "prandtl/blasius.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace prandtl {

namespace {

struct State {
  double f, fp, fpp;
};

State rhs(const State& s) { return {s.fp, s.fpp, -0.5 * s.f * s.fpp}; }

State axpy(const State& a, double c, const State& b) {
  return {a.f + c * b.f, a.fp + c * b.fp, a.fpp + c * b.fpp};
}

State rk4_step(const State& s, double h) {
  const State k1 = rhs(s);
  const State k2 = rhs(axpy(s, 0.5 * h, k1));
  const State k3 = rhs(axpy(s, 0.5 * h, k2));
  const State k4 = rhs(axpy(s, h, k3));
  State out = s;
  out.f += h / 6.0 * (k1.f + 2 * k2.f + 2 * k3.f + k4.f);
  out.fp += h / 6.0 * (k1.fp + 2 * k2.fp + 2 * k3.fp + k4.fp);
  out.fpp += h / 6.0 * (k1.fpp + 2 * k2.fpp + 2 * k3.fpp + k4.fpp);
  return out;
}

// f'(zeta_max) - 1 for shooting parameter s = f''(0); optionally records the
// whole trace.
double integrate(double s, double zeta_max, std::size_t n_steps,
                 BlasiusProfile* record) {
  const double h = zeta_max / static_cast<double>(n_steps);
  State st{0.0, 0.0, s};
  if (record) {
    record->zeta.assign(n_steps + 1, 0.0);
    record->f.assign(n_steps + 1, 0.0);
    record->fp.assign(n_steps + 1, 0.0);
    record->fpp.assign(n_steps + 1, 0.0);
    record->fppp.assign(n_steps + 1, 0.0);
    record->fpp[0] = s;
  }
  for (std::size_t i = 1; i <= n_steps; ++i) {
    st = rk4_step(st, h);
    if (record) {
      record->zeta[i] = h * static_cast<double>(i);
      record->f[i] = st.f;
      record->fp[i] = st.fp;
      record->fpp[i] = st.fpp;
      record->fppp[i] = -0.5 * st.f * st.fpp;
    }
  }
  return st.fp - 1.0;
}

// Bisection on the sub-unity side so that f' <= 1 holds at every node.
double shoot(double zeta_max, double tol, std::size_t n_steps) {
  double lo = 0.2, hi = 0.5;
  double r_lo = integrate(lo, zeta_max, n_steps, nullptr);
  double r_hi = integrate(hi, zeta_max, n_steps, nullptr);
  if (r_lo >= 0.0 || r_hi <= 0.0)
    throw std::runtime_error(
        "solve_blasius: shooting bracket [0.2, 0.5] does not straddle "
        "f'(zeta_max) = 1 (residuals " +
        format_double(r_lo) + ", " + format_double(r_hi) + ")");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double r = integrate(mid, zeta_max, n_steps, nullptr);
    if (r <= 0.0) {
      lo = mid;
      r_lo = r;
    } else {
      hi = mid;
    }
    if (hi - lo < 0.25 * tol && -r_lo <= tol) return lo;
  }
  throw std::runtime_error("solve_blasius: bisection did not converge; last bracket [" +
                           format_double(lo) + ", " + format_double(hi) + "]");
}

}  // namespace

BlasiusProfile solve_blasius(double zeta_max, double tol) {
  if (zeta_max < 8.0)
    throw std::invalid_argument("solve_blasius: zeta_max must be >= 8");
  if (!(tol > 0.0) || tol > 1e-6)
    throw std::invalid_argument("solve_blasius: tol must be in (0, 1e-6]");

  std::size_t n_steps = 1024;
  double b0_prev = shoot(zeta_max, tol, n_steps);
  double delta = 0.0;
  bool converged = false;
  for (int level = 0; level < 12; ++level) {
    n_steps *= 2;
    const double b0 = shoot(zeta_max, tol, n_steps);
    delta = std::abs(b0 - b0_prev);
    b0_prev = b0;
    if (delta <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw std::runtime_error(
        "solve_blasius: step halving did not stabilize b0 to tol (last delta " +
        format_double(delta) + ")");

  BlasiusProfile p;
  p.zeta_max = zeta_max;
  p.tol = tol;
  p.b0 = b0_prev;
  p.b0_halving_delta = delta;
  p.step = zeta_max / static_cast<double>(n_steps);
  integrate(p.b0, zeta_max, n_steps, &p);
  p.beta_bar = zeta_max - p.f.back();
  p.interp_f = MonotoneCubic(p.zeta, p.f);
  p.interp_fp = MonotoneCubic(p.zeta, p.fp);
  p.interp_fpp = MonotoneCubic(p.zeta, p.fpp);
  fit_tail_constants(p);
  return p;
}

namespace {

// Below this the table cells sit inside the degenerate corner where the
// shape-preserving interpolant loses relative accuracy; the Taylor form is
// exact through the zeta^7 term there (the odd low-order derivatives all
// vanish at the origin and f5(0) = -b0^2/2).
constexpr double kOriginSwitch = 0.25;

BlasiusValues origin_taylor(double b0, double z) {
  const double z2 = z * z, z3 = z2 * z;
  const double f = 0.5 * b0 * z2 - b0 * b0 * z2 * z3 / 240.0;
  const double fp = b0 * z - b0 * b0 * z * z3 / 48.0;
  const double fpp = b0 - b0 * b0 * z3 / 12.0;
  return {f, fp, fpp, -0.5 * f * fpp};
}

}  // namespace

BlasiusValues eval_blasius(const BlasiusProfile& p, double zeta) {
  if (zeta < 0.0) throw std::invalid_argument("eval_blasius: zeta < 0");
  if (zeta > p.zeta_max) return {zeta - p.beta_bar, 1.0, 0.0, 0.0};
  if (zeta <= kOriginSwitch) return origin_taylor(p.b0, zeta);
  const double f = p.interp_f(zeta);
  const double fp = p.interp_fp(zeta);
  const double fpp = p.interp_fpp(zeta);
  return {f, fp, fpp, -0.5 * f * fpp};
}

double invert_f(const BlasiusProfile& p, double h) {
  if (h < 0.0) throw std::invalid_argument("invert_f: h < 0");
  if (h == 0.0) return 0.0;
  if (h >= p.f.back()) return h + p.beta_bar;

  if (h <= origin_taylor(p.b0, kOriginSwitch).f) {
    double z = std::sqrt(2.0 * h / p.b0);
    for (int it = 0; it < 8; ++it) {
      const BlasiusValues v = origin_taylor(p.b0, z);
      const double r = v.f - h;
      if (std::abs(r) <= 1e-16 * std::max(1.0, h)) break;
      z -= r / v.fp;
    }
    return z;
  }

  auto it = std::upper_bound(p.f.begin(), p.f.end(), h);
  std::size_t j = static_cast<std::size_t>(it - p.f.begin());
  double lo = p.zeta[j - 1], hi = p.zeta[j];
  double z = lo + (hi - lo) * (h - p.f[j - 1]) / (p.f[j] - p.f[j - 1]);
  for (int it2 = 0; it2 < 100; ++it2) {
    const double r = p.interp_f(z) - h;
    if (std::abs(r) <= 1e-13 * std::max(1.0, h)) return z;
    if (r > 0.0)
      hi = z;
    else
      lo = z;
    const double d = p.interp_f.derivative(z);
    double zn = z - r / d;
    if (!(zn > lo) || !(zn < hi)) zn = 0.5 * (lo + hi);
    z = zn;
  }
  return z;
}

OriginDerivatives check_origin_derivatives(const BlasiusProfile& p) {
  const double h = p.zeta[1] - p.zeta[0];
  OriginDerivatives d;
  d.f3 = (p.fpp[1] - p.fpp[0]) / h;
  d.f4 = (2.0 * p.fpp[0] - 5.0 * p.fpp[1] + 4.0 * p.fpp[2] - p.fpp[3]) / (h * h);
  d.f5 = -0.5 * p.b0 * p.b0;
  return d;
}

TailConstants fit_tail_constants(BlasiusProfile& p) {
  if (p.zeta_max < 8.0)
    throw std::invalid_argument("fit_tail_constants: zeta_max < 8");
  double hi = p.zeta_max;
  std::vector<double> z2, z1, ones, logf;
  for (int attempt = 0; attempt < 8; ++attempt) {
    z2.clear();
    z1.clear();
    ones.clear();
    logf.clear();
    for (std::size_t i = 0; i < p.zeta.size(); ++i) {
      if (p.zeta[i] < 4.0 || p.zeta[i] > hi) continue;
      if (p.fpp[i] < 1e-300) continue;
      z2.push_back(-p.zeta[i] * p.zeta[i]);
      z1.push_back(-p.zeta[i]);
      ones.push_back(1.0);
      logf.push_back(std::log(p.fpp[i]));
    }
    if (z2.size() >= 10) break;
    hi *= 0.9;
  }
  if (z2.size() < 10)
    throw std::runtime_error("fit_tail_constants: fewer than 10 usable points");
  const LinearFit fit = least_squares({z2, z1, ones}, logf);
  p.c1_fit = fit.coeff[0];
  p.c2_fit = fit.coeff[1];
  p.tail_fit_rms = fit.rms;
  return {p.c1_fit, p.c2_fit, fit.rms};
}

double ode_residual_integral_route(const BlasiusProfile& p) {
  // Cumulative integral of f on the uniform table, then compare
  // f'' against b0 * exp(-I/2) node by node.
  const double h = p.step;
  std::vector<double> integral(p.zeta.size(), 0.0);
  // Fourth-order cumulative rule: trapezoid with third-difference correction.
  for (std::size_t i = 1; i < p.zeta.size(); ++i) {
    double inc = 0.5 * h * (p.f[i - 1] + p.f[i]);
    inc += h * h / 12.0 * (p.fp[i - 1] - p.fp[i]);
    integral[i] = integral[i - 1] + inc;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < p.zeta.size(); ++i) {
    const double model = p.b0 * std::exp(-0.5 * integral[i]);
    worst = std::max(worst, std::abs(p.fpp[i] - model));
  }
  return worst;
}

std::vector<std::string> audit_profile(const BlasiusProfile& p) {
  std::vector<std::string> bad;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) bad.push_back(what);
  };
  check(p.f[0] == 0.0 && p.fp[0] == 0.0, "f(0) = f'(0) = 0");
  bool fp_range = true, fpp_pos = true, fp_monotone = true, fppp_neg = true;
  double residual = 0.0;
  for (std::size_t i = 0; i < p.zeta.size(); ++i) {
    if (p.fp[i] < 0.0 || p.fp[i] > 1.0) fp_range = false;
    if (p.fpp[i] <= 0.0) fpp_pos = false;
    if (i > 0 && p.fp[i] < p.fp[i - 1]) fp_monotone = false;
    if (i > 0 && p.fppp[i] >= 0.0) fppp_neg = false;
    residual = std::max(residual, std::abs(p.fppp[i] + 0.5 * p.f[i] * p.fpp[i]));
  }
  check(fp_range, "f' in [0, 1]");
  check(fpp_pos, "f'' > 0");
  check(fp_monotone, "f' nondecreasing");
  check(fppp_neg, "f''' < 0 for zeta > 0");
  check(std::abs(p.fppp[0]) <= 10.0 * p.tol, "f'''(0) = 0 to tolerance");
  check(std::abs(p.fp.back() - 1.0) <= p.tol, "|f'(zeta_max) - 1| <= tol");
  check(residual <= 10.0 * p.tol, "ODE residual <= 10 tol");
  // Tail consistency: f - (zeta - beta_bar) = int_zeta^inf (1 - f') is
  // nonnegative and nonincreasing past zeta = 5.
  double prev_gap = -1.0;
  bool tail_ok = true;
  for (std::size_t i = 0; i < p.zeta.size(); ++i) {
    if (p.zeta[i] < 5.0) continue;
    const double gap = p.f[i] + p.beta_bar - p.zeta[i];
    if (gap < -1e-12) tail_ok = false;
    if (prev_gap >= 0.0 && gap > prev_gap + 1e-14) tail_ok = false;
    prev_gap = gap;
  }
  check(tail_ok, "f approaches zeta - beta_bar monotonically from above");
  return bad;
}

void write_profile_csv(const BlasiusProfile& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_profile_csv: cannot open " + path);
  out << "zeta,f,fp,fpp,fppp\n";
  for (std::size_t i = 0; i < p.zeta.size(); ++i)
    out << format_double(p.zeta[i]) << ',' << format_double(p.f[i]) << ','
        << format_double(p.fp[i]) << ',' << format_double(p.fpp[i]) << ','
        << format_double(p.fppp[i]) << '\n';
}

void write_profile_json(const BlasiusProfile& p, const std::string& path) {
  nlohmann::ordered_json j;
  j["b0"] = p.b0;
  j["beta_bar"] = p.beta_bar;
  j["c1_fit"] = p.c1_fit;
  j["c2_fit"] = p.c2_fit;
  j["zeta_max"] = p.zeta_max;
  j["tol"] = p.tol;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_profile_json: cannot open " + path);
  out << j.dump(2) << '\n';
}

}  // namespace prandtl
