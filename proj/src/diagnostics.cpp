#include "prandtl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prandtl {

std::string quantity_name(Quantity q) {
  switch (q) {
    case Quantity::Phi: return "phi";
    case Quantity::DxPhi: return "dx_phi";
    case Quantity::DpsiPhi: return "dpsi_phi";
    case Quantity::D2psiPhi: return "d2psi_phi";
    case Quantity::DpsixW: return "dpsix_w";
    case Quantity::D2xW: return "d2x_w";
  }
  return "?";
}

std::vector<double> phi(const WField& w, const BlasiusProfile& p) {
  std::vector<double> out(w.values.size());
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = w.values[j] - wbar(p, w.x, w.grid->nodes[j]).w;
  return out;
}

double damping_A_wall(const WField& w, const BlasiusProfile& p) {
  const double root = std::sqrt(w.x + 1.0);
  const double sigma = std::sqrt(0.5 * w.wall_slope() * root * p.b0);
  return p.b0 / (2.0 * (w.x + 1.0) * (p.b0 + sigma));
}

std::vector<double> damping_A(const WField& w, const BlasiusProfile& p) {
  std::vector<double> out(w.values.size());
  out[0] = damping_A_wall(w, p);
  for (std::size_t j = 1; j < out.size(); ++j) {
    const WbarValues wb = wbar(p, w.x, w.grid->nodes[j]);
    const double sw = std::sqrt(std::max(w.values[j], 0.0));
    const double swb = std::sqrt(wb.w);
    out[j] = -wb.dx / (swb * (swb + sw));
  }
  return out;
}

DampingBounds damping_bounds(const BlasiusProfile& p, double k0, double c_lo,
                             double c_hi) {
  // (x+1) A = f f'' / (f' (f' + sqrt(w/wbar) f')); the bracket bounds the
  // ratio. Near zero the quotient f f''/f'^2 tends to 1/2.
  DampingBounds b;
  b.lambda_k0 = 0.5 / (1.0 + std::sqrt(c_hi));
  b.upper = 0.5 / (1.0 + std::sqrt(c_lo));
  const int n = 2000;
  for (int i = 1; i <= n; ++i) {
    const double zeta = k0 * static_cast<double>(i) / n;
    const BlasiusValues v = eval_blasius(p, zeta);
    const double base = v.f * v.fpp / (v.fp * v.fp);
    b.lambda_k0 = std::min(b.lambda_k0, base / (1.0 + std::sqrt(c_hi)));
    b.upper = std::max(b.upper, base / (1.0 + std::sqrt(c_lo)));
  }
  return b;
}

namespace {

double x_first_difference(double xm, double x0, double xp, double vm, double v0,
                          double vp) {
  const double dm = x0 - xm, dp = xp - x0;
  return (dm * dm * vp - dp * dp * vm + (dp * dp - dm * dm) * v0) /
         (dm * dp * (dm + dp));
}

}  // namespace

DerivativeFields derivative_fields(const Trajectory& t, const BlasiusProfile& p,
                                   std::size_t k) {
  if (k >= t.size()) throw std::invalid_argument("derivative_fields: bad index");
  const WField& w = t.checkpoints[k];
  const PsiGrid& grid = *w.grid;
  const std::size_t n = grid.n();
  const double x = w.x;

  DerivativeFields d;
  d.x = x;
  d.phi.assign(n, 0.0);
  d.dxw_pde.assign(n, 0.0);
  d.dxphi.assign(n, 0.0);
  d.dpsiphi.assign(n, 0.0);
  d.d2psiphi.assign(n, 0.0);
  d.dpsixw.assign(n, 0.0);

  auto pde_route = [&grid](const WField& f) {
    std::vector<double> out(f.values.size(), 0.0);
    for (std::size_t j = 1; j + 1 < out.size(); ++j)
      out[j] = std::sqrt(std::max(f.values[j], 0.0)) *
               second_difference(grid, f.values, j);
    return out;
  };
  d.dxw_pde = pde_route(w);

  const double root = std::sqrt(x + 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    const WbarValues wb = wbar(p, x, grid.nodes[j]);
    d.phi[j] = w.values[j] - wb.w;
    d.dxphi[j] = d.dxw_pde[j] - wb.dx;
    if (j == 0) {
      d.dpsiphi[j] = w.wall_slope() - 2.0 * p.b0 / root;
    } else if (j + 1 < n) {
      d.dpsiphi[j] = first_difference(grid, w.values, j) - wb.dpsi;
      d.d2psiphi[j] =
          second_difference(grid, w.values, j) - wb.dx / std::sqrt(wb.w);
    }
  }
  for (std::size_t j = 1; j + 1 < n; ++j)
    d.dpsixw[j] = first_difference(grid, d.dxw_pde, j);

  if (k > 0 && k + 1 < t.size()) {
    d.has_xdiff = true;
    d.dxw_xdiff.assign(n, 0.0);
    d.d2xw.assign(n, 0.0);
    const WField& wm = t.checkpoints[k - 1];
    const WField& wp = t.checkpoints[k + 1];
    const std::vector<double> gm = pde_route(wm);
    const std::vector<double> gp = pde_route(wp);
    for (std::size_t j = 0; j < n; ++j) {
      d.dxw_xdiff[j] = x_first_difference(wm.x, x, wp.x, wm.values[j],
                                          w.values[j], wp.values[j]);
      d.d2xw[j] =
          x_first_difference(wm.x, x, wp.x, gm[j], d.dxw_pde[j], gp[j]);
    }
    for (std::size_t j = 1; j + 1 < n; ++j)
      d.x_route_mismatch = std::max(
          d.x_route_mismatch, std::abs(d.dxw_xdiff[j] - d.dxw_pde[j]));
  }
  return d;
}

SupSeries quantity_series(const Trajectory& t, const BlasiusProfile& p,
                          Quantity q) {
  SupSeries s;
  const bool needs_xdiff = q == Quantity::D2xW;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k == 0) continue;  // initial datum
    if (needs_xdiff && (k + 1 >= t.size())) continue;
    const DerivativeFields d = derivative_fields(t, p, k);
    const std::vector<double>* v = nullptr;
    switch (q) {
      case Quantity::Phi: v = &d.phi; break;
      case Quantity::DxPhi: v = &d.dxphi; break;
      case Quantity::DpsiPhi: v = &d.dpsiphi; break;
      case Quantity::D2psiPhi: v = &d.d2psiphi; break;
      case Quantity::DpsixW: v = &d.dpsixw; break;
      case Quantity::D2xW: v = &d.d2xw; break;
    }
    double sup = 0.0;
    for (std::size_t j = 1; j + 1 < v->size(); ++j)
      sup = std::max(sup, std::abs((*v)[j]));
    s.x.push_back(d.x);
    s.sup.push_back(sup);
  }
  return s;
}

DecayFit fit_decay(const SupSeries& s, bool with_log, double x_lo, double x_hi) {
  const double lo = std::max(10.0, x_lo);
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < s.x.size(); ++k) {
    if (s.x[k] < lo || s.x[k] > x_hi) continue;
    if (s.sup[k] < 1e-13) break;  // floor contamination: shrink the window
    double y = std::log(s.sup[k]);
    if (with_log) y -= std::log(std::log(s.x[k] + std::exp(1.0)));
    lx.push_back(std::log(s.x[k] + 1.0));
    ly.push_back(y);
  }
  if (lx.size() < 8)
    throw std::runtime_error("fit_decay: fewer than 8 checkpoints in window");
  std::vector<double> ones(lx.size(), 1.0), neg(lx.size());
  for (std::size_t i = 0; i < lx.size(); ++i) neg[i] = -lx[i];
  const LinearFit f = least_squares({ones, neg}, ly);
  DecayFit out;
  out.exponent = f.coeff[1];
  out.amplitude = std::exp(f.coeff[0]);
  out.rms = f.rms;
  out.with_log = with_log;
  out.x_lo = std::exp(lx.front()) - 1.0;
  out.x_hi = std::exp(lx.back()) - 1.0;
  out.points = lx.size();
  return out;
}

DecayFit sup_norm_decay(const Trajectory& t, const BlasiusProfile& p,
                        Quantity q, bool with_log, double x_lo) {
  return fit_decay(quantity_series(t, p, q), with_log, x_lo);
}

TailFit gaussian_tail(const WField& w, std::span<const double> q) {
  if (w.x < 10.0)
    throw std::invalid_argument("gaussian_tail: station must have x >= 10");
  const std::size_t n = q.size();
  double sup = 0.0;
  std::size_t peak = 0;
  for (std::size_t j = 1; j + 1 < n; ++j)
    if (std::abs(q[j]) > sup) {
      sup = std::abs(q[j]);
      peak = j;
    }
  std::vector<double> s, v;
  for (std::size_t j = peak + 1; j + 1 < n; ++j) {
    const double a = std::abs(q[j]);
    if (a > 0.1 * sup) continue;
    if (a < 1e-12) break;
    s.push_back(w.grid->nodes[j] * w.grid->nodes[j] / (w.x + 1.0));
    v.push_back(-std::log(a));
  }
  if (s.size() < 10)
    throw std::runtime_error("gaussian_tail: tail region smaller than 10 nodes");
  const LinearFit f = fit_line(s, v);
  TailFit out;
  out.c = f.coeff[1];
  out.rms = f.rms;
  out.h2_lo = s.front();
  out.h2_hi = s.back();
  out.points = s.size();
  return out;
}

std::vector<ComparisonPoint> comparison_ratio(const Trajectory& t,
                                              const BlasiusProfile& p) {
  std::vector<ComparisonPoint> out;
  for (const WField& w : t.checkpoints) {
    const double root = std::sqrt(w.x + 1.0);
    double lo = w.wall_slope() / (2.0 * p.b0 / root);
    double hi = lo;
    for (std::size_t j = 1; j + 1 < w.grid->n(); ++j) {
      const double r = w.values[j] / wbar(p, w.x, w.grid->nodes[j]).w;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    out.push_back({w.x, lo, hi});
  }
  return out;
}

DpsiComparisonReport dpsi_w_comparison(const Trajectory& t,
                                       const BlasiusProfile& p, double h1) {
  DpsiComparisonReport rep;
  for (const WField& w : t.checkpoints) {
    const double root = std::sqrt(w.x + 1.0);
    double lo = w.wall_slope() / (2.0 * p.b0 / root);
    double hi = lo;
    for (std::size_t j = 1; j + 1 < w.grid->n(); ++j) {
      const double h = w.grid->nodes[j] / root;
      if (h > h1) break;
      const double denom = wbar(p, w.x, w.grid->nodes[j]).dpsi;
      const double r = first_difference(*w.grid, w.values, j) / denom;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    rep.x.push_back(w.x);
    rep.ratio_min.push_back(lo);
    rep.ratio_max.push_back(hi);
  }
  for (std::size_t k = 0; k < rep.x.size(); ++k) {
    bool ok = true;
    for (std::size_t m = k; m < rep.x.size(); ++m)
      if (rep.ratio_min[m] < 0.5 || rep.ratio_max[m] > 1.5) {
        ok = false;
        break;
      }
    if (ok) {
      rep.x1 = rep.x[k];
      break;
    }
  }
  return rep;
}

namespace {

double interp_at(const std::vector<double>& xs, const std::vector<double>& vs,
                 double x) {
  auto it = std::lower_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return vs.front();
  if (it == xs.end()) return vs.back();
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return vs[i - 1] + t * (vs[i] - vs[i - 1]);
}

}  // namespace

EulerField euler_reconstruct(const Trajectory& t, const BlasiusProfile& p,
                             std::size_t k, std::span<const double> y_samples) {
  const WField& w = t.checkpoints.at(k);
  const PsiGrid& grid = *w.grid;
  const std::size_t n = grid.n();
  const double x = w.x;
  const double root = std::sqrt(x + 1.0);

  const DerivativeFields d = derivative_fields(t, p, k);
  const std::vector<double> ys = y_map(grid, w.values);

  std::vector<double> u_node(n), dpsi_node(n), dxpsi2(n, 0.0), dxu_node(n, 0.0),
      dxyu_node(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    u_node[j] = std::sqrt(std::max(w.values[j], 0.0));
  dpsi_node[0] = w.wall_slope();
  for (std::size_t j = 1; j + 1 < n; ++j)
    dpsi_node[j] = first_difference(grid, w.values, j);
  dpsi_node[n - 1] =
      (w.values[n - 1] - w.values[n - 2]) / grid.spacing(n - 2);

  // dx psi2 = (sqrt(w)/2) int_0^psi w^{-3/2} dx w. The integrand behaves
  // like psi^(-1/2) at the wall; each cell is integrated with the local
  // power-law model it follows (the first cell reduces to the closed form
  // for w ~ s psi, dx w ~ q psi).
  std::vector<double> integral(n, 0.0);
  {
    const double psi1 = grid.nodes[1];
    const double w1 = std::max(w.values[1], 1e-300);
    integral[1] = 2.0 * d.dxw_pde[1] * psi1 / std::pow(w1, 1.5);
    for (std::size_t j = 2; j < n; ++j) {
      const double a = grid.nodes[j - 1], b = grid.nodes[j];
      const double gl =
          d.dxw_pde[j - 1] / std::pow(std::max(w.values[j - 1], 1e-300), 1.5);
      const double gr =
          d.dxw_pde[j] / std::pow(std::max(w.values[j], 1e-300), 1.5);
      double inc;
      if (gl * gr > 0.0) {
        const double beta = std::log(gr / gl) / std::log(b / a);
        inc = std::abs(beta + 1.0) < 1e-6 ? 0.5 * (b - a) * (gl + gr)
                                          : (b * gr - a * gl) / (beta + 1.0);
      } else {
        inc = 0.5 * (b - a) * (gl + gr);
      }
      integral[j] = integral[j - 1] + inc;
    }
  }
  for (std::size_t j = 1; j < n; ++j) {
    dxpsi2[j] = 0.5 * u_node[j] * integral[j];
    dxu_node[j] = (d.dxw_pde[j] + dxpsi2[j] * dpsi_node[j]) / (2.0 * u_node[j]);
    const double d2psi_w = d.dxw_pde[j] / std::max(u_node[j], 1e-300);
    dxyu_node[j] = 0.5 * (d.dpsixw[j] + dxpsi2[j] * d2psi_w);
  }
  dxu_node[0] = dxu_node[1];
  dxyu_node[0] = dxyu_node[1];

  EulerField out;
  out.y_covered = ys.back();
  for (double y : y_samples) {
    if (y < 0.0 || y > ys.back())
      throw std::runtime_error("euler_reconstruct: y = " + format_double(y) +
                               " outside covered range [0, " +
                               format_double(ys.back()) + "]");
    const double u = interp_at(ys, u_node, y);
    const BlasiusValues bv = eval_blasius(p, y / root);
    out.y.push_back(y);
    out.u.push_back(u);
    out.du.push_back(u - bv.fp);
    out.dy_du.push_back(0.5 * interp_at(ys, dpsi_node, y) - bv.fpp / root);
    out.d2y_u.push_back(0.5 * interp_at(ys, d.dxw_pde, y));
    out.dx_u.push_back(interp_at(ys, dxu_node, y));
    out.dxy_u.push_back(interp_at(ys, dxyu_node, y));
  }
  return out;
}

EulerField euler_reconstruct(const Trajectory& t, const BlasiusProfile& p,
                             std::size_t k) {
  const WField& w = t.checkpoints.at(k);
  const std::vector<double> ys = y_map(*w.grid, w.values);
  return euler_reconstruct(t, p, k, ys);
}

YEnvelope fit_y_envelope(const WField& w, const BlasiusProfile& p) {
  const PsiGrid& grid = *w.grid;
  std::vector<double> wb(grid.n());
  for (std::size_t j = 0; j < grid.n(); ++j)
    wb[j] = wbar(p, w.x, grid.nodes[j]).w;
  const std::vector<double> y = y_map(grid, w.values);
  const std::vector<double> ybar = y_map(grid, wb);
  const double root = std::sqrt(w.x + 1.0);

  std::vector<double> gap(grid.n()), tail(grid.n());
  for (std::size_t j = 0; j < grid.n(); ++j) {
    gap[j] = std::abs(ybar[j] - y[j]);
    tail[j] = y[j] / root;
  }
  // Smallest d capping the tail growth past y = sqrt(x+1), then the smallest
  // constant; b carries the log share with the same constant as a.
  YEnvelope env;
  std::size_t ref = grid.n() - 1;
  for (std::size_t j = 0; j < grid.n(); ++j)
    if (tail[j] >= 1.0) {
      ref = j;
      break;
    }
  for (std::size_t j = ref; j < grid.n(); ++j) {
    if (tail[j] <= tail[ref] + 0.5) continue;
    env.d = std::max(env.d, (gap[j] - gap[ref]) / (tail[j] - tail[ref]));
  }
  double b_raw = 0.0;
  for (std::size_t j = 0; j < grid.n(); ++j)
    b_raw = std::max(b_raw, gap[j] - env.d * tail[j]);
  env.b = b_raw / (1.0 + std::log(w.x + 1.0));
  env.a = env.b;
  return env;
}

double y_envelope_slack(const WField& w, const BlasiusProfile& p,
                        const YEnvelope& env) {
  const PsiGrid& grid = *w.grid;
  std::vector<double> wb(grid.n());
  for (std::size_t j = 0; j < grid.n(); ++j)
    wb[j] = wbar(p, w.x, grid.nodes[j]).w;
  const std::vector<double> y = y_map(grid, w.values);
  const std::vector<double> ybar = y_map(grid, wb);
  const double root = std::sqrt(w.x + 1.0);
  double slack = -1e300;
  for (std::size_t j = 0; j < grid.n(); ++j) {
    const double bound =
        env.a + env.b * std::log(w.x + 1.0) + env.d * y[j] / root;
    slack = std::max(slack, std::abs(ybar[j] - y[j]) - bound);
  }
  return slack;
}

double pde_residual_sup(const Trajectory& t, const BlasiusProfile& p,
                        std::size_t k) {
  if (k == 0 || k + 1 >= t.size())
    throw std::invalid_argument("pde_residual_sup: interior checkpoint needed");
  const WField& w = t.checkpoints[k];
  const PsiGrid& grid = *w.grid;
  const DerivativeFields d = derivative_fields(t, p, k);
  const std::vector<double> a = damping_A(w, p);
  double sup = 0.0;
  for (std::size_t j = 1; j + 1 < grid.n(); ++j) {
    const WbarValues wb = wbar(p, w.x, grid.nodes[j]);
    const double dxphi_xdiff = d.dxw_xdiff[j] - wb.dx;
    const double d2phi =
        second_difference(grid, w.values, j) - wb.dx / std::sqrt(wb.w);
    const double r = dxphi_xdiff -
                     std::sqrt(std::max(w.values[j], 0.0)) * d2phi +
                     a[j] * d.phi[j];
    sup = std::max(sup, std::abs(r));
  }
  return sup;
}

double pde_residual_scheme_route(const WField& w, const BlasiusProfile& p) {
  if (w.dxw.empty()) return 0.0;
  const PsiGrid& grid = *w.grid;
  const std::vector<double> a = damping_A(w, p);
  double sup = 0.0;
  for (std::size_t j = 1; j + 1 < grid.n(); ++j) {
    const WbarValues wb = wbar(p, w.x, grid.nodes[j]);
    const double phi_j = w.values[j] - wb.w;
    const double d2phi =
        second_difference(grid, w.values, j) - wb.dx / std::sqrt(wb.w);
    const double r = (w.dxw[j] - wb.dx) -
                     std::sqrt(std::max(w.values[j], 0.0)) * d2phi +
                     a[j] * phi_j;
    sup = std::max(sup, std::abs(r));
  }
  return sup;
}

std::vector<double> collapse_distances(const Trajectory& t,
                                       const BlasiusProfile& p, double x_min) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < t.size(); ++k)
    if (t.checkpoints[k].x >= x_min) idx.push_back(k);
  std::vector<double> out;
  for (std::size_t m = 0; m + 1 < idx.size(); ++m) {
    const WField& wa = t.checkpoints[idx[m]];
    const WField& wb_ = t.checkpoints[idx[m + 1]];
    const std::vector<double> pa = phi(wa, p);
    const std::vector<double> pb = phi(wb_, p);
    const double ra = std::sqrt(wa.x + 1.0), rb = std::sqrt(wb_.x + 1.0);
    const double h_max =
        std::min(wa.grid->psi_max / ra, wb_.grid->psi_max / rb);
    double dist = 0.0;
    const int samples = 200;
    for (int i = 1; i < samples; ++i) {
      const double h = h_max * static_cast<double>(i) / samples;
      const double va =
          interp_at(wa.grid->nodes, pa, h * ra) * ra;
      const double vb =
          interp_at(wb_.grid->nodes, pb, h * rb) * rb;
      dist = std::max(dist, std::abs(va - vb));
    }
    out.push_back(dist);
  }
  return out;
}

BoundednessCheck bounded_after_onset(const SupSeries& s, double rate,
                                     double x_min) {
  BoundednessCheck out;
  if (s.x.empty()) return out;
  const double x_end = s.x.back();
  std::vector<double> norm(s.x.size());
  for (std::size_t k = 0; k < s.x.size(); ++k)
    norm[k] = s.sup[k] * std::pow(s.x[k] + 1.0, rate);
  double decade_max = 0.0;
  for (std::size_t k = 0; k < s.x.size(); ++k)
    if (s.x[k] >= x_end / 10.0) decade_max = std::max(decade_max, norm[k]);
  out.last_decade_max = decade_max;
  for (std::size_t k0 = 0; k0 < s.x.size(); ++k0) {
    if (s.x[k0] < x_min) continue;
    if (s.x[k0] > x_end / 10.0) break;
    std::vector<double> window;
    for (std::size_t k = k0; k < s.x.size(); ++k) window.push_back(norm[k]);
    const double med = median(window);
    if (decade_max <= 1.1 * med) {
      out.pass = true;
      out.onset_x = s.x[k0];
      out.window_median = med;
      return out;
    }
    if (k0 == 0 || s.x[k0 - 1] < x_min) out.window_median = med;
  }
  return out;
}

bool no_late_growth(const SupSeries& s, double x_min) {
  if (s.x.empty()) return false;
  const double x_end = s.x.back();
  double early = 0.0, late = 0.0;
  for (std::size_t k = 0; k < s.x.size(); ++k) {
    if (s.x[k] < x_min) continue;
    if (s.x[k] >= x_end / 10.0)
      late = std::max(late, s.sup[k]);
    else
      early = std::max(early, s.sup[k]);
  }
  return late <= 1.1 * std::max(early, 1e-300);
}

}  // namespace prandtl
