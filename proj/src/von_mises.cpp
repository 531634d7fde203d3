#include "prandtl/von_mises.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prandtl {

PsiGrid PsiGrid::graded(double psi_max, std::size_t n_cells, double gamma) {
  if (!(psi_max > 0.0) || n_cells < 8)
    throw std::invalid_argument("PsiGrid: psi_max > 0 and >= 8 cells required");
  if (gamma < 1.0) throw std::invalid_argument("PsiGrid: grading must be >= 1");
  PsiGrid g;
  g.psi_max = psi_max;
  g.grading = gamma;
  g.nodes.resize(n_cells + 1);
  for (std::size_t j = 0; j <= n_cells; ++j)
    g.nodes[j] = psi_max * std::pow(static_cast<double>(j) /
                                        static_cast<double>(n_cells),
                                    gamma);
  g.nodes[0] = 0.0;
  g.nodes[n_cells] = psi_max;
  return g;
}

WbarValues wbar(const BlasiusProfile& p, double x, double psi) {
  if (x < 0.0 || psi < 0.0) throw std::invalid_argument("wbar: x, psi >= 0");
  const double root = std::sqrt(x + 1.0);
  const double h = psi / root;
  const double zeta = invert_f(p, h);
  const BlasiusValues v = eval_blasius(p, zeta);
  WbarValues out;
  out.w = v.fp * v.fp;
  out.dpsi = 2.0 * v.fpp / root;
  out.dx = -v.f * v.fpp / (x + 1.0);
  return out;
}

namespace {

// Integral of 1/sqrt(w) across one cell. Interior cells use the local
// power-law model w = c psi^alpha (exact for the linear wall behavior and
// for the flat far field); the degenerate first cell reduces to the
// closed form 2 sqrt(psi/slope).
double cell_increment(double psi_lo, double psi_hi, double w_lo, double w_hi) {
  if (w_hi <= 0.0 || (w_lo <= 0.0 && psi_lo > 0.0))
    throw std::runtime_error("y quadrature: vanishing w inside a cell");
  if (w_lo <= 0.0 || psi_lo <= 0.0)
    return 2.0 * (psi_hi - psi_lo) / (std::sqrt(w_lo) + std::sqrt(w_hi));
  const double alpha = std::log(w_hi / w_lo) / std::log(psi_hi / psi_lo);
  const double denom = 1.0 - 0.5 * alpha;
  if (!std::isfinite(alpha) || std::abs(denom) < 1e-6)
    return 2.0 * (psi_hi - psi_lo) / (std::sqrt(w_lo) + std::sqrt(w_hi));
  return (psi_hi / std::sqrt(w_hi) - psi_lo / std::sqrt(w_lo)) / denom;
}

}  // namespace

double y_of_psi(const PsiGrid& grid, std::span<const double> w, double psi) {
  if (psi < 0.0 || psi > grid.psi_max * (1.0 + 1e-12))
    throw std::invalid_argument("y_of_psi: psi outside grid");
  if (psi == 0.0) return 0.0;
  double y = 0.0;
  for (std::size_t j = 0; j + 1 < grid.n(); ++j) {
    if (j > 0 && w[j] <= 0.0)
      throw std::runtime_error(
          "y_of_psi: nonpositive w at interior node psi = " +
          format_double(grid.nodes[j]));
    const double lo = grid.nodes[j], hi = grid.nodes[j + 1];
    if (psi >= hi) {
      y += cell_increment(lo, hi, w[j], w[j + 1]);
      if (psi == hi) break;
    } else {
      const double t = (psi - lo) / (hi - lo);
      const double w_mid = w[j] + t * (w[j + 1] - w[j]);
      y += cell_increment(lo, psi, w[j], w_mid);
      break;
    }
  }
  return y;
}

std::vector<double> y_map(const PsiGrid& grid, std::span<const double> w) {
  std::vector<double> y(grid.n(), 0.0);
  for (std::size_t j = 0; j + 1 < grid.n(); ++j) {
    if (j > 0 && w[j] <= 0.0)
      throw std::runtime_error("y_map: nonpositive w at interior node psi = " +
                               format_double(grid.nodes[j]));
    y[j + 1] =
        y[j] + cell_increment(grid.nodes[j], grid.nodes[j + 1], w[j], w[j + 1]);
  }
  return y;
}

SimilarityPoint similarity_coords(const BlasiusProfile& p, double x, double psi) {
  if (x < 0.0 || psi < 0.0)
    throw std::invalid_argument("similarity_coords: x, psi >= 0");
  SimilarityPoint s;
  s.x = x;
  s.psi = psi;
  const double root = std::sqrt(x + 1.0);
  s.h = psi / root;
  s.zeta = invert_f(p, s.h);
  s.y_bar = root * s.zeta;
  return s;
}

BracketingThreshold bracketing_threshold(const BlasiusProfile& p) {
  // f(zeta)/zeta increases from 0 to 1; find the 1/2 crossing.
  double lo = 1e-6, hi = p.zeta_max;
  if (p.interp_f(hi) / hi < 0.5)
    throw std::runtime_error("bracketing_threshold: profile too short");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (p.interp_f(mid) / mid < 0.5)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12) break;
  }
  BracketingThreshold t;
  t.zeta = hi;
  t.h = p.interp_f(hi);
  return t;
}

RatioBounds wh_ratio_bounds(const BlasiusProfile& p, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("wh_ratio_bounds: a > 0");
  RatioBounds b{2.0 * p.b0, 2.0 * p.b0};  // limit of f'^2/f at zero
  const int n = 4000;
  for (int i = 1; i <= n; ++i) {
    const double h = a * static_cast<double>(i) / n;
    const double zeta = invert_f(p, h);
    const BlasiusValues v = eval_blasius(p, zeta);
    const double ratio = v.fp * v.fp / h;
    b.lo = std::min(b.lo, ratio);
    b.hi = std::max(b.hi, ratio);
  }
  return b;
}

double dxwbar_monotone_h_limit(const BlasiusProfile& p) {
  // Crossing of f' = f^2/2 past the maximum of f' - f^2/2.
  double lo = 0.5, hi = p.zeta_max;
  auto sign = [&p](double z) {
    const BlasiusValues v = eval_blasius(p, z);
    return v.fp - 0.5 * v.f * v.f;
  };
  if (sign(hi) >= 0.0) return p.interp_f(hi);
  while (sign(lo) <= 0.0) lo *= 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sign(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12) break;
  }
  return p.interp_f(lo);
}

WField w0_from_u0(const InitialData& data, std::shared_ptr<const PsiGrid> grid) {
  if (!(data.slope0 > 0.0))
    throw std::invalid_argument("w0_from_u0: u0'(0) must be positive");
  if (std::abs(data.u(0.0)) > 1e-10)
    throw std::invalid_argument("w0_from_u0: u0(0) must vanish");

  // psi(y) by cumulative trapezoid on a fine uniform y-grid; once u0 is flat
  // at 1 the map continues as psi + (y - y*).
  const double dy = 1e-3;
  std::vector<double> ys{0.0}, psis{0.0};
  double y = 0.0, psi = 0.0, u_prev = 0.0;
  double flat_y = -1.0, flat_psi = 0.0;
  while (psi < grid->psi_max) {
    y += dy;
    const double u = data.u(y);
    if (u <= 0.0)
      throw std::runtime_error("w0_from_u0: u0 nonpositive at y = " +
                               format_double(y));
    psi += 0.5 * dy * (u_prev + u);
    ys.push_back(y);
    psis.push_back(psi);
    u_prev = u;
    if (std::abs(u - 1.0) < 1e-13 && y > 1.0) {
      flat_y = y;
      flat_psi = psi;
      break;
    }
    if (y > 1e7)
      throw std::runtime_error("w0_from_u0: psi(y) failed to reach psi_max");
  }

  WField w0;
  w0.x = 0.0;
  w0.grid = grid;
  w0.values.assign(grid->n(), 0.0);
  const double psi_quad = psis.size() > 2 ? psis[2] : psis.back();
  for (std::size_t j = 1; j < grid->n(); ++j) {
    const double target = grid->nodes[j];
    double yj;
    if (target <= psi_quad) {
      yj = std::sqrt(2.0 * target / data.slope0);
    } else if (flat_y > 0.0 && target >= flat_psi) {
      yj = flat_y + (target - flat_psi);
    } else {
      auto it = std::lower_bound(psis.begin(), psis.end(), target);
      std::size_t i = static_cast<std::size_t>(it - psis.begin());
      if (i == 0) i = 1;
      const double t = (target - psis[i - 1]) / (psis[i] - psis[i - 1]);
      yj = ys[i - 1] + t * dy;
    }
    const double u = data.u(yj);
    w0.values[j] = u * u;
  }
  w0.values[0] = 0.0;
  return w0;
}

WField wbar_field(const BlasiusProfile& p, double x,
                  std::shared_ptr<const PsiGrid> grid) {
  WField w;
  w.x = x;
  w.grid = grid;
  w.values.assign(grid->n(), 0.0);
  for (std::size_t j = 0; j < grid->n(); ++j)
    w.values[j] = wbar(p, x, grid->nodes[j]).w;
  return w;
}

}  // namespace prandtl
