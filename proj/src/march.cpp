#include "prandtl/march.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prandtl {

std::shared_ptr<const PsiGrid> MarchConfig::make_grid() const {
  return std::make_shared<const PsiGrid>(
      PsiGrid::graded(effective_psi_max(), n_cells, grading));
}

namespace {

std::vector<double> diffusion_coefficients(const PsiGrid& grid,
                                           const std::vector<double>& w,
                                           double floor_slope) {
  std::vector<double> a(w.size(), 0.0);
  for (std::size_t j = 1; j + 1 < w.size(); ++j) {
    const double floor = floor_slope * grid.nodes[j];
    a[j] = std::sqrt(std::max(w[j], floor));
  }
  return a;
}

// One linear solve of the frozen-coefficient scheme. Interior rows are
// (w+ - dx a D2 w+) = w for implicit Euler, the trapezoidal split for
// Crank-Nicolson. Boundary rows pin w+(0) = 0 and w+(psi_max) = 1.
std::vector<double> solve_frozen(const PsiGrid& grid,
                                 const std::vector<double>& w_old,
                                 const std::vector<double>& a, double dx,
                                 Scheme scheme) {
  const std::size_t n = w_old.size();
  std::vector<double> lower(n, 0.0), diag(n, 1.0), upper(n, 0.0), rhs(n, 0.0);
  const double theta = scheme == Scheme::CrankNicolsonFrozen ? 0.5 : 1.0;
  rhs[0] = 0.0;
  rhs[n - 1] = 1.0;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const D2Weights d2 = d2_weights(grid, j);
    const double k = dx * a[j];
    lower[j] = -theta * k * d2.cl;
    diag[j] = 1.0 + theta * k * d2.cc;
    upper[j] = -theta * k * d2.cr;
    rhs[j] = w_old[j];
    if (theta < 1.0) {
      const double explicit_part =
          d2.cl * w_old[j - 1] - d2.cc * w_old[j] + d2.cr * w_old[j + 1];
      rhs[j] += (1.0 - theta) * k * explicit_part;
    }
  }
  return solve_tridiagonal(lower, diag, upper, rhs);
}

}  // namespace

WField step(const WField& w, double dx, const MarchConfig& cfg) {
  if (!(dx > 0.0)) throw std::invalid_argument("step: dx must be positive");
  const PsiGrid& grid = *w.grid;
  const double floor_slope = cfg.w_floor_coeff * w.wall_slope();

  const double w_min_old = *std::min_element(w.values.begin(), w.values.end());
  const double w_max_old = *std::max_element(w.values.begin(), w.values.end());

  double dx_try = dx;
  for (int attempt = 0;; ++attempt) {
    std::vector<double> a = diffusion_coefficients(grid, w.values, floor_slope);
    std::vector<double> w_new;
    for (int it = 0; it < std::max(1, cfg.picard_iters); ++it) {
      w_new = solve_frozen(grid, w.values, a, dx_try, cfg.scheme);
      if (it + 1 < cfg.picard_iters) {
        if (cfg.scheme == Scheme::CrankNicolsonFrozen) {
          std::vector<double> mid(w_new.size());
          for (std::size_t j = 0; j < mid.size(); ++j)
            mid[j] = 0.5 * (w.values[j] + w_new[j]);
          a = diffusion_coefficients(grid, mid, floor_slope);
        } else {
          a = diffusion_coefficients(grid, w_new, floor_slope);
        }
      }
    }

    const double w_min = *std::min_element(w_new.begin(), w_new.end());
    if (w_min < -1e-12) {
      if (attempt >= 20)
        throw std::runtime_error(
            "step: negative values persist after 20 halvings at x = " +
            format_double(w.x) + " (min " + format_double(w_min) + ")");
      dx_try *= 0.5;
      continue;
    }
    const double w_max = *std::max_element(w_new.begin(), w_new.end());
    if (cfg.scheme == Scheme::ImplicitFrozen &&
        (w_min < std::min(0.0, w_min_old) - 1e-12 ||
         w_max > std::max(1.0, w_max_old) + 1e-12))
      throw std::logic_error("step: discrete extremum bound violated at x = " +
                             format_double(w.x));

    WField out;
    out.x = w.x + dx_try;
    out.grid = w.grid;
    out.values = std::move(w_new);
    for (double& v : out.values)
      if (v < 0.0) v = 0.0;
    out.dx_last = dx_try;
    out.dxw.resize(out.values.size());
    double sup = 0.0;
    for (std::size_t j = 0; j < out.values.size(); ++j) {
      out.dxw[j] = (out.values[j] - w.values[j]) / dx_try;
      sup = std::max(sup, std::abs(out.dxw[j]));
    }
    out.residual_norm = sup;
    return out;
  }
}

namespace {

CheckpointAudit audit_checkpoint(const WField& w, const BlasiusProfile& p,
                                 const MarchConfig& cfg, double ratio_lo,
                                 double ratio_hi, bool concave_run) {
  const PsiGrid& grid = *w.grid;
  const std::size_t n = grid.n();
  CheckpointAudit a;
  a.x = w.x;

  a.min_value = *std::min_element(w.values.begin(), w.values.end());
  if (a.min_value < 0.0) a.failures.push_back("negative value");
  if (w.values[0] != 0.0) a.failures.push_back("wall value not pinned to 0");

  a.far_value_gap = std::abs(w.values[n - 2] - 1.0);
  if (a.far_value_gap > cfg.far_field_tol)
    a.failures.push_back("far field off 1 by " +
                         format_double(a.far_value_gap));
  a.far_curvature = std::abs(second_difference(grid, w.values, n - 2));
  if (a.far_curvature > 1e-10)
    a.failures.push_back("far-field curvature " +
                         format_double(a.far_curvature));

  // Comparison sandwich against the initial bracket, with drift allowance.
  double c_min = w.wall_slope() / (2.0 * p.b0 / std::sqrt(w.x + 1.0));
  double c_max = c_min;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double ratio = w.values[j] / wbar(p, w.x, grid.nodes[j]).w;
    c_min = std::min(c_min, ratio);
    c_max = std::max(c_max, ratio);
  }
  a.c_min = c_min;
  a.c_max = c_max;
  if (c_min < ratio_lo * (1.0 - cfg.comparison_drift) - 1e-12)
    a.failures.push_back("comparison lower bound drifted: " +
                         format_double(c_min) + " < " +
                         format_double(ratio_lo));
  if (c_max > ratio_hi * (1.0 + cfg.comparison_drift) + 1e-12)
    a.failures.push_back("comparison upper bound drifted: " +
                         format_double(c_max) + " > " +
                         format_double(ratio_hi));

  a.max_dxw = 0.0;
  if (!w.dxw.empty()) {
    for (double v : w.dxw) a.max_dxw = std::max(a.max_dxw, v);
    if (std::abs(w.dxw[0]) != 0.0)
      a.failures.push_back("wall dx w not identically zero");
  }
  if (concave_run) {
    if (!w.dxw.empty() && a.max_dxw > 1e-8)
      a.failures.push_back("concavity: max dx w = " + format_double(a.max_dxw));
    double min_slope = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j)
      min_slope = std::min(min_slope, (w.values[j + 1] - w.values[j]) /
                                          grid.spacing(j));
    a.min_dpsi_w = min_slope;
    if (min_slope < -1e-10)
      a.failures.push_back("monotonicity: min dpsi w = " +
                           format_double(min_slope));
  }
  return a;
}

}  // namespace

Trajectory march(const MarchConfig& cfg, WField w0, const BlasiusProfile& p) {
  if (!(cfg.dx0 > 0.0) || !(cfg.x_end > 0.0) || cfg.picard_iters < 1)
    throw std::invalid_argument("march: invalid config");
  if (!w0.grid || w0.values.size() != w0.grid->n())
    throw std::invalid_argument("march: field/grid mismatch");
  if (w0.values[0] != 0.0)
    throw std::invalid_argument("march: w0 must vanish at the wall");

  Trajectory traj;
  traj.config = cfg;
  traj.concave_run = cfg.assert_concavity;

  {
    double lo = w0.wall_slope() / (2.0 * p.b0 / std::sqrt(w0.x + 1.0));
    double hi = lo;
    for (std::size_t j = 1; j + 1 < w0.grid->n(); ++j) {
      const double ratio =
          w0.values[j] / wbar(p, w0.x, w0.grid->nodes[j]).w;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    traj.initial_ratio_min = lo;
    traj.initial_ratio_max = hi;
  }

  auto store = [&](const WField& w) {
    traj.checkpoints.push_back(w);
    traj.audits.push_back(audit_checkpoint(w, p, cfg, traj.initial_ratio_min,
                                           traj.initial_ratio_max,
                                           traj.concave_run));
  };

  WField w = std::move(w0);
  store(w);
  double next_threshold = (w.x + 1.0) * cfg.checkpoint_ratio;

  while (w.x < cfg.x_end * (1.0 - 1e-12)) {
    const double dx =
        std::min(cfg.dx0 * (w.x + 1.0) * cfg.step_growth, cfg.x_end - w.x);
    try {
      w = step(w, dx, cfg);
    } catch (const std::exception& e) {
      throw std::runtime_error("march: step failed at x = " +
                               format_double(w.x) + ": " + e.what());
    }
    if (w.x + 1.0 >= next_threshold * (1.0 - 1e-12)) {
      store(w);
      while (next_threshold <= w.x + 1.0) next_threshold *= cfg.checkpoint_ratio;
    }
  }
  if (traj.checkpoints.back().x < w.x) store(w);
  return traj;
}

double sup_error_vs_wbar(const WField& w, const BlasiusProfile& p) {
  double sup = 0.0;
  for (std::size_t j = 0; j < w.grid->n(); ++j)
    sup = std::max(sup,
                   std::abs(w.values[j] - wbar(p, w.x, w.grid->nodes[j]).w));
  return sup;
}

WField shifted_wbar_field(const BlasiusProfile& p, double x, double x0,
                          std::shared_ptr<const PsiGrid> grid) {
  WField w;
  w.x = x;
  w.grid = grid;
  w.values.assign(grid->n(), 0.0);
  const double root = std::sqrt(x + x0);
  for (std::size_t j = 0; j < grid->n(); ++j) {
    const double fp = eval_blasius(p, invert_f(p, grid->nodes[j] / root)).fp;
    w.values[j] = fp * fp;
  }
  return w;
}

Trajectory synthetic_shift_trajectory(const MarchConfig& cfg,
                                      const BlasiusProfile& p, double x0) {
  Trajectory traj;
  traj.config = cfg;
  auto grid = cfg.make_grid();
  double x = 0.0;
  while (true) {
    traj.checkpoints.push_back(shifted_wbar_field(p, x, x0, grid));
    if (x >= cfg.x_end) break;
    x = std::min((x + 1.0) * cfg.checkpoint_ratio - 1.0, cfg.x_end);
  }
  traj.initial_ratio_min = traj.initial_ratio_max = 1.0;
  return traj;
}

ConvergenceReport self_similarity_oracle(const MarchConfig& cfg,
                                         const BlasiusProfile& p) {
  ConvergenceReport rep;
  for (int level = 0; level < 3; ++level) {
    MarchConfig c = cfg;
    c.n_cells = cfg.n_cells << level;
    c.dx0 = cfg.dx0 / static_cast<double>(1 << level);
    auto grid = c.make_grid();
    Trajectory t = march(c, wbar_field(p, 0.0, grid), p);
    rep.levels.push_back(
        {c.n_cells, c.dx0, sup_error_vs_wbar(t.checkpoints.back(), p)});
  }
  rep.monotone = true;
  for (std::size_t k = 0; k + 1 < rep.levels.size(); ++k) {
    const double e0 = rep.levels[k].sup_error;
    const double e1 = rep.levels[k + 1].sup_error;
    rep.orders.push_back(std::log2(e0 / e1));
    if (e1 >= e0) rep.monotone = false;
  }
  return rep;
}

}  // namespace prandtl
