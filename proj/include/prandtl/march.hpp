#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "prandtl/blasius.hpp"
#include "prandtl/field.hpp"
#include "prandtl/von_mises.hpp"

namespace prandtl {

enum class Scheme { ImplicitFrozen, CrankNicolsonFrozen };

struct MarchConfig {
  double x_end = 100.0;
  double dx0 = 2.5e-4;          // dx = dx0 * (x+1) * step_growth
  double step_growth = 1.0;
  std::size_t n_cells = 768;
  double grading = 2.0;
  double psi_max_factor = 10.0;  // psi_max = factor * sqrt(x_end + 1)
  double psi_max = 0.0;         // overrides the factor when positive
  double w_floor_coeff = 0.25;  // floor_j = coeff * wall_slope * psi_j
  int picard_iters = 2;
  Scheme scheme = Scheme::ImplicitFrozen;
  double checkpoint_ratio = 1.1892071150027210667;  // 2^(1/4)
  double far_field_tol = 1e-6;
  double comparison_drift = 0.05;
  bool assert_concavity = false;

  double effective_psi_max() const {
    return psi_max > 0.0 ? psi_max : psi_max_factor * std::sqrt(x_end + 1.0);
  }
  std::shared_ptr<const PsiGrid> make_grid() const;
};

WField step(const WField& w, double dx, const MarchConfig& cfg);

struct CheckpointAudit {
  double x = 0.0;
  double c_min = 0.0, c_max = 0.0;  // w/wbar bracket over interior nodes
  double max_dxw = 0.0;             // scheme-residual route
  double far_value_gap = 0.0;       // |w[N-1] - 1|
  double far_curvature = 0.0;       // |D2 w| at the last interior node
  double min_value = 0.0;
  double min_dpsi_w = 0.0;
  std::vector<std::string> failures;
};

struct Trajectory {
  std::vector<WField> checkpoints;
  std::vector<CheckpointAudit> audits;
  MarchConfig config;
  double initial_ratio_min = 0.0, initial_ratio_max = 0.0;
  bool concave_run = false;

  std::size_t size() const { return checkpoints.size(); }
};

// Advance w0 to x_end storing checkpoints at geometric thresholds in (x+1).
// The profile drives the per-checkpoint audits; audit failures are recorded,
// not thrown.
Trajectory march(const MarchConfig& cfg, WField w0, const BlasiusProfile& p);

struct ConvergenceLevel {
  std::size_t n_cells;
  double dx0;
  double sup_error;
};

struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;
  std::vector<double> orders;  // log2(e_k / e_{k+1})
  bool monotone = false;
};

// Blasius-initialized march at (N, dx0), (2N, dx0/2), (4N, dx0/4) against the
// closed-form field at x_end.
ConvergenceReport self_similarity_oracle(const MarchConfig& cfg,
                                         const BlasiusProfile& p);

// Sup error against wbar at the station of w.
double sup_error_vs_wbar(const WField& w, const BlasiusProfile& p);

// Closed-form member of the self-similar family with offset x0,
// w(x, psi) = f'(f^{-1}(psi/sqrt(x+x0)))^2.
WField shifted_wbar_field(const BlasiusProfile& p, double x, double x0,
                          std::shared_ptr<const PsiGrid> grid);

// Checkpoint skeleton of the closed-form shifted field at the geometric
// stations of cfg; no marching involved, used as a difference-field oracle.
Trajectory synthetic_shift_trajectory(const MarchConfig& cfg,
                                      const BlasiusProfile& p, double x0);

}  // namespace prandtl
