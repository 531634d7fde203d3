#pragma once

#include <optional>
#include <span>
#include <string>

#include "prandtl/march.hpp"

namespace prandtl {

enum class Quantity { Phi, DxPhi, DpsiPhi, D2psiPhi, DpsixW, D2xW };

std::string quantity_name(Quantity q);

// Perturbation phi = w - wbar at the field's station.
std::vector<double> phi(const WField& w, const BlasiusProfile& p);

// Damping coefficient A = -dx wbar / (sqrt(wbar) (sqrt(wbar)+sqrt(w))),
// with the one-sided limit at the wall.
std::vector<double> damping_A(const WField& w, const BlasiusProfile& p);
double damping_A_wall(const WField& w, const BlasiusProfile& p);

// Bounds for (x+1)*A on {zeta <= k0} given a comparison bracket [c_lo, c_hi]
// for w/wbar.
struct DampingBounds {
  double lambda_k0 = 0.0;
  double upper = 0.0;
};
DampingBounds damping_bounds(const BlasiusProfile& p, double k0, double c_lo,
                             double c_hi);

// Derivative fields at checkpoint k. dx-routes use the identity
// dx w = sqrt(w) D2 w at the station; the cross-checkpoint difference is kept
// alongside as an independent route.
struct DerivativeFields {
  double x = 0.0;
  std::vector<double> phi;
  std::vector<double> dxw_pde, dxw_xdiff;
  std::vector<double> dxphi, dpsiphi, d2psiphi, dpsixw, d2xw;
  double x_route_mismatch = 0.0;
  bool has_xdiff = false;
};
DerivativeFields derivative_fields(const Trajectory& t, const BlasiusProfile& p,
                                   std::size_t k);

struct SupSeries {
  std::vector<double> x, sup;
};
SupSeries quantity_series(const Trajectory& t, const BlasiusProfile& p,
                          Quantity q);

struct DecayFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  double rms = 0.0;
  bool with_log = false;
  double x_lo = 0.0, x_hi = 0.0;
  std::size_t points = 0;
};

// ln sup|q| against -exponent ln(x+1) (+ ln ln(x+e) when with_log) over
// [max(10, x_lo), x_hi]; the window shrinks at the first floor hit (1e-13).
DecayFit fit_decay(const SupSeries& s, bool with_log, double x_lo = 10.0,
                   double x_hi = 1e300);
DecayFit sup_norm_decay(const Trajectory& t, const BlasiusProfile& p,
                        Quantity q, bool with_log, double x_lo = 10.0);

struct TailFit {
  double c = 0.0;
  double rms = 0.0;
  double h2_lo = 0.0, h2_hi = 0.0;
  std::size_t points = 0;
};

// Gaussian tail rate of |q| at one station: slope of -ln|q| against
// psi^2/(x+1) on the descending tail with |q| in [1e-12, 0.1 sup].
TailFit gaussian_tail(const WField& w, std::span<const double> q);

struct ComparisonPoint {
  double x, c_min, c_max;
};
std::vector<ComparisonPoint> comparison_ratio(const Trajectory& t,
                                              const BlasiusProfile& p);

struct DpsiComparisonReport {
  std::optional<double> x1;  // first station after which ratio stays in [1/2, 3/2]
  std::vector<double> x, ratio_min, ratio_max;
};
DpsiComparisonReport dpsi_w_comparison(const Trajectory& t,
                                       const BlasiusProfile& p, double h1);

// Euler-coordinate reconstruction at checkpoint k on given heights
// (defaults to the node image of the grid).
struct EulerField {
  std::vector<double> y;
  std::vector<double> u;       // sqrt(w) at psi(y)
  std::vector<double> du;      // u - ubar
  std::vector<double> dy_du;   // d/dy (u - ubar)
  std::vector<double> d2y_u;   // = dx w / 2
  std::vector<double> dx_u;
  std::vector<double> dxy_u;
  double y_covered = 0.0;
};
EulerField euler_reconstruct(const Trajectory& t, const BlasiusProfile& p,
                             std::size_t k, std::span<const double> y_samples);
EulerField euler_reconstruct(const Trajectory& t, const BlasiusProfile& p,
                             std::size_t k);

// Height discrepancy envelope |ybar - y| <= a + b ln(x+1) + d y/sqrt(x+1).
struct YEnvelope {
  double a = 0.0, b = 0.0, d = 0.0;
};
YEnvelope fit_y_envelope(const WField& w, const BlasiusProfile& p);
double y_envelope_slack(const WField& w, const BlasiusProfile& p,
                        const YEnvelope& env);

// Sup-norm residual of the perturbation equation at checkpoint k, using the
// cross-checkpoint route for dx phi and discrete D2 for the diffusion term.
double pde_residual_sup(const Trajectory& t, const BlasiusProfile& p,
                        std::size_t k);

// Same residual with the marcher's own backward difference as the dx route;
// station-local, defined wherever the field carries step metadata.
double pde_residual_scheme_route(const WField& w, const BlasiusProfile& p);

// Pairwise sup distances of |phi| sqrt(x+1) against h between consecutive
// checkpoints with x >= x_min (self-similar collapse).
std::vector<double> collapse_distances(const Trajectory& t,
                                       const BlasiusProfile& p,
                                       double x_min = 10.0);

struct BoundednessCheck {
  bool pass = false;
  double onset_x = 0.0;
  double last_decade_max = 0.0;
  double window_median = 0.0;
};

// Normalized series sup|q| (x+1)^rate: searches the empirical onset station
// in [x_min, x_end/10] so that the last decade's maximum stays within 10% of
// the window median from the onset on.
BoundednessCheck bounded_after_onset(const SupSeries& s, double rate,
                                     double x_min = 10.0);

// Late-growth guard: max over the last decade <= 1.1 * max over the rest.
bool no_late_growth(const SupSeries& s, double x_min = 10.0);

}  // namespace prandtl
