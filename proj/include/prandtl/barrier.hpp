#pragma once

#include <map>
#include <string>
#include <vector>

#include "prandtl/diagnostics.hpp"

namespace prandtl {

enum class BarrierKind {
  ExpTail,    // C exp(-eps psi^2/(x+1)), no ridges
  Algebraic,  // (x+1)^-lambda { sqrt(Mh); 1; (h0/h)^(2+2lambda) }
  Sharp,      // { N^(1-a)(x+1)^(-1/2-(1-a)/2) psi^(1-a); dpsi wbar / b_N }
  SmallH,     // (x+1)^-alpha { wbar/b1; 1 }
  DxPhi,      // (-dx wbar) exp(-K (x+1)^-eps)
  D2xwCos,    // (x+1)^-2 { 0; cos(h-h1); Gaussian }
  D2xwAlg     // (x+1)^-1/2 { h^(1-a); h0^(1-a); Gaussian }
};

std::string barrier_kind_name(BarrierKind k);
BarrierKind barrier_kind_from(const std::string& name);

enum class PieceFormula { Zero, PowerPsi, GaussH, CosBand, DpsiWbar, Wbar, NegDxWbar };

// One region of the barrier: c * (x+1)^p * base(x, psi).
struct BarrierPiece {
  double h_lo = 0.0;
  double h_hi = 1e300;
  PieceFormula formula = PieceFormula::Zero;
  double c = 1.0;
  double p = 0.0;
  double q = 0.0;    // PowerPsi exponent
  double eps = 0.0;  // GaussH rate
  double h1 = 0.0;   // CosBand phase
};

struct BarrierSpec {
  BarrierKind kind = BarrierKind::ExpTail;
  std::vector<BarrierPiece> pieces;
  std::vector<double> ridges;
  std::map<std::string, double> constants;
  // Optional global factor exp(-k (x+1)^-kappa).
  double xfactor_k = 0.0;
  double xfactor_kappa = 0.0;
  // Prop 5.2 composite: add exp(-(x+1)^-1/2) dpsi w to the piecewise part
  // when comparing against a field.
  bool add_dpsi_w_term = false;
};

// Assembles the barrier and enforces the matching/side conditions; rejects
// with the violated condition named.
BarrierSpec build_barrier(BarrierKind kind, const BlasiusProfile& p,
                          const std::map<std::string, double>& constants);

struct BarrierDerivs {
  double g, gx, gpsi, gpp;
};

BarrierDerivs eval_barrier_derivs(const BarrierSpec& spec,
                                  const BlasiusProfile& p, double x,
                                  double psi);
double eval_barrier(const BarrierSpec& spec, const BlasiusProfile& p, double x,
                    double psi);

// Relative mismatch of the two one-sided values at each ridge.
std::vector<double> continuity_gaps(const BarrierSpec& spec,
                                    const BlasiusProfile& p, double x);

// Coefficient source for L: a marched field (primary) or wbar scaled through
// the comparison bracket (standalone; the worse endpoint is used).
struct CoefficientSource {
  const WField* field = nullptr;
  double bracket_lo = 1.0;
  double bracket_hi = 1.0;
};

struct ResidualReport {
  double min_residual = 0.0;
  double argmin_h = 0.0;
  std::size_t samples = 0;
  double x = 0.0;
};

// Minimum of Lg + Ag = dx g - sqrt(w) d2psi g + A g over h samples of
// (h_lo, h_hi). The region must not contain a ridge.
ResidualReport residual_check(const BarrierSpec& spec, const BlasiusProfile& p,
                              const CoefficientSource& coeff, double x,
                              double h_lo, double h_hi,
                              std::size_t n_samples = 2048);

struct RidgeReport {
  double h = 0.0;
  double left_slope = 0.0;
  double right_slope = 0.0;
  bool ok = false;
};

std::vector<RidgeReport> ridge_verify(const BarrierSpec& spec,
                                      const BlasiusProfile& p, double x);

struct DominancePoint {
  double x;
  double c_star;
};

struct DominanceReport {
  std::vector<DominancePoint> series;
  bool possible = true;     // g never vanishes where |q| is above floor
  bool pass = false;        // bounded, nonincreasing within 10% after onset
  double onset_x = 0.0;
};

// abs_floor, when given, holds one measurement-error unit per checkpoint
// (e.g. the Blasius-companion sup error); quantity values below it are not
// treated as signal.
DominanceReport dominance(const BarrierSpec& spec, const BlasiusProfile& p,
                          const Trajectory& t, Quantity q,
                          const std::vector<double>& abs_floor = {});

// Doubling search for the smallest multiplier m = start * 2^k (k <= steps)
// with predicate(m) true; returns 0 on failure.
double doubling_search(const std::function<bool(double)>& predicate,
                       double start, int steps);

}  // namespace prandtl
