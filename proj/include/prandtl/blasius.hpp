#pragma once

#include <string>
#include <vector>

#include "prandtl/numerics.hpp"

namespace prandtl {

// Similarity profile of the flat-plate boundary layer: f''' = -f f''/2 with
// f(0) = f'(0) = 0 and f' -> 1. Immutable once built; safe to share.
struct BlasiusProfile {
  std::vector<double> zeta, f, fp, fpp, fppp;
  double zeta_max = 0.0;
  double tol = 0.0;
  double b0 = 0.0;        // f''(0) from the shooting search
  double beta_bar = 0.0;  // lim (zeta - f)
  double c1_fit = 0.0;    // tail exponent: f'' ~ exp(-c1 z^2 - c2 z + const)
  double c2_fit = 0.0;
  double tail_fit_rms = 0.0;
  double b0_halving_delta = 0.0;  // |b0(h) - b0(h/2)| at acceptance
  double step = 0.0;              // final integration step

  MonotoneCubic interp_f, interp_fp, interp_fpp;
};

struct BlasiusValues {
  double f, fp, fpp, fppp;
};

struct OriginDerivatives {
  double f3, f4, f5;
};

struct TailConstants {
  double c1, c2, rms;
};

BlasiusProfile solve_blasius(double zeta_max = 12.0, double tol = 1e-10);

// Total on zeta >= 0; analytic continuation f = zeta - beta_bar past zeta_max.
BlasiusValues eval_blasius(const BlasiusProfile& p, double zeta);

// Unique zeta with f(zeta) = h (f strictly increasing).
double invert_f(const BlasiusProfile& p, double h);

OriginDerivatives check_origin_derivatives(const BlasiusProfile& p);

TailConstants fit_tail_constants(BlasiusProfile& p);

// Independent consistency route: f''(z) = b0 * exp(-0.5 * int_0^z f).
// Returns the sup-norm mismatch over the tabulated nodes.
double ode_residual_integral_route(const BlasiusProfile& p);

// Empty vector means every profile invariant holds.
std::vector<std::string> audit_profile(const BlasiusProfile& p);

void write_profile_csv(const BlasiusProfile& p, const std::string& path);
void write_profile_json(const BlasiusProfile& p, const std::string& path);

}  // namespace prandtl
