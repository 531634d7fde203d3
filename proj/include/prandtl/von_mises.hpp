#pragma once

#include <memory>
#include <span>

#include "prandtl/blasius.hpp"
#include "prandtl/field.hpp"
#include "prandtl/initial_data.hpp"

namespace prandtl {

// Reference field wbar = f'(zeta)^2 with zeta = f^{-1}(psi / sqrt(x+1)),
// together with its closed-form derivatives.
struct WbarValues {
  double w;     // f'^2
  double dpsi;  // 2 f'' / sqrt(x+1)
  double dx;    // -f f'' / (x+1)
};

WbarValues wbar(const BlasiusProfile& p, double x, double psi);

// Height map y(psi; u) = int_0^psi dpsi'/sqrt(w). Each cell uses the
// closed-form integral for w linear on the cell, which reduces to
// 2 sqrt(psi/slope) across the degenerate first cell.
double y_of_psi(const PsiGrid& grid, std::span<const double> w, double psi);

// y at every node, cumulative.
std::vector<double> y_map(const PsiGrid& grid, std::span<const double> w);

struct SimilarityPoint {
  double x, psi, h, zeta, y_bar;
};

SimilarityPoint similarity_coords(const BlasiusProfile& p, double x, double psi);

// Smallest similarity coordinate beyond which f(zeta)/zeta stays in [1/2, 1]
// (f/zeta is increasing), so zeta/2 <= h <= 2 zeta from there on.
struct BracketingThreshold {
  double zeta;
  double h;
};
BracketingThreshold bracketing_threshold(const BlasiusProfile& p);

// Range of wbar/h on h in (0, a].
struct RatioBounds {
  double lo, hi;
};
RatioBounds wh_ratio_bounds(const BlasiusProfile& p, double a);

// -dx wbar = f f''/(x+1) rises from 0 and eventually decays; it is increasing
// in psi exactly while f' >= f^2/2. Returns the h where that stops.
double dxwbar_monotone_h_limit(const BlasiusProfile& p);

// Initial field w0(psi_j) = u0(y(psi_j))^2 via quadrature of psi(y) and
// monotone inversion; near psi = 0 the expansion psi ~ u0'(0) y^2 / 2.
WField w0_from_u0(const InitialData& data, std::shared_ptr<const PsiGrid> grid);

// Exact reference samples, w0 = wbar(x, .) on the grid.
WField wbar_field(const BlasiusProfile& p, double x,
                  std::shared_ptr<const PsiGrid> grid);

}  // namespace prandtl
