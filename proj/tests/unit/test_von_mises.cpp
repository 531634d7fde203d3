#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fixtures.hpp"
#include "prandtl/initial_data.hpp"
#include "prandtl/march.hpp"
#include "prandtl/von_mises.hpp"

using namespace prandtl;

TEST_SUITE("von_mises") {

TEST_CASE("graded grid shape") {
  const PsiGrid g = PsiGrid::graded(80.0, 256, 2.0);
  CHECK(g.nodes.front() == 0.0);
  CHECK(g.nodes.back() == 80.0);
  for (std::size_t j = 0; j + 1 < g.n(); ++j) CHECK(g.nodes[j] < g.nodes[j + 1]);
  // Quadratic grading: first cell ~ psi_max / N^2.
  CHECK(g.nodes[1] == doctest::Approx(80.0 / (256.0 * 256.0)));
  CHECK_THROWS_AS(PsiGrid::graded(80.0, 256, 0.5), std::invalid_argument);
}

TEST_CASE("reference field boundary behavior and derivatives") {
  const BlasiusProfile& p = default_profile();
  CHECK(wbar(p, 3.0, 0.0).w == 0.0);
  CHECK(wbar(p, 3.0, 500.0).w == doctest::Approx(1.0).epsilon(1e-10));

  // Finite-difference oracle for the closed forms at (x, psi) = (3, 1).
  const double x = 3.0, psi = 1.0;
  const WbarValues v = wbar(p, x, psi);
  const double dx = 1e-4;
  const double fd_x = (wbar(p, x + dx, psi).w - wbar(p, x - dx, psi).w) / (2 * dx);
  CHECK(std::abs(fd_x - v.dx) <= 1e-7);
  const double dpsi = 1e-4;
  const double fd_psi =
      (wbar(p, x, psi + dpsi).w - wbar(p, x, psi - dpsi).w) / (2 * dpsi);
  CHECK(std::abs(fd_psi - v.dpsi) <= 5e-7);
}

TEST_CASE("streamwise decay term: sign everywhere, monotone near the wall") {
  const BlasiusProfile& p = default_profile();
  const double h_limit = dxwbar_monotone_h_limit(p);
  CHECK(h_limit > 0.5);
  double prev = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double h = h_limit * i / 200.0;
    const double g = -wbar(p, 2.0, h * std::sqrt(3.0)).dx;
    CHECK(g > 0.0);
    CHECK(g >= prev - 1e-14);
    prev = g;
  }
  // Past the crossover the profile factor f f'' decays again.
  const double near = -wbar(p, 2.0, (h_limit + 0.5) * std::sqrt(3.0)).dx;
  const double farther = -wbar(p, 2.0, (h_limit + 2.5) * std::sqrt(3.0)).dx;
  CHECK(farther < near);
}

TEST_CASE("height map on the reference field matches the similarity identity") {
  const BlasiusProfile& p = default_profile();
  // Change of variables gives y(psi) = zeta exactly at x = 0.
  const double target = eval_blasius(p, 2.0).f;

  auto grid = std::make_shared<const PsiGrid>(PsiGrid::graded(80.0, 768, 2.0));
  const WField w = wbar_field(p, 0.0, grid);
  CHECK(y_of_psi(*grid, w.values, 0.0) == 0.0);
  CHECK(std::abs(y_of_psi(*grid, w.values, target) - 2.0) <= 2e-3);

  // Refined-quadrature oracle: the discretization error shrinks with the grid.
  auto fine = std::make_shared<const PsiGrid>(PsiGrid::graded(80.0, 8192, 2.0));
  const WField wf = wbar_field(p, 0.0, fine);
  CHECK(std::abs(y_of_psi(*fine, wf.values, target) - 2.0) <= 1e-6);
}

TEST_CASE("height map brackets follow the comparison ratio") {
  const BlasiusProfile& p = default_profile();
  auto grid = std::make_shared<const PsiGrid>(PsiGrid::graded(40.0, 512, 2.0));
  const WField wb = wbar_field(p, 0.0, grid);
  const WField ws = shifted_wbar_field(p, 0.0, 2.0, grid);

  double r_lo = 1e300, r_hi = 0.0;
  for (std::size_t j = 1; j + 1 < grid->n(); ++j) {
    const double r = ws.values[j] / wb.values[j];
    r_lo = std::min(r_lo, r);
    r_hi = std::max(r_hi, r);
  }
  const std::vector<double> yu = y_map(*grid, ws.values);
  const std::vector<double> yb = y_map(*grid, wb.values);
  for (std::size_t j = 8; j < grid->n(); j += 31) {
    const double ratio = yu[j] / yb[j];
    CHECK(ratio >= 1.0 / std::sqrt(r_hi) - 1e-9);
    CHECK(ratio <= 1.0 / std::sqrt(r_lo) + 1e-9);
  }
}

TEST_CASE("round trip psi -> y -> integral of u") {
  const BlasiusProfile& p = default_profile();
  auto grid = std::make_shared<const PsiGrid>(PsiGrid::graded(40.0, 1024, 2.0));
  const WField w = wbar_field(p, 2.0, grid);
  const std::vector<double> ys = y_map(*grid, w.values);
  double integral = 0.0;
  for (std::size_t j = 1; j < grid->n(); ++j) {
    const double u_lo = std::sqrt(w.values[j - 1]);
    const double u_hi = std::sqrt(w.values[j]);
    integral += 0.5 * (ys[j] - ys[j - 1]) * (u_lo + u_hi);
    if (grid->nodes[j] > 1.0 && grid->nodes[j] < 20.0)
      CHECK(integral == doctest::Approx(grid->nodes[j]).epsilon(2e-4));
  }
}

TEST_CASE("similarity coordinates") {
  const BlasiusProfile& p = default_profile();
  const SimilarityPoint origin = similarity_coords(p, 0.0, 0.0);
  CHECK(origin.h == 0.0);
  CHECK(origin.zeta == 0.0);
  CHECK(origin.y_bar == 0.0);

  const double h1 = eval_blasius(p, 1.0).f;
  const SimilarityPoint s = similarity_coords(p, 3.0, 2.0 * h1);
  CHECK(s.h == doctest::Approx(h1).epsilon(1e-12));
  CHECK(s.zeta == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s.y_bar == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::abs(eval_blasius(p, s.zeta).f - s.h) <= 1e-9);
}

TEST_CASE("bracketing threshold certifies the two-sided bound") {
  const BlasiusProfile& p = default_profile();
  const BracketingThreshold t = bracketing_threshold(p);
  CHECK(eval_blasius(p, t.zeta).f == doctest::Approx(0.5 * t.zeta).epsilon(1e-6));
  for (int i = 0; i <= 100; ++i) {
    const double h = t.h + i * 0.1;
    const double zeta = invert_f(p, h);
    CHECK(h >= 0.5 * zeta - 1e-9);
    CHECK(h <= 2.0 * zeta + 1e-9);
  }
}

TEST_CASE("wbar/h ratio bounds near the wall") {
  const BlasiusProfile& p = default_profile();
  const RatioBounds b = wh_ratio_bounds(p, 1.0);
  CHECK(b.lo > 0.0);
  CHECK(b.lo <= 2.0 * p.b0 + 1e-12);
  CHECK(b.hi >= 2.0 * p.b0 - 1e-12);
  CHECK(b.hi < 1.2);
}

TEST_CASE("discrete Von Mises identity 2 du/dy = dw/dpsi") {
  const BlasiusProfile& p = default_profile();
  auto grid = std::make_shared<const PsiGrid>(PsiGrid::graded(40.0, 2048, 2.0));
  const WField w = wbar_field(p, 1.5, grid);
  const std::vector<double> ys = y_map(*grid, w.values);
  for (std::size_t j = 64; j + 64 < grid->n(); j += 97) {
    const double du = std::sqrt(w.values[j + 1]) - std::sqrt(w.values[j - 1]);
    const double dy = ys[j + 1] - ys[j - 1];
    const double lhs = 2.0 * du / dy;
    const double rhs = first_difference(*grid, w.values, j);
    CHECK(std::abs(lhs - rhs) <= 2e-4 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("initial field construction reproduces the reference datum") {
  const BlasiusProfile& p = default_profile();
  auto grid = std::make_shared<const PsiGrid>(PsiGrid::graded(40.0, 512, 2.0));
  const InitialData data = blasius_shift_data(p, 1.0);
  const WField w0 = w0_from_u0(data, grid);
  CHECK(w0.values[0] == 0.0);
  double worst = 0.0;
  for (std::size_t j = 0; j < grid->n(); ++j)
    worst = std::max(worst,
                     std::abs(w0.values[j] - wbar(p, 0.0, grid->nodes[j]).w));
  CHECK(worst <= 1e-6);
}

TEST_CASE("initial wall slope is twice the shear") {
  const BlasiusProfile& p = default_profile();
  auto grid = std::make_shared<const PsiGrid>(PsiGrid::graded(40.0, 512, 2.0));
  const InitialData data = gaussian_concave_data(1.6, 1.2);
  const WField w0 = w0_from_u0(data, grid);
  CHECK(w0.wall_slope() == doctest::Approx(2.0 * data.slope0).epsilon(5e-3));
}

TEST_CASE("nonpositive interior values are rejected by the height map") {
  auto grid = std::make_shared<const PsiGrid>(PsiGrid::graded(10.0, 64, 2.0));
  std::vector<double> w(grid->n(), 0.5);
  w[0] = 0.0;
  w[10] = 0.0;
  CHECK_THROWS_AS(y_map(*grid, w), std::runtime_error);
}

}  // TEST_SUITE
