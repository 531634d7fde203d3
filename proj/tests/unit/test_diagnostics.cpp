#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "prandtl/diagnostics.hpp"
#include "prandtl/initial_data.hpp"

using namespace prandtl;

namespace {

// Closed-form difference-field oracle: checkpoints of the offset family
// member against the reference, no marching involved.
const Trajectory& shift_oracle() {
  static const Trajectory t = [] {
    MarchConfig cfg;
    cfg.x_end = 1e4;
    cfg.n_cells = 512;
    cfg.psi_max_factor = 10.0;
    return synthetic_shift_trajectory(cfg, default_profile(), 2.0);
  }();
  return t;
}

const Trajectory& blasius_oracle() {
  static const Trajectory t = [] {
    MarchConfig cfg;
    cfg.x_end = 100.0;
    cfg.n_cells = 384;
    cfg.psi_max_factor = 10.0;
    return synthetic_shift_trajectory(cfg, default_profile(), 1.0);
  }();
  return t;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("perturbation vanishes exactly on the reference field") {
  const BlasiusProfile& p = default_profile();
  const WField& w = blasius_oracle().checkpoints[3];
  const std::vector<double> f = phi(w, p);
  CHECK(f[0] == 0.0);
  for (double v : f) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("perturbation is nonzero off the reference family") {
  const BlasiusProfile& p = default_profile();
  const WField& w = shift_oracle().checkpoints[2];
  const std::vector<double> f = phi(w, p);
  double sup = 0.0;
  for (double v : f) sup = std::max(sup, std::abs(v));
  CHECK(sup > 1e-2);  // orders of magnitude above any scheme error
}

TEST_CASE("damping coefficient: wall limit, positivity, scaled bounds") {
  const BlasiusProfile& p = default_profile();
  for (double x : {0.0, 3.0, 50.0}) {
    auto grid = blasius_oracle().checkpoints.front().grid;
    const WField w = wbar_field(p, x, grid);
    const std::vector<double> a = damping_A(w, p);
    const double root = std::sqrt(x + 1.0);
    for (std::size_t j = 0; j + 1 < a.size(); ++j) {
      CHECK(a[j] >= 0.0);
      // Strict positivity within the resolvable Gaussian range; beyond it
      // the profile curvature underflows by design.
      if (grid->nodes[j] / root <= 8.0) CHECK(a[j] > 0.0);
    }
    CHECK(a[0] == doctest::Approx(0.25 / (x + 1.0)).epsilon(1e-3));

    // Lemma-style bounds for (x+1) A on zeta <= 2 with the trivial bracket.
    const DampingBounds b = damping_bounds(p, 2.0, 1.0, 1.0);
    CHECK(b.lambda_k0 > 0.0);
    for (std::size_t j = 1; j + 1 < a.size(); ++j) {
      const double zeta = invert_f(p, grid->nodes[j] / root);
      if (zeta > 2.0) break;
      const double scaled = a[j] * (x + 1.0);
      CHECK(scaled >= b.lambda_k0 * (1.0 - 1e-6));
      CHECK(scaled <= b.upper * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("decay exponent of the closed-form difference field is one") {
  const DecayFit fit =
      sup_norm_decay(shift_oracle(), default_profile(), Quantity::Phi, false);
  CHECK(std::abs(fit.exponent - 1.0) <= 0.1);
  CHECK(fit.points >= 8);
}

TEST_CASE("derivative-route agreement on the closed-form field") {
  const BlasiusProfile& p = default_profile();
  const Trajectory& t = shift_oracle();
  const std::size_t k = t.size() / 2;
  const DerivativeFields d = derivative_fields(t, p, k);
  CHECK(d.has_xdiff);
  // Both dx-routes see the same smooth field; geometric-spacing differencing
  // carries a few-percent relative error.
  double sup_pde = 0.0;
  for (std::size_t j = 1; j + 1 < d.dxw_pde.size(); ++j)
    sup_pde = std::max(sup_pde, std::abs(d.dxw_pde[j]));
  CHECK(d.x_route_mismatch <= 0.05 * sup_pde);
}

TEST_CASE("gaussian tail constant tracks the profile tail") {
  const BlasiusProfile& p = default_profile();
  const Trajectory& t = shift_oracle();
  std::size_t k = 0;
  while (t.checkpoints[k].x < 100.0) ++k;
  const WField& w = t.checkpoints[k];
  const TailFit fit = gaussian_tail(w, phi(w, p));
  CHECK(fit.c > 0.0);
  CHECK(std::abs(fit.c - p.c1_fit) <= 0.2 * p.c1_fit);
  CHECK(fit.points >= 10);

  // Self-similar collapse keeps the constant stable between stations.
  const WField& w2 = t.checkpoints[k + 1];
  const TailFit fit2 = gaussian_tail(w2, phi(w2, p));
  CHECK(std::abs(fit2.c / fit.c - 1.0) <= 0.15);
}

TEST_CASE("tail fit preconditions") {
  const BlasiusProfile& p = default_profile();
  const WField& early = blasius_oracle().checkpoints.front();  // x = 0
  CHECK_THROWS_AS(gaussian_tail(early, phi(early, p)), std::invalid_argument);
}

TEST_CASE("comparison ratio is unity for the reference and brackets the shift") {
  const BlasiusProfile& p = default_profile();
  const auto trivial = comparison_ratio(blasius_oracle(), p);
  for (const auto& c : trivial) {
    // Interior nodes are exact; the wall entry is a one-sided slope with a
    // first-cell bias of order zeta_1^3.
    CHECK(c.c_min == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(c.c_max == doctest::Approx(1.0).epsilon(1e-3));
  }
  const auto shifted = comparison_ratio(shift_oracle(), p);
  const double lo0 = shifted.front().c_min, hi0 = shifted.front().c_max;
  for (const auto& c : shifted) {
    CHECK(c.c_min >= lo0 * 0.95 - 1e-12);
    CHECK(c.c_max <= hi0 * 1.05 + 1e-12);
  }
}

TEST_CASE("slope comparison settles into the [1/2, 3/2] band") {
  const BlasiusProfile& p = default_profile();
  const DpsiComparisonReport rep = dpsi_w_comparison(shift_oracle(), p, 2.0);
  REQUIRE(rep.x1.has_value());
  const DpsiComparisonReport trivial = dpsi_w_comparison(blasius_oracle(), p, 2.0);
  REQUIRE(trivial.x1.has_value());
  CHECK(*trivial.x1 == blasius_oracle().checkpoints.front().x);
}

TEST_CASE("euler reconstruction on the reference field") {
  const BlasiusProfile& p = default_profile();
  const Trajectory& t = blasius_oracle();
  const std::size_t k = t.size() / 2;
  const WField& w = t.checkpoints[k];
  const double x = w.x;
  const EulerField e = euler_reconstruct(t, p, k);

  double worst_du = 0.0, worst_dxu = 0.0, worst_d2y = 0.0;
  for (std::size_t i = 0; i + 1 < e.y.size(); ++i) {
    const double zeta = e.y[i] / std::sqrt(x + 1.0);
    const BlasiusValues v = eval_blasius(p, zeta);
    worst_du = std::max(worst_du, std::abs(e.du[i]));
    // dx ubar = -zeta f'' / (2 (x+1)); d2y ubar = f''' / (x+1).
    worst_dxu = std::max(
        worst_dxu, std::abs(e.dx_u[i] + 0.5 * zeta * v.fpp / (x + 1.0)));
    worst_d2y = std::max(worst_d2y, std::abs(e.d2y_u[i] - v.fppp / (x + 1.0)));
  }
  // The floors here are the height-map quadrature bias and the nonuniform
  // second-difference truncation at this resolution.
  CHECK(worst_du <= 1e-5);
  CHECK(worst_dxu <= 2e-2 / (x + 1.0));
  CHECK(worst_d2y <= 2e-4 / (x + 1.0));

  CHECK_THROWS_AS(
      euler_reconstruct(t, p, k, std::vector<double>{e.y_covered + 1.0}),
      std::runtime_error);
}

TEST_CASE("height discrepancy envelope") {
  const BlasiusProfile& p = default_profile();
  // Reference data: identical maps, empty envelope.
  {
    const WField& w = blasius_oracle().checkpoints[4];
    const YEnvelope env = fit_y_envelope(w, p);
    CHECK(env.a <= 1e-10);
    CHECK(env.d <= 1e-10);
  }
  // Offset data: fit early, dominate later.
  {
    const Trajectory& t = shift_oracle();
    std::size_t k_fit = 0;
    while (t.checkpoints[k_fit].x < 1.0) ++k_fit;
    const YEnvelope env = fit_y_envelope(t.checkpoints[k_fit], p);
    const double scale = env.a + env.b + env.d;
    CHECK(scale > 0.0);
    for (std::size_t k = k_fit + 1; k < t.size(); k += 3)
      CHECK(y_envelope_slack(t.checkpoints[k], p, env) <= 0.05 * scale);
  }
}

TEST_CASE("rescaled profiles collapse") {
  const BlasiusProfile& p = default_profile();
  const std::vector<double> d = collapse_distances(shift_oracle(), p, 10.0);
  REQUIRE(d.size() >= 10);
  CHECK(d.back() < d.front());
  // Trend, not strict monotonicity: compare decade maxima.
  const std::size_t third = d.size() / 3;
  double early = 0.0, late = 0.0;
  for (std::size_t i = 0; i < third; ++i) early = std::max(early, d[i]);
  for (std::size_t i = d.size() - third; i < d.size(); ++i)
    late = std::max(late, d[i]);
  CHECK(late < early);
}

TEST_CASE("rate relation between the psi-derivative and its neighbors") {
  const BlasiusProfile& p = default_profile();
  const Trajectory& t = shift_oracle();
  const DecayFit e_phi = sup_norm_decay(t, p, Quantity::Phi, false);
  const DecayFit e_dpsi = sup_norm_decay(t, p, Quantity::DpsiPhi, false);
  const DecayFit e_d2psi = sup_norm_decay(t, p, Quantity::D2psiPhi, false);
  CHECK(e_dpsi.exponent >=
        0.5 * (e_phi.exponent + e_d2psi.exponent) - 0.05);
}

TEST_CASE("decay fits refuse windows with too few stations") {
  SupSeries s;
  for (int k = 0; k < 5; ++k) {
    s.x.push_back(20.0 + k);
    s.sup.push_back(1.0 / (s.x.back() + 1.0));
  }
  CHECK_THROWS_AS(fit_decay(s, false, 10.0), std::runtime_error);
  // Floor contamination shrinks the window below the minimum as well.
  SupSeries floored;
  for (int k = 0; k < 20; ++k) {
    floored.x.push_back(std::pow(1.5, k) * 10.0);
    floored.sup.push_back(k < 4 ? 1e-2 : 1e-14);
  }
  CHECK_THROWS_AS(fit_decay(floored, false, 10.0), std::runtime_error);
}

TEST_CASE("onset search and late-growth guard") {
  SupSeries s;
  for (int k = 0; k < 60; ++k) {
    const double x = std::pow(1.2, k);
    s.x.push_back(x);
    // Transient bump then clean (x+1)^-1 decay.
    s.sup.push_back((k < 5 ? 3.0 : 1.0) / (x + 1.0));
  }
  const BoundednessCheck ok = bounded_after_onset(s, 1.0, 10.0);
  CHECK(ok.pass);
  CHECK(no_late_growth(s, 10.0));  // decay is fine, only late growth trips it
  SupSeries flat;
  for (int k = 0; k < 60; ++k) {
    flat.x.push_back(std::pow(1.2, k));
    flat.sup.push_back(1.0);
  }
  CHECK(no_late_growth(flat, 10.0));
  SupSeries growing = flat;
  for (int k = 0; k < 60; ++k) growing.sup[k] = std::pow(1.2, k * 0.25);
  CHECK_FALSE(bounded_after_onset(growing, 0.0, 10.0).pass);
}

}  // TEST_SUITE
