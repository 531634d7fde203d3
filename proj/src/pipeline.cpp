#include "prandtl/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>

#include "prandtl/barrier.hpp"
#include "prandtl/diagnostics.hpp"
#include "prandtl/initial_data.hpp"
#include "prandtl/report.hpp"

namespace prandtl {

namespace {

using nlohmann::ordered_json;

struct Context {
  RunConfig cfg;
  RunReport report;
  std::optional<BlasiusProfile> profile;
  std::optional<InitialData> data;
  std::optional<Trajectory> traj;
  std::optional<Trajectory> companion;  // Blasius-initialized, same schedule

  explicit Context(const RunConfig& c) : cfg(c), report(c.out_dir) {}
};

ordered_json decay_fit_json(const DecayFit& f) {
  return {{"exponent", f.exponent}, {"amplitude", f.amplitude},
          {"rms", f.rms},           {"with_log", f.with_log},
          {"window", {f.x_lo, f.x_hi}},
          {"points", f.points}};
}

void stage_blasius(Context& ctx) {
  ctx.profile = solve_blasius(ctx.cfg.zeta_max, ctx.cfg.blasius_tol);
  const BlasiusProfile& p = *ctx.profile;

  const auto violations = audit_profile(p);
  ctx.report.audit("blasius profile invariants", violations.empty(),
                   violations.empty() ? "" : violations.front());
  ctx.report.audit("blasius b0 stability",
                   p.b0_halving_delta <= p.tol,
                   "delta = " + format_double(p.b0_halving_delta));

  write_profile_csv(p, ctx.report.path("profile.csv"));
  write_profile_json(p, ctx.report.path("profile.json"));
  ctx.report.note_output("profile.csv");
  ctx.report.note_output("profile.json");

  const OriginDerivatives od = check_origin_derivatives(p);
  const BracketingThreshold bt = bracketing_threshold(p);
  const RatioBounds wh = wh_ratio_bounds(p, 1.0);
  ctx.report.summary()["profile"] = {
      {"b0", p.b0},
      {"beta_bar", p.beta_bar},
      {"c1_fit", p.c1_fit},
      {"c2_fit", p.c2_fit},
      {"tail_fit_rms", p.tail_fit_rms},
      {"b0_halving_delta", p.b0_halving_delta},
      {"origin_derivatives", {od.f3, od.f4, od.f5}},
      {"bracketing_threshold", {{"zeta", bt.zeta}, {"h", bt.h}}},
      {"wh_ratio", {{"lo", wh.lo}, {"hi", wh.hi}}},
      {"dxwbar_monotone_h_limit", dxwbar_monotone_h_limit(p)},
      {"ode_residual_integral_route", ode_residual_integral_route(p)}};
}

InitialData make_data(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  if (cfg.data_kind == "blasius-shift")
    return blasius_shift_data(*ctx.profile, cfg.x0);
  if (cfg.data_kind == "gaussian-concave")
    return gaussian_concave_data(cfg.amplitude, cfg.width);
  return table_data(cfg.table_path);
}

void stage_initial_data(Context& ctx) {
  ctx.data = make_data(ctx);
  const AdmissibilityReport rep = validate_initial_data(*ctx.data, *ctx.profile);

  ordered_json conds = ordered_json::array();
  for (const auto& c : rep.conditions) {
    conds.push_back({{"name", c.name},
                     {"pass", c.pass},
                     {"gating", c.gating},
                     {"detail", c.detail}});
    if (c.gating)
      ctx.report.audit("admissibility: " + c.name, c.pass, c.detail);
  }
  if (ctx.cfg.concavity_mode == "on")
    ctx.report.audit("admissibility: concavity required", rep.concave,
                     "screen concave = " + std::string(rep.concave ? "yes" : "no"));
  ctx.report.summary()["initial_data"] = {
      {"name", ctx.data->name},
      {"conditions", conds},
      {"measured_c5", rep.measured_c5},
      {"measured_c7", rep.measured_c7},
      {"c1_reference", rep.c1_reference},
      {"concave", rep.concave}};

  // The marched concavity assertions follow the screen unless forced.
  bool assert_concave = false;
  if (ctx.cfg.concavity_mode == "on")
    assert_concave = true;
  else if (ctx.cfg.concavity_mode == "auto")
    assert_concave = rep.concave && ctx.data->concave;
  ctx.cfg.march.assert_concavity = assert_concave;
}

void stage_march(Context& ctx, bool dump_checkpoints) {
  auto grid = ctx.cfg.march.make_grid();
  WField w0 = w0_from_u0(*ctx.data, grid);
  ctx.traj = march(ctx.cfg.march, std::move(w0), *ctx.profile);

  std::size_t failures = 0;
  for (const auto& a : ctx.traj->audits) failures += a.failures.size();
  std::string first;
  for (const auto& a : ctx.traj->audits)
    if (!a.failures.empty()) {
      first = "x = " + format_double(a.x) + ": " + a.failures.front();
      break;
    }
  ctx.report.audit("march checkpoint invariants", failures == 0, first);

  ordered_json manifest;
  manifest["config"] = config_echo(ctx.cfg);
  auto xs = ordered_json::array();
  auto files = ordered_json::array();
  auto audits = ordered_json::array();
  for (std::size_t k = 0; k < ctx.traj->size(); ++k) {
    const WField& w = ctx.traj->checkpoints[k];
    xs.push_back(w.x);
    if (dump_checkpoints) {
      char name[40];
      std::snprintf(name, sizeof(name), "checkpoint_%03zu.csv", k);
      write_csv(ctx.report.path(name), "psi,w", {w.grid->nodes, w.values});
      ctx.report.note_output(name);
      files.push_back(name);
    }
    const CheckpointAudit& a = ctx.traj->audits[k];
    audits.push_back({{"x", a.x},
                      {"c_min", a.c_min},
                      {"c_max", a.c_max},
                      {"max_dxw", a.max_dxw},
                      {"far_value_gap", a.far_value_gap},
                      {"far_curvature", a.far_curvature},
                      {"failures", a.failures}});
  }
  manifest["x"] = xs;
  manifest["files"] = files;
  manifest["initial_ratio"] = {ctx.traj->initial_ratio_min,
                               ctx.traj->initial_ratio_max};
  manifest["audits"] = audits;

  // Near-wall behavior of dx w: |dx w| ~ psi^beta with an unspecified
  // exponent; the empirical value is logged, never asserted.
  {
    const WField& w = ctx.traj->checkpoints[ctx.traj->size() / 2];
    std::vector<double> lp, lv;
    for (std::size_t j = 1; j < 40 && j + 1 < w.grid->n(); ++j) {
      if (w.dxw.empty() || std::abs(w.dxw[j]) < 1e-300) continue;
      lp.push_back(std::log(w.grid->nodes[j]));
      lv.push_back(std::log(std::abs(w.dxw[j])));
    }
    if (lp.size() >= 10) {
      const LinearFit f = fit_line(lp, lv);
      manifest["near_wall_dxw_exponent"] = f.coeff[1];
      ctx.report.summary()["near_wall_dxw_exponent"] = f.coeff[1];
    }
  }
  {
    std::ofstream out(ctx.report.path("manifest.json"));
    out << manifest.dump(2) << '\n';
  }
  ctx.report.note_output("manifest.json");
}

void make_companion(Context& ctx) {
  if (ctx.companion) return;
  auto grid = ctx.traj->checkpoints.front().grid;
  ctx.companion =
      march(ctx.cfg.march, wbar_field(*ctx.profile, 0.0, grid), *ctx.profile);
}

double companion_error_at(const Context& ctx, std::size_t k) {
  const Trajectory& c = *ctx.companion;
  const std::size_t kk = std::min(k, c.size() - 1);
  return std::max(sup_error_vs_wbar(c.checkpoints[kk], *ctx.profile), 1e-12);
}

void stage_fit(Context& ctx) {
  const BlasiusProfile& p = *ctx.profile;
  const Trajectory& t = *ctx.traj;
  make_companion(ctx);

  ordered_json fits = ordered_json::object();
  std::vector<Quantity> quantities;
  for (Quantity q : {Quantity::Phi, Quantity::DxPhi, Quantity::DpsiPhi,
                     Quantity::D2psiPhi, Quantity::DpsixW, Quantity::D2xW}) {
    if (ctx.cfg.quantities.empty()) {
      quantities.push_back(q);
      continue;
    }
    for (const std::string& name : ctx.cfg.quantities)
      if (name == quantity_name(q)) {
        quantities.push_back(q);
        break;
      }
  }
  for (Quantity q : quantities) {
    const SupSeries s = quantity_series(t, p, q);
    const std::string name = quantity_name(q);
    try {
      const DecayFit plain = fit_decay(s, false, ctx.cfg.fit_x_lo);
      fits[name] = decay_fit_json(plain);
      if (q == Quantity::Phi) {
        const DecayFit logged = fit_decay(s, true, ctx.cfg.fit_x_lo);
        fits["phi_with_log"] = decay_fit_json(logged);
        fits["phi_model_preference"] =
            logged.rms < plain.rms ? "with_log" : "pure_power";
      }
      std::vector<double> model(s.x.size());
      for (std::size_t k = 0; k < s.x.size(); ++k)
        model[k] = plain.amplitude * std::pow(s.x[k] + 1.0, -plain.exponent);
      write_csv(ctx.report.path("fit_" + name + ".csv"), "x,sup,model",
                {s.x, s.sup, model});
      ctx.report.note_output("fit_" + name + ".csv");
    } catch (const std::exception& e) {
      fits[name] = {{"error", e.what()}};
    }
  }

  // Gaussian tails of phi per checkpoint.
  {
    std::vector<double> xs, cs, rmss;
    for (std::size_t k = 0; k < t.size(); ++k) {
      const WField& w = t.checkpoints[k];
      if (w.x < 10.0) continue;
      try {
        const TailFit f = gaussian_tail(w, phi(w, p));
        xs.push_back(w.x);
        cs.push_back(f.c);
        rmss.push_back(f.rms);
      } catch (const std::exception&) {
      }
    }
    write_csv(ctx.report.path("tail_phi.csv"), "x,c,rms", {xs, cs, rmss});
    ctx.report.note_output("tail_phi.csv");
    double worst_step = 0.0;
    for (std::size_t i = 0; i + 1 < cs.size(); ++i)
      worst_step = std::max(worst_step, std::abs(cs[i + 1] / cs[i] - 1.0));
    fits["tail_phi"] = {{"stations", xs.size()},
                        {"c_first", cs.empty() ? 0.0 : cs.front()},
                        {"c_last", cs.empty() ? 0.0 : cs.back()},
                        {"max_consecutive_change", worst_step}};
  }

  // Comparison bracket series.
  {
    const auto series = comparison_ratio(t, p);
    std::vector<double> xs, lo, hi;
    for (const auto& c : series) {
      xs.push_back(c.x);
      lo.push_back(c.c_min);
      hi.push_back(c.c_max);
    }
    write_csv(ctx.report.path("comparison_ratio.csv"), "x,c_min,c_max",
              {xs, lo, hi});
    ctx.report.note_output("comparison_ratio.csv");
  }

  {
    const DpsiComparisonReport rep = dpsi_w_comparison(t, p, 2.0);
    fits["dpsi_w_comparison"] = {
        {"h1", 2.0},
        {"x1", rep.x1 ? ordered_json(*rep.x1) : ordered_json("not reached")}};
  }

  // Euler-coordinate series.
  {
    std::vector<double> xs, du_norm, d2y_min, d2y_max, dxu_norm, dxyu_norm;
    for (std::size_t k = 1; k < t.size(); ++k) {
      const WField& w = t.checkpoints[k];
      if (w.x < ctx.cfg.fit_x_lo) continue;
      const EulerField e = euler_reconstruct(t, p, k);
      double sup_du = 0.0, d2_min = 0.0, d2_max = -1e300, sup_dxu = 0.0,
             sup_dxyu = 0.0;
      for (std::size_t i = 0; i < e.y.size(); ++i) {
        sup_du = std::max(sup_du, std::abs(e.du[i]));
        d2_min = std::min(d2_min, e.d2y_u[i]);
        d2_max = std::max(d2_max, e.d2y_u[i]);
        sup_dxu = std::max(sup_dxu, std::abs(e.dx_u[i]));
        sup_dxyu = std::max(sup_dxyu, std::abs(e.dxy_u[i]));
      }
      const double xp1 = w.x + 1.0;
      xs.push_back(w.x);
      du_norm.push_back(sup_du * std::sqrt(xp1) / std::log(w.x + std::exp(1.0)));
      d2y_min.push_back(d2_min * xp1);
      d2y_max.push_back(d2_max);
      dxu_norm.push_back(sup_dxu * xp1);
      dxyu_norm.push_back(sup_dxyu * std::pow(xp1, 0.75));
    }
    write_csv(ctx.report.path("euler_series.csv"),
              "x,du_sqrt_over_log,d2yu_min_scaled,d2yu_max,dxu_scaled,dxyu_scaled",
              {xs, du_norm, d2y_min, d2y_max, dxu_norm, dxyu_norm});
    ctx.report.note_output("euler_series.csv");
  }

  // Height-discrepancy envelope: fitted at the first checkpoint past x = 1,
  // asserted on the rest.
  {
    std::size_t k_fit = t.size();
    for (std::size_t k = 0; k < t.size(); ++k)
      if (t.checkpoints[k].x >= 1.0) {
        k_fit = k;
        break;
      }
    if (k_fit < t.size()) {
      const YEnvelope env = fit_y_envelope(t.checkpoints[k_fit], p);
      double worst = -1e300;
      double worst_x = 0.0;
      for (std::size_t k = k_fit + 1; k < t.size(); ++k) {
        const double slack = y_envelope_slack(t.checkpoints[k], p, env);
        if (slack > worst) {
          worst = slack;
          worst_x = t.checkpoints[k].x;
        }
      }
      const double scale = env.a + env.b + env.d + 1e-12;
      ctx.report.audit("y-discrepancy envelope dominates", worst <= 0.05 * scale,
                       "max slack " + format_double(worst) + " at x = " +
                           format_double(worst_x));
      fits["y_envelope"] = {{"a", env.a},
                            {"b", env.b},
                            {"d", env.d},
                            {"fit_x", t.checkpoints[k_fit].x},
                            {"max_slack", worst}};
    }
  }

  // Perturbation-equation residual against the measured scheme error.
  {
    double worst_ratio = 0.0, worst_x = 0.0;
    std::vector<double> xs, rs, es;
    for (std::size_t k = 1; k < t.size(); ++k) {
      const double r = pde_residual_scheme_route(t.checkpoints[k], p);
      const double e = companion_error_at(ctx, k);
      xs.push_back(t.checkpoints[k].x);
      rs.push_back(r);
      es.push_back(e);
      if (r / e > worst_ratio) {
        worst_ratio = r / e;
        worst_x = t.checkpoints[k].x;
      }
    }
    write_csv(ctx.report.path("pde_residual.csv"), "x,residual,scheme_error",
              {xs, rs, es});
    ctx.report.note_output("pde_residual.csv");
    ctx.report.audit("perturbation-equation residual <= 10x scheme error",
                     worst_ratio <= 10.0,
                     "worst ratio " + format_double(worst_ratio) + " at x = " +
                         format_double(worst_x));
    fits["pde_residual_worst_ratio"] = worst_ratio;
  }

  // Closed-form difference-field oracle for the shifted family.
  if (ctx.cfg.data_kind == "blasius-shift") {
    Trajectory synth = synthetic_shift_trajectory(ctx.cfg.march, p, ctx.cfg.x0);
    const SupSeries s = quantity_series(synth, p, Quantity::Phi);
    try {
      fits["phi_oracle_closed_form"] = decay_fit_json(fit_decay(s, false, 10.0));
    } catch (const std::exception& e) {
      fits["phi_oracle_closed_form"] = {{"error", e.what()}};
    }
  }

  ctx.report.summary()["fits"] = fits;
}

void stage_barrier(Context& ctx) {
  const BlasiusProfile& p = *ctx.profile;
  double c_lo = 0.7, c_hi = 1.4;  // standalone default bracket
  if (ctx.traj) {
    c_lo = 1e300;
    c_hi = -1e300;
    for (const auto& a : ctx.traj->audits) {
      c_lo = std::min(c_lo, a.c_min);
      c_hi = std::max(c_hi, a.c_max);
    }
  }
  const double lambda0 =
      damping_bounds(p, invert_f(p, 1.0), c_lo, c_hi).lambda_k0;
  const double alpha_small = 0.5 * lambda0;
  const double eps_dxphi = 0.5 * alpha_small;

  ordered_json certificates = ordered_json::array();

  auto nearest_field = [&](double x) -> const WField* {
    if (!ctx.traj) return nullptr;
    const WField* best = nullptr;
    double best_gap = 1e300;
    for (const auto& w : ctx.traj->checkpoints) {
      const double gap = std::abs(std::log((w.x + 1.0) / (x + 1.0)));
      if (gap < best_gap) {
        best_gap = gap;
        best = &w;
      }
    }
    return best;
  };

  // A residual region is certified in bracket mode (any field obeying the
  // comparison sandwich) or in field mode only. The latter is for the pieces
  // whose positivity rides on the measured decay of the perturbation; a
  // fixed bracket cannot carry them to arbitrarily large x. The d2xw
  // barriers are supersolutions of a different operator altogether; only
  // their structure (continuity, ridges) is gated.
  struct Region {
    double lo, hi;
    bool field_only;
  };
  auto certify_regions = [&](const BarrierSpec& spec,
                             const std::vector<Region>& regions,
                             bool gate_residual) {
    ordered_json entry;
    entry["kind"] = barrier_kind_name(spec.kind);
    entry["constants"] = spec.constants;
    ordered_json residuals = ordered_json::array();
    ordered_json ridges = ordered_json::array();
    bool all_positive = true;
    bool ridges_ok = true;
    for (double x : ctx.cfg.stations) {
      for (const Region& region : regions) {
        CoefficientSource standalone;
        standalone.bracket_lo = std::sqrt(c_lo);
        standalone.bracket_hi = std::sqrt(c_hi);
        const ResidualReport r =
            residual_check(spec, p, standalone, x, region.lo, region.hi, 2048);
        residuals.push_back({{"x", x},
                             {"region", {region.lo, region.hi}},
                             {"mode", "bracket"},
                             {"min_residual", r.min_residual},
                             {"argmin_h", r.argmin_h}});
        if (!region.field_only)
          all_positive = all_positive && r.min_residual > 0.0;
        if (const WField* w = nearest_field(x)) {
          CoefficientSource primary;
          primary.field = w;
          const ResidualReport rf =
              residual_check(spec, p, primary, w->x, region.lo, region.hi, 2048);
          residuals.push_back({{"x", w->x},
                               {"region", {region.lo, region.hi}},
                               {"mode", "field"},
                               {"min_residual", rf.min_residual},
                               {"argmin_h", rf.argmin_h}});
          all_positive = all_positive && rf.min_residual > 0.0;
        }
      }
      for (const RidgeReport& rr : ridge_verify(spec, p, x)) {
        ridges.push_back({{"x", x},
                          {"h", rr.h},
                          {"left_slope", rr.left_slope},
                          {"right_slope", rr.right_slope},
                          {"ok", rr.ok}});
        ridges_ok = ridges_ok && rr.ok;
      }
    }
    entry["residuals"] = residuals;
    entry["ridges"] = ridges;
    entry["continuity_gaps"] = continuity_gaps(spec, p, 1.0);
    entry["grid_density"] = 2048;
    const bool pass = ridges_ok && (all_positive || !gate_residual);
    ctx.report.audit(
        "barrier " + barrier_kind_name(spec.kind) + " certificate", pass,
        ridges_ok ? (pass ? "" : "nonpositive residual")
                  : "ridge slope order violated");
    return entry;
  };

  // exp-tail (no ridges, single region).
  {
    BarrierSpec spec =
        build_barrier(BarrierKind::ExpTail, p, {{"eps", ctx.cfg.barrier_eps}});
    ordered_json entry = certify_regions(spec, {{1e-3, 8.0, false}}, true);
    if (ctx.traj) {
      const DominanceReport dom = dominance(spec, p, *ctx.traj, Quantity::Phi);
      ordered_json series = ordered_json::array();
      for (const auto& pt : dom.series)
        series.push_back({{"x", pt.x}, {"c_star", pt.c_star}});
      entry["dominance_phi"] = {{"series", series},
                                {"possible", dom.possible},
                                {"pass", dom.pass},
                                {"onset_x", dom.onset_x}};
    }
    certificates.push_back(entry);
  }

  // algebraic: h0 then M by doubling, lambda from the damping floor at h0.
  {
    const double h0 = doubling_search(
        [&](double cand) {
          BarrierSpec trial = build_barrier(
              BarrierKind::Algebraic, p,
              {{"lambda", 0.5}, {"M", std::max(2.0, 2.0 / cand)}, {"h0", cand}});
          CoefficientSource src{nullptr, std::sqrt(c_lo), std::sqrt(c_hi)};
          return residual_check(trial, p, src, 10.0, cand, 4.0 * cand)
                     .min_residual > 0.0;
        },
        2.0, 8);
    const double lambda =
        std::min(0.5, 0.9 * damping_bounds(p, invert_f(p, h0), c_lo, c_hi)
                                .lambda_k0);
    const double M = doubling_search(
        [&](double cand) {
          BarrierSpec trial =
              build_barrier(BarrierKind::Algebraic, p,
                            {{"lambda", lambda}, {"M", cand}, {"h0", h0}});
          CoefficientSource src{nullptr, std::sqrt(c_lo), std::sqrt(c_hi)};
          return residual_check(trial, p, src, 10.0, 1e-6, 1.0 / cand)
                     .min_residual > 0.0;
        },
        2.0, 16);
    BarrierSpec spec = build_barrier(
        BarrierKind::Algebraic, p,
        {{"lambda", lambda}, {"M", std::max(M, 2.0)}, {"h0", h0}});
    const double m_seam = 1.0 / spec.constants["M"];
    certificates.push_back(certify_regions(
        spec,
        {{1e-6, m_seam, false}, {m_seam, h0, false}, {h0, 4.0 * h0, false}},
        true));
  }

  // sharp: N and B by doubling at the stations.
  {
    const double lambda = 0.25, alpha = 0.5;
    auto try_spec = [&](double N, double B) {
      return build_barrier(BarrierKind::Sharp, p,
                           {{"alpha", alpha},
                            {"N", N},
                            {"B", B},
                            {"lambda", lambda}});
    };
    const double N = doubling_search(
        [&](double cand) {
          BarrierSpec trial = try_spec(cand, 1.0);
          CoefficientSource src{nullptr, std::sqrt(c_lo), std::sqrt(c_hi)};
          for (double x : ctx.cfg.stations)
            if (residual_check(trial, p, src, x, 1e-6, 1.0 / cand)
                    .min_residual <= 0.0)
              return false;
          return true;
        },
        4.0, 12);
    const double B = doubling_search(
        [&](double cand) {
          BarrierSpec trial = try_spec(std::max(N, 4.0), cand);
          for (double x : ctx.cfg.stations) {
            const WField* w = nearest_field(x);
            CoefficientSource src{nullptr, std::sqrt(c_lo), std::sqrt(c_hi)};
            if (w) src.field = w;
            const double xx = w ? w->x : x;
            if (residual_check(trial, p, src, xx, 1.0 / std::max(N, 4.0), 8.0)
                    .min_residual <= 0.0)
              return false;
          }
          return true;
        },
        1.0, 24);
    BarrierSpec spec = try_spec(std::max(N, 4.0), std::max(B, 8.0));
    const double n_seam = 1.0 / spec.constants["N"];
    // The far piece rides on the measured decay of the perturbation
    // (the bracket alone cannot carry it to large x), so it gates in
    // field mode only.
    ordered_json entry = certify_regions(
        spec, {{1e-6, n_seam, false}, {n_seam, 8.0, true}}, true);
    if (ctx.traj) {
      make_companion(ctx);
      std::vector<double> floors(ctx.traj->size());
      for (std::size_t k = 0; k < floors.size(); ++k)
        floors[k] = companion_error_at(ctx, k);
      const DominanceReport dom =
          dominance(spec, p, *ctx.traj, Quantity::Phi, floors);
      ordered_json series = ordered_json::array();
      for (const auto& pt : dom.series)
        series.push_back({{"x", pt.x}, {"c_star", pt.c_star}});
      entry["dominance_phi"] = {{"series", series},
                                {"possible", dom.possible},
                                {"pass", dom.pass},
                                {"onset_x", dom.onset_x}};
      ctx.report.audit("barrier sharp dominance of phi", dom.pass && dom.possible,
                       "onset x = " + format_double(dom.onset_x));
    }
    certificates.push_back(entry);
  }

  // small-h barrier: the damping argument lives under the seam; past it the
  // proof quotes the algebraic decay directly, so only dominance is checked
  // there.
  {
    BarrierSpec spec = build_barrier(BarrierKind::SmallH, p,
                                     {{"alpha", alpha_small}, {"M", 4.0}});
    ordered_json entry = certify_regions(spec, {{1e-6, 0.25, false}}, true);
    if (ctx.traj) {
      const DominanceReport dom = dominance(spec, p, *ctx.traj, Quantity::Phi);
      ordered_json series = ordered_json::array();
      for (const auto& pt : dom.series)
        series.push_back({{"x", pt.x}, {"c_star", pt.c_star}});
      entry["dominance_phi"] = {{"series", series},
                                {"possible", dom.possible},
                                {"pass", dom.pass},
                                {"onset_x", dom.onset_x}};
    }
    certificates.push_back(entry);
  }

  // dx phi barrier (Prop 4.2 form): K by doubling on the marched field.
  {
    const double K = doubling_search(
        [&](double cand) {
          BarrierSpec trial = build_barrier(
              BarrierKind::DxPhi, p, {{"K", cand}, {"eps", eps_dxphi}});
          for (double x : ctx.cfg.stations) {
            const WField* w = nearest_field(x);
            CoefficientSource src{nullptr, std::sqrt(c_lo), std::sqrt(c_hi)};
            if (w) src.field = w;
            const double xx = w ? w->x : x;
            if (residual_check(trial, p, src, xx, 1e-3, 8.0).min_residual <=
                0.0)
              return false;
          }
          return true;
        },
        1.0, 24);
    BarrierSpec spec = build_barrier(
        BarrierKind::DxPhi, p, {{"K", std::max(K, 1.0)}, {"eps", eps_dxphi}});
    ordered_json entry = certify_regions(spec, {{1e-3, 8.0, true}}, true);
    if (ctx.traj) {
      make_companion(ctx);
      std::vector<double> floors(ctx.traj->size());
      for (std::size_t k = 0; k < floors.size(); ++k)
        floors[k] = companion_error_at(ctx, k);
      const DominanceReport dom =
          dominance(spec, p, *ctx.traj, Quantity::DxPhi, floors);
      ordered_json series = ordered_json::array();
      for (const auto& pt : dom.series)
        series.push_back({{"x", pt.x}, {"c_star", pt.c_star}});
      entry["dominance_dxphi"] = {{"series", series},
                                  {"possible", dom.possible},
                                  {"pass", dom.pass},
                                  {"onset_x", dom.onset_x}};
      ctx.report.audit("barrier dxphi dominance", dom.pass && dom.possible,
                       "onset x = " + format_double(dom.onset_x));
    }
    certificates.push_back(entry);
  }

  // cos-band and algebraic d2xw barriers: continuity and ridge certificates.
  {
    BarrierSpec spec = build_barrier(BarrierKind::D2xwCos, p,
                                     {{"h1", 12.0}, {"eps", 0.05}});
    certificates.push_back(certify_regions(spec, {}, false));
  }
  {
    BarrierSpec spec = build_barrier(
        BarrierKind::D2xwAlg, p,
        {{"alpha", 0.1}, {"h0", 0.25}, {"h1", 8.0}, {"eps", 0.05}});
    certificates.push_back(certify_regions(spec, {}, false));
  }

  ctx.report.summary()["barrier_certificates"] = certificates;
  {
    std::ofstream out(ctx.report.path("barrier_certificates.json"));
    out << certificates.dump(2) << '\n';
  }
  ctx.report.note_output("barrier_certificates.json");
}

void stage_verify(Context& ctx) {
  // Small-scale refinement check on top of the audits the other stages run.
  MarchConfig small = ctx.cfg.march;
  small.x_end = std::min(ctx.cfg.march.x_end, 10.0);
  small.n_cells = std::max<std::size_t>(96, ctx.cfg.march.n_cells / 8);
  small.dx0 = std::max(ctx.cfg.march.dx0, 1e-3);
  const ConvergenceReport rep = self_similarity_oracle(small, *ctx.profile);
  double min_order = 1e300;
  for (double o : rep.orders) min_order = std::min(min_order, o);
  ctx.report.audit("self-similarity refinement order >= 1",
                   rep.monotone && min_order >= 1.0,
                   "orders " + format_double(rep.orders[0]) + ", " +
                       format_double(rep.orders[1]));
  ordered_json levels = ordered_json::array();
  for (const auto& l : rep.levels)
    levels.push_back({{"n", l.n_cells}, {"dx0", l.dx0}, {"sup_error", l.sup_error}});
  ctx.report.summary()["self_similarity_oracle"] = levels;
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& cfg) {
  Context ctx(cfg);
  ctx.report.summary()["command"] = cfg.command;
  ctx.report.summary()["config"] = config_echo(cfg);

  const std::string& cmd = cfg.command;
  stage_blasius(ctx);
  if (cmd != "blasius") stage_initial_data(ctx);

  if (cmd == "march" || cmd == "fit" || cmd == "verify" || cmd == "all")
    stage_march(ctx, cmd == "march" || cmd == "all");
  if (cmd == "fit" || cmd == "all") stage_fit(ctx);
  if (cmd == "barrier" || cmd == "all") stage_barrier(ctx);
  if (cmd == "verify" || cmd == "all") stage_verify(ctx);

  ctx.report.write_audit_log();
  ctx.report.write_summary();

  PipelineResult result;
  result.summary_path = ctx.report.path("summary.json");
  result.exit_code = ctx.report.all_audits_pass() ? 0 : 1;
  return result;
}

}  // namespace prandtl
