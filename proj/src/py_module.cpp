#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "prandtl/barrier.hpp"
#include "prandtl/diagnostics.hpp"
#include "prandtl/initial_data.hpp"
#include "prandtl/pipeline.hpp"

namespace py = pybind11;
using namespace prandtl;

namespace {

InitialData data_from_kind(const BlasiusProfile& p, const std::string& kind,
                           double x0, double amplitude, double width,
                           const std::string& table) {
  if (kind == "blasius-shift") return blasius_shift_data(p, x0);
  if (kind == "gaussian-concave") return gaussian_concave_data(amplitude, width);
  if (kind == "table") return table_data(table);
  throw std::invalid_argument("unknown initial data kind: " + kind);
}

Quantity quantity_from(const std::string& name) {
  for (Quantity q : {Quantity::Phi, Quantity::DxPhi, Quantity::DpsiPhi,
                     Quantity::D2psiPhi, Quantity::DpsixW, Quantity::D2xW})
    if (quantity_name(q) == name) return q;
  throw std::invalid_argument("unknown quantity: " + name);
}

}  // namespace

PYBIND11_MODULE(_prandtl, m) {
  m.doc() = "Steady Prandtl system in Von Mises variables: Blasius profile, "
            "degenerate parabolic march, decay diagnostics, barrier checks";

  py::class_<BlasiusProfile>(m, "BlasiusProfile")
      .def_readonly("b0", &BlasiusProfile::b0)
      .def_readonly("beta_bar", &BlasiusProfile::beta_bar)
      .def_readonly("c1_fit", &BlasiusProfile::c1_fit)
      .def_readonly("c2_fit", &BlasiusProfile::c2_fit)
      .def_readonly("zeta_max", &BlasiusProfile::zeta_max)
      .def_readonly("tol", &BlasiusProfile::tol)
      .def_readonly("zeta", &BlasiusProfile::zeta)
      .def_readonly("f", &BlasiusProfile::f)
      .def_readonly("fp", &BlasiusProfile::fp)
      .def_readonly("fpp", &BlasiusProfile::fpp)
      .def(
          "eval",
          [](const BlasiusProfile& p, double zeta) {
            const BlasiusValues v = eval_blasius(p, zeta);
            return py::make_tuple(v.f, v.fp, v.fpp, v.fppp);
          },
          py::arg("zeta"))
      .def("invert_f",
           [](const BlasiusProfile& p, double h) { return invert_f(p, h); },
           py::arg("h"))
      .def("origin_derivatives",
           [](const BlasiusProfile& p) {
             const OriginDerivatives d = check_origin_derivatives(p);
             return py::make_tuple(d.f3, d.f4, d.f5);
           })
      .def("__repr__", [](const BlasiusProfile& p) {
        return "<BlasiusProfile b0=" + format_double(p.b0) + ">";
      });

  m.def("solve_blasius", &solve_blasius, py::arg("zeta_max") = 12.0,
        py::arg("tol") = 1e-10);

  py::class_<PsiGrid, std::shared_ptr<PsiGrid>>(m, "PsiGrid")
      .def_static(
          "graded",
          [](double psi_max, std::size_t n_cells, double gamma) {
            return std::make_shared<PsiGrid>(
                PsiGrid::graded(psi_max, n_cells, gamma));
          },
          py::arg("psi_max"), py::arg("n_cells"), py::arg("gamma") = 2.0)
      .def_readonly("nodes", &PsiGrid::nodes)
      .def_readonly("psi_max", &PsiGrid::psi_max)
      .def_readonly("grading", &PsiGrid::grading);

  py::class_<WField>(m, "WField")
      .def_readonly("x", &WField::x)
      .def_readonly("values", &WField::values)
      .def_property_readonly(
          "psi", [](const WField& w) { return w.grid->nodes; })
      .def("wall_slope", &WField::wall_slope);

  m.def(
      "wbar",
      [](const BlasiusProfile& p, double x, double psi) {
        const WbarValues v = wbar(p, x, psi);
        return py::make_tuple(v.w, v.dpsi, v.dx);
      },
      py::arg("profile"), py::arg("x"), py::arg("psi"));
  m.def(
      "y_of_psi",
      [](const WField& w, double psi) {
        return y_of_psi(*w.grid, w.values, psi);
      },
      py::arg("w"), py::arg("psi"));
  m.def(
      "similarity_coords",
      [](const BlasiusProfile& p, double x, double psi) {
        const SimilarityPoint s = similarity_coords(p, x, psi);
        return py::dict(py::arg("x") = s.x, py::arg("psi") = s.psi,
                        py::arg("h") = s.h, py::arg("zeta") = s.zeta,
                        py::arg("y_bar") = s.y_bar);
      },
      py::arg("profile"), py::arg("x"), py::arg("psi"));

  py::class_<InitialData>(m, "InitialData")
      .def_readonly("name", &InitialData::name)
      .def_readonly("slope0", &InitialData::slope0)
      .def_readonly("concave", &InitialData::concave)
      .def("u", [](const InitialData& d, double y) { return d.u(y); });

  m.def("blasius_shift_data", &blasius_shift_data, py::arg("profile"),
        py::arg("x0"));
  m.def("gaussian_concave_data", &gaussian_concave_data, py::arg("amplitude"),
        py::arg("width"));
  m.def(
      "validate_initial_data",
      [](const InitialData& d, const BlasiusProfile& p) {
        const AdmissibilityReport r = validate_initial_data(d, p);
        py::list conditions;
        for (const auto& c : r.conditions)
          conditions.append(py::dict(py::arg("name") = c.name,
                                     py::arg("pass") = c.pass,
                                     py::arg("gating") = c.gating,
                                     py::arg("detail") = c.detail));
        return py::dict(py::arg("conditions") = conditions,
                        py::arg("measured_c5") = r.measured_c5,
                        py::arg("measured_c7") = r.measured_c7,
                        py::arg("concave") = r.concave,
                        py::arg("inflow_pass") = r.inflow_pass,
                        py::arg("all_gating_pass") = r.all_gating_pass);
      },
      py::arg("data"), py::arg("profile"));
  m.def(
      "w0_from_u0",
      [](const InitialData& d, std::shared_ptr<PsiGrid> grid) {
        return w0_from_u0(d, grid);
      },
      py::arg("data"), py::arg("grid"));

  py::enum_<Scheme>(m, "Scheme")
      .value("implicit_frozen", Scheme::ImplicitFrozen)
      .value("crank_nicolson_frozen", Scheme::CrankNicolsonFrozen);

  py::class_<MarchConfig>(m, "MarchConfig")
      .def(py::init<>())
      .def_readwrite("x_end", &MarchConfig::x_end)
      .def_readwrite("dx0", &MarchConfig::dx0)
      .def_readwrite("n_cells", &MarchConfig::n_cells)
      .def_readwrite("grading", &MarchConfig::grading)
      .def_readwrite("psi_max_factor", &MarchConfig::psi_max_factor)
      .def_readwrite("psi_max", &MarchConfig::psi_max)
      .def_readwrite("w_floor_coeff", &MarchConfig::w_floor_coeff)
      .def_readwrite("picard_iters", &MarchConfig::picard_iters)
      .def_readwrite("scheme", &MarchConfig::scheme)
      .def_readwrite("checkpoint_ratio", &MarchConfig::checkpoint_ratio)
      .def_readwrite("assert_concavity", &MarchConfig::assert_concavity)
      .def("make_grid", [](const MarchConfig& c) {
        return std::const_pointer_cast<PsiGrid>(c.make_grid());
      });

  py::class_<CheckpointAudit>(m, "CheckpointAudit")
      .def_readonly("x", &CheckpointAudit::x)
      .def_readonly("c_min", &CheckpointAudit::c_min)
      .def_readonly("c_max", &CheckpointAudit::c_max)
      .def_readonly("max_dxw", &CheckpointAudit::max_dxw)
      .def_readonly("failures", &CheckpointAudit::failures);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("checkpoints", &Trajectory::checkpoints)
      .def_readonly("audits", &Trajectory::audits)
      .def("__len__", &Trajectory::size);

  m.def(
      "march",
      [](const MarchConfig& cfg, const WField& w0, const BlasiusProfile& p) {
        return march(cfg, w0, p);
      },
      py::arg("config"), py::arg("w0"), py::arg("profile"));
  m.def("step", &step, py::arg("w"), py::arg("dx"), py::arg("config"));
  m.def("wbar_field",
        [](const BlasiusProfile& p, double x, std::shared_ptr<PsiGrid> g) {
          return wbar_field(p, x, g);
        });
  m.def("sup_error_vs_wbar", &sup_error_vs_wbar, py::arg("w"), py::arg("profile"));

  m.def("phi", &phi, py::arg("w"), py::arg("profile"));
  m.def("damping_A", &damping_A, py::arg("w"), py::arg("profile"));
  m.def(
      "sup_norm_decay",
      [](const Trajectory& t, const BlasiusProfile& p, const std::string& q,
         bool with_log, double x_lo) {
        const DecayFit f = sup_norm_decay(t, p, quantity_from(q), with_log, x_lo);
        return py::dict(py::arg("exponent") = f.exponent,
                        py::arg("amplitude") = f.amplitude,
                        py::arg("rms") = f.rms,
                        py::arg("window") = py::make_tuple(f.x_lo, f.x_hi),
                        py::arg("points") = f.points);
      },
      py::arg("trajectory"), py::arg("profile"), py::arg("quantity") = "phi",
      py::arg("with_log") = false, py::arg("x_lo") = 10.0);
  m.def(
      "gaussian_tail",
      [](const WField& w, const BlasiusProfile& p) {
        const TailFit f = gaussian_tail(w, phi(w, p));
        return py::dict(py::arg("c") = f.c, py::arg("rms") = f.rms,
                        py::arg("points") = f.points);
      },
      py::arg("w"), py::arg("profile"));
  m.def(
      "comparison_ratio",
      [](const Trajectory& t, const BlasiusProfile& p) {
        py::list out;
        for (const auto& c : comparison_ratio(t, p))
          out.append(py::make_tuple(c.x, c.c_min, c.c_max));
        return out;
      },
      py::arg("trajectory"), py::arg("profile"));

  m.def(
      "certify_barrier",
      [](const std::string& kind, const BlasiusProfile& p,
         const std::map<std::string, double>& constants, double x, double h_lo,
         double h_hi, double bracket_lo, double bracket_hi) {
        const BarrierSpec spec = build_barrier(barrier_kind_from(kind), p,
                                               constants);
        CoefficientSource src;
        src.bracket_lo = bracket_lo;
        src.bracket_hi = bracket_hi;
        const ResidualReport r = residual_check(spec, p, src, x, h_lo, h_hi);
        py::list ridges;
        for (const RidgeReport& rr : ridge_verify(spec, p, x))
          ridges.append(py::dict(py::arg("h") = rr.h,
                                 py::arg("left") = rr.left_slope,
                                 py::arg("right") = rr.right_slope,
                                 py::arg("ok") = rr.ok));
        return py::dict(py::arg("min_residual") = r.min_residual,
                        py::arg("argmin_h") = r.argmin_h,
                        py::arg("ridges") = ridges);
      },
      py::arg("kind"), py::arg("profile"), py::arg("constants"), py::arg("x"),
      py::arg("h_lo"), py::arg("h_hi"), py::arg("bracket_lo") = 0.9,
      py::arg("bracket_hi") = 1.1);

  m.def(
      "run_pipeline",
      [](const std::string& config_text, const std::string& out_dir) {
        RunConfig cfg = parse_config_text(config_text, "<python>");
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        const PipelineResult r = run_pipeline(cfg);
        return py::make_tuple(r.exit_code, r.summary_path);
      },
      py::arg("config_text"), py::arg("out_dir") = "");
}
