"""Python smoke tests for the compiled module."""

import math

import pytest

import prandtl_lab as pl


@pytest.fixture(scope="module")
def profile():
    return pl.solve_blasius(12.0, 1e-10)


def test_blasius_constants(profile):
    assert abs(profile.b0 - 0.332057) < 1e-4
    assert 1.6 < profile.beta_bar < 1.8
    assert abs(profile.c1_fit - 0.25) < 0.01
    f, fp, fpp, fppp = profile.eval(0.0)
    assert (f, fp, fppp) == (0.0, 0.0, 0.0)
    assert abs(fpp - profile.b0) < 1e-14


def test_inverse_round_trip(profile):
    h = profile.eval(2.0)[0]
    assert abs(profile.invert_f(h) - 2.0) < 1e-8
    f3, f4, f5 = profile.origin_derivatives()
    assert abs(f3) < 1e-6 and abs(f4) < 1e-5 and f5 < 0


def test_reference_field(profile):
    w, dpsi, dx = pl.wbar(profile, 3.0, 1.0)
    assert 0 < w < 1 and dpsi > 0 and dx < 0
    coords = pl.similarity_coords(profile, 3.0, 1.0)
    assert coords["h"] == pytest.approx(0.5)
    assert coords["y_bar"] == pytest.approx(2.0 * coords["zeta"])


def test_march_and_diagnostics(profile):
    cfg = pl.MarchConfig()
    cfg.x_end = 50.0
    cfg.n_cells = 256
    cfg.dx0 = 1e-3
    cfg.assert_concavity = True
    grid = cfg.make_grid()
    w0 = pl.w0_from_u0(pl.gaussian_concave_data(1.6, 1.2), grid)
    traj = pl.march(cfg, w0, profile)
    assert len(traj) > 10
    for audit in traj.audits:
        assert audit.failures == []
        assert audit.max_dxw <= 1e-8

    last = traj.checkpoints[-1]
    values = last.values
    assert values[0] == 0.0
    assert min(values) >= 0.0
    assert max(values) <= 1.0 + 1e-12
    assert values[-2] == pytest.approx(1.0, abs=1e-6)

    fit = pl.sup_norm_decay(traj, profile, "phi", False, 5.0)
    assert fit["exponent"] > 0.3

    tail = pl.gaussian_tail(last, profile)
    assert tail["c"] > 0

    ratios = pl.comparison_ratio(traj, profile)
    lo0, hi0 = ratios[0][1], ratios[0][2]
    for _, lo, hi in ratios:
        assert lo >= 0.95 * lo0 and hi <= 1.05 * hi0


def test_admissibility_screen(profile):
    report = pl.validate_initial_data(pl.gaussian_concave_data(1.6, 1.2), profile)
    assert report["all_gating_pass"]
    weak = pl.validate_initial_data(pl.gaussian_concave_data(1.0, 1.2), profile)
    assert not weak["concave"]


def test_barrier_certificate(profile):
    cert = pl.certify_barrier(
        "exp-tail", profile, {"eps": 0.05}, 10.0, 0.01, 8.0, 0.9, 1.0
    )
    assert cert["min_residual"] > 0
    assert cert["ridges"] == []

    sharp = pl.certify_barrier(
        "sharp",
        profile,
        {"alpha": 0.5, "N": 16.0, "B": 2.0, "lambda": 0.25},
        10.0,
        1e-6,
        1.0 / 16.0,
        0.98,
        1.02,
    )
    assert sharp["min_residual"] > 0
    assert len(sharp["ridges"]) == 1 and sharp["ridges"][0]["ok"]


def test_pipeline_blasius(tmp_path):
    code, summary = pl.run_pipeline(
        "[run]\ncommand = blasius\n", str(tmp_path / "out")
    )
    assert code == 0
    assert (tmp_path / "out" / "profile.csv").exists()
    assert (tmp_path / "out" / "summary.json").exists()
