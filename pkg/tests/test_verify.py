import json

import numpy as np
import pytest

import biconsurf as bc
from biconsurf.verify import FDScheme, fd_for_patch

from conftest import (
    analytic_patch,
    cylinder_patch,
    great_sphere_patch,
    plane_patch,
    sphere_patch,
)


def mid(patch):
    return 0.5 * (patch.u_range[0] + patch.u_range[1]), 0.5 * (
        patch.v_range[0] + patch.v_range[1]
    )


class TestClassicalFixtures:
    def test_plane(self):
        p = plane_patch()
        pg = bc.fundamental_forms(p, *mid(p))
        assert pg.f == pytest.approx(0.0, abs=1e-12)
        assert pg.K == pytest.approx(0.0, abs=1e-12)

    def test_cylinder_oriented_positive(self):
        p = cylinder_patch()
        pg = bc.fundamental_forms(p, *mid(p))
        assert pg.f == pytest.approx(1.0, abs=1e-9)
        assert pg.K == pytest.approx(0.0, abs=1e-9)

    def test_unit_sphere(self):
        p = sphere_patch()
        pg = bc.fundamental_forms(p, *mid(p))
        assert pg.f == pytest.approx(2.0, abs=1e-8)
        assert pg.K == pytest.approx(1.0, abs=1e-8)
        assert np.allclose(pg.metric, pg.metric.T)

    def test_great_sphere_is_minimal(self):
        p = great_sphere_patch()
        pg = bc.fundamental_forms(p, *mid(p))
        assert pg.f == pytest.approx(0.0, abs=1e-10)
        assert pg.K == pytest.approx(1.0, abs=1e-9)

    def test_cmc_biconservative_trivially(self):
        p = sphere_patch()
        pg = bc.point_geometry(p, *mid(p))
        assert bc.biconservative_residual(pg) < 1e-10

    def test_cmc_gates_eigen_checks(self):
        p = cylinder_patch()
        pg = bc.point_geometry(p, *mid(p))
        rk, ra2, reig = bc.curvature_identity_residuals(pg)
        assert np.isnan(reig)
        assert np.isnan(bc.x2f_residual(pg))

    def test_biharmonic_fixture_bitension_vanishes(self):
        p = great_sphere_patch()
        fd = FDScheme(inner_step=6e-4, outer_step=0.3)
        pg = bc.point_geometry(p, *mid(p), fd)
        assert abs(bc.normal_bitension_residual(pg)) <= 1e-10

    def test_normal_is_unit_and_orthogonal(self):
        p = sphere_patch()
        pg = bc.fundamental_forms(p, *mid(p))
        assert np.linalg.norm(pg.normal) == pytest.approx(1.0, abs=1e-12)


class TestFiniteDifferences:
    def test_order_two_without_richardson(self, r3_pipeline):
        _, patch, _ = r3_pipeline
        u, v = 3.0, 1.0
        f_exact = float(patch.reference["f"](np.array(u), v))

        def err(h):
            fd = FDScheme(inner_step=h, outer_step=0.05, richardson=False)
            return abs(bc.point_geometry(patch, u, v, fd).f - f_exact)

        ratio = err(4e-2) / err(2e-2)
        assert 3.0 < ratio < 5.5

    def test_richardson_beats_plain(self, r3_pipeline):
        _, patch, _ = r3_pipeline
        u, v = 3.0, 1.0
        f_exact = float(patch.reference["f"](np.array(u), v))
        plain = FDScheme(inner_step=2e-2, outer_step=0.05, richardson=False)
        rich = FDScheme(inner_step=2e-2, outer_step=0.05, richardson=True)
        e_plain = abs(bc.point_geometry(patch, u, v, plain).f - f_exact)
        e_rich = abs(bc.point_geometry(patch, u, v, rich).f - f_exact)
        assert e_rich < e_plain / 10

    def test_interior_margin_enforced(self, r3_pipeline):
        _, patch, _ = r3_pipeline
        fd = fd_for_patch(patch)
        with pytest.raises(bc.UsageError):
            bc.point_geometry(patch, patch.eval_u_domain[0], 1.0, fd)

    def test_degenerate_metric_detected(self):
        sick = analytic_patch(
            "fixture_degenerate", bc.R3,
            lambda u, v: np.stack([u, u, np.zeros_like(u)], -1),
            lambda u, v: np.stack([np.ones_like(u), np.ones_like(u), np.zeros_like(u)], -1),
            lambda u, v: np.stack([np.ones_like(u), np.ones_like(u), np.zeros_like(u)], -1),
            (-1.0, 1.0), (-1.0, 1.0),
        )
        with pytest.raises((bc.ConditioningError, bc.DegenerateSpanError)):
            bc.fundamental_forms(sick, 0.0, 0.0)


class TestPointwiseIdentities:
    def test_revolution_outer_edge_values(self, r3_pipeline):
        _, patch, _ = r3_pipeline
        pg = bc.point_geometry(patch, 8.0, 1.0)
        assert pg.f == pytest.approx(1.0 / 24.0, abs=1e-10)
        assert pg.K == pytest.approx(-1.0 / 768.0, abs=1e-10)
        r_k, r_a2, r_eig = bc.curvature_identity_residuals(pg)
        assert r_k < 1e-10
        assert r_a2 < 1e-10
        assert r_eig < 1e-10

    def test_revolution_x2f_and_biconservative(self, r3_pipeline):
        _, patch, _ = r3_pipeline
        pg = bc.point_geometry(patch, 5.0, 2.0)
        assert bc.x2f_residual(pg) < 1e-8
        assert bc.biconservative_residual(pg) < 1e-8
        assert bc.pde_residual(patch, 5.0, 2.0) < 1e-6

    def test_sphere_pipeline_point(self, s3_pipeline):
        _, _, patch, _ = s3_pipeline
        pg = bc.point_geometry(patch, 0.4, 2.0)
        r_k, r_a2, r_eig = bc.curvature_identity_residuals(pg)
        assert max(r_k, r_a2, r_eig) < 1e-5
        assert abs(bc.normal_bitension_residual(pg)) > 1e-3


class TestRevolutionPipelineReport:
    def test_residuals_within_profile(self, r3_pipeline):
        _, _, report = r3_pipeline
        res = report.residuals
        assert res["biconservative"]["max"] < 1e-8
        assert res["gauss_identity"]["max"] < 1e-8
        assert res["f_vs_reference"]["max"] < 1e-8
        assert res["K_vs_reference"]["max"] < 1e-8
        assert res["shape_operator_norm"]["max"] < 1e-8
        assert res["principal_values"]["max"] < 1e-8
        assert res["x2f"]["max"] < 1e-8
        assert res["pde"]["max"] < 1e-6
        assert report.passed

    def test_bitension_nonzero_on_grid(self, r3_pipeline):
        _, _, report = r3_pipeline
        assert report.bitension["min_abs"] > 0

    def test_grid_covers_requested_rect(self, r3_pipeline):
        _, _, report = r3_pipeline
        assert report.grid["u_range"] == [1.5, 8.0]
        assert report.notes == []


class TestCurvedPipelineReports:
    @pytest.mark.parametrize("fix", ["s3_pipeline", "h3e_pipeline", "h3p_pipeline"])
    def test_identity_suite(self, fix, request):
        _, _, _, report = request.getfixturevalue(fix)
        res = report.residuals
        assert res["biconservative"]["max"] < 1e-5
        assert res["gauss_identity"]["max"] < 1e-5
        assert res["shape_operator_norm"]["max"] < 1e-5
        assert res["principal_values"]["max"] < 1e-5
        assert res["f_vs_profile"]["max"] < 1e-5
        assert res["x2f"]["max"] < 1e-5
        assert res["pde"]["max"] < 1e-4
        assert res["model_membership"]["max"] < 1e-8
        assert res["normal_orthogonality"]["max"] < 1e-10
        assert report.passed

    def test_bitension_bounded_away_from_zero(self, s3_pipeline, h3e_pipeline, h3p_pipeline):
        for _, _, _, report in (s3_pipeline, h3e_pipeline, h3p_pipeline):
            assert report.bitension["min_abs"] > 1e-3

    def test_laplacian_consistent_with_profile_direction(self, s3_pipeline):
        # 1-d cross-check: -Delta f computed on the surface equals
        # f'' - (3/(4f)) (f')^2 along the profile, with f = 2k
        sol, prof, patch, _ = s3_pipeline
        fd = fd_for_patch(patch)
        for u in (-0.5, 0.1, 0.6):
            pg = bc.point_geometry(patch, u, 1.0, fd)
            k, kp = float(sol.k(u)), float(sol.kp(u))
            fpp = 2.0 * float(bc.ode_rhs(k, kp, 1))
            fp = 2.0 * kp
            one_d = fpp - 3.0 / (4.0 * 2.0 * k) * fp**2
            assert abs(-pg.laplacian_f - one_d) < 1e-5

    def test_f_positive_orientation(self, s3_pipeline):
        _, _, _, report = s3_pipeline
        assert np.min(report.fields["f"]) > 0


class TestReportSerialization:
    def test_schema_and_keys(self, r3_pipeline):
        _, _, report = r3_pipeline
        data = json.loads(report.to_json())
        assert data["schema"].startswith("biconsurf.verification/")
        for key in ("case", "grid", "tolerances", "residuals", "pass", "fd"):
            assert key in data
        entry = data["residuals"]["biconservative"]
        assert set(entry) >= {"max", "mean", "argmax"}
        assert data["fd"]["laplacian_sign"].startswith("geometric")

    def test_json_deterministic(self, r3_pipeline):
        prof, patch, report = r3_pipeline
        again = bc.verify_patch(patch, 64, 64)
        assert report.to_json() == again.to_json()

    def test_schema_stable_across_cases(self, r3_pipeline, s3_pipeline,
                                        h3e_pipeline, h3p_pipeline):
        reports = [r3_pipeline[-1], s3_pipeline[-1], h3e_pipeline[-1],
                   h3p_pipeline[-1]]
        keysets = [set(json.loads(r.to_json())) for r in reports]
        assert all(k == keysets[0] for k in keysets)
        assert {r.schema for r in reports} == {"biconsurf.verification/1"}

    def test_save(self, r3_pipeline, tmp_path):
        _, _, report = r3_pipeline
        path = report.save(tmp_path / "r.json")
        assert json.loads(open(path).read())["pass"] is True

    def test_skipped_entries_serialize(self):
        rep = bc.verify_patch(cylinder_patch(), 8, 8)
        data = json.loads(rep.to_json())
        assert data["residuals"]["x2f"]["max"] is None
        assert data["gates"]["non_cmc_points"] == 0

    def test_pass_respects_tolerances(self, r3_pipeline):
        _, patch, _ = r3_pipeline
        strict = {"biconservative": 1e-30}
        rep = bc.verify_patch(patch, 8, 8, tolerances=strict)
        assert not rep.passed

    def test_pass_flag_consistent_with_stored_maxima(self, s3_pipeline):
        _, _, _, report = s3_pipeline
        recomputed = True
        for name, tol in report.tolerances.items():
            if name == "normal_bitension_min":
                recomputed &= report.bitension["min_abs"] > tol * report.bitension["max_abs"]
                continue
            entry = report.residuals.get(name)
            if entry is not None and entry["max"] is not None:
                recomputed &= entry["max"] <= tol
        assert recomputed == report.passed
