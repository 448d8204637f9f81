from fractions import Fraction

import numpy as np
import pytest

from web_linearizer.analysis.linearize import (
    L_COMPONENTS, TZ_NOTE, LinearizationField, assemble_L, dump_grid, integrate_base, integrate_parallel,
    prelinearization_residuals, prepare_grid, projective_equiv_check, to_dataframe, verify,
)
from web_linearizer.config import JobConfig
from web_linearizer.exceptions import IntegrationError
from web_linearizer.geometry.web_chart import ladder
from web_linearizer.services.service_factory import ServiceFactory

from conftest import EXAMPLE_1


def flat_linearization(parallel, s0, t0=0.0, z0=0.0, jets0=(0.0, 0.0, 0.0), h=0.02, n=9):
    context = prepare_grid(ladder(parallel, 0), (0, 0), h, n)
    grid = integrate_parallel(context, s0, jets0, t0, z0)
    return context, grid, assemble_L(grid)


class TestFlatWeb:
    def test_constant_base_gives_constant_fields(self, parallel):
        _, grid, L = flat_linearization(parallel, 2.0)
        assert np.allclose(grid.s, 2.0)
        assert np.allclose(L["L1_11"], 2.0)
        assert np.allclose(L["L2_22"], -2.0)
        for name in ("L1_12", "L1_22", "L2_11", "L2_12"):
            assert np.allclose(L[name], 0.0)

    @pytest.mark.parametrize("s0", [0.0, 1.0, -2.0])
    def test_every_base_is_verified(self, parallel, s0):
        context, grid, L = flat_linearization(parallel, s0)
        report = verify(context, grid, L)
        assert report.passed
        assert report.p1 < 1e-8
        assert max(prelinearization_residuals(L).values()) < 1e-12

    def test_different_bases_are_not_equivalent(self, parallel):
        fields = [flat_linearization(parallel, s0)[2] for s0 in (0.0, 1.0, -2.0)]
        for i in range(3):
            for j in range(i + 1, 3):
                verdict = projective_equiv_check(fields[i], fields[j])
                assert not verdict.equivalent
                assert verdict.base_gap > 0.5

    def test_same_base_recovers_the_one_form(self, parallel):
        _, _, L = flat_linearization(parallel, 1.0)
        _, _, other = flat_linearization(parallel, 1.0, t0=0.3, z0=-0.2)
        verdict = projective_equiv_check(L, other)
        assert verdict.equivalent
        assert verdict.residual < 1e-12
        omega1, omega2 = verdict.omega
        assert omega1[4, 4] == pytest.approx(0.3)
        assert omega2[4, 4] == pytest.approx(-0.2)

    def test_free_initial_data_still_verify(self, parallel):
        context, grid, L = flat_linearization(parallel, 1.0, t0=0.3, z0=-0.2)
        assert verify(context, grid, L).passed
        assert TZ_NOTE in grid.notes

    def test_frobenius_residual_with_nonzero_jets(self, parallel):
        _, grid, _ = flat_linearization(parallel, 0.5, jets0=(0.1, -0.2, 0.05))
        assert set(grid.frobenius) >= {"s_1", "s_2", "s21_1", "t_2", "z_1"}
        assert max(grid.frobenius.values()) < 1e-5

    def test_perturbed_linearization_fails(self, parallel):
        context, grid, L = flat_linearization(parallel, 1.0)
        components = dict(L.components)
        components["L2_11"] = components["L2_11"] + 0.01
        perturbed = LinearizationField(components, L.s)
        assert prelinearization_residuals(perturbed)["L2_11"] == pytest.approx(0.01)
        assert not verify(context, grid, perturbed).passed

    def test_single_node_grid(self, parallel):
        _, grid, L = flat_linearization(parallel, 3.0, n=1)
        assert grid.s.shape == (1, 1)
        assert grid.s[0, 0] == 3.0
        assert grid.frobenius == {}
        assert L["L1_11"][0, 0] == 3.0

    def test_even_grid_is_rejected(self, parallel):
        with pytest.raises(ValueError):
            prepare_grid(ladder(parallel, 0), (0, 0), 0.02, 4)

    def test_curved_web_is_refused(self, example1):
        context = prepare_grid(ladder(example1, 0), (0, 0), 0.02, 5)
        with pytest.raises(IntegrationError):
            integrate_parallel(context, 0.0)

    def test_base_needs_determinants(self, example1):
        context = prepare_grid(ladder(example1, 0), (0, 0), 0.02, 5)
        with pytest.raises(ValueError):
            integrate_base(context, -1.0)


class TestGridDump:
    def test_dataframe_columns(self, parallel):
        _, grid, L = flat_linearization(parallel, 1.0, n=5)
        frame = to_dataframe(grid, L)
        assert len(frame) == 25
        assert list(frame.columns[:5]) == ["x", "y", "s", "t", "z"]
        assert all(name in frame.columns for name in L_COMPONENTS)

    def test_dump_header(self, parallel, tmp_path):
        _, grid, L = flat_linearization(parallel, 1.0, n=5)
        path = tmp_path / "grid.txt"
        dump_grid(str(path), grid, L)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "# web-linearize grid dump"
        assert f"# note: {TZ_NOTE}" in lines
        assert "s0=1.0" in lines[2]
        table = [line for line in lines if not line.startswith("#")]
        assert "L1_11" in table[0]
        assert len(table) == 26


@pytest.mark.slow
class TestFirstExample:
    def test_integration_from_the_admissible_base(self, tower):
        service = ServiceFactory.get_linearization_service(force_new=True)
        job = JobConfig(f=EXAMPLE_1, s0=Fraction(-1), grid_n=11)
        report, grid, L = service.verify(job)
        summary = report.checks["integration"]
        assert summary["cramer_residual"] < 1e-6
        assert report.checks["verification"]["passed"]
        assert np.all(np.isfinite(grid.s))
        assert grid.s[5, 5] == pytest.approx(-1.0)

    def test_residuals_at_the_default_step(self, tower):
        service = ServiceFactory.get_linearization_service(force_new=True)
        job = JobConfig(f=EXAMPLE_1, s0=Fraction(-1), grid_h=0.01, grid_n=21)
        report, _, _ = service.verify(job)
        summary = report.checks["integration"]
        assert summary["grid_h"] == 0.01
        assert summary["cramer_residual"] < 1e-8
        assert max(summary["frobenius"].values()) < 1e-6

    def test_halving_the_step_shrinks_every_residual(self, tower):
        service = ServiceFactory.get_linearization_service(force_new=True)
        residuals = []
        for h, n in ((0.02, 11), (0.01, 21)):
            report, _, _ = service.verify(JobConfig(f=EXAMPLE_1, s0=Fraction(-1), grid_h=h, grid_n=n))
            summary = report.checks["integration"]
            residuals.append((
                summary["cramer_residual"],
                max(summary["frobenius"].values()),
                report.checks["verification"]["p1_residual"],
            ))
        coarse, fine = residuals
        for name, before, after in zip(("cramer", "frobenius", "p1"), coarse, fine):
            assert after * 8 <= before, name
