"""Pipeline orchestration: curvature, tower evaluation, radical, integration and verdict."""

from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import logging

import mpmath

from ..algebra.qpoly import QPoly, radical_at_point, resultant, roots
from ..analysis import printed_formulas
from ..analysis.linearize import (
    FieldGrid, GridContext, LinearizationField, TZ_NOTE, assemble_L, integrate_base, integrate_parallel,
    integrate_tz, prepare_grid, verify,
)
from ..analysis.obstruction import (
    DET_DEGREE_BOUNDS, ObstructionTower, Q_DEGREE_BOUNDS, TowerValues, ladder_binding, materialize,
)
from ..analysis.report import (
    INCONCLUSIVE, LINEARIZABLE, NOT_LINEARIZABLE, PARALLEL_NOTE, PARALLELIZABLE, Report, RootReport,
    class_bound, exact_text, neighborhood_points,
)
from ..config import JobConfig, PipelineConfig
from ..data.cache import InMemoryCache
from ..exceptions import EvaluationDomainError, IllConditionedError, IntegrationError, ParallelizableBranch
from ..geometry.web_chart import MAX_LADDER_ORDER, WebChart, check_general_position, curvature, ladder
from ..models.expr import Const, Evaluation, simplify
from ..models.numeric import NumValue

logger = logging.getLogger(__name__)

Q_NAMES = ("Q1", "Q2", "Q3", "Q4", "Q5", "Q6", "Q7")


def _root_float(value) -> float:
    if isinstance(value, Fraction):
        return float(value)
    return float(mpmath.re(value))


def _point_text(point: Sequence) -> List[str]:
    return [str(c) for c in point]


class LinearizationService:
    """Runs the analysis stages for one job at a time."""

    def __init__(self, tower_provider: Callable[[], ObstructionTower], config: Optional[PipelineConfig] = None):
        self._tower_provider = tower_provider
        self.config = config or PipelineConfig()
        self.bindings = InMemoryCache()
        self._ladders: Dict[str, object] = {}

    # stages ---------------------------------------------------------------

    def chart(self, job: JobConfig) -> WebChart:
        """Parse f and reject points where f_x f_y vanishes."""
        chart = WebChart.from_text(job.f)
        check_general_position(chart, job.point, job.mode)
        return chart

    def _ladder(self, chart: WebChart):
        if chart.source not in self._ladders:
            self._ladders[chart.source] = ladder(chart, MAX_LADDER_ORDER)
        return self._ladders[chart.source]

    def binding(self, chart: WebChart, point: Sequence, mode: str):
        key = (chart.source, tuple(_point_text(point)), mode)
        return self.bindings.get_or_compute(key, lambda: ladder_binding(self._ladder(chart), point, mode))

    def tower(self) -> ObstructionTower:
        return self._tower_provider()

    def evaluate(self, chart: WebChart, point: Sequence, mode: str) -> TowerValues:
        binding, one = self.binding(chart, point, mode)
        return materialize(self.tower(), binding, one)

    @staticmethod
    def qpolys(values: TowerValues) -> Dict[str, QPoly]:
        return {name: QPoly.from_spoly(p.map(NumValue.of)) for name, p in {**values.dets, **values.qs}.items()}

    # commands -------------------------------------------------------------

    def curvature(self, job: JobConfig) -> Report:
        chart = self.chart(job)
        report = Report(command="curvature", job=job.to_dict())
        closed_form = simplify(curvature(chart))
        value = Evaluation(job.point, job.mode)(closed_form)
        report.curvature = str(value)
        report.parallelizable = value.is_zero(self.config.zero_tolerance)
        report.checks["curvature_identically_zero"] = isinstance(closed_form, Const) and closed_form.value == 0
        logger.info(f"curvature of {chart.source} at {tuple(_point_text(job.point))}: {value}")
        return report

    def analyze(self, job: JobConfig) -> Report:
        report = self.curvature(job)
        report.command = "analyze"
        chart = self.chart(job)
        if report.parallelizable:
            return self._analyze_flat(job, chart, report)

        values = self.evaluate(chart, job.point, job.mode)
        polys = self.qpolys(values)
        report.degrees = values.degrees()
        report.checks["degree_bounds"] = {**DET_DEGREE_BOUNDS, **Q_DEGREE_BOUNDS}
        report.checks["printed_q2_agrees"] = self._printed_q2_agrees(values)
        report.ledger = {"known": [e.to_dict() for e in printed_formulas.KNOWN_TYPOS]}

        qs = [polys[name] for name in Q_NAMES]
        report.class_bound = class_bound({name: polys[name].degree for name in Q_NAMES})
        try:
            radical = radical_at_point(qs)
        except IllConditionedError as e:
            report.checks["ill_conditioned"] = {"operation": e.operation, "singular_value_gap": e.singular_value_gap}
            report.verdict = INCONCLUSIVE
            report.add_note(f"no clear numerical rank for the radical of Q1..Q7 (singular value gap {e.singular_value_gap:.3g})")
            logger.warning(f"radical of Q1..Q7 at {tuple(_point_text(job.point))} is ill-conditioned")
            return report
        report.radical = radical.to_text()
        report.radical_degree = radical.degree
        report.add_note(f"degree of the radical of Q1..Q7 at the point: {radical.degree}")
        logger.info(f"radical of Q1..Q7 at {tuple(_point_text(job.point))}: {radical.to_text()}")

        report.neighborhood = self._neighborhood(chart, job, radical)

        if radical.degree < 1:
            if not polys["Q2"].is_zero() and not polys["Q6"].is_zero():
                report.resultants["Q2,Q6"] = str(resultant(polys["Q2"], polys["Q6"]))
            report.set_class_count(0)
            report.verdict = NOT_LINEARIZABLE
            report.add_note("Q1..Q7 have no common root: no admissible base exists at the point")
            return report

        report.roots = self._admissible_roots(radical, polys["D"])
        admissible = [r for r in report.roots if r.admissible]
        if not admissible:
            report.set_class_count(0)
            report.verdict = NOT_LINEARIZABLE
            report.add_note("every common root is complex or a zero of D")
            return report

        for root_report in admissible:
            self._integrate_root(job, root_report)
        verified = [r for r in admissible if r.verified]
        report.set_class_count(len(verified))
        disagreeing = report.neighborhood.get("trivial", 0)
        if report.neighborhood.get("unresolved"):
            report.add_note(f"{report.neighborhood['unresolved']} sampled points near the point gave no clear numerical rank")

        if disagreeing:
            report.verdict = INCONCLUSIVE
            report.add_note(f"the radical has no root at {disagreeing} sampled points near the point")
        elif len(verified) == len(admissible):
            report.verdict = LINEARIZABLE
            report.add_note(
                f"{len(verified)} projective class(es) of linearizations, one per admissible base; "
                f"radical degree agrees at {report.neighborhood.get('agreeing', 0)} of "
                f"{report.neighborhood.get('samples', 0)} points within radius {report.neighborhood.get('radius')}"
            )
        else:
            report.verdict = INCONCLUSIVE
            report.add_note("some admissible bases did not integrate to a verified linearization")
        report.add_note(TZ_NOTE)
        logger.info(f"verdict for {chart.source}: {report.verdict}")
        return report

    def integrate(self, job: JobConfig) -> Tuple[Report, FieldGrid, LinearizationField]:
        """Integrate the linearization for the job's s0 (or the first admissible base)."""
        report = self.curvature(job)
        report.command = "integrate"
        _, grid, L = self._integrate(job, report)
        return report, grid, L

    def verify(self, job: JobConfig, tolerance: float = None) -> Tuple[Report, FieldGrid, LinearizationField]:
        report = self.curvature(job)
        report.command = "verify"
        context, grid, L = self._integrate(job, report)
        result = verify(context, grid, L, tolerance if tolerance is not None else self.config.verify_tolerance)
        report.checks["verification"] = result.to_dict()
        return report, grid, L

    # helpers --------------------------------------------------------------

    def _integrate(self, job: JobConfig, report: Report) -> Tuple[GridContext, FieldGrid, LinearizationField]:
        chart = self.chart(job)
        center = (float(job.point[0]), float(job.point[1]))
        h = self.config.grid_h if job.grid_h is None else job.grid_h
        n = self.config.grid_n if job.grid_n is None else job.grid_n

        if report.parallelizable:
            s0 = float(job.s0 if job.s0 is not None else 0)
            context = prepare_grid(self._ladder(chart), center, h, n)
            grid = integrate_parallel(context, s0, t0=float(job.t0), z0=float(job.z0))
        else:
            s0 = float(job.s0) if job.s0 is not None else self._first_base(chart, job)
            context = prepare_grid(self._ladder(chart), center, h, n, tower=self.tower())
            grid = integrate_base(context, s0)
            grid = integrate_tz(context, grid, float(job.t0), float(job.z0))
        report.checks["integration"] = self._integration_summary(grid)
        report.add_note(TZ_NOTE)
        return context, grid, assemble_L(grid)

    def _analyze_flat(self, job: JobConfig, chart: WebChart, report: Report) -> Report:
        identically = report.checks.get("curvature_identically_zero")
        if not identically:
            nonzero = []
            for q in neighborhood_points(job.point, self.config.neighborhood_radius, self.config.neighborhood_samples):
                try:
                    value = Evaluation(q, job.mode)(curvature(chart))
                except EvaluationDomainError:
                    continue
                if not value.is_zero(self.config.zero_tolerance):
                    nonzero.append(_point_text(q))
            if nonzero:
                report.verdict = INCONCLUSIVE
                report.neighborhood = {"radius": str(self.config.neighborhood_radius), "nonzero_curvature": nonzero}
                report.add_note("the curvature vanishes at the point but not identically nearby")
                return report
        report.verdict = PARALLELIZABLE
        report.add_note(PARALLEL_NOTE)
        report.add_note(TZ_NOTE)
        try:
            flat, _, _ = self.verify(job)
        except IntegrationError as e:
            report.add_note(f"flat integration failed: {e.message}")
            return report
        report.checks["integration"] = flat.checks["integration"]
        report.checks["verification"] = flat.checks["verification"]
        logger.info(f"{chart.source} is parallelizable")
        return report

    def _printed_q2_agrees(self, values: TowerValues) -> Optional[bool]:
        printed = printed_formulas.printed_q2(values.dets["A"], values.dets["B"], values.dets["D"], values.derived,
                                      values.r_value)
        left = QPoly.from_spoly(printed.map(NumValue.of))
        right = QPoly.from_spoly(values.qs["Q2"].map(NumValue.of))
        if not (left.exact and right.exact):
            return None
        if left != right:
            logger.debug("printed Q2 differs from the derived Q2 at this point")
        return left == right

    def _admissible_roots(self, radical: QPoly, D: QPoly) -> List[RootReport]:
        reports = []
        for r in roots(radical):
            real = r.is_real
            reason = None
            admissible = real
            if not real:
                reason = "complex root"
            else:
                d_value = D.evaluate(r.value if r.exact else mpmath.re(r.value))
                if d_value.is_zero(self.config.zero_tolerance):
                    admissible = False
                    reason = "D vanishes at the root"
            reports.append(RootReport(
                value=str(r), multiplicity=r.multiplicity, exact=r.exact, real=real,
                admissible=admissible, reason=reason, root=r,
            ))
        return reports

    def _first_base(self, chart: WebChart, job: JobConfig) -> float:
        values = self.evaluate(chart, job.point, job.mode)
        polys = self.qpolys(values)
        radical = radical_at_point([polys[name] for name in Q_NAMES])
        if radical.degree < 1:
            raise IntegrationError(_point_text(job.point), "no admissible base: Q1..Q7 have no common root")
        for r in self._admissible_roots(radical, polys["D"]):
            if r.admissible:
                return _root_float(r.root.value)
        raise IntegrationError(_point_text(job.point), "every common root is complex or a zero of D")

    def _integrate_root(self, job: JobConfig, root_report: RootReport) -> None:
        value = root_report.root.value
        s0 = value if isinstance(value, Fraction) else Fraction(_root_float(value))
        try:
            report, _, _ = self.verify(job.model_copy(update={"s0": s0}))
        except IntegrationError as e:
            root_report.reason = e.message
            return
        root_report.integration = report.checks["integration"]
        root_report.verification = report.checks["verification"]

    @staticmethod
    def _integration_summary(grid: FieldGrid) -> dict:
        cramer = None if grid.cramer_residual is None else float(grid.cramer_residual.max())
        return {
            "grid_h": grid.h,
            "grid_n": len(grid.xs),
            "initial": {k: exact_text(v) for k, v in sorted(grid.initial.items())},
            "cramer_residual": cramer,
            "frobenius": dict(sorted(grid.frobenius.items())),
        }

    def _neighborhood(self, chart: WebChart, job: JobConfig, radical: QPoly) -> dict:
        radius = self.config.neighborhood_radius
        points = neighborhood_points(job.point, radius, self.config.neighborhood_samples)
        records, agreeing, trivial, unresolved = [], 0, 0, 0
        for q in points:
            record = {"point": _point_text(q)}
            try:
                check_general_position(chart, q, job.mode)
                polys = self.qpolys(self.evaluate(chart, q, job.mode))
            except (ParallelizableBranch, EvaluationDomainError) as e:
                record["skipped"] = str(e)
                records.append(record)
                continue
            qs = [polys[name] for name in Q_NAMES]
            try:
                local = radical_at_point(qs)
            except IllConditionedError as e:
                record["ill_conditioned"] = e.singular_value_gap
                record["roots_persist"] = self._roots_persist(radical, qs)
                agreeing += int(record["roots_persist"])
                unresolved += int(not record["roots_persist"])
                records.append(record)
                continue
            record["radical"] = local.to_text()
            agreeing += int(local.degree == radical.degree)
            trivial += int(local.degree < 1 <= radical.degree)
            records.append(record)
        return {
            "radius": str(radius),
            "samples": len(points),
            "agreeing": agreeing,
            "trivial": trivial,
            "unresolved": unresolved,
            "points": records,
        }

    def _roots_persist(self, radical: QPoly, qs: Sequence[QPoly]) -> bool:
        """Whether every real root of the radical at the point is a common root of qs."""
        if radical.degree < 1:
            return False
        for r in roots(radical):
            if not r.is_real:
                continue
            value = r.value if r.exact else mpmath.re(r.value)
            size = abs(NumValue.of(value).to_mpf())
            for q in qs:
                if q.is_zero():
                    continue
                scale = mpmath.fsum(abs(c.to_mpf()) * size ** j for j, c in enumerate(q.coeffs))
                if abs(q.evaluate(value).to_mpf()) > self.config.zero_tolerance * scale:
                    return False
        return True
