"""
Integration of a linearization from an admissible base value.

The base s is integrated from s_1 = A(s)/D(s), s_2 = B(s)/D(s); the two
auxiliary fields t and z follow the first-order system

    t_1 = s t + t^2,                t_2 = s_1/3 - 2 s_2/3 + z t - R/3
    z_1 = 2 s_1/3 - s_2/3 + z t + R/3,   z_2 = -z s + z^2

and the linearization is assembled from (s, t, z). Frame derivatives of the
weight-w fields convert to coordinates through d/dx u = f_x (D_1 u + w mu u)
and d/dy u = f_y (D_2 u + w mu u).

All grid work runs in float64 on a square grid centred at the point. Classical
RK4 runs along the x-line through the point and then along every y-line, with
stage evaluations on a grid of half steps.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np
import pandas as pd
from numpy.polynomial import polynomial as npoly

from .obstruction import ObstructionTower, SRow, _CRAMER
from ..algebra.jetpoly import S, S1, S2, S21, third_order_rules
from ..algebra.spoly import SPoly, det3, evaluate_coefficients
from ..config import settings
from ..exceptions import IntegrationError
from ..geometry.web_chart import CurvLadder, GridFields, ladder, ladder_arrays

logger = logging.getLogger(__name__)

TZ_NOTE = (
    "t and z at the point are free initial data: the compatibility conditions of their "
    "system are the second-order rules already satisfied by s"
)

L_COMPONENTS = ("L1_11", "L1_12", "L1_22", "L2_11", "L2_12", "L2_22")


# ---------------------------------------------------------------------------
# grid context


@dataclass
class GridContext:
    """Frame data and evaluated determinants on the half-step grid around a point."""

    center: Tuple[float, float]
    h: float
    n: int
    fields: GridFields
    dets: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def middle(self) -> int:
        return (self.n - 1) // 2

    def axis(self, index: int) -> np.ndarray:
        """Full-grid coordinates along one axis."""
        offsets = (np.arange(self.n) - self.middle) * self.h
        return self.center[index] + offsets

    def coordinates(self, hi: int, hj: int) -> Tuple[float, float]:
        half = self.h / 2
        return (
            float(self.center[0] + (hi - (self.n - 1)) * half),
            float(self.center[1] + (hj - (self.n - 1)) * half),
        )

    def full(self, values: np.ndarray) -> np.ndarray:
        """Restrict a half-grid array to the full grid."""
        return values[::2, ::2]

    @property
    def curvature(self) -> np.ndarray:
        return self.fields.words[""]

    def det_value(self, name: str, s: float, hi: int, hj: int) -> float:
        return float(npoly.polyval(s, self.dets[name][:, hi, hj]))


def _stack(p: SPoly, shape) -> np.ndarray:
    if p.is_zero():
        return np.zeros((1,) + shape)
    return np.stack([np.broadcast_to(np.asarray(c, dtype=float), shape) for c in p.coeffs])


def prepare_grid(l: CurvLadder, center: Sequence, h: float = None, n: int = None,
                 tower: Optional[ObstructionTower] = None) -> GridContext:
    """Sample the web on the half-step grid; evaluate D, A, B, C there when a tower is given."""
    h = float(h if h is not None else settings.grid_h)
    n = int(n if n is not None else settings.grid_n)
    if n < 1 or n % 2 == 0:
        raise ValueError("the grid size must be a positive odd integer")
    center = (float(center[0]), float(center[1]))
    offsets = (np.arange(2 * n - 1) - (n - 1)) * (h / 2)
    xs, ys = np.meshgrid(center[0] + offsets, center[1] + offsets, indexing="ij")

    order = 0
    if tower is not None:
        order = max(row.max_word_length() for row in tower.rows)
    grid_ladder = ladder(l.chart, max(order, 0))
    fields = ladder_arrays(grid_ladder, xs, ys)
    context = GridContext(center=center, h=h, n=n, fields=fields)

    if tower is not None:
        one = np.ones(xs.shape)
        rows: List[SRow] = [row.evaluate(fields.words, one) for row in tower.rows]
        for name, columns in _CRAMER.items():
            matrix = [[getattr(row, c) for c in columns] for row in rows[:3]]
            context.dets[name] = _stack(det3(matrix), xs.shape)
        logger.debug(f"grid of {n}x{n} nodes, spacing {h}, determinants of degrees "
                     f"{ {k: v.shape[0] - 1 for k, v in context.dets.items()} }")
    return context


# ---------------------------------------------------------------------------
# the line integrator

RightHandSide = Callable[[int, int, int, np.ndarray], np.ndarray]


def _rk4_step(rhs: RightHandSide, axis: int, hi: int, hj: int, state: np.ndarray, direction: int,
              h: float) -> np.ndarray:
    step = direction * h

    def shifted(k: int) -> Tuple[int, int]:
        return (hi + direction * k, hj) if axis == 0 else (hi, hj + direction * k)

    k1 = rhs(axis, hi, hj, state)
    k2 = rhs(axis, *shifted(1), state + 0.5 * step * k1)
    k3 = rhs(axis, *shifted(1), state + 0.5 * step * k2)
    k4 = rhs(axis, *shifted(2), state + step * k3)
    return state + step * (k1 + 2 * k2 + 2 * k3 + k4) / 6


def _integrate(context: GridContext, rhs: RightHandSide, initial: Sequence[float]) -> np.ndarray:
    """Values of the state on the full grid: x-line through the centre, then y-lines."""
    n, m = context.n, context.middle
    values = np.full((n, n, len(initial)), np.nan)
    values[m, m] = np.asarray(initial, dtype=float)

    def walk(line: Callable[[int], Tuple[int, int]], axis: int) -> None:
        for direction in (1, -1):
            k = m
            while 0 <= k + direction < n:
                i, j = line(k)
                state = _rk4_step(rhs, axis, 2 * i, 2 * j, values[i, j], direction, context.h)
                if not np.all(np.isfinite(state)):
                    raise IntegrationError(context.coordinates(2 * i, 2 * j), "the fields are no longer finite")
                ni, nj = line(k + direction)
                values[ni, nj] = state
                k += direction

    walk(lambda k: (k, m), 0)
    for i in range(n):
        walk(lambda k, i=i: (i, k), 1)
    return values


# ---------------------------------------------------------------------------
# fields


@dataclass
class FieldGrid:
    """Integrated fields on the full grid, indexed [x, y]."""

    xs: np.ndarray
    ys: np.ndarray
    fx: np.ndarray
    fy: np.ndarray
    mu: np.ndarray
    curvature: np.ndarray
    s: np.ndarray
    t: Optional[np.ndarray] = None
    z: Optional[np.ndarray] = None
    jets: Dict[str, np.ndarray] = field(default_factory=dict)
    cramer_residual: Optional[np.ndarray] = None
    frobenius: Dict[str, float] = field(default_factory=dict)
    initial: Dict[str, float] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def h(self) -> float:
        return float(self.xs[1] - self.xs[0]) if len(self.xs) > 1 else 0.0


def _field_grid(context: GridContext, s: np.ndarray) -> FieldGrid:
    f = context.fields
    return FieldGrid(
        xs=context.axis(0),
        ys=context.axis(1),
        fx=context.full(f.fx),
        fy=context.full(f.fy),
        mu=context.full(f.mu),
        curvature=context.full(context.curvature),
        s=s,
    )


def _slopes(context: GridContext, s: float, hi: int, hj: int) -> Tuple[float, float]:
    D = context.det_value("D", s, hi, hj)
    if abs(D) < settings.d_threshold:
        raise IntegrationError(context.coordinates(hi, hj), f"|D(s)| = {abs(D):.3g} leaves the domain D(s) != 0")
    return context.det_value("A", s, hi, hj) / D, context.det_value("B", s, hi, hj) / D


def integrate_base(context: GridContext, s0: float) -> FieldGrid:
    """s on the grid from s_1 = A(s)/D(s), s_2 = B(s)/D(s)."""
    if not context.dets:
        raise ValueError("the grid context carries no determinants")
    f = context.fields

    def rhs(axis: int, hi: int, hj: int, state: np.ndarray) -> np.ndarray:
        s = state[0]
        s1, s2 = _slopes(context, s, hi, hj)
        mu = f.mu[hi, hj]
        if axis == 0:
            return np.array([f.fx[hi, hj] * (s1 + mu * s)])
        return np.array([f.fy[hi, hj] * (s2 + mu * s)])

    values = _integrate(context, rhs, [s0])
    grid = _field_grid(context, values[:, :, 0])
    grid.initial["s0"] = float(s0)
    grid.cramer_residual = cramer_residual(context, grid.s)
    worst = float(np.max(grid.cramer_residual))
    if worst > settings.residual_tolerance:
        raise IntegrationError(context.center, f"the relation AB = CD fails by {worst:.3g}")
    grid.frobenius.update(_frobenius(grid, {"s": (1, grid.s)}, _base_derivatives(context, grid)))
    logger.debug(f"base integrated from s0 = {s0}: max |AB - CD|/D^2 = {worst:.3g}")
    return grid


def cramer_residual(context: GridContext, s: np.ndarray) -> np.ndarray:
    """|A B - C D| / D^2 at every full-grid node."""
    residual = np.zeros_like(s)
    for i in range(context.n):
        for j in range(context.n):
            hi, hj = 2 * i, 2 * j
            values = {name: context.det_value(name, s[i, j], hi, hj) for name in ("A", "B", "C", "D")}
            residual[i, j] = abs(values["A"] * values["B"] - values["C"] * values["D"]) / values["D"] ** 2
    return residual


def _base_derivatives(context: GridContext, grid: FieldGrid) -> Dict[str, Tuple[np.ndarray, np.ndarray]]:
    s1 = np.zeros_like(grid.s)
    s2 = np.zeros_like(grid.s)
    for i in range(context.n):
        for j in range(context.n):
            s1[i, j], s2[i, j] = _slopes(context, grid.s[i, j], 2 * i, 2 * j)
    grid.jets.update({S1: s1, S2: s2})
    return {"s": (s1, s2)}


def _tz_derivatives(s, s1, s2, t, z, curvature):
    t1 = s * t + t * t
    t2 = s1 / 3 - 2 * s2 / 3 + z * t - curvature / 3
    z1 = 2 * s1 / 3 - s2 / 3 + z * t + curvature / 3
    z2 = -z * s + z * z
    return (t1, t2), (z1, z2)


def integrate_tz(context: GridContext, grid: FieldGrid, t0: float = 0.0, z0: float = 0.0) -> FieldGrid:
    """t and z on the grid, integrated together with s."""
    f = context.fields

    def rhs(axis: int, hi: int, hj: int, state: np.ndarray) -> np.ndarray:
        s, t, z = state
        s1, s2 = _slopes(context, s, hi, hj)
        mu, curvature = f.mu[hi, hj], context.curvature[hi, hj]
        (t1, t2), (z1, z2) = _tz_derivatives(s, s1, s2, t, z, curvature)
        if axis == 0:
            return f.fx[hi, hj] * np.array([s1 + mu * s, t1 + mu * t, z1 + mu * z])
        return f.fy[hi, hj] * np.array([s2 + mu * s, t2 + mu * t, z2 + mu * z])

    values = _integrate(context, rhs, [grid.s[context.middle, context.middle], t0, z0])
    grid.t, grid.z = values[:, :, 1], values[:, :, 2]
    grid.initial.update({"t0": float(t0), "z0": float(z0)})
    if TZ_NOTE not in grid.notes:
        grid.notes.append(TZ_NOTE)

    if S1 not in grid.jets:
        _base_derivatives(context, grid)
    (t1, t2), (z1, z2) = _tz_derivatives(grid.s, grid.jets[S1], grid.jets[S2], grid.t, grid.z, grid.curvature)
    grid.frobenius.update(_frobenius(grid, {"t": (1, grid.t), "z": (1, grid.z)}, {"t": (t1, t2), "z": (z1, z2)}))
    worst = max(grid.frobenius.values(), default=0.0)
    if not np.isfinite(worst):
        raise IntegrationError(context.center, "Frobenius residual is not finite")
    logger.debug(f"t, z integrated from ({t0}, {z0}): max Frobenius residual {worst:.3g}")
    return grid


def integrate_parallel(context: GridContext, s0: float, jets0: Sequence[float] = (0.0, 0.0, 0.0),
                       t0: float = 0.0, z0: float = 0.0) -> FieldGrid:
    """Flat webs: integrate (s, s_1, s_2, s_21, t, z) as one Frobenius system."""
    f = context.fields
    scale = max(1.0, float(np.max(np.abs(context.fields.mu))))
    if float(np.max(np.abs(context.curvature))) > settings.residual_tolerance * scale:
        raise IntegrationError(context.center, "the curvature does not vanish on the grid")
    rules = third_order_rules()
    zeros = defaultdict(float)
    weights = np.array([1, 2, 2, 3, 1, 1], dtype=float)

    def frame_derivatives(state) -> Tuple[np.ndarray, np.ndarray]:
        s, s1, s2, s21, t, z = state
        jets = {S: s, S1: s1, S2: s2, S21: s21}
        x1 = rules[(S21, 1)].evaluate(zeros, jets, 1.0)
        x2 = rules[(S21, 2)].evaluate(zeros, jets, 1.0)
        (t1, t2), (z1, z2) = _tz_derivatives(s, s1, s2, t, z, 0.0)
        d1 = np.array([s1, 2 * s21 - 2 * s * s2 + s * s1, s21, x1, t1, z1])
        d2 = np.array([s2, s21, 2 * s21 - s * s2 + 2 * s * s1, x2, t2, z2])
        return d1, d2

    def rhs(axis: int, hi: int, hj: int, state: np.ndarray) -> np.ndarray:
        d1, d2 = frame_derivatives(state)
        shift = weights * f.mu[hi, hj] * state
        if axis == 0:
            return f.fx[hi, hj] * (d1 + shift)
        return f.fy[hi, hj] * (d2 + shift)

    initial = [s0, *jets0, t0, z0]
    values = _integrate(context, rhs, initial)
    grid = _field_grid(context, values[:, :, 0])
    grid.jets = {S1: values[:, :, 1], S2: values[:, :, 2], S21: values[:, :, 3]}
    grid.t, grid.z = values[:, :, 4], values[:, :, 5]
    grid.initial = dict(zip(("s0", "s1_0", "s2_0", "s21_0", "t0", "z0"), map(float, initial)))
    grid.notes.append(TZ_NOTE)

    prescribed = {}
    n = context.n
    d1_all = np.zeros((n, n, 6))
    d2_all = np.zeros((n, n, 6))
    for i in range(n):
        for j in range(n):
            d1_all[i, j], d2_all[i, j] = frame_derivatives(values[i, j])
    names = ("s", "s1", "s2", "s21", "t", "z")
    for k, name in enumerate(names):
        prescribed[name] = (d1_all[:, :, k], d2_all[:, :, k])
    grid.frobenius.update(_frobenius(grid, {name: (int(weights[k]), values[:, :, k]) for k, name in enumerate(names)},
                                     prescribed))
    logger.debug(f"flat web integrated from s0 = {s0}: max Frobenius residual "
                 f"{max(grid.frobenius.values(), default=0.0):.3g}")
    return grid


# ---------------------------------------------------------------------------
# finite differences


def _central(u: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Fourth-order central difference; NaN where the stencil leaves the grid."""
    out = np.full(u.shape, np.nan)
    n = u.shape[axis]
    if n < 5:
        return out
    take = lambda k: np.take(u, range(2 + k, n - 2 + k), axis=axis)
    inner = (-take(2) + 8 * take(1) - 8 * take(-1) + take(-2)) / (12 * h)
    index = [slice(None)] * u.ndim
    index[axis] = slice(2, n - 2)
    out[tuple(index)] = inner
    return out


def frame_derivative(grid: FieldGrid, u: np.ndarray, weight: int, i: int) -> np.ndarray:
    """D_i u from finite differences of a weight-``weight`` field."""
    if i == 1:
        return _central(u, grid.h, 0) / grid.fx - weight * grid.mu * u
    return _central(u, grid.h, 1) / grid.fy - weight * grid.mu * u


def _max_abs(values: np.ndarray) -> float:
    finite = values[np.isfinite(values)]
    return float(np.max(np.abs(finite))) if finite.size else 0.0


def _frobenius(grid: FieldGrid, fields: Dict[str, Tuple[int, np.ndarray]],
               prescribed: Dict[str, Tuple[np.ndarray, np.ndarray]]) -> Dict[str, float]:
    """Largest gap between measured and prescribed frame derivatives, per field and direction."""
    if grid.h == 0:
        return {}
    residuals = {}
    for name, (weight, u) in fields.items():
        for i in (1, 2):
            measured = frame_derivative(grid, u, weight, i)
            residuals[f"{name}_{i}"] = _max_abs(measured - prescribed[name][i - 1])
    return residuals


# ---------------------------------------------------------------------------
# the linearization


@dataclass
class LinearizationField:
    """Frame components L^k_ij of the linearization at every node, with the base it came from."""

    components: Dict[str, np.ndarray]
    s: np.ndarray

    def __getitem__(self, name: str) -> np.ndarray:
        return self.components[name]

    def component(self, k: int, i: int, j: int) -> np.ndarray:
        i, j = min(i, j), max(i, j)
        return self.components[f"L{k}_{i}{j}"]

    def base(self) -> np.ndarray:
        return 2 * self.components["L1_12"] - self.components["L2_22"]


def assemble_L(grid: FieldGrid) -> LinearizationField:
    """L from s, t, z: L1_11 = 2t + s, L2_22 = 2z - s, L1_12 = z, L2_11 = L1_22 = 0."""
    if grid.t is None or grid.z is None:
        raise ValueError("t and z must be integrated before assembling L")
    x = 2 * grid.t + grid.s
    y = 2 * grid.z - grid.s
    zero = np.zeros_like(grid.s)
    components = {
        "L1_11": x,
        "L1_12": grid.z,
        "L1_22": zero,
        "L2_11": zero.copy(),
        "L2_12": 0.5 * (x + y) - grid.z,
        "L2_22": y,
    }
    return LinearizationField(components=components, s=grid.s)


def prelinearization_residuals(L: LinearizationField) -> Dict[str, float]:
    """Conditions on the fibre: the three foliations are autoparallel and the base is s.

    assemble_L builds L so that these hold identically, so on its output
    every entry is zero up to rounding. They only carry information for an
    L supplied from outside or modified after assembly.
    """
    third = (
        L["L1_11"] - 2 * L["L1_12"] + L["L1_22"]
        + L["L2_11"] - 2 * L["L2_12"] + L["L2_22"]
    )
    return {
        "L2_11": _max_abs(L["L2_11"]),
        "L1_22": _max_abs(L["L1_22"]),
        "third_foliation": _max_abs(third),
        "base": _max_abs(L.base() - L.s),
    }


def p1_residual(grid: FieldGrid, L: LinearizationField) -> float:
    """Frame form of D_1 L(e_2, .) - D_2 L(e_1, .) + [L_1, L_2] - R id."""
    worst = 0.0
    for k in (1, 2):
        for l in (1, 2):
            value = (
                frame_derivative(grid, L.component(k, 2, l), 1, 1)
                - frame_derivative(grid, L.component(k, 1, l), 1, 2)
            )
            for m in (1, 2):
                value = value + L.component(k, 1, m) * L.component(m, 2, l) - L.component(k, 2, m) * L.component(m, 1, l)
            if k == l:
                value = value - grid.curvature
            worst = max(worst, _max_abs(value))
    return worst


def connection_curvature(grid: FieldGrid, L: LinearizationField, fxx: np.ndarray, fyy: np.ndarray) -> float:
    """Curvature of the Chern connection plus L, in coordinates, by finite differences."""
    fx, fy = grid.fx, grid.fy
    fxy = -grid.mu * fx * fy
    theta = (fx, fy)
    T = np.zeros((2, 2, 2) + grid.s.shape)
    T[0, 0, 0] = fxx / fx - fxy / fy
    T[1, 1, 1] = fyy / fy - fxy / fx
    for c in range(2):
        for a in range(2):
            for b in range(2):
                T[c, a, b] = T[c, a, b] + theta[a] * theta[b] * L.component(c + 1, a + 1, b + 1) / theta[c]
    worst = 0.0
    for c in range(2):
        for d in range(2):
            value = _central(T[c, 1, d], grid.h, 0) - _central(T[c, 0, d], grid.h, 1)
            for e in range(2):
                value = value + T[c, 0, e] * T[e, 1, d] - T[c, 1, e] * T[e, 0, d]
            worst = max(worst, _max_abs(value))
    return worst


@dataclass
class VerificationReport:
    """Largest residuals of a linearization on the grid, against a tolerance."""

    p1: float
    curvature: float
    prelinearization: Dict[str, float]
    frobenius: Dict[str, float]
    cramer: Optional[float]
    tolerance: float

    @property
    def passed(self) -> bool:
        values = [self.p1, self.curvature, *self.prelinearization.values()]
        return all(np.isfinite(v) and v <= self.tolerance for v in values)

    def to_dict(self) -> dict:
        return {
            "p1_residual": self.p1,
            "curvature_residual": self.curvature,
            "prelinearization": dict(sorted(self.prelinearization.items())),
            "frobenius": dict(sorted(self.frobenius.items())),
            "cramer_residual": self.cramer,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def verify(context: GridContext, grid: FieldGrid, L: LinearizationField, tolerance: float = None) -> VerificationReport:
    """P1 residual, curvature of the total connection and the fibre conditions."""
    tolerance = tolerance if tolerance is not None else settings.verify_tolerance
    fxx = context.full(context.fields.fxx)
    fyy = context.full(context.fields.fyy)
    report = VerificationReport(
        p1=p1_residual(grid, L),
        curvature=connection_curvature(grid, L, fxx, fyy),
        prelinearization=prelinearization_residuals(L),
        frobenius=dict(grid.frobenius),
        cramer=float(np.max(grid.cramer_residual)) if grid.cramer_residual is not None else None,
        tolerance=tolerance,
    )
    logger.info(f"verification: P1 {report.p1:.3g}, curvature {report.curvature:.3g}, "
                f"{'passed' if report.passed else 'failed'}")
    return report


@dataclass
class ProjectiveVerdict:
    equivalent: bool
    base_gap: float
    omega: Optional[Tuple[np.ndarray, np.ndarray]] = None
    residual: Optional[float] = None

    def to_dict(self) -> dict:
        return {"equivalent": self.equivalent, "base_gap": self.base_gap, "omega_residual": self.residual}


def projective_equiv_check(L: LinearizationField, other: LinearizationField, tolerance: float = None) -> ProjectiveVerdict:
    """Same base iff projectively equivalent; then other = L + omega (.) id with omega recovered."""
    tolerance = tolerance if tolerance is not None else settings.residual_tolerance
    gap = _max_abs(L.base() - other.base())
    if gap > tolerance:
        return ProjectiveVerdict(equivalent=False, base_gap=gap)
    delta = {name: other[name] - L[name] for name in L_COMPONENTS}
    omega1 = 0.5 * delta["L1_11"]
    omega2 = 0.5 * delta["L2_22"]
    residual = max(
        _max_abs(delta["L1_12"] - omega2),
        _max_abs(delta["L2_12"] - omega1),
        _max_abs(delta["L2_11"]),
        _max_abs(delta["L1_22"]),
    )
    return ProjectiveVerdict(equivalent=True, base_gap=gap, omega=(omega1, omega2), residual=residual)


# ---------------------------------------------------------------------------
# grid dump


def to_dataframe(grid: FieldGrid, L: Optional[LinearizationField] = None) -> pd.DataFrame:
    """One row per node: coordinates, fields, L components and the AB = CD residual."""
    X, Y = np.meshgrid(grid.xs, grid.ys, indexing="ij")
    columns = {"x": X.ravel(), "y": Y.ravel(), "s": grid.s.ravel()}
    if grid.t is not None:
        columns["t"] = grid.t.ravel()
        columns["z"] = grid.z.ravel()
    if L is not None:
        for name in L_COMPONENTS:
            columns[name] = L[name].ravel()
    if grid.cramer_residual is not None:
        columns["cramer_residual"] = grid.cramer_residual.ravel()
    return pd.DataFrame(columns)


def dump_grid(path: str, grid: FieldGrid, L: Optional[LinearizationField] = None) -> None:
    frame = to_dataframe(grid, L)
    header = [
        "# web-linearize grid dump",
        f"# spacing {grid.h}, {len(grid.xs)}x{len(grid.ys)} nodes",
        "# initial " + ", ".join(f"{k}={v}" for k, v in sorted(grid.initial.items())),
        *(f"# note: {note}" for note in grid.notes),
    ]
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(header) + "\n")
        handle.write(frame.to_string(index=False) + "\n")
    logger.info(f"grid written to {path}")
