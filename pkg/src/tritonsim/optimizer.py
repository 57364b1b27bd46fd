"""Derivative-free constrained minimisation.

``cobyla`` is a linear-approximation trust-region method in the style of
Powell's COBYLA: objective and constraints are interpolated linearly on a
simplex of ``n + 1`` points, a step is taken by solving the linearised
problem inside a ball of radius ``rho``, and ``rho`` shrinks from
``initial_step`` to ``convergence_tolerance``.  Progress is judged with the
merit function ``f + mu * max_violation``.

``nelder-mead`` minimises ``f + weight * sum(violation^2)`` with SciPy's
simplex search and exists for differential testing.

Constraints are callables ``c(x)``, satisfied when ``c(x) >= 0``.  Every
objective evaluation counts as one iteration.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .simulator import make_rng

CONSTRAINT_TOLERANCE = 1e-6

Objective = Callable[[np.ndarray], float]
Constraint = Callable[[np.ndarray], float]


@dataclass
class OptimizationProblem:
    objective: Objective
    initial_point: np.ndarray | None = None
    inequality_constraints: Sequence[Constraint] = ()
    max_iterations: int = 1500
    initial_step: float = 0.5
    convergence_tolerance: float = 1e-4
    dimension: int | None = None

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.initial_step <= 0 or self.convergence_tolerance <= 0:
            raise ValueError("initial_step and convergence_tolerance must be positive")
        if self.initial_point is not None:
            self.initial_point = np.asarray(self.initial_point, dtype=float).ravel()
            self.dimension = self.initial_point.size
        elif self.dimension is None:
            raise ValueError("give an initial point or a dimension")


@dataclass
class Evaluation:
    x: np.ndarray
    value: float
    constraints: np.ndarray

    @property
    def violation(self) -> float:
        return float(max(0.0, -np.min(self.constraints))) if self.constraints.size else 0.0


@dataclass
class OptimizationTrace:
    records: list[Evaluation] = field(default_factory=list)
    termination: str = "not started"
    method: str = ""
    constraint_tolerance: float = CONSTRAINT_TOLERANCE

    @property
    def feasible(self) -> bool:
        return any(r.violation <= self.constraint_tolerance for r in self.records)

    def best(self) -> Evaluation:
        """Lowest objective among feasible records, else the least-violating record."""
        if not self.records:
            raise ValueError("empty trace")
        ok = [r for r in self.records if r.violation <= self.constraint_tolerance]
        if ok:
            return min(ok, key=lambda r: r.value)
        return min(self.records, key=lambda r: (r.violation, r.value))

    @property
    def best_point(self) -> np.ndarray:
        return self.best().x

    @property
    def best_value(self) -> float:
        return self.best().value

    @property
    def iterations(self) -> int:
        return len(self.records)

    def values(self) -> np.ndarray:
        return np.array([r.value for r in self.records])

    def running_best(self) -> np.ndarray:
        """Best feasible value seen so far (``inf`` until the first feasible record)."""
        out = np.empty(len(self.records))
        cur = math.inf
        for i, r in enumerate(self.records):
            if r.violation <= self.constraint_tolerance:
                cur = min(cur, r.value)
            out[i] = cur
        return out

    def extend(self, other: OptimizationTrace) -> None:
        self.records.extend(other.records)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        m = self.records[0].constraints.size if self.records else 0
        n = self.records[0].x.size if self.records else 0
        w.writerow(["iteration", "objective"] + [f"constraint_{i}" for i in range(m)]
                   + [f"x_{i}" for i in range(n)])
        for k, r in enumerate(self.records):
            w.writerow([k, repr(float(r.value))] + [repr(float(c)) for c in r.constraints]
                       + [repr(float(v)) for v in r.x])
        return buf.getvalue()


class _Evaluator:
    def __init__(self, problem: OptimizationProblem, trace: OptimizationTrace):
        self.problem = problem
        self.trace = trace

    @property
    def exhausted(self) -> bool:
        return len(self.trace.records) >= self.problem.max_iterations

    def __call__(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        x = np.array(x, dtype=float)
        f = float(self.problem.objective(x))
        c = np.array([float(g(x)) for g in self.problem.inequality_constraints])
        if not math.isfinite(f):
            f = 1e300
        self.trace.records.append(Evaluation(x, f, c))
        return f, c


def minimize(problem: OptimizationProblem, seed: int = 0, method: str = "cobyla") -> OptimizationTrace:
    """Run ``method`` on ``problem``.

    When ``problem.initial_point`` is None the start is drawn uniformly
    from ``[-pi, pi]^dimension`` using ``seed``.
    """
    x0 = problem.initial_point
    if x0 is None:
        x0 = make_rng(seed).uniform(-np.pi, np.pi, size=problem.dimension)
    trace = OptimizationTrace(method=method)
    evaluator = _Evaluator(problem, trace)
    if method == "cobyla":
        _cobyla(evaluator, x0, problem.initial_step, problem.convergence_tolerance)
    elif method == "nelder-mead":
        _nelder_mead(evaluator, x0, problem.initial_step, problem.convergence_tolerance)
    else:
        raise ValueError(f"unknown method {method!r}")
    return trace


# ---------------------------------------------------------------- cobyla


def _max_violation(c: np.ndarray) -> float:
    return float(max(0.0, -np.min(c))) if c.size else 0.0


def _solve_trust_region(g: np.ndarray, a: np.ndarray, c0: np.ndarray, rho: float) -> np.ndarray:
    """Minimise ``g.d`` s.t. ``c0 + a.T d >= 0`` and ``|d| <= rho``.

    ``a`` has one column per constraint.  For the small constraint counts
    used here every active set is enumerated: on each face the minimiser of
    a linear function over the ball is closed form.  If no face is feasible
    inside the ball the step minimising the largest violation is returned.
    """
    n = g.size
    m = c0.size
    scale = 1e-12 * (1.0 + np.max(np.abs(c0), initial=0.0))
    best, best_val = None, math.inf
    max_active = min(m, n)
    for k in range(max_active + 1):
        for active in itertools.combinations(range(m), k):
            if k:
                a_s = a[:, active].T
                d_p, *_ = np.linalg.lstsq(a_s, -c0[list(active)], rcond=None)
                if np.linalg.norm(d_p) > rho * (1 + 1e-12):
                    continue
                proj = np.eye(n) - np.linalg.pinv(a_s) @ a_s
                pg = proj @ g
            else:
                d_p = np.zeros(n)
                pg = g
            pgn = np.linalg.norm(pg)
            if pgn <= 1e-14 * (1 + np.linalg.norm(g)):
                cand = d_p
            else:
                t = math.sqrt(max(rho * rho - d_p @ d_p, 0.0))
                cand = d_p - t * pg / pgn
            if m and np.min(c0 + a.T @ cand) < -scale:
                continue
            val = g @ cand
            if val < best_val:
                best, best_val = cand, val
    if best is not None:
        return best
    return _least_violation_step(a, c0, rho)


def _least_violation_step(a: np.ndarray, c0: np.ndarray, rho: float) -> np.ndarray:
    # heuristic: candidates are ball-limited least-norm corrections of violated subsets
    n = a.shape[0]
    violated = [i for i in range(c0.size) if c0[i] < 0]
    cands = []
    for i in range(c0.size):
        norm = np.linalg.norm(a[:, i])
        if norm > 0:
            cands.append(rho * a[:, i] / norm)
    for k in range(1, min(len(violated), n) + 1):
        for sub in itertools.combinations(violated, k):
            d, *_ = np.linalg.lstsq(a[:, sub].T, -c0[list(sub)], rcond=None)
            nd = np.linalg.norm(d)
            cands.append(d if nd <= rho else d * (rho / nd))
    if not cands:
        return np.zeros(n)
    return min(cands, key=lambda d: _max_violation(c0 + a.T @ d))


def _cobyla(evaluate: _Evaluator, x0: np.ndarray, rhobeg: float, rhoend: float) -> None:
    trace = evaluate.trace
    n = x0.size
    rho = rhobeg
    mu = 0.0

    sim = np.empty((n + 1, n))
    fval = np.empty(n + 1)
    cval: list[np.ndarray] = []
    sim[0] = x0
    f, c = evaluate(x0)
    fval[0] = f
    cval.append(c)
    for j in range(n):
        if evaluate.exhausted:
            trace.termination = "max_iterations"
            return
        x = x0.copy()
        x[j] += rho
        sim[j + 1] = x
        f, c = evaluate(x)
        fval[j + 1] = f
        cval.append(c)
    cmat = np.array(cval)  # (n+1, m)
    m = cmat.shape[1]

    def merit(j: int) -> float:
        return fval[j] + mu * _max_violation(cmat[j])

    def order_best() -> None:
        viol = np.array([_max_violation(cmat[j]) for j in range(n + 1)])
        phi = fval + mu * viol
        best = min(range(n + 1), key=lambda j: (phi[j], viol[j]))
        if best != 0:
            sim[[0, best]] = sim[[best, 0]]
            fval[[0, best]] = fval[[best, 0]]
            cmat[[0, best]] = cmat[[best, 0]]

    def reduce_rho() -> bool:
        nonlocal rho
        if rho <= rhoend:
            return False
        rho *= 0.5
        if rho <= 1.5 * rhoend:
            rho = rhoend
        return True

    while True:
        if evaluate.exhausted:
            trace.termination = "max_iterations"
            return
        order_best()
        delta = sim[1:] - sim[0]  # rows are edge vectors
        try:
            dinv = np.linalg.inv(delta)
        except np.linalg.LinAlgError:
            dinv = np.linalg.pinv(delta)

        # geometry: edge lengths and distance of each vertex from the opposite face
        edge = np.linalg.norm(delta, axis=1)
        face_dist = 1.0 / np.maximum(np.linalg.norm(dinv, axis=0), 1e-300)
        too_long = edge > 2.1 * rho
        too_flat = face_dist < 0.25 * rho
        geometry_ok = not (too_long.any() or too_flat.any())

        grad = dinv @ (fval[1:] - fval[0])
        amat = dinv @ (cmat[1:] - cmat[0]) if m else np.zeros((n, 0))
        c0 = cmat[0]

        step = _solve_trust_region(grad, amat, c0, rho)
        if np.linalg.norm(step) < 0.5 * rho:
            if geometry_ok:
                if not reduce_rho():
                    trace.termination = "converged"
                    return
            else:
                _geometry_step(evaluate, sim, fval, cmat, dinv, too_long, face_dist, edge,
                               rho, grad, amat, mu)
            continue

        old_viol = _max_violation(c0)
        new_viol_pred = _max_violation(c0 + amat.T @ step) if m else 0.0
        lin_change = grad @ step
        if new_viol_pred < old_viol - 1e-300:
            barmu = lin_change / (old_viol - new_viol_pred)
            if mu < 1.5 * barmu:
                mu = 2.0 * barmu
                phi0 = merit(0)
                if any(merit(j) < phi0 for j in range(1, n + 1)):
                    continue
        predicted = mu * (old_viol - new_viol_pred) - lin_change

        xnew = sim[0] + step
        fnew, cnew = evaluate(xnew)
        actual = merit(0) - (fnew + mu * _max_violation(cnew))

        # barycentric weights of the new point with respect to the simplex
        lam = dinv.T @ step
        weights = np.empty(n + 1)
        weights[1:] = np.abs(lam)
        weights[0] = abs(1.0 - lam.sum()) if actual > 0 else 0.0
        dist = np.linalg.norm(sim - xnew, axis=1) / rho
        weights *= np.maximum(dist, 1.0) ** 3
        j = int(np.argmax(weights))
        if actual > 0 or weights[j] > 1.0:
            sim[j] = xnew
            fval[j] = fnew
            cmat[j] = cnew

        if predicted <= 0 or actual <= 0.1 * predicted:
            if geometry_ok:
                if not reduce_rho():
                    trace.termination = "converged"
                    return
            elif not evaluate.exhausted:
                _geometry_step(evaluate, sim, fval, cmat, dinv, too_long, face_dist, edge,
                               rho, grad, amat, mu)


def _geometry_step(evaluate, sim, fval, cmat, dinv, too_long, face_dist, edge, rho,
                   grad, amat, mu) -> None:
    """Replace the worst-placed vertex by a point at distance ``rho / 2`` across its face."""
    if too_long.any():
        j = int(np.argmax(np.where(too_long, edge, -np.inf)))
    else:
        j = int(np.argmin(face_dist))
    direction = dinv[:, j] / np.linalg.norm(dinv[:, j])
    step = 0.5 * rho * direction
    c0 = cmat[0]
    lin = lambda d: grad @ d + mu * (_max_violation(c0 + amat.T @ d) if c0.size else 0.0)
    if lin(-step) < lin(step):
        step = -step
    x = sim[0] + step
    f, c = evaluate(x)
    sim[j + 1] = x
    fval[j + 1] = f
    cmat[j + 1] = c


# ----------------------------------------------------------- nelder-mead


def _nelder_mead(evaluate: _Evaluator, x0: np.ndarray, step: float, tol: float,
                 penalty: float = 1e4) -> None:
    from scipy.optimize import minimize as scipy_minimize

    trace = evaluate.trace
    n = x0.size

    def penalised(x):
        if evaluate.exhausted:
            raise _Budget
        f, c = evaluate(x)
        viol = np.minimum(c, 0.0)
        return f + penalty * float(viol @ viol)

    simplex = np.vstack([x0] + [x0 + step * e for e in np.eye(n)])
    try:
        res = scipy_minimize(
            penalised, x0, method="Nelder-Mead",
            options={"initial_simplex": simplex, "xatol": tol, "fatol": tol * tol,
                     "maxfev": evaluate.problem.max_iterations, "adaptive": n > 4},
        )
        trace.termination = "converged" if res.success else "max_iterations"
    except _Budget:
        trace.termination = "max_iterations"


class _Budget(Exception):
    pass
