"""VQE, VQD and VQE/AC drivers, the deflation-weight sweep and Monte-Carlo error propagation."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .ansatz import AnsatzSpec, build_ansatz, prepare_state
from .optimizer import OptimizationProblem, OptimizationTrace, minimize
from .pauli import PauliSum, expectation
from .simulator import StateVector, estimate_expectation, inner_product, make_rng

log = logging.getLogger(__name__)

DEFAULT_LAMBDA = 4.0
DEFAULT_SIGMA = 1e-3
STAGE_TOLERANCE = 1e-2


@dataclass(frozen=True)
class OptimizerSettings:
    max_iterations: int = 1500
    initial_step: float = 0.5
    tolerance: float = 1e-4
    method: str = "cobyla"
    shots_per_term: int | None = None  # None = exact expectations


@dataclass
class VariationalResult:
    algorithm: str
    theta: np.ndarray
    energy: float
    loss: float
    overlap_with_ground: float | None
    trace: OptimizationTrace
    seed: object = None
    metadata: dict = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return self.trace.termination == "converged"

    def state(self, spec: AnsatzSpec) -> StateVector:
        return prepare_state(build_ansatz(spec), self.theta)


@dataclass
class EnergyDistribution:
    samples: np.ndarray
    sigma: float

    @property
    def mean(self) -> float:
        return float(np.mean(self.samples))

    @property
    def std(self) -> float:
        return float(np.std(self.samples, ddof=1)) if self.samples.size > 1 else 0.0

    @property
    def standard_error(self) -> float:
        return self.std / np.sqrt(self.samples.size)


def task_seed(seed, *index: int) -> tuple[int, ...]:
    """Derived seed for an independent sub-task."""
    base = seed if isinstance(seed, tuple) else (int(seed),)
    return base + tuple(int(i) for i in index)


def parallel_map(fn: Callable, tasks: Iterable, jobs: int = 1) -> list:
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


class _EnergyObjective:
    """Energy of the ansatz state, exact or shot-sampled."""

    def __init__(self, hamiltonian: PauliSum, spec: AnsatzSpec, shots_per_term=None, seed=0):
        if hamiltonian.num_qubits != spec.num_qubits:
            raise ValueError("Hamiltonian and ansatz registers differ")
        self.hamiltonian = hamiltonian
        self.circuit = build_ansatz(spec)
        self.shots = shots_per_term
        self.rng = make_rng(task_seed(seed, 0xE)) if shots_per_term else None

    def state(self, theta) -> StateVector:
        return prepare_state(self.circuit, theta)

    def energy_of(self, psi: StateVector) -> float:
        if self.shots:
            return estimate_expectation(self.hamiltonian, psi, self.shots, self.rng)
        return expectation(self.hamiltonian, psi)

    def __call__(self, theta) -> float:
        return self.energy_of(self.state(theta))


def _problem(objective, settings: OptimizerSettings, dim: int, initial_point=None,
             constraints: Sequence = ()) -> OptimizationProblem:
    return OptimizationProblem(
        objective=objective,
        initial_point=initial_point,
        inequality_constraints=constraints,
        max_iterations=settings.max_iterations,
        initial_step=settings.initial_step,
        convergence_tolerance=settings.tolerance,
        dimension=dim,
    )


def overlap(a: StateVector, b: StateVector) -> float:
    """``|<a|b>|^2``."""
    return float(abs(inner_product(a, b)) ** 2)


def run_vqe(hamiltonian: PauliSum, spec: AnsatzSpec = AnsatzSpec(),
            settings: OptimizerSettings = OptimizerSettings(), seed=0,
            initial_point=None) -> VariationalResult:
    objective = _EnergyObjective(hamiltonian, spec, settings.shots_per_term, seed)
    trace = minimize(_problem(objective, settings, spec.num_parameters, initial_point),
                     seed=seed, method=settings.method)
    theta = trace.best_point
    energy = expectation(hamiltonian, objective.state(theta))
    return VariationalResult("VQE", theta, energy, energy, None, trace, seed)


def run_vqd(hamiltonian: PauliSum, ground: VariationalResult, lam: float = DEFAULT_LAMBDA,
            spec: AnsatzSpec = AnsatzSpec(), settings: OptimizerSettings = OptimizerSettings(),
            seed=0, initial_point=None) -> VariationalResult:
    """Minimise ``E(theta) + lam * |<g|psi(theta)>|^2``."""
    if lam < 0:
        raise ValueError("deflation weight must be non-negative")
    energy_fn = _EnergyObjective(hamiltonian, spec, settings.shots_per_term, seed)
    g = ground.state(spec)

    def loss(theta):
        psi = energy_fn.state(theta)
        return energy_fn.energy_of(psi) + lam * overlap(g, psi)

    trace = minimize(_problem(loss, settings, spec.num_parameters, initial_point),
                     seed=seed, method=settings.method)
    theta = trace.best_point
    psi = energy_fn.state(theta)
    energy = expectation(hamiltonian, psi)
    ov = overlap(g, psi)
    return VariationalResult("VQD", theta, energy, energy + lam * ov, ov, trace, seed,
                             {"lambda": lam})


def vqeac_schedule(start: float = 0.5, floor: float = 1e-3) -> list[float]:
    """Overlap bounds: ``start`` halved until it would drop below ``floor``, then ``floor``."""
    bounds = []
    b = start
    while b > floor:
        bounds.append(b)
        b /= 2
    bounds.append(floor)
    return bounds


def run_vqeac(hamiltonian: PauliSum, ground: VariationalResult, spec: AnsatzSpec = AnsatzSpec(),
              settings: OptimizerSettings = OptimizerSettings(), seed=0, initial_point=None,
              schedule: Sequence[float] | None = None) -> VariationalResult:
    """Minimise the energy under ``|<g|psi>|^2 <= bound`` with a tightening bound.

    Each stage restarts from the best feasible point of the previous one and
    all stages share the ``settings.max_iterations`` budget.
    """
    schedule = list(vqeac_schedule() if schedule is None else schedule)
    energy_fn = _EnergyObjective(hamiltonian, spec, settings.shots_per_term, seed)
    g = ground.state(spec)
    x = initial_point
    if x is None:
        x = make_rng(seed).uniform(-np.pi, np.pi, size=spec.num_parameters)
    x = np.asarray(x, dtype=float)
    combined = OptimizationTrace(method=settings.method)
    stages = []
    for k, bound in enumerate(schedule):
        remaining = settings.max_iterations - combined.iterations
        stages_left = len(schedule) - k
        if remaining <= 0:
            break
        last = stages_left == 1
        constraint = lambda th, b=bound: b - overlap(g, energy_fn.state(th))
        problem = _problem(energy_fn, settings, spec.num_parameters, x, [constraint])
        # even share of what is left; intermediate stages stop at a coarser radius
        problem.max_iterations = remaining if last else max(remaining // stages_left, 1)
        if not last:
            problem.convergence_tolerance = max(settings.tolerance, STAGE_TOLERANCE)
        trace = minimize(problem, seed=task_seed(seed, k), method=settings.method)
        x = trace.best_point
        # constraint columns are rewritten against the final bound so the
        # combined trace describes one problem
        for r in trace.records:
            r.constraints = r.constraints - bound + schedule[-1]
        combined.extend(trace)
        stages.append({"bound": bound, "iterations": trace.iterations,
                       "termination": trace.termination, "feasible": trace.feasible})
        combined.termination = trace.termination
    theta = combined.best_point if combined.feasible else x
    psi = energy_fn.state(theta)
    energy = expectation(hamiltonian, psi)
    ov = overlap(g, psi)
    final_bound = schedule[-1]
    if ov > final_bound + 1e-6:
        combined.termination = "infeasible"
        log.warning("VQE/AC ended with overlap %.3g above bound %.3g", ov, final_bound)
    return VariationalResult("VQE/AC", theta, energy, energy, ov, combined, seed,
                             {"schedule": schedule, "stages": stages})


@dataclass(frozen=True)
class LambdaPoint:
    lam: float
    loss: float
    energy: float
    overlap: float


def _lambda_task(args) -> LambdaPoint:
    hamiltonian, ground, lam, spec, settings, seed, restarts = args
    best = None
    for r in range(restarts):
        res = run_vqd(hamiltonian, ground, lam, spec, settings, seed=task_seed(seed, r))
        if best is None or res.loss < best.loss:
            best = res
    return LambdaPoint(lam, best.loss, best.energy, best.overlap_with_ground)


def lambda_sweep(hamiltonian: PauliSum, ground: VariationalResult, lambdas: Sequence[float],
                 spec: AnsatzSpec = AnsatzSpec(), settings: OptimizerSettings = OptimizerSettings(),
                 seed=0, restarts: int = 1, jobs: int = 1) -> list[LambdaPoint]:
    """One VQD minimisation (best of ``restarts``) per deflation weight."""
    lambdas = [float(l) for l in lambdas]
    if not lambdas or min(lambdas) < 0:
        raise ValueError("need a non-empty grid of non-negative weights")
    tasks = [(hamiltonian, ground, lam, spec, settings, task_seed(seed, i), restarts)
             for i, lam in enumerate(lambdas)]
    return parallel_map(_lambda_task, tasks, jobs)


def fit_lambda_regimes(points: Sequence[LambdaPoint], e0: float) -> dict:
    """Locate the kink of ``min(e0 + lam, plateau)`` in a swept loss curve.

    The plateau is the median loss over the upper half of the grid and the
    crossover is where ``e0 + lam`` meets it.
    """
    lams = np.array([p.lam for p in points])
    loss = np.array([p.loss for p in points])
    order = np.argsort(lams)
    lams, loss = lams[order], loss[order]
    upper = loss[lams >= lams[len(lams) // 2]]
    plateau = float(np.median(upper))
    crossover = plateau - e0
    return {"plateau": plateau, "crossover": crossover,
            "below": lams < crossover, "lams": lams, "loss": loss}


def _mc_chunk(args) -> np.ndarray:
    hamiltonian, spec, theta_opt, sigma, count, seed = args
    rng = make_rng(seed)
    circuit = build_ansatz(spec)
    out = np.empty(count)
    for i in range(count):
        theta = theta_opt + sigma * rng.standard_normal(theta_opt.size)
        out[i] = expectation(hamiltonian, prepare_state(circuit, theta))
    return out


def monte_carlo_energy(theta_opt, sigma: float, n_samples: int, hamiltonian: PauliSum,
                       spec: AnsatzSpec = AnsatzSpec(), seed=0, jobs: int = 1,
                       chunk: int = 1000) -> EnergyDistribution:
    """Energies at ``theta ~ Normal(theta_opt, sigma^2 I)``, evaluated exactly."""
    if sigma < 0 or n_samples < 1:
        raise ValueError("need sigma >= 0 and at least one sample")
    theta_opt = np.asarray(theta_opt, dtype=float)
    sizes = [min(chunk, n_samples - s) for s in range(0, n_samples, chunk)]
    tasks = [(hamiltonian, spec, theta_opt, sigma, size, task_seed(seed, i))
             for i, size in enumerate(sizes)]
    samples = np.concatenate(parallel_map(_mc_chunk, tasks, jobs))
    return EnergyDistribution(samples, sigma)
