import numpy as np
import pytest

from tritonsim.ansatz import AnsatzSpec, build_ansatz, prepare_state
from tritonsim.pauli import PauliSum, expectation
from tritonsim.reference import TABLE1
from tritonsim.simulator import inner_product
from tritonsim.variational import (OptimizerSettings, VariationalResult, fit_lambda_regimes, LambdaPoint,
                                   monte_carlo_energy, overlap, run_vqd, run_vqe, run_vqeac, task_seed,
                                   vqeac_schedule)

SPEC = AnsatzSpec()


@pytest.fixture(scope="module")
def vqe(hamiltonian):
    return run_vqe(hamiltonian, SPEC, OptimizerSettings(), seed=0)


def energy_of(h, theta):
    return expectation(h, prepare_state(build_ansatz(SPEC), theta))


def test_vqe_result_invariants(vqe, hamiltonian, spectrum):
    assert vqe.algorithm == "VQE" and vqe.overlap_with_ground is None
    assert vqe.energy >= spectrum.ground_energy - 1e-9
    assert abs(vqe.energy - energy_of(hamiltonian, vqe.theta)) <= 1e-9
    assert abs(vqe.energy - spectrum.ground_energy) / abs(spectrum.ground_energy) <= 0.02
    assert vqe.trace.iterations <= 1500


def test_vqe_flat_landscape():
    h = PauliSum(4, (), 3.25)
    res = run_vqe(h, SPEC, OptimizerSettings(max_iterations=50), seed=1)
    assert res.energy == pytest.approx(3.25)


def test_vqe_deterministic(hamiltonian):
    s = OptimizerSettings(max_iterations=200)
    a, b = run_vqe(hamiltonian, SPEC, s, seed=4), run_vqe(hamiltonian, SPEC, s, seed=4)
    assert np.array_equal(a.theta, b.theta) and a.energy == b.energy


def test_vqe_shot_mode_runs(hamiltonian, spectrum):
    s = OptimizerSettings(max_iterations=300, shots_per_term=2000)
    res = run_vqe(hamiltonian, SPEC, s, seed=2)
    # reported energy is the exact value at the returned point
    assert abs(res.energy - energy_of(hamiltonian, res.theta)) <= 1e-9
    assert res.energy >= spectrum.ground_energy - 1e-9


def test_register_mismatch():
    with pytest.raises(ValueError):
        run_vqe(PauliSum(3, (), 1.0), SPEC)


def test_vqd_lambda_zero_is_vqe(hamiltonian, vqe):
    res = run_vqd(hamiltonian, vqe, 0.0, SPEC, OptimizerSettings(), seed=0)
    assert res.energy == vqe.energy
    assert res.loss == res.energy
    with pytest.raises(ValueError):
        run_vqd(hamiltonian, vqe, -1.0)


def test_vqd_deflation_identity(hamiltonian, vqe):
    lam = 4.0
    res = run_vqd(hamiltonian, vqe, lam, SPEC, OptimizerSettings(max_iterations=100), seed=1)
    g = vqe.state(SPEC)
    for r in res.trace.records[::10]:
        psi = prepare_state(build_ansatz(SPEC), r.x)
        assert abs(r.value - expectation(hamiltonian, psi) - lam * overlap(g, psi)) <= 1e-10
    assert 0 <= res.overlap_with_ground <= 1 + 1e-10
    assert res.loss - res.energy == pytest.approx(lam * res.overlap_with_ground, abs=1e-10)


def test_vqd_sub_gap_loss_tracks_ground_plus_lambda(hamiltonian, vqe, spectrum):
    lam = 1.0
    assert 0 < lam < spectrum.gap
    res = min((run_vqd(hamiltonian, vqe, lam, SPEC, OptimizerSettings(), seed=s) for s in range(2)),
              key=lambda r: r.loss)
    # staying on the reference state costs exactly E_g + lam, and nothing can do much better
    assert res.loss <= vqe.energy + lam + 1e-6
    assert res.loss == pytest.approx(vqe.energy + lam, abs=0.05 * spectrum.gap)


def test_vqd_excited_within_ten_percent(hamiltonian, vqe, spectrum):
    e1 = spectrum.first_excited_energy
    errs = [abs(run_vqd(hamiltonian, vqe, 4.0, SPEC, OptimizerSettings(), seed=s).energy - e1) / abs(e1)
            for s in range(3)]
    assert min(errs) <= 0.10


def test_schedule():
    s = vqeac_schedule()
    assert s[0] == 0.5 and s[-1] == 1e-3 and len(s) == 10
    assert all(b < a for a, b in zip(s, s[1:]))


def test_vqeac_feasible_and_excited(hamiltonian, vqe, spectrum):
    res = run_vqeac(hamiltonian, vqe, SPEC, OptimizerSettings(), seed=0)
    e1 = spectrum.first_excited_energy
    assert res.trace.iterations <= 1500
    assert res.overlap_with_ground <= 1e-3 + 1e-6
    assert res.trace.termination != "infeasible"
    assert abs(res.energy - e1) / abs(e1) <= 0.10
    assert [st["bound"] for st in res.metadata["stages"]] == res.metadata["schedule"][:len(res.metadata["stages"])]


def test_vqeac_inactive_bound_acts_like_vqe(hamiltonian, vqe, spectrum):
    res = run_vqeac(hamiltonian, vqe, SPEC, OptimizerSettings(), seed=3, schedule=[1.0])
    e0 = spectrum.ground_energy
    assert abs(res.energy - e0) / abs(e0) <= 0.02


def test_vqeac_flags_infeasible(hamiltonian, vqe):
    # zero overlap with the reference cannot be reached from it in two evaluations
    res = run_vqeac(hamiltonian, vqe, SPEC, OptimizerSettings(max_iterations=2), seed=0,
                    initial_point=vqe.theta, schedule=[1e-9])
    assert res.trace.termination == "infeasible"


def test_leakage_bound(hamiltonian, vqe, spectrum):
    gap = spectrum.gap
    for res in (run_vqd(hamiltonian, vqe, 4.0, SPEC, OptimizerSettings(), seed=0),
                run_vqeac(hamiltonian, vqe, SPEC, OptimizerSettings(), seed=0)):
        assert res.energy >= spectrum.ground_energy - 1e-9
        if res.overlap_with_ground <= 0.02:
            assert res.energy >= spectrum.first_excited_energy - res.overlap_with_ground * gap - 1e-9


def test_table_rows(hamiltonian, spectrum, table_states):
    e0, e1 = spectrum.ground_energy, spectrum.first_excited_energy
    assert abs(energy_of(hamiltonian, TABLE1["vqe"]) - e0) / abs(e0) == pytest.approx(0.0113, abs=5e-4)
    assert abs(energy_of(hamiltonian, TABLE1["vqd"]) - e1) / abs(e1) == pytest.approx(0.09, abs=0.005)
    assert abs(energy_of(hamiltonian, TABLE1["vqeac"]) - e1) / abs(e1) == pytest.approx(0.08, abs=0.005)
    assert abs(inner_product(table_states["vqd"], table_states["vqeac"])) ** 2 == pytest.approx(0.98, abs=0.01)


def test_fit_lambda_regimes_on_ideal_curve():
    e0, e1 = -5.0, -2.0
    lams = np.linspace(0, 6, 13)
    pts = [LambdaPoint(l, min(e0 + l, e1), 0.0, 0.0) for l in lams]
    fit = fit_lambda_regimes(pts, e0)
    assert fit["plateau"] == pytest.approx(e1)
    assert fit["crossover"] == pytest.approx(3.0)


def test_task_seed():
    assert task_seed(3, 1, 2) == (3, 1, 2)
    assert task_seed((3, 1), 2) == (3, 1, 2)


def test_mc_sigma_zero_is_constant(hamiltonian):
    d = monte_carlo_energy(TABLE1["vqe"], 0.0, 50, hamiltonian, SPEC, seed=0)
    assert d.samples.size == 50
    assert np.all(d.samples == energy_of(hamiltonian, TABLE1["vqe"]))
    assert d.std <= 1e-12


def test_mc_deterministic_and_parallel_safe(hamiltonian):
    a = monte_carlo_energy(TABLE1["vqe"], 1e-3, 300, hamiltonian, SPEC, seed=5, chunk=100)
    b = monte_carlo_energy(TABLE1["vqe"], 1e-3, 300, hamiltonian, SPEC, seed=5, chunk=100, jobs=2)
    assert np.array_equal(a.samples, b.samples)
    with pytest.raises(ValueError):
        monte_carlo_energy(TABLE1["vqe"], -1.0, 10, hamiltonian)


def gradient_and_hessian(h, theta, eps=1e-3):
    f = lambda th: energy_of(h, th)
    n = theta.size
    eye = np.eye(n)
    g = np.array([(f(theta + eps * eye[k]) - f(theta - eps * eye[k])) / (2 * eps) for k in range(n)])
    hess = np.array([[(f(theta + eps * (eye[i] + eye[j])) - f(theta + eps * (eye[i] - eye[j]))
                       - f(theta - eps * (eye[i] - eye[j])) + f(theta - eps * (eye[i] + eye[j]))) / (4 * eps**2)
                      for j in range(n)] for i in range(n)])
    return g, hess


def test_mc_width_linear_where_gradient_dominates(hamiltonian):
    theta = np.random.default_rng(0).uniform(-np.pi, np.pi, 16)
    g, _ = gradient_and_hessian(hamiltonian, theta)
    for sigma in (1e-3, 2e-3, 4e-3):
        d = monte_carlo_energy(theta, sigma, 2000, hamiltonian, SPEC, seed=1)
        assert d.std == pytest.approx(np.linalg.norm(g) * sigma, rel=0.1)


def test_mc_near_optimum_follows_second_order_propagation(hamiltonian):
    # near a minimum the curvature term sets both the shift of the mean and most of the width
    theta = np.array(TABLE1["vqe"])
    g, hess = gradient_and_hessian(hamiltonian, theta)
    point = energy_of(hamiltonian, theta)
    for sigma in (1e-3, 2e-3):
        d = monte_carlo_energy(theta, sigma, 4000, hamiltonian, SPEC, seed=2)
        shift = sigma**2 / 2 * np.trace(hess)
        width = np.sqrt(sigma**2 * g @ g + sigma**4 / 2 * np.trace(hess @ hess))
        assert abs(d.mean - point - shift) <= 5 * d.standard_error
        assert d.std == pytest.approx(width, rel=0.1)
