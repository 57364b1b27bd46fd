"""Classical ground truth: dense Hermitian eigensolvers and closed-form LCU statistics.

Two independent eigensolvers are provided so they can check each other:

* :func:`householder_ql` -- Householder reduction to real tridiagonal form
  followed by implicit-shift QL iterations.
* :func:`jacobi_eigh` -- cyclic complex Jacobi rotations.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import MAX_DENSE_QUBITS, PauliSum, to_dense

HERMITIAN_TOLERANCE = 1e-12
UNDEFINED_SUCCESS = 1e-24


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # column k pairs with eigenvalues[k]

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def first_excited_energy(self) -> float:
        """Lowest eigenvalue strictly above the ground level."""
        e0 = self.eigenvalues[0]
        above = self.eigenvalues[self.eigenvalues > e0 + 1e-9]
        return float(above[0]) if above.size else float(e0)

    @property
    def gap(self) -> float:
        return self.first_excited_energy - self.ground_energy

    def projector(self, energy: float, tol: float = 1e-9) -> np.ndarray:
        """Projector onto the eigenspace of ``energy`` (degeneracy-safe comparison)."""
        cols = self.eigenvectors[:, np.abs(self.eigenvalues - energy) < tol]
        return cols @ cols.conj().T

    def residuals(self, matrix: np.ndarray) -> np.ndarray:
        v = self.eigenvectors
        return np.linalg.norm(matrix @ v - v * self.eigenvalues, axis=0)


def _check_hermitian(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise OracleError("matrix must be square")
    if np.max(np.abs(a - a.conj().T), initial=0.0) > HERMITIAN_TOLERANCE * max(1.0, np.max(np.abs(a))):
        raise OracleError("matrix is not Hermitian")
    return a


def tridiagonalize(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Unitary ``q`` with ``q^H a q`` real symmetric tridiagonal.

    Returns ``(diag, offdiag, q)``; ``offdiag[k]`` sits at ``(k+1, k)`` and
    is non-negative.
    """
    a = _check_hermitian(a).copy()
    n = a.shape[0]
    q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = a[k + 1:, k].copy()
        xnorm = np.linalg.norm(x)
        if xnorm < 1e-300:
            continue
        phase = x[0] / abs(x[0]) if abs(x[0]) > 0 else 1.0
        v = x.copy()
        v[0] += phase * xnorm
        v /= np.linalg.norm(v)
        # H = I - 2 v v^H on rows/cols k+1..n-1
        a[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ a[k + 1:, :])
        a[:, k + 1:] -= 2.0 * np.outer(a[:, k + 1:] @ v, v.conj())
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v.conj())
    diag = a.diagonal().real.copy()
    sub = a.diagonal(-1).copy()
    # diagonal phase transform makes the subdiagonal real and non-negative
    phases = np.ones(n, dtype=complex)
    for k in range(n - 1):
        mag = abs(sub[k])
        phases[k + 1] = phases[k] * (sub[k] / mag if mag > 0 else 1.0)
    q = q * phases
    return diag, np.abs(sub), q


def tridiagonal_ql(diag: np.ndarray, offdiag: np.ndarray, z: np.ndarray,
                   max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Implicit-shift QL on a symmetric tridiagonal matrix, rotating the columns of ``z``."""
    d = np.array(diag, dtype=float)
    n = d.size
    e = np.zeros(n)
    e[: n - 1] = offdiag
    z = np.array(z, dtype=complex)
    eps = np.finfo(float).eps
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise OracleError("QL iteration did not converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + np.copysign(r, g))
            s = c = 1.0
            p = 0.0
            deflated = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi1 = z[:, i + 1].copy()
                z[:, i + 1] = s * z[:, i] + c * zi1
                z[:, i] = c * z[:, i] - s * zi1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    order = np.argsort(d, kind="stable")
    return d[order], z[:, order]


def householder_ql(a: np.ndarray) -> Spectrum:
    diag, off, q = tridiagonalize(a)
    values, vectors = tridiagonal_ql(diag, off, q)
    return Spectrum(values, vectors)


def jacobi_eigh(a: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100) -> Spectrum:
    """Cyclic Jacobi for Hermitian matrices."""
    a = _check_hermitian(a).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(a), 1e-300)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(a.diagonal()))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                g = np.eye(2, dtype=complex)
                g[0, 0] = c
                g[1, 1] = c
                g[0, 1] = s * phase
                g[1, 0] = -s * np.conj(phase)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ g
                a[q, p] = a[p, q] = 0.0
    else:
        raise OracleError("Jacobi sweeps did not converge")
    values = a.diagonal().real
    order = np.argsort(values, kind="stable")
    return Spectrum(values[order], v[:, order])


def diagonalize(h: PauliSum | np.ndarray, method: str = "householder-ql") -> Spectrum:
    """Full spectrum of a Pauli sum (or a dense Hermitian matrix)."""
    if isinstance(h, PauliSum):
        if h.num_qubits > MAX_DENSE_QUBITS:
            raise OracleError(f"register of {h.num_qubits} qubits is too large")
        matrix = to_dense(h)
    else:
        matrix = np.asarray(h, dtype=complex)
    if method == "householder-ql":
        return householder_ql(matrix)
    if method == "jacobi":
        return jacobi_eigh(matrix)
    raise OracleError(f"unknown eigensolver {method!r}")


def exact_transition(coeffs) -> tuple[float, float]:
    """Closed-form ``(p_success, p_transition)`` for the two-level excitation operator.

    The operator acts on (ground, excited) as
    ``[[a + g, b - i d], [b + i d, a - g]]``; the LCU starts in the ground
    level and succeeds with probability ``|O|ground>|^2 / norm1^2``.
    """
    a, b, g, d = coeffs.alpha, coeffs.beta, coeffs.gamma, coeffs.delta
    norm1 = abs(a) + abs(b) + abs(g) + abs(d)
    if norm1 == 0:
        raise OracleError("zero operator")
    stay = (a + g) ** 2
    move = b * b + d * d
    out = stay + move
    p_success = out / norm1**2
    # O|ground> vanishes up to rounding: no post-selected output to classify
    p_transition = move / out if p_success > UNDEFINED_SUCCESS else float("nan")
    return float(p_success), float(p_transition)
