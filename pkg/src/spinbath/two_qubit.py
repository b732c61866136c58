"""Exact dynamics of two central qubits dephasing in one shared spin bath.

Both qubits couple through sigma_z to the same bath field, so each bath
pattern drives an independent 4x4 problem built from the pattern-shifted
splittings (eps1 + g_sum, eps2 + g_sum). With no qubit-qubit coupling the
conditional evolution factorizes into two 2x2 unitaries; with coupling the
4x4 conditional Hamiltonian is exponentiated through its eigenbasis. The
reduced pair state is the weighted mixture over patterns, with the same
uncorrelated/correlated weight choice as the single-qubit case, and
entanglement is scored by the standard spin-flip concurrence.

Basis order: qubit 1 is the most significant bit of the 4 amplitudes, so
index 0 is both up and index 3 both down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .configspace import (Backend, ReductionPlan, collapse_classes,
                          enumerate_configs, reduce_weighted)
from .errors import NumericError, ParameterError
from .model import (BathParams, Thermal, bath_sums, class_sums, pure_state,
                    require_uniform)
from .numerics import IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z, hermitian_eig

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10

_SZ1 = np.kron(SIGMA_Z, IDENTITY_2)
_SX1 = np.kron(SIGMA_X, IDENTITY_2)
_SZ2 = np.kron(IDENTITY_2, SIGMA_Z)
_SX2 = np.kron(IDENTITY_2, SIGMA_X)
_SZZ = np.kron(SIGMA_Z, SIGMA_Z)
_SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)
for _m in (_SZ1, _SX1, _SZ2, _SX2, _SZZ, _SPIN_FLIP):
    _m.setflags(write=False)


@dataclass(frozen=True)
class TwoQubitParams:
    """Level spacings and tunnelings of the two qubits, plus their mutual
    sigma_z sigma_z coupling strength lam."""

    eps1: float
    eps2: float
    delta1: float
    delta2: float
    lam: float = 0.0

    def __post_init__(self):
        for name in ("eps1", "eps2", "delta1", "delta2", "lam"):
            if not math.isfinite(float(getattr(self, name))):
                raise ParameterError(f"{name} must be finite")


@dataclass(frozen=True)
class TwoQubitConfigQuantities:
    """Pattern-shifted splittings and rabi frequencies of the two qubits."""

    splitting1: float
    splitting2: float
    rabi1: float
    rabi2: float


def pair_quantities(sys2: TwoQubitParams, g_sum: float) -> TwoQubitConfigQuantities:
    s1 = sys2.eps1 + g_sum
    s2 = sys2.eps2 + g_sum
    return TwoQubitConfigQuantities(
        splitting1=s1, splitting2=s2,
        rabi1=0.5 * math.hypot(s1, sys2.delta1),
        rabi2=0.5 * math.hypot(s2, sys2.delta2),
    )


def bell_state() -> np.ndarray:
    return pure_state([1.0 / math.sqrt(2.0), 0.0, 0.0, 1.0 / math.sqrt(2.0)])


def product_state() -> np.ndarray:
    """Both qubits up: the separable reference state of the presets."""
    return pure_state([1.0, 0.0, 0.0, 0.0])


def _pair_state(psi) -> np.ndarray:
    psi = pure_state(psi)
    if psi.shape != (4,):
        raise ParameterError(f"expected a two-qubit state, got shape {psi.shape}")
    return psi


def conditional_hamiltonian(sys2: TwoQubitParams, g_sum: float) -> np.ndarray:
    """4x4 Hamiltonian of the pair under one bath pattern."""
    pq = pair_quantities(sys2, g_sum)
    return (0.5 * (pq.splitting1 * _SZ1 + sys2.delta1 * _SX1
                   + pq.splitting2 * _SZ2 + sys2.delta2 * _SX2)
            + sys2.lam * _SZZ)


def _logsumexp(values: np.ndarray) -> float:
    top = float(values.max())
    return top + math.log(float(np.exp(values - top).sum()))


def _log_population_average(beta: float, energies: np.ndarray,
                            populations: np.ndarray) -> float:
    """log of sum_j populations_j * exp(-beta * energies_j), populations
    summing to ~1. Stable for any beta; zero populations are skipped."""
    mask = populations > 0.0
    if not mask.any():
        raise NumericError("state has no weight on any eigenvector")
    return _logsumexp(-beta * energies[mask] + np.log(populations[mask]))


class _PairConfigs:
    """Per-pattern data for a two-qubit run: weights plus whatever the
    chosen path (factorized or eigenbasis) needs at every time point."""

    def __init__(self, sys2: TwoQubitParams, bath: BathParams, th: Thermal,
                 plan: ReductionPlan, psi: np.ndarray, correlated: bool,
                 interacting: bool):
        if plan.backend is Backend.COLLAPSE:
            require_uniform(bath)
            self.items = collapse_classes(bath.n_spins, bath.boundary)
            self.position = {(c.k, c.w): i for i, c in enumerate(self.items)}

            def sums(item):
                return class_sums(bath, item.k, item.w)
        else:
            enumerate_configs(bath.n_spins)  # enforce the enumeration cap
            self.items = range(1 << bath.n_spins)
            self.position = None

            def sums(item):
                return bath_sums(bath, item)
        count = len(self.items)
        self.interacting = interacting
        self.psi_mat = psi.reshape(2, 2)
        log_weight = np.empty(count)
        if interacting:
            self.energies = np.empty((count, 4))
            self.vectors = np.empty((count, 4, 4), dtype=complex)
            self.overlaps = np.empty((count, 4), dtype=complex)
        else:
            self.u1 = np.empty(count)
            self.v1 = np.empty(count)
            self.rabi1 = np.empty(count)
            self.u2 = np.empty(count)
            self.v2 = np.empty(count)
            self.rabi2 = np.empty(count)
        for i, item in enumerate(self.items):
            g_sum, eps_sum, chi_sum = sums(item)
            log_weight[i] = -th.beta * (chi_sum + 0.5 * eps_sum)
            if interacting:
                try:
                    energies, vectors = hermitian_eig(conditional_hamiltonian(sys2, g_sum))
                except NumericError as exc:
                    raise NumericError(f"eigendecomposition failed on {item!r}: {exc}") from exc
                self.energies[i] = energies
                self.vectors[i] = vectors
                self.overlaps[i] = vectors.conj().T @ psi
                if correlated and th.beta != 0.0:
                    populations = np.abs(self.overlaps[i]) ** 2
                    log_weight[i] += _log_population_average(th.beta, energies, populations)
            else:
                pq = pair_quantities(sys2, g_sum)
                self.u1[i], self.v1[i] = _unit_direction(pq.splitting1, sys2.delta1, pq.rabi1)
                self.u2[i], self.v2[i] = _unit_direction(pq.splitting2, sys2.delta2, pq.rabi2)
                self.rabi1[i], self.rabi2[i] = pq.rabi1, pq.rabi2
                if correlated and th.beta != 0.0:
                    log_weight[i] += self._factorized_log_factor(sys2, th, pq, psi)
        self.shift = float(log_weight.max())
        self.scaled_weight = np.exp(log_weight - self.shift)

    def _factorized_log_factor(self, sys2: TwoQubitParams, th: Thermal,
                               pq: TwoQubitConfigQuantities, psi: np.ndarray) -> float:
        # <psi| exp(-beta h1) (x) exp(-beta h2) |psi> through the per-qubit
        # eigenbases; populations over the four joint eigenvectors keep it
        # stable at any beta
        h1 = 0.5 * (pq.splitting1 * SIGMA_Z + sys2.delta1 * SIGMA_X)
        h2 = 0.5 * (pq.splitting2 * SIGMA_Z + sys2.delta2 * SIGMA_X)
        e1, vec1 = hermitian_eig(h1)
        e2, vec2 = hermitian_eig(h2)
        amplitudes = vec1.conj().T @ self.psi_mat @ vec2.conj()
        populations = np.abs(amplitudes) ** 2
        energies = e1[:, None] + e2[None, :]
        return _log_population_average(th.beta, energies.ravel(), populations.ravel())

    def index_of(self, item) -> int:
        return item if self.position is None else self.position[(item.k, item.w)]


def _unit_direction(splitting: float, delta: float, rabi: float) -> tuple[float, float]:
    if rabi == 0.0:
        return 0.0, 0.0
    return splitting / (2.0 * rabi), delta / (2.0 * rabi)


def _qubit_unitary(u: float, v: float, rabi: float, t: float) -> np.ndarray:
    cos_a = math.cos(rabi * t)
    sin_a = math.sin(rabi * t)
    return np.array([[cos_a - 1j * sin_a * u, -1j * sin_a * v],
                     [-1j * sin_a * v, cos_a + 1j * sin_a * u]])


def _reduced_state(ctx: _PairConfigs, plan: ReductionPlan, t: float) -> np.ndarray:
    if not math.isfinite(t):
        raise ParameterError(f"time must be finite, got {t}")

    def term(item):
        i = ctx.index_of(item)
        w = ctx.scaled_weight[i]
        if ctx.interacting:
            phases = np.exp(-1j * ctx.energies[i] * t)
            evolved = ctx.vectors[i] @ (phases * ctx.overlaps[i])
        else:
            u1 = _qubit_unitary(ctx.u1[i], ctx.v1[i], ctx.rabi1[i], t)
            u2 = _qubit_unitary(ctx.u2[i], ctx.v2[i], ctx.rabi2[i], t)
            evolved = (u1 @ ctx.psi_mat @ u2.T).ravel()
        projector = np.outer(evolved, evolved.conj())
        row = np.empty(33)
        row[:16] = w * projector.real.ravel()
        row[16:32] = w * projector.imag.ravel()
        row[32] = w
        return row

    sums = reduce_weighted(plan, ctx.items, term, 33)
    normalizer = float(sums[32])
    if not normalizer > 0.0:
        raise NumericError(f"weight normalizer is not positive: {normalizer}")
    rho = (sums[:16] + 1j * sums[16:32]).reshape(4, 4) / normalizer
    rho.setflags(write=False)
    return rho


def propagate_product(sys2: TwoQubitParams, bath: BathParams, th: Thermal,
                      plan: ReductionPlan, psi, t: float,
                      correlated: bool) -> np.ndarray:
    """Reduced pair state at time t via the factorized (uncoupled) path.

    Requires lam == 0 exactly; with coupling the conditional evolution does
    not factorize and propagate_interacting must be used.
    """
    if sys2.lam != 0.0:
        raise ParameterError(
            f"propagate_product requires lam == 0, got {sys2.lam}; "
            "use propagate_interacting"
        )
    psi = _pair_state(psi)
    ctx = _PairConfigs(sys2, bath, th, plan, psi, correlated, interacting=False)
    return _reduced_state(ctx, plan, t)


def propagate_interacting(sys2: TwoQubitParams, bath: BathParams, th: Thermal,
                          plan: ReductionPlan, psi, t: float,
                          correlated: bool) -> np.ndarray:
    """Reduced pair state at time t via per-pattern 4x4 eigendecomposition.

    Valid for any lam, including 0 (where it must agree with the factorized
    path; tests pin that equivalence).
    """
    psi = _pair_state(psi)
    ctx = _PairConfigs(sys2, bath, th, plan, psi, correlated, interacting=True)
    return _reduced_state(ctx, plan, t)


def validate_density(rho, dim: int = 4) -> np.ndarray:
    """Check Hermiticity, unit trace, and positivity; return rho unchanged."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dim, dim):
        raise ParameterError(f"expected a {dim}x{dim} matrix, got shape {rho.shape}")
    herm_dev = float(np.abs(rho - rho.conj().T).max())
    if herm_dev > HERMITICITY_TOL:
        raise ParameterError(f"density matrix not Hermitian: deviation {herm_dev:.3e}")
    trace_dev = abs(complex(np.trace(rho)) - 1.0)
    if trace_dev > TRACE_TOL:
        raise ParameterError(f"density matrix trace off unity by {trace_dev:.3e}")
    smallest = float(np.linalg.eigvalsh(rho).min())
    if smallest < EIGENVALUE_FLOOR:
        raise ParameterError(f"density matrix has eigenvalue {smallest:.3e} below floor")
    return rho


def concurrence(rho) -> float:
    """Spin-flip concurrence of a two-qubit density matrix, in [0, 1].

    Combines the square roots of the eigenvalues of
    rho (sy x sy) rho* (sy x sy), descending, as
    max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)).

    Those square roots are computed as the singular values of W^T F W,
    where F = sy x sy and W = V diag(sqrt(p)) factors rho = W W^dagger:
    W^T F W has Gram matrix W^dagger F conj(W) W^T F W, whose spectrum
    matches rho (F rho* F) on nonzero eigenvalues by AB ~ BA. A direct
    non-Hermitian eigensolve on rho (F rho* F) loses half the digits on
    the degenerate spectra that Bell-like states produce; singular values
    of the symmetric factor stay accurate to machine precision.
    """
    rho = validate_density(rho)
    populations, vectors = np.linalg.eigh(rho)
    factor = vectors * np.sqrt(np.clip(populations, 0.0, None))
    symmetric = factor.T @ _SPIN_FLIP @ factor
    roots = np.linalg.svd(symmetric, compute_uv=False)
    return max(0.0, float(roots[0] - roots[1] - roots[2] - roots[3]))


def concurrence_trajectory(sys2: TwoQubitParams, bath: BathParams, th: Thermal,
                           plan: ReductionPlan, psi, times,
                           correlated: bool) -> list[float]:
    """Concurrence of the evolving pair at each requested time; picks the
    factorized path when lam == 0 and the eigenbasis path otherwise."""
    return [concurrence(rho) for rho in
            density_trajectory(sys2, bath, th, plan, psi, times, correlated)]


def density_trajectory(sys2: TwoQubitParams, bath: BathParams, th: Thermal,
                       plan: ReductionPlan, psi, times, correlated: bool,
                       force_interacting: bool = False) -> list[np.ndarray]:
    """Reduced pair states over a time grid, reusing per-pattern setup."""
    psi = _pair_state(psi)
    arr = np.asarray(times, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ParameterError("times must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("times must be finite")
    if np.any(np.diff(arr) < 0):
        raise ParameterError("times must be ascending")
    interacting = force_interacting or sys2.lam != 0.0
    ctx = _PairConfigs(sys2, bath, th, plan, psi, correlated, interacting)
    return [_reduced_state(ctx, plan, float(t)) for t in arr]
