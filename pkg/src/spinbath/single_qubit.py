"""Exact reduced dynamics of one central qubit.

Because the bath couples through sigma_z only, the qubit evolves under a
different 2x2 Hamiltonian for each bath pattern, and the reduced state is the
thermally weighted mixture of those conditional evolutions. On the Bloch
sphere the mixture is a linear map: p(t) = S(t) p(0) / Z, where S sums a 3x3
rotation-like kernel over patterns and Z sums the weights. A correlated
preparation (system projected out of a jointly thermalized state) only
changes the weights, multiplying each by the pattern's correlation factor.

Entry kernel, per pattern, with c = cos(2*rabi*t), s = sin(2*rabi*t) and the
unit direction (u, v) = (splitting, delta)/(2*rabi):

        [ c + v^2 (1-c)    -u s       u v (1-c) ]
        [     u s            c          -v s    ]
        [ u v (1-c)          v s     c + u^2 (1-c) ]

u^2 + v^2 = 1, so every entry stays bounded; rabi == 0 degenerates to the
identity map with no special casing beyond u = v = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .configspace import (Backend, ReductionPlan, collapse_classes,
                          enumerate_configs, reduce_weighted)
from .errors import NumericError, ParameterError
from .model import (BathParams, ConfigQuantities, SystemParams, Thermal,
                    bloch_components, class_quantities, config_quantities,
                    log_correlation_factor, pure_state, require_uniform)
from .numerics import IDENTITY_2, SIGMA_X, SIGMA_Z


@dataclass(frozen=True)
class BlochVector:
    px: float
    py: float
    pz: float

    @property
    def norm(self) -> float:
        return math.sqrt(self.px ** 2 + self.py ** 2 + self.pz ** 2)

    def as_array(self) -> np.ndarray:
        return np.array([self.px, self.py, self.pz], dtype=float)

    @classmethod
    def of_state(cls, psi) -> "BlochVector":
        return cls(*bloch_components(psi))


@dataclass(frozen=True)
class BlochPropagator:
    """Raw entry sums s, their normalizer, and the shared log-weight shift.

    The physical normalizer (the partition-style sum the entries are divided
    by) is normalizer * exp(log_scale); the shift cancels in apply() and is
    kept so weights never overflow at large beta*N.
    """

    s: np.ndarray
    normalizer: float
    log_scale: float = 0.0

    def normalized(self) -> np.ndarray:
        return self.s / self.normalizer

    def apply(self, p: BlochVector) -> BlochVector:
        out = self.normalized() @ p.as_array()
        return BlochVector(float(out[0]), float(out[1]), float(out[2]))


@dataclass(frozen=True)
class ConditionalUnitary:
    """One bath pattern's qubit unitary, global phases split off.

    The full unitary is exp(1j*(phases[0] + phases[1])) * u, with phases[0]
    the bond-energy phase and phases[1] the bath-level phase. Both cancel in
    any reduced density matrix, so downstream sums use u alone.
    """

    u: np.ndarray
    phases: tuple[float, float]


def _direction(splitting: float, delta: float, rabi: float) -> tuple[float, float]:
    # unit vector (u, v); rabi == 0 forces splitting == delta == 0, where the
    # conditional Hamiltonian vanishes and any direction works
    if rabi == 0.0:
        return 0.0, 0.0
    return splitting / (2.0 * rabi), delta / (2.0 * rabi)


def conditional_unitary(sys: SystemParams, q: ConfigQuantities, t: float) -> ConditionalUnitary:
    """Qubit evolution operator for one bath pattern, phases split off."""
    if not math.isfinite(t):
        raise ParameterError(f"time must be finite, got {t}")
    u, v = _direction(q.splitting, sys.delta, q.rabi)
    angle = q.rabi * t
    cos_a, sin_a = math.cos(angle), math.sin(angle)
    mat = cos_a * IDENTITY_2 - 1j * sin_a * (u * SIGMA_Z + v * SIGMA_X)
    return ConditionalUnitary(u=mat, phases=(-q.chi_sum * t, -0.5 * q.eps_sum * t))


class _WeightedConfigs:
    """Per-pattern data for one (bath, thermal, preparation) combination.

    Holds the configuration stream plus parallel arrays of the direction
    (u, v), the rabi frequency, and the weight scaled by exp(-shift) with
    shift = max log weight, so the largest scaled weight is exactly 1.
    """

    def __init__(self, sys: SystemParams, bath: BathParams, th: Thermal,
                 plan: ReductionPlan, psi, correlated: bool):
        if correlated and psi is None:
            raise ParameterError("correlated weights need the prepared state")
        if plan.backend is Backend.COLLAPSE:
            require_uniform(bath)
            self.items = collapse_classes(bath.n_spins, bath.boundary)
            self.position = {(c.k, c.w): i for i, c in enumerate(self.items)}

            def quantity(item):
                return class_quantities(sys, bath, th, item.k, item.w)
        else:
            enumerate_configs(bath.n_spins)  # enforce the enumeration cap
            self.items = range(1 << bath.n_spins)
            self.position = None

            def quantity(item):
                return config_quantities(sys, bath, th, item)
        count = len(self.items)
        self.u = np.empty(count)
        self.v = np.empty(count)
        self.rabi = np.empty(count)
        log_weight = np.empty(count)
        for i, item in enumerate(self.items):
            q = quantity(item)
            self.u[i], self.v[i] = _direction(q.splitting, sys.delta, q.rabi)
            self.rabi[i] = q.rabi
            log_weight[i] = q.log_weight
            if correlated:
                log_weight[i] += log_correlation_factor(sys, th, q, psi)
        self.shift = float(log_weight.max())
        self.scaled_weight = np.exp(log_weight - self.shift)

    def index_of(self, item) -> int:
        return item if self.position is None else self.position[(item.k, item.w)]


def _propagator(ctx: _WeightedConfigs, plan: ReductionPlan, t: float) -> BlochPropagator:
    if not math.isfinite(t):
        raise ParameterError(f"time must be finite, got {t}")

    def term(item):
        i = ctx.index_of(item)
        u, v, w = ctx.u[i], ctx.v[i], ctx.scaled_weight[i]
        angle2 = 2.0 * ctx.rabi[i] * t
        cos2, sin2 = math.cos(angle2), math.sin(angle2)
        rem = 1.0 - cos2
        return (
            w * (cos2 + v * v * rem), -w * u * sin2, w * u * v * rem,
            w * u * sin2, w * cos2, -w * v * sin2,
            w * u * v * rem, w * v * sin2, w * (cos2 + u * u * rem),
            w,
        )

    sums = reduce_weighted(plan, ctx.items, term, 10)
    normalizer = float(sums[9])
    if not normalizer > 0.0:
        raise NumericError(f"weight normalizer is not positive: {normalizer}")
    matrix = sums[:9].reshape(3, 3).copy()
    matrix.setflags(write=False)
    return BlochPropagator(s=matrix, normalizer=normalizer, log_scale=ctx.shift)


def propagator_uncorrelated(sys: SystemParams, bath: BathParams, th: Thermal,
                            plan: ReductionPlan, t: float) -> BlochPropagator:
    """Bloch map at time t for a product (independently thermal) preparation."""
    ctx = _WeightedConfigs(sys, bath, th, plan, psi=None, correlated=False)
    return _propagator(ctx, plan, t)


def propagator_correlated(sys: SystemParams, bath: BathParams, th: Thermal,
                          plan: ReductionPlan, psi, t: float) -> BlochPropagator:
    """Bloch map at time t for a jointly thermalized, projectively prepared
    state. psi is both the prepared qubit state and the state whose pattern
    weights the map carries."""
    psi = pure_state(psi)
    if psi.shape != (2,):
        raise ParameterError(f"expected a single-qubit state, got shape {psi.shape}")
    ctx = _WeightedConfigs(sys, bath, th, plan, psi, correlated=True)
    return _propagator(ctx, plan, t)


def _check_times(times) -> np.ndarray:
    arr = np.asarray(times, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ParameterError("times must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("times must be finite")
    if np.any(np.diff(arr) < 0):
        raise ParameterError("times must be ascending")
    return arr


def bloch_trajectory(sys: SystemParams, bath: BathParams, th: Thermal,
                     plan: ReductionPlan, psi, times,
                     correlated: bool) -> list[BlochVector]:
    """Bloch vector of the prepared state psi at each requested time."""
    psi = pure_state(psi)
    if psi.shape != (2,):
        raise ParameterError(f"expected a single-qubit state, got shape {psi.shape}")
    arr = _check_times(times)
    ctx = _WeightedConfigs(sys, bath, th, plan, psi, correlated)
    start = BlochVector.of_state(psi)
    return [_propagator(ctx, plan, float(t)).apply(start) for t in arr]
