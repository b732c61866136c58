"""Bath configuration enumeration and deterministic weighted reductions.

Two backends feed every propagator sum:

  enumerate  every bit pattern of N bath spins, exact for arbitrary per-site
             parameters, cost 2^N;
  collapse   degeneracy classes (k down spins, w domain walls) that share all
             per-pattern scalars when the bath parameters are uniform, cost
             O(N^2) classes, which is what makes N = 50 runs instant.

Reductions are bit-identical regardless of worker count: terms accumulate in
fixed index blocks with Kahan compensation, and block sums combine through a
pairwise tree whose shape depends only on the block count.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ParameterError, ReductionError
from .model import Boundary
from .numerics import _pairwise_over_rows

ENUMERATION_CAP = 24
COLLAPSE_CAP = 10_000
THREADS_ENV_VAR = "SPINBATH_THREADS"


class Backend(enum.Enum):
    ENUMERATE = "enumerate"
    COLLAPSE = "collapse"


@dataclass(frozen=True)
class ConfigClass:
    """All bath patterns sharing a down-spin count k and wall count w.

    Under uniform parameters every pattern in the class has identical scalars,
    so one term evaluation weighted by multiplicity replaces the whole class.
    """

    multiplicity: int
    k: int
    w: int


@dataclass(frozen=True)
class ReductionPlan:
    """How to sweep the configuration space.

    worker_hint = 0 means "pick automatically"; the SPINBATH_THREADS
    environment variable caps the effective worker count either way.
    """

    backend: Backend = Backend.ENUMERATE
    chunk_size: int = 4096
    worker_hint: int = 0

    def __post_init__(self):
        if not isinstance(self.backend, Backend):
            object.__setattr__(self, "backend", Backend(self.backend))
        if self.chunk_size < 1:
            raise ParameterError(f"chunk_size must be positive, got {self.chunk_size}")
        if self.worker_hint < 0:
            raise ParameterError(f"worker_hint must be >= 0, got {self.worker_hint}")


def enumerate_configs(n_spins: int, cap: int = ENUMERATION_CAP):
    """Yield every bath bitmask for n_spins spins in ascending order."""
    if n_spins < 1:
        raise ParameterError(f"n_spins must be >= 1, got {n_spins}")
    if n_spins > cap:
        raise CapacityError(
            f"enumerating 2^{n_spins} configurations exceeds the cap of 2^{cap}; "
            "use the collapse backend (uniform parameters required)"
        )
    return iter(range(1 << n_spins))


def collapse_classes(n_spins: int, boundary: Boundary = Boundary.OPEN) -> list[ConfigClass]:
    """Degeneracy classes (multiplicity, k, w) for a chain of n_spins spins.

    Multiplicities come from run combinatorics: a pattern with k down spins
    arranged in r maximal runs has w = r - 1 walls on an open chain, and an
    even wall count on a ring. Totals are exact integers and sum to 2^N.
    """
    if n_spins < 1:
        raise ParameterError(f"n_spins must be >= 1, got {n_spins}")
    if n_spins > COLLAPSE_CAP:
        raise CapacityError(f"n_spins {n_spins} exceeds the collapse cap {COLLAPSE_CAP}")
    n = n_spins
    classes: list[ConfigClass] = []
    for k in range(n + 1):
        if k == 0 or k == n:
            classes.append(ConfigClass(1, k, 0))
            continue
        if boundary is Boundary.PERIODIC:
            # j runs of down spins and j of up spins around the ring, w = 2j
            for j in range(1, min(k, n - k) + 1):
                count = n * math.comb(k - 1, j - 1) * math.comb(n - k - 1, j - 1)
                mult, rem = divmod(count, j)
                if rem:
                    raise ParameterError(f"internal: non-integer class count at {(n, k, j)}")
                classes.append(ConfigClass(mult, k, 2 * j))
        else:
            # open chain: down runs a, up runs b with |a-b| <= 1, w = a+b-1
            for w in range(1, n):
                if w % 2:
                    j = (w - 1) // 2  # a = b = j+1
                    mult = 2 * math.comb(k - 1, j) * math.comb(n - k - 1, j)
                else:
                    j = w // 2  # {a, b} = {j+1, j} in either order
                    mult = (math.comb(k - 1, j) * math.comb(n - k - 1, j - 1)
                            + math.comb(k - 1, j - 1) * math.comb(n - k - 1, j))
                if mult:
                    classes.append(ConfigClass(mult, k, w))
    classes.sort(key=lambda c: (c.k, c.w))
    return classes


def _effective_workers(plan: ReductionPlan, n_blocks: int) -> int:
    workers = plan.worker_hint if plan.worker_hint > 0 else (os.cpu_count() or 1)
    env = os.environ.get(THREADS_ENV_VAR)
    if env is not None:
        try:
            cap = int(env)
        except ValueError as exc:
            raise ParameterError(f"{THREADS_ENV_VAR} must be an integer, got {env!r}") from exc
        if cap < 1:
            raise ParameterError(f"{THREADS_ENV_VAR} must be >= 1, got {cap}")
        workers = min(workers, cap)
    return max(1, min(workers, n_blocks))


def _reduce_block(block, term, dim: int) -> np.ndarray:
    total = np.zeros(dim, dtype=float)
    carry = np.zeros(dim, dtype=float)
    for item in block:
        try:
            value = np.asarray(term(item), dtype=float)
        except Exception as exc:
            raise ReductionError(f"term failed on {item!r}: {exc}", item=item) from exc
        if value.shape != (dim,):
            raise ReductionError(
                f"term returned shape {value.shape} instead of ({dim},) on {item!r}",
                item=item,
            )
        if isinstance(item, ConfigClass):
            value = value * float(item.multiplicity)
        # Kahan step: compensated add keeps in-block order error near one ulp
        adjusted = value - carry
        bumped = total + adjusted
        carry = (bumped - total) - adjusted
        total = bumped
    return total


def reduce_weighted(plan: ReductionPlan, items, term, dim: int) -> np.ndarray:
    """Sum term(item) over all items, multiplicity-weighted for ConfigClass
    items, with a summation order fixed by index alone.

    items is the configuration stream (masks from enumerate_configs or
    classes from collapse_classes). term must be pure; failures are re-raised
    as ReductionError with the offending item attached. The result is
    bit-identical for any worker count.
    """
    if dim < 1:
        raise ParameterError(f"dim must be >= 1, got {dim}")
    every = list(items)
    if not every:
        return np.zeros(dim, dtype=float)
    blocks = [every[i:i + plan.chunk_size] for i in range(0, len(every), plan.chunk_size)]
    workers = _effective_workers(plan, len(blocks))
    if workers == 1 or len(blocks) == 1:
        partials = [_reduce_block(b, term, dim) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(lambda b: _reduce_block(b, term, dim), blocks))
    return _pairwise_over_rows(np.stack(partials, axis=0))
