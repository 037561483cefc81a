"""Reduction from EQUIPARTITION to the cardinality decision version of C-KP.

For weights ``w`` (``n`` even, ``W = sum w``, ``w_max = max w``) item ``k``
gets demand ``w_k + i * beta * (w_max - w_k)`` with
``beta^2 = W / (n w_max - W)`` and the capacity

    C^2 = (W/2)^2 + beta^2 (n w_max / 2 - W / 2)^2.

Any subset of at least ``n/2`` items has its demand sum above the line
``im = beta (n/2 * w_max - re)``, which touches the disk of radius ``C``
exactly at ``P = (W/2, beta (n w_max/2 - W/2))``.  So such a subset fits iff
it has exactly ``n/2`` items and real part ``W/2``, i.e. iff it is an
equipartition.

``beta`` is usually irrational; the imaginary parts are stored as integer
multipliers of ``beta`` (``Instance.im_scale_sq = beta^2``), which keeps every
feasibility test rational.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import (
    CapacitySpec,
    ComplexDemand,
    Instance,
    Item,
    Kind,
    ScaledFeasibility,
    is_feasible,
    oracle_limit,
)
from .errors import ContractError, OracleSizeError


@dataclass(frozen=True)
class EquipartitionInput:
    weights: tuple[int, ...]

    def __post_init__(self):
        w = tuple(self.weights)
        if any(isinstance(x, bool) or not isinstance(x, int) for x in w):
            raise ContractError("equipartition weights must be integers")
        if any(x < 1 for x in w):
            raise ContractError("equipartition weights must be positive")
        if not w or len(w) % 2:
            raise ContractError(f"equipartition needs an even, nonzero count (got {len(w)})")
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def total(self) -> int:
        return sum(self.weights)

    @property
    def w_max(self) -> int:
        return max(self.weights)


@dataclass(frozen=True)
class ReducedInstance:
    instance: Instance
    cardinality_bound: int
    beta_sq: Fraction
    c_sq: Fraction
    source: EquipartitionInput


def beta_squared(inp: EquipartitionInput) -> Fraction:
    n, W, wm = inp.n, inp.total, inp.w_max
    if n * wm == W:  # all weights equal
        return Fraction(0)
    return Fraction(W, n * wm - W)


def capacity_squared(inp: EquipartitionInput, beta_sq: Fraction) -> Fraction:
    half_w = Fraction(inp.total, 2)
    gap = Fraction(inp.n * inp.w_max, 2) - half_w
    return half_w * half_w + beta_sq * gap * gap


def reduce_equipartition(inp: EquipartitionInput | Iterable[int]) -> ReducedInstance:
    if not isinstance(inp, EquipartitionInput):
        inp = EquipartitionInput(tuple(inp))
    b2 = beta_squared(inp)
    c2 = capacity_squared(inp, b2)
    wm = inp.w_max
    items = tuple(Item(k, ComplexDemand(w, wm - w), 1) for k, w in enumerate(inp.weights))
    # beta = 0 only when all weights are equal, and then every multiplier is 0
    scale = b2 if b2 else Fraction(1)
    instance = Instance(items, CapacitySpec(c2), Kind.CKP, scale)
    return ReducedInstance(instance, inp.n // 2, b2, c2, inp)


def _guard(n: int, limit: int | None):
    limit = oracle_limit() if limit is None else limit
    if n > limit:
        raise OracleSizeError(f"decision oracle refuses n={n} (limit {limit})")


def feasible_aggregates(reduced: ReducedInstance, limit: int | None = None):
    """All ``(count, sum re, sum im-multiplier)`` of feasible subsets.

    Feasibility depends on a subset only through these sums, so this set
    stands in for the (much larger) family of feasible subsets.  Sums are
    returned as Fractions.
    """
    inst = reduced.instance
    _guard(inst.n, limit)
    feas = ScaledFeasibility(inst)
    reach = {(0, 0, 0)}
    for k in range(inst.n):
        r, i = feas.re[k], feas.im[k]
        grown = {(c + 1, a + r, b + i) for c, a, b in reach if feas.ok(a + r, b + i)}
        reach |= grown
    return {(c, Fraction(a, feas.lr), Fraction(b, feas.li)) for c, a, b in reach}


def decide_ckp_cardinality(reduced: ReducedInstance, limit: int | None = None) -> bool:
    """Is there a feasible subset with at least ``n/2`` items?"""
    m = reduced.cardinality_bound
    return any(c >= m for c, _, _ in feasible_aggregates(reduced, limit))


def equipartition_brute(inp: EquipartitionInput | Iterable[int], limit: int | None = None) -> bool:
    if not isinstance(inp, EquipartitionInput):
        inp = EquipartitionInput(tuple(inp))
    _guard(inp.n, limit)
    if inp.total % 2:
        return False
    half = inp.total // 2
    return any(sum(c) == half for c in itertools.combinations(inp.weights, inp.n // 2))


def verify_tangency(reduced: ReducedInstance, subset: Iterable[int]) -> bool:
    """A feasible subset of size >= n/2 must be pinned at the tangent point."""
    subset = frozenset(subset)
    inst = reduced.instance
    if len(subset) < reduced.cardinality_bound or not is_feasible(inst, subset):
        return True
    real = sum(inst.items[k].demand.re for k in subset)
    return len(subset) == reduced.cardinality_bound and 2 * real == reduced.source.total


def pinch_holds(reduced: ReducedInstance, limit: int | None = None) -> bool:
    """:func:`verify_tangency` for every feasible subset at once, via aggregates."""
    m, W = reduced.cardinality_bound, reduced.source.total
    return all(c == m and 2 * re == W
               for c, re, _ in feasible_aggregates(reduced, limit) if c >= m)


def slope_identity_holds(reduced: ReducedInstance) -> bool:
    """``beta^2 (n w_max / 2 - W / 2) == W / 2`` (vacuous when beta = 0)."""
    inp = reduced.source
    if reduced.beta_sq == 0:
        return True
    lhs = reduced.beta_sq * (Fraction(inp.n * inp.w_max, 2) - Fraction(inp.total, 2))
    return lhs == Fraction(inp.total, 2)
