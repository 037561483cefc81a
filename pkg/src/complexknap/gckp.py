"""GC-KP: three-constraint knapsack PTAS and the two-candidate ``alg_c``.

The PTAS guesses up to ``h = ceil(3/eps)`` high-value items, keeps only
items no more valuable than the cheapest guess, solves the LP relaxation on
what is left of the three capacities and rounds the fractional coordinates
down.  The LP is solved exactly with a bounded-variable simplex, so a basic
optimum has at most three fractional coordinates.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    Instance,
    Kind,
    Solution,
    as_rational,
    classify_region,
    preprocess,
    scaled_projection,
    tie_key,
)
from .ckp import best_d2_singleton
from .errors import ContractError, NeedsRationalMagnitude, ResourceError

DEFAULT_SEED_BUDGET = 100_000
_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class ThreeDItem:
    id: int
    weights: tuple[Fraction, Fraction, Fraction]
    value: Fraction

    def __post_init__(self):
        w = tuple(as_rational(x) for x in self.weights)
        if len(w) != 3 or any(x < 0 for x in w):
            raise ContractError(f"item {self.id}: need three nonnegative weights")
        if w[0] != w[1] + w[2]:
            raise ContractError(f"item {self.id}: projection weight must equal re + im")
        object.__setattr__(self, "weights", w)
        v = as_rational(self.value)
        if v <= 0:
            raise ContractError(f"item {self.id}: value must be positive")
        object.__setattr__(self, "value", v)

    @classmethod
    def from_demand(cls, id, demand, value) -> "ThreeDItem":
        return cls(id, (scaled_projection(demand), demand.re, demand.im), value)


@dataclass(frozen=True)
class FractionalSolution:
    levels: tuple[Fraction, ...]  # aligned with the input item order
    objective: Fraction

    def fractional(self) -> list[int]:
        return [k for k, x in enumerate(self.levels) if 0 < x < 1]


@dataclass(frozen=True)
class Selection:
    selected: frozenset[int]
    total_value: Fraction

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.selected))


def lp_relax_solve(items: Sequence[ThreeDItem], residual_caps) -> FractionalSolution:
    """Maximise ``sum v_k x_k`` s.t. three weight rows ``<= caps``, ``0 <= x <= 1``.

    Primal simplex with upper bounds handled implicitly (3 rows, one slack
    per row).  Entering and leaving choices follow Bland's lowest-index rule.
    """
    caps = [as_rational(c) for c in residual_caps]
    if len(caps) != 3 or any(c < 0 for c in caps):
        raise ContractError(f"residual capacities must be three nonnegative rationals, got {caps}")
    n = len(items)
    nv = n + 3  # x_0..x_{n-1}, then slacks
    cost = [it.value for it in items] + [_ZERO] * 3
    upper = [_ONE] * n + [None] * 3
    rows = [[it.weights[i] for it in items] + [_ONE if s == i else _ZERO for s in range(3)]
            for i in range(3)]
    basis = [n, n + 1, n + 2]
    val = list(caps)
    at_upper = [False] * nv

    for _ in range(50 * (nv + 3) ** 2):
        in_basis = set(basis)
        entering = None
        for j in range(nv):
            if j in in_basis:
                continue
            d = cost[j] - sum(cost[basis[i]] * rows[i][j] for i in range(3))
            if (d > 0 and not at_upper[j]) or (d < 0 and at_upper[j]):
                entering = j
                break
        if entering is None:
            break
        j = entering
        step = -1 if at_upper[j] else 1
        # candidates: (t, variable index, row or None for a bound flip)
        best = None
        if upper[j] is not None:
            best = (upper[j], j, None)
        for i in range(3):
            rate = step * rows[i][j]  # basic i moves by -rate * t
            b = basis[i]
            if rate > 0:
                t = val[i] / rate
            elif rate < 0 and upper[b] is not None:
                t = (upper[b] - val[i]) / -rate
            else:
                continue
            if best is None or (t, b) < (best[0], best[1]):
                best = (t, b, i)
        t, _, r = best
        for i in range(3):
            val[i] -= step * t * rows[i][j]
        if r is None:
            at_upper[j] = not at_upper[j]
            continue
        leaving = basis[r]
        at_upper[leaving] = upper[leaving] is not None and val[r] == upper[leaving]
        new_value = (upper[j] if at_upper[j] else _ZERO) + step * t
        piv = rows[r][j]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(3):
            if i != r and rows[i][j] != 0:
                f = rows[i][j]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        basis[r] = j
        val[r] = new_value
        at_upper[j] = False
    else:
        raise RuntimeError("simplex did not terminate")

    x = [_ONE if at_upper[k] else _ZERO for k in range(n)]
    for i, b in enumerate(basis):
        if b < n:
            x[b] = val[i]
    objective = sum((it.value * xk for it, xk in zip(items, x)), _ZERO)
    return FractionalSolution(tuple(x), objective)


def seed_size(epsilon: Fraction) -> int:
    return math.ceil(Fraction(3) / epsilon)


def _fits(total, caps):
    return all(t <= c for t, c in zip(total, caps))


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def _selection_key(by_id, ids):
    ids = tuple(sorted(ids))
    return (-sum((by_id[i].value for i in ids), _ZERO),
            sum((by_id[i].weights[0] for i in ids), _ZERO), ids)


def ptas_3kp(items: Sequence[ThreeDItem], caps, epsilon,
             seed_budget: int = DEFAULT_SEED_BUDGET) -> Selection:
    """(1 - eps)-approximation for the three-constraint knapsack."""
    eps = as_rational(epsilon)
    if not 0 < eps < 1:
        raise ContractError(f"epsilon must lie in (0, 1), got {eps}")
    caps = tuple(as_rational(c) for c in caps)
    if len(caps) != 3 or any(c < 0 for c in caps):
        raise ContractError("caps must be three nonnegative rationals")
    live = [it for it in items if _fits(it.weights, caps)]
    by_id = {it.id: it for it in live}
    n = len(live)
    h = min(n, seed_size(eps))
    seeds = sum(math.comb(n, k) for k in range(h + 1))
    if seeds > seed_budget:
        raise ResourceError(f"ptas_3kp: n={n} with eps={eps} needs {seeds} seed sets "
                            f"(budget {seed_budget})")
    zero3 = (_ZERO, _ZERO, _ZERO)
    best_key, best_ids = None, ()
    for size in range(h + 1):
        for seed in itertools.combinations(live, size):
            load = zero3
            for it in seed:
                load = _add(load, it.weights)
            if not _fits(load, caps):
                continue
            residual = tuple(c - l for c, l in zip(caps, load))
            floor_value = min((it.value for it in seed), default=None)
            taken = {it.id for it in seed}
            rest = [it for it in live if it.id not in taken
                    and (floor_value is None or it.value <= floor_value)]
            total = zero3
            for it in rest:
                total = _add(total, it.weights)
            if _fits(total, residual):
                extra = [it.id for it in rest]
            else:
                lp = lp_relax_solve(rest, residual)
                extra = [it.id for it, x in zip(rest, lp.levels) if x == 1]
            ids = tuple(sorted(taken.union(extra)))
            key = _selection_key(by_id, ids)
            if best_key is None or key < best_key:
                best_key, best_ids = key, ids
    return Selection(frozenset(best_ids), sum((by_id[i].value for i in best_ids), _ZERO))


def alg_c(instance: Instance, epsilon, seed_budget: int = DEFAULT_SEED_BUDGET) -> Solution:
    """Better of the 3-KP PTAS over region D1 and the best D2 singleton."""
    if instance.kind is not Kind.GCKP:
        raise ContractError(f"alg_c expects a gc-kp instance, got {instance.kind.value}")
    if instance.symbolic_imaginary:
        raise ContractError("alg_c does not accept symbolic-imaginary instances")
    cap = instance.capacity
    if cap.magnitude_exact is None:
        raise NeedsRationalMagnitude("alg_c")
    pre = preprocess(instance)
    items = [ThreeDItem.from_demand(it.id, it.demand, it.value) for it in pre.items]
    s1 = ptas_3kp(items, (cap.magnitude_exact, cap.cap_re, cap.cap_im), epsilon, seed_budget).ids
    # classify_region checks |d| <= C, re + im > C and both axis caps
    s2 = best_d2_singleton(pre, classify_region)
    chosen = min(s1, s2, key=lambda ids: tie_key(pre, ids))
    src = pre.source_ids
    return Solution.of(instance, (src[i] for i in chosen))

