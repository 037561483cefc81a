"""C-KP approximation algorithms.

``alg_a`` projects every demand onto the pi/4 line, solves the resulting
1-D problem (the triangle D1) with an FPTAS, and compares that against the
best single item from the circular segment D2.  ``alg_b`` folds the D2
candidates into the 1-D problem as full-capacity items so a single monotone
1-D run decides everything.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .core import (
    Instance,
    Kind,
    Region,
    Solution,
    as_rational,
    classify_region,
    le_sqrt,
    preprocess,
    scaled_projection,
    tie_key,
)
from .errors import ContractError
from .knapsack1d import FULL, OneDItem, fptas, monotone_fptas


def _check_ckp(instance: Instance, name: str) -> None:
    if instance.kind not in (Kind.CKP, Kind.ONE_KP):
        raise ContractError(f"{name} expects a c-kp instance, got {instance.kind.value}")
    if instance.symbolic_imaginary:
        raise ContractError(f"{name} does not accept symbolic-imaginary instances")


def _lift(pre: Instance, original: Instance, ids) -> Solution:
    src = pre.source_ids
    return Solution.of(original, (src[i] for i in ids))


def best_d2_singleton(instance: Instance, region=classify_region) -> tuple[int, ...]:
    """Highest-value item whose demand lies in D2 (smallest id on ties)."""
    best = None
    for it in instance.items:
        if region(it.demand, instance.capacity) is Region.D2:
            if best is None or it.value > best.value:
                best = it
    return () if best is None else (best.id,)


def alg_a(instance: Instance, epsilon) -> Solution:
    """Better of the FPTAS over D1 and the best D2 singleton."""
    _check_ckp(instance, "alg_a")
    eps = as_rational(epsilon)
    pre = preprocess(instance)
    c_sq = pre.capacity.magnitude_sq
    # D2 items have projection > C and are discarded by the 1-D solver
    items = [OneDItem(it.id, scaled_projection(it.demand), it.value) for it in pre.items]
    s1 = fptas(items, c_sq, eps).ids if items else ()
    s2 = best_d2_singleton(pre)
    chosen = min(s1, s2, key=lambda ids: tie_key(pre, ids))
    return _lift(pre, instance, chosen)


def cutoff_weights(instance: Instance) -> list[OneDItem]:
    """1-D items with weight ``min(re + im, C)``; the cut-off is :data:`FULL`."""
    c_sq = instance.capacity.magnitude_sq
    out = []
    for it in instance.items:
        p = scaled_projection(it.demand)
        out.append(OneDItem(it.id, p if le_sqrt(p, c_sq) else FULL, it.value))
    return out


def alg_b(instance: Instance, epsilon, value_bits: int | None = None) -> Solution:
    """Single monotone 1-D run over cut-off projections."""
    _check_ckp(instance, "alg_b")
    for it in instance.items:
        if it.value.denominator != 1:
            raise ContractError(f"alg_b needs integer values; item {it.id} has {it.value}")
    eps = as_rational(epsilon)
    pre = preprocess(instance)
    if not pre.items:
        return Solution.of(instance, ())
    kwargs = {} if value_bits is None else {"value_bits": value_bits}
    packing = monotone_fptas(cutoff_weights(pre), pre.capacity.magnitude_sq, eps, **kwargs)
    return _lift(pre, instance, packing.ids)


def split_subset(a: Sequence, c_sq, c_prime) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split ``a`` into two index sets, each summing to at most ``c_prime``.

    Requires ``sum(a) <= sqrt(c_sq)``, ``c_prime >= sqrt(c_sq / 2)`` and every
    ``a_i <= c_prime``.  Let ``j`` be the first index where the prefix sum
    exceeds ``c_prime``: the first part is the prefix before ``j`` when
    ``a_j`` plus the suffix fits, otherwise everything except ``j``.
    """
    a = [as_rational(x) for x in a]
    c_sq, c_prime = as_rational(c_sq), as_rational(c_prime)
    if any(x <= 0 for x in a):
        raise ContractError("split_subset needs positive numbers")
    if not le_sqrt(sum(a, Fraction(0)), c_sq):
        raise ContractError("sum(a) exceeds C")
    if c_prime < 0 or 2 * c_prime * c_prime < c_sq:
        raise ContractError("C' must be at least C / sqrt(2)")
    if any(x > c_prime for x in a):
        raise ContractError("every a_i must be at most C'")
    n = len(a)
    everything = tuple(range(n))
    if sum(a, Fraction(0)) <= c_prime:
        return everything, ()
    prefix, j = Fraction(0), 0
    while prefix + a[j] <= c_prime:
        prefix += a[j]
        j += 1
    tail = sum(a[j:], Fraction(0))  # z + y
    if tail <= c_prime:
        return everything[:j], everything[j:]
    return everything[:j] + everything[j + 1:], (j,)
