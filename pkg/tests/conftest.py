"""Shared fixtures, hypothesis strategies and independent reference oracles.

The oracles here deliberately avoid the package's own feasibility code so
that they can cross-check it.
"""
from __future__ import annotations

import itertools
from fractions import Fraction as F

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from complexknap.core import CapacitySpec, ComplexDemand, Instance, Item, Kind

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def naive_fits(instance: Instance, ids) -> bool:
    re = sum((instance.items[i].demand.re for i in ids), F(0))
    im = sum((instance.items[i].demand.im for i in ids), F(0))
    cap = instance.capacity
    if re * re + instance.im_scale_sq * im * im > cap.magnitude_sq:
        return False
    if cap.cap_re is not None:
        if re > cap.cap_re or instance.im_scale_sq * im * im > cap.cap_im ** 2:
            return False
    return True


def naive_opt_value(instance: Instance) -> F:
    """max value over all 2^n subsets, no pruning."""
    best = F(0)
    idx = range(instance.n)
    for r in range(instance.n + 1):
        for combo in itertools.combinations(idx, r):
            if naive_fits(instance, combo):
                best = max(best, sum((instance.items[i].value for i in combo), F(0)))
    return best


def naive_opt_ids(instance: Instance) -> tuple[int, ...]:
    """Lexicographically smallest optimal sorted id tuple."""
    best, best_ids = F(-1), ()
    for r in range(instance.n + 1):
        for combo in itertools.combinations(range(instance.n), r):
            if naive_fits(instance, combo):
                v = sum((instance.items[i].value for i in combo), F(0))
                if v > best or (v == best and combo < best_ids):
                    best, best_ids = v, combo
    return best_ids


def one_d_opt(weights, values, capacity_sq) -> F:
    best = F(0)
    for r in range(len(weights) + 1):
        for combo in itertools.combinations(range(len(weights)), r):
            w = sum((weights[i] for i in combo), F(0))
            if w * w <= capacity_sq:
                best = max(best, sum((values[i] for i in combo), F(0)))
    return best


EXAMPLE_ROWS = [(7, 7, 10), (3, 0, 4), (0, 3, 4)]


def example_instance(kind=Kind.CKP, rows=EXAMPLE_ROWS, c=10, caps=None) -> Instance:
    items = tuple(Item(i, ComplexDemand(r, m), v) for i, (r, m, v) in enumerate(rows))
    cap = CapacitySpec(F(c) ** 2, F(c), *(caps or (None, None)))
    if caps is not None:
        kind = Kind.GCKP
    return Instance(items, cap, kind)


@pytest.fixture
def ckp_example() -> Instance:
    return example_instance()


# hypothesis strategies -----------------------------------------------------

small_rationals = st.builds(F, st.integers(0, 24), st.sampled_from([1, 2, 3, 4]))
positive_values = st.integers(1, 40).map(F)


@st.composite
def ckp_instances(draw, max_n=7, integer_values=True, c_sq=None):
    n = draw(st.integers(0, max_n))
    rows = []
    for k in range(n):
        re, im = draw(small_rationals), draw(small_rationals)
        v = draw(positive_values) if integer_values else draw(
            st.builds(F, st.integers(1, 40), st.sampled_from([1, 2, 3])))
        rows.append(Item(k, ComplexDemand(re, im), v))
    if c_sq is None:
        c = draw(st.integers(4, 14))
        irrational = draw(st.booleans())
        cap = CapacitySpec(F(c * c + 1)) if irrational else CapacitySpec(F(c * c), F(c))
    else:
        cap = CapacitySpec(F(c_sq))
    return Instance(tuple(rows), cap, Kind.CKP)


@st.composite
def gckp_instances(draw, max_n=6):
    base = draw(ckp_instances(max_n=max_n))
    c = draw(st.integers(4, 14))
    cr = draw(st.builds(F, st.integers(1, 60), st.sampled_from([1, 2, 4])))
    ci = draw(st.builds(F, st.integers(1, 60), st.sampled_from([1, 2, 4])))
    return Instance(base.items, CapacitySpec(F(c * c), F(c), cr, ci), Kind.GCKP)
