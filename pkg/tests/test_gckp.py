import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from complexknap.ckp import alg_a
from complexknap.core import CapacitySpec, Instance, is_feasible, make_instance
from complexknap.errors import ContractError, NeedsRationalMagnitude, ResourceError
from complexknap.gckp import ThreeDItem, alg_c, lp_relax_solve, ptas_3kp, seed_size

from conftest import example_instance, gckp_instances, naive_opt_value

wt = st.builds(F, st.integers(0, 12), st.sampled_from([1, 2, 3]))


def three(weights_values):
    return [ThreeDItem(k, (r + i, r, i), v) for k, (r, i, v) in enumerate(weights_values)]


def three_d_opt(items, caps) -> F:
    best = F(0)
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            load = [sum((it.weights[a] for it in combo), F(0)) for a in range(3)]
            if all(l <= c for l, c in zip(load, caps)):
                best = max(best, sum((it.value for it in combo), F(0)))
    return best


def _solve_square(m, rhs):
    """Gauss-Jordan over Fractions; None if singular."""
    n = len(m)
    a = [row[:] + [b] for row, b in zip(m, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def lp_vertex_opt(items, caps) -> F:
    """LP optimum by enumerating every vertex of the bounded polytope."""
    n = len(items)
    if n == 0:
        return F(0)
    cons = []  # (coefficients, rhs) meaning coeffs . x <= rhs
    for a in range(3):
        cons.append(([it.weights[a] for it in items], caps[a]))
    for k in range(n):
        e = [F(int(i == k)) for i in range(n)]
        cons.append((e, F(1)))
        cons.append(([-x for x in e], F(0)))
    best = None
    for tight in itertools.combinations(cons, n):
        x = _solve_square([c for c, _ in tight], [b for _, b in tight])
        if x is None:
            continue
        if all(sum((ci * xi for ci, xi in zip(c, x)), F(0)) <= b for c, b in cons):
            obj = sum((it.value * xi for it, xi in zip(items, x)), F(0))
            best = obj if best is None else max(best, obj)
    return best


# lp_relax_solve ------------------------------------------------------------

def test_lp_single_item_fits():
    lp = lp_relax_solve(three([(1, 1, 5)]), (F(4), F(4), F(4)))
    assert lp.levels == (1,) and lp.objective == 5


def test_lp_single_binding_constraint():
    lp = lp_relax_solve(three([(2, 2, 5)]), (F(2), F(9), F(9)))
    assert lp.levels == (F(1, 2),)


def test_lp_two_variable_example():
    items = [ThreeDItem(0, (2, 1, 1), 3), ThreeDItem(1, (2, 2, 0), 3)]
    lp = lp_relax_solve(items, (F(3), F(2), F(2)))
    assert lp.objective == F(9, 2)
    assert len(lp.fractional()) == 1
    assert lp_vertex_opt(items, (F(3), F(2), F(2))) == F(9, 2)


def test_lp_rejects_negative_residual():
    with pytest.raises(ContractError):
        lp_relax_solve(three([(1, 1, 1)]), (F(-1), F(1), F(1)))


def test_three_d_item_projection_invariant():
    with pytest.raises(ContractError):
        ThreeDItem(0, (F(3), F(1), F(1)), 1)


@given(st.lists(st.tuples(wt, wt, st.integers(1, 30)), min_size=1, max_size=4),
       st.tuples(wt, wt, wt))
def test_lp_matches_vertex_enumeration(rows, caps):
    items = three(rows)
    lp = lp_relax_solve(items, caps)
    assert lp.objective == lp_vertex_opt(items, caps)
    assert len(lp.fractional()) <= 3
    assert all(0 <= x <= 1 for x in lp.levels)
    for a in range(3):
        assert sum((it.weights[a] * x for it, x in zip(items, lp.levels)), F(0)) <= caps[a]
    assert lp.objective >= three_d_opt(items, caps)  # relaxation dominance


@given(st.lists(st.tuples(wt, wt, st.integers(1, 30)), min_size=1, max_size=10),
       st.tuples(wt, wt, wt))
def test_lp_basic_and_dominant_on_larger_inputs(rows, caps):
    items = three(rows)
    lp = lp_relax_solve(items, caps)
    assert len(lp.fractional()) <= 3
    assert lp.objective >= three_d_opt(items, caps)


# ptas_3kp ------------------------------------------------------------------

def test_seed_size():
    assert seed_size(F(3, 4)) == 4 and seed_size(F(1, 2)) == 6 and seed_size(F(1, 10)) == 30


def test_ptas_rejects_epsilon_one():
    with pytest.raises(ContractError):
        ptas_3kp(three([(1, 1, 1)]), (F(1), F(1), F(1)), F(1))


def test_ptas_embedded_one_d_example():
    items = [ThreeDItem(k, (w, w, 0), v) for k, (w, v) in enumerate([(2, 3), (3, 4), (4, 5)])]
    sel = ptas_3kp(items, (F(5), F(100), F(100)), F(1, 2))
    assert sel.ids == (0, 1) and sel.total_value == 7


def test_ptas_all_items_violate_an_axis():
    items = three([(3, 0, 4), (4, 1, 5)])
    sel = ptas_3kp(items, (F(10), F(2), F(10)), F(1, 2))
    assert sel.ids == () and sel.total_value == 0


def test_ptas_seed_budget():
    items = three([(1, 1, 1)] * 12)
    with pytest.raises(ResourceError):
        ptas_3kp(items, (F(5), F(5), F(5)), F(1, 10), seed_budget=100)


@given(st.lists(st.tuples(wt, wt, st.integers(1, 30)), min_size=0, max_size=4),
       st.tuples(wt, wt, wt))
def test_ptas_exact_when_h_covers_n(rows, caps):
    items = three(rows)
    assert ptas_3kp(items, caps, F(3, 4)).total_value == three_d_opt(items, caps)


@given(st.lists(st.tuples(wt, wt, st.integers(1, 30)), min_size=0, max_size=8),
       st.tuples(wt, wt, wt))
def test_ptas_ratio(rows, caps):
    items = three(rows)
    sel = ptas_3kp(items, caps, F(3, 4))
    assert sel.total_value >= F(1, 4) * three_d_opt(items, caps)


# alg_c ---------------------------------------------------------------------

def test_alg_c_example():
    inst = example_instance(caps=(F(10), F(10)))
    sol = alg_c(inst, F(1, 2))
    assert sol.ids == (0,) and sol.total_value == 10


def test_alg_c_small_real_cap():
    inst = example_instance(caps=(F(5), F(10)))
    sol = alg_c(inst, F(1, 2))
    assert sol.ids == (1, 2) and sol.total_value == 8


def test_alg_c_degenerate_caps_match_alg_a():
    gc = example_instance(caps=(F(12), F(15)))
    plain = example_instance()
    for eps in (F(1, 2), F(3, 4)):
        assert alg_c(gc, eps).total_value == alg_a(plain, eps).total_value


def test_alg_c_irrational_capacity():
    inst = make_instance([(1, 1, 1)], c_sq=40, cap_re=5, cap_im=5)
    with pytest.raises(NeedsRationalMagnitude):
        alg_c(inst, F(1, 2))


def test_alg_c_wrong_kind():
    with pytest.raises(ContractError):
        alg_c(example_instance(), F(1, 2))


def test_alg_c_empty_and_all_infeasible():
    empty = Instance((), CapacitySpec(F(25), F(5), F(3), F(3)), "gc-kp")
    assert alg_c(empty, F(1, 2)).ids == ()
    bad = make_instance([(4, 0, 3), (0, 4, 3)], 5, cap_re=3, cap_im=3)
    assert alg_c(bad, F(1, 2)).ids == ()


@given(gckp_instances(max_n=6), st.sampled_from([F(3, 4), F(1, 2)]))
def test_alg_c_ratio_and_feasibility(inst, eps):
    sol = alg_c(inst, eps)
    sol.check(inst)
    assert is_feasible(inst, sol.selected)
    assert sol.total_value >= (1 - eps) / 2 * naive_opt_value(inst)
