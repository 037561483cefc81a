"""One-dimensional knapsack: exact value-indexed DP, FPTAS, monotone FPTAS.

Weights are exact rationals; the capacity is given squared, so it may be
irrational.  A weight may also be the sentinel :data:`FULL`, meaning "exactly
the capacity": a set containing a ``FULL`` item fits only if everything else
in it has zero weight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import as_rational, le_sqrt
from .errors import ContractError, ResourceError

DEFAULT_TABLE_BOUND = 2_000_000
DEFAULT_VALUE_BITS = 62


class _Full:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "FULL"

    def __reduce__(self):
        return (_Full, ())


FULL = _Full()


@dataclass(frozen=True)
class OneDItem:
    id: int
    weight: Fraction | _Full
    value: Fraction

    def __post_init__(self):
        if self.weight is not FULL:
            w = as_rational(self.weight)
            if w < 0:
                raise ContractError(f"item {self.id}: negative weight {w}")
            object.__setattr__(self, "weight", w)
        v = as_rational(self.value)
        if v <= 0:
            raise ContractError(f"item {self.id}: value must be positive")
        object.__setattr__(self, "value", v)


@dataclass(frozen=True)
class Packing:
    """Result of a 1-D solver: chosen ids and their true total value."""

    selected: frozenset[int]
    total_value: Fraction

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.selected))

    @classmethod
    def of(cls, items: Sequence[OneDItem], ids: Iterable[int]) -> "Packing":
        by_id = {it.id: it for it in items}
        ids = frozenset(ids)
        return cls(ids, sum((by_id[i].value for i in ids), Fraction(0)))


def fits(items: Sequence[OneDItem], ids: Iterable[int], capacity_sq: Fraction) -> bool:
    """Exact 1-D feasibility, honouring the ``FULL`` sentinel."""
    by_id = {it.id: it for it in items}
    full, rest = 0, Fraction(0)
    for i in ids:
        w = by_id[i].weight
        if w is FULL:
            full += 1
        else:
            rest += w
    if full == 0:
        return le_sqrt(rest, capacity_sq)
    return full == 1 and rest == 0


@dataclass
class DpTable:
    """Per reachable (integer) value: the minimal load and one witness.

    ``load[v]`` is the comparison key ``(tier, amount)``, tier 1 meaning
    "exactly the capacity"; ``weight[v]`` is the load itself (a Fraction,
    or FULL when the witness holds a FULL item).
    """

    load: dict[int, tuple[int, int]]
    witness: dict[int, tuple[int, ...]]
    weight: dict[int, Fraction | _Full]

    def best_value(self) -> int:
        return max(self.load)

    def min_weight(self, v: int) -> Fraction | _Full | None:
        return self.weight.get(v)


def _build_table(weights, values, ids, capacity_sq: Fraction, table_bound: int) -> DpTable:
    """Value-indexed DP over items in the given order.

    ``weights[k]`` is a Fraction or FULL, ``values[k]`` a nonnegative int.
    Items are folded in from the last one backwards and prepended to
    witnesses; with that order the per-value minimum of ``(load, ids)`` is
    the lexicographically smallest optimal id tuple.
    """
    if sum(values) > table_bound:
        raise ResourceError(f"value table would need {sum(values)} rows (bound {table_bound})")
    scale = 1
    for w in weights:
        if w is not FULL:
            scale = scale * w.denominator // math.gcd(scale, w.denominator)
    c_num, c_den = capacity_sq.numerator, capacity_sq.denominator
    limit = c_num * scale * scale  # amount^2 * c_den <= limit  <=>  amount/scale <= C

    def key_of(full, amount):
        # feasible loads only; tier 1 == exactly C
        if full:
            return (1, 0) if amount == 0 else None
        sq = amount * amount * c_den
        if sq > limit:
            return None
        return (1, 0) if sq == limit else (0, amount)

    # value -> (key, full, amount, ids)
    states: dict[int, tuple] = {0: ((0, 0), 0, 0, ())}
    for k in range(len(weights) - 1, -1, -1):
        w, v, ident = weights[k], values[k], ids[k]
        add_full, add_amt = (1, 0) if w is FULL else (0, int(w * scale))
        updates = {}
        for val, (key, full, amount, wit) in states.items():
            nf, na = full + add_full, amount + add_amt
            if nf > 1:
                continue
            nkey = key_of(nf, na)
            if nkey is None:
                continue
            cand = (nkey, nf, na, (ident,) + wit)
            target = val + v
            cur = updates.get(target) or states.get(target)
            if cur is None or (cand[0], cand[3]) < (cur[0], cur[3]):
                updates[target] = cand
        states.update(updates)
    return DpTable(
        load={v: s[0] for v, s in states.items()},
        witness={v: s[3] for v, s in states.items()},
        weight={v: FULL if s[1] else Fraction(s[2], scale) for v, s in states.items()},
    )


def _check_integer_values(items):
    for it in items:
        if it.value.denominator != 1:
            raise ContractError(f"item {it.id}: value {it.value} is not an integer")


def _check_epsilon(epsilon) -> Fraction:
    eps = as_rational(epsilon)
    if not 0 < eps < 1:
        raise ContractError(f"epsilon must lie in (0, 1), got {eps}")
    return eps


def value_table(items: Sequence[OneDItem], capacity_sq, table_bound=DEFAULT_TABLE_BOUND) -> DpTable:
    _check_integer_values(items)
    return _build_table([it.weight for it in items], [int(it.value) for it in items],
                        [it.id for it in items], as_rational(capacity_sq), table_bound)


def dp_exact(items: Sequence[OneDItem], capacity_sq, table_bound=DEFAULT_TABLE_BOUND) -> Packing:
    """Exact optimum for integer values (pseudo-polynomial in the value sum)."""
    table = value_table(items, capacity_sq, table_bound)
    return Packing.of(items, table.witness[table.best_value()])


def _drop_unfit(items, capacity_sq):
    return [it for it in items if it.weight is FULL or le_sqrt(it.weight, capacity_sq)]


def fptas(items: Sequence[OneDItem], capacity_sq, epsilon, table_bound=DEFAULT_TABLE_BOUND) -> Packing:
    """Classical value-rounding FPTAS: ``K = eps * v_max / n``, values ``floor(v/K)``."""
    eps = _check_epsilon(epsilon)
    capacity_sq = as_rational(capacity_sq)
    live = _drop_unfit(items, capacity_sq)
    if not live:
        return Packing(frozenset(), Fraction(0))
    k = eps * max(it.value for it in live) / len(live)
    rounded = [math.floor(it.value / k) for it in live]
    table = _build_table([it.weight for it in live], rounded, [it.id for it in live],
                         capacity_sq, table_bound)
    return Packing.of(items, table.witness[table.best_value()])


def value_cap(n: int, epsilon: Fraction) -> int:
    """Per-item cap on rounded values in each monotone-FPTAS run."""
    return math.ceil(Fraction(2 * n * n) / epsilon)


def ladder_runs(items: Sequence[OneDItem], capacity_sq, epsilon,
                value_bits: int = DEFAULT_VALUE_BITS,
                table_bound: int = DEFAULT_TABLE_BOUND):
    """Yield ``(j, witness, score)`` for each monotone-FPTAS run that is solved.

    Run ``j`` rounds every value to ``min(floor(v / 2^j), U)`` with
    ``U = ceil(2 n^2 / eps)`` and solves that rounded problem exactly;
    ``score`` is the witness's true value.  Neither the ladder nor ``U``
    depends on the reported values.  Runs after the first one whose rounded
    values are all zero only produce the empty set, and a run repeating the
    previous rounded values repeats its witness; both are skipped.  When run
    0 is already exact nothing later can beat it, so the ladder stops there.
    """
    eps = _check_epsilon(epsilon)
    capacity_sq = as_rational(capacity_sq)
    _check_integer_values(items)
    top = 1 << value_bits
    for it in items:
        if it.value > top:
            raise ContractError(f"item {it.id}: value {it.value} exceeds 2^{value_bits}")
    live = _drop_unfit(items, capacity_sq)
    if not live:
        return
    cap = value_cap(len(items), eps)
    weights = [it.weight for it in live]
    ids = [it.id for it in live]
    raw = [int(it.value) for it in live]
    value_of = dict(zip(ids, raw))
    previous = None
    for j in range(value_bits + 1):
        rounded = [min(v >> j, cap) for v in raw]
        if not any(rounded):
            return
        if rounded == previous:
            continue
        previous = rounded
        table = _build_table(weights, rounded, ids, capacity_sq, table_bound)
        witness = table.witness[table.best_value()]
        yield j, witness, sum(value_of[i] for i in witness)
        if j == 0 and max(raw) <= cap:
            return


def monotone_fptas(items: Sequence[OneDItem], capacity_sq, epsilon,
                   value_bits: int = DEFAULT_VALUE_BITS,
                   table_bound: int = DEFAULT_TABLE_BOUND) -> Packing:
    """FPTAS whose selection rule is monotone in each item's value and weight.

    The best-scoring run from :func:`ladder_runs` wins, smaller ``j`` on ties.
    """
    best = None  # (score, witness)
    for _, witness, score in ladder_runs(items, capacity_sq, epsilon, value_bits, table_bound):
        if best is None or score > best[0]:
            best = (score, witness)
    return Packing.of(items, best[1] if best else ())
