"""Exact data model, feasibility predicates and brute-force oracles.

Every quantity is a :class:`fractions.Fraction`.  The magnitude capacity is
stored squared (``C^2``) because it is frequently irrational; comparisons of
the form ``x <= C`` go through :func:`le_sqrt`, which is exact.

Scaling convention: the projection of a demand onto the pi/4 line is
``(re + im) / sqrt(2)`` and the matching capacity is ``C / sqrt(2)``.  The
common ``sqrt(2)`` factor is cancelled everywhere, so code in this package
works with ``re + im`` against ``C`` (see :func:`scaled_projection`).
"""
from __future__ import annotations

import enum
import math
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import ContractError, InputError, OracleSizeError, ParseError

ORACLE_LIMIT_ENV = "COMPLEXKNAP_ORACLE_LIMIT"
DEFAULT_ORACLE_LIMIT = 20

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text) -> Fraction:
    """Parse an integer or a ``"p/q"`` string.  Floats are refused."""
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ParseError(f"not a rational: {text!r} (use an integer or a 'p/q' string)")
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ParseError(f"malformed rational {text!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def as_rational(x) -> Fraction:
    if isinstance(x, float):
        raise ContractError(f"floating-point value {x!r} refused; pass int, Fraction or 'p/q'")
    try:
        return parse_rational(x)
    except ParseError as exc:
        raise ContractError(str(exc)) from None


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of ``q`` if it is rational, else ``None``."""
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def le_sqrt(x: Fraction, c_sq: Fraction) -> bool:
    """Return ``x <= sqrt(c_sq)`` exactly (``c_sq >= 0``)."""
    return x <= 0 or x * x <= c_sq


def _lcm_of_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = out * v.denominator // math.gcd(out, v.denominator)
    return out


@dataclass(frozen=True)
class ComplexDemand:
    """A first-quadrant demand ``re + i*im``."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", as_rational(self.re))
        object.__setattr__(self, "im", as_rational(self.im))
        if self.re < 0 or self.im < 0:
            raise ContractError(f"demand ({self.re}, {self.im}) leaves the first quadrant")

    def __add__(self, other: "ComplexDemand") -> "ComplexDemand":
        return ComplexDemand(self.re + other.re, self.im + other.im)

    def magnitude_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def dominated_by(self, other: "ComplexDemand") -> bool:
        """Componentwise partial order: ``self <= other``."""
        return self.re <= other.re and self.im <= other.im


ZERO = ComplexDemand(0, 0)


@dataclass(frozen=True)
class Item:
    id: int
    demand: ComplexDemand
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_rational(self.value))
        if self.value <= 0:
            raise ContractError(f"item {self.id}: value must be positive, got {self.value}")
        if not isinstance(self.id, int) or self.id < 0:
            raise ContractError(f"item id must be a nonnegative integer, got {self.id!r}")


@dataclass(frozen=True)
class CapacitySpec:
    """Capacity on ``|sum d|`` (stored as ``C^2``) plus optional per-axis caps."""

    magnitude_sq: Fraction
    magnitude_exact: Fraction | None = None
    cap_re: Fraction | None = None
    cap_im: Fraction | None = None

    def __post_init__(self):
        c_sq = as_rational(self.magnitude_sq)
        if c_sq <= 0:
            raise ContractError("magnitude capacity must be positive")
        exact = rational_sqrt(c_sq)
        if self.magnitude_exact is not None:
            given = as_rational(self.magnitude_exact)
            if given != exact:
                raise ContractError(f"magnitude {given} does not square to {c_sq}")
        object.__setattr__(self, "magnitude_sq", c_sq)
        object.__setattr__(self, "magnitude_exact", exact)
        for name in ("cap_re", "cap_im"):
            v = getattr(self, name)
            if v is not None:
                v = as_rational(v)
                if v <= 0:
                    raise ContractError(f"{name} must be positive")
                object.__setattr__(self, name, v)

    @classmethod
    def of(cls, c, cap_re=None, cap_im=None) -> "CapacitySpec":
        c = as_rational(c)
        return cls(c * c, c, cap_re, cap_im)

    @property
    def has_axis_caps(self) -> bool:
        return self.cap_re is not None and self.cap_im is not None


class Kind(str, enum.Enum):
    ONE_KP = "1-kp"
    CKP = "c-kp"
    GCKP = "gc-kp"


@dataclass(frozen=True)
class Instance:
    """Items plus capacity.

    ``im_scale_sq`` supports demands whose imaginary parts share an
    irrational factor: the true imaginary part of every item is
    ``item.demand.im * sqrt(im_scale_sq)``.  It is 1 for ordinary instances;
    anything else marks the instance *symbolic-imaginary*, which only the
    feasibility predicate and the oracles accept.
    """

    items: tuple[Item, ...]
    capacity: CapacitySpec
    kind: Kind = Kind.CKP
    im_scale_sq: Fraction = Fraction(1)
    source_ids: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "im_scale_sq", as_rational(self.im_scale_sq))
        if self.im_scale_sq <= 0:
            raise ContractError("im_scale_sq must be positive")
        for i, it in enumerate(self.items):
            if it.id != i:
                raise ContractError(f"item ids must be 0..n-1 in order; position {i} has id {it.id}")
        cap = self.capacity
        partial = (cap.cap_re is None) != (cap.cap_im is None)
        if partial:
            raise ContractError("per-axis caps must be given together (c_re and c_im)")
        if (self.kind is Kind.GCKP) != cap.has_axis_caps:
            raise ContractError("kind gc-kp requires c_re/c_im, and only gc-kp may carry them")
        if self.kind is Kind.ONE_KP and any(it.demand.im != 0 for it in self.items):
            raise ContractError("kind 1-kp requires every imaginary part to be 0")

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def symbolic_imaginary(self) -> bool:
        return self.im_scale_sq != 1

    def old_to_new(self) -> dict[int, int]:
        if self.source_ids is None:
            return {i: i for i in range(self.n)}
        return {old: new for new, old in enumerate(self.source_ids)}

    def check_ids(self, ids: Iterable[int]) -> frozenset[int]:
        ids = frozenset(ids)
        bad = [i for i in ids if not isinstance(i, int) or not 0 <= i < self.n]
        if bad:
            raise InputError(f"unknown item id(s) {sorted(bad, key=repr)}")
        return ids

    def with_item(self, k: int, demand: ComplexDemand | None = None, value=None) -> "Instance":
        """Copy with item ``k``'s demand and/or value replaced."""
        items = list(self.items)
        old = items[k]
        items[k] = Item(k, demand if demand is not None else old.demand,
                        value if value is not None else old.value)
        return Instance(tuple(items), self.capacity, self.kind, self.im_scale_sq)


def make_instance(rows, c=None, *, c_sq=None, cap_re=None, cap_im=None, kind=None) -> Instance:
    """Build an instance from ``(re, im, value)`` rows; kind is inferred if omitted."""
    if (c is None) == (c_sq is None):
        raise ContractError("give exactly one of c and c_sq")
    if c is not None:
        c = as_rational(c)
        capacity = CapacitySpec(c * c, c, cap_re, cap_im)
    else:
        capacity = CapacitySpec(c_sq, None, cap_re, cap_im)
    items = tuple(Item(i, ComplexDemand(r, m), v) for i, (r, m, v) in enumerate(rows))
    if kind is None:
        if capacity.has_axis_caps:
            kind = Kind.GCKP
        elif all(it.demand.im == 0 for it in items):
            kind = Kind.ONE_KP
        else:
            kind = Kind.CKP
    return Instance(items, capacity, kind)


@dataclass(frozen=True)
class Solution:
    selected: frozenset[int]
    total_value: Fraction
    total_demand: ComplexDemand

    @classmethod
    def of(cls, instance: Instance, ids: Iterable[int]) -> "Solution":
        ids = instance.check_ids(ids)
        value = sum((instance.items[i].value for i in ids), Fraction(0))
        demand = ZERO
        for i in ids:
            demand = demand + instance.items[i].demand
        return cls(ids, value, demand)

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.selected))

    def check(self, instance: Instance) -> None:
        """Recompute the cached totals and compare."""
        again = Solution.of(instance, self.selected)
        if again != self:
            raise ContractError(f"solution totals do not match instance: {self} vs {again}")


class Region(str, enum.Enum):
    D1 = "D1"
    D2 = "D2"
    INFEASIBLE = "infeasible"


def scaled_projection(d: ComplexDemand) -> Fraction:
    """``re + im``: sqrt(2) times the projection onto the pi/4 line."""
    return d.re + d.im


def _demand_feasible(instance: Instance, d: ComplexDemand) -> bool:
    cap, s = instance.capacity, instance.im_scale_sq
    if d.re * d.re + s * d.im * d.im > cap.magnitude_sq:
        return False
    if cap.cap_re is not None and d.re > cap.cap_re:
        return False
    if cap.cap_im is not None and s * d.im * d.im > cap.cap_im * cap.cap_im:
        return False
    return True


def is_feasible(instance: Instance, selected: Iterable[int]) -> bool:
    ids = instance.check_ids(selected)
    total = ZERO
    for i in ids:
        total = total + instance.items[i].demand
    return _demand_feasible(instance, total)


def classify_region(d: ComplexDemand, capacity: CapacitySpec) -> Region:
    if capacity.cap_re is not None and d.re > capacity.cap_re:
        return Region.INFEASIBLE
    if capacity.cap_im is not None and d.im > capacity.cap_im:
        return Region.INFEASIBLE
    if le_sqrt(scaled_projection(d), capacity.magnitude_sq):
        return Region.D1
    if d.magnitude_sq() <= capacity.magnitude_sq:
        return Region.D2
    return Region.INFEASIBLE


def preprocess(instance: Instance) -> Instance:
    """Drop items that cannot be selected even alone; ids are renumbered.

    The result's ``source_ids[new] == old``.
    """
    keep = [it for it in instance.items if _demand_feasible(instance, it.demand)]
    items = tuple(Item(new, it.demand, it.value) for new, it in enumerate(keep))
    prior = instance.source_ids
    source = tuple(it.id if prior is None else prior[it.id] for it in keep)
    return Instance(items, instance.capacity, instance.kind, instance.im_scale_sq, source)


def tie_key(instance: Instance, ids: Iterable[int]):
    """Sort key implementing the package-wide preference order.

    Higher total value first, then smaller scaled-projection sum, then the
    lexicographically smallest sorted id tuple.
    """
    ids = tuple(sorted(ids))
    value = sum((instance.items[i].value for i in ids), Fraction(0))
    proj = sum((scaled_projection(instance.items[i].demand) for i in ids), Fraction(0))
    return (-value, proj, ids)


def oracle_limit() -> int:
    raw = os.environ.get(ORACLE_LIMIT_ENV)
    if raw is None:
        return DEFAULT_ORACLE_LIMIT
    try:
        return int(raw)
    except ValueError:
        raise ContractError(f"{ORACLE_LIMIT_ENV} must be an integer, got {raw!r}") from None


class ScaledFeasibility:
    """Integer form of the feasibility test for fast subset enumeration.

    Demands are multiplied by common denominators so partial sums stay
    Python ints; :meth:`ok` takes those scaled sums.
    """

    def __init__(self, instance: Instance):
        cap, s = instance.capacity, instance.im_scale_sq
        self.lr = _lcm_of_denominators(it.demand.re for it in instance.items)
        self.li = _lcm_of_denominators(it.demand.im for it in instance.items)
        self.re = [int(it.demand.re * self.lr) for it in instance.items]
        self.im = [int(it.demand.im * self.li) for it in instance.items]
        c = cap.magnitude_sq
        # (R/lr)^2 + s (I/li)^2 <= c   <=>   R^2 a + I^2 b <= t
        self._a = self.li ** 2 * s.denominator * c.denominator
        self._b = self.lr ** 2 * s.numerator * c.denominator
        self._t = c.numerator * self.lr ** 2 * self.li ** 2 * s.denominator
        self._re_cap = None
        self._im_cap = None
        if cap.cap_re is not None:
            self._re_cap = (cap.cap_re.denominator, cap.cap_re.numerator * self.lr)
            ci = cap.cap_im
            self._im_cap = (s.numerator * ci.denominator ** 2,
                            ci.numerator ** 2 * self.li ** 2 * s.denominator)

    def ok(self, r: int, i: int) -> bool:
        if r * r * self._a + i * i * self._b > self._t:
            return False
        if self._re_cap is not None:
            if r * self._re_cap[0] > self._re_cap[1]:
                return False
            if i * i * self._im_cap[0] > self._im_cap[1]:
                return False
        return True


def brute_force_opt(instance: Instance, limit: int | None = None) -> Solution:
    """Exact optimum by enumerating the subset lattice.

    Infeasible subsets are pruned together with all their supersets
    (feasibility is downward closed).  Subsets are visited in lexicographic
    order of their sorted id tuples, so keeping only strict improvements
    yields the lexicographically smallest optimum.
    """
    n = instance.n
    limit = oracle_limit() if limit is None else limit
    if n > limit:
        raise OracleSizeError(f"brute force refuses n={n} (limit {limit}; set {ORACLE_LIMIT_ENV})")
    feas = ScaledFeasibility(instance)
    lv = _lcm_of_denominators(it.value for it in instance.items)
    vals = [int(it.value * lv) for it in instance.items]
    best_value, best_ids = -1, ()
    chosen: list[int] = []

    def visit(start, r, i, v):
        nonlocal best_value, best_ids
        if v > best_value:
            best_value, best_ids = v, tuple(chosen)
        for j in range(start, n):
            nr, ni = r + feas.re[j], i + feas.im[j]
            if feas.ok(nr, ni):
                chosen.append(j)
                visit(j + 1, nr, ni, v + vals[j])
                chosen.pop()

    visit(0, 0, 0, 0)
    return Solution.of(instance, best_ids)
