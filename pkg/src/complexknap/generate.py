"""Seeded random instances with a controllable mix of D1 and D2 demands."""
from __future__ import annotations

import random
from fractions import Fraction

from .core import CapacitySpec, ComplexDemand, Instance, Item, Kind
from .errors import ContractError

PROFILES = {"d1-heavy": 0.15, "mixed": 0.45, "d2-heavy": 0.75}
DENOMINATORS = (1, 2, 3, 4)


def _rat(rng, hi: Fraction) -> Fraction:
    """Uniform-ish rational in [0, hi] with a small denominator."""
    q = rng.choice(DENOMINATORS)
    return Fraction(rng.randint(0, int(hi * q)), q)


def _d1(rng, c: int) -> ComplexDemand:
    bound = c * Fraction(rng.randint(1, 4), 4)
    while True:
        re, im = _rat(rng, bound), _rat(rng, bound)
        if re + im <= bound:
            return ComplexDemand(re, im)


def _d2(rng, c_sq: Fraction, c: int) -> ComplexDemand:
    while True:
        re, im = _rat(rng, Fraction(c)), _rat(rng, Fraction(c))
        s = re + im
        if s * s > c_sq and re * re + im * im <= c_sq:
            return ComplexDemand(re, im)


def generate(seed: int, n: int, kind: Kind | str = Kind.CKP, profile: str = "mixed",
             value_max: int = 100, irrational_capacity: bool = False) -> Instance:
    """Deterministic instance from ``seed``.

    ``profile`` sets the share of demands drawn from the circular segment
    D2; ``d2-heavy`` always contains at least one.  ``irrational_capacity``
    uses ``C^2 = c^2 + 1`` (never a perfect square) instead of ``c^2``.
    """
    if n < 1:
        raise ContractError("generate needs n >= 1")
    if profile not in PROFILES:
        raise ContractError(f"unknown profile {profile!r}; pick one of {sorted(PROFILES)}")
    kind = Kind(kind)
    rng = random.Random(seed)
    c = rng.randint(6, 20)
    c_sq = Fraction(c * c + (1 if irrational_capacity else 0))
    share = PROFILES[profile]
    forced = rng.randrange(n) if profile == "d2-heavy" else None
    items = []
    for k in range(n):
        if kind is Kind.ONE_KP:
            d = ComplexDemand(_rat(rng, c * Fraction(rng.randint(1, 4), 4)), 0)
        elif k == forced or rng.random() < share:
            d = _d2(rng, c_sq, c)
        else:
            d = _d1(rng, c)
        items.append(Item(k, d, rng.randint(1, value_max)))
    if kind is Kind.GCKP:
        cap = CapacitySpec(c_sq, None, _cap(rng, c), _cap(rng, c))
    else:
        cap = CapacitySpec(c_sq)
    return Instance(tuple(items), cap, kind)


def _cap(rng, c: int) -> Fraction:
    # mostly cuts the disk; sometimes degenerate (>= C)
    return Fraction(rng.randint(2 * c, 5 * c), 4)
