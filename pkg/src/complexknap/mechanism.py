"""Truthful mechanism on top of ``alg_b``.

Selection is ``alg_b``; each selected agent pays its critical value, the
smallest integer report at which it is still selected with its demand and
everybody else fixed.  The verifiers replay the allocation rule and report
counterexamples instead of raising.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .ckp import alg_b
from .core import (
    CapacitySpec,
    ComplexDemand,
    Instance,
    Item,
    Kind,
    Solution,
    as_rational,
)
from .errors import ContractError


@dataclass(frozen=True)
class AgentType:
    demand: ComplexDemand
    value: int

    def __post_init__(self):
        v = self.value
        if isinstance(v, Fraction) and v.denominator == 1:
            v = int(v)
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise ContractError(f"agent values must be positive integers, got {self.value!r}")
        object.__setattr__(self, "value", v)


@dataclass(frozen=True)
class MechanismOutcome:
    selected: frozenset[int]
    payments: tuple[int, ...]  # indexed by agent id; 0 for losers

    def payment(self, agent: int) -> int:
        return self.payments[agent]

    def as_dict(self) -> dict[int, int]:
        return dict(enumerate(self.payments))


@dataclass(frozen=True)
class Perturbation:
    agent: int
    demand: ComplexDemand
    value: Fraction


@dataclass(frozen=True)
class Violation:
    kind: str  # "ic", "ir" or "threshold"
    agent: int
    report: AgentType | None
    detail: str


def profile_instance(profile: Sequence[AgentType], capacity: CapacitySpec) -> Instance:
    if capacity.has_axis_caps:
        raise ContractError("the mechanism runs on c-kp instances (no per-axis caps)")
    items = tuple(Item(k, t.demand, t.value) for k, t in enumerate(profile))
    return Instance(items, capacity, Kind.CKP)


def profile_of(instance: Instance) -> tuple[AgentType, ...]:
    return tuple(AgentType(it.demand, it.value) for it in instance.items)


@lru_cache(maxsize=1 << 16)
def _winners(profile: tuple[AgentType, ...], capacity: CapacitySpec, epsilon: Fraction):
    return alg_b(profile_instance(profile, capacity), epsilon).selected


def allocate(profile: Sequence[AgentType], capacity: CapacitySpec, epsilon) -> frozenset[int]:
    """Winners under ``alg_b`` (memoised; the rule is a pure function)."""
    return _winners(tuple(profile), capacity, as_rational(epsilon))


def _replace(profile, agent, report):
    out = list(profile)
    out[agent] = report
    return tuple(out)


def critical_value(agent: int, profile: Sequence[AgentType], capacity: CapacitySpec, epsilon) -> int:
    """Binary search for the smallest winning integer value in ``[1, v]``."""
    profile = tuple(profile)
    t = profile[agent]
    if agent not in allocate(profile, capacity, epsilon):
        raise ContractError(f"agent {agent} is not selected at its report")
    lo, hi = 1, t.value
    while lo < hi:
        mid = (lo + hi) // 2
        if agent in allocate(_replace(profile, agent, AgentType(t.demand, mid)), capacity, epsilon):
            hi = mid
        else:
            lo = mid + 1
    return lo


PaymentRule = Callable[[int, Sequence[AgentType], CapacitySpec, Fraction], int]


def run_mechanism(profile: Sequence[AgentType], capacity: CapacitySpec, epsilon,
                  payment_rule: PaymentRule = critical_value) -> MechanismOutcome:
    profile = tuple(profile)
    eps = as_rational(epsilon)
    winners = allocate(profile, capacity, eps)
    payments = tuple(payment_rule(k, profile, capacity, eps) if k in winners else 0
                     for k in range(len(profile)))
    return MechanismOutcome(winners, payments)


def utility(true_type: AgentType, reported: AgentType, outcome: MechanismOutcome, agent: int) -> Fraction:
    """Utility of ``agent`` whose real type is ``true_type`` after reporting ``reported``.

    A winner is handed exactly the reported demand, so the true value only
    counts if that covers the true demand.
    """
    if agent not in outcome.selected:
        return Fraction(0)
    valuation = true_type.value if true_type.demand.dominated_by(reported.demand) else 0
    return Fraction(valuation - outcome.payment(agent))


def _agent_outcome(agent, profile, capacity, eps, payment_rule):
    """(selected, payment) for one agent, without pricing anybody else."""
    if agent not in allocate(profile, capacity, eps):
        return False, 0
    return True, payment_rule(agent, profile, capacity, eps)


DEMAND_FACTORS = (Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2))


def default_misreports(true_type: AgentType, theta: int | None, capacity: CapacitySpec):
    """Misreport grid: each demand axis scaled by 1/2, 1, 3/2, 2 (reports
    outside the capacity disk are dropped) crossed with values 1, v/2, v,
    2v and, when known, theta - 1, theta, theta + 1."""
    v = true_type.value
    values = {1, (v + 1) // 2, v, 2 * v}
    if theta is not None:
        values |= {theta - 1, theta, theta + 1}
    values = sorted(x for x in values if x >= 1)
    d = true_type.demand
    out = []
    for fr in DEMAND_FACTORS:
        for fi in DEMAND_FACTORS:
            nd = ComplexDemand(d.re * fr, d.im * fi)
            if nd.magnitude_sq() > capacity.magnitude_sq:
                continue
            out.extend(AgentType(nd, x) for x in values)
    return out


def verify_ic(profile: Sequence[AgentType], capacity: CapacitySpec, epsilon,
              misreport_grid=default_misreports,
              payment_rule: PaymentRule = critical_value) -> list[Violation]:
    """Check incentive compatibility, individual rationality and payment thresholds.

    For each agent: truthful utility must be nonnegative, no grid misreport
    may earn strictly more, and a winner's payment ``p`` must be a threshold
    (still selected when reporting ``p``, not selected at ``p - 1``).
    Returns the counterexamples found; an empty list means the check passed.
    """
    profile = tuple(profile)
    eps = as_rational(epsilon)
    found: list[Violation] = []
    for k, truth in enumerate(profile):
        won, pay = _agent_outcome(k, profile, capacity, eps, payment_rule)
        outcome = MechanismOutcome(frozenset([k]) if won else frozenset(),
                                   tuple(pay if i == k else 0 for i in range(len(profile))))
        u_truth = utility(truth, truth, outcome, k)
        if u_truth < 0:
            found.append(Violation("ir", k, truth, f"truthful utility {u_truth}"))
        theta = None
        if won:
            theta = pay
            at = AgentType(truth.demand, max(pay, 1))
            if k not in allocate(_replace(profile, k, at), capacity, eps):
                found.append(Violation("threshold", k, at, f"not selected when reporting payment {pay}"))
            if pay - 1 >= 1:
                below = AgentType(truth.demand, pay - 1)
                if k in allocate(_replace(profile, k, below), capacity, eps):
                    found.append(Violation("threshold", k, below,
                                           f"still selected below payment {pay}"))
        for report in misreport_grid(truth, theta, capacity):
            trial = _replace(profile, k, report)
            won2, pay2 = _agent_outcome(k, trial, capacity, eps, payment_rule)
            out2 = MechanismOutcome(frozenset([k]) if won2 else frozenset(),
                                    tuple(pay2 if i == k else 0 for i in range(len(profile))))
            u = utility(truth, report, out2, k)
            if u > u_truth:
                found.append(Violation("ic", k, report, f"utility {u} > truthful {u_truth}"))
    return found


def perturbation_grid(instance: Instance, agent: int) -> list[Perturbation]:
    """Improving reports for ``agent``: componentwise-smaller demands crossed
    with values v, v + 1, 3v/2 (rounded up) and 2v."""
    it = instance.items[agent]
    d, v = it.demand, it.value
    half = Fraction(1, 2)
    demands = [d, ComplexDemand(d.re * half, d.im), ComplexDemand(d.re, d.im * half),
               ComplexDemand(d.re * half, d.im * half), ComplexDemand(0, d.im),
               ComplexDemand(d.re, 0), ComplexDemand(0, 0)]
    values = [v, v + 1, -((-3 * v) // 2), 2 * v]
    seen, out = set(), []
    for nd in demands:
        for nv in values:
            key = (nd, nv)
            if key not in seen:
                seen.add(key)
                out.append(Perturbation(agent, nd, Fraction(nv)))
    return out


def verify_monotone(algorithm: Callable[[Instance], Solution], instance: Instance,
                    perturbations: Iterable[Perturbation]) -> list[Perturbation]:
    """Perturbations under which a selected agent stops being selected."""
    base = algorithm(instance).selected
    bad = []
    for p in perturbations:
        cur = instance.items[p.agent]
        if p.value < cur.value or not p.demand.dominated_by(cur.demand):
            raise ContractError(f"perturbation for agent {p.agent} is not an improvement")
        if p.agent not in base:
            continue
        after = algorithm(instance.with_item(p.agent, p.demand, p.value))
        if p.agent not in after.selected:
            bad.append(p)
    return bad
