"""Solver dispatch, run reports, the bench harness and the verify suite."""
from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .ckp import alg_a, alg_b
from .core import (
    Instance,
    Kind,
    Solution,
    as_rational,
    brute_force_opt,
    format_rational,
    is_feasible,
    oracle_limit,
    parse_rational,
)
from .errors import CkpError, ContractError, ParseError
from .gckp import alg_c
from .instance_io import load_instance, parse_instance, serialize_instance
from .knapsack1d import OneDItem, dp_exact, fptas, monotone_fptas
from .mechanism import perturbation_grid, profile_of, run_mechanism, verify_ic, verify_monotone

CSV_HEADER = ("instance", "algorithm", "epsilon", "value", "oracle", "ratio", "micros")


def parse_epsilon(text) -> Fraction:
    try:
        eps = parse_rational(text)
    except ParseError as exc:
        raise ParseError(f"epsilon: {exc}") from None
    if not 0 < eps < 1:
        raise ContractError(f"epsilon must lie in (0, 1), got {format_rational(eps)}")
    return eps


def _one_d(instance: Instance, name: str) -> list[OneDItem]:
    if instance.kind is not Kind.ONE_KP:
        raise ContractError(f"{name} runs on 1-kp instances, got {instance.kind.value}")
    return [OneDItem(it.id, it.demand.re, it.value) for it in instance.items]


def _dp(instance, eps):
    return Solution.of(instance, dp_exact(_one_d(instance, "dp-1kp"),
                                          instance.capacity.magnitude_sq).selected)


def _fptas(instance, eps):
    return Solution.of(instance, fptas(_one_d(instance, "fptas-1kp"),
                                       instance.capacity.magnitude_sq, eps).selected)


def _monotone(instance, eps):
    return Solution.of(instance, monotone_fptas(_one_d(instance, "monotone-fptas"),
                                                instance.capacity.magnitude_sq, eps).selected)


ALGORITHMS: dict[str, Callable[[Instance, Fraction], Solution]] = {
    "alg-a": alg_a,
    "alg-b": alg_b,
    "alg-c": alg_c,
    "dp-1kp": _dp,
    "fptas-1kp": _fptas,
    "monotone-fptas": _monotone,
}

APPLICABLE = {
    Kind.ONE_KP: ("alg-a", "alg-b", "dp-1kp", "fptas-1kp", "monotone-fptas"),
    Kind.CKP: ("alg-a", "alg-b"),
    Kind.GCKP: ("alg-c",),
}


def solve(instance: Instance, algorithm: str, epsilon) -> Solution:
    try:
        fn = ALGORITHMS[algorithm]
    except KeyError:
        raise ContractError(f"unknown algorithm {algorithm!r}") from None
    return fn(instance, as_rational(epsilon))


def _num(q: Fraction):
    return q.numerator if q.denominator == 1 else format_rational(q)


@dataclass(frozen=True)
class RunReport:
    algorithm: str
    epsilon: Fraction | None
    selected: tuple[int, ...]
    value: Fraction
    payments: tuple[int, ...] | None = None
    oracle: Fraction | None = None
    micros: int | None = None

    def to_dict(self, timing: bool = False) -> dict:
        doc = {
            "algorithm": self.algorithm,
            "epsilon": None if self.epsilon is None else format_rational(self.epsilon),
            "selected": list(self.selected),
            "value": _num(self.value),
        }
        if self.payments is not None:
            doc["payments"] = {str(k): p for k, p in enumerate(self.payments)}
        if self.oracle is not None:
            doc["oracle"] = _num(self.oracle)
        if timing and self.micros is not None:
            doc["micros"] = self.micros
        return doc

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2) + "\n"


def check_round_trip(instance: Instance, selected) -> None:
    """The selection must still be feasible on a re-parsed copy of the instance."""
    again = parse_instance(serialize_instance(instance))
    if again != instance or not is_feasible(again, selected):
        raise CkpError("selected set is not feasible after an instance round trip")


def _elapsed(start: int) -> int:
    return (time.perf_counter_ns() - start) // 1000


def run_solve(instance: Instance, algorithm: str, epsilon, with_oracle: bool = False) -> RunReport:
    eps = parse_epsilon(epsilon)
    start = time.perf_counter_ns()
    sol = solve(instance, algorithm, eps)
    micros = _elapsed(start)
    check_round_trip(instance, sol.selected)
    oracle = brute_force_opt(instance).total_value if with_oracle else None
    return RunReport(algorithm, eps, sol.ids, sol.total_value, None, oracle, micros)


def run_oracle(instance: Instance, limit: int | None = None) -> RunReport:
    start = time.perf_counter_ns()
    sol = brute_force_opt(instance, limit)
    return RunReport("brute-force", None, sol.ids, sol.total_value, micros=_elapsed(start))


def run_payments(instance: Instance, epsilon) -> RunReport:
    eps = parse_epsilon(epsilon)
    if instance.kind is Kind.GCKP:
        raise ContractError("the mechanism runs on c-kp instances")
    start = time.perf_counter_ns()
    outcome = run_mechanism(profile_of(instance), instance.capacity, eps)
    micros = _elapsed(start)
    sol = Solution.of(instance, outcome.selected)
    check_round_trip(instance, sol.selected)
    return RunReport("mechanism", eps, sol.ids, sol.total_value, outcome.payments, micros=micros)


# bench ---------------------------------------------------------------------

def _ratio(value, oracle):
    if oracle is None:
        return ""
    return format_rational(value / oracle if oracle else Fraction(1))


def _bench_one(path: str, algorithms: Sequence[str] | None, epsilons: Sequence[Fraction]):
    instance = load_instance(path)
    name_of = Path(path).name
    oracle = None
    if instance.n <= oracle_limit():
        start = time.perf_counter_ns()
        oracle = brute_force_opt(instance).total_value
        oracle_micros = _elapsed(start)
    if instance.symbolic_imaginary:
        # only the exact oracle accepts these; one row, epsilon left blank
        if oracle is None or (algorithms is not None and "oracle" not in algorithms):
            return []
        o = format_rational(oracle)
        return [(name_of, "oracle", None, o, o, "1", oracle_micros)]
    names = APPLICABLE[instance.kind]
    if algorithms is not None:
        names = [a for a in algorithms if a in names]
    rows = []
    for name in names:
        if name == "alg-c" and instance.capacity.magnitude_exact is None:
            continue
        for eps in epsilons:
            start = time.perf_counter_ns()
            sol = solve(instance, name, eps)
            micros = _elapsed(start)
            rows.append((name_of, name, eps, format_rational(sol.total_value),
                         "" if oracle is None else format_rational(oracle),
                         _ratio(sol.total_value, oracle), micros))
    return rows


def bench(corpus: Path | str, algorithms: Sequence[str] | None = None,
          epsilons: Sequence = ("1/2", "1/4"), jobs: int = 1) -> str:
    """CSV over every ``*.json`` in ``corpus``; rows sorted by (instance, algorithm, epsilon)."""
    corpus = Path(corpus)
    if not corpus.is_dir():
        raise ParseError(f"{corpus}: not a directory")
    if algorithms is not None:
        unknown = [a for a in algorithms if a not in ALGORITHMS and a != "oracle"]
        if unknown:
            raise ContractError(f"unknown algorithm(s) {unknown}")
    eps = [parse_epsilon(e) for e in epsilons]
    paths = sorted(str(p) for p in corpus.glob("*.json"))
    rows = []
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_bench_one, paths, [algorithms] * len(paths), [eps] * len(paths)):
                rows.extend(part)
    else:
        for p in paths:
            rows.extend(_bench_one(p, algorithms, eps))
    rows.sort(key=lambda r: (r[0], r[1], Fraction(-1) if r[2] is None else r[2]))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow((r[0], r[1], "" if r[2] is None else format_rational(r[2])) + r[3:])
    return buf.getvalue()


# verify --------------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    status: str  # "pass", "fail" or "skip"
    detail: str = ""


def _ratio_check(name, sol, opt, bound, instance):
    if not is_feasible(instance, sol.selected):
        return Check(name, "fail", f"infeasible selection {list(sol.ids)}")
    if opt is None:
        return Check(name, "pass", "feasible (no oracle)")
    if sol.total_value < bound * opt:
        return Check(name, "fail", f"value {sol.total_value} < {bound} * {opt}")
    return Check(name, "pass", f"value {_num(sol.total_value)} vs opt {_num(opt)}")


def verify_instance(instance: Instance, epsilon) -> list[Check]:
    """Property checks for every solver that applies to ``instance``."""
    eps = parse_epsilon(epsilon)
    checks: list[Check] = []
    opt = None
    if instance.n <= oracle_limit():
        oracle = brute_force_opt(instance)
        opt = oracle.total_value
        checks.append(Check("oracle-feasible", "pass" if is_feasible(instance, oracle.selected)
                            else "fail"))
    else:
        checks.append(Check("oracle-feasible", "skip", f"n={instance.n} above oracle limit"))
    if instance.symbolic_imaginary:
        return checks
    integral = all(it.value.denominator == 1 for it in instance.items)
    half = (1 - eps) / 2
    for name in APPLICABLE[instance.kind]:
        if not integral and name in ("alg-b", "dp-1kp", "monotone-fptas"):
            checks.append(Check(name, "skip", "needs integer values"))
            continue
        if name == "alg-c" and instance.capacity.magnitude_exact is None:
            checks.append(Check(name, "skip", "needs a rational capacity magnitude"))
            continue
        bound = {"dp-1kp": Fraction(1), "fptas-1kp": 1 - eps, "monotone-fptas": 1 - eps}.get(name, half)
        checks.append(_ratio_check(name, solve(instance, name, eps), opt, bound, instance))
    if instance.kind is not Kind.GCKP and integral and instance.n:
        algo = lambda inst: alg_b(inst, eps)
        bad = []
        for k in range(instance.n):
            bad += verify_monotone(algo, instance, perturbation_grid(instance, k))
        checks.append(Check("alg-b-monotone", "fail" if bad else "pass",
                            f"{len(bad)} violating perturbation(s)"))
        found = verify_ic(profile_of(instance), instance.capacity, eps)
        checks.append(Check("mechanism-ic-ir", "fail" if found else "pass",
                            "; ".join(f"{v.kind} agent {v.agent}: {v.detail}" for v in found[:5])))
    return checks


def checks_to_json(checks: Sequence[Check]) -> str:
    doc = {"passed": all(c.status != "fail" for c in checks),
           "checks": [{"name": c.name, "status": c.status, "detail": c.detail} for c in checks]}
    return json.dumps(doc, indent=2) + "\n"
