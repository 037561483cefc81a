"""``complexknap`` command line.

Exit codes: 0 success, 1 failed verification, 2 usage error, 3 parse error,
4 contract error, 5 resource error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import runner
from .errors import CkpError
from .generate import PROFILES, generate
from .hardness import decide_ckp_cardinality, reduce_equipartition
from .instance_io import load_instance, serialize_instance
from .core import format_rational


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    inst = load_instance(args.input)
    report = runner.run_solve(inst, args.algorithm, args.epsilon, with_oracle=args.oracle)
    _emit(report.to_json(args.timing), args.output)
    return 0


def cmd_oracle(args) -> int:
    report = runner.run_oracle(load_instance(args.input), args.limit)
    _emit(report.to_json(args.timing), args.output)
    return 0


def cmd_payments(args) -> int:
    report = runner.run_payments(load_instance(args.input), args.epsilon)
    _emit(report.to_json(args.timing), args.output)
    return 0


def cmd_reduce(args) -> int:
    reduced = reduce_equipartition(args.weights)
    doc = {
        "c_sq": format_rational(reduced.c_sq),
        "beta_sq": format_rational(reduced.beta_sq),
        "cardinality_bound": reduced.cardinality_bound,
    }
    if not args.no_decide:
        doc["answer"] = "yes" if decide_ckp_cardinality(reduced) else "no"
    if args.instance:
        Path(args.instance).write_text(serialize_instance(reduced.instance), encoding="utf-8")
        doc["instance"] = args.instance
    else:
        doc["instance"] = json.loads(serialize_instance(reduced.instance))
    _emit(json.dumps(doc, indent=2) + "\n", args.output)
    return 0


def cmd_bench(args) -> int:
    algos = args.algorithms.split(",") if args.algorithms else None
    eps = args.epsilons.split(",")
    _emit(runner.bench(args.corpus, algos, eps, args.jobs), args.output)
    return 0


def cmd_verify(args) -> int:
    checks = runner.verify_instance(load_instance(args.input), args.epsilon)
    _emit(runner.checks_to_json(checks), args.output)
    return 1 if any(c.status == "fail" for c in checks) else 0


def cmd_generate(args) -> int:
    inst = generate(args.seed, args.n, args.kind, args.profile, args.value_max,
                    args.irrational_capacity)
    _emit(serialize_instance(inst), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="complexknap",
                                description="Exact solvers for complex-demand knapsack problems.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, eps=True):
        sp.add_argument("input", help="instance file (JSON)")
        sp.add_argument("-o", "--output", help="write the report here instead of stdout")
        sp.add_argument("--timing", action="store_true", help="include wall time in the report")
        if eps:
            sp.add_argument("-e", "--epsilon", default="1/2", help="rational, e.g. 1/4 (default 1/2)")

    sp = sub.add_parser("solve", help="run one solver")
    sp.add_argument("-a", "--algorithm", required=True, choices=sorted(runner.ALGORITHMS))
    sp.add_argument("--oracle", action="store_true", help="also report the brute-force optimum")
    common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("oracle", help="brute-force optimum (size guarded)")
    sp.add_argument("--limit", type=int, help="override the size guard")
    common(sp, eps=False)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("payments", help="run the truthful mechanism")
    common(sp)
    sp.set_defaults(func=cmd_payments)

    sp = sub.add_parser("reduce", help="equipartition weights -> reduced instance + answer")
    sp.add_argument("weights", nargs="+", type=int)
    sp.add_argument("--instance", help="write the reduced instance file here")
    sp.add_argument("-o", "--output", help="write the summary here instead of stdout")
    sp.add_argument("--no-decide", action="store_true", help="skip the decision oracle")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("bench", help="corpus directory -> CSV")
    sp.add_argument("corpus")
    sp.add_argument("--algorithms", help="comma-separated subset (default: all applicable)")
    sp.add_argument("--epsilons", default="1/2,1/4", help="comma-separated (default 1/2,1/4)")
    sp.add_argument("-j", "--jobs", type=int, default=1)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("verify", help="run the property checks on one instance")
    sp.add_argument("input")
    sp.add_argument("-e", "--epsilon", default="1/2")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("generate", help="seeded random instance")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("-n", "--n", type=int, required=True)
    sp.add_argument("--kind", default="c-kp", choices=["1-kp", "c-kp", "gc-kp"])
    sp.add_argument("--profile", default="mixed", choices=sorted(PROFILES))
    sp.add_argument("--value-max", type=int, default=100)
    sp.add_argument("--irrational-capacity", action="store_true")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_generate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CkpError as exc:
        print(f"complexknap: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
