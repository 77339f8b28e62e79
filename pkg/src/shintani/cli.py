"""Batch command-line interface with JSON input and output.

Commands (selected with --command):

  pair      pair a cone (or cone function) with a step function, emit the
            pseudo-measure
  vh        vanishing-hypothesis verdict per ray
  moments   power moments of a paired measure, as p-adic strings plus the
            reconstructed small rational where one exists
  cocycle   run the cocycle / equivariance / measure-valuedness trials and
            emit a verification report

All randomness flows from --seed; reports are byte-identical across runs
with the same configuration. Exit codes: 0 ok, 2 malformed input, 3
dependent input vectors, 4 not a measure, 5 precision exhausted, 6 a
verification trial failed.

Rationals are serialized as decimal strings ("3/4"); p-adic scalars as
"p^v*u" with valuation v and unit u.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import amice, cocycle, linalg, solomon_hu, testfunctions
from .cones import ConeFunction, OpenCone
from .errors import (
    DependentInput,
    NonGenericDeformation,
    NotAMeasure,
    PrecisionExhausted,
    SchemaError,
    ShintaniError,
)
from .padic import rational_reconstruct

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_DEPENDENT = 3
EXIT_NOT_A_MEASURE = 4
EXIT_PRECISION = 5
EXIT_TRIAL_FAILED = 6


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shintani",
        description="exact cone pairings, p-adic measure tests, cocycle verification",
    )
    parser.add_argument("--command", required=True,
                        choices=("pair", "vh", "moments", "cocycle"))
    parser.add_argument("--input", help="path to the input JSON file")
    parser.add_argument("--p", type=int, default=3)
    parser.add_argument("--M", type=int, default=4)
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--precision", type=int, default=amice.DEFAULT_PRECISION)
    parser.add_argument("--degree", type=int, default=amice.DEFAULT_DEGREE)
    parser.add_argument("--bound", type=int, default=12,
                        help="q-expansion bound (recorded in reports)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=10)
    parser.add_argument("--max-order", type=int, default=3,
                        help="largest total moment order for --command moments")
    parser.add_argument("--corrupt-sign", action="store_true",
                        help="debug: flip one cocycle term, the identity must fail")
    parser.add_argument("--out", help="write the report here instead of stdout")
    return parser


def _load_input(path: str | None) -> dict:
    if path is None:
        raise SchemaError("--input is required for this command")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read input JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError("top-level JSON value must be an object")
    return data


def _parse_vector(raw) -> tuple:
    try:
        return tuple(Fraction(str(x)) for x in raw)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad vector {raw!r}") from exc


def _parse_cone_function(data: dict) -> ConeFunction:
    try:
        if "cone" in data:
            gens = [_parse_vector(g) for g in data["cone"]["generators"]]
            return ConeFunction.of(OpenCone(tuple(gens)))
        terms = []
        for term in data["cone_function"]:
            gens = [_parse_vector(g) for g in term["generators"]]
            terms.append((int(term.get("coefficient", 1)), OpenCone(tuple(gens))))
        return ConeFunction(tuple(terms))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad cone JSON: {exc}") from exc


def cmd_pair(args) -> tuple[dict, int]:
    data = _load_input(args.input)
    if "test_function" not in data:
        raise SchemaError("missing test_function")
    f = testfunctions.from_json(data["test_function"])
    k = _parse_cone_function(data)
    pm = solomon_hu.pair_cone_function(k, f)
    return solomon_hu.pm_to_json(pm), EXIT_OK


def cmd_vh(args) -> tuple[dict, int]:
    data = _load_input(args.input)
    if "test_function" not in data:
        raise SchemaError("missing test_function")
    f = testfunctions.from_json(data["test_function"])
    out = {}
    for entry in data.get("rays", []):
        if isinstance(entry, dict):
            ray = _parse_vector(entry["v"])
            name = str(entry.get("name") or ",".join(str(x) for x in ray))
        else:
            ray = _parse_vector(entry)
            name = ",".join(str(x) for x in ray)
        out[name] = testfunctions.check_vh(f, ray)
    return out, EXIT_OK


def cmd_moments(args) -> tuple[dict, int]:
    data = _load_input(args.input)
    if "test_function" in data:
        f = testfunctions.from_json(data["test_function"])
        k = _parse_cone_function(data)
        if len(k.terms) != 1 or k.terms[0][0] != 1:
            raise SchemaError("moments need a single open cone with coefficient 1")
        cone = k.terms[0][1]
        if not amice.is_measure_vh(cone, f):
            raise NotAMeasure("vanishing hypothesis fails on an extremal ray")
        pm = solomon_hu.pair_open_cone(cone, f)
        p = f.ctx.p
    elif "numerator" in data:
        pm = solomon_hu.pm_from_json(data)
        p = args.p
        if not amice.is_measure_amice(pm, p, args.precision, args.degree):
            raise NotAMeasure("series-side divisibility test fails")
    else:
        raise SchemaError("expected test_function+cone or a pseudo-measure")
    if not pm.num:
        n = args.n
    else:
        n = pm.dim
    table = []
    for kk in _moment_orders(n, args.max_order):
        if not pm.num:
            value = None
        else:
            value = amice.power_moments(pm, p, kk, args.precision, args.degree)
        if value is None:
            padic_str, rational = "0", "0"
        else:
            padic_str = str(value)
            frac = rational_reconstruct(value)
            rational = str(frac) if frac is not None else None
        table.append({"order": list(kk), "padic": padic_str, "rational": rational})
    return {"p": p, "precision": args.precision, "moments": table}, EXIT_OK


def _moment_orders(n: int, max_total: int) -> list[tuple[int, ...]]:
    if n == 1:
        return [(k,) for k in range(max_total + 1)]
    out = []

    def rec(prefix, remaining):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for k in range(remaining + 1):
            rec(prefix + [k], remaining - k)

    rec([], max_total)
    return sorted(out, key=lambda e: (sum(e), e))


def _with_generic_q(fn, n: int, rng: random.Random, attempts: int = 32):
    """Call fn(q) with sampled deformation vectors until one is generic."""
    for _ in range(attempts):
        q = cocycle.sample_deformation(n, rng)
        try:
            return q, fn(q)
        except NonGenericDeformation:
            continue
    raise NonGenericDeformation("no generic deformation vector found")


def cmd_cocycle(args) -> tuple[dict, int]:
    data = _load_input(args.input)
    if "test_function" not in data:
        raise SchemaError("missing test_function")
    f = testfunctions.from_json(data["test_function"])
    ctx = f.ctx
    rng = random.Random(args.seed)
    trials = []
    all_pass = True
    for t in range(args.trials):
        trial_seed = args.seed * 65537 + t
        mats = cocycle.sample_congruence_tuple(ctx, ctx.n + 1, trial_seed)
        g = testfunctions.random_congruence_element(ctx, trial_seed ^ 0x5EED)

        def one_trial(q):
            ok_c = cocycle.verify_cocycle(
                f, mats, q, trials=1, seed=trial_seed, corrupt_sign=args.corrupt_sign
            )
            ok_e = cocycle.verify_equivariance(
                f, g, cocycle.CocycleInput(mats[: ctx.n], q)
            )
            return ok_c, ok_e

        q, (ok_cocycle, ok_equiv) = _with_generic_q(one_trial, ctx.n, rng)
        record = {
            "index": t,
            "seed": trial_seed,
            "matrices": [[list(row) for row in m] for m in mats],
            "q": [str(x) for x in q],
            "cocycle": ok_cocycle,
            "equivariance": ok_equiv,
        }
        if not (ok_cocycle and ok_equiv):
            bad = cocycle._alternating_sum(f, mats, linalg.vec(q), args.corrupt_sign)
            record["offending"] = solomon_hu.pm_to_json(bad)
            all_pass = False
        trials.append(record)
    e1 = tuple(1 if i == 0 else 0 for i in range(ctx.n))
    vh_e1 = testfunctions.check_vh(f, e1)
    _q, measure_ok = _with_generic_q(
        lambda q: cocycle.verify_measure_valued(
            f, max(1, args.trials // 4), q, seed=args.seed, require_vh=False
        ),
        ctx.n,
        rng,
    )
    if vh_e1 and not measure_ok:
        all_pass = False
    report = {
        "config": {
            "command": "cocycle",
            "n": ctx.n,
            "p": ctx.p,
            "M": ctx.M,
            "seed": args.seed,
            "trials": args.trials,
            "precision": args.precision,
            "degree": args.degree,
            "bound": args.bound,
            "corrupt_sign": bool(args.corrupt_sign),
        },
        "trials": trials,
        "vh_e1": vh_e1,
        "measure_valued": measure_ok,
        "all_pass": all_pass,
    }
    return report, EXIT_OK if all_pass else EXIT_TRIAL_FAILED


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "pair": cmd_pair,
        "vh": cmd_vh,
        "moments": cmd_moments,
        "cocycle": cmd_cocycle,
    }
    try:
        report, code = handlers[args.command](args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except DependentInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEPENDENT
    except NotAMeasure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_A_MEASURE
    except PrecisionExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except ShintaniError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: malformed input: {exc!r}", file=sys.stderr)
        return EXIT_SCHEMA
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
