"""Command-line front end.

Exit codes: 0 = SAT / axiom holds / liftable, 1 = UNSAT / violated / not
liftable, 2 = usage, input or resource error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence, TextIO

from .choice import Axiom, ChoiceError, PartialChoice, ResourceLimit, check_axiom
from .decider import FiniteModel, Semantics, Status, decide, verify_model
from .lifting import ClosedFamily, LiftingError, LiftReport, MenuPair, NoPreorder, lift
from .parser import ParseError, parse_formula
from .places import max_generators_from_env

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2
CONSTRUCT_CAP = 16


class _UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise _UsageError(f"{path}: {e.strerror}") from None


def _emit(obj, out: TextIO) -> None:
    json.dump(obj, out, indent=2)
    out.write("\n")


def _format_model(m: FiniteModel) -> list[str]:
    c = m.choice
    lines = [f"universe: {' '.join(m.universe)}"]
    for x, e in sorted(m.individuals.items()):
        lines.append(f"{x} = {e}")
    for name, s in sorted(m.sets.items()):
        lines.append(f"{name} = {c.format_set(c.mask(s))}")
    lines.append(f"choice ({m.rule} lifting) on named menus:")
    for menu in m.domain:
        lines.append(f"  c({c.format_set(menu)}) = {c.format_set(c[menu])}")
    return lines


# --------------------------------------------------------------------------
# sat

def run_sat(args, out: TextIO) -> int:
    src = _read(args.file)
    try:
        f = parse_formula(src)
    except ParseError as e:
        raise _UsageError(f"{args.file}:{e}") from None
    sem = Semantics(args.semantics)
    if args.verify_model is not None:
        try:
            model = FiniteModel.from_json(_read(args.verify_model))
        except (ValueError, KeyError, TypeError, ChoiceError, LiftingError) as e:
            raise _UsageError(f"{args.verify_model}: invalid model: {e}") from None
        ok = verify_model(model, f, sem)
        if args.json:
            _emit({"verified": ok}, out)
        else:
            out.write("verified\n" if ok else "not a model\n")
        return EXIT_YES if ok else EXIT_NO

    v = decide(f, sem, max_generators=args.max_places, jobs=args.jobs)
    if args.json:
        obj = {"verdict": v.status.value, "stats": dict(v.stats)}
        if v.reason:
            obj["reason"] = v.reason
        if v.sat and args.model:
            obj["model"] = v.model.to_json()
        _emit(obj, out)
    else:
        out.write(f"{v}\n")
        if v.sat and args.model:
            out.write("\n".join(_format_model(v.model)) + "\n")
    if v.status is Status.RESOURCE_LIMIT:
        if not args.json:
            sys.stderr.write(f"resource limit: {v.reason}\n")
        return EXIT_ERROR
    return EXIT_YES if v.sat else EXIT_NO


# --------------------------------------------------------------------------
# check / lift

def _load_choice(path: str) -> PartialChoice:
    try:
        return PartialChoice.from_json(_read(path))
    except ChoiceError as e:
        raise _UsageError(f"{path}: {e}") from None


def run_check(args, out: TextIO) -> int:
    c = _load_choice(args.file)
    res = check_axiom(c, Axiom(args.axiom))
    if args.json:
        obj = {"axiom": args.axiom, "holds": res.holds}
        if res.witness:
            obj["witness"] = [c.names(m) for m in res.witness]
        _emit(obj, out)
    elif res.holds:
        out.write(f"({args.axiom}) holds\n")
    else:
        a, b = res.witness
        out.write(f"({args.axiom}) violated: A = {c.format_set(a)}, B = {c.format_set(b)}\n")
    return EXIT_YES if res.holds else EXIT_NO


def _certificate(c: PartialChoice, rep: LiftReport) -> tuple[str, dict]:
    cert = rep.certificate
    if isinstance(cert, MenuPair):
        text = f"axiom fails on A = {c.format_set(cert.first)}, B = {c.format_set(cert.second)}"
        return text, {"kind": "menu-pair", "menus": [c.names(cert.first), c.names(cert.second)]}
    if isinstance(cert, ClosedFamily):
        menus = ", ".join(c.format_set(m) for m in cert.menus)
        whole = " (the whole domain)" if set(cert.menus) == set(c.menus) else ""
        text = f"subset-closed family{whole} whose rejections cover its union: {menus}"
        return text, {"kind": "closed-family", "menus": [c.names(m) for m in cert.menus]}
    if isinstance(cert, NoPreorder):
        cycle = " < ".join(c.format_set(r) for r in cert.cycle + cert.cycle[:1])
        text = f"regions forced into a strict cycle: {cycle}"
        return text, {"kind": "strict-cycle", "regions": [c.names(r) for r in cert.cycle]}
    raise AssertionError(cert)


def run_lift(args, out: TextIO) -> int:
    c = _load_choice(args.file)
    rep = lift(c, Axiom(args.axiom))
    obj: dict = {"axiom": args.axiom, "liftable": rep.liftable}
    lines: list[str] = []
    if rep.liftable:
        lines.append(f"({args.axiom})-liftable")
        if args.construct:
            if len(c.universe) > CONSTRUCT_CAP:
                lines.append(f"lifting not printed: more than {CONSTRUCT_CAP} elements")
                obj["witness"] = None
            else:
                w = rep.witness
                obj["witness"] = w.to_json()
                lines.extend(f"  c({w.format_set(m)}) = {w.format_set(w[m])}" for m in w.menus)
        if rep.preorder is not None:
            obj["layers"] = [sorted((c.names(r) for r in layer), key=str) for layer in rep.preorder.layers]
    else:
        text, cert = _certificate(c, rep)
        lines.append(f"not ({args.axiom})-liftable: {text}")
        obj["certificate"] = cert
    if args.json:
        _emit(obj, out)
    else:
        out.write("\n".join(lines) + "\n")
    return EXIT_YES if rep.liftable else EXIT_NO


# --------------------------------------------------------------------------
# oracle (hidden)

def run_oracle(args, out: TextIO) -> int:
    from .oracle import BudgetExceeded, OracleBudget, oracle_liftable, oracle_sat

    try:
        if args.oracle_command == "sat":
            f = parse_formula(_read(args.file))
            res = oracle_sat(f, Semantics(args.semantics), OracleBudget(max_universe=args.max_universe))
            out.write(f"{res} (assignments tried: {res.explored})\n")
            return EXIT_YES if res.sat else EXIT_NO
        c = _load_choice(args.file)
        ok = oracle_liftable(c, Axiom(args.axiom))
        out.write("liftable\n" if ok else "not liftable\n")
        return EXIT_YES if ok else EXIT_NO
    except ParseError as e:
        raise _UsageError(f"{args.file}:{e}") from None
    except BudgetExceeded as e:
        raise _UsageError(f"oracle budget exceeded: {e}") from None


# --------------------------------------------------------------------------
# argument parsing

def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bstc", description="Satisfiability and lifting for set theory with choice.")
    sub = p.add_subparsers(dest="command", required=True, metavar="{sat,check,lift}")

    sp = sub.add_parser("sat", help="decide a .bstc formula")
    sp.add_argument("file", help="formula file, or - for stdin")
    sp.add_argument("--semantics", required=True, choices=[s.value for s in Semantics])
    sp.add_argument("--model", action="store_true", help="print the witness model")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--max-places", type=_positive, default=None, metavar="N",
                    help="cap on generator slots; 2**N places are enumerated (default 24, or $BSTC_MAX_PLACES)")
    sp.add_argument("--jobs", type=_positive, default=1, metavar="N")
    sp.add_argument("--verify-model", metavar="MODEL_JSON", default=None,
                    help="check a model from --json output against the formula instead of solving")
    sp.set_defaults(run=run_sat)

    axioms = [a.value for a in Axiom]
    cp = sub.add_parser("check", help="check a consistency axiom on choice data")
    cp.add_argument("file", help="choice JSON file, or - for stdin")
    cp.add_argument("--axiom", required=True, choices=axioms)
    cp.add_argument("--json", action="store_true")
    cp.set_defaults(run=run_check)

    lp = sub.add_parser("lift", help="decide whether choice data extends to all menus")
    lp.add_argument("file", help="choice JSON file, or - for stdin")
    lp.add_argument("--axiom", required=True, choices=["alpha", "beta", "warp"])
    lp.add_argument("--construct", action="store_true", help="print the total lifting")
    lp.add_argument("--json", action="store_true")
    lp.set_defaults(run=run_lift)

    op = sub.add_parser("oracle", help=argparse.SUPPRESS)
    osub = op.add_subparsers(dest="oracle_command", required=True)
    os_ = osub.add_parser("sat")
    os_.add_argument("file")
    os_.add_argument("--semantics", required=True, choices=[s.value for s in Semantics])
    os_.add_argument("--max-universe", type=_positive, default=3)
    ol = osub.add_parser("lift")
    ol.add_argument("file")
    ol.add_argument("--axiom", required=True, choices=["alpha", "beta", "warp"])
    op.set_defaults(run=run_oracle)
    return p


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_YES
    try:
        if getattr(args, "max_places", None) is None and args.command == "sat":
            args.max_places = max_generators_from_env()
        return args.run(args, out)
    except _UsageError as e:
        sys.stderr.write(f"bstc: {e}\n")
    except ResourceLimit as e:
        sys.stderr.write(f"bstc: resource limit: {e}\n")
    except ValueError as e:
        sys.stderr.write(f"bstc: {e}\n")
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
