"""Command-line front end.  Exit status: 0 all checks pass, 1 a check
failed, 2 bad usage or unreadable input."""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import complete, equip, fib, fincat, finrel, prof, reglog
from .report import Report


@dataclass
class RunConfig:
    command: str
    max_size: int = 3
    word_bound: int = 8
    seed: int = 0
    json: bool = False


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from None


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None


def add_certificate(rep: Report, law: str, anchor: str, cert) -> None:
    rep.add(law, anchor, cert.ok, None if cert.ok else cert.to_json(), len(cert.functor.dom.arrows))
    rep.info[law] = cert.to_json()


# ------------------------------------------------------------------ subcommands


def run_allegory(args) -> Report:
    return finrel.validate_allegory(args.max_size, random_count=args.random, seed=args.seed)


def _fibration(instance: str, bound: int):
    if instance == "sub":
        return fib.SubFibration(bound)
    return fib.TabulatedFibration.from_json(_read_json(instance))


def run_fib(args) -> Report:
    f = _fibration(args.instance, args.max_size)
    rep = Report("fib")
    rep.extend(fib.validate(f, args.max_size))
    if isinstance(f, fib.SubFibration):
        rep.extend(fib.validate_sub_extras(f, args.max_size))
        rep.extend(fib.pullback_agreement(min(args.max_size, 3)), prefix="squares/")
    return rep


def run_equip(args) -> Report:
    f = _fibration(args.fib, args.max_size)
    m = equip.matr(f)
    bound = args.max_size if isinstance(f, fib.SubFibration) else None
    rep = Report("equip")
    objs = [x for x in m.base.objects() if m.base.within(x, bound)]
    rep.info["objects"] = len(objs)
    rep.info["hom sizes"] = {f"{x!r} -> {y!r}": len(m.hom(x, y)) for x in objs for y in objs}
    if args.validate:
        rep.extend(equip.validate_cartesian_regular(m, bound, seed=args.seed))
        rep.extend(equip.validate_equipment(m, bound, seed=args.seed))
        if isinstance(f, fib.SubFibration):
            rep.extend(equip.matr_relation_agreement(m, args.max_size))
    if args.tabulate:
        try:
            r = finrel.Relation.from_json(_read_json(args.tabulate))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"{args.tabulate}: not a relation: {e}") from None
        tab = equip.tabulate_proarrow(m, equip.from_relation(r))
        rep.info["tabulation"] = {"apex": list(tab.apex.elements),
                                  "legs": [[z, tab.left(z), tab.right(z)] for z in tab.apex]}
        back = finrel.Relation(r.src, r.tgt, [(tab.left(z), tab.right(z)) for z in tab.apex])
        rep.add("tabulation", "legs of the tabulation recover the relation", back == r, None, 1)
    if not rep.checks:
        rep.add("matr built", "hom posets enumerated", True, None, len(objs))
    return rep


def run_complete(args) -> Report:
    n = args.max_size
    rep = Report(f"complete-{args.cls}")
    sc = complete.split_class(complete.RelAmbient(n), args.cls, n)
    maps = complete.maps_of(sc, n)
    rep.info["objects"] = len(sc.objects)
    rep.info["maps"] = len(maps.arrows)
    rep.extend(fincat.validate_category(maps), prefix="maps/")
    rep.extend(complete.splitting_suite(n))
    if args.cls == "eqv":
        cert, _ = complete.exact_completion_certificate(n)
        add_certificate(rep, "exact completion", "FinSet embeds as an equivalence", cert)
    elif args.cls == "crf":
        rep.extend(complete.crf_tabular(n))
    return rep


def run_pers(args) -> Report:
    n = args.max_size
    rep = Report("pers")
    cert, pers, maps = complete.per_equivalence(fib.SubFibration(n), n)
    rep.info["pers"] = len(pers.objects)
    rep.info["per morphisms"] = len(pers.arrows)
    rep.extend(fincat.validate_category(pers), prefix="pers/")
    add_certificate(rep, "pers vs symmetric splitting", "fully faithful and essentially surjective", cert)
    return rep


def run_prof(args) -> Report:
    if args.action == "suite":
        rep = Report("prof")
        rep.extend(prof.composition_suite(seed=args.seed))
        rep.extend(prof.kleisli_suite())
        return rep
    if not args.monad:
        raise InputError("prof kleisli needs --monad FILE")
    try:
        t = prof.ProfMonad.from_json(_read_json(args.monad))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"{args.monad}: not a monad: {e}") from None
    rep = Report("kleisli")
    try:
        k, ft = prof.kleisli_object(t)
    except prof.MonadLawError as e:
        rep.add(e.law, "monad laws", False, e.witness, 1)
        return rep
    rep.add("monad laws", "unit and multiplication", True, None, 1)
    rep.extend(fincat.validate_category(k), prefix="kleisli/")
    rep.add("F_T is a functor", "identity on objects", ft.validate().ok, None, len(t.carrier.arrows))
    rep.info["kleisli"] = k.to_json()
    return rep


def run_logic(args) -> Report:
    if args.action == "suite":
        rep = Report("logic")
        rep.extend(reglog.logic_suite(args.count, seed=args.seed))
        rep.extend(reglog.pullback_sequent_agreement(min(args.max_size, 3)), prefix="squares/")
        return rep
    if not args.theory:
        raise InputError("logic check needs --theory FILE")
    sig, th = reglog.parse_theory(_read_text(args.theory))
    if not args.model:
        rep = Report("theory")
        rep.add("well formed", "parsed and type checked", True, None, len(th.axioms))
        rep.info["axioms"] = [str(a) for a in th.axioms]
        return rep
    return reglog.check_theory(th, reglog.load_model(sig, _read_text(args.model)))


def run_colim(args) -> Report:
    return fincat.colimit_suite(args.count, seed=args.seed, word_bound=args.word_bound)


COMMANDS = {"allegory": run_allegory, "fib": run_fib, "equip": run_equip, "complete": run_complete,
            "pers": run_pers, "prof": run_prof, "logic": run_logic, "colim": run_colim}


# ------------------------------------------------------------------ argument parsing


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--json", action="store_true", default=d(False), help="emit the report as JSON")
    p.add_argument("--seed", type=int, default=d(0), help="seed for randomized suites")
    p.add_argument("--max-size", "--universe-size", dest="max_size", type=_positive, default=d(3),
                   help="largest set size in enumerated universes")
    p.add_argument("--word-bound", type=_positive, default=d(8), help="word length bound for presented categories")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relkit", description="Brute-force checks for finite relational structures.")
    _globals(parser, False)
    common = argparse.ArgumentParser(add_help=False)
    _globals(common, True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("allegory", parents=[common], help="allegory and bicategory-of-relations laws")
    p.add_argument("--random", type=int, default=0, help="extra random relations on sets up to size 5")

    p = sub.add_parser("fib", parents=[common], help="regular fibration axioms")
    p.add_argument("action", choices=["validate"])
    p.add_argument("--instance", default="sub", help="'sub' or a fibration JSON file")

    p = sub.add_parser("equip", parents=[common], help="matrices over a fibration")
    p.add_argument("action", choices=["matr"])
    p.add_argument("--fib", default="sub", help="'sub' or a fibration JSON file")
    p.add_argument("--validate", action="store_true")
    p.add_argument("--tabulate", metavar="R.json")

    p = sub.add_parser("complete", parents=[common], help="split a class of idempotent relations")
    p.add_argument("--class", dest="cls", choices=sorted(complete.CLASSES), required=True)

    sub.add_parser("pers", parents=[common], help="partial equivalence relations")

    p = sub.add_parser("prof", parents=[common], help="profunctors and Kleisli objects")
    p.add_argument("action", choices=["kleisli", "suite"])
    p.add_argument("--monad", metavar="FILE")

    p = sub.add_parser("logic", parents=[common], help="regular logic")
    p.add_argument("action", choices=["check", "suite"])
    p.add_argument("--theory", metavar="FILE")
    p.add_argument("--model", metavar="FILE")
    p.add_argument("--count", type=_positive, default=1000)

    p = sub.add_parser("colim", parents=[common], help="colimits of diagrams of categories")
    p.add_argument("--count", type=_positive, default=50)
    return parser


def run(config: RunConfig, args: argparse.Namespace | None = None) -> Report:
    args = args or build_parser().parse_args([config.command])
    for key in ("max_size", "word_bound", "seed"):
        setattr(args, key, getattr(config, key))
    return COMMANDS[config.command](args)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(args.command, args.max_size, args.word_bound, args.seed, args.json)
    start = time.perf_counter()
    try:
        rep = run(config, args)
    except reglog.LogicError as e:
        print(f"relkit: {e}", file=sys.stderr)
        return 2
    except (InputError, fib.FiberError, prof.ProfError) as e:
        print(f"relkit: {e}", file=sys.stderr)
        return 2
    rep.elapsed = time.perf_counter() - start
    if config.json:
        print(rep.dumps())
    else:
        print(rep.text())
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
