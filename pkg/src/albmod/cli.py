"""Command-line front end.

Every subcommand prints one JSON document with sorted keys.  Exit codes:
0 all checks passed, 1 a verification failed (a counterexample file is
written), 2 malformed input, 3 a budget or cap limit was hit.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import BudgetError, CapError, DomainError, ParseError, PrecisionError
from .fields import GF
from .filtration import filF_membership, nty
from .modulus import lemma_equivalence_report, local_class, modulus_of
from .parse import parse_divisor, parse_map, parse_place, parse_ratfun, parse_witt

SCHEMA_VERSION = 1
SUITES = ("universality", "lemma", "surjection", "sections", "covers", "reciprocity")


class VerificationFailed(Exception):
    def __init__(self, report: dict):
        super().__init__("verification failed")
        self.report = report


def _field(args):
    return GF(args.p, args.m)


def _emit(obj: dict, out: str | None):
    obj = dict(obj, schema=SCHEMA_VERSION)
    text = json.dumps(obj, sort_keys=True, indent=1, default=str)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


# -- subcommands --------------------------------------------------------------------


def cmd_nty(args) -> dict:
    F = _field(args)
    q = parse_place(args.place, F)
    w = parse_witt(args.witt, F)
    if w.r != args.r:
        raise ParseError(f"Witt vector has length {w.r}, expected {args.r}", args.witt, 0)
    cls = local_class(w, q)
    n = nty(cls)
    cert = filF_membership(cls, n)
    return {"nty": n, "place": repr(q), "certificate": cert.to_json(), "caps": cert.to_json()["caps"]}


def _load_map(args):
    if args.map_text:
        return parse_map(args.map_text)
    return parse_map(Path(args.map).read_text())


def cmd_modulus(args) -> dict:
    phi = _load_map(args)
    mod, per = modulus_of(phi)
    return {"modulus": mod.format(), "per_place": {repr(q): v for q, v in per.items()}}


def cmd_raygroup(args) -> dict:
    from .ray_chow import ray_group

    D = parse_divisor(args.D, _field(args))
    g = ray_group(D)
    return {"D": D.format(), "invariant_factors": list(g.invariant_factors), "order": g.order}


def cmd_chow(args) -> dict:
    from .ray_chow import chow_group

    D = parse_divisor(args.D, _field(args))
    return chow_group(D, args.bound).to_json()


def cmd_cft(args) -> dict:
    from .cft import cover_count_vs_dual, reciprocity_well_defined

    F = _field(args)
    D = parse_divisor(args.D, F)
    if args.action == "covers":
        return cover_count_vs_dual(D)
    if not args.f:
        raise ParseError("reciprocity needs --f", "", 0)
    return reciprocity_well_defined(parse_ratfun(args.f, F), D, samples=args.samples, seed=args.seed)


def run_suite(suite: str, params: dict) -> dict:
    """Run one verification suite; ``params`` holds the textual inputs."""
    from . import cft, ray_chow

    F = GF(params.get("p", 2), params.get("m", 1))
    if suite == "universality":
        rep = ray_chow.universality_check(parse_divisor(params["D"], F), params.get("bound"))
    elif suite == "lemma":
        phi = parse_map(params["map"])
        rep = lemma_equivalence_report(phi, parse_divisor(params["D"], phi.field))
        rep["ok"] = rep["agree"]
    elif suite == "surjection":
        rep = ray_chow.surjection_check(parse_divisor(params["E"], F), parse_divisor(params["D"], F))
    elif suite == "sections":
        rep = ray_chow.global_fil_sections(parse_divisor(params["D"], F), params.get("r", 1))
    elif suite == "covers":
        rep = cft.cover_count_vs_dual(parse_divisor(params["D"], F))
    elif suite == "reciprocity":
        rep = cft.reciprocity_well_defined(parse_ratfun(params["f"], F), parse_divisor(params["D"], F), seed=params.get("seed", 0))
    else:
        raise ParseError(f"unknown suite {suite!r}", suite, 0)
    return {"suite": suite, "params": params, "report": rep, "ok": bool(rep.get("ok"))}


def _suite_params(args) -> dict:
    params = {"p": args.p, "m": args.m, "seed": args.seed}
    for key in ("D", "E", "f", "bound", "r"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    if getattr(args, "map", None) or getattr(args, "map_text", None):
        params["map"] = args.map_text or Path(args.map).read_text()
    return params


def cmd_verify(args) -> dict:
    out = run_suite(args.suite, _suite_params(args))
    if not out["ok"]:
        raise VerificationFailed(out)
    return out


def cmd_replay(args) -> dict:
    data = json.loads(Path(args.artifact).read_text())
    out = run_suite(data["suite"], data["params"])
    out["replayed"] = args.artifact
    if not out["ok"]:
        raise VerificationFailed(out)
    return out


# -- argument parsing -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2, help="characteristic")
    common.add_argument("--m", type=int, default=1, help="degree of the constant field over F_p")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="also write the JSON report to this file")
    common.add_argument("--config", help="JSON file with default values for the flags")

    ap = argparse.ArgumentParser(prog="albmod", description="Moduli of rational maps on P^1 over finite fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("nty", parents=[common], help="least n with u in fil^F_n at a place")
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--place", required=True)
    s.add_argument("--witt", required=True)
    s.set_defaults(func=cmd_nty)

    s = sub.add_parser("modulus", parents=[common], help="modulus of a rational map")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--map", help="map file")
    g.add_argument("--map-text", help="map description given inline")
    s.set_defaults(func=cmd_modulus)

    s = sub.add_parser("raygroup", parents=[common], help="ray class group of P^1 with modulus D")
    s.add_argument("--D", required=True)
    s.set_defaults(func=cmd_raygroup)

    s = sub.add_parser("chow", parents=[common], help="relative Chow group by brute force")
    s.add_argument("--D", required=True)
    s.add_argument("--bound", type=int)
    s.set_defaults(func=cmd_chow)

    s = sub.add_parser("cft", parents=[common], help="Artin-Schreier cover checks")
    s.add_argument("action", choices=["covers", "reciprocity"])
    s.add_argument("--D", required=True)
    s.add_argument("--f")
    s.add_argument("--samples", type=int, default=20)
    s.set_defaults(func=cmd_cft)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", choices=SUITES)
    s.add_argument("--D")
    s.add_argument("--E")
    s.add_argument("--f")
    s.add_argument("--r", type=int)
    s.add_argument("--bound", type=int)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--map")
    g.add_argument("--map-text")
    s.add_argument("--counterexample", default="counterexample.json", help="where to write a failing case")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("replay", parents=[common], help="rerun a counterexample file")
    s.add_argument("artifact")
    s.add_argument("--counterexample", default="counterexample.json")
    s.set_defaults(func=cmd_replay)
    return ap


def _apply_config(ap, argv):
    args = ap.parse_args(argv)
    if getattr(args, "config", None):
        cfg = json.loads(Path(args.config).read_text())
        sub = ap._subparsers._group_actions[0].choices[args.command]
        sub.set_defaults(**{k.replace("-", "_"): v for k, v in cfg.items()})
        args = ap.parse_args(argv)
    return args


def main(argv=None) -> int:
    ap = build_parser()
    args = _apply_config(ap, argv)
    out = getattr(args, "out", None)
    try:
        _emit(args.func(args), out)
        return 0
    except ParseError as exc:
        print(exc.annotated(), file=sys.stderr)
        return 2
    except (BudgetError, CapError, PrecisionError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, out)
        return 3
    except DomainError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except VerificationFailed as exc:
        rep = exc.report
        artifact = {"suite": rep["suite"], "params": rep["params"]}
        Path(args.counterexample).write_text(json.dumps(artifact, sort_keys=True, indent=1) + "\n")
        _emit(dict(rep, counterexample=args.counterexample), out)
        return 1


if __name__ == "__main__":
    sys.exit(main())
