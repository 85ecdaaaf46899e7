"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 verification failure,
3 parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from .cancellation import PieceReport, VerificationParams, verify_metric
from .construct import (
    ConstructionError,
    NoAdmissibleN,
    Presentation,
    build_theorem_a,
    build_theorem_b,
    find_min_n,
    predicted_lengths,
)
from .dehn import DehnSolver, NotVerified, oracle_is_trivial
from .files import ConfigError, ProjectConfig, load_config, load_presentation, save_presentation
from .freeprod import LiteralError

OK, INVALID, UNVERIFIED, PARSE = 0, 1, 2, 3


def _emit(args, human: list[str], machine: dict[str, Any]) -> None:
    if args.json:
        print(json.dumps(machine, indent=1, default=str))
    else:
        print("\n".join(human))


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _report_dict(rep: PieceReport, top: int | None = None) -> dict:
    classes = sorted(rep.classes, key=lambda c: (-c.ratio, c.label))
    if top is not None:
        classes = classes[:top]
    return {
        "passed": rep.passed,
        "lambda": _frac(rep.lambda_),
        "min_relator_length": rep.min_relator_length,
        "worst_ratio": _frac(rep.worst_ratio),
        "short_relators": list(rep.short_relators),
        "violations": len(rep.violations),
        "classes": [{
            "label": c.label,
            "piece_length": c.piece_length,
            "relator_length": c.relator_length,
            "ratio": _frac(c.ratio),
            "piece": c.witness.word.serialize() if c.witness else None,
            "split": c.witness.split_tail if c.witness else None,
        } for c in classes],
    }


def _report_lines(rep: PieceReport, top: int | None = None) -> list[str]:
    d = _report_dict(rep, top)
    out = [f"{'PASS' if rep.passed else 'FAIL'}  lambda={d['lambda']}  worst={d['worst_ratio']}  "
           f"violating members={d['violations']}"]
    if rep.short_relators:
        out.append("relators too short: " + ", ".join(rep.short_relators))
    out.append(f"{'class':<16}{'piece':>7}{'|r|':>7}  ratio")
    for c in d["classes"]:
        out.append(f"{c['label']:<16}{c['piece_length']:>7}{c['relator_length']:>7}  {c['ratio']}")
    w = rep.worst
    if w is not None and not rep.passed:
        text = w.witness.word.serialize()
        if len(text) > 160:
            text = text[:157] + "..."
        out.append(f"witness piece ({w.piece_length} letters) in {w.label}: {text}")
    return out


def _build(cfg: ProjectConfig, theorem: str, n: int | None, force: bool) -> Presentation:
    params = cfg.construction(n, force or None)
    if theorem == "b":
        if cfg.theorem_b is None:
            raise ConstructionError("the config has no indexed-variant section (J, alpha, L)")
        return build_theorem_b(cfg.theorem_b, params)
    return build_theorem_a(params)


# ------------------------------------------------------------ commands

def cmd_factors_check(args) -> int:
    cfg = load_config(args.config)
    problems = []
    for i, m in enumerate(cfg.family):
        problems += m.problems(i)
    _emit(args, [f"FAIL {p}" for p in problems] or [f"ok: {len(cfg.family)} members"],
          {"passed": not problems, "problems": problems})
    return INVALID if problems else OK


def cmd_build(args) -> int:
    cfg = load_config(args.config)
    pres = _build(cfg, args.theorem or cfg.theorem, args.n, args.force)
    out = args.output or cfg.output
    if out:
        save_presentation(pres, out)
    rows = predicted_lengths(pres) if pres.meta.get("theorem") == "a" else []
    lines = [f"{len(pres.relators)} relators, {pres.symmetrized.total_letters} closure letters"
             + (f", written to {out}" if out else "")]
    lines += [f"{r.label:<14}{r.measured:>7}{r.predicted:>7}  {'ok' if r.ok else 'MISMATCH'}" for r in rows]
    _emit(args, lines, {"relators": len(pres.relators), "output": out,
                        "lengths": [{"label": r.label, "measured": r.measured, "predicted": r.predicted}
                                    for r in rows]})
    return INVALID if any(not r.ok for r in rows) else OK


def _verification(args) -> VerificationParams:
    lam = Fraction(args.lam) if args.lam else Fraction(1, 6)
    return VerificationParams(lam, args.min_length)


def cmd_verify(args) -> int:
    pres = load_presentation(args.presentation)
    rep = verify_metric(pres.symmetrized, _verification(args), method=args.method)
    _emit(args, _report_lines(rep, args.top), _report_dict(rep, args.top))
    return OK if rep.passed else UNVERIFIED


def cmd_pieces(args) -> int:
    pres = load_presentation(args.presentation)
    rep = verify_metric(pres.symmetrized, _verification(args))
    _emit(args, _report_lines(rep, args.top)[2:], _report_dict(rep, args.top)["classes"])
    return OK


def cmd_min_n(args) -> int:
    cfg = load_config(args.config)
    coprime = cfg.coprime6 if args.coprime6 is None else args.coprime6
    n = find_min_n(cfg.family, cfg.verification, coprime, args.bound or cfg.bound, args.jobs or cfg.jobs)
    _emit(args, [str(n)], {"n": n, "coprime6": coprime})
    return OK


def cmd_reduce(args) -> int:
    pres = load_presentation(args.presentation)
    solver = DehnSolver(pres, unchecked=args.unchecked)
    final, trace = solver.reduce(pres.family.parse(args.word))
    lines = [final.serialize(), f"steps: {len(trace.steps)}"]
    if args.trace:
        lines += trace.lines()
    _emit(args, lines, {"final": final.serialize(), "trivial": not final, "steps": [
        {"offset": s.offset, "relator": s.relator, "matched": len(s.matched), "length": len(s.result)}
        for s in trace.steps]})
    return OK


def cmd_oracle(args) -> int:
    pres = load_presentation(args.presentation)
    verdict = oracle_is_trivial(pres.family.parse(args.word), pres, args.max_len)
    text = "trivial" if verdict else "unknown"
    _emit(args, [text], {"verdict": text})
    return OK


def main(argv: Sequence[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="smallcancel", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("factors-check", parents=[common], help="validate groups, hosts and embeddings")
    p.add_argument("config")
    p.set_defaults(fn=cmd_factors_check)

    p = sub.add_parser("build", parents=[common], help="write the presentation file")
    p.add_argument("config")
    p.add_argument("--theorem", choices=["a", "b"])
    p.add_argument("--n", type=int)
    p.add_argument("--force", action="store_true", help="allow n not coprime to 6")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_build)

    for name, fn, helptext in (("verify", cmd_verify, "check the metric condition"),
                               ("pieces", cmd_pieces, "tabulate worst pieces")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("presentation")
        p.add_argument("--lambda", dest="lam", help="p/q, default 1/6")
        p.add_argument("--min-length", type=int, default=7)
        p.add_argument("--top", type=int)
        if name == "verify":
            p.add_argument("--method", choices=["scan", "materialized"], default="scan")
        p.set_defaults(fn=fn)

    p = sub.add_parser("min-n", parents=[common], help="least n passing the metric condition")
    p.add_argument("config")
    p.add_argument("--coprime6", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--bound", type=int)
    p.add_argument("--jobs", type=int)
    p.set_defaults(fn=cmd_min_n)

    p = sub.add_parser("reduce", parents=[common], help="run Dehn's algorithm on a word literal")
    p.add_argument("presentation")
    p.add_argument("word")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--unchecked", action="store_true", help="skip the metric precondition")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("oracle", parents=[common], help="brute-force triviality search (toy sizes)")
    p.add_argument("presentation")
    p.add_argument("word")
    p.add_argument("--max-len", type=int, default=12)
    p.set_defaults(fn=cmd_oracle)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, LiteralError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return PARSE
    except NotVerified as exc:
        print(f"not verified: {exc}", file=sys.stderr)
        return UNVERIFIED
    except (ConstructionError, NoAdmissibleN, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
