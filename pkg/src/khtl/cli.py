"""Command-line front end.

Every table is printed twice: in the internal convention (cohomological
Khovanov homology of the word as written) and in the convention of the
published tables, where the spectrum in q-degree j has reduced homology
Kh^{i,j} of the mirror.  For twist towers the two coincide, because the
internal towers are built from the mirror crossings to begin with.

Exit codes: 0 success, 1 invalid input (a JSON error object is printed),
2 a verification step failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import __version__
from .compile import (
    PAPER_NORMALIZATION,
    BraidWord,
    TangleWord,
    closure_complex,
    mirror_word,
    tangle_complex,
    torus_braid,
)
from .homology import BigradedGroup, homology, homology_mod_p


class InvalidInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(message)


def _emit(payload: dict, as_json: bool, text: str, out) -> None:
    if as_json:
        out.write(json.dumps(payload, indent=2, sort_keys=False, ensure_ascii=False) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _tables(internal: BigradedGroup, paper: BigradedGroup) -> str:
    return ("internal convention:\n" + (internal.table() or "(zero)") +
            "\n\npublished-table convention " + str(PAPER_NORMALIZATION) + ":\n" + (paper.table() or "(zero)"))


def _kh_pair(word: BraidWord, threads: int):
    internal = homology(closure_complex(word), threads=threads)
    paper = PAPER_NORMALIZATION.apply(homology(closure_complex(mirror_word(word)), threads=threads))
    return internal, paper


# --- subcommands --------------------------------------------------------------------


def cmd_kh(args, out) -> int:
    word = BraidWord.parse(args.braid, args.strands)
    if args.mod is not None and args.mod < 2:
        raise InvalidInput("--mod needs a prime p ≥ 2")
    if not args.closure:
        from .simplify import module_homology
        from .diagrams import format_diagram

        mods = module_homology(tangle_complex(word))
        payload = {"command": "kh", "braid": str(word), "strands": word.strands, "closure": False,
                   "modules": {format_diagram(d): H.to_json_obj() for d, H in mods.items()}}
        text = "\n\n".join(f"Hom({format_diagram(d)}, T):\n{H.table() or '(zero)'}" for d, H in mods.items())
        _emit(payload, args.json, text, out)
        return 0
    internal, paper = _kh_pair(word, args.threads)
    payload = {"command": "kh", "braid": str(word), "strands": word.strands, "closure": True,
               "internal": internal.to_json_obj(), "paper": paper.to_json_obj()}
    text = _tables(internal, paper)
    if args.mod is not None:
        betti = homology_mod_p(closure_complex(word), args.mod)
        payload["mod_p"] = {"p": args.mod, "betti": [{"i": i, "q": q, "dim": v} for (i, q), v in betti.items()]}
        text += f"\n\nF_{args.mod} Betti numbers (internal): " + \
            ", ".join(f"(i={i},q={q}):{v}" for (i, q), v in sorted(betti.items(), key=lambda kv: (kv[0][1], kv[0][0])))
    _emit(payload, args.json, text, out)
    return 0


def cmd_torus(args, out) -> int:
    if args.n < 1 or args.k < 0:
        raise InvalidInput("torus needs --n ≥ 1 and --k ≥ 0")
    word = torus_braid(args.n, args.k)
    internal, paper = _kh_pair(word, args.threads)
    payload = {"command": "torus", "n": args.n, "k": args.k, "braid": str(word),
               "internal": internal.to_json_obj(), "paper": paper.to_json_obj()}
    _emit(payload, args.json, f"T({args.n},{args.k}) as the closure of {word or '(empty word)'}\n\n" +
          _tables(internal, paper), out)
    return 0


def cmd_stable(args, out) -> int:
    from .projectors import VerificationError, stable_kh, stable_range

    if args.n < 1 or args.q_min > args.q_max or args.safety < 0:
        raise InvalidInput("stable needs --n ≥ 1, --q-min ≤ --q-max and --safety ≥ 0")
    try:
        H = stable_kh(args.n, (args.q_min, args.q_max), args.safety)
    except VerificationError as exc:
        _emit({"command": "stable", "verified": False, "error": str(exc)}, args.json,
              f"stabilization not confirmed: {exc}", out)
        return 2
    paper = PAPER_NORMALIZATION.apply(H)
    meta = {q: stable_range(args.n, q) for q in range(args.q_min, args.q_max + 1)}
    payload = {"command": "stable", "n": args.n, "q_min": args.q_min, "q_max": args.q_max,
               "safety": args.safety, "verified": True, "mu": {str(q): m for q, m in meta.items()},
               "internal": H.to_json_obj(), "paper": paper.to_json_obj()}
    _emit(payload, args.json, f"stable homology of the closed infinite twist on {args.n} strands "
          f"(each q read at μ(q)+{args.safety} twists, checked against one more)\n\n" + _tables(H, paper), out)
    return 0


def cmd_projector_verify(args, out) -> int:
    from .projectors import ck_projector_window, ck_report, ck_tower, p2_zigzag, verify_projector

    if args.n not in (2, 3) or args.depth < 1:
        raise InvalidInput("projector-verify supports --n 2 or 3 and --depth ≥ 1")
    reports = []
    if args.n == 2:
        reports.append(verify_projector(p2_zigzag(args.depth), (-2, args.q_max)))
    else:
        inner = max(4, args.q_max // 2 + 2 * args.depth + 4)
        tower = ck_tower(3, args.depth, inner)
        lo, hi = ck_projector_window(tower)
        reports.append(ck_report(tower))
        reports.append(verify_projector(tower.stage(args.depth), (lo, min(hi, args.q_max)),
                                        smaller=p2_zigzag(inner)))
    ok = all(r.ok for r in reports)
    payload = {"command": "projector-verify", "n": args.n, "depth": args.depth, "q_max": args.q_max,
               "ok": ok, "reports": [r.to_json_obj() for r in reports]}
    _emit(payload, args.json, "\n\n".join(r.text() for r in reports), out)
    return 0 if ok else 2


def cmd_periodicity(args, out) -> int:
    from .projectors import periodicity_check

    if args.q_min > args.q_max:
        raise InvalidInput("--q-min must not exceed --q-max")
    if args.q_min < 7:
        raise InvalidInput("periodicity is only asserted for q ≥ 7")
    qs = [q for q in range(args.q_min, args.q_max + 1) if q % 2]
    rep = periodicity_check(qs)
    _emit({"command": "periodicity", **rep.to_json_obj()}, args.json, rep.text(), out)
    return 0 if rep.ok else 2


def cmd_hochschild(args, out) -> int:
    from .hochschild import HochschildError, hh_via_bar, hh_via_p20

    tangle = TangleWord.parse(args.tangle, 2)
    if tangle.top() != 2:
        raise InvalidInput("the tangle must end on 2 strands")
    q_min = args.q_min if args.q_min is not None else args.q_max - 10
    if q_min > args.q_max:
        raise InvalidInput("--q-min must not exceed --q-max")
    window = (q_min, args.q_max)
    payload = {"command": "hochschild", "tangle": str(tangle), "q_min": q_min, "q_max": args.q_max,
               "method": args.method}
    parts = []
    try:
        results = {}
        if args.method in ("bar", "both"):
            r = hh_via_bar(tangle, q_window=window)
            results["bar"] = r.groups
            payload["bar_stabilized"] = r.stabilized
        if args.method in ("p20", "both"):
            results["p20"] = hh_via_p20(tangle, window)
    except HochschildError as exc:
        _emit({**payload, "ok": False, "error": str(exc)}, args.json, f"verification failed: {exc}", out)
        return 2
    for name, H in results.items():
        payload[name] = H.to_json_obj()
        parts.append(f"{name}:\n{H.table() or '(zero)'}")
    ok = True
    if len(results) == 2:
        ok = results["bar"] == results["p20"]
        payload["agree"] = ok
        parts.append("bar and P20 agree" if ok else "bar and P20 DISAGREE")
    payload["ok"] = ok
    _emit(payload, args.json, f"HH of {tangle or '(identity)'} on q in [{q_min}, {args.q_max}]\n\n" +
          "\n\n".join(parts), out)
    return 0 if ok else 2


def cmd_gor_compare(args, out) -> int:
    from .gor import gor_compare
    from .projectors import VerificationError

    if args.n not in (2, 3):
        raise InvalidInput("gor-compare supports --n 2 or 3")
    variants = ((args.xi_n, False), (args.xi_n, True))
    try:
        rep = gor_compare(args.n, args.q_max, variants=variants)
    except VerificationError as exc:
        _emit({"command": "gor-compare", "error": str(exc)}, args.json, f"stabilization not confirmed: {exc}", out)
        return 2
    _emit({"command": "gor-compare", **rep.to_json_obj()}, args.json, rep.text(), out)
    return 0


# --- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="khtl", description="Khovanov complexes of tangles and projector experiments")
    p.add_argument("--version", action="version", version=f"khtl {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=1, help="worker threads across q-degrees")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("kh", parents=[common], help="Khovanov homology of a braid or its closure")
    s.add_argument("--braid", required=True)
    s.add_argument("--strands", type=int, required=True)
    s.add_argument("--closure", action="store_true")
    s.add_argument("--mod", type=int)
    s.set_defaults(func=cmd_kh)

    s = sub.add_parser("torus", parents=[common], help="Khovanov homology of a torus link")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_torus)

    s = sub.add_parser("stable", parents=[common], help="stable homology of T(n,∞)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q-min", type=int, required=True)
    s.add_argument("--q-max", type=int, required=True)
    s.add_argument("--safety", type=int, default=1)
    s.set_defaults(func=cmd_stable)

    s = sub.add_parser("projector-verify", parents=[common], help="projector axioms in a window")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--q-max", type=int, required=True)
    s.set_defaults(func=cmd_projector_verify)

    s = sub.add_parser("periodicity", parents=[common], help="Kh(T(3,∞)) periodicity check")
    s.add_argument("--q-min", type=int, default=7)
    s.add_argument("--q-max", type=int, required=True)
    s.set_defaults(func=cmd_periodicity)

    s = sub.add_parser("hochschild", parents=[common], help="Hochschild homology of a (2,2)-tangle")
    s.add_argument("--tangle", required=True)
    s.add_argument("--method", choices=("p20", "bar", "both"), default="both")
    s.add_argument("--q-min", type=int)
    s.add_argument("--q-max", type=int, required=True)
    s.set_defaults(func=cmd_hochschild)

    s = sub.add_parser("gor-compare", parents=[common], help="compare H(A_n) with stable Kh(T(n,∞))")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q-max", type=int, required=True)
    s.add_argument("--xi-n", action="store_true", help="include ξ_n among the generators")
    s.set_defaults(func=cmd_gor_compare)
    return p


def run(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise InvalidInput("a subcommand is required")
        if args.threads < 1:
            raise InvalidInput("--threads must be positive")
        return args.func(args, out)
    except (InvalidInput, ValueError) as exc:
        out.write(json.dumps({"error": {"type": "invalid_input", "message": str(exc)}}, ensure_ascii=False) + "\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
