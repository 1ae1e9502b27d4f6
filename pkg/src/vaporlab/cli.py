"""``vaporlab`` command line.

Every subcommand wraps one library call and prints a JSON report (sorted
keys, decimal integers) to stdout or ``--out``.  Exit status: 0 success,
1 domain error (JSON ``{"error": ...}``), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import codec, formulas, mutalg, sequences, solver
from .errors import PatternUnstableError, VaporlabError

__all__ = ["main", "build_parser", "parse_sequence"]


def parse_sequence(literal: str) -> sequences.SparseSequence:
    """Inline sequence literal or file.

    ``factorial:START:COUNT``, ``pi-floor:COUNT`` (exponents 1..COUNT),
    ``steered-pi:COUNT`` (steered ``floor(pi**n)``, ``n = 0..COUNT-1``),
    ``explicit:1,2,4``, or ``@FILE`` / ``FILE`` in the sequence text format.
    """
    kind, _, rest = literal.partition(":")
    try:
        if kind == "factorial":
            start, count = rest.split(":")
            return sequences.factorials(int(start), int(count))
        if kind == "pi-floor":
            return sequences.explicit(sequences.floor_pi_powers(int(rest)))
        if kind == "steered-pi":
            count = int(rest)
            base = sequences.floor_pi_powers(count, start=0)
            return sequences.steered(base, f"floor-pi-powers:0:{count}")
        if kind == "explicit":
            return sequences.explicit(int(x) for x in rest.replace(",", " ").split())
    except ValueError as exc:
        if isinstance(exc, VaporlabError):
            raise
        raise VaporlabError(f"bad sequence literal {literal!r}: {exc}") from None
    path = Path(literal[1:] if literal.startswith("@") else literal)
    if not path.exists():
        raise VaporlabError(f"bad sequence literal {literal!r}: not a known kind and no such file")
    return sequences.SparseSequence.from_text(path.read_text())


def _read_ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _edges(args) -> list[tuple[int, int]]:
    if getattr(args, "edges_file", None):
        return codec.parse_edge_list(Path(args.edges_file).read_text())
    if getattr(args, "edges", None):
        return codec.parse_edge_list(args.edges)
    return []


# -- handlers -------------------------------------------------------------------


def _seq_factorial(args):
    return sequences.factorials(args.start, args.count).to_dict()


def _seq_pi_floor(args):
    return {"start": args.start, "count": args.count, "terms": sequences.floor_pi_powers(args.count, args.start)}


def _seq_steer(args):
    if args.pi_count is not None:
        base = sequences.floor_pi_powers(args.pi_count, start=0)
    elif args.base_file:
        base = _read_ints(Path(args.base_file).read_text())
    elif args.base:
        base = args.base
    else:
        raise VaporlabError("give --base, --base-file or --pi-count")
    steered = sequences.crt_steer(base)
    stages = 0
    while sequences.crt_schedule(stages + 1) <= len(base) - 1:
        stages += 1
    return {
        "base": list(base),
        "terms": steered,
        "schedule": [sequences.crt_schedule(k) for k in range(stages + 1)],
        "prime_powers": sequences.prime_powers(stages) if stages else [],
    }


def _seq_vaporous(args):
    seq = parse_sequence(args.seq)
    return sequences.vaporous_report(seq, args.max_modulus, args.tail_start).to_dict()


def _seq_residue(args):
    return sequences.residue_certificate(parse_sequence(args.seq), args.modulus).to_dict()


def _seq_growth(args):
    return sequences.growth_certificate(parse_sequence(args.seq), args.t, args.r_abs).to_dict()


def _formula_eval(args):
    phi = formulas.parse_formula(args.formula)
    return {"formula": str(phi), "x": args.x, "y": args.y, "value": formulas.evaluate(phi, args.x, args.y)}


def _formula_threshold(args):
    return formulas.threshold(parse_sequence(args.seq), formulas.parse_formula(args.formula)).to_dict()


def _formula_ei_check(args):
    phis = [formulas.parse_formula(f) for f in args.formula]
    return formulas.ei_check(parse_sequence(args.seq), phis, args.mode).to_dict()


def _formula_pattern(args):
    seq = parse_sequence(args.seq)
    phi = formulas.parse_formula(args.formula)
    try:
        return formulas.equality_pattern_table(seq, phi, args.k).to_dict()
    except PatternUnstableError as exc:
        raise VaporlabError(str(exc)) from None


def _formula_extract(args):
    seq = parse_sequence(args.seq)
    phis = [formulas.parse_formula(f) for f in args.formula]
    res = formulas.extract_ei_subsequence(seq.terms, phis, args.tail, args.mode, args.budget)
    return {**res.to_dict(), "values": [seq.terms[i] for i in res.indices]}


def _solve_lineq(args):
    seq = parse_sequence(args.seq)
    sols = solver.enumerate_lineq_solutions(seq, args.m, args.n, args.r, args.max_differ)
    return sols.to_dict(seq.terms)


def _solve_combo(args):
    seq = parse_sequence(args.seq)
    sols = solver.solve_combination(seq, args.coeffs, args.multiplier, args.target)
    position = {v: i for i, v in enumerate(seq.terms)}
    return {
        "coeffs": args.coeffs,
        "multiplier": args.multiplier,
        "target": args.target,
        "solutions": [{"indices": [position[v] for v in s], "values": list(s)} for s in sols],
    }


def _solve_facbase(args):
    return {"value": args.value, "digits": solver.factorial_base(args.value)}


def _codec_encode(args):
    seq = parse_sequence(args.seq)
    return codec.encode(seq, codec.Graph.on_sequence(seq, _edges(args))).to_dict()


def _codec_decode(args):
    if args.values_file:
        values = _read_ints(Path(args.values_file).read_text())
    elif args.values:
        values = args.values
    else:
        raise VaporlabError("give --values or --values-file")
    truth = None
    if args.seq:
        seq = parse_sequence(args.seq)
        truth = (seq, codec.Graph.on_sequence(seq, _edges(args)))
    return codec.decode(values, truth).to_dict()


def _codec_roundtrip(args):
    seq = parse_sequence(args.seq)
    return codec.roundtrip(seq, codec.Graph.on_sequence(seq, _edges(args))).to_dict()


def _codec_sumset(args):
    return {"fold": args.fold, "values": codec.sumset(parse_sequence(args.seq), args.fold)}


def _codec_urank(args):
    return codec.urank_construction(args.n, args.count).to_dict()


def _codec_inject(args):
    ok, collision = codec.multiset_sum_injectivity(parse_sequence(args.seq), args.n)
    return {"n": args.n, "injective": ok, "collision": None if collision is None else [list(c) for c in collision]}


def _relation(args) -> mutalg.FiniteRelation:
    if args.relation:
        return mutalg.FiniteRelation.from_json(Path(args.relation).read_text())
    edges = _edges(args)
    universe = args.universe if args.universe else None
    return mutalg.FiniteRelation.graph(edges, universe)


def _ma_bound(args):
    return mutalg.ma_bound(_relation(args)).to_dict()


def _ma_profile(args):
    return mutalg.ma_profile(_relation(args)).to_dict()


# -- parser -----------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the report here instead of stdout")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON report (default)")
    fmt.add_argument("--table", dest="fmt", action="store_const", const="table", help="human-readable table")
    p.set_defaults(fmt="json")


def _edge_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--edges", help="edge list, 'u v' per line or ';'-separated, vertex indices")
    p.add_argument("--edges-file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vaporlab", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    def cmd(sub, name, handler, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(handler=handler)
        _common(p)
        return p

    seq = groups.add_parser("seq", help="sequences and certificates").add_subparsers(dest="cmd", required=True)
    p = cmd(seq, "factorial", _seq_factorial, "factorial truncation")
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p = cmd(seq, "pi-floor", _seq_pi_floor, "certified floor(pi**n)")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--start", type=int, default=1)
    p = cmd(seq, "steer", _seq_steer, "CRT residue steering of a base list")
    p.add_argument("--base", type=int, nargs="+")
    p.add_argument("--base-file")
    p.add_argument("--pi-count", type=int, help="use floor(pi**n) for n = 0..COUNT-1 as base")
    p = cmd(seq, "vaporous", _seq_vaporous, "vaporousness report")
    p.add_argument("--seq", required=True)
    p.add_argument("--max-modulus", type=int, required=True)
    p.add_argument("--tail-start", type=int, required=True)
    p = cmd(seq, "residue", _seq_residue, "residue certificate")
    p.add_argument("--seq", required=True)
    p.add_argument("--modulus", type=int, required=True)
    p = cmd(seq, "growth", _seq_growth, "growth certificate")
    p.add_argument("--seq", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--r-abs", type=int, required=True)

    form = groups.add_parser("formula", help="atomic formulas").add_subparsers(dest="cmd", required=True)
    p = cmd(form, "eval", _formula_eval, "evaluate a formula")
    p.add_argument("--formula", required=True)
    p.add_argument("--x", type=int, nargs="+", required=True)
    p.add_argument("--y", type=int, nargs="*", default=[])
    p = cmd(form, "threshold", _formula_threshold, "eventual-indiscernibility threshold")
    p.add_argument("--seq", required=True)
    p.add_argument("--formula", required=True)
    p = cmd(form, "ei-check", _formula_ei_check, "check eventual indiscernibility")
    p.add_argument("--seq", required=True)
    p.add_argument("--formula", action="append", required=True)
    p.add_argument("--mode", choices=formulas.MODES, default="injective")
    p = cmd(form, "pattern", _formula_pattern, "equality-pattern table")
    p.add_argument("--seq", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--k", type=int, required=True)
    p = cmd(form, "extract", _formula_extract, "Ramsey extraction of a monochromatic tail")
    p.add_argument("--seq", required=True)
    p.add_argument("--formula", action="append", required=True)
    p.add_argument("--tail", type=int, required=True)
    p.add_argument("--mode", choices=formulas.MODES, default="injective")
    p.add_argument("--budget", type=int, default=1_000_000)

    solve = groups.add_parser("solve", help="solution enumeration").add_subparsers(dest="cmd", required=True)
    p = cmd(solve, "lineq", _solve_lineq, "solutions of x1+..+xm = y1+..+yn + r")
    p.add_argument("--seq", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--max-differ", action=argparse.BooleanOptionalAction, default=True)
    p = cmd(solve, "combo", _solve_combo, "distinct-value solutions of sum c_i v_i = multiplier*target")
    p.add_argument("--seq", required=True)
    p.add_argument("--coeffs", type=int, nargs="+", required=True)
    p.add_argument("--multiplier", type=int, default=1)
    p.add_argument("--target", type=int, required=True)
    p = cmd(solve, "facbase", _solve_facbase, "factorial-base digits")
    p.add_argument("--value", type=int, required=True)

    cod = groups.add_parser("codec", help="graph <-> unary set coding").add_subparsers(dest="cmd", required=True)
    p = cmd(cod, "encode", _codec_encode, "encode a graph")
    p.add_argument("--seq", required=True)
    _edge_flags(p)
    p = cmd(cod, "decode", _codec_decode, "decode a value set")
    p.add_argument("--values", type=int, nargs="+")
    p.add_argument("--values-file")
    p.add_argument("--seq", help="ground-truth sequence (with --edges)")
    _edge_flags(p)
    p = cmd(cod, "roundtrip", _codec_roundtrip, "encode then decode with ground truth")
    p.add_argument("--seq", required=True)
    _edge_flags(p)
    p = cmd(cod, "sumset", _codec_sumset, "fold-wise multiset sums")
    p.add_argument("--seq", required=True)
    p.add_argument("--fold", type=int, default=2)
    p = cmd(cod, "urank", _codec_urank, "the (Q, B, A) construction")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p = cmd(cod, "inject", _codec_inject, "injectivity of n-fold multiset sums")
    p.add_argument("--seq", required=True)
    p.add_argument("--n", type=int, required=True)

    ma = groups.add_parser("ma", help="mutual algebraicity").add_subparsers(dest="cmd", required=True)
    for name, handler in (("bound", _ma_bound), ("profile", _ma_profile)):
        p = cmd(ma, name, handler, f"MA {name}")
        p.add_argument("--relation", help="JSON file with universe, arity, tuples")
        p.add_argument("--universe", type=int, nargs="*")
        _edge_flags(p)
    return parser


# -- output -------------------------------------------------------------------


def _cell(v) -> str:
    if isinstance(v, list):
        return " ".join(_cell(x) for x in v)
    if v is None:
        return "-"
    return str(v)


def render_table(report: dict) -> str:
    lines = []
    for key in sorted(report):
        value = report[key]
        if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            cols = sorted({c for row in value for c in row})
            rows = [[_cell(row.get(c)) for c in cols] for row in value]
            widths = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
            lines.append(f"{key}:")
            lines.append("  " + "  ".join(c.ljust(w) for c, w in zip(cols, widths)))
            for r in rows:
                lines.append("  " + "  ".join(x.ljust(w) for x, w in zip(r, widths)))
        elif isinstance(value, dict):
            lines.append(f"{key}: {json.dumps(value, sort_keys=True)}")
        else:
            lines.append(f"{key}: {_cell(value)}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.handler(args)
    except VaporlabError as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        _emit(json.dumps(err, sort_keys=True, indent=2) + "\n", args.out)
        return 1
    if args.fmt == "table":
        text = render_table(report)
    else:
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
