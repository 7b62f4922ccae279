"""Command-line interface: ``ordpart <command> ...`` or ``python -m ordpart``.

Exit codes: 0 success or the relation holds, 1 the relation fails or a claim is
refuted (a certificate is printed or written), 2 the budget or the truncation
was too small to decide, 64 usage error.  Output is JSON unless ``--format table``.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from contextlib import redirect_stdout
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .constructions import (
    ConstructionError, TupleColoring, block_exponents, pattern_rectangle_pipeline, split_relation_rectangle, power_sum_driver,
)
from .ordinal import (
    InfiniteDecompositionError, OrdinalError, add, compare, decompose_into_indecomposables,
    format_ordinal, is_add_indecomposable, mul, parse_ordinal,
)
from .ordertype import (
    ALEPH_0, Kind, OrderTermError, cardinal_size, classify_typewise, decomposability_profile,
    embeds, format_term, is_scattered, normalize, parse_term,
)
from .partition import (
    DEFAULT_BUDGET, BudgetExceeded, Coloring, RectangleWitness, RelationQuery, WitnessError,
    find_homogeneous, holds, parse_targets, verify_witness,
)
from .witnesses import (
    build_E, desk_instance, index_order_coloring, index_order_scan, orr_shuffle, stabilize_power_coloring,
    refute_one_fiber, refute_zero_rectangle,
)

EXIT_OK, EXIT_FAIL, EXIT_UNDECIDED, EXIT_USAGE = 0, 1, 2, 64
FINITE = "finite instance"

SELFTEST_COMMANDS = (
    ["ord", "add", "w+1", "w"],
    ["ord", "mul", "w+1", "2"],
    ["ord", "cmp", "w^2", "w*5"],
    ["ord", "decompose", "w^2*2 + w + 3"],
    ["type", "normalize", "1 + w + w*"],
    ["type", "classify", "eta + 1"],
    ["type", "embeds", "w + w*", "w* + w"],
    ["type", "decomp", "w . 2"],
    ["check", "--rows", "2", "--cols", "2", "--targets", "1 2 / 2 1"],
    ["check", "--rows", "7", "--cols", "3", "--targets", "2 / 2", "--colors", "2"],
    ["--seed", "7", "extract", "patterns", "--k", "1", "--m", "1", "--n", "2", "--bound", "20"],
    ["--seed", "3", "extract", "power-sum", "--alpha", "2", "--beta", "2", "--n", "2", "--bound", "16"],
    ["--seed", "5", "extract", "split", "--size", "10", "--tau", "2", "--phi", "2", "--psi", "2"],
    ["witness", "index-order", "--N", "200"],
    ["witness", "build-e"],
    ["witness", "refute-zero"],
    ["witness", "refute-one", "--gamma", "3", "--block", "2"],
    ["--seed", "11", "witness", "orr", "--index", "w", "--count", "100"],
    ["--seed", "2", "witness", "stabilize", "--n", "1", "--rows", "4", "--bound", "6"],
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(report: dict, fmt: str) -> None:
    if fmt == "table":
        width = max((len(k) for k in report), default=0)
        for k, v in report.items():
            text = v if isinstance(v, str) else json.dumps(v, separators=(",", ":"))
            print(f"{k.ljust(width)}  {text}")
    else:
        print(json.dumps(report, indent=2))


def _write(path: Optional[str], obj: dict) -> None:
    if path:
        with open(path, "w") as fh:
            json.dump(obj, fh, indent=2)
            fh.write("\n")


def _rng(args) -> np.random.Generator:
    return np.random.default_rng(args.seed)


# ord

def _cmd_ord(args):
    a = parse_ordinal(args.a)
    if args.op == "indec":
        return {"op": "indec", "arg": format_ordinal(a), "result": is_add_indecomposable(a)}, EXIT_OK
    if args.op == "decompose":
        try:
            parts = decompose_into_indecomposables(a)
        except InfiniteDecompositionError as exc:
            return {"op": "decompose", "arg": format_ordinal(a), "result": None, "error": str(exc)}, EXIT_UNDECIDED
        return {"op": "decompose", "arg": format_ordinal(a), "result": [format_ordinal(p) for p in parts]}, EXIT_OK
    if args.b is None:
        raise UsageError(f"ord {args.op} needs two ordinals")
    b = parse_ordinal(args.b)
    if args.op == "add":
        result = format_ordinal(add(a, b))
    elif args.op == "mul":
        result = format_ordinal(mul(a, b))
    else:
        result = compare(a, b)
    return {"op": args.op, "args": [format_ordinal(a), format_ordinal(b)], "result": result}, EXIT_OK


# type

def _cmd_type(args):
    t = parse_term(args.t)
    out = {"op": args.op, "term": format_term(t)}
    if args.op == "normalize":
        out["result"] = format_term(normalize(t))
    elif args.op == "classify":
        out["result"] = classify_typewise(t).value
    elif args.op == "scattered":
        out["result"] = is_scattered(t)
    elif args.op == "size":
        size = cardinal_size(t)
        out["result"] = "aleph_0" if size is ALEPH_0 else size
    elif args.op == "decomp":
        prof = decomposability_profile(t)
        out["result"] = {k.value: prof[k].value for k in Kind}
    else:
        if args.s is None:
            raise UsageError("type embeds needs two terms")
        s = parse_term(args.s)
        out = {"op": "embeds", "terms": [format_term(t), format_term(s)], "result": embeds(t, s).value}
    return out, EXIT_OK


# check

def _certificate(q: RelationQuery, c: Coloring, w: Optional[RectangleWitness]) -> dict:
    return {"kind": "witness" if w is not None else "counterexample", "query": q.to_json(),
            "coloring": c.to_json(), "witness": None if w is None else w.to_json()}


def _verify_certificate(obj: dict) -> dict:
    c = Coloring.from_json(obj["coloring"])
    if obj.get("witness") is not None:
        w = RectangleWitness.from_json(obj["witness"])
        q = RelationQuery.from_json(obj["query"]) if obj.get("query") else None
        ok = verify_witness(c, w, q)
        return {"kind": "witness", "verified": ok}
    q = RelationQuery.from_json(obj["query"])
    if (c.rows, c.cols) != (q.source_rows, q.source_cols) or c.colors > q.colors:
        return {"kind": "counterexample", "verified": False, "reason": "colouring does not match the query"}
    found = find_homogeneous(c, q)
    return {"kind": "counterexample", "verified": found is None,
            "witness_found": None if found is None else found.to_json()}


def _cmd_check(args):
    if args.verify:
        with open(args.verify) as fh:
            obj = json.load(fh)
        out = _verify_certificate(obj)
        out["scope"] = FINITE
        return out, EXIT_OK if out["verified"] else EXIT_FAIL
    if args.targets is None:
        raise UsageError("check needs --targets (or --verify FILE)")
    if args.coloring:
        with open(args.coloring) as fh:
            c = Coloring.from_json(json.load(fh))
        rows, cols = c.rows, c.cols
    else:
        if args.rows is None or args.cols is None:
            raise UsageError("check needs --rows and --cols (or --coloring FILE)")
        rows, cols, c = args.rows, args.cols, None
    q = RelationQuery(rows, cols, parse_targets(args.targets, args.colors))
    out = {"query": str(q), "scope": FINITE}
    if c is not None:
        w = find_homogeneous(c, q)
        out["result"] = "witness" if w is not None else "no witness"
        out["witness"] = None if w is None else w.to_json()
        _write(args.out, _certificate(q, c, w))
        return out, EXIT_OK if w is not None else EXIT_FAIL
    res = holds(q, budget=args.budget)
    out["result"] = "holds" if res.holds else "fails"
    out["nodes"] = res.nodes
    if not res.holds:
        out["counterexample"] = res.counterexample.to_json()
        _write(args.out, _certificate(q, res.counterexample, None))
        return out, EXIT_FAIL
    return out, EXIT_OK


# extract

def _order_colouring(rng, rows, cols, block_rows, block_cols):
    """Colour each block pair by a random function of the order between digits."""
    table = np.zeros((rows, cols), dtype=np.int64)
    for (r0, r1) in block_rows:
        for (c0, c1) in block_cols:
            lt, eq, gt = rng.integers(0, 2, size=3)
            i = np.arange(r1 - r0)[:, None]
            j = np.arange(c1 - c0)[None, :]
            table[r0:r1, c0:c1] = np.where(i < j, lt, np.where(i == j, eq, gt))
    return table


def _blocks(exps, bound):
    out, offset = [], 0
    for e in exps:
        out.append((offset, offset + bound ** e))
        offset += bound ** e
    return out


def _cmd_extract(args):
    rng = _rng(args)
    bound = args.bound
    if args.pipeline == "patterns":
        if args.coloring:
            with open(args.coloring) as fh:
                tc = TupleColoring.from_json(json.load(fh))
        else:
            tc = TupleColoring.random(args.k, args.m, bound, rng)
        rep = pattern_rectangle_pipeline(tc, args.n, budget=args.budget)
        out = {"pipeline": "patterns", "k": tc.k, "m": tc.m, "bound": tc.bound, "n": args.n, "scope": FINITE}
        out.update(rep.to_json())
        if rep.witness is None:
            out["status"] = "insufficient"
            return out, EXIT_UNDECIDED
        out["status"] = "witness"
        _write(args.out, {"kind": "witness", "query": None, "coloring": tc.as_coloring().to_json(),
                          "witness": rep.witness.to_json(), "tuple_coloring": tc.to_json()})
        return out, EXIT_OK
    if args.pipeline == "split":
        size = args.size
        rel = rng.random((size, size)) < args.density
        E = {(a, b) for a in range(size) for b in range(size) if rel[a, b]}
        res = split_relation_rectangle(E, size, args.tau, args.phi, args.psi, budget=args.budget)
        out = {"pipeline": "split", "size": size, "scope": FINITE}
        out.update(res.to_json())
        table = np.zeros((size, size), dtype=np.int64)
        for a, b in E:
            table[a, b] = 1
        _write(args.out, {"kind": "witness", "query": None, "coloring": Coloring.from_table(table, 2).to_json(),
                          "witness": res.witness.to_json()})
        return out, EXIT_OK
    alpha, beta = parse_ordinal(args.alpha), parse_ordinal(args.beta)
    rexp, cexp = block_exponents(alpha), block_exponents(beta)
    rb, cb = _blocks(rexp, bound), _blocks(cexp, bound)
    rows, cols = rb[-1][1], cb[-1][1]
    if args.mode == "random":
        table = rng.integers(0, 2, size=(rows, cols))
    else:
        table = _order_colouring(rng, rows, cols, rb, cb)
    c = Coloring.from_table(table, 2)
    res = power_sum_driver(alpha, beta, args.n, c, bound, budget=args.budget)
    out = {"pipeline": "power-sum", "alpha": format_ordinal(alpha), "beta": format_ordinal(beta),
           "n": args.n, "bound": bound, "mode": args.mode, "scope": FINITE}
    out.update(res.to_json())
    if res.witness is None:
        return out, EXIT_UNDECIDED
    _write(args.out, {"kind": "witness", "query": None, "coloring": c.to_json(), "witness": res.witness.to_json()})
    return out, EXIT_OK


# witness

def _cmd_witness(args):
    kind = args.kind
    if kind == "index-order":
        c = index_order_coloring(args.N)
        out = {"witness": "index-order", "scope": FINITE}
        out.update(index_order_scan(c))
        out["row0"] = c.table[0, :min(args.N, 8)].tolist()
        return out, EXIT_OK if out["ok"] else EXIT_FAIL
    if kind == "orr":
        rng = _rng(args)
        sizes = rng.integers(1, args.max_block + 1, size=args.count).tolist()
        sm = orr_shuffle(parse_term(args.index), sizes)
        return {"witness": "orr", "index": args.index, "blocks": len(sizes), "targets": len(sm.block_of),
                "missed": sm.missed, "bound": sm.bound, "check": sm.check()}, EXIT_OK
    if kind == "stabilize":
        rng = _rng(args)
        c = Coloring.from_table(rng.integers(0, 2, size=(args.rows, args.bound ** (args.n + 1))), 2)
        st = stabilize_power_coloring(c, args.n)
        out = {"witness": "stabilize", "n": args.n, "bound": args.bound, "scope": FINITE}
        out.update(st.to_json())
        return out, EXIT_OK if st.deviations == 0 else EXIT_FAIL
    dec, scale, chain = desk_instance(args.functions, args.blocks, args.depth)
    E = build_E(chain, scale, dec)
    if kind == "build-e":
        out = {"witness": "build-e", "scope": FINITE}
        out.update(E.to_json())
        return out, EXIT_OK
    if kind == "refute-zero":
        rows = list(range(len(E.rows)))
        Y = [(n, k) for n in range(dec.blocks) for k in range(dec.depth)]
        rep = refute_zero_rectangle(E, rows, Y)
    else:
        Y = [(args.block, k) for k in range(dec.depth)]
        rep = refute_one_fiber(E, args.gamma, Y)
    out = {"witness": kind, "scope": FINITE}
    out.update(rep.to_json())
    return out, EXIT_UNDECIDED if rep.status == "insufficient" else EXIT_FAIL


# selftest

def _cmd_selftest(args):
    results = []
    for cmd in SELFTEST_COMMANDS:
        first, code1 = _capture(cmd)
        second, code2 = _capture(cmd)
        results.append({"command": " ".join(cmd), "exit": code1,
                        "deterministic": first == second and code1 == code2})
    ok = all(r["deterministic"] for r in results)
    return {"selftest": "determinism", "commands": results, "ok": ok}, EXIT_OK if ok else EXIT_FAIL


def _capture(argv) -> tuple:
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = run(list(argv))
    return buf.getvalue(), code


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ordpart", description="Polarised partition relations at desk scale.")
    p.add_argument("--version", action="version", version=f"ordpart {__version__}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--format", choices=["json", "table"], default="json")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    o = sub.add_parser("ord", help="ordinal arithmetic in Cantor normal form")
    o.add_argument("op", choices=["add", "mul", "cmp", "indec", "decompose"])
    o.add_argument("a")
    o.add_argument("b", nargs="?")

    t = sub.add_parser("type", help="order-type terms")
    t.add_argument("op", choices=["normalize", "classify", "embeds", "scattered", "decomp", "size"])
    t.add_argument("t")
    t.add_argument("s", nargs="?")

    c = sub.add_parser("check", help="decide a finite polarised relation")
    c.add_argument("--rows", type=int)
    c.add_argument("--cols", type=int)
    c.add_argument("--targets", help="e.g. '1 2 / 2 1'")
    c.add_argument("--colors", type=int)
    c.add_argument("--coloring", help="JSON colouring to search instead of deciding the relation")
    c.add_argument("--out", help="write the certificate here")
    c.add_argument("--verify", help="re-verify a certificate file")

    e = sub.add_parser("extract", help="run a rectangle-extraction pipeline")
    e.add_argument("pipeline", choices=["patterns", "split", "power-sum"])
    e.add_argument("--bound", type=int, default=12)
    e.add_argument("--k", type=int, default=1)
    e.add_argument("--m", type=int, default=1)
    e.add_argument("--n", type=int, default=2)
    e.add_argument("--coloring", help="TupleColoring JSON for the patterns pipeline")
    e.add_argument("--alpha", default="2")
    e.add_argument("--beta", default="2")
    e.add_argument("--mode", choices=["order", "random"], default="order")
    e.add_argument("--size", type=int, default=10)
    e.add_argument("--tau", type=int, default=2)
    e.add_argument("--phi", type=int, default=2)
    e.add_argument("--psi", type=int, default=2)
    e.add_argument("--density", type=float, default=0.5)
    e.add_argument("--out")

    w = sub.add_parser("witness", help="negative-relation colourings and refuters")
    w.add_argument("kind", choices=["index-order", "build-e", "refute-zero", "refute-one", "orr", "stabilize"])
    w.add_argument("--N", type=int, default=1000)
    w.add_argument("--functions", type=int, default=8)
    w.add_argument("--blocks", type=int, default=8)
    w.add_argument("--depth", type=int, default=80)
    w.add_argument("--gamma", type=int, default=0)
    w.add_argument("--block", type=int, default=0)
    w.add_argument("--index", default="w")
    w.add_argument("--count", type=int, default=100)
    w.add_argument("--max-block", type=int, default=5)
    w.add_argument("--n", type=int, default=1)
    w.add_argument("--rows", type=int, default=4)
    w.add_argument("--bound", type=int, default=6)

    sub.add_parser("selftest", help="run every selftest command twice and compare outputs")
    return p


_HANDLERS = {"ord": _cmd_ord, "type": _cmd_type, "check": _cmd_check, "extract": _cmd_extract,
             "witness": _cmd_witness, "selftest": _cmd_selftest}


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        report, code = _HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"ordpart: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OrdinalError, OrderTermError, ConstructionError, WitnessError, ValueError, IndexError) as exc:
        print(f"ordpart: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        _emit({"result": "budget exceeded", "message": str(exc), "partial": exc.partial, "scope": FINITE},
              getattr(args, "format", "json"))
        return EXIT_UNDECIDED
    except OSError as exc:
        print(f"ordpart: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(report, args.format)
    return code


def main() -> None:
    sys.exit(run())
