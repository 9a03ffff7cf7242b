"""Command-line front end.

    tropical-ceresa COMMAND GRAPH.json [--tree e4,e5,e6] [--basepoint v:o]
                    [--divisor "v:A*1,e:e2@1/2*-1"] [--pretty]
    tropical-ceresa selftest [--seed N] [--count N]

GRAPH.json may be ``-`` for standard input.  Output is one JSON document with
sorted keys and every rational written as ``"num/den"``.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from fractions import Fraction
from typing import Optional

from . import __version__
from . import abel_jacobi as ajm
from . import ceresa as ce
from . import fixtures as fx
from . import graph as gr
from . import morita as mo
from .jacobian import JacobianData, WedgeIndex, basis_change, transform
from .linalg import INFINITE, LinalgError, rank

COMMANDS = ("info", "jacobian", "aj", "ceresa", "ceresa-unpointed", "wclass", "torsion", "morita", "compare")


class CliError(Exception):
    def __init__(self, code: str, message: str, location: Optional[str] = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.location = location

    def payload(self) -> dict:
        out = {"code": self.code, "message": self.message}
        if self.location is not None:
            out["location"] = self.location
        return out


class DocumentError(Exception):
    def __init__(self, errors: list):
        super().__init__("; ".join(e.message for e in errors))
        self.errors = errors


# ---------------------------------------------------------------------------
# serialization


def rat(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def order_str(n):
    return "infinite" if n == INFINITE else n


def vec(v) -> list:
    return [rat(x) for x in v]


def mat(M) -> list:
    return [vec(r) for r in M]


def labels(index: WedgeIndex) -> list:
    return [index.label(J, K) for J, K in index.pairs()]


# ---------------------------------------------------------------------------
# parsing

_RAT = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def parse_rational(value, location: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise CliError("bad-rational", f"expected an integer or a 'num/den' string, got {value!r}", location)
    if isinstance(value, int):
        return Fraction(value)
    if not _RAT.match(value):
        raise CliError("bad-rational", f"malformed rational {value!r}", location)
    try:
        return Fraction(value.replace(" ", ""))
    except ZeroDivisionError:
        raise CliError("bad-rational", f"zero denominator in {value!r}", location) from None


def parse_point(text: str, location: str) -> gr.Point:
    """``v:NAME`` or ``e:ID@NUM/DEN``."""
    kind, sep, rest = text.partition(":")
    if not sep:
        raise CliError("bad-point", f"point {text!r} must start with 'v:' or 'e:'", location)
    if kind == "v":
        return gr.VertexPoint(rest)
    if kind == "e":
        eid, at, off = rest.rpartition("@")
        if not at or not eid:
            raise CliError("bad-point", f"edge point {text!r} needs the form e:ID@OFFSET", location)
        return gr.EdgePoint(eid, parse_rational(off, location))
    raise CliError("bad-point", f"unknown point kind {kind!r}", location)


def parse_divisor(text: str) -> ajm.Divisor:
    items = []
    for k, chunk in enumerate(t for t in text.split(",") if t.strip()):
        chunk = chunk.strip()
        loc = f"--divisor[{k}]"
        pt, star, mult = chunk.rpartition("*")
        if not star:
            pt, mult = chunk, "1"
        try:
            m = int(mult)
        except ValueError:
            raise CliError("bad-divisor", f"bad multiplicity {mult!r}", loc) from None
        items.append((parse_point(pt, loc), m))
    return ajm.Divisor.of(items)


def parse_document(doc) -> tuple[gr.MetricGraph, Optional[gr.Point]]:
    """Validate a graph document, collecting every error before failing."""
    errors = []
    if not isinstance(doc, dict):
        raise DocumentError([CliError("bad-document", "graph document must be a JSON object", "$")])
    vertices = doc.get("vertices")
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        errors.append(CliError("bad-vertices", "'vertices' must be a list of strings", "vertices"))
        vertices = []
    elif len(set(vertices)) != len(vertices):
        errors.append(CliError("bad-vertices", "duplicate vertex ids", "vertices"))
    vset = set(vertices)
    edges = []
    raw_edges = doc.get("edges")
    if not isinstance(raw_edges, list):
        errors.append(CliError("bad-edges", "'edges' must be a list", "edges"))
        raw_edges = []
    seen = set()
    for k, e in enumerate(raw_edges):
        loc = f"edges[{k}]"
        if not isinstance(e, dict):
            errors.append(CliError("bad-edge", "edge must be an object", loc))
            continue
        eid, src, dst = e.get("id"), e.get("src"), e.get("dst")
        ok = True
        if not isinstance(eid, str):
            errors.append(CliError("bad-edge", "edge id must be a string", f"{loc}.id"))
            ok = False
        elif eid in seen:
            errors.append(CliError("bad-edge", f"duplicate edge id {eid!r}", f"{loc}.id"))
            ok = False
        else:
            seen.add(eid)
        for key, v in (("src", src), ("dst", dst)):
            if not isinstance(v, str) or v not in vset:
                errors.append(CliError("dangling-vertex", f"unknown vertex {v!r}", f"{loc}.{key}"))
                ok = False
        try:
            length = parse_rational(e.get("length"), f"{loc}.length")
            if length <= 0:
                errors.append(CliError("bad-length", f"length must be positive, got {rat(length)}", f"{loc}.length"))
                ok = False
        except CliError as exc:
            errors.append(exc)
            ok = False
        if ok:
            edges.append(gr.Edge(eid, src, dst, length))
    base = None
    if "basepoint" in doc and doc["basepoint"] is not None:
        b = doc["basepoint"]
        try:
            if isinstance(b, dict) and "vertex" in b:
                base = gr.VertexPoint(b["vertex"])
            elif isinstance(b, dict) and "edge" in b:
                base = gr.EdgePoint(b["edge"], parse_rational(b.get("offset"), "basepoint.offset"))
            else:
                raise CliError("bad-basepoint", "basepoint must be {vertex} or {edge, offset}", "basepoint")
        except CliError as exc:
            errors.append(exc)
    if errors:
        raise DocumentError(errors)
    try:
        G = gr.MetricGraph(vertices, edges)
    except gr.GraphError as exc:
        raise DocumentError([CliError("bad-graph", str(exc), "$")]) from None
    if base is not None:
        try:
            base = ajm.normalize_point(G, base)
        except ajm.DivisorError as exc:
            raise DocumentError([CliError("bad-basepoint", str(exc), "basepoint")]) from None
    return G, base


def parse_graph(text: str) -> tuple[gr.MetricGraph, Optional[gr.Point]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError([CliError("bad-json", exc.msg, f"line {exc.lineno} column {exc.colno}")]) from None
    return parse_document(doc)


def graph_document(G: gr.MetricGraph, base: Optional[gr.Point] = None) -> dict:
    doc = {
        "vertices": list(G.vertices),
        "edges": [{"id": e.id, "src": e.src, "dst": e.dst, "length": rat(e.length)} for e in G.edges],
    }
    if isinstance(base, gr.VertexPoint):
        doc["basepoint"] = {"vertex": base.vertex}
    elif isinstance(base, gr.EdgePoint):
        doc["basepoint"] = {"edge": base.edge, "offset": rat(base.offset)}
    return doc


# ---------------------------------------------------------------------------
# commands


def _class_doc(res) -> dict:
    return {
        "basis": labels(res.representative.index),
        "representative": vec(res.representative.coords),
        "class": vec(res.reduced_class),
    }


def _prepared(ctx, need_base: bool = False, use_base: bool = True):
    G, base, tree = ctx["graph"], ctx["basepoint"], ctx["tree"]
    if need_base and base is None:
        raise CliError("missing-basepoint", "this command needs --basepoint or a document basepoint")
    if not use_base:
        base = None
    jd, vertex, br = ce.prepare(G, base, tree)
    ctx["jd"] = jd
    if br:
        ctx["notices"].append("contracted bridges: " + ", ".join(br))
    if vertex is not None and isinstance(base, gr.EdgePoint):
        ctx["notices"].append(f"subdivided {base.edge} at {rat(base.offset)}; basepoint vertex {vertex}")
    return jd, vertex


def cmd_info(ctx) -> dict:
    jd, _ = _prepared(ctx)
    T = jd.tree
    return {
        "vertices": list(jd.graph.vertices),
        "edges": list(jd.graph.edge_ids),
        "cotree": list(T.cotree_edges),
        "fundamental_cycles": [list(r) for r in jd.C],
        "b_expansion": {e: list(r) for e, r in zip(jd.graph.edge_ids, jd.B)},
    }


def cmd_jacobian(ctx) -> dict:
    jd, _ = _prepared(ctx)
    om = jd.omega
    return {
        "Q": mat(jd.Q),
        "omega": {"basis": labels(om.index), "coords": vec(om.coords)},
        "rank_L10": rank(jd.lattice_L(1, 0)),
        "rank_L21": rank(jd.lattice_L(2, 1)) if jd.g else 0,
    }


def cmd_aj(ctx) -> dict:
    if ctx["divisor"] is None:
        raise CliError("missing-divisor", "aj needs --divisor")
    G = ctx["graph"]
    jd, _ = _prepared(ctx, use_base=False)
    br = gr.bridges(G)
    items = []
    for pt, m in ctx["divisor"].support:
        pt = ajm.normalize_point(G, pt)
        _, moved = gr.contract_edges(G, br, pt)
        items.append((moved, m))
    D = ajm.Divisor.of(items)
    rep, cls = ajm.aj(jd, D)
    return {
        "degree": D.degree,
        "representative": vec(rep),
        "class": vec(cls),
        "torsion_order": order_str(ajm.aj_torsion(jd, D)),
    }


def cmd_ceresa(ctx) -> dict:
    jd, vertex = _prepared(ctx, need_base=True)
    res = ce.ceresa_pointed(jd, vertex)
    out = _class_doc(res)
    out.update(basepoint=vertex, quotient="JH_{2,1}", torsion_order=order_str(res.torsion_order))
    if res.note:
        ctx["notices"].append(res.note)
    return out


def cmd_ceresa_unpointed(ctx) -> dict:
    jd, _ = _prepared(ctx)
    res = ce.ceresa_unpointed(jd)
    out = _class_doc(res)
    out.update(quotient="JHbar_{2,1}", torsion_order=order_str(res.torsion_order))
    if res.note:
        ctx["notices"].append(res.note)
    return out


def cmd_wclass(ctx) -> dict:
    jd, vertex = _prepared(ctx)
    res = ce.ceresa_w(jd, vertex)
    if res.note:
        ctx["notices"].append(res.note)
    return {
        "basepoint": vertex if vertex is not None else jd.graph.vertices[0],
        "basis": labels(res.representative.index),
        "representative": vec(res.representative.coords),
        "class": vec(res.reduced_class),
        "nonzero": res.nonzero,
    }


def cmd_torsion(ctx) -> dict:
    jd, vertex = _prepared(ctx)
    out = {"unpointed": order_str(ce.ceresa_unpointed(jd).torsion_order)}
    if vertex is not None:
        out["pointed"] = order_str(ce.ceresa_pointed(jd, vertex).torsion_order)
    return out


def _morita_ready(jd):
    if not jd.integral:
        raise CliError("non-integral", "the Morita computation needs integral edge lengths")


def cmd_morita(ctx) -> dict:
    jd, _ = _prepared(ctx)
    _morita_ready(jd)
    bg = mo.b_group(jd)
    G = bg.group
    return {
        "delta": [list(r) for r in mo.delta_matrix(jd).M],
        "invariant_factors": list(G.invariant_factors),
        "free_rank": G.free_rank,
        "order": order_str(G.order),
        "exponent": order_str(G.exponent),
        "n_basis": list(bg.labels),
        "n_representative": list(mo.n_representative(jd)),
        "n_class": list(mo.n_class(jd, bg)),
    }


def cmd_compare(ctx) -> dict:
    jd, _ = _prepared(ctx)
    _morita_ready(jd)
    bg = mo.b_group(jd)
    v = ce.ceresa_unpointed(jd)
    return {
        "holds": mo.compare_morita_ceresa(jd),
        "n_order": order_str(bg.group.element_order(mo.n_representative(jd))),
        "unpointed_torsion_order": order_str(v.torsion_order),
        "exponent": order_str(bg.group.exponent),
    }


HANDLERS = {
    "info": cmd_info,
    "jacobian": cmd_jacobian,
    "aj": cmd_aj,
    "ceresa": cmd_ceresa,
    "ceresa-unpointed": cmd_ceresa_unpointed,
    "wclass": cmd_wclass,
    "torsion": cmd_torsion,
    "morita": cmd_morita,
    "compare": cmd_compare,
}


def run(command: str, G: gr.MetricGraph, basepoint=None, tree=None, divisor=None) -> dict:
    """Execute one command and build the result document (errors raise CliError)."""
    if command not in HANDLERS:
        raise CliError("unknown-command", f"unknown command {command!r}")
    ctx = {"graph": G, "basepoint": basepoint, "tree": tree, "divisor": divisor, "notices": []}
    try:
        result = HANDLERS[command](ctx)
        jd = ctx["jd"]
    except (gr.GraphError, ajm.DivisorError, ce.CeresaError, mo.MoritaError, LinalgError) as exc:
        raise CliError(type(exc).__name__, str(exc)) from None
    return {
        "command": command,
        "genus": jd.g,
        "tree": list(jd.tree.tree_edges),
        "notices": ctx["notices"],
        "result": result,
        "errors": [],
    }


# ---------------------------------------------------------------------------
# self test


def selftest(seed: int, count: int = 5) -> dict:
    """Randomized consistency checks on random bridgeless graphs."""
    rng = random.Random(seed)
    checks = {"basepoint_identity": 0, "tree_invariance": 0, "aj_cocycle": 0, "morita_compare": 0}
    failures = []
    for k in range(count):
        g = rng.randint(2, 4)
        G = fx.random_bridgeless(rng, g, integral=bool(k % 2))
        jd = JacobianData(gr.spanning_tree(G))
        vs = G.vertices
        u, w = rng.choice(vs), rng.choice(vs)
        ok, _, _ = ce.basepoint_dependence_check(jd, u, w)
        checks["basepoint_identity"] += 1
        if not ok:
            failures.append(f"case {k}: basepoint identity {u}, {w}")
        jd2 = JacobianData(gr.spanning_tree(G, fx.random_tree(rng, G)))
        P = basis_change(jd2, jd)
        moved = transform(ce.unpointed_representative(jd2), P)
        checks["tree_invariance"] += 1
        if not jd.jhbar_quotient().equal(moved.coords, ce.unpointed_representative(jd).coords):
            failures.append(f"case {k}: tree invariance")
        x, y = rng.choice(vs), rng.choice(vs)
        P0, Px, Py = (gr.VertexPoint(v) for v in (u, x, y))
        lhs = [a + b for a, b in zip(ajm.aj_representative(jd, ajm.Divisor.of([(Px, 1), (P0, -1)])),
                                     ajm.aj_representative(jd, ajm.Divisor.of([(Py, 1), (Px, -1)])))]
        rhs = ajm.aj_representative(jd, ajm.Divisor.of([(Py, 1), (P0, -1)]))
        checks["aj_cocycle"] += 1
        if not jd.jh_quotient(1, 0).equal(lhs, rhs):
            failures.append(f"case {k}: AJ cocycle")
        if jd.integral:
            checks["morita_compare"] += 1
            if not mo.compare_morita_ceresa(jd):
                failures.append(f"case {k}: Morita comparison")
    return {"seed": seed, "count": count, "checks": checks, "failures": failures, "passed": not failures}


# ---------------------------------------------------------------------------
# entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tropical-ceresa", description="Ceresa classes of tropical curves, exactly.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS + ("selftest",))
    p.add_argument("graph", nargs="?", help="graph document (JSON) or '-' for stdin")
    p.add_argument("--tree", help="comma-separated spanning tree edge ids")
    p.add_argument("--basepoint", help="v:NAME or e:ID@NUM/DEN")
    p.add_argument("--divisor", help="comma-separated v:NAME*MULT / e:ID@NUM/DEN*MULT")
    p.add_argument("--pretty", action="store_true", help="human-readable output")
    p.add_argument("--seed", type=int, default=0, help="seed for selftest")
    p.add_argument("--count", type=int, default=5, help="number of selftest cases")
    return p


def _render_pretty(doc: dict) -> str:
    lines = []
    for key in sorted(doc):
        val = doc[key]
        if isinstance(val, dict):
            lines.append(f"{key}:")
            for k in sorted(val):
                lines.append(f"  {k}: {json.dumps(val[k], ensure_ascii=False)}")
        else:
            lines.append(f"{key}: {json.dumps(val, ensure_ascii=False)}")
    return "\n".join(lines)


def emit(doc: dict, pretty: bool, stream) -> None:
    if pretty:
        stream.write(_render_pretty(doc) + "\n")
    else:
        stream.write(json.dumps(doc, sort_keys=True, ensure_ascii=False) + "\n")


def main(argv=None, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    pretty = False
    command = None
    try:
        args = build_parser().parse_args(argv)
        pretty, command = args.pretty, args.command
        if command == "selftest":
            doc = selftest(args.seed, args.count)
            doc["command"] = "selftest"
            doc["errors"] = [] if doc["passed"] else [{"code": "selftest", "message": m} for m in doc["failures"]]
        else:
            if args.graph is None:
                raise CliError("usage", "a graph document is required")
            if args.graph == "-":
                text = stdin.read()
            else:
                try:
                    with open(args.graph, encoding="utf-8") as fh:
                        text = fh.read()
                except OSError as exc:
                    raise CliError("io", str(exc), args.graph) from None
            G, base = parse_graph(text)
            if args.basepoint:
                base = parse_point(args.basepoint, "--basepoint")
                try:
                    base = ajm.normalize_point(G, base)
                except ajm.DivisorError as exc:
                    raise CliError("bad-basepoint", str(exc), "--basepoint") from None
            tree = [t.strip() for t in args.tree.split(",") if t.strip()] if args.tree else None
            divisor = parse_divisor(args.divisor) if args.divisor else None
            doc = run(command, G, base, tree, divisor)
    except DocumentError as exc:
        doc = {"command": command, "errors": [e.payload() for e in exc.errors]}
    except CliError as exc:
        doc = {"command": command, "errors": [exc.payload()]}
    emit(doc, pretty, stdout)
    return 1 if doc["errors"] else 0


if __name__ == "__main__":
    sys.exit(main())
