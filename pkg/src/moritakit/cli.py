"""Command-line driver and workspace files.

A workspace is a JSON document with top-level maps ``rings``, ``modules``,
``bimodules``, ``maps`` and ``contexts``.  Elements are coordinate lists.

    rings:     {"moduli": [..], "one": [..] | null, "mult": k x k array of elements}
    modules:   {"group": {"moduli": [..]}, "ring": name, "side": "left"|"right",
                "action": (ring gens) x (module gens) array of elements}
    bimodules: {"left": module name, "right": module name}
    maps:      {"left": bimodule, "right": bimodule, "ring": name, "table": k_P x k_Q array}
    contexts:  {"kind": "semi", "T", "S", "P", "Q", "beta"} or
               {"kind": "datum", "T_side": semi name, "S_side": semi name}

Exit codes: 0 all checks passed, 1 a checked claim failed, 2 usage, load or
capacity error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path
from typing import Any

from . import __version__
from .abelian import CapacityError, FinAbGroup, capacity
from .algebra import (LEFT, RIGHT, Bimodule, FinRing, ModuleStructure, corner_context,
                      matrix_ring, validate_module, validate_ring, zn)
from .morita import (BalancedMap, MoritaDatum, MoritaSemiContext, butterfly_check,
                     classify_datum, classify_semi_context, identity_datum, matrix_datum,
                     proposition_TT_check, random_data, validate_semi_context)

SCHEMA = 1
EXAMPLES = ("corner_m2z2",)


class LoadError(Exception):
    pass


class AxiomError(LoadError):
    """A declared object violates an axiom (a failed claim, not a usage error)."""


# ---------------------------------------------------------------------------
# workspace

class Workspace:
    def __init__(self):
        self.rings: dict[str, FinRing] = {}
        self.modules: dict[str, ModuleStructure] = {}
        self.bimodules: dict[str, Bimodule] = {}
        self.maps: dict[str, BalancedMap] = {}
        self.contexts: dict[str, MoritaSemiContext | MoritaDatum] = {}
        self.seed: int | None = None

    def data(self) -> list[tuple[str, MoritaDatum]]:
        return [(k, v) for k, v in self.contexts.items() if isinstance(v, MoritaDatum)]


def _elem(x, where: str) -> tuple[int, ...]:
    if not isinstance(x, list) or not all(isinstance(a, int) for a in x):
        raise LoadError(f"{where}: expected a list of integers")
    return tuple(x)


def _table(rows, where: str) -> tuple:
    if not isinstance(rows, list):
        raise LoadError(f"{where}: expected an array")
    return tuple(tuple(_elem(x, f"{where}[{i}][{j}]") for j, x in enumerate(r))
                 for i, r in enumerate(rows))


def _ref(table: dict, name, kind: str, where: str):
    if name not in table:
        raise LoadError(f"{where}: unresolved {kind} reference {name!r}")
    return table[name]


def _check(rep, where: str):
    if not rep.ok:
        raise AxiomError("; ".join(f"{where}: {line}" for line in rep.lines()))


def load_workspace(doc: dict, validate: bool = True) -> Workspace:
    ws = Workspace()
    ws.seed = doc.get("seed")
    for name, r in doc.get("rings", {}).items():
        where = f"rings.{name}"
        try:
            g = FinAbGroup(tuple(r["moduli"]))
            one = None if r.get("one") is None else _elem(r["one"], where + ".one")
            ring = FinRing(g, _table(r["mult"], where + ".mult"), one, name=name)
        except (KeyError, ValueError, TypeError) as exc:
            raise LoadError(f"{where}: {exc}") from exc
        if validate:
            _check(validate_ring(ring), where)
        ws.rings[name] = ring
    for name, m in doc.get("modules", {}).items():
        where = f"modules.{name}"
        try:
            ring = _ref(ws.rings, m["ring"], "ring", where)
            g = FinAbGroup(tuple(m["group"]["moduli"]))
            mod = ModuleStructure(ring, g, m["side"], _table(m["action"], where + ".action"), name)
        except (KeyError, ValueError, TypeError) as exc:
            raise LoadError(f"{where}: {exc}") from exc
        if validate:
            _check(validate_module(mod), where)
        ws.modules[name] = mod
    for name, b in doc.get("bimodules", {}).items():
        where = f"bimodules.{name}"
        left = _ref(ws.modules, b.get("left"), "module", where)
        right = _ref(ws.modules, b.get("right"), "module", where)
        if left.side != LEFT or right.side != RIGHT or left.group != right.group:
            raise LoadError(f"{where}: needs a left and a right module on one group")
        bim = Bimodule(left, right, name=name)
        if validate:
            _check(validate_module(bim), where)
        ws.bimodules[name] = bim
    for name, f in doc.get("maps", {}).items():
        where = f"maps.{name}"
        try:
            ws.maps[name] = BalancedMap(_ref(ws.bimodules, f["left"], "bimodule", where),
                                        _ref(ws.bimodules, f["right"], "bimodule", where),
                                        _ref(ws.rings, f["ring"], "ring", where),
                                        _table(f["table"], where + ".table"))
        except (KeyError, ValueError, TypeError) as exc:
            raise LoadError(f"{where}: {exc}") from exc
    ctx = doc.get("contexts", {})
    for name, c in ctx.items():
        if c.get("kind", "semi") != "semi":
            continue
        where = f"contexts.{name}"
        m = MoritaSemiContext(_ref(ws.rings, c.get("T"), "ring", where),
                              _ref(ws.rings, c.get("S"), "ring", where),
                              _ref(ws.bimodules, c.get("P"), "bimodule", where),
                              _ref(ws.bimodules, c.get("Q"), "bimodule", where),
                              _ref(ws.maps, c.get("beta"), "map", where))
        if validate:
            _check(validate_semi_context(m), where)
        ws.contexts[name] = m
    for name, c in ctx.items():
        if c.get("kind", "semi") == "semi":
            continue
        where = f"contexts.{name}"
        if c["kind"] != "datum":
            raise LoadError(f"{where}: unknown kind {c['kind']!r}")
        a = _ref(ws.contexts, c.get("T_side"), "semi-context", where)
        b = _ref(ws.contexts, c.get("S_side"), "semi-context", where)
        try:
            ws.contexts[name] = MoritaDatum(a, b)
        except ValueError as exc:
            raise LoadError(f"{where}: {exc}") from exc
    return ws


def parse_workspace(path: str | Path, validate: bool = True) -> Workspace:
    p = Path(path)
    if not p.exists() and str(path) in EXAMPLES:
        text = resources.files("moritakit").joinpath("data", f"{path}.json").read_text("utf-8")
        where = str(path)
    else:
        try:
            text = p.read_text("utf-8")
        except OSError as exc:
            raise LoadError(f"{path}: {exc.strerror}") from exc
        where = str(p)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LoadError(f"{where}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise LoadError(f"{where}: top level must be an object")
    try:
        return load_workspace(doc, validate)
    except LoadError as exc:
        raise type(exc)(f"{where}: {exc}") from exc


# serialization

def _ring_doc(r: FinRing) -> dict:
    return {"moduli": list(r.group.moduli), "one": None if r.one is None else list(r.one),
            "mult": [[list(x) for x in row] for row in r.mult]}


def _module_doc(m: ModuleStructure, ring: str) -> dict:
    return {"group": {"moduli": list(m.group.moduli)}, "ring": ring, "side": m.side,
            "action": [[list(x) for x in row] for row in m.action]}


def datum_document(d: MoritaDatum, label: str = "datum") -> dict:
    """Workspace for one datum: rings T, S; bimodules P, Q; maps betaT, betaS."""
    doc: dict[str, Any] = {"schema": SCHEMA, "rings": {}, "modules": {}, "bimodules": {},
                           "maps": {}, "contexts": {}}
    doc["rings"]["T"] = _ring_doc(d.T)
    doc["rings"]["S"] = _ring_doc(d.S)
    for b, lring, rring in (("P", "T", "S"), ("Q", "S", "T")):
        bim = getattr(d, b)
        doc["modules"][f"{b}_{lring}"] = _module_doc(bim.left, lring)
        doc["modules"][f"{b}_{rring}"] = _module_doc(bim.right, rring)
        doc["bimodules"][b] = {"left": f"{b}_{lring}", "right": f"{b}_{rring}"}
    doc["maps"]["betaT"] = {"left": "P", "right": "Q", "ring": "T",
                            "table": [[list(x) for x in row] for row in d.beta_T.table]}
    doc["maps"]["betaS"] = {"left": "Q", "right": "P", "ring": "S",
                            "table": [[list(x) for x in row] for row in d.beta_S.table]}
    doc["contexts"]["ctxT"] = {"kind": "semi", "T": "T", "S": "S", "P": "P", "Q": "Q", "beta": "betaT"}
    doc["contexts"]["ctxS"] = {"kind": "semi", "T": "S", "S": "T", "P": "Q", "Q": "P", "beta": "betaS"}
    doc["contexts"][label] = {"kind": "datum", "T_side": "ctxT", "S_side": "ctxS"}
    return doc


def example_datum(kind: str, n: int = 2, m: int = 2) -> tuple[MoritaDatum, str]:
    if kind == "corner":
        T = matrix_ring(n, m)
        e = tuple(int(i == 0) for i in range(n * n))
        return corner_context(T, e), "corner"
    if kind == "identity":
        return identity_datum(matrix_ring(n, m) if n > 1 else zn(m)), "identity"
    if kind == "matrix":
        return matrix_datum(n, m), "matrix"
    raise ValueError(kind)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# suites

def _suite_on(suite: str, name: str, d: MoritaDatum, bound: int) -> dict:
    from . import catlab

    if suite == "butterfly":
        if not d.is_context:
            return {"name": name, "status": "skip", "detail": "not a context"}
        r = butterfly_check(d)
        return {"name": name, "status": "pass" if r["ok"] else "fail", "detail": r}
    if suite == "tt":
        r = proposition_TT_check(d)
        return {"name": name, "status": "pass" if r["ok"] else "fail", "detail": r}
    if suite in ("vv", "regression"):
        rep = catlab.theorem_regression(d, bound)
        if suite == "vv":
            rep.results = [r for r in rep.results if r.theorem in ("V=V", "CHECK")]
        return {"name": name, "status": "pass" if rep.ok else "fail", "detail": rep.as_dict()}
    if suite == "witness":
        out, ok = [], True
        for mode in ("XX", "CC"):
            for i, U in enumerate(catlab.enumerate_left_modules(d.T, bound)):
                w = catlab.equivalence_witness(d, U, mode)
                if w.hypothesis:
                    ok &= w.ok
                    out.append({"module": i, **w.as_dict()})
        return {"name": name, "status": "pass" if ok else "fail", "detail": out}
    if suite == "star":
        v = catlab.star_module_bounded(d.T, d.P, bound)
        return {"name": name, "status": "pass", "detail": v.as_dict()}
    if suite == "wide":
        if not d.is_context:
            return {"name": name, "status": "skip", "detail": "not a context"}
        out, ok = [], True
        for i, V in enumerate(catlab.enumerate_left_modules(d.T, bound)):
            for j, W in enumerate(catlab.enumerate_left_modules(d.S, bound)):
                r = catlab.wide_morita_maps(d, V, W)
                ok &= r["ok"]
                out.append({"V": i, "W": j, **r})
        return {"name": name, "status": "pass" if ok else "fail", "detail": out}
    raise ValueError(suite)


def _status_line(entry: dict) -> str:
    return f"{entry['status'].upper():5} {entry['name']}"


# ---------------------------------------------------------------------------
# commands

def cmd_validate(args) -> int:
    try:
        ws = parse_workspace(args.file)
    except AxiomError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    print(f"valid: {len(ws.rings)} rings, {len(ws.modules)} modules, "
          f"{len(ws.bimodules)} bimodules, {len(ws.maps)} maps, {len(ws.contexts)} contexts")
    for name, d in ws.data():
        w = d.compatibility_witness()
        print(f"  {name}: " + ("Morita context" if w is None else f"datum, not compatible at {list(w)}"))
    return 0


def _bool(x) -> str:
    return "yes" if x else "no"


def _print_semi(c: dict, indent: str = "") -> None:
    print(f"{indent}ring: {c['ring']}")
    print(f"{indent}tensor-level connecting map: orders {c['tensor_order']} -> {c['target_order']}, "
          f"kernel {c['kernel_order']}")
    print(f"{indent}injective: {_bool(c['injective'])}  semi-strict: {_bool(c['semi_strict'])}  "
          f"strict: {_bool(c['strict'])}  non-degenerate: {_bool(c['non_degenerate'])}")
    print(f"{indent}alpha P_l: {c['alpha_P_l']} ({c['alpha_P_l_reason']})")
    print(f"{indent}alpha Q_r: {c['alpha_Q_r']} ({c['alpha_Q_r_reason']})")
    print(f"{indent}trace ideal: order {c['trace_order']}, equals T: {_bool(c['trace_is_T'])}")
    print(f"{indent}decomposable values <p,q>: {c['decomposable_count']}")
    if not c["decomposable_is_trace"]:
        print(f"{indent}trace elements that are not values <p,q>: {c['not_values']}")
    for n in c["notes"]:
        print(f"{indent}note: {n}")


def _semi_report(m: MoritaSemiContext, bound: int) -> dict:
    c = classify_semi_context(m, bound)
    vals = {tuple(x) for x in c["decomposable_values"]}
    c["not_values"] = [list(x) for x in sorted(m.trace.elements()) if tuple(x) not in vals]
    return c


def cmd_classify(args) -> int:
    ws = parse_workspace(args.file)
    if args.object not in ws.contexts:
        raise LoadError(f"no context named {args.object!r}; have {sorted(ws.contexts)}")
    obj = ws.contexts[args.object]
    if isinstance(obj, MoritaSemiContext):
        rep = {"kind": "semi-context", **_semi_report(obj, args.alpha_bound)}
    else:
        rep = {"kind": "datum", **classify_datum(obj, args.alpha_bound)}
        rep["T_side"] = _semi_report(obj.mT, args.alpha_bound)
        rep["S_side"] = _semi_report(obj.mS, args.alpha_bound)
    if args.json:
        sys.stdout.write(dumps({"schema": SCHEMA, "version": __version__, "object": args.object,
                                "report": rep}))
        return 0
    print(f"{args.object}: {rep['kind']}")
    if rep["kind"] == "semi-context":
        _print_semi(rep, "  ")
    else:
        w = rep["compatibility_witness"]
        print("  Morita context: " + ("yes" if w is None else f"no, witness {w}"))
        print(f"  injective: {_bool(rep['injective'])}  strict: {_bool(rep['strict'])}  "
              f"non-degenerate: {_bool(rep['non_degenerate'])}")
        print(f"  left alpha: {rep['left_alpha']}  right alpha: {rep['right_alpha']}")
        for side in ("T_side", "S_side"):
            print(f"  {side}:")
            _print_semi(rep[side], "    ")
    return 0


def cmd_check(args) -> int:
    if args.file == "random":
        seed = 0 if args.seed is None else args.seed
        data = [(f"random[{i}]", d) for i, d in
                enumerate(random_data(seed, args.count, args.kind, max_order=args.bound))]
    else:
        ws = parse_workspace(args.file)
        data = ws.data()
        if not data:
            raise LoadError("workspace contains no Morita datum")
    results = [_suite_on(args.suite, name, d, args.bound) for name, d in data]
    ok = all(r["status"] != "fail" for r in results)
    if args.json:
        sys.stdout.write(dumps({"schema": SCHEMA, "version": __version__, "suite": args.suite,
                                "bound": args.bound, "seed": args.seed, "ok": ok,
                                "results": results}))
    else:
        for r in results:
            print(_status_line(r))
            if args.suite in ("vv", "regression"):
                for t in r["detail"]["results"]:
                    print(f"      {t['status']:4} {t['perspective']:10} {t['theorem']:11} {t['detail']}")
        counts = {s: sum(r["status"] == s for r in results) for s in ("pass", "fail", "skip")}
        print(f"{args.suite}: {counts['pass']} pass, {counts['fail']} fail, {counts['skip']} skip")
    return 0 if ok else 1


def cmd_example(args) -> int:
    d, label = example_datum(args.kind, args.n, args.m)
    text = dumps(datum_document(d, label))
    if args.output:
        Path(args.output).write_text(text, "utf-8")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="moritakit", description="Finite Morita data and contexts.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--cap", help="capacity N or N,M (overrides MORITA_KIT_CAP)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="load a workspace and check every axiom")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", help="classify a semi-context or datum")
    p.add_argument("file")
    p.add_argument("--object", required=True)
    p.add_argument("--alpha-bound", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("check", help="run a verification suite")
    p.add_argument("file", help="workspace file, shipped example name, or 'random'")
    p.add_argument("--suite", required=True,
                   choices=["butterfly", "tt", "vv", "witness", "regression", "star", "wide"])
    p.add_argument("--bound", type=int, default=8)
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int, default=100, help="number of random data")
    p.add_argument("--kind", default="context", choices=["context", "datum", "corner"])
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("example", help="emit a workspace for a built-in datum")
    p.add_argument("kind", choices=["corner", "identity", "matrix"])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_example)
    return ap


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.cap:
            os.environ["MORITA_KIT_CAP"] = args.cap
            capacity()
        return args.func(args)
    except LoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
