"""The JSON document format shared by the command line tools.

Every document has ``kind`` and ``version``; rationals are canonical
strings ("3", "-1/2").  Parsing is strict: unknown or missing fields,
floats and non-canonical rationals are rejected with the JSON path of the
offending value.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .lattices import INF, EmbeddingCertificate, FiniteLattice, LatticeMap, grid
from .terms import TermSyntaxError, from_json, to_json
from .vectorlattice import GridShape, fmt_rational

VERSION = 1
KINDS = ("lattice", "map", "tuple", "pushout", "chain", "tree", "report")
_RATIONAL = re.compile(r"-?(0|[1-9][0-9]*)(/[1-9][0-9]*)?")


class DocumentError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# -- scalars --------------------------------------------------------------------

def q(x) -> str:
    if x == INF:
        return "inf"
    return fmt_rational(Fraction(x))


def parse_q(s, path: str, allow_inf: bool = False):
    if allow_inf and s == "inf":
        return INF
    if not isinstance(s, str) or not _RATIONAL.fullmatch(s):
        raise DocumentError(path, f"expected a rational string, got {s!r}")
    value = Fraction(s)
    if q(value) != s or s == "-0":
        raise DocumentError(path, f"rational {s!r} is not in lowest terms")
    return value


def qvec(v) -> list[str]:
    return [q(a) for a in v]


def parse_qvec(data, path: str, length: int | None = None) -> tuple:
    if not isinstance(data, list):
        raise DocumentError(path, "expected a list of rationals")
    out = tuple(parse_q(s, f"{path}[{i}]") for i, s in enumerate(data))
    if length is not None and len(out) != length:
        raise DocumentError(path, f"expected {length} entries, got {len(out)}")
    return out


def qmat(m) -> list[list[str]]:
    return [qvec(r) for r in m]


def parse_qmat(data, path: str, cols: int | None = None) -> tuple:
    if not isinstance(data, list):
        raise DocumentError(path, "expected a list of rows")
    return tuple(parse_qvec(r, f"{path}[{i}]", cols) for i, r in enumerate(data))


def _int(data, path: str, minimum: int = 0) -> int:
    if not isinstance(data, int) or isinstance(data, bool) or data < minimum:
        raise DocumentError(path, f"expected an integer >= {minimum}")
    return data


def _str(data, path: str) -> str:
    if not isinstance(data, str):
        raise DocumentError(path, "expected a string")
    return data


def _fields(data, path: str, required: tuple, optional: tuple = ()) -> dict:
    if not isinstance(data, dict):
        raise DocumentError(path, "expected an object")
    extra = set(data) - set(required) - set(optional)
    if extra:
        raise DocumentError(path, f"unknown field {sorted(extra)[0]!r}")
    for key in required:
        if key not in data:
            raise DocumentError(path, f"missing field {key!r}")
    return data


def _header(data, kind: str, path: str, fields: tuple) -> dict:
    d = _fields(data, path, ("kind", "version") + fields)
    if d["kind"] != kind:
        raise DocumentError(f"{path}.kind", f"expected {kind!r}, got {d['kind']!r}")
    if d["version"] != VERSION:
        raise DocumentError(f"{path}.version", f"unsupported version {d['version']!r}")
    return d


# -- lattices and maps --------------------------------------------------------------

def lattice_doc(lat: FiniteLattice) -> dict:
    plain = lat.shape is not None and lat._is_plain_grid()
    return {
        "kind": "lattice", "version": VERSION, "label": lat.label, "dim": lat.dim,
        "grid": [lat.shape.rows, list(lat.shape.cols)] if plain else None,
        "functionals": None if plain or lat.functional_form is None else qmat(lat.functional_form),
        "generators": None if lat.ball_form is None else qmat(lat.ball_form),
    }


def parse_lattice(data, path: str = "$") -> FiniteLattice:
    d = _header(data, "lattice", path, ("label", "dim", "grid", "functionals", "generators"))
    label = _str(d["label"], f"{path}.label")
    dim = _int(d["dim"], f"{path}.dim")
    try:
        if d["grid"] is not None:
            g = d["grid"]
            if (not isinstance(g, list) or len(g) != 2 or not isinstance(g[1], list)):
                raise DocumentError(f"{path}.grid", "expected [rows, [widths]]")
            rows = _int(g[0], f"{path}.grid[0]", 1)
            cols = tuple(_int(c, f"{path}.grid[1][{i}]", 1) for i, c in enumerate(g[1]))
            if d["functionals"] is not None or d["generators"] is not None:
                raise DocumentError(path, "a grid lattice carries no explicit forms")
            lat = grid(GridShape(rows, cols), label)
            if lat.dim != dim:
                raise DocumentError(f"{path}.dim", "does not match the grid shape")
            return lat
        funcs = None if d["functionals"] is None else parse_qmat(d["functionals"], f"{path}.functionals", dim)
        gens = None if d["generators"] is None else parse_qmat(d["generators"], f"{path}.generators", dim)
        return FiniteLattice(dim, funcs, gens, label)
    except DocumentError:
        raise
    except ValueError as exc:
        raise DocumentError(path, str(exc)) from None


def map_doc(f: LatticeMap) -> dict:
    return {"kind": "map", "version": VERSION, "dom": lattice_doc(f.dom), "cod": lattice_doc(f.cod),
            "matrix": qmat(f.matrix)}


def parse_map(data, path: str = "$") -> LatticeMap:
    d = _header(data, "map", path, ("dom", "cod", "matrix"))
    dom = parse_lattice(d["dom"], f"{path}.dom")
    cod = parse_lattice(d["cod"], f"{path}.cod")
    m = parse_qmat(d["matrix"], f"{path}.matrix", dom.dim)
    if len(m) != cod.dim:
        raise DocumentError(f"{path}.matrix", f"expected {cod.dim} rows")
    return LatticeMap(dom, cod, m)


def certificate_doc(c: EmbeddingCertificate) -> dict:
    return {"c_upper": q(c.c_upper), "upper_witness": qvec(c.upper_witness),
            "c_lower": q(c.c_lower), "lower_witness": None if c.lower_witness is None else qvec(c.lower_witness)}


def parse_certificate(data, path: str) -> EmbeddingCertificate:
    d = _fields(data, path, ("c_upper", "upper_witness", "c_lower", "lower_witness"))
    low = None if d["lower_witness"] is None else parse_qvec(d["lower_witness"], f"{path}.lower_witness")
    return EmbeddingCertificate(parse_q(d["c_upper"], f"{path}.c_upper"),
                                parse_qvec(d["upper_witness"], f"{path}.upper_witness"),
                                parse_q(d["c_lower"], f"{path}.c_lower", allow_inf=True), low)


# -- tuples -----------------------------------------------------------------------

def tuple_doc(t) -> dict:
    return {"kind": "tuple", "version": VERSION, "lattice": lattice_doc(t.lattice),
            "elements": qmat(t.elements),
            "witness": None if t.witness is None else [to_json(w) for w in t.witness]}


def parse_tuple(data, path: str = "$"):
    from .fraisse import GeneratedTuple

    d = _header(data, "tuple", path, ("lattice", "elements", "witness"))
    lat = parse_lattice(d["lattice"], f"{path}.lattice")
    elems = parse_qmat(d["elements"], f"{path}.elements", lat.dim)
    witness = None
    if d["witness"] is not None:
        if not isinstance(d["witness"], list):
            raise DocumentError(f"{path}.witness", "expected a list of terms")
        try:
            witness = tuple(from_json(w, f"{path}.witness[{i}]") for i, w in enumerate(d["witness"]))
        except TermSyntaxError as exc:
            raise DocumentError(f"{path}.witness", str(exc)) from None
    return GeneratedTuple(lat, elems, witness)


# -- pushouts -----------------------------------------------------------------------

def pushout_doc(res, f1: LatticeMap | None = None, f2: LatticeMap | None = None) -> dict:
    comp = None
    if f1 is not None and f2 is not None:
        comp = [qmat(res.g1.compose(f1).matrix), qmat(res.g2.compose(f2).matrix)]
    return {"kind": "pushout", "version": VERSION, "G": lattice_doc(res.G),
            "g1": map_doc(res.g1), "g2": map_doc(res.g2), "atom_legend": list(res.atom_legend),
            "certificates": [certificate_doc(c) for c in (res.certificates or ())],
            "composites": comp}


def parse_pushout(data, path: str = "$") -> dict:
    d = _header(data, "pushout", path, ("G", "g1", "g2", "atom_legend", "certificates", "composites"))
    out = {"G": parse_lattice(d["G"], f"{path}.G"), "g1": parse_map(d["g1"], f"{path}.g1"),
           "g2": parse_map(d["g2"], f"{path}.g2")}
    if not isinstance(d["atom_legend"], list) or not all(isinstance(s, str) for s in d["atom_legend"]):
        raise DocumentError(f"{path}.atom_legend", "expected a list of strings")
    out["atom_legend"] = tuple(d["atom_legend"])
    if not isinstance(d["certificates"], list):
        raise DocumentError(f"{path}.certificates", "expected a list")
    out["certificates"] = tuple(parse_certificate(c, f"{path}.certificates[{i}]")
                                for i, c in enumerate(d["certificates"]))
    comp = d["composites"]
    if comp is not None:
        if not isinstance(comp, list) or len(comp) != 2:
            raise DocumentError(f"{path}.composites", "expected two matrices")
        comp = tuple(parse_qmat(m, f"{path}.composites[{i}]") for i, m in enumerate(comp))
    out["composites"] = comp
    return out


# -- chains -------------------------------------------------------------------------

_LOG_KEYS = ("step", "task", "stage", "dim", "generators", "functionals")


def task_doc(t) -> dict:
    return {"stage": t.stage, "source": qmat(t.source), "target_lattice": lattice_doc(t.target_lattice),
            "target": qmat(t.target), "priority": t.priority, "label": t.label}


def parse_task(data, path: str, stages: list):
    from .fraisse import Task

    d = _fields(data, path, ("stage", "source", "target_lattice", "target", "priority", "label"))
    stage = _int(d["stage"], f"{path}.stage")
    if stage >= len(stages):
        raise DocumentError(f"{path}.stage", "no such stage")
    B = parse_lattice(d["target_lattice"], f"{path}.target_lattice")
    if not isinstance(d["priority"], int) or isinstance(d["priority"], bool):
        raise DocumentError(f"{path}.priority", "expected an integer")
    return Task(stage, parse_qmat(d["source"], f"{path}.source", stages[stage].dim), B,
                parse_qmat(d["target"], f"{path}.target", B.dim), d["priority"], _str(d["label"], f"{path}.label"))


def chain_doc(state) -> dict:
    return {
        "kind": "chain", "version": VERSION, "seed": state.seed,
        "catalogue": [lattice_doc(c) for c in state.catalogue],
        "stages": [lattice_doc(s) for s in state.stages],
        "maps": [qmat(m.matrix) for m in state.maps],
        "targets": [map_doc(t) for t in state.targets],
        "queue": [task_doc(t) for t in state.queue],
        "log": [{k: e[k] for k in _LOG_KEYS} for e in state.log],
    }


def parse_chain(data, path: str = "$"):
    from .fraisse import ChainState

    d = _header(data, "chain", path, ("seed", "catalogue", "stages", "maps", "targets", "queue", "log"))
    seed = _int(d["seed"], f"{path}.seed")
    for key in ("catalogue", "stages", "maps", "targets", "queue", "log"):
        if not isinstance(d[key], list):
            raise DocumentError(f"{path}.{key}", "expected a list")
    cat = [parse_lattice(c, f"{path}.catalogue[{i}]") for i, c in enumerate(d["catalogue"])]
    stages = [parse_lattice(s, f"{path}.stages[{i}]") for i, s in enumerate(d["stages"])]
    if not stages:
        raise DocumentError(f"{path}.stages", "a chain needs at least one stage")
    if len(d["maps"]) != len(stages) - 1 or len(d["targets"]) != len(stages) - 1:
        raise DocumentError(f"{path}.maps", "expected one map and one target per step")
    maps = []
    for i, m in enumerate(d["maps"]):
        mat = parse_qmat(m, f"{path}.maps[{i}]", stages[i].dim)
        if len(mat) != stages[i + 1].dim:
            raise DocumentError(f"{path}.maps[{i}]", "wrong number of rows")
        maps.append(LatticeMap(stages[i], stages[i + 1], mat))
    targets = [parse_map(t, f"{path}.targets[{i}]") for i, t in enumerate(d["targets"])]
    for i, t in enumerate(targets):
        if t.cod != stages[i + 1]:
            raise DocumentError(f"{path}.targets[{i}]", "codomain is not the next stage")
    queue = [parse_task(t, f"{path}.queue[{i}]", stages) for i, t in enumerate(d["queue"])]
    log = []
    for i, e in enumerate(d["log"]):
        e = _fields(e, f"{path}.log[{i}]", _LOG_KEYS)
        log.append({k: e[k] for k in _LOG_KEYS})
    return ChainState(cat, stages, maps, queue, targets, seed, log)


# -- trees --------------------------------------------------------------------------

def tree_doc(tree) -> dict:
    return {
        "kind": "tree", "version": VERSION, "depth": tree.depth, "branching": list(tree.branching),
        "ambient": lattice_doc(tree.ambient),
        "nodes": [{"node": list(k), "x": qvec(v)} for k, v in tree.nodes.items()],
        "levels": [lattice_doc(l) for l in tree.levels],
        "level_nodes": [[list(v) for v in lv] for lv in tree.level_nodes],
        "level_scales": qvec(tree.level_scales),
        "inclusions": [qmat(m.matrix) for m in tree.inclusions],
    }


def parse_tree(data, path: str = "$"):
    from .branching import BranchTree

    d = _header(data, "tree", path, ("depth", "branching", "ambient", "nodes", "levels", "level_nodes",
                                     "level_scales", "inclusions"))
    depth = _int(d["depth"], f"{path}.depth")
    if not isinstance(d["branching"], list) or len(d["branching"]) != depth:
        raise DocumentError(f"{path}.branching", "expected one size per level")
    branching = tuple(_int(b, f"{path}.branching[{i}]", 1) for i, b in enumerate(d["branching"]))
    ambient = parse_lattice(d["ambient"], f"{path}.ambient")
    nodes = {}
    if not isinstance(d["nodes"], list):
        raise DocumentError(f"{path}.nodes", "expected a list")
    for i, e in enumerate(d["nodes"]):
        e = _fields(e, f"{path}.nodes[{i}]", ("node", "x"))
        if not isinstance(e["node"], list):
            raise DocumentError(f"{path}.nodes[{i}].node", "expected a list of labels")
        key = tuple(_int(b, f"{path}.nodes[{i}].node[{j}]") for j, b in enumerate(e["node"]))
        nodes[key] = parse_qvec(e["x"], f"{path}.nodes[{i}].x", ambient.dim)
    if not isinstance(d["levels"], list) or len(d["levels"]) != depth + 1:
        raise DocumentError(f"{path}.levels", "expected depth + 1 levels")
    levels = [parse_lattice(l, f"{path}.levels[{i}]") for i, l in enumerate(d["levels"])]
    if not isinstance(d["level_nodes"], list) or len(d["level_nodes"]) != depth + 1:
        raise DocumentError(f"{path}.level_nodes", "expected depth + 1 lists")
    orders = []
    for n, lv in enumerate(d["level_nodes"]):
        if not isinstance(lv, list) or len(lv) != levels[n].dim:
            raise DocumentError(f"{path}.level_nodes[{n}]", "expected one node per atom")
        order = []
        for i, v in enumerate(lv):
            if not isinstance(v, list):
                raise DocumentError(f"{path}.level_nodes[{n}][{i}]", "expected a list of labels")
            key = tuple(_int(b, f"{path}.level_nodes[{n}][{i}][{j}]") for j, b in enumerate(v))
            if key not in nodes or len(key) != n:
                raise DocumentError(f"{path}.level_nodes[{n}][{i}]", "unknown node for this level")
            order.append(key)
        orders.append(order)
    scales = list(parse_qvec(d["level_scales"], f"{path}.level_scales", depth + 1))
    if not isinstance(d["inclusions"], list) or len(d["inclusions"]) != depth:
        raise DocumentError(f"{path}.inclusions", "expected one inclusion per level step")
    incl = []
    for n, m in enumerate(d["inclusions"]):
        mat = parse_qmat(m, f"{path}.inclusions[{n}]", levels[n].dim)
        if len(mat) != levels[n + 1].dim:
            raise DocumentError(f"{path}.inclusions[{n}]", "wrong number of rows")
        incl.append(LatticeMap(levels[n], levels[n + 1], mat))
    return BranchTree(depth, branching, ambient, nodes, levels, orders, scales, incl)


# -- reports and I/O ------------------------------------------------------------------

def report_doc(command: str, body: dict) -> dict:
    return {"kind": "report", "version": VERSION, "command": command, "body": body}


def parse_report(data, path: str = "$") -> dict:
    d = _header(data, "report", path, ("command", "body"))
    _str(d["command"], f"{path}.command")
    if not isinstance(d["body"], dict):
        raise DocumentError(f"{path}.body", "expected an object")
    return d


PARSERS = {"lattice": parse_lattice, "map": parse_map, "tuple": parse_tuple, "pushout": parse_pushout,
           "chain": parse_chain, "tree": parse_tree, "report": parse_report}


def _reject_floats(text: str):
    raise DocumentError("$", f"floating-point literal {text!r} is not allowed")


def loads(text: str) -> Any:
    try:
        return json.loads(text, parse_float=_reject_floats)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def parse(data, kind: str | None = None):
    if not isinstance(data, dict) or "kind" not in data:
        raise DocumentError("$", "expected a document object with a 'kind' field")
    if data["kind"] not in KINDS:
        raise DocumentError("$.kind", f"unknown kind {data['kind']!r}")
    if kind is not None and data["kind"] != kind:
        raise DocumentError("$.kind", f"expected {kind!r}, got {data['kind']!r}")
    return PARSERS[data["kind"]](data)


def read(path: str, kind: str | None = None):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse(loads(text), kind)
    except DocumentError as exc:
        raise DocumentError(f"{path}: {exc.path}", str(exc).split(": ", 1)[-1]) from None
