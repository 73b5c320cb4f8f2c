"""JSON documents for algebras, modules, partitions, bimodules and certificates.

Scalars are written as strings: ``"n/d"`` or ``"n"`` over Q, residues over
F_p.  Matrices are lists of rows.  Documents are read leniently (ints are
accepted for scalars) and written canonically so that output is byte-stable.
"""

from __future__ import annotations

import json
from pathlib import Path

from .algebra import AlgebraError, BasicAlgebra, make_algebra
from .exactla import Field, Matrix, Subspace
from .modcat import FdModule, ModuleError, ModuleMap, Submodule
from .presentation import PresentationError, compute_basis, parse_algebra
from .strat import FiltrationCertificate, LayerCertificate, OrderedPartition, PartitionError, StandardFamily, layer
from .triangular import Bimodule, Bipartition, bimodule_from_generators


class InputError(ValueError):
    """Malformed input; ``where`` names the offending file and field."""

    def __init__(self, msg: str, where: str = ""):
        super().__init__(f"{where}: {msg}" if where else msg)
        self.where = where


def load_json(path) -> dict:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(exc.strerror or "cannot read file", str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno}", str(path)) from None


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def parse_field(text: str) -> Field:
    """``Q``, ``QQ``, ``p`` or ``GF(p)``."""
    t = text.strip()
    if t.upper() in ("Q", "QQ", "RATIONAL", "RATIONALS"):
        return Field.rationals()
    if t.upper().startswith("GF(") and t.endswith(")"):
        t = t[3:-1]
    try:
        return Field.prime(int(t))
    except ValueError as exc:
        raise InputError(str(exc), "--field") from None


def parse_matrix(field: Field, rows, shape: tuple, where: str = "") -> Matrix:
    r, c = shape
    if rows is None:
        return Matrix.zeros(field, r, c)
    try:
        data = [[field(x if isinstance(x, (int, str)) else str(x)) for x in row] for row in rows]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad scalar ({exc})", where) from None
    if r == 0 or c == 0:
        if any(data) and len(data) not in (0, r):
            raise InputError(f"expected shape {shape}", where)
        return Matrix.zeros(field, r, c)
    if len(data) != r or any(len(row) != c for row in data):
        got = (len(data), len(data[0]) if data else 0)
        raise InputError(f"expected shape {shape}, got {got}", where)
    return Matrix(field, r, c, data)


# algebras ------------------------------------------------------------------


def algebra_from_doc(doc: dict, where: str = "", field: Field | None = None, name: str = "") -> BasicAlgebra:
    """Presentation documents (with ``arrows``) or structure documents (with ``basis``)."""
    if not isinstance(doc, dict):
        raise InputError("algebra document must be an object", where)
    if field is not None:
        doc = {**doc, "field": field.to_json()}
    try:
        if "basis" in doc:
            return structure_from_doc(doc, name=name)
        alg = compute_basis(parse_algebra(doc, name=name))
        return alg
    except (PresentationError, AlgebraError, KeyError, TypeError, ValueError) as exc:
        raise InputError(str(exc), where) from None


def structure_from_doc(doc: dict, name: str = "") -> BasicAlgebra:
    field = Field.from_json(doc["field"])
    vertices = [str(v) for v in doc["vertices"]]
    vpos = {v: k for k, v in enumerate(vertices)}
    basis = doc["basis"]
    labels = [str(b["label"]) for b in basis]
    lpos = {lab: k for k, lab in enumerate(labels)}
    source = [vpos[str(b["source"])] for b in basis]
    target = [vpos[str(b["target"])] for b in basis]
    idem = [lpos[str(x)] for x in doc["idempotents"]]
    products = {}
    for y, x, terms in doc.get("mult", []):
        products[(lpos[y], lpos[x])] = [(lpos[z], field(str(c))) for z, c in terms]
    gens = [lpos[g] for g in doc["generators"]] if "generators" in doc else None
    words = None
    if "words" in doc:
        wd = doc["words"]
        words = [tuple(lpos[g] for g in wd.get(lab, [lab])) if k not in idem else () for k, lab in enumerate(labels)]
    alg = make_algebra(field, vertices, labels, source, target, idem, products, gens, words, name=name)
    bad = alg.check_associativity()
    if bad:
        z, y, x = bad[0]
        raise AlgebraError(f"multiplication is not associative on ({labels[z]}, {labels[y]}, {labels[x]})")
    return alg


def load_algebra(path, field: Field | None = None) -> BasicAlgebra:
    return algebra_from_doc(load_json(path), str(path), field, name=Path(path).stem)


# modules -------------------------------------------------------------------


def module_from_doc(a: BasicAlgebra, doc: dict, where: str = "") -> FdModule:
    try:
        dd = doc["dims"]
        if isinstance(dd, dict):
            dims = [int(dd.get(v, 0)) for v in a.vertices]
            unknown = set(map(str, dd)) - set(a.vertices)
            if unknown:
                raise InputError(f"unknown vertices {sorted(unknown)}", f"{where}:dims")
        else:
            dims = [int(x) for x in dd]
        action = doc.get("action", {})
        gens = {}
        for lab, rows in action.items():
            try:
                x = a.label_index(lab)
            except AlgebraError as exc:
                raise InputError(str(exc), f"{where}:action") from None
            if a.is_idempotent[x]:
                continue
            if x not in a.generators:
                raise InputError(f"{lab} is not a generator; give generator matrices only", f"{where}:action")
            gens[x] = parse_matrix(a.field, rows, (dims[a.target[x]], dims[a.source[x]]), f"{where}:action.{lab}")
        return FdModule.from_generators(a, dims, gens, name=Path(where).stem if where else "")
    except ModuleError as exc:
        raise InputError(str(exc), where) from None
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed module ({exc})", where) from None


def load_module(a: BasicAlgebra, path) -> FdModule:
    return module_from_doc(a, load_json(path), str(path))


def module_to_doc(m: FdModule) -> dict:
    return m.to_json()


# partitions -----------------------------------------------------------------


def partition_from_doc(a: BasicAlgebra, doc, where: str = "") -> OrderedPartition:
    groups = doc.get("levels") if isinstance(doc, dict) else doc
    if not isinstance(groups, list):
        raise InputError("partition must be a list of vertex groups", where)
    try:
        return OrderedPartition.of(a, [[str(v) for v in g] for g in groups])
    except (AlgebraError, PartitionError, TypeError) as exc:
        raise InputError(str(exc), where) from None


def load_partition(a: BasicAlgebra, path) -> OrderedPartition:
    return partition_from_doc(a, load_json(path), str(path))


def partition_to_doc(a: BasicAlgebra, p: OrderedPartition) -> dict:
    return {"levels": p.names(a)}


def bipartition_from_doc(doc, where: str = "") -> Bipartition:
    try:
        return Bipartition(tuple(str(v) for v in doc["T"]), tuple(str(v) for v in doc["U"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"bipartition needs lists T and U ({exc})", where) from None


def load_bipartition(path) -> Bipartition:
    return bipartition_from_doc(load_json(path), str(path))


# bimodules ------------------------------------------------------------------


def bimodule_from_doc(U: BasicAlgebra, T: BasicAlgebra, doc: dict, where: str = "") -> Bimodule:
    """``dims[u][t]`` (nested lists or vertex-keyed objects), ``left[ulabel][t] = matrix`` and ``right[tlabel][u] = matrix``."""
    from .triangular import BimoduleError

    try:
        dd = doc["dims"]
        if isinstance(dd, list):
            dims = [[int(x) for x in row] for row in dd]
            if len(dims) != U.n or any(len(row) != T.n for row in dims):
                raise InputError(f"dims must be {U.n} x {T.n}", f"{where}:dims")
        else:
            dims = [[int(dd.get(U.vertices[i], {}).get(T.vertices[j], 0)) for j in range(T.n)] for i in range(U.n)]
        left, right = {}, {}
        for lab, per in doc.get("left", {}).items():
            u = U.label_index(lab)
            for tv, rows in per.items():
                j = T.vertex_index(str(tv))
                shape = (dims[U.target[u]][j], dims[U.source[u]][j])
                left[(u, j)] = parse_matrix(U.field, rows, shape, f"{where}:left.{lab}.{tv}")
        for lab, per in doc.get("right", {}).items():
            t = T.label_index(lab)
            for uv, rows in per.items():
                i = U.vertex_index(str(uv))
                shape = (dims[i][T.source[t]], dims[i][T.target[t]])
                right[(t, i)] = parse_matrix(U.field, rows, shape, f"{where}:right.{lab}.{uv}")
        labels = None
        if "labels" in doc:
            labels = {}
            for i in range(U.n):
                for j in range(T.n):
                    labs = doc["labels"].get(f"{U.vertices[i]}|{T.vertices[j]}", [])
                    labels[(i, j)] = tuple(labs)
                    if len(labs) != dims[i][j]:
                        raise InputError(f"label count for {U.vertices[i]}|{T.vertices[j]}", f"{where}:labels")
        return bimodule_from_generators(U, T, dims, left, right, labels)
    except (BimoduleError, ModuleError, AlgebraError) as exc:
        raise InputError(str(exc), where) from None
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed bimodule ({exc})", where) from None


def load_bimodule(U: BasicAlgebra, T: BasicAlgebra, path) -> Bimodule:
    return bimodule_from_doc(U, T, load_json(path), str(path))


# certificates ---------------------------------------------------------------


def certificate_from_doc(m: FdModule, fam: StandardFamily, doc: dict, where: str = "") -> FiltrationCertificate:
    """Rebuild a certificate from its JSON export for independent replay."""
    a, field = m.algebra, m.field
    try:
        if not doc.get("filtered", False):
            raise InputError("document is not a positive certificate", where)
        chain = []
        for k, sdoc in enumerate(doc["chain"]):
            spaces = []
            for v in range(a.n):
                rows = sdoc.get(a.vertices[v], [])
                vecs = [[field(str(x)) for x in r] for r in rows]
                spaces.append(Subspace(field, m.dims[v], vecs))
            chain.append(Submodule(m, spaces))
        layers = []
        prev = Submodule.zero(m)
        for sub, ldoc in zip(chain, doc["layers"]):
            counts = {a.vertex_index(str(v)): int(c) for v, c in ldoc["multiplicities"].items()}
            summands = [a.vertex_index(str(v)) for v in ldoc["summands"]]
            cand, _ = fam.level_sum(counts)
            q, _ = layer(prev, sub)
            if cand is None:
                raise InputError("layer with no summands", where)
            blocks = [parse_matrix(field, ldoc["iso"].get(a.vertices[v]), (q.dims[v], cand.dims[v]),
                                   f"{where}:layers.iso") for v in range(a.n)]
            layers.append(LayerCertificate(int(ldoc["level"]), counts, summands, ModuleMap(cand, q, blocks)))
            prev = sub
        return FiltrationCertificate(m, chain, layers, fam.partition)
    except (KeyError, TypeError, ValueError, AlgebraError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed certificate ({exc})", where) from None
