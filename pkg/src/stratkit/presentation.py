"""Quiver-with-relations presentations and their structure-constant algebras."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .algebra import AlgebraError, BasicAlgebra, make_algebra
from .exactla import Field, Matrix, Subspace, solve


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class QuiverPresentation:
    """Quiver, admissible relations and a bound ``L`` on nonzero path length.

    A relation is a tuple of terms ``(coef, path)``; ``path`` lists arrow
    names in the order they are traversed.
    """

    field: Field
    vertices: tuple
    arrows: tuple
    relations: tuple
    nilpotency_bound: int
    name: str = ""

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise PresentationError("duplicate vertex name")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise PresentationError("duplicate arrow name")
        if set(names) & set(self.vertices):
            raise PresentationError("arrow names must differ from vertex names")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise PresentationError(f"arrow {a.name} has an unknown endpoint")
        if self.nilpotency_bound < 1:
            raise PresentationError("nilpotency_bound must be at least 1")
        arrows = {a.name: a for a in self.arrows}
        for k, rel in enumerate(self.relations):
            if not rel:
                raise PresentationError(f"relation {k} is empty")
            ends = set()
            for coef, path in rel:
                if len(path) < 2:
                    raise PresentationError(f"relation {k} has a term of length {len(path)} (not admissible)")
                for name in path:
                    if name not in arrows:
                        raise PresentationError(f"relation {k} uses unknown arrow {name!r}")
                for a, b in zip(path, path[1:]):
                    if arrows[a].target != arrows[b].source:
                        raise PresentationError(f"relation {k}: path {'.'.join(path)} is not composable")
                ends.add((arrows[path[0]].source, arrows[path[-1]].target))
            if len(ends) != 1:
                raise PresentationError(f"relation {k} mixes non-parallel paths")

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise PresentationError(f"unknown arrow {name!r}")


def parse_algebra(doc: dict, name: str = "") -> QuiverPresentation:
    """Validate an algebra document with keys field, vertices, arrows, relations, nilpotency_bound."""
    try:
        field = Field.from_json(doc.get("field", {"kind": "rational"}))
    except (KeyError, TypeError, ValueError) as exc:
        raise PresentationError(f"field: {exc}") from None
    try:
        vertices = tuple(str(v) for v in doc["vertices"])
        arrows = tuple(
            Arrow(str(a["name"]), str(a["source"]), str(a["target"])) for a in doc.get("arrows", [])
        )
        relations = []
        for rel in doc.get("relations", []):
            terms = []
            for t in rel:
                if isinstance(t, dict):
                    coef, path = t.get("coef", "1"), t["path"]
                else:
                    coef, path = "1", t
                terms.append((field(str(coef)), tuple(str(p) for p in path)))
            relations.append(tuple(terms))
        bound = doc.get("nilpotency_bound")
        if bound is None:
            bound = _default_bound(vertices, arrows)
        bound = int(bound)
    except KeyError as exc:
        raise PresentationError(f"missing key {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise PresentationError(str(exc)) from None
    return QuiverPresentation(field, vertices, arrows, tuple(relations), bound, name=name)


def _default_bound(vertices, arrows) -> int:
    # longest path in an acyclic quiver; cyclic quivers must state a bound
    succ = {v: [a.target for a in arrows if a.source == v] for v in vertices}
    memo: dict = {}

    def longest(v, stack):
        if v in stack:
            raise PresentationError("nilpotency_bound is required for quivers with oriented cycles")
        if v not in memo:
            memo[v] = max((1 + longest(w, stack | {v}) for w in succ[v]), default=0)
        return memo[v]

    return max(1, max((longest(v, frozenset()) for v in vertices), default=0))


def _paths(p: QuiverPresentation, max_len: int) -> list:
    """All paths of length <= max_len as (source, target, arrow-name tuple)."""
    out = [(v, v, ()) for v in p.vertices]
    frontier = [(a.source, a.target, (a.name,)) for a in p.arrows]
    length = 1
    while frontier and length <= max_len:
        out.extend(frontier)
        if length == max_len:
            break
        nxt = []
        for s, t, w in frontier:
            for a in p.arrows:
                if a.source == t:
                    nxt.append((s, a.target, w + (a.name,)))
        frontier = nxt
        length += 1
    return out


def _path_key(path):
    s, t, w = path
    return (len(w), w)


def compute_basis(p: QuiverPresentation) -> BasicAlgebra:
    """Basis of paths modulo relations, with path concatenation as product.

    Works in ``kQ / rad^{L+2}`` and requires every path of length ``L+1`` to
    lie in the relation ideal there; otherwise the algebra is not
    finite-dimensional under the stated bound.
    """
    field = p.field
    L = p.nilpotency_bound
    top = L + 1
    paths = _paths(p, top)
    by_comp: dict = {}
    for path in paths:
        by_comp.setdefault((path[0], path[1]), []).append(path)
    for comp in by_comp.values():
        comp.sort(key=_path_key)
    vertex_paths = {(s, t): comp for (s, t), comp in by_comp.items()}

    def index_of(s, t, w):
        comp = vertex_paths[(s, t)]
        for k, path in enumerate(comp):
            if path[2] == w:
                return k
        raise KeyError(w)

    index_cache: dict = {}

    def idx(s, t, w):
        key = (s, t, w)
        if key not in index_cache:
            index_cache[key] = index_of(s, t, w)
        return index_cache[key]

    # ideal generated by relations, truncated to length <= L+1
    ideal: dict = {key: [] for key in by_comp}
    prefixes = paths
    for rel in p.relations:
        rs = p.arrow(rel[0][1][0]).source
        rt = p.arrow(rel[0][1][-1]).target
        shortest = min(len(w) for _, w in rel)
        for q in prefixes:  # applied before the relation: q ends at rs
            if q[1] != rs:
                continue
            for post in prefixes:  # applied after: starts at rt
                if post[0] != rt:
                    continue
                if len(q[2]) + shortest + len(post[2]) > top:
                    continue
                s, t = q[0], post[1]
                vec = [field.zero] * len(by_comp[(s, t)])
                nonzero = False
                for coef, w in rel:
                    full = q[2] + w + post[2]
                    if len(full) > top:
                        continue
                    k = idx(s, t, full)
                    vec[k] = field.norm(vec[k] + coef)
                    nonzero = nonzero or bool(vec[k])
                if nonzero:
                    ideal[(s, t)].append(vec)

    comp_ideal = {key: Subspace(field, len(comp), ideal[key]) for key, comp in by_comp.items()}

    # every length-(L+1) path must vanish
    for key, comp in by_comp.items():
        for k, (_, _, w) in enumerate(comp):
            if len(w) == top:
                e = [field.zero] * len(comp)
                e[k] = field.one
                if not comp_ideal[key].contains(e):
                    raise PresentationError(
                        f"not finite-dimensional under bound L={L}: path {'.'.join(w)} survives"
                    )

    # choose basis paths: first independent path in (length, lexicographic) order
    chosen: dict = {}
    for key, comp in by_comp.items():
        span = comp_ideal[key]
        picks = []
        for k, (_, _, w) in enumerate(comp):
            e = [field.zero] * len(comp)
            e[k] = field.one
            if not span.contains(e):
                picks.append(k)
                span = span.extend([e])
        chosen[key] = picks

    vindex = {v: i for i, v in enumerate(p.vertices)}
    labels, source, target, words_named = [], [], [], []
    basis_of = {}
    idempotents = [None] * len(p.vertices)
    order = sorted(
        ((key, k) for key, picks in chosen.items() for k in picks),
        key=lambda item: (len(by_comp[item[0]][item[1]][2]),
                          vindex[item[0][0]], vindex[item[0][1]], by_comp[item[0]][item[1]][2]),
    )
    for key, k in order:
        s, t, w = by_comp[key][k]
        x = len(labels)
        basis_of[(s, t, w)] = x
        labels.append(".".join(w) if w else f"e_{s}")
        source.append(vindex[s])
        target.append(vindex[t])
        words_named.append(w)
        if not w:
            idempotents[vindex[s]] = x
    if len(set(labels)) != len(labels):
        raise PresentationError("basis labels collide with arrow names")

    # reduction of a path vector into basis coordinates, per component
    reducers = {}
    for key, comp in by_comp.items():
        picks = chosen[key]
        rows = []
        for k in picks:
            e = [field.zero] * len(comp)
            e[k] = field.one
            rows.append(e)
        rows.extend(comp_ideal[key].basis)
        if rows:
            reducers[key] = Matrix.from_rows(field, rows, len(comp)).T
        else:
            reducers[key] = None

    def reduce_path(s, t, w):
        if len(w) > top:
            return ()
        comp = by_comp[(s, t)]
        k = idx(s, t, w)
        rhs = Matrix(field, len(comp), 1, [(field.one if i == k else field.zero,) for i in range(len(comp))])
        coeffs = solve(reducers[(s, t)], rhs).particular.column(0)
        picks = chosen[(s, t)]
        return tuple(
            (basis_of[(s, t, comp[picks[i]][2])], c) for i, c in enumerate(coeffs[: len(picks)]) if c
        )

    products = {}
    for y in range(len(labels)):
        for x in range(len(labels)):
            if source[y] != target[x] or not words_named[x] or not words_named[y]:
                continue
            s, t = p.vertices[source[x]], p.vertices[target[y]]
            w = words_named[x] + words_named[y]
            terms = reduce_path(s, t, w)
            if terms:
                products[(y, x)] = terms
    arrow_idx = {}
    for a in p.arrows:
        arrow_idx[a.name] = basis_of[(a.source, a.target, (a.name,))]
    words = [tuple(arrow_idx[n] for n in w) for w in words_named]
    try:
        alg = make_algebra(
            field, p.vertices, labels, source, target, idempotents, products,
            generators=[arrow_idx[a.name] for a in p.arrows], words=words, name=p.name,
        )
    except AlgebraError as exc:
        raise PresentationError(str(exc)) from None
    alg._meta["presentation"] = p
    return alg


@dataclass
class BasicReport:
    hom_finite: bool
    primitive: dict
    non_isomorphic: bool
    witnesses: list
    assumptions: list
    probabilistic: bool = False

    @property
    def basic(self) -> bool:
        return self.hom_finite and all(self.primitive.values()) and self.non_isomorphic

    def failures(self) -> list:
        out = [f"e_{v} not primitive" for v, ok in self.primitive.items() if not ok]
        out += [f"A e_{a} ≅ A e_{b}" for a, b in self.witnesses]
        return out

    def to_json(self) -> dict:
        return {
            "basic": self.basic,
            "hom_finite": self.hom_finite,
            "primitive": self.primitive,
            "projectives_pairwise_non_isomorphic": self.non_isomorphic,
            "isomorphic_pairs": [list(w) for w in self.witnesses],
            "probabilistic": self.probabilistic,
            "assumptions": self.assumptions,
        }


def _is_local_corner(a: BasicAlgebra, v: int) -> bool:
    """``e_v A e_v`` is local iff its non-idempotent basis spans a nilpotent ideal."""
    rad = [x for x in a.component(v, v) if not a.is_idempotent[x]]
    if not rad:
        return True
    field = a.field
    pos = {x: k for k, x in enumerate(rad)}
    e = a.idempotents[v]
    # closure and nilpotency of span(rad) under multiplication
    current = Subspace.full(field, len(rad))
    for _ in range(len(rad) + 1):
        vecs = []
        for vec in current.basis:
            for y in rad:
                out = [field.zero] * len(rad)
                for x, c in zip(rad, vec):
                    if not c:
                        continue
                    for z, d in a.product(y, x):
                        if z == e:
                            return False
                        if z not in pos:
                            return False
                        out[pos[z]] = field.norm(out[pos[z]] + c * d)
                vecs.append(out)
        nxt = Subspace(field, len(rad), vecs)
        if nxt.dim == 0:
            return True
        if nxt == current:
            return False
        current = nxt
    return False


def validate_basic(a: BasicAlgebra, seed: int = 0) -> BasicReport:
    """Hom-finiteness, primitivity of each idempotent, pairwise non-isomorphic projectives."""
    from .modcat import iso_test, projective

    primitive = {a.vertices[v]: _is_local_corner(a, v) for v in range(a.n)}
    projs = [projective(a, v) for v in range(a.n)]
    witnesses = []
    probabilistic = False
    for i, j in itertools.combinations(range(a.n), 2):
        res = iso_test(projs[i], projs[j], seed=seed)
        if res.isomorphic:
            witnesses.append((a.vertices[i], a.vertices[j]))
        elif not res.exact:
            probabilistic = True
    return BasicReport(
        hom_finite=True,
        primitive=primitive,
        non_isomorphic=not witnesses,
        witnesses=witnesses,
        assumptions=[
            "Hom-finite: every component e_j A e_i is finite-dimensional by construction",
            "primitivity: the radical of e_i A e_i is spanned by its non-idempotent basis elements",
        ],
        probabilistic=probabilistic,
    )


def presentation_from_parts(
    field: Field,
    vertices: Sequence[str],
    arrows: Sequence[tuple],
    relations: Sequence = (),
    nilpotency_bound: int | None = None,
    name: str = "",
) -> QuiverPresentation:
    """Convenience constructor used by tests and the corpus generator."""
    doc = {
        "field": field.to_json(),
        "vertices": list(vertices),
        "arrows": [{"name": n, "source": s, "target": t} for n, s, t in arrows],
        "relations": [
            [{"coef": field.fmt(field(c)), "path": list(path)} for c, path in rel] for rel in relations
        ],
    }
    if nilpotency_bound is not None:
        doc["nilpotency_bound"] = nilpotency_bound
    return parse_algebra(doc, name=name)
