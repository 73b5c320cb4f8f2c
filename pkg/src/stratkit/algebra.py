"""Basic algebras with finitely many idempotents, stored by structure constants.

A basis element ``x`` lives in a single component ``e_t A e_s``; we call ``s``
its source and ``t`` its target, so ``x`` acts on a left module as a map
``e_s M -> e_t M``.  The product ``y * x`` (first ``x``, then ``y``) is only
nonzero when ``source(y) == target(x)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Mapping, Sequence

from .exactla import Field


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BasicAlgebra:
    """Finite-dimensional algebra ``A = ⊕ e_j A e_i`` with a chosen basis.

    ``mult`` maps a composable pair ``(y, x)`` of basis indices to the sparse
    expansion of ``y * x`` as ``((z, coef), ...)``; absent pairs multiply to 0.
    ``generators`` generate the radical and ``words[x]`` writes each basis
    element as a product of generators in application order (empty for the
    idempotents).
    """

    field: Field
    vertices: tuple
    labels: tuple
    source: tuple
    target: tuple
    idempotents: tuple
    mult: Mapping
    generators: tuple
    words: tuple
    name: str = ""
    _meta: dict = dc_field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        n = len(self.labels)
        if not (len(self.source) == len(self.target) == len(self.words) == n):
            raise AlgebraError("basis tables have inconsistent lengths")
        if len(self.idempotents) != len(self.vertices):
            raise AlgebraError("need exactly one idempotent per vertex")
        if len(set(self.labels)) != n:
            raise AlgebraError("basis labels must be unique")
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("vertex names must be unique")
        for v, e in enumerate(self.idempotents):
            if self.source[e] != v or self.target[e] != v:
                raise AlgebraError(f"idempotent of vertex {self.vertices[v]} is not in e_v A e_v")

    def __repr__(self):
        return f"BasicAlgebra({self.name or '?'}: {len(self.vertices)} vertices, dim {self.dim}, {self.field!r})"

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def _vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _label_index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def vertex_index(self, v) -> int:
        if isinstance(v, int) and v not in self._vertex_index:
            if 0 <= v < self.n:
                return v
        try:
            return self._vertex_index[v]
        except KeyError:
            raise AlgebraError(f"unknown vertex {v!r}") from None

    def label_index(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise AlgebraError(f"unknown basis label {label!r}") from None

    @cached_property
    def is_idempotent(self) -> tuple:
        s = set(self.idempotents)
        return tuple(x in s for x in range(self.dim))

    @cached_property
    def _components(self) -> dict:
        comp: dict = {}
        for x in range(self.dim):
            comp.setdefault((self.source[x], self.target[x]), []).append(x)
        return {k: tuple(v) for k, v in comp.items()}

    def component(self, source: int, target: int) -> tuple:
        """Basis indices spanning ``e_target A e_source``."""
        return self._components.get((source, target), ())

    def component_dim(self, source: int, target: int) -> int:
        return len(self.component(source, target))

    @cached_property
    def _position(self) -> tuple:
        pos = [0] * self.dim
        for idxs in self._components.values():
            for k, x in enumerate(idxs):
                pos[x] = k
        return tuple(pos)

    def position(self, x: int) -> int:
        """Index of basis element ``x`` inside its own component."""
        return self._position[x]

    def product(self, y: int, x: int) -> tuple:
        """Sparse expansion of ``y * x``."""
        if self.source[y] != self.target[x]:
            return ()
        return self.mult.get((y, x), ())

    def radical_basis(self) -> tuple:
        return tuple(x for x in range(self.dim) if not self.is_idempotent[x])

    def check_associativity(self) -> list:
        """All basis triples ``(z, y, x)`` where ``(zy)x != z(yx)``."""
        p = self.field.p
        bad = []
        for x in range(self.dim):
            for y in range(self.dim):
                if self.source[y] != self.target[x]:
                    continue
                yx = self.product(y, x)
                for z in range(self.dim):
                    if self.source[z] != self.target[y]:
                        continue
                    left: dict = {}
                    for w, c in self.product(z, y):
                        for u, d in self.product(w, x):
                            left[u] = left.get(u, 0) + c * d
                    right: dict = {}
                    for w, c in yx:
                        for u, d in self.product(z, w):
                            right[u] = right.get(u, 0) + c * d
                    if _clean(left, p) != _clean(right, p):
                        bad.append((z, y, x))
        return bad

    def check_units(self) -> list:
        """Basis elements where ``e_t x = x = x e_s`` fails."""
        bad = []
        one = self.field.one
        for x in range(self.dim):
            e_s = self.idempotents[self.source[x]]
            e_t = self.idempotents[self.target[x]]
            if self.product(e_t, x) != ((x, one),) or self.product(x, e_s) != ((x, one),):
                bad.append(x)
        return bad

    def to_json(self) -> dict:
        f = self.field.fmt
        return {
            "field": self.field.to_json(),
            "vertices": list(self.vertices),
            "basis": [
                {"label": self.labels[x], "source": self.vertices[self.source[x]],
                 "target": self.vertices[self.target[x]]}
                for x in range(self.dim)
            ],
            "idempotents": [self.labels[e] for e in self.idempotents],
            "generators": [self.labels[g] for g in self.generators],
            "words": {self.labels[x]: [self.labels[g] for g in self.words[x]]
                      for x in range(self.dim) if self.words[x]},
            "mult": [
                [self.labels[y], self.labels[x], [[self.labels[z], f(c)] for z, c in terms]]
                for (y, x), terms in sorted(self.mult.items())
                if terms and not (self.is_idempotent[y] or self.is_idempotent[x])
            ],
        }


def _clean(d: dict, p: int) -> dict:
    if p:
        return {k: v % p for k, v in d.items() if v % p}
    return {k: v for k, v in d.items() if v}


def make_algebra(
    field: Field,
    vertices: Sequence,
    labels: Sequence[str],
    source: Sequence[int],
    target: Sequence[int],
    idempotents: Sequence[int],
    products: Mapping,
    generators: Sequence[int] | None = None,
    words: Sequence[Sequence[int]] | None = None,
    name: str = "",
) -> BasicAlgebra:
    """Assemble an algebra; idempotent products are filled in automatically.

    ``products`` gives ``y * x`` for composable pairs of non-idempotent basis
    elements as a dict ``{z: coef}`` or a sequence of ``(z, coef)``.
    """
    one = field.one
    idem = set(idempotents)
    mult = {}
    for x in range(len(labels)):
        mult[(idempotents[target[x]], x)] = ((x, one),)
        mult[(x, idempotents[source[x]])] = ((x, one),)
    for (y, x), terms in products.items():
        if y in idem or x in idem:
            continue
        if source[y] != target[x]:
            raise AlgebraError(f"product {labels[y]}*{labels[x]} is not composable")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for z, c in items:
            c = field(c)
            if source[z] != source[x] or target[z] != target[y]:
                raise AlgebraError(f"product {labels[y]}*{labels[x]} lands in the wrong component")
            acc[z] = field.norm(acc.get(z, field.zero) + c)
        clean = tuple(sorted((z, c) for z, c in acc.items() if c))
        if clean:
            mult[(y, x)] = clean
    if generators is None:
        generators = tuple(x for x in range(len(labels)) if x not in idem)
    if words is None:
        gset = set(generators)
        words = tuple(() if x in idem else (x,) for x in range(len(labels)))
        if any(x not in gset and x not in idem for x in range(len(labels))):
            raise AlgebraError("words are required when generators do not span the radical basis")
    return BasicAlgebra(
        field=field,
        vertices=tuple(vertices),
        labels=tuple(labels),
        source=tuple(source),
        target=tuple(target),
        idempotents=tuple(idempotents),
        mult=mult,
        generators=tuple(generators),
        words=tuple(tuple(w) for w in words),
        name=name,
    )


def idempotent_truncation(a: BasicAlgebra, vertices: Sequence, name: str = "") -> tuple:
    """The corner algebra ``eAe`` for ``e`` the sum of the given idempotents.

    Returns ``(algebra, index_map)`` where ``index_map`` sends basis indices
    of the corner to basis indices of ``a``.  Words are inherited, so the
    vertex set must be closed under every path between its members.
    """
    vs = [a.vertex_index(v) for v in vertices]
    vpos = {v: k for k, v in enumerate(vs)}
    keep = [x for x in range(a.dim) if a.source[x] in vpos and a.target[x] in vpos]
    new = {x: k for k, x in enumerate(keep)}
    products = {}
    for y in keep:
        for x in keep:
            if a.source[y] != a.target[x]:
                continue
            terms = a.product(y, x)
            if terms:
                products[(new[y], new[x])] = [(new[z], c) for z, c in terms]
    words = []
    for x in keep:
        w = a.words[x]
        if any(g not in new for g in w):
            raise AlgebraError(f"word of {a.labels[x]} leaves the corner")
        words.append(tuple(new[g] for g in w))
    gens = tuple(new[g] for g in a.generators if g in new)
    alg = make_algebra(
        a.field,
        [a.vertices[v] for v in vs],
        [a.labels[x] for x in keep],
        [vpos[a.source[x]] for x in keep],
        [vpos[a.target[x]] for x in keep],
        [new[a.idempotents[v]] for v in vs],
        products,
        generators=gens,
        words=words,
        name=name,
    )
    return alg, tuple(keep)
