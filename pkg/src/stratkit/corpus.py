"""Seeded random instances ``(T, U, M, partitions)`` and module catalogs.

An instance is produced by drawing a random bound quiver whose vertices are
split into a T side and a U side, with arrows allowed inside each side and
from T to U but never from U to T.  Its path algebra modulo relations is
triangular for that split, so splitting it yields ``T``, ``U`` and a bimodule
``M`` that is well defined by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .algebra import BasicAlgebra
from .exactla import Field
from .modcat import (
    FdModule,
    ModuleMap,
    direct_sum,
    ext1_data,
    ext_realize,
    projective,
    projective_cover,
    simple,
)
from .presentation import PresentationError, compute_basis, presentation_from_parts
from .strat import OrderedPartition, standard_modules
from .triangular import (
    Bipartition,
    Triangular,
    inflate_T,
    inflate_U,
    join_partitions,
    restrict_T,
    restrict_U,
    split_triangular,
)


@dataclass(frozen=True)
class CorpusSpec:
    seed: int = 1
    count: int = 20
    primes: tuple = (2,)
    max_t_vertices: int = 2
    max_u_vertices: int = 2
    max_component_dim: int = 4
    max_total_dim: int = 12
    arrow_prob: float = 0.45
    loop_prob: float = 0.15
    extensions: int = 2
    syzygy_depth: int = 1

    def validate(self):
        if self.count < 0:
            raise ValueError("count must be non-negative")
        if min(self.max_t_vertices, self.max_u_vertices, self.max_component_dim, self.max_total_dim) < 1:
            raise ValueError("bounds must be positive")
        for p in self.primes:
            Field.prime(p)

    def to_json(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.__dict__.items()}


@dataclass
class Instance:
    index: int
    seed: int
    tri: Triangular
    pA: OrderedPartition
    pB: OrderedPartition
    presentation: object = None
    _catalog: object = dc_field(default=None, repr=False)

    @property
    def pC(self) -> OrderedPartition:
        return join_partitions(self.tri, self.pA, self.pB)

    def describe(self) -> dict:
        tri = self.tri
        pres = self.presentation
        return {
            "index": self.index,
            "seed": self.seed,
            "field": tri.lam.field.to_json(),
            "quiver": {
                "vertices": list(pres.vertices),
                "arrows": [[a.name, a.source, a.target] for a in pres.arrows],
                "relations": [[[tri.lam.field.fmt(c), list(path)] for c, path in rel] for rel in pres.relations],
                "nilpotency_bound": pres.nilpotency_bound,
            } if pres is not None else None,
            "bipartition": {"T": list(tri.bipartition.t_side), "U": list(tri.bipartition.u_side)},
            "dims": {"T": tri.T.dim, "U": tri.U.dim, "M": tri.M.total_dim, "Lambda": tri.lam.dim},
            "pA": self.pA.names(tri.U),
            "pB": self.pB.names(tri.T),
        }


def random_partition(rng: random.Random, n: int) -> OrderedPartition:
    order = list(range(n))
    rng.shuffle(order)
    levels, cur = [], []
    for v in order:
        cur.append(v)
        if rng.random() < 0.6:
            levels.append(tuple(cur))
            cur = []
    if cur:
        levels.append(tuple(cur))
    return OrderedPartition(tuple(levels))


def _random_quiver(rng: random.Random, spec: CorpusSpec):
    nT = rng.randint(1, spec.max_t_vertices)
    nU = rng.randint(1, spec.max_u_vertices)
    tv = [f"t{k + 1}" for k in range(nT)]
    uv = [f"u{k + 1}" for k in range(nU)]
    arrows = []

    def add(s, t):
        arrows.append((f"x{len(arrows) + 1}", s, t))

    for side in (tv, uv):
        for s in side:
            for t in side:
                if s == t:
                    if rng.random() < spec.loop_prob:
                        add(s, t)
                elif rng.random() < spec.arrow_prob:
                    add(s, t)
    for s in tv:
        for t in uv:
            k = rng.choices((0, 1, 2), weights=(3, 5, 1))[0]
            for _ in range(k):
                add(s, t)
    return tv, uv, arrows


def _paths_of_length(arrows, k: int) -> list:
    paths = [[a] for a in arrows]
    for _ in range(k - 1):
        paths = [p + [a] for p in paths for a in arrows if a[1] == p[-1][2]]
    return paths


def _random_relations(rng: random.Random, field: Field, arrows, r: int) -> list:
    rels = [[(1, [a[0] for a in p])] for p in _paths_of_length(arrows, r)] if r else []
    by_ends: dict = {}
    for p in _paths_of_length(arrows, 2):
        by_ends.setdefault((p[0][1], p[-1][2]), []).append([a[0] for a in p])
    for group in by_ends.values():
        if rng.random() < 0.5:
            continue
        if len(group) >= 2 and rng.random() < 0.5:
            a, b = rng.sample(group, 2)
            c = field.elements()[rng.randrange(1, field.p)] if field.is_finite else 1
            rels.append([(1, a), (field.norm(-c), b)])
        else:
            rels.append([(1, rng.choice(group))])
    return rels


def _acyclic(vertices, arrows) -> bool:
    succ = {v: [t for _, s, t in arrows if s == v] for v in vertices}
    state = {}

    def visit(v):
        state[v] = 1
        for w in succ[v]:
            if state.get(w) == 1 or (w not in state and not visit(w)):
                return False
        state[v] = 2
        return True

    return all(v in state or visit(v) for v in vertices)


def random_instance(rng: random.Random, spec: CorpusSpec, index: int = 0, seed: int = 0, tries: int = 200) -> Instance:
    for _ in range(tries):
        p = rng.choice(spec.primes)
        field = Field.prime(p)
        tv, uv, arrows = _random_quiver(rng, spec)
        cyclic = not _acyclic(tv + uv, arrows)
        r = rng.choice((2, 3)) if cyclic else rng.choice((0, 0, 2, 3))
        rels = _random_relations(rng, field, arrows, r)
        bound = r - 1 if r else None
        if bound is None and not arrows:
            bound = 1
        try:
            pres = presentation_from_parts(field, tv + uv, arrows, rels, nilpotency_bound=bound,
                                           name=f"inst{index}")
            lam = compute_basis(pres)
        except PresentationError:
            continue
        if lam.dim > spec.max_total_dim:
            continue
        if any(lam.component_dim(s, t) > spec.max_component_dim for s in range(lam.n) for t in range(lam.n)):
            continue
        tri = split_triangular(lam, Bipartition(tuple(tv), tuple(uv)))
        pA = random_partition(rng, tri.U.n)
        pB = random_partition(rng, tri.T.n)
        return Instance(index, seed, tri, pA, pB, pres)
    raise RuntimeError("could not draw an instance within the bounds")


def generate_corpus(spec: CorpusSpec) -> list:
    """Deterministic list of instances; instance ``k`` depends only on ``(seed, k)``."""
    spec.validate()
    out = []
    for k in range(spec.count):
        s = spec.seed * 1_000_003 + k
        out.append(random_instance(random.Random(s), spec, index=k, seed=s))
    return out


# catalogs ------------------------------------------------------------------------


@dataclass
class Catalog:
    lam: list
    U: list
    T: list

    def sizes(self) -> dict:
        return {"Lambda": len(self.lam), "U": len(self.U), "T": len(self.T)}


def _dedupe(mods: list) -> list:
    out = []
    for m in mods:
        if m.is_zero():
            continue
        if not any(o.same_data(m) for o in out if o.dims == m.dims):
            out.append(m)
    return out


def base_modules(a: BasicAlgebra, p: OrderedPartition, rng: random.Random, extensions: int,
                 syzygy_depth: int) -> list:
    """Simples, projectives, standards, a few syzygies and random nonsplit extensions."""
    mods = [simple(a, v) for v in range(a.n)] + [projective(a, v) for v in range(a.n)]
    fam = standard_modules(a, p)
    mods += [fam.deltas[v] for v in range(a.n)]
    frontier = list(mods)
    for _ in range(syzygy_depth):
        nxt = []
        for m in frontier:
            if m.is_zero():
                continue
            om, _ = projective_cover(m).kernel.as_module()
            if not om.is_zero():
                nxt.append(om)
        mods += nxt
        frontier = nxt
    mods = _dedupe(mods)
    small = [m for m in mods if m.total_dim <= 4]
    for _ in range(extensions):
        if not small:
            break
        m, n = rng.choice(small), rng.choice(small)
        data = ext1_data(m, n)
        if not data.class_reps:
            continue
        coeffs = [a.field(rng.randrange(a.field.p or 3)) for _ in data.class_reps]
        if not any(coeffs):
            coeffs[0] = a.field.one
        rep = data.class_reps[0].scale(coeffs[0])
        for f, c in zip(data.class_reps[1:], coeffs[1:]):
            rep = rep + f.scale(c)
        mods.append(ext_realize(m, n, rep, data).middle)
    return _dedupe(mods)


def build_catalog(inst: Instance, extensions: int = 2, syzygy_depth: int = 1) -> Catalog:
    """Catalogs closed under restriction (Λ to U and T) and inflation (U and T to Λ)."""
    if inst._catalog is not None:
        return inst._catalog
    tri = inst.tri
    rng = random.Random(inst.seed ^ 0x5A5A)
    lam_base = base_modules(tri.lam, inst.pC, rng, extensions, syzygy_depth)
    u_mods = _dedupe(base_modules(tri.U, inst.pA, rng, extensions, syzygy_depth)
                     + [restrict_U(tri, L) for L in lam_base])
    t_mods = _dedupe(base_modules(tri.T, inst.pB, rng, extensions, syzygy_depth)
                     + [restrict_T(tri, L) for L in lam_base])
    lam_mods = _dedupe(lam_base + [inflate_U(tri, X) for X in u_mods] + [inflate_T(tri, Y) for Y in t_mods])
    inst._catalog = Catalog(lam_mods, u_mods, t_mods)
    return inst._catalog


def catalog_from_modules(tri: Triangular, lam_mods: list) -> Catalog:
    """Close a list of Λ-modules under restriction and inflation."""
    u_mods = _dedupe([restrict_U(tri, L) for L in lam_mods])
    t_mods = _dedupe([restrict_T(tri, L) for L in lam_mods])
    lam_all = _dedupe(list(lam_mods) + [inflate_U(tri, X) for X in u_mods] + [inflate_T(tri, Y) for Y in t_mods])
    return Catalog(lam_all, u_mods, t_mods)


def random_short_exact(rng: random.Random, mods: list):
    """A nonsplit-or-split short exact sequence ``0 -> n -> E -> m -> 0`` from a catalog."""
    m, n = rng.choice(mods), rng.choice(mods)
    data = ext1_data(m, n)
    if data.class_reps and rng.random() < 0.8:
        rep = data.class_reps[rng.randrange(len(data.class_reps))]
    else:
        rep = ModuleMap.zero(data.omega, n)
    ext = ext_realize(m, n, rep, data)
    return ext.inclusion, ext.projection


def split_sequence(m: FdModule, n: FdModule):
    s, incs, projs = direct_sum([n, m])
    return incs[0], projs[1]
