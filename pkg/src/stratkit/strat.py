"""Ordered partitions, standard modules and Δ-filtrations.

The filtration test walks the chain ``τ_0 ⊆ τ_1 ⊆ ...`` where ``τ_l`` is the
submodule generated by the components ``e_k M`` with ``k`` in levels ``<= l``.
``M`` has a Δ-filtration exactly when every layer ``τ_l / τ_{l-1}`` is a direct
sum of standard modules of level ``l``; the multiplicities are read off the top
of the layer and confirmed by an isomorphism test.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .algebra import BasicAlgebra
from .exactla import Subspace
from .modcat import (
    DEFAULT_CAP,
    FdModule,
    ModuleMap,
    Submodule,
    direct_sum,
    iso_test,
    pd_max,
    projective,
    projective_dimension,
    radical,
    top_vector,
    trace_of_projectives,
)


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class OrderedPartition:
    """Levels of vertex indices, lowest level first."""

    levels: tuple

    @classmethod
    def of(cls, a: BasicAlgebra, groups: Sequence[Sequence]) -> "OrderedPartition":
        levels = tuple(tuple(a.vertex_index(v) for v in g) for g in groups)
        p = cls(levels)
        p.validate(a.n)
        return p

    @classmethod
    def single(cls, a: BasicAlgebra) -> "OrderedPartition":
        return cls((tuple(range(a.n)),))

    @classmethod
    def finest(cls, a: BasicAlgebra, order: Sequence | None = None) -> "OrderedPartition":
        order = range(a.n) if order is None else [a.vertex_index(v) for v in order]
        return cls(tuple((v,) for v in order))

    def validate(self, n: int):
        seen = set()
        for lvl in self.levels:
            if not lvl:
                raise PartitionError("empty level")
            for v in lvl:
                if not 0 <= v < n:
                    raise PartitionError(f"vertex index {v} out of range")
                if v in seen:
                    raise PartitionError(f"vertex index {v} appears twice")
                seen.add(v)
        if len(seen) != n:
            missing = sorted(set(range(n)) - seen)
            raise PartitionError(f"partition misses vertex indices {missing}")

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level_of(self, v: int) -> int:
        for l, lvl in enumerate(self.levels):
            if v in lvl:
                return l
        raise PartitionError(f"vertex index {v} not in partition")

    def below(self, l: int) -> tuple:
        return tuple(v for lvl in self.levels[:l] for v in lvl)

    def upto(self, l: int) -> tuple:
        return self.below(l + 1)

    def names(self, a: BasicAlgebra) -> list:
        return [[a.vertices[v] for v in lvl] for lvl in self.levels]


@dataclass
class StandardFamily:
    algebra: BasicAlgebra
    partition: OrderedPartition
    projectives: dict  # vertex -> P_v
    traces: dict  # vertex -> trace of lower projectives in P_v
    deltas: dict  # vertex -> Δ_v
    quotients: dict  # vertex -> P_v -> Δ_v

    def delta(self, v) -> FdModule:
        return self.deltas[self.algebra.vertex_index(v)]

    def level_sum(self, counts: dict) -> tuple:
        """Direct sum of ``Δ_v^{counts[v]}`` in vertex order, with the summand list."""
        pieces = []
        for v in sorted(counts):
            pieces.extend([v] * counts[v])
        if not pieces:
            return None, []
        s, _, _ = direct_sum([self.deltas[v] for v in pieces])
        return s, pieces


def standard_modules(a: BasicAlgebra, p: OrderedPartition) -> StandardFamily:
    p.validate(a.n)
    projs, traces, deltas, quots = {}, {}, {}, {}
    for l, lvl in enumerate(p.levels):
        lower = p.below(l)
        for v in lvl:
            pv = projective(a, v)
            tr = trace_of_projectives(lower, pv)
            d, q = tr.quotient()
            d.name = f"Delta({a.vertices[v]})"
            projs[v], traces[v], deltas[v], quots[v] = pv, tr, d, q
    return StandardFamily(a, p, projs, traces, deltas, quots)


def tau_chain(m: FdModule, p: OrderedPartition) -> list:
    """``[τ_0, ..., τ_{L-1}]`` with ``τ_l`` generated by levels ``<= l``."""
    return [trace_of_projectives(p.upto(l), m) for l in range(p.depth)]


def layer(lower: Submodule, upper: Submodule) -> tuple:
    """``upper / lower`` as a module, with the projection from ``upper`` (as a module)."""
    sub, incl = upper.as_module()
    spaces = [
        Subspace(sub.field, sub.dims[v], [upper.spaces[v].coordinates(x) for x in lower.spaces[v].basis])
        for v in range(sub.algebra.n)
    ]
    q, proj = Submodule(sub, spaces).quotient()
    return q, proj


@dataclass
class LayerCertificate:
    level: int
    counts: dict  # vertex -> multiplicity
    summands: list  # vertex of each Δ summand in the direct sum, in order
    iso: ModuleMap  # ⊕ Δ -> layer

    def to_json(self, a: BasicAlgebra) -> dict:
        return {
            "level": self.level,
            "multiplicities": {a.vertices[v]: c for v, c in sorted(self.counts.items())},
            "summands": [a.vertices[v] for v in self.summands],
            "iso": self.iso.to_json(),
        }


@dataclass
class FiltrationCertificate:
    module: FdModule
    chain: list  # strictly increasing submodules, ending at the whole module
    layers: list  # LayerCertificate for each step
    partition: OrderedPartition

    @property
    def filtered(self) -> bool:
        return True

    def multiplicities(self) -> dict:
        out: dict = {}
        for lc in self.layers:
            for v, c in lc.counts.items():
                out[v] = out.get(v, 0) + c
        return out

    def to_json(self) -> dict:
        a = self.module.algebra
        return {
            "filtered": True,
            "chain_dims": [list(s.dims) for s in self.chain],
            "chain": [s.to_json() for s in self.chain],
            "layers": [lc.to_json(a) for lc in self.layers],
            "multiplicities": {a.vertices[v]: c for v, c in sorted(self.multiplicities().items())},
        }


@dataclass
class FiltrationFailure:
    module: FdModule
    level: int
    layer: FdModule
    reason: str
    exact: bool = True

    @property
    def filtered(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {
            "filtered": False,
            "level": self.level,
            "layer_dims": list(self.layer.dims),
            "reason": self.reason,
            "exact": self.exact,
        }


def match_layer(q: FdModule, level: int, fam: StandardFamily, seed: int = 0):
    """Identify ``q`` with a sum of level-``level`` standards; returns a LayerCertificate or a reason."""
    top = top_vector(q)
    lvl = set(fam.partition.levels[level])
    stray = [v for v, c in enumerate(top) if c and v not in lvl]
    if stray:
        names = [fam.algebra.vertices[v] for v in stray]
        return None, f"layer top has simples outside level {level}: {names}", True
    counts = {v: top[v] for v in sorted(lvl) if top[v]}
    cand, pieces = fam.level_sum(counts)
    if cand is None:
        return None, "empty layer", True
    if cand.dims != q.dims:
        sums = " + ".join(f"{c}*Delta({fam.algebra.vertices[v]}){fam.deltas[v].dims}" for v, c in counts.items())
        return None, f"layer dimension vector {q.dims} differs from {sums} = {cand.dims}", True
    res = iso_test(cand, q, seed=seed)
    if not res.isomorphic:
        return None, f"layer is not isomorphic to the predicted sum of standards: {res.reason}", res.exact
    return LayerCertificate(level, counts, pieces, res.map), "", True


def delta_filtration(m: FdModule, fam: StandardFamily, seed: int = 0):
    """Return a :class:`FiltrationCertificate` or the first failing :class:`FiltrationFailure`."""
    if m.algebra is not fam.algebra:
        raise ValueError("module and standard family live over different algebras")
    chain_all = tau_chain(m, fam.partition)
    chain, layers = [], []
    prev = Submodule.zero(m)
    for l, tau in enumerate(chain_all):
        if tau.total_dim == prev.total_dim:
            continue
        q, _ = layer(prev, tau)
        lc, reason, exact = match_layer(q, l, fam, seed)
        if lc is None:
            return FiltrationFailure(m, l, q, reason, exact)
        chain.append(tau)
        layers.append(lc)
        prev = tau
    return FiltrationCertificate(m, chain, layers, fam.partition)


def is_filtered(m: FdModule, fam: StandardFamily) -> bool:
    return delta_filtration(m, fam).filtered


def check_certificate(cert: FiltrationCertificate, fam: StandardFamily) -> bool:
    """Replay a certificate: chain shape, closure, and every layer isomorphism."""
    m = cert.module
    if len(cert.chain) != len(cert.layers):
        return False
    prev = Submodule.zero(m)
    last_level = -1
    for sub, lc in zip(cert.chain, cert.layers):
        if sub.module is not m or not sub.is_closed():
            return False
        if not (prev <= sub) or sub.total_dim <= prev.total_dim:
            return False
        if lc.level < last_level:
            return False
        last_level = lc.level
        if any(fam.partition.level_of(v) != lc.level for v in lc.summands):
            return False
        counted: dict = {}
        for v in lc.summands:
            counted[v] = counted.get(v, 0) + 1
        if counted != lc.counts:
            return False
        cand, _ = fam.level_sum(lc.counts)
        q, _ = layer(prev, sub)
        f = lc.iso
        if cand is None or f.source.dims != cand.dims or f.target.dims != q.dims:
            return False
        g = ModuleMap(cand, q, f.blocks)
        if not g.is_intertwiner() or not g.is_isomorphism():
            return False
        prev = sub
    return prev.is_whole()


def multiplicities(cert: FiltrationCertificate) -> dict:
    return cert.multiplicities()


@dataclass
class StratificationVerdict:
    holds: bool
    certificates: dict = dc_field(default_factory=dict)  # vertex -> certificate
    counterexample: FiltrationFailure | None = None
    counterexample_vertex: int | None = None

    def __bool__(self):
        return self.holds

    def to_json(self, a: BasicAlgebra) -> dict:
        out = {
            "standardly_stratified": self.holds,
            "certificates": {a.vertices[v]: c.to_json() for v, c in sorted(self.certificates.items())},
        }
        if self.counterexample is not None:
            out["counterexample"] = {"projective": a.vertices[self.counterexample_vertex],
                                     **self.counterexample.to_json()}
        return out


def is_standardly_stratified(a: BasicAlgebra, p: OrderedPartition, fam: StandardFamily | None = None,
                             stop_early: bool = True) -> StratificationVerdict:
    fam = fam or standard_modules(a, p)
    verdict = StratificationVerdict(True)
    for v in range(a.n):
        res = delta_filtration(fam.projectives[v], fam)
        if res.filtered:
            verdict.certificates[v] = res
        elif verdict.counterexample is None:
            verdict.holds = False
            verdict.counterexample = res
            verdict.counterexample_vertex = v
            if stop_early:
                break
    return verdict


def top_is_simple(fam: StandardFamily, v: int) -> bool:
    d = fam.deltas[v]
    top = top_vector(d)
    return top == tuple(1 if w == v else 0 for w in range(fam.algebra.n))


def trace_in_radical(fam: StandardFamily, v: int) -> bool:
    return fam.traces[v] <= radical(fam.projectives[v])


def pd_of_family(fam: StandardFamily, cap: int = DEFAULT_CAP):
    """``pd(Δ)``: the largest projective dimension of a standard module."""
    return pd_max(projective_dimension(d, cap) for d in fam.deltas.values())
