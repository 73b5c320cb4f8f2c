"""Finite-dimensional left modules over a :class:`BasicAlgebra`.

A module is stored as its vertex components ``e_i M`` (dimension ``dims[i]``)
together with one matrix per algebra basis element.  Everything here is exact;
the only randomised routine is the invertible-element search in
:func:`iso_test`, which is seeded and labels its answers honestly.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .algebra import BasicAlgebra
from .exactla import (
    Matrix,
    Subspace,
    block_diagonal,
    nullspace,
    solve,
)

DEFAULT_CAP = 32


class ModuleError(ValueError):
    pass


class FdModule:
    """Left module ``M = ⊕ e_i M`` with an action matrix for every basis element."""

    __slots__ = ("algebra", "dims", "action", "name", "__weakref__")

    def __init__(self, algebra: BasicAlgebra, dims: Sequence[int], action: dict, name: str = "", check: bool = True):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        self.action = action
        self.name = name
        if len(self.dims) != algebra.n:
            raise ModuleError(f"expected {algebra.n} component dimensions, got {len(self.dims)}")
        if check:
            self.verify()

    @classmethod
    def from_generators(cls, algebra: BasicAlgebra, dims: Sequence[int], gens: dict, name: str = "",
                        check: bool = True) -> "FdModule":
        """Build all action matrices from the generator matrices via the algebra's words."""
        dims = tuple(dims)
        field = algebra.field
        action = {}
        for g in algebra.generators:
            s, t = algebra.source[g], algebra.target[g]
            m = gens.get(g)
            if m is None:
                m = Matrix.zeros(field, dims[t], dims[s])
            if m.shape != (dims[t], dims[s]):
                raise ModuleError(
                    f"matrix for {algebra.labels[g]} has shape {m.shape}, expected {(dims[t], dims[s])}"
                )
            action[g] = m
        for x in range(algebra.dim):
            if x in action:
                continue
            s, t = algebra.source[x], algebra.target[x]
            word = algebra.words[x]
            if not word:
                action[x] = Matrix.identity(field, dims[s])
                continue
            m = action[word[0]]
            for g in word[1:]:
                m = action[g] @ m
            action[x] = m
        return cls(algebra, dims, action, name=name, check=check)

    def verify(self):
        a = self.algebra
        field = a.field
        for x in range(a.dim):
            m = self.action.get(x)
            if m is None:
                raise ModuleError(f"missing action of {a.labels[x]}")
            if m.shape != (self.dims[a.target[x]], self.dims[a.source[x]]):
                raise ModuleError(f"action of {a.labels[x]} has wrong shape {m.shape}")
        for v, e in enumerate(a.idempotents):
            if self.action[e] != Matrix.identity(field, self.dims[v]):
                raise ModuleError(f"idempotent of {a.vertices[v]} does not act as the identity")
        for (y, x), terms in a.mult.items():
            if a.is_idempotent[y] or a.is_idempotent[x]:
                continue
            if self.dims[a.source[x]] == 0 or self.dims[a.target[y]] == 0:
                continue
            lhs = self.action[y] @ self.action[x]
            rhs = Matrix.zeros(field, lhs.rows, lhs.cols)
            for z, c in terms:
                rhs = rhs + self.action[z].scale(c)
            if lhs != rhs:
                raise ModuleError(f"action violates {a.labels[y]}*{a.labels[x]}")
        # pairs multiplying to zero
        for y in a.radical_basis():
            for x in a.radical_basis():
                if a.source[y] != a.target[x] or (y, x) in a.mult:
                    continue
                if self.dims[a.source[x]] == 0 or self.dims[a.target[y]] == 0:
                    continue
                if not (self.action[y] @ self.action[x]).is_zero():
                    raise ModuleError(f"action violates {a.labels[y]}*{a.labels[x]} = 0")

    @property
    def field(self):
        return self.algebra.field

    @property
    def dim_vector(self) -> tuple:
        return self.dims

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return not any(self.dims)

    def offsets(self) -> tuple:
        out, acc = [], 0
        for d in self.dims:
            out.append(acc)
            acc += d
        return tuple(out)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"FdModule({label.strip() or 'M'}: dims={self.dims})"

    def same_data(self, other: "FdModule") -> bool:
        return (
            self.algebra is other.algebra
            and self.dims == other.dims
            and all(self.action[x] == other.action[x] for x in range(self.algebra.dim))
        )

    def to_json(self) -> dict:
        a = self.algebra
        return {
            "dims": {a.vertices[v]: d for v, d in enumerate(self.dims)},
            "action": {a.labels[g]: self.action[g].to_json() for g in a.generators},
        }


def zero_module(a: BasicAlgebra) -> FdModule:
    field = a.field
    return FdModule(a, (0,) * a.n, {x: Matrix.zeros(field, 0, 0) for x in range(a.dim)}, check=False)


def _check_same_algebra(*mods):
    a = mods[0].algebra
    for m in mods[1:]:
        if m.algebra is not a:
            raise ModuleError("modules live over different algebras")


class ModuleMap:
    """Homomorphism given by per-vertex blocks ``f_i : e_i M -> e_i N``."""

    __slots__ = ("source", "target", "blocks")

    def __init__(self, source: FdModule, target: FdModule, blocks: Sequence[Matrix], check: bool = False):
        _check_same_algebra(source, target)
        self.source = source
        self.target = target
        self.blocks = tuple(blocks)
        if check:
            for v, b in enumerate(self.blocks):
                if b.shape != (target.dims[v], source.dims[v]):
                    raise ModuleError(f"block {v} has shape {b.shape}")
            if not self.is_intertwiner():
                raise ModuleError("map does not commute with the action")

    @classmethod
    def zero(cls, source: FdModule, target: FdModule) -> "ModuleMap":
        f = source.field
        return cls(source, target, [Matrix.zeros(f, target.dims[v], source.dims[v]) for v in range(source.algebra.n)])

    @classmethod
    def identity(cls, m: FdModule) -> "ModuleMap":
        return cls(m, m, [Matrix.identity(m.field, d) for d in m.dims])

    def __repr__(self):
        return f"ModuleMap({self.source.dims} -> {self.target.dims})"

    def is_intertwiner(self) -> bool:
        a = self.source.algebra
        for g in a.generators:
            s, t = a.source[g], a.target[g]
            if self.blocks[t] @ self.source.action[g] != self.target.action[g] @ self.blocks[s]:
                return False
        return True

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self ∘ other``."""
        if other.target is not self.source and other.target.dims != self.source.dims:
            raise ModuleError("maps are not composable")
        return ModuleMap(other.source, self.target, [f @ g for f, g in zip(self.blocks, other.blocks)])

    def __matmul__(self, other):
        return self.compose(other)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, [f + g for f, g in zip(self.blocks, other.blocks)])

    def scale(self, c) -> "ModuleMap":
        return ModuleMap(self.source, self.target, [f.scale(c) for f in self.blocks])

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks)

    def image(self) -> "Submodule":
        return Submodule(self.target, [Subspace.column_space(b) for b in self.blocks])

    def kernel(self) -> "Submodule":
        return Submodule(self.source, [nullspace(b) for b in self.blocks])

    def is_injective(self) -> bool:
        return all(nullspace(b).dim == 0 for b in self.blocks)

    def is_surjective(self) -> bool:
        return all(Subspace.column_space(b).dim == b.rows for b in self.blocks)

    def is_isomorphism(self) -> bool:
        return all(b.rows == b.cols and b.is_invertible() for b in self.blocks)

    def vector(self) -> tuple:
        return tuple(x for b in self.blocks for x in b.entries)

    def to_json(self) -> dict:
        a = self.source.algebra
        return {a.vertices[v]: b.to_json() for v, b in enumerate(self.blocks)}


class Submodule:
    """Per-vertex subspaces of ``module`` closed under the action."""

    __slots__ = ("module", "spaces")

    def __init__(self, module: FdModule, spaces: Sequence[Subspace]):
        self.module = module
        self.spaces = tuple(spaces)

    @classmethod
    def zero(cls, m: FdModule) -> "Submodule":
        return cls(m, [Subspace.zero(m.field, d) for d in m.dims])

    @classmethod
    def whole(cls, m: FdModule) -> "Submodule":
        return cls(m, [Subspace.full(m.field, d) for d in m.dims])

    @property
    def dims(self) -> tuple:
        return tuple(s.dim for s in self.spaces)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def __repr__(self):
        return f"Submodule(dims={self.dims} in {self.module.dims})"

    def __eq__(self, other):
        return isinstance(other, Submodule) and self.spaces == other.spaces

    def __hash__(self):
        return hash(self.spaces)

    def __le__(self, other: "Submodule") -> bool:
        return all(a.is_subspace_of(b) for a, b in zip(self.spaces, other.spaces))

    def __add__(self, other: "Submodule") -> "Submodule":
        return Submodule(self.module, [a + b for a, b in zip(self.spaces, other.spaces)])

    def intersection(self, other: "Submodule") -> "Submodule":
        return Submodule(self.module, [a.intersection(b) for a, b in zip(self.spaces, other.spaces)])

    def is_closed(self) -> bool:
        m = self.module
        a = m.algebra
        for g in a.generators:
            s, t = a.source[g], a.target[g]
            act = m.action[g]
            for v in self.spaces[s].basis:
                if not self.spaces[t].contains(act.apply(v)):
                    return False
        return True

    def is_whole(self) -> bool:
        return all(s.codim == 0 for s in self.spaces)

    def is_zero(self) -> bool:
        return all(s.dim == 0 for s in self.spaces)

    def as_module(self) -> tuple:
        """``(S, inclusion)`` with the basis of ``S`` given by the canonical RREF rows."""
        m = self.module
        a = m.algebra
        field = m.field
        action = {}
        for x in range(a.dim):
            s, t = a.source[x], a.target[x]
            src, tgt = self.spaces[s], self.spaces[t]
            act = m.action[x]
            cols = [tgt.coordinates(act.apply(v)) for v in src.basis]
            action[x] = Matrix.from_columns(field, tgt.dim, cols)
        sub = FdModule(a, self.dims, action, check=False)
        incl = ModuleMap(sub, m, [sp.basis_matrix().T for sp in self.spaces])
        return sub, incl

    def quotient(self) -> tuple:
        """``(Q, projection)`` using the canonical complement of each subspace."""
        m = self.module
        a = m.algebra
        field = m.field
        action = {}
        lifts = [sp.quotient_lift() for sp in self.spaces]
        for x in range(a.dim):
            s, t = a.source[x], a.target[x]
            act = m.action[x]
            cols = [self.spaces[t].quotient_coordinates(act.apply(v)) for v in lifts[s].data]
            action[x] = Matrix.from_columns(field, self.spaces[t].codim, cols)
        q = FdModule(a, tuple(sp.codim for sp in self.spaces), action, check=False)
        blocks = []
        for v, sp in enumerate(self.spaces):
            d = m.dims[v]
            cols = []
            for j in range(d):
                e = [field.zero] * d
                e[j] = field.one
                cols.append(sp.quotient_coordinates(e))
            blocks.append(Matrix.from_columns(field, sp.codim, cols))
        return q, ModuleMap(m, q, blocks)

    def to_json(self) -> dict:
        a = self.module.algebra
        f = a.field.fmt
        return {a.vertices[v]: [[f(x) for x in row] for row in sp.basis] for v, sp in enumerate(self.spaces)}


def generated_submodule(m: FdModule, vectors: dict) -> Submodule:
    """Smallest submodule containing ``vectors[v]`` (lists of vectors in ``e_v M``)."""
    a = m.algebra
    gens = {v: list(vs) for v, vs in vectors.items() if vs}
    out = [[] for _ in range(a.n)]
    for x in range(a.dim):
        s, t = a.source[x], a.target[x]
        if s in gens:
            act = m.action[x]
            out[t].extend(act.apply(v) for v in gens[s])
    return Submodule(m, [Subspace(m.field, m.dims[v], out[v]) for v in range(a.n)])


def direct_sum(mods: Sequence[FdModule]) -> tuple:
    """``(S, inclusions, projections)`` for the direct sum of ``mods``."""
    _check_same_algebra(*mods)
    a = mods[0].algebra
    field = a.field
    dims = tuple(sum(m.dims[v] for m in mods) for v in range(a.n))
    action = {}
    for x in range(a.dim):
        action[x] = block_diagonal(field, [m.action[x] for m in mods])
    s = FdModule(a, dims, action, check=False)
    incs, projs = [], []
    offs = [0] * a.n
    for m in mods:
        ib, pb = [], []
        for v in range(a.n):
            d, D, o = m.dims[v], dims[v], offs[v]
            ib.append(Matrix(field, D, d, [[field.one if r == o + c else field.zero for c in range(d)] for r in range(D)]))
            pb.append(Matrix(field, d, D, [[field.one if c == o + r else field.zero for c in range(D)] for r in range(d)]))
            offs[v] += d
        incs.append(ModuleMap(m, s, ib))
        projs.append(ModuleMap(s, m, pb))
    return s, incs, projs


def projective(a: BasicAlgebra, i) -> FdModule:
    """The indecomposable projective ``A e_i`` with basis the basis of ``A`` sourced at ``i``."""
    v = a.vertex_index(i)
    field = a.field
    comps = [a.component(v, w) for w in range(a.n)]
    dims = tuple(len(c) for c in comps)
    action = {}
    for y in range(a.dim):
        s, t = a.source[y], a.target[y]
        cols = []
        for x in comps[s]:
            col = [field.zero] * dims[t]
            for z, c in a.product(y, x):
                col[a.position(z)] = c
            cols.append(col)
        action[y] = Matrix.from_columns(field, dims[t], cols)
    return FdModule(a, dims, action, name=f"P({a.vertices[v]})", check=False)


def simple(a: BasicAlgebra, i) -> FdModule:
    v = a.vertex_index(i)
    field = a.field
    dims = tuple(1 if w == v else 0 for w in range(a.n))
    action = {}
    for x in range(a.dim):
        s, t = a.source[x], a.target[x]
        if x == a.idempotents[v]:
            action[x] = Matrix.identity(field, 1)
        else:
            action[x] = Matrix.zeros(field, dims[t], dims[s])
    return FdModule(a, dims, action, name=f"S({a.vertices[v]})", check=False)


def _hom_system(m: FdModule, n: FdModule) -> tuple:
    """Coefficient rows of the intertwining equations and the block layout of the unknowns."""
    a = m.algebra
    p = a.field.p
    norm = a.field.norm
    layout, off = [], 0
    for v in range(a.n):
        layout.append(off)
        off += n.dims[v] * m.dims[v]
    nunk = off
    rows = []
    zero = a.field.zero
    for g in a.generators:
        s, t = a.source[g], a.target[g]
        dMs, dMt, dNs, dNt = m.dims[s], m.dims[t], n.dims[s], n.dims[t]
        if dMs == 0 or dNt == 0:
            continue
        Mx = m.action[g].data  # dMt x dMs
        Nx = n.action[g].data  # dNt x dNs
        ot, os_ = layout[t], layout[s]
        # (f_t Mx - Nx f_s)[r][c] = 0 with f_t[r][k] at ot + r*dMt + k, f_s[k][c] at os_ + k*dMs + c
        for r in range(dNt):
            for c in range(dMs):
                row = {}
                for k in range(dMt):
                    coef = Mx[k][c]
                    if coef:
                        j = ot + r * dMt + k
                        row[j] = row.get(j, 0) + coef
                for k in range(dNs):
                    coef = Nx[r][k]
                    if coef:
                        j = os_ + k * dMs + c
                        row[j] = row.get(j, 0) - coef
                if row:
                    dense = [zero] * nunk
                    for j, val in row.items():
                        dense[j] = norm(val)
                    if any(dense):
                        rows.append(dense)
    return rows, layout, nunk


def hom_basis(m: FdModule, n: FdModule) -> list:
    """Basis of ``Hom_A(m, n)`` as a list of :class:`ModuleMap`."""
    _check_same_algebra(m, n)
    a = m.algebra
    field = a.field
    rows, layout, nunk = _hom_system(m, n)
    if nunk == 0:
        return []
    mat = Matrix(field, len(rows), nunk, rows) if rows else Matrix.zeros(field, 0, nunk)
    ker = nullspace(mat)
    maps = []
    for vec in ker.basis:
        blocks = []
        for v in range(a.n):
            r, c, o = n.dims[v], m.dims[v], layout[v]
            blocks.append(Matrix._raw(field, r, c, tuple(tuple(vec[o + i * c: o + (i + 1) * c]) for i in range(r))))
        maps.append(ModuleMap(m, n, blocks))
    return maps


def hom_dim(m: FdModule, n: FdModule) -> int:
    _check_same_algebra(m, n)
    rows, layout, nunk = _hom_system(m, n)
    if not rows:
        return nunk
    from .exactla import _rref_lists
    reduced, _ = _rref_lists(rows, nunk, m.field)
    return nunk - len(reduced)


def combine(maps: Sequence[ModuleMap], coeffs: Sequence, source: FdModule, target: FdModule) -> ModuleMap:
    field = source.field
    blocks = [Matrix.zeros(field, target.dims[v], source.dims[v]) for v in range(source.algebra.n)]
    for f, c in zip(maps, coeffs):
        if c:
            blocks = [b + fb.scale(c) for b, fb in zip(blocks, f.blocks)]
    return ModuleMap(source, target, blocks)


def trace(family: Iterable[FdModule], m: FdModule) -> Submodule:
    """Sum of the images of all homomorphisms from members of ``family`` into ``m``."""
    total = Submodule.zero(m)
    for x in family:
        _check_same_algebra(x, m)
        for f in hom_basis(x, m):
            total = total + f.image()
    return total


def trace_of_projectives(vertices: Iterable[int], m: FdModule) -> Submodule:
    """Trace of ``{A e_v}`` in ``m``: the submodule generated by the components ``e_v m``."""
    vecs = {}
    for v in vertices:
        d = m.dims[v]
        vecs[v] = [tuple(m.field.one if i == j else m.field.zero for j in range(d)) for i in range(d)]
    return generated_submodule(m, vecs)


def radical(m: FdModule) -> Submodule:
    """Image of the arrow ideal: the sum of ``x M`` over non-idempotent basis elements ``x``."""
    a = m.algebra
    vecs = [[] for _ in range(a.n)]
    for x in a.radical_basis():
        vecs[a.target[x]].extend(m.action[x].columns())
    return Submodule(m, [Subspace(m.field, m.dims[v], vecs[v]) for v in range(a.n)])


@dataclass
class RadicalTop:
    rad: Submodule
    top: FdModule
    projection: ModuleMap


def radical_top(m: FdModule) -> RadicalTop:
    rad = radical(m)
    top, proj = rad.quotient()
    return RadicalTop(rad, top, proj)


def top_vector(m: FdModule) -> tuple:
    return tuple(sp.codim for sp in radical(m).spaces)


def socle_vector(m: FdModule) -> tuple:
    """Dimension of ``Hom(S_v, m)`` per vertex: common kernel of all arrows leaving ``v``."""
    a = m.algebra
    out = []
    for v in range(a.n):
        d = m.dims[v]
        if d == 0:
            out.append(0)
            continue
        mats = [m.action[x] for x in a.radical_basis() if a.source[x] == v]
        mats = [x for x in mats if x.rows]
        if not mats:
            out.append(d)
            continue
        stacked = mats[0]
        for x in mats[1:]:
            stacked = stacked.vstack(x)
        out.append(nullspace(stacked).dim)
    return tuple(out)


@dataclass
class ProjectiveCover:
    module: FdModule
    epi: ModuleMap
    summands: tuple  # vertex index of each indecomposable summand, in order
    kernel: Submodule

    @property
    def syzygy(self) -> tuple:
        return self.kernel.as_module()


def projective_cover(m: FdModule) -> ProjectiveCover:
    """Minimal projective cover; generators are the canonical lifts of a basis of the top."""
    if m.is_zero():
        raise ModuleError("projective cover of the zero module")
    a = m.algebra
    field = m.field
    rad = radical(m)
    summands, gens = [], []
    for v in range(a.n):
        for row in rad.spaces[v].quotient_lift().data:
            summands.append(v)
            gens.append(row)
    proj_of = {v: projective(a, v) for v in set(summands)}
    pieces = [proj_of[v] for v in summands]
    p, incs, _ = direct_sum(pieces)
    # image of basis element x of A e_v (x sourced at v) is x acting on the generator
    blocks = []
    for w in range(a.n):
        cols = []
        for v, g in zip(summands, gens):
            for x in a.component(v, w):
                cols.append(m.action[x].apply(g))
        blocks.append(Matrix.from_columns(field, m.dims[w], cols))
    epi = ModuleMap(p, m, blocks)
    return ProjectiveCover(p, epi, tuple(summands), epi.kernel())


@dataclass(frozen=True)
class AtLeast:
    """Projective dimension not reached within ``bound`` steps."""

    bound: int
    infinite: bool = False  # a syzygy repeated up to isomorphism

    def __str__(self):
        return f">={self.bound} (proven infinite)" if self.infinite else f">={self.bound}"


def pd_max(values, default=0):
    """Maximum of pd values; any :class:`AtLeast` dominates (a proven infinite one first)."""
    best = default
    for v in values:
        if isinstance(v, AtLeast):
            if not isinstance(best, AtLeast) or (v.infinite and not best.infinite):
                best = v
        elif not isinstance(best, AtLeast):
            best = max(best, v)
    return best


def pd_to_json(pd):
    if isinstance(pd, AtLeast):
        return {"at_least": pd.bound, "infinite": pd.infinite}
    return pd


def is_finite_pd(pd) -> bool:
    return not isinstance(pd, AtLeast)


@dataclass
class Resolution:
    """``... -> P_1 -> P_0 -> M``; ``maps[n]`` is ``P_{n+1} -> P_n`` and ``augmentation`` is ``P_0 -> M``."""

    module: FdModule
    terms: list
    summands: list
    maps: list
    augmentation: ModuleMap | None
    exact: bool  # True when the last syzygy is zero
    syzygies: list = dc_field(default_factory=list)

    def verify(self) -> bool:
        if self.augmentation is None:
            return self.module.is_zero()
        if not self.augmentation.is_surjective():
            return False
        prev_kernel = self.augmentation.kernel()
        for n, d in enumerate(self.maps):
            if not d.is_intertwiner():
                return False
            if d.image() != prev_kernel:
                return False
            # minimality: kernel of each step inside the radical
            if not (d.kernel() <= radical(d.source)):
                return False
            prev_kernel = d.kernel()
        if not (self.augmentation.kernel() <= radical(self.augmentation.source)):
            return False
        if self.exact and not prev_kernel.is_zero():
            return False
        return True


SYZYGY_BUDGET = 96  # total dimension beyond which a resolution is abandoned as undecided
BRICK_LIMIT = 12  # largest syzygy tested for End = K


def _brick_summand(x: FdModule, y: FdModule) -> bool:
    """Whether the brick ``x`` (End = K) is a direct summand of ``y``.

    Composites ``g f`` with ``f: x -> y`` and ``g: y -> x`` span an ideal of
    ``End(x) = K``, so ``x`` splits off exactly when one basis composite is nonzero.
    """
    if x.total_dim > y.total_dim or any(a > b for a, b in zip(x.dims, y.dims)):
        return False
    fs = hom_basis(x, y)
    if not fs:
        return False
    gs = hom_basis(y, x)
    return any(not g.compose(f).is_zero() for f in fs for g in gs)


def _infinite_simple(a: BasicAlgebra, v: int, cap: int, stack: frozenset) -> bool:
    """Whether ``pd(S_v)`` is proven infinite; ``stack`` holds simples being resolved.

    Meeting a simple already on the stack closes a cycle of split summands
    ``S_v | Ω^i S_w``, ``S_w | Ω^j S_v``, so both have infinite dimension.
    """
    if v in stack:
        return True
    memo = a._meta.setdefault("infinite_simples", {})
    if v in memo:
        return memo[v]
    _, pd = min_resolution(simple(a, v), cap, True, stack | {v})
    found = isinstance(pd, AtLeast) and pd.infinite
    if found or not stack or not isinstance(pd, AtLeast):
        memo[v] = found
    return found


def _simple_summands(m: FdModule) -> list:
    """Vertices ``v`` with ``S_v`` a direct summand of ``m`` (socle vectors outside the radical)."""
    rad = radical(m)
    soc = socle_vector(m)
    out = []
    for v in range(m.algebra.n):
        if soc[v] and rad.spaces[v].dim < m.dims[v] and _brick_summand(simple(m.algebra, v), m):
            out.append(v)
    return out


def min_resolution(m: FdModule, cap: int = DEFAULT_CAP, detect_period: bool = True,
                   _stack: frozenset = frozenset()) -> tuple:
    """Minimal projective resolution by iterated covers; returns ``(Resolution, pd)``.

    ``pd`` is an int, or :class:`AtLeast` when the ``cap``-th syzygy is
    nonzero.  With ``detect_period`` the loop also stops with a proven
    infinite answer once a syzygy is isomorphic to ``m`` or an earlier
    syzygy, or contains an earlier non-projective brick as a direct summand
    (a summand of a later syzygy would need strictly smaller projective
    dimension), or splits off a simple module of infinite dimension.  Syzygies beyond :data:`SYZYGY_BUDGET` end the loop with an
    undecided ``AtLeast``.
    """
    if cap < 0:
        raise ValueError("cap must be non-negative")
    if m.is_zero():
        return Resolution(m, [], [], [], None, True), 0
    cover = projective_cover(m)
    terms, summands, maps = [cover.module], [cover.summands], []
    syz, incl = cover.kernel.as_module()
    syzygies = [syz]
    n = 0
    seen = [m]
    bricks = [m] if detect_period and m.total_dim <= BRICK_LIMIT and hom_dim(m, m) == 1 else []

    def stop(pd):
        return Resolution(m, terms, summands, maps, cover.epi, False, syzygies), pd

    while True:
        if syz.is_zero():
            return Resolution(m, terms, summands, maps, cover.epi, True, syzygies), n
        if n + 1 >= cap:
            return stop(AtLeast(cap))
        if detect_period:
            for old in seen:
                if old.dims == syz.dims and iso_test(old, syz).isomorphic:
                    return stop(AtLeast(cap, infinite=True))
            if any(_brick_summand(b, syz) for b in bricks):
                return stop(AtLeast(cap, infinite=True))
            if any(_infinite_simple(m.algebra, v, cap, _stack) for v in _simple_summands(syz)):
                return stop(AtLeast(cap, infinite=True))
            seen.append(syz)
            if syz.total_dim <= BRICK_LIMIT and hom_dim(syz, syz) == 1:
                bricks.append(syz)
        if syz.total_dim > SYZYGY_BUDGET:
            return stop(AtLeast(n + 1))
        nxt = projective_cover(syz)
        d = incl.compose(nxt.epi)
        terms.append(nxt.module)
        summands.append(nxt.summands)
        maps.append(d)
        syz, incl = nxt.kernel.as_module()
        syzygies.append(syz)
        n += 1


def projective_dimension(m: FdModule, cap: int = DEFAULT_CAP):
    return min_resolution(m, cap)[1]


def ext1_dim(m: FdModule, n: FdModule) -> int:
    """``dim Ext^1(m, n)`` as the cokernel of ``Hom(P_0, n) -> Hom(Ω m, n)``."""
    _check_same_algebra(m, n)
    if m.is_zero() or n.is_zero():
        return 0
    cover = projective_cover(m)
    omega, incl = cover.kernel.as_module()
    if omega.is_zero():
        return 0
    hom_omega = hom_dim(omega, n)
    if hom_omega == 0:
        return 0
    restricted = [f.compose(incl).vector() for f in hom_basis(cover.module, n)]
    rank = Subspace(m.field, sum(n.dims[v] * omega.dims[v] for v in range(m.algebra.n)), restricted).dim
    return hom_omega - rank


@dataclass
class ExtData:
    """The pieces needed to enumerate and realise classes in ``Ext^1(m, n)``."""

    cover: ProjectiveCover | None  # None when m = 0
    omega: FdModule
    inclusion: ModuleMap
    hom_omega: list
    class_reps: list  # lift a basis of Ext^1 = Hom(Ω, n) / restricted maps


def ext1_data(m: FdModule, n: FdModule) -> ExtData:
    _check_same_algebra(m, n)
    if m.is_zero():
        z = zero_module(m.algebra)
        return ExtData(None, z, ModuleMap.zero(z, z), [], [])
    cover = projective_cover(m)
    omega, incl = cover.kernel.as_module()
    homs = hom_basis(omega, n)
    amb = sum(n.dims[v] * omega.dims[v] for v in range(m.algebra.n))
    restricted = Subspace(m.field, amb, [f.compose(incl).vector() for f in hom_basis(cover.module, n)])
    reps = []
    span = restricted
    for f in homs:
        vec = f.vector()
        if not span.contains(vec):
            reps.append(f)
            span = span.extend([vec])
    return ExtData(cover, omega, incl, homs, reps)


@dataclass
class Extension:
    middle: FdModule
    inclusion: ModuleMap  # n -> middle
    projection: ModuleMap  # middle -> m

    def is_exact(self) -> bool:
        return is_short_exact(self.inclusion, self.projection)


def is_short_exact(f: ModuleMap, g: ModuleMap) -> bool:
    """``0 -> A -f-> B -g-> C -> 0`` exact, checked vertex by vertex."""
    for v in range(f.source.algebra.n):
        fb, gb = f.blocks[v], g.blocks[v]
        if nullspace(fb).dim != 0:
            return False
        if Subspace.column_space(gb).dim != gb.rows:
            return False
        if Subspace.column_space(fb) != nullspace(gb):
            return False
    return True


def ext_realize(m: FdModule, n: FdModule, class_rep: ModuleMap, data: ExtData | None = None) -> Extension:
    """Pushout of ``Ω m -> P_0`` along ``class_rep : Ω m -> n``; gives ``0 -> n -> E -> m -> 0``."""
    _check_same_algebra(m, n)
    if m.is_zero():
        return Extension(n, ModuleMap.identity(n), ModuleMap.zero(n, m))
    if data is None:
        cover = projective_cover(m)
        omega, incl = cover.kernel.as_module()
    else:
        cover, omega, incl = data.cover, data.omega, data.inclusion
    if class_rep.target is not n or class_rep.source.dims != omega.dims:
        raise ModuleError("class representative must be a map from the syzygy into n")
    if not class_rep.is_intertwiner():
        raise ModuleError("class representative is not a homomorphism")
    field = m.field
    a = m.algebra
    s, incs, projs = direct_sum([n, cover.module])
    # image of w -> (g(w), -ι(w))
    rel = [Subspace(field, s.dims[v], (class_rep.blocks[v].vstack(-incl.blocks[v])).columns()) for v in range(a.n)]
    sub = Submodule(s, rel)
    middle, q = sub.quotient()
    inc = q.compose(incs[0])
    # induced map middle -> m: (x, y) -> epi(y); evaluate on the canonical lift
    blocks = []
    for v in range(a.n):
        lift = sub.spaces[v].quotient_lift()  # rows are vectors in s
        pb = projs[1].blocks[v]
        eb = cover.epi.blocks[v]
        cols = [eb.apply(pb.apply(row)) for row in lift.data]
        blocks.append(Matrix.from_columns(field, m.dims[v], cols))
    proj = ModuleMap(middle, m, blocks)
    return Extension(middle, inc, proj)


@dataclass
class IsoResult:
    isomorphic: bool
    exact: bool
    reason: str
    map: ModuleMap | None = None

    def __bool__(self):
        return self.isomorphic

    def label(self) -> str:
        if self.isomorphic:
            return "yes"
        return "no" if self.exact else "no (probabilistic)"


EXHAUSTIVE_LIMIT = 1 << 16


def invariants(m: FdModule) -> dict:
    return {
        "dim_vector": m.dims,
        "top": top_vector(m),
        "socle": socle_vector(m),
    }


def iso_test(m: FdModule, n: FdModule, seed: int = 0, samples: int = 64) -> IsoResult:
    """Decide ``m ≅ n``; a positive answer carries an invertible intertwiner.

    Cheap invariants are compared first.  The search over ``Hom(m, n)`` is
    exhaustive over F_p when ``p**dim Hom`` is small, which makes the answer
    exact; otherwise a deterministic sweep plus seeded random sampling is used
    and a negative answer is flagged as probabilistic.
    """
    _check_same_algebra(m, n)
    if m.dims != n.dims:
        return IsoResult(False, True, f"dimension vectors differ: {m.dims} vs {n.dims}")
    if m.is_zero():
        return IsoResult(True, True, "both zero", ModuleMap.identity(m))
    inv_m, inv_n = invariants(m), invariants(n)
    for key in ("top", "socle"):
        if inv_m[key] != inv_n[key]:
            return IsoResult(False, True, f"{key} vectors differ: {inv_m[key]} vs {inv_n[key]}")
    homs = hom_basis(m, n)
    end_m = hom_dim(m, m)
    if len(homs) != end_m:
        return IsoResult(False, True, f"dim Hom(M,N)={len(homs)} differs from dim End(M)={end_m}")
    end_n = hom_dim(n, n)
    if end_m != end_n:
        return IsoResult(False, True, f"dim End differs: {end_m} vs {end_n}")
    if not homs:
        return IsoResult(False, True, "Hom(M,N) = 0")
    field = m.field
    k = len(homs)
    if field.is_finite and field.p ** k <= EXHAUSTIVE_LIMIT:
        for coeffs in _exhaustive(field.p, k):
            f = combine(homs, coeffs, m, n)
            if f.is_isomorphism():
                return IsoResult(True, True, "invertible homomorphism found", f)
        return IsoResult(False, True, "exhaustive search: no invertible homomorphism")
    for coeffs in _sweep(field, k, seed, samples):
        f = combine(homs, coeffs, m, n)
        if f.is_isomorphism():
            return IsoResult(True, True, "invertible homomorphism found", f)
    return IsoResult(False, False, "no invertible homomorphism among sampled combinations")


def _exhaustive(p: int, k: int):
    # single basis vectors first: they are the likeliest isomorphisms
    for i in range(k):
        yield tuple(1 if j == i else 0 for j in range(k))
    for coeffs in itertools.product(range(p), repeat=k):
        if sum(1 for c in coeffs if c) > 1:
            yield coeffs


def _sweep(field, k: int, seed: int, samples: int):
    for i in range(k):
        yield tuple(field.one if j == i else field.zero for j in range(k))
    yield tuple(field.one for _ in range(k))
    for coeffs in itertools.islice(itertools.product((0, 1, 2), repeat=k), 3 ** min(k, 6)):
        yield tuple(field(c) for c in coeffs)
    rng = random.Random(seed)
    for _ in range(samples):
        yield tuple(field(rng.randint(-50, 50)) for _ in range(k))
