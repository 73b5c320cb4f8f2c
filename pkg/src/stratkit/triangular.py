"""Lower triangular matrix algebras ``Λ = [[T, 0], [M, U]]`` and their modules.

A U-T-bimodule ``M`` is stored column by column: ``columns[j]`` is the left
U-module ``M f_j`` and the right action of a basis element ``t`` of
``f_j T f_j'`` is a U-linear map ``M f_j -> M f_j'``.

A Λ-module is a column ``[Y; X]`` with ``Y`` a T-module and ``X`` a U-module;
an element of ``e_i M f_j`` acts as a map ``f_j Y -> e_i X``.  The same data
as a triple ``(Y, φ, X)`` uses the U-map ``φ : M ⊗_T Y -> X``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import AlgebraError, BasicAlgebra, idempotent_truncation, make_algebra
from .exactla import Matrix, Subspace
from .modcat import FdModule, ModuleError, ModuleMap, Submodule, projective
from .strat import OrderedPartition, PartitionError


class BimoduleError(ValueError):
    pass


class TriangularityError(ValueError):
    pass


@dataclass
class Bimodule:
    """U-T-bimodule with finite-dimensional components ``e_i M f_j``."""

    U: BasicAlgebra
    T: BasicAlgebra
    columns: tuple  # columns[j]: FdModule over U, the left module M f_j
    right: dict  # t -> tuple of per-U-vertex matrices, M f_{target t} -> M f_{source t}
    labels: dict  # (i, j) -> tuple of basis labels of e_i M f_j

    def __post_init__(self):
        if len(self.columns) != self.T.n:
            raise BimoduleError(f"expected {self.T.n} columns, got {len(self.columns)}")

    @property
    def field(self):
        return self.U.field

    def dim(self, i: int, j: int) -> int:
        return self.columns[j].dims[i]

    @property
    def dims(self) -> tuple:
        return tuple(tuple(self.dim(i, j) for j in range(self.T.n)) for i in range(self.U.n))

    @property
    def total_dim(self) -> int:
        return sum(c.total_dim for c in self.columns)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def right_map(self, t: int) -> ModuleMap:
        T = self.T
        return ModuleMap(self.columns[T.target[t]], self.columns[T.source[t]], self.right[t])

    def verify(self):
        """Check both unit laws, the right module law and ``u(mt) = (um)t``."""
        U, T, field = self.U, self.T, self.field
        if U.field != T.field:
            raise BimoduleError("U and T are over different fields")
        for j, col in enumerate(self.columns):
            if col.algebra is not U:
                raise BimoduleError(f"column {T.vertices[j]} is not a module over U")
            try:
                col.verify()
            except ModuleError as exc:
                raise BimoduleError(f"left action on column {T.vertices[j]}: {exc}") from None
        for t in range(T.dim):
            blocks = self.right.get(t)
            src, tgt = self.columns[T.target[t]], self.columns[T.source[t]]
            if blocks is None or len(blocks) != U.n:
                raise BimoduleError(f"missing right action of {T.labels[t]}")
            for i, b in enumerate(blocks):
                if b.shape != (tgt.dims[i], src.dims[i]):
                    raise BimoduleError(f"right action of {T.labels[t]} has wrong shape at {U.vertices[i]}")
            f = ModuleMap(src, tgt, blocks)
            if T.is_idempotent[t]:
                if not all(b == Matrix.identity(field, b.rows) for b in blocks):
                    raise BimoduleError(f"{T.labels[t]} does not act as the identity on the right")
            elif not f.is_intertwiner():
                raise BimoduleError(f"right action of {T.labels[t]} does not commute with U")
        for y in T.radical_basis():
            for x in T.radical_basis():
                if T.source[y] != T.target[x]:
                    continue
                # m (y x) = (m y) x
                lhs = [Matrix.zeros(field, self.dim(i, T.source[x]), self.dim(i, T.target[y])) for i in range(U.n)]
                for z, c in T.product(y, x):
                    lhs = [l + b.scale(c) for l, b in zip(lhs, self.right[z])]
                rhs = [bx @ by for bx, by in zip(self.right[x], self.right[y])]
                if lhs != rhs:
                    raise BimoduleError(f"right action violates {T.labels[y]}*{T.labels[x]}")
        return True

    def to_json(self) -> dict:
        U, T = self.U, self.T
        return {
            "dims": {U.vertices[i]: {T.vertices[j]: self.dim(i, j) for j in range(T.n)} for i in range(U.n)},
            "labels": {f"{U.vertices[i]}|{T.vertices[j]}": list(self.labels[(i, j)])
                       for i in range(U.n) for j in range(T.n) if self.labels[(i, j)]},
            "left": {U.labels[u]: {T.vertices[j]: self.columns[j].action[u].to_json() for j in range(T.n)}
                     for u in U.generators},
            "right": {T.labels[t]: {U.vertices[i]: self.right[t][i].to_json() for i in range(U.n)}
                      for t in T.generators},
        }


def default_labels(U: BasicAlgebra, T: BasicAlgebra, dims) -> dict:
    return {(i, j): tuple(f"m{U.vertices[i]}{T.vertices[j]}_{k}" for k in range(dims[i][j]))
            for i in range(U.n) for j in range(T.n)}


def bimodule_from_generators(U: BasicAlgebra, T: BasicAlgebra, dims, left: dict, right: dict,
                             labels: dict | None = None, check: bool = True) -> Bimodule:
    """Bimodule from generator matrices.

    ``dims[i][j] = dim e_i M f_j``; ``left[(u, j)]`` is the matrix of a U
    generator on column ``j``; ``right[(t, i)]`` is the matrix of a T generator
    on row ``i`` (shape ``dims[i][source t] x dims[i][target t]``).  Missing
    entries are zero.
    """
    field = U.field
    cols = []
    for j in range(T.n):
        d = [dims[i][j] for i in range(U.n)]
        gens = {u: left[(u, j)] for u in U.generators if (u, j) in left}
        cols.append(FdModule.from_generators(U, d, gens, check=check))
    rmat = {}
    for t in range(T.dim):
        s, tg = T.source[t], T.target[t]
        if T.is_idempotent[t]:
            rmat[t] = tuple(Matrix.identity(field, dims[i][s]) for i in range(U.n))
        elif t in T.generators:
            rmat[t] = tuple(right[(t, i)] if (t, i) in right else Matrix.zeros(field, dims[i][s], dims[i][tg])
                            for i in range(U.n))
    for t in range(T.dim):
        if t in rmat:
            continue
        word = T.words[t]
        blocks = rmat[word[0]]
        for g in word[1:]:
            # m (g w) = (m g) w : apply g first on the right
            blocks = tuple(b @ rmat[g][i] for i, b in enumerate(blocks))
        rmat[t] = blocks
    bm = Bimodule(U, T, tuple(cols), rmat, labels or default_labels(U, T, dims))
    if check:
        bm.verify()
    return bm


def zero_bimodule(U: BasicAlgebra, T: BasicAlgebra) -> Bimodule:
    dims = [[0] * T.n for _ in range(U.n)]
    return bimodule_from_generators(U, T, dims, {}, {}, check=False)


@dataclass(frozen=True)
class Bipartition:
    """Vertex names of Λ on the T side and on the U side."""

    t_side: tuple
    u_side: tuple


@dataclass
class Triangular:
    """Λ together with the identifications of its corners."""

    lam: BasicAlgebra
    T: BasicAlgebra
    U: BasicAlgebra
    M: Bimodule
    t_vertices: tuple  # Λ vertex index of each T vertex
    u_vertices: tuple  # Λ vertex index of each U vertex
    t_basis: tuple  # Λ basis index of each T basis element
    u_basis: tuple
    m_basis: dict  # (i, j) -> tuple of Λ basis indices of e_i M f_j

    @property
    def bipartition(self) -> Bipartition:
        return Bipartition(tuple(self.lam.vertices[v] for v in self.t_vertices),
                           tuple(self.lam.vertices[v] for v in self.u_vertices))

    def column_dims(self, j: int) -> tuple:
        return self.M.columns[j].dims


def _rename(names: Sequence, other: Sequence, prefix: str) -> list:
    clash = set(names) & set(other)
    return [f"{prefix}{x}" if clash else x for x in names]


def build_triangular(T: BasicAlgebra, U: BasicAlgebra, M: Bimodule, name: str = "") -> Triangular:
    """Assemble Λ by structure constants: T basis, then U basis, then M basis."""
    if M.T is not T or M.U is not U:
        raise BimoduleError("bimodule is not over the given algebras")
    if T.field != U.field:
        raise BimoduleError("T and U are over different fields")
    M.verify()
    field = T.field
    tv = _rename(T.vertices, U.vertices, "T.")
    uv = _rename(U.vertices, T.vertices, "U.")
    mlabels = [lab for key in sorted(M.labels) for lab in M.labels[key]]
    tl = _rename(T.labels, list(U.labels) + mlabels, "T.")
    ul = _rename(U.labels, list(T.labels) + mlabels, "U.")
    nT, nU = T.n, U.n
    labels, source, target = [], [], []
    t_basis, u_basis = [], []
    for x in range(T.dim):
        t_basis.append(len(labels))
        labels.append(tl[x])
        source.append(T.source[x])
        target.append(T.target[x])
    for x in range(U.dim):
        u_basis.append(len(labels))
        labels.append(ul[x])
        source.append(nT + U.source[x])
        target.append(nT + U.target[x])
    m_basis = {}
    for i in range(nU):
        for j in range(nT):
            idx = []
            for k in range(M.dim(i, j)):
                idx.append(len(labels))
                labels.append(M.labels[(i, j)][k])
                source.append(j)
                target.append(nT + i)
            m_basis[(i, j)] = tuple(idx)
    if len(set(labels)) != len(labels):
        raise BimoduleError("basis labels of T, U and M collide")
    products = {}
    for (y, x), terms in T.mult.items():
        products[(t_basis[y], t_basis[x])] = [(t_basis[z], c) for z, c in terms]
    for (y, x), terms in U.mult.items():
        products[(u_basis[y], u_basis[x])] = [(u_basis[z], c) for z, c in terms]
    for (i, j), idxs in m_basis.items():
        col = M.columns[j]
        for k, mx in enumerate(idxs):
            # u * m
            for u in U.radical_basis():
                if U.source[u] != i:
                    continue
                i2 = U.target[u]
                vec = col.action[u].column(k)
                terms = [(m_basis[(i2, j)][r], c) for r, c in enumerate(vec) if c]
                if terms:
                    products[(u_basis[u], mx)] = terms
            # m * t
            for t in T.radical_basis():
                if T.target[t] != j:
                    continue
                j2 = T.source[t]
                vec = M.right[t][i].column(k)
                terms = [(m_basis[(i, j2)][r], c) for r, c in enumerate(vec) if c]
                if terms:
                    products[(mx, t_basis[t])] = terms
    generators = [t_basis[g] for g in T.generators] + [u_basis[g] for g in U.generators]
    generators += [x for key in sorted(m_basis) for x in m_basis[key]]
    words = [None] * len(labels)
    for x in range(T.dim):
        words[t_basis[x]] = tuple(t_basis[g] for g in T.words[x])
    for x in range(U.dim):
        words[u_basis[x]] = tuple(u_basis[g] for g in U.words[x])
    for idxs in m_basis.values():
        for mx in idxs:
            words[mx] = (mx,)
    idem = [t_basis[e] for e in T.idempotents] + [u_basis[e] for e in U.idempotents]
    lam = make_algebra(field, tv + uv, labels, source, target, idem, products,
                       generators=generators, words=words, name=name or f"[[{T.name},0],[M,{U.name}]]")
    return Triangular(lam, T, U, M, tuple(range(nT)), tuple(range(nT, nT + nU)),
                      tuple(t_basis), tuple(u_basis), m_basis)


def check_triangular(lam: BasicAlgebra, bp: Bipartition) -> tuple:
    """Vertex index lists ``(t_side, u_side)``; raises when ``f Λ e`` is nonzero."""
    try:
        ts = [lam.vertex_index(v) for v in bp.t_side]
        us = [lam.vertex_index(v) for v in bp.u_side]
    except AlgebraError as exc:
        raise TriangularityError(str(exc)) from None
    if sorted(ts + us) != list(range(lam.n)) or len(set(ts + us)) != lam.n:
        raise TriangularityError("bipartition must split the vertex set into two disjoint parts")
    bad = []
    for i in us:
        for j in ts:
            if lam.component(i, j):
                bad.append(f"e_{lam.vertices[j]} Λ e_{lam.vertices[i]} has dim {lam.component_dim(i, j)}")
    if bad:
        raise TriangularityError("cross component nonzero on the forbidden side: " + "; ".join(bad))
    return ts, us


def split_triangular(lam: BasicAlgebra, bp: Bipartition) -> Triangular:
    """Recover ``T = fΛf``, ``U = eΛe`` and ``M = eΛf`` from Λ."""
    ts, us = check_triangular(lam, bp)
    T, t_keep = idempotent_truncation(lam, [lam.vertices[v] for v in ts], name=f"{lam.name}.T")
    U, u_keep = idempotent_truncation(lam, [lam.vertices[v] for v in us], name=f"{lam.name}.U")
    field = lam.field
    m_basis = {(i, j): lam.component(ts[j], us[i]) for i in range(len(us)) for j in range(len(ts))}
    labels = {key: tuple(lam.labels[x] for x in idxs) for key, idxs in m_basis.items()}
    cols = []
    for j in range(len(ts)):
        dims = [len(m_basis[(i, j)]) for i in range(len(us))]
        action = {}
        for u in range(U.dim):
            s, t = U.source[u], U.target[u]
            lu = u_keep[u]
            cols_ = []
            for mx in m_basis[(s, j)]:
                vec = [field.zero] * dims[t]
                for z, c in lam.product(lu, mx):
                    vec[lam.position(z)] = c
                cols_.append(vec)
            action[u] = Matrix.from_columns(field, dims[t], cols_)
        cols.append(FdModule(U, dims, action, check=False))
    right = {}
    for t in range(T.dim):
        s, tg = T.source[t], T.target[t]
        lt = t_keep[t]
        blocks = []
        for i in range(len(us)):
            rows = len(m_basis[(i, s)])
            cols_ = []
            for mx in m_basis[(i, tg)]:
                vec = [field.zero] * rows
                for z, c in lam.product(mx, lt):
                    vec[lam.position(z)] = c
                cols_.append(vec)
            blocks.append(Matrix.from_columns(field, rows, cols_))
        right[t] = tuple(blocks)
    M = Bimodule(U, T, tuple(cols), right, labels)
    M.verify()
    return Triangular(lam, T, U, M, tuple(ts), tuple(us), tuple(t_keep), tuple(u_keep), m_basis)


# partitions ------------------------------------------------------------------


def join_partitions(tri: Triangular, pA: OrderedPartition, pB: OrderedPartition) -> OrderedPartition:
    """Joint partition of Λ: every U level (``pA``) precedes every T level (``pB``)."""
    pA.validate(tri.U.n)
    pB.validate(tri.T.n)
    levels = [tuple(tri.u_vertices[i] for i in lvl) for lvl in pA.levels]
    levels += [tuple(tri.t_vertices[j] for j in lvl) for lvl in pB.levels]
    return OrderedPartition(tuple(levels))


def split_partition(tri: Triangular, pC: OrderedPartition) -> tuple:
    """Inverse of :func:`join_partitions`; fails unless U levels come first."""
    pC.validate(tri.lam.n)
    uidx = {v: i for i, v in enumerate(tri.u_vertices)}
    tidx = {v: j for j, v in enumerate(tri.t_vertices)}
    a_levels, b_levels = [], []
    for lvl in pC.levels:
        if all(v in uidx for v in lvl):
            if b_levels:
                raise PartitionError("a U level follows a T level")
            a_levels.append(tuple(uidx[v] for v in lvl))
        elif all(v in tidx for v in lvl):
            b_levels.append(tuple(tidx[v] for v in lvl))
        else:
            raise PartitionError("a level mixes U and T vertices")
    return OrderedPartition(tuple(a_levels)), OrderedPartition(tuple(b_levels))


# tensor product and triples ----------------------------------------------------


@dataclass
class Tensor:
    """``M ⊗_T Y`` as a quotient of the free sum ``⊕_j M f_j ⊗ f_j Y``."""

    module: FdModule
    free: FdModule
    relations: Submodule
    projection: ModuleMap  # free -> module
    offsets: tuple  # offsets[i][j]: start of e_i M f_j ⊗ f_j Y inside the free component i

    def free_index(self, i: int, j: int, a: int, b: int, ydims) -> int:
        return self.offsets[i][j] + a * ydims[j] + b


def tensor_over_T(M: Bimodule, Y: FdModule) -> Tensor:
    if Y.algebra is not M.T:
        raise ModuleError("Y is not a module over T")
    U, T, field = M.U, M.T, M.field
    yd = Y.dims
    offsets, fdims = [], []
    for i in range(U.n):
        row, acc = [], 0
        for j in range(T.n):
            row.append(acc)
            acc += M.dim(i, j) * yd[j]
        offsets.append(tuple(row))
        fdims.append(acc)
    action = {}
    for u in range(U.dim):
        s, t = U.source[u], U.target[u]
        data = [[field.zero] * fdims[s] for _ in range(fdims[t])]
        for j in range(T.n):
            mat = M.columns[j].action[u]
            for a in range(M.dim(s, j)):
                for c in range(M.dim(t, j)):
                    coef = mat.data[c][a]
                    if not coef:
                        continue
                    for b in range(yd[j]):
                        data[offsets[t][j] + c * yd[j] + b][offsets[s][j] + a * yd[j] + b] = coef
        action[u] = Matrix._raw(field, fdims[t], fdims[s], tuple(tuple(r) for r in data))
    free = FdModule(U, fdims, action, check=False)
    rels = [[] for _ in range(U.n)]
    for t in T.generators:
        j2, j = T.source[t], T.target[t]  # t : f_{j2} -> f_j on Y, m t : column j -> column j2
        yt = Y.action[t]
        for i in range(U.n):
            rt = M.right[t][i]
            for a in range(M.dim(i, j)):
                for b in range(yd[j2]):
                    vec = [field.zero] * fdims[i]
                    for c in range(M.dim(i, j2)):
                        coef = rt.data[c][a]
                        if coef:
                            k = offsets[i][j2] + c * yd[j2] + b
                            vec[k] = field.norm(vec[k] + coef)
                    for d in range(yd[j]):
                        coef = yt.data[d][b]
                        if coef:
                            k = offsets[i][j] + a * yd[j] + d
                            vec[k] = field.norm(vec[k] - coef)
                    if any(vec):
                        rels[i].append(vec)
    relations = Submodule(free, [Subspace(field, fdims[i], rels[i]) for i in range(U.n)])
    mod, proj = relations.quotient()
    return Tensor(mod, free, relations, proj, tuple(offsets))


@dataclass
class Triple:
    """Λ-module data ``(Y, φ, X)`` with ``φ : M ⊗_T Y -> X`` a U-map."""

    Y: FdModule
    phi: ModuleMap
    X: FdModule
    tensor: Tensor

    def verify(self) -> bool:
        return self.phi.source is self.tensor.module and self.phi.target is self.X and self.phi.is_intertwiner()


def _free_phi(tri: Triangular, L: FdModule) -> list:
    """Per-U-vertex matrices ``free_i -> e_i X`` given by the action of M on ``L``."""
    M, field = tri.M, tri.lam.field
    yd = [L.dims[v] for v in tri.t_vertices]
    blocks = []
    for i in range(tri.U.n):
        xi = L.dims[tri.u_vertices[i]]
        cols = []
        for j in range(tri.T.n):
            for a in range(M.dim(i, j)):
                act = L.action[tri.m_basis[(i, j)][a]]
                cols.extend(act.columns() if yd[j] else [])
        blocks.append(Matrix.from_columns(field, xi, cols))
    return blocks


def restrict_T(tri: Triangular, L: FdModule) -> FdModule:
    dims = [L.dims[v] for v in tri.t_vertices]
    return FdModule(tri.T, dims, {t: L.action[tri.t_basis[t]] for t in range(tri.T.dim)}, check=False)


def restrict_U(tri: Triangular, L: FdModule) -> FdModule:
    dims = [L.dims[v] for v in tri.u_vertices]
    return FdModule(tri.U, dims, {u: L.action[tri.u_basis[u]] for u in range(tri.U.dim)}, check=False)


def to_triple(tri: Triangular, L: FdModule) -> Triple:
    if L.algebra is not tri.lam:
        raise ModuleError("module is not over Λ")
    Y, X = restrict_T(tri, L), restrict_U(tri, L)
    ten = tensor_over_T(tri.M, Y)
    free = _free_phi(tri, L)
    blocks = []
    for i, fb in enumerate(free):
        lift = ten.relations.spaces[i].quotient_lift()
        blocks.append(Matrix.from_columns(L.field, X.dims[i], [fb.apply(r) for r in lift.data]))
    return Triple(Y, ModuleMap(ten.module, X, blocks), X, ten)


def from_triple(tri: Triangular, tr: Triple, check: bool = True) -> FdModule:
    """Λ-module with action ``[t 0; m u] [y; x] = [t y; φ(m ⊗ y) + u x]``."""
    lam, field = tri.lam, tri.lam.field
    Y, X, ten = tr.Y, tr.X, tr.tensor
    if Y.algebra is not tri.T or X.algebra is not tri.U:
        raise ModuleError("triple components are over the wrong algebras")
    if check and not tr.verify():
        raise ModuleError("φ is not a U-module map M ⊗_T Y -> X")
    dims = [0] * lam.n
    for j, v in enumerate(tri.t_vertices):
        dims[v] = Y.dims[j]
    for i, v in enumerate(tri.u_vertices):
        dims[v] = X.dims[i]
    action = {}
    for t in range(tri.T.dim):
        action[tri.t_basis[t]] = Y.action[t]
    for u in range(tri.U.dim):
        action[tri.u_basis[u]] = X.action[u]
    yd = Y.dims
    for (i, j), idxs in tri.m_basis.items():
        comp = tr.phi.blocks[i] @ ten.projection.blocks[i]
        for a, mx in enumerate(idxs):
            cols = [comp.column(ten.free_index(i, j, a, b, yd)) for b in range(yd[j])]
            action[mx] = Matrix.from_columns(field, X.dims[i], cols)
    return FdModule(lam, dims, action, check=check)


def inflate_T(tri: Triangular, Y: FdModule) -> FdModule:
    """``(Y, 0, 0)``: the Λ-module with U part zero."""
    ten = tensor_over_T(tri.M, Y)
    X = _zero(tri.U)
    return from_triple(tri, Triple(Y, ModuleMap.zero(ten.module, X), X, ten), check=False)


def inflate_U(tri: Triangular, X: FdModule) -> FdModule:
    """``(0, 0, X)``: the Λ-module with T part zero."""
    Y = _zero(tri.T)
    ten = tensor_over_T(tri.M, Y)
    return from_triple(tri, Triple(Y, ModuleMap.zero(ten.module, X), X, ten), check=False)


def _zero(a: BasicAlgebra) -> FdModule:
    from .modcat import zero_module
    return zero_module(a)


def column_multiplication(tri: Triangular, j: int) -> ModuleMap:
    """The multiplication map ``M ⊗_T T f_j -> M f_j``."""
    Tf = projective(tri.T, j)
    ten = tensor_over_T(tri.M, Tf)
    col = tri.M.columns[j]
    T, field = tri.T, tri.M.field
    blocks = []
    for i in range(tri.U.n):
        free_cols = []
        for j2 in range(T.n):
            comp = T.component(j, j2)  # basis of f_{j2} T f_j
            for a in range(tri.M.dim(i, j2)):
                for t in comp:
                    # m_a ⊗ t  ->  m_a t  in e_i M f_j
                    free_cols.append(tri.M.right[t][i].column(a))
        fb = Matrix.from_columns(field, col.dims[i], free_cols)
        lift = ten.relations.spaces[i].quotient_lift()
        blocks.append(Matrix.from_columns(field, col.dims[i], [fb.apply(r) for r in lift.data]))
    return ModuleMap(ten.module, col, blocks)
