"""Brute-force reference computations over small prime fields.

These are deliberately naive: they enumerate every module structure of a
given dimension vector, every submodule, and every composition of standard
layers.  They exist to cross-check the τ-layer filtration test.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Iterator

from .algebra import BasicAlgebra
from .exactla import Matrix
from .modcat import FdModule, ModuleError, Submodule, iso_test
from .strat import StandardFamily


def dim_vectors(n: int, max_total: int) -> Iterator[tuple]:
    for dims in itertools.product(range(max_total + 1), repeat=n):
        if 0 < sum(dims) <= max_total:
            yield dims


def generator_cells(a: BasicAlgebra, dims) -> int:
    return sum(dims[a.target[g]] * dims[a.source[g]] for g in a.generators)


def _gl_generators(p: int, d: int) -> list:
    """Pairs ``(g, g^{-1})`` generating GL(d, p)."""
    if d == 0:
        return []
    ident = [[int(i == j) for j in range(d)] for i in range(d)]
    gens = []
    # scalar on the first coordinate
    for c in range(2, p):
        g = [row[:] for row in ident]
        g[0][0] = c
        h = [row[:] for row in ident]
        h[0][0] = pow(c, p - 2, p)
        gens.append((g, h))
    if d >= 2:
        t = [row[:] for row in ident]
        t[0][1] = 1
        ti = [row[:] for row in ident]
        ti[0][1] = p - 1
        gens.append((t, ti))
        s = [row[:] for row in ident]
        s[0][0] = s[1][1] = 0
        s[0][1] = s[1][0] = 1
        gens.append((s, s))
        if d >= 3:
            cyc = [[int(i == (j + 1) % d) for j in range(d)] for i in range(d)]
            inv = [[cyc[j][i] for j in range(d)] for i in range(d)]
            gens.append((cyc, inv))
    return gens


def _mul(a, b, p):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    return tuple(tuple(sum(a[i][r] * b[r][j] for r in range(k)) % p for j in range(m)) for i in range(n))


def module_structures(a: BasicAlgebra, dims) -> Iterator[FdModule]:
    """Every module with dimension vector ``dims`` (generator matrices enumerated)."""
    field = a.field
    if not field.is_finite:
        raise ValueError("enumeration needs a finite field")
    p = field.p
    cells = [(g, dims[a.target[g]], dims[a.source[g]]) for g in a.generators]
    total = sum(r * c for _, r, c in cells)
    for flat in itertools.product(range(p), repeat=total):
        gens, k = {}, 0
        for g, r, c in cells:
            gens[g] = Matrix._raw(field, r, c, tuple(tuple(flat[k + i * c + j] for j in range(c)) for i in range(r)))
            k += r * c
        try:
            yield FdModule.from_generators(a, dims, gens)
        except ModuleError:
            continue


def _key(m: FdModule) -> tuple:
    return tuple(m.action[g].data for g in m.algebra.generators)


def iso_classes(a: BasicAlgebra, dims) -> list:
    """One representative per isomorphism class, found by exploring GL orbits."""
    p = a.field.p
    gl = [_gl_generators(p, d) for d in dims]
    gens_idx = a.generators
    seen = set()
    reps = []
    for m in module_structures(a, dims):
        k = _key(m)
        if k in seen:
            continue
        reps.append(m)
        seen.add(k)
        queue = deque([k])
        while queue:
            cur = queue.popleft()
            for v in range(a.n):
                for g, gi in gl[v]:
                    nxt = []
                    for x, mat in zip(gens_idx, cur):
                        s, t = a.source[x], a.target[x]
                        if t == v:
                            mat = _mul(g, mat, p)
                        if s == v:
                            mat = _mul(mat, gi, p)
                        nxt.append(mat)
                    nk = tuple(nxt)
                    if nk not in seen:
                        seen.add(nk)
                        queue.append(nk)
    return reps


def all_modules(a: BasicAlgebra, max_total: int) -> list:
    out = []
    for dims in dim_vectors(a.n, max_total):
        out.extend(iso_classes(a, dims))
    return out


def _subspaces(field, d: int) -> list:
    """Every subspace of ``F_p^d`` as a canonical Subspace."""
    from .exactla import Subspace
    vecs = list(itertools.product(range(field.p), repeat=d))
    found = {Subspace.zero(field, d)}
    frontier = [Subspace.zero(field, d)]
    while frontier:
        nxt = []
        for s in frontier:
            for v in vecs:
                if not s.contains(v):
                    t = s.extend([v])
                    if t not in found:
                        found.add(t)
                        nxt.append(t)
        frontier = nxt
    return sorted(found, key=lambda s: (s.dim, s.basis))


def submodules(m: FdModule) -> list:
    per_vertex = [_subspaces(m.field, d) for d in m.dims]
    out = []
    for choice in itertools.product(*per_vertex):
        s = Submodule(m, choice)
        if s.is_closed():
            out.append(s)
    return out


def brute_filtrations(m: FdModule, fam: StandardFamily) -> list:
    """Multisets (sorted vertex tuples) of Δ-factors over every Δ-filtration of ``m``.

    A filtration is built top-down: pick a submodule ``K`` with ``m / K``
    isomorphic to a single standard module and recurse into ``K``.  Level
    order plays no role in the search.
    """
    memo: dict = {}

    def search(x: FdModule) -> frozenset:
        if x.is_zero():
            return frozenset([()])
        key = (x.dims, _key(x))
        if key in memo:
            return memo[key]
        found = set()
        for k in submodules(x):
            codims = tuple(d - e for d, e in zip(x.dims, k.dims))
            if not any(codims):
                continue
            matches = [v for v, d in fam.deltas.items() if d.dims == codims]
            if not matches:
                continue
            q, _ = k.quotient()
            hits = [v for v in matches if iso_test(q, fam.deltas[v]).isomorphic]
            if not hits:
                continue
            sub, _ = k.as_module()
            for rest in search(sub):
                for v in hits:
                    found.add(tuple(sorted(rest + (v,))))
        memo[key] = frozenset(found)
        return memo[key]

    return sorted(search(m))


def brute_is_filtered(m: FdModule, fam: StandardFamily) -> bool:
    return bool(brute_filtrations(m, fam))


def multiset_to_table(ms: tuple) -> dict:
    out: dict = {}
    for v in ms:
        out[v] = out.get(v, 0) + 1
    return out
