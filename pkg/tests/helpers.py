"""Random modules and base changes shared by the tests."""

import random

from stratkit.exactla import Matrix
from stratkit.modcat import FdModule, direct_sum, generated_submodule, projective
from stratkit.presentation import compute_basis, presentation_from_parts


def random_invertible(field, d, rng):
    while True:
        m = Matrix(field, d, d, [[field.random(rng) for _ in range(d)] for _ in range(d)])
        if m.is_invertible():
            return m


def base_change(m, rng):
    """An isomorphic copy of ``m`` written in random bases; returns (copy, blocks)."""
    a = m.algebra
    gs = [random_invertible(a.field, d, rng) for d in m.dims]
    inv = [g.inverse() for g in gs]
    action = {x: gs[a.target[x]] @ mat @ inv[a.source[x]] for x, mat in m.action.items()}
    return FdModule(a, m.dims, action), gs


def random_module(a, rng, max_summands=2, max_relations=2):
    """A quotient of a random sum of indecomposable projectives."""
    vs = [rng.randrange(a.n) for _ in range(rng.randint(1, max_summands))]
    s, _, _ = direct_sum([projective(a, v) for v in vs])
    gens = {}
    for _ in range(rng.randint(0, max_relations)):
        v = rng.randrange(a.n)
        if s.dims[v]:
            gens.setdefault(v, []).append([a.field.random(rng) for _ in range(s.dims[v])])
    q, _ = generated_submodule(s, gens).quotient()
    return q


def small_algebras(field, seed=0, count=6):
    """A few fixed-shape bound quivers used across the property tests."""
    shapes = [
        (["1", "2"], [("a", "1", "2")], [], None),
        (["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")], [[(1, ["a", "b"])]], None),
        (["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")], [], None),
        (["1", "2"], [("a", "1", "2"), ("b", "2", "1")], [[(1, ["a", "b"])], [(1, ["b", "a"])]], 1),
        (["1"], [("x", "1", "1")], [[(1, ["x", "x", "x"])]], 2),
        (["1", "2"], [("a", "1", "2"), ("b", "1", "2")], [], None),
        (["1", "2", "3"], [("a", "1", "2"), ("b", "1", "3"), ("c", "2", "3")], [], None),
    ]
    out = []
    for vs, arrows, rels, bound in shapes[:count]:
        out.append(compute_basis(presentation_from_parts(field, vs, arrows, rels, nilpotency_bound=bound)))
    return out


def rng_of(seed):
    return random.Random(seed)
