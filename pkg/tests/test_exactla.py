from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from stratkit.exactla import (
    Field,
    InconsistentSystem,
    Matrix,
    Subspace,
    nullspace,
    rref,
    solve,
    solve_vector,
    subspace_ops,
)

Q = Field.rationals()
F2, F3, F5 = Field.prime(2), Field.prime(3), Field.prime(5)


def test_field_parsing_and_format():
    assert Q("3/6") == Fraction(1, 2)
    assert Q.fmt(Fraction(-4, 2)) == "-2"
    assert F3("5") == 2
    assert F5.inv(2) == 3
    assert Field.from_json(F3.to_json()) == F3
    assert Field.from_json({"kind": "rational"}) == Q


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        Field.prime(4)


def test_rref_identity():
    r = rref(Matrix.identity(Q, 2))
    assert r.rank == 2 and r.pivot_cols == (0, 1)
    assert r.reduced == Matrix.identity(Q, 2)


def test_rref_zero():
    r = rref(Matrix.zeros(Q, 3, 3))
    assert r.rank == 0 and r.pivot_cols == ()


def test_rref_rank_one_over_q():
    r = rref(Matrix.from_rows(Q, [[1, 2], [2, 4]]))
    assert r.rank == 1
    assert r.reduced.data == ((1, 2),)
    assert r.pivot_cols == (0,)


def test_solve_identity_and_zero():
    b = Matrix.from_rows(Q, [[3], [Fraction(1, 2)]])
    sol = solve(Matrix.identity(Q, 2), b)
    assert sol.particular == b and sol.nullspace.dim == 0
    sol = solve(Matrix.zeros(Q, 2, 3), Matrix.zeros(Q, 2, 1))
    assert sol.particular.is_zero() and sol.nullspace.dim == 3


def test_solve_f3_example():
    a = Matrix.from_rows(F3, [[1, 1]])
    sol = solve(a, Matrix.from_rows(F3, [[2]]))
    assert sol.particular.column(0) == (2, 0)
    assert sol.nullspace == Subspace(F3, 2, [[1, 2]])
    # exhaustive check of the solution set
    found = {(x, y) for x in range(3) for y in range(3) if (x + y) % 3 == 2}
    assert found == {tuple((p + t * n) % 3 for p, n in zip((2, 0), (1, 2))) for t in range(3)}


def test_inconsistent():
    with pytest.raises(InconsistentSystem):
        solve(Matrix.zeros(Q, 1, 1), Matrix.from_rows(Q, [[1]]))


def test_inverse():
    m = Matrix.from_rows(Q, [[2, 1], [1, 1]])
    assert m @ m.inverse() == Matrix.identity(Q, 2)
    assert not Matrix.from_rows(F2, [[1, 1], [1, 1]]).is_invertible()


def test_subspace_trivial_cases():
    u = Subspace(Q, 3, [[1, 0, 0], [0, 1, 1]])
    ops = subspace_ops(u, u)
    assert ops.sum == u and ops.intersection == u
    v = Subspace(Q, 3, [[0, 0, 1]])
    ops = subspace_ops(u, v)
    assert ops.intersection.dim == 0 and ops.sum == Subspace.full(Q, 3)
    assert ops.quotient_lift.rows == 1


def _span(vecs, p, d):
    import itertools
    out = set()
    for cs in itertools.product(range(p), repeat=len(vecs)):
        out.add(tuple(sum(c * v[i] for c, v in zip(cs, vecs)) % p for i in range(d)))
    return out


def test_modular_law_by_enumeration():
    # two planes in F_2^4 meeting in a line
    u = Subspace(F2, 4, [[1, 0, 0, 0], [0, 1, 1, 0]])
    v = Subspace(F2, 4, [[1, 1, 1, 0], [0, 0, 0, 1]])
    su, sv = _span(u.basis, 2, 4), _span(v.basis, 2, 4)
    inter = su & sv
    total = {tuple((a + b) % 2 for a, b in zip(x, y)) for x in su for y in sv}
    assert len(inter) == 2 ** u.intersection(v).dim
    assert len(total) == 2 ** (u + v).dim
    assert (u + v).dim + u.intersection(v).dim == u.dim + v.dim


# property tests ----------------------------------------------------------------

fields = st.sampled_from([Q, F2, F3, F5])


@st.composite
def matrices(draw, field=None, max_dim=4):
    f = field or draw(fields)
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    vals = st.integers(-3, 3) if not f.is_finite else st.integers(0, f.p - 1)
    rows = [[f(draw(vals)) for _ in range(c)] for _ in range(r)]
    return Matrix(f, r, c, rows)


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rref_idempotent(m):
    r = rref(m)
    again = rref(r.reduced) if r.rank else r
    assert again.reduced == r.reduced and again.pivot_cols == r.pivot_cols


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    assert m.rank() + nullspace(m).dim == m.cols
    for v in nullspace(m).basis:
        assert all(x == 0 for x in m.apply(v))


@settings(max_examples=80, deadline=None)
@given(matrices(), st.data())
def test_solve_round_trip(m, data):
    f = m.field
    vals = st.integers(-3, 3) if not f.is_finite else st.integers(0, f.p - 1)
    x = [f(data.draw(vals)) for _ in range(m.cols)]
    b = m.apply(x)
    y = solve_vector(m, b)
    assert m.apply(y) == b


@settings(max_examples=60, deadline=None)
@given(matrices(max_dim=4), matrices(max_dim=4))
def test_dimension_formula(a, b):
    if a.field != b.field or a.rows != b.rows:
        return
    u, v = Subspace.column_space(a), Subspace.column_space(b)
    assert (u + v).dim + u.intersection(v).dim == u.dim + v.dim
    assert u.intersection(v).is_subspace_of(u)
