import pytest
from hypothesis import given, settings, strategies as st

from stratkit.exactla import Field
from stratkit.modcat import (
    AtLeast,
    FdModule,
    ModuleError,
    ModuleMap,
    direct_sum,
    ext1_data,
    ext1_dim,
    ext_realize,
    hom_basis,
    hom_dim,
    iso_test,
    min_resolution,
    pd_max,
    projective,
    projective_cover,
    projective_dimension,
    radical_top,
    simple,
    trace,
    zero_module,
)

from conftest import F2, a2
from helpers import base_change, random_module, rng_of, small_algebras

F3 = Field.prime(3)
Q = Field.rationals()


def test_point_projective_is_simple(k):
    p = projective(k, 0)
    assert p.dims == (1,)
    assert iso_test(p, simple(k, 0)).isomorphic


def test_a2_projectives(A2):
    assert projective(A2, 0).dims == (1, 1)
    assert projective(A2, 1).dims == (0, 1)


def test_two_cycle_projective(cycle):
    assert projective(cycle, 0).dims == (1, 1)


def test_bad_action_rejected(cycle):
    from stratkit.exactla import Matrix
    one = Matrix.identity(F2, 1)
    gens = {cycle.label_index("a"): one, cycle.label_index("b"): one}
    with pytest.raises(ModuleError):
        FdModule.from_generators(cycle, (1, 1), gens)


def test_hom_desk_values(A2):
    p1, p2 = projective(A2, 0), projective(A2, 1)
    assert hom_dim(simple(A2, 0), simple(A2, 0)) == 1
    assert hom_dim(p1, p2) == 0
    assert hom_dim(p2, p1) == 1
    for f in hom_basis(p2, p1):
        assert f.is_intertwiner()


def test_trace_desk_values(A2):
    p1, p2 = projective(A2, 0), projective(A2, 1)
    assert trace([p1], p1).is_whole()
    assert trace([p1], p2).is_zero()
    t = trace([p2], p1)
    assert t.dims == (0, 1)
    assert t == radical_top(p1).rad


def test_radical_top(A2, cycle):
    s = simple(A2, 0)
    rt = radical_top(s)
    assert rt.rad.is_zero() and rt.top.dims == (1, 0)
    rt = radical_top(projective(A2, 0))
    assert rt.rad.dims == (0, 1) and rt.top.dims == (1, 0)
    rad, _ = radical_top(projective(cycle, 1)).rad.as_module()
    assert iso_test(rad, simple(cycle, 0)).isomorphic


def test_projective_cover(A2):
    c = projective_cover(simple(A2, 0))
    assert c.summands == (0,)
    assert c.kernel.dims == (0, 1)
    c = projective_cover(simple(A2, 1))
    assert c.summands == (1,) and c.kernel.is_zero()
    p = projective(A2, 0)
    c = projective_cover(p)
    assert c.epi.is_isomorphism()
    with pytest.raises(ModuleError):
        projective_cover(zero_module(A2))


def test_pd_desk_values(A2, cycle):
    assert projective_dimension(projective(A2, 0)) == 0
    assert projective_dimension(simple(A2, 0)) == 1
    res, pd = min_resolution(simple(A2, 0))
    assert res.verify() and [list(s) for s in res.summands] == [[0], [1]]
    assert projective_dimension(zero_module(A2)) == 0
    pd = projective_dimension(simple(cycle, 0), cap=5)
    assert isinstance(pd, AtLeast) and pd.bound == 5 and pd.infinite
    assert str(pd).startswith(">=5")


def test_pd_cap_without_period_detection(cycle):
    _, pd = min_resolution(simple(cycle, 0), cap=4, detect_period=False)
    assert pd == AtLeast(4)


def test_pd_max():
    assert pd_max([0, 2, 1]) == 2
    assert pd_max([1, AtLeast(3)]) == AtLeast(3)
    assert pd_max([AtLeast(3), AtLeast(3, True), 2]) == AtLeast(3, True)
    assert pd_max([]) == 0


def test_ext_desk_values(A2):
    s1, s2 = simple(A2, 0), simple(A2, 1)
    assert ext1_dim(s1, s2) == 1
    assert ext1_dim(s2, s1) == 0
    assert ext1_dim(projective(A2, 0), s2) == 0


def test_ext_realize_nonsplit_is_p1(A2):
    s1, s2 = simple(A2, 0), simple(A2, 1)
    data = ext1_data(s1, s2)
    ext = ext_realize(s1, s2, data.class_reps[0], data)
    assert ext.is_exact()
    assert iso_test(ext.middle, projective(A2, 0)).isomorphic


def test_ext_realize_split_and_zero(A2):
    s1, s2 = simple(A2, 0), simple(A2, 1)
    data = ext1_data(s1, s2)
    ext = ext_realize(s1, s2, ModuleMap.zero(data.omega, s2), data)
    s, _, _ = direct_sum([s2, s1])
    assert ext.is_exact() and iso_test(ext.middle, s).isomorphic
    z = zero_module(A2)
    data = ext1_data(s1, z)
    ext = ext_realize(s1, z, ModuleMap.zero(data.omega, z), data)
    assert iso_test(ext.middle, s1).isomorphic


def test_iso_desk_values(A2):
    p1 = projective(A2, 0)
    r = iso_test(p1, p1)
    assert r.isomorphic and r.map.is_isomorphism()
    assert not iso_test(p1, simple(A2, 0)).isomorphic
    s, _, _ = direct_sum([simple(A2, 0), simple(A2, 1)])
    r = iso_test(p1, s)
    assert not r.isomorphic and r.exact


def test_iso_over_q_finds_map():
    a = a2(Q)
    rng = rng_of(3)
    m = random_module(a, rng, 3, 1)
    copy, _ = base_change(m, rng)
    r = iso_test(m, copy)
    assert r.isomorphic and r.map.is_isomorphism()


# properties ---------------------------------------------------------------------

ALGS = {p: small_algebras(Field.prime(p)) for p in (2, 3)}


@st.composite
def modules(draw):
    p = draw(st.sampled_from([2, 3]))
    a = draw(st.sampled_from(ALGS[p]))
    seed = draw(st.integers(0, 10**6))
    return random_module(a, rng_of(seed)), seed


@settings(max_examples=40, deadline=None)
@given(modules(), st.data())
def test_hom_from_projective_is_vertex_space(ms, data):
    m, _ = ms
    v = data.draw(st.integers(0, m.algebra.n - 1))
    assert hom_dim(projective(m.algebra, v), m) == m.dims[v]


@settings(max_examples=30, deadline=None)
@given(modules(), modules())
def test_trace_is_idempotent(ms, ns):
    m, _ = ms
    x, _ = ns
    if x.algebra is not m.algebra:
        return
    t = trace([x], m)
    sub, incl = t.as_module()
    assert trace([x], sub).is_whole()


@settings(max_examples=30, deadline=None)
@given(modules())
def test_pd_invariant_under_base_change(ms):
    m, seed = ms
    copy, _ = base_change(m, rng_of(seed + 1))
    assert projective_dimension(m, cap=6) == projective_dimension(copy, cap=6)
    assert iso_test(m, copy).isomorphic


@settings(max_examples=30, deadline=None)
@given(modules(), modules())
def test_split_extension_is_direct_sum(ms, ns):
    m, _ = ms
    n, _ = ns
    if n.algebra is not m.algebra:
        return
    data = ext1_data(m, n)
    ext = ext_realize(m, n, ModuleMap.zero(data.omega, n), data)
    s, _, _ = direct_sum([n, m])
    assert ext.is_exact()
    assert iso_test(ext.middle, s).isomorphic


@settings(max_examples=30, deadline=None)
@given(modules())
def test_resolution_is_exact(ms):
    m, _ = ms
    res, pd = min_resolution(m, cap=5)
    assert res.verify()
    if not isinstance(pd, AtLeast):
        assert len(res.summands) == pd + 1 or (m.is_zero() and pd == 0)
