import itertools

import pytest
from hypothesis import given, settings, strategies as st

from stratkit.exactla import Field
from stratkit.modcat import (
    ModuleMap,
    combine,
    direct_sum,
    hom_basis,
    is_finite_pd,
    iso_test,
    projective,
    projective_dimension,
    simple,
    top_vector,
)
from stratkit.oracles import all_modules, brute_filtrations, multiset_to_table
from stratkit.strat import (
    OrderedPartition,
    PartitionError,
    check_certificate,
    delta_filtration,
    is_standardly_stratified,
    standard_modules,
)

from conftest import F2
from helpers import random_module, rng_of, small_algebras


def order(a, *groups):
    return OrderedPartition.of(a, [list(g) for g in groups])


def test_partition_validation(A2):
    with pytest.raises(PartitionError):
        order(A2, ["1"])
    with pytest.raises(PartitionError):
        order(A2, ["1"], ["1", "2"])
    p = order(A2, ["2"], ["1"])
    assert p.level_of(0) == 1 and p.below(1) == (1,)


def test_one_level_standards_are_projectives(A2, cycle):
    for a in (A2, cycle):
        fam = standard_modules(a, OrderedPartition.single(a))
        for v in range(a.n):
            assert fam.deltas[v].dims == fam.projectives[v].dims
        assert is_standardly_stratified(a, OrderedPartition.single(a)).holds


def test_a2_standards_both_orders(A2):
    fam = standard_modules(A2, order(A2, ["1"], ["2"]))
    assert fam.delta("1").dims == (1, 1)
    assert iso_test(fam.delta("2"), simple(A2, 1)).isomorphic
    assert fam.traces[1].is_zero()
    fam = standard_modules(A2, order(A2, ["2"], ["1"]))
    assert iso_test(fam.delta("2"), projective(A2, 1)).isomorphic
    assert iso_test(fam.delta("1"), simple(A2, 0)).isomorphic


def test_a2_p1_certificate(A2):
    fam = standard_modules(A2, order(A2, ["2"], ["1"]))
    cert = delta_filtration(projective(A2, 0), fam)
    assert cert.filtered
    assert [s.dims for s in cert.chain] == [(0, 1), (1, 1)]
    assert cert.multiplicities() == {0: 1, 1: 1}
    assert check_certificate(cert, fam)


def test_delta_itself_and_doubled(A2):
    fam = standard_modules(A2, order(A2, ["2"], ["1"]))
    d = fam.deltas[0]
    cert = delta_filtration(d, fam)
    assert len(cert.layers) == 1 and cert.multiplicities() == {0: 1}
    s, _, _ = direct_sum([d, d])
    assert delta_filtration(s, fam).multiplicities() == {0: 2}


def test_a2_stratified_both_orders(A2):
    for groups in ((["1"], ["2"]), (["2"], ["1"])):
        v = is_standardly_stratified(A2, order(A2, *groups))
        assert v.holds
        assert set(v.certificates) == {0, 1}


def test_two_cycle_fails_both_orders(cycle):
    v = is_standardly_stratified(cycle, order(cycle, ["1"], ["2"]))
    assert not v.holds
    assert v.counterexample_vertex == 1
    assert v.counterexample.layer.dims == (1, 0)
    assert "(1, 0)" in v.counterexample.reason and "(1, 1)" in v.counterexample.reason
    v = is_standardly_stratified(cycle, order(cycle, ["2"], ["1"]))
    assert not v.holds and v.counterexample_vertex == 0


def test_tampered_certificate_rejected(A2):
    fam = standard_modules(A2, order(A2, ["2"], ["1"]))
    cert = delta_filtration(projective(A2, 0), fam)
    cert.chain = cert.chain[1:]
    assert not check_certificate(cert, fam)


def test_oracle_agreement_on_two_cycle(cycle):
    mods = all_modules(cycle, 3)
    for groups in ((["1"], ["2"]), (["2"], ["1"])):
        fam = standard_modules(cycle, order(cycle, *groups))
        for m in mods:
            assert delta_filtration(m, fam).filtered == bool(brute_filtrations(m, fam))


# properties ---------------------------------------------------------------------

ALGS = small_algebras(Field.prime(2))


@st.composite
def instances(draw):
    a = draw(st.sampled_from(ALGS))
    perm = draw(st.permutations(range(a.n)))
    cuts = [draw(st.booleans()) for _ in range(a.n - 1)]
    levels, cur = [], [perm[0]]
    for v, cut in zip(perm[1:], cuts):
        if cut:
            levels.append(tuple(cur))
            cur = []
        cur.append(v)
    levels.append(tuple(cur))
    seed = draw(st.integers(0, 10**6))
    return a, OrderedPartition(tuple(levels)), seed


@settings(max_examples=40, deadline=None)
@given(instances())
def test_certificates_replay(inst):
    a, p, seed = inst
    fam = standard_modules(a, p)
    m = random_module(a, rng_of(seed), 2, 1)
    res = delta_filtration(m, fam)
    if res.filtered:
        assert check_certificate(res, fam)
        assert sum(c * fam.deltas[v].total_dim for v, c in res.multiplicities().items()) == m.total_dim


@settings(max_examples=25, deadline=None)
@given(instances())
def test_tau_test_matches_oracle(inst):
    a, p, seed = inst
    fam = standard_modules(a, p)
    m = random_module(a, rng_of(seed), 2, 1)
    if m.total_dim > 4:
        return
    brute = brute_filtrations(m, fam)
    res = delta_filtration(m, fam)
    assert res.filtered == bool(brute)
    if res.filtered:
        assert all(multiset_to_table(b) == res.multiplicities() for b in brute)


def _power(f, k):
    out = ModuleMap.identity(f.source)
    for _ in range(k):
        out = f.compose(out)
    return out


@settings(max_examples=25, deadline=None)
@given(instances())
def test_standards_have_simple_top_and_local_end(inst):
    a, p, _ = inst
    fam = standard_modules(a, p)
    for v, d in fam.deltas.items():
        assert top_vector(d) == tuple(int(w == v) for w in range(a.n))
        basis = hom_basis(d, d)
        if len(basis) > 8:
            continue
        # local ring: every endomorphism is a unit or nilpotent
        for coeffs in itertools.product((0, 1), repeat=len(basis)):
            f = ModuleMap.zero(d, d)
            for c, g in zip(coeffs, basis):
                if c:
                    f = f + g
            assert f.kernel().total_dim == 0 or _power(f, d.total_dim).is_zero()


def _filtered_pool(fam, limit=4):
    deltas = list(fam.deltas.values())
    pool = [d for d in deltas if d.total_dim <= limit]
    for x, y in itertools.combinations_with_replacement(deltas, 2):
        if x.total_dim + y.total_dim <= limit:
            pool.append(direct_sum([x, y])[0])
    return pool


@settings(max_examples=20, deadline=None)
@given(instances())
def test_kernels_of_epis_stay_filtered(inst):
    a, p, _ = inst
    if not is_standardly_stratified(a, p).holds:
        return
    fam = standard_modules(a, p)
    pool = _filtered_pool(fam)
    for x, y in itertools.product(pool, repeat=2):
        if x.total_dim < y.total_dim:
            continue
        basis = hom_basis(x, y)
        if not basis or len(basis) > 6:
            continue
        for coeffs in itertools.product((0, 1), repeat=len(basis)):
            f = combine(basis, coeffs, x, y)
            if f.is_surjective():
                k, _ = f.kernel().as_module()
                assert delta_filtration(k, fam).filtered


@settings(max_examples=20, deadline=None)
@given(instances())
def test_filtered_modules_have_finite_pd(inst):
    a, p, _ = inst
    if not is_standardly_stratified(a, p).holds:
        return
    for m in _filtered_pool(standard_modules(a, p)):
        assert is_finite_pd(projective_dimension(m))
