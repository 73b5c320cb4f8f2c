import random

from stratkit.corpus import (
    CorpusSpec,
    Instance,
    build_catalog,
    catalog_from_modules,
    generate_corpus,
    random_short_exact,
    split_sequence,
)
from stratkit.modcat import AtLeast, projective, simple
from stratkit.oracles import all_modules
from stratkit.strat import OrderedPartition, pd_of_family, standard_modules
from stratkit.theorems import (
    FAIL,
    HYPOTHESIS,
    INCONCLUSIVE,
    PASS,
    PdCache,
    check_support_finite,
    compare_le,
    componentwise_exactness,
    ext_vanishing,
    extension_closure,
    functor_identities,
    global_dimension,
    merge_verdicts,
    verify_instance,
    verify_pd_transfer,
    verify_standard_transfer,
    verify_theorem_A,
    verify_theorem_B,
    verify_theorem_C,
    verify_triple_membership,
)
from stratkit.triangular import (
    Bipartition,
    bimodule_from_generators,
    build_triangular,
    inflate_T,
    split_triangular,
    zero_bimodule,
)

from conftest import a2, point, two_cycle


def single(a):
    return OrderedPartition.single(a)


def kkk():
    k = point()
    return build_triangular(k, k, bimodule_from_generators(k, k, [[1]], {}, {}))


def a2_split():
    return split_triangular(a2(), Bipartition(("1",), ("2",)))


def test_compare_le_semantics():
    assert compare_le(1, 2) is True
    assert compare_le(2, 1) is False
    assert compare_le(1, AtLeast(4)) is None
    assert compare_le(AtLeast(4, True), 3) is False
    assert compare_le(2, AtLeast(4, True)) is True
    assert merge_verdicts([PASS, INCONCLUSIVE]) == INCONCLUSIVE
    assert merge_verdicts([PASS, FAIL, INCONCLUSIVE]) == FAIL


def test_theorem_a_trivial():
    tri = kkk()
    rep = verify_theorem_A(tri, single(tri.U), single(tri.T))
    assert rep.verdict == PASS
    assert rep.quantities["side_a"] and rep.quantities["side_b"]


def test_theorem_a_both_sides_false():
    k, U = point(), two_cycle()
    tri = build_triangular(k, U, zero_bimodule(U, k))
    pA = OrderedPartition.of(U, [["1"], ["2"]])
    rep = verify_theorem_A(tri, pA, single(k))
    assert rep.verdict == PASS
    assert rep.quantities["side_a"] is False and rep.quantities["side_b"] is False


def test_theorem_a_product_reduces():
    A2 = a2()
    tri = build_triangular(A2, A2, zero_bimodule(A2, A2))
    p = OrderedPartition.of(A2, [["2"], ["1"]])
    rep = verify_theorem_A(tri, p, p)
    assert rep.verdict == PASS and rep.quantities["side_a"]


def test_theorem_b_kkk():
    tri = kkk()
    inst = Instance(0, 0, tri, single(tri.U), single(tri.T))
    rep = verify_theorem_B(tri, build_catalog(inst))
    q = rep.quantities
    assert rep.verdict == PASS
    assert (q["m"], q["alpha"], q["beta"], q["gl_dim_Lambda"]) == (0, 0, 0, 1)
    assert (q["gl_lower"], q["gl_upper"]) == (0, 1)


def test_theorem_b_projective_bimodule():
    k, A2 = point(), a2()
    # M = U e_1, the projective of the source vertex, as a U-k-bimodule
    M = bimodule_from_generators(A2, k, [[1], [1]], {(A2.label_index("a"), 0): _one()}, {})
    tri = build_triangular(k, A2, M)
    inst = Instance(0, 0, tri, single(tri.U), single(tri.T))
    rep = verify_theorem_B(tri, build_catalog(inst))
    q = rep.quantities
    assert (q["m"], q["alpha"], q["beta"]) == (0, 0, 1)
    assert (q["gl_lower"], q["gl_upper"], q["gl_dim_Lambda"]) == (1, 1, 1)
    assert rep.verdict == PASS


def _one():
    from stratkit.exactla import Matrix
    from conftest import F2
    return Matrix.identity(F2, 1)


def test_theorem_b_product():
    A2, k = a2(), point()
    tri = build_triangular(k, A2, zero_bimodule(A2, k))
    inst = Instance(0, 0, tri, single(tri.U), single(tri.T))
    rep = verify_theorem_B(tri, build_catalog(inst))
    q = rep.quantities
    assert q["gl_dim_Lambda"] == max(q["alpha"], q["beta"]) == 1
    assert rep.verdict == PASS


def test_theorem_b_hypothesis_violated():
    k, U = point(), two_cycle()
    M = bimodule_from_generators(U, k, [[1], [0]], {}, {})
    tri = build_triangular(k, U, M)
    inst = Instance(0, 0, tri, single(tri.U), single(tri.T))
    rep = verify_theorem_B(tri, build_catalog(inst), cap=6)
    assert rep.verdict == HYPOTHESIS


def test_theorem_c_a2_exhaustive_catalog():
    tri = a2_split()
    cat = catalog_from_modules(tri, all_modules(tri.lam, 2))
    # dims (1,0), (0,1), (2,0), (0,2) and two classes on (1,1): a = 0 or a != 0
    assert len(cat.lam) == 6
    rep = verify_theorem_C(tri, single(tri.U), single(tri.T), cat)
    q = rep.quantities
    assert rep.verdict == PASS
    assert q["a_holds"] and q["b_holds"]
    assert q["pd_Delta_Lambda"] == 1 == q["fin_dim_catalog_Lambda"]
    assert q["pd_Delta_U"] == 0 and q["pd_Delta_T"] == 0
    # the opposite order on the same algebra has projective standards
    other = standard_modules(tri.lam, OrderedPartition.of(tri.lam, [["1"], ["2"]]))
    assert pd_of_family(other) == 0


def test_theorem_c_semisimple_product():
    k = point()
    tri = build_triangular(k, k, zero_bimodule(k, k))
    cat = catalog_from_modules(tri, all_modules(tri.lam, 3))
    rep = verify_theorem_C(tri, single(tri.U), single(tri.T), cat)
    assert rep.verdict == PASS
    assert rep.quantities["pd_Delta_Lambda"] == 0


def test_theorem_c_two_cycle_sweep():
    k, U = point(), two_cycle()
    tri = build_triangular(k, U, zero_bimodule(U, k))
    cat = catalog_from_modules(tri, all_modules(tri.lam, 3))
    rep = verify_theorem_C(tri, single(tri.U), single(tri.T), cat, cap=8)
    # only projectives have finite pd, and they are exactly the filtered modules
    assert rep.verdict == PASS
    assert rep.quantities["a_holds"] and rep.quantities["U_side"]


def test_pd_transfer_witness():
    tri = a2_split()
    inst = Instance(0, 0, tri, single(tri.U), single(tri.T))
    rep = verify_pd_transfer(tri, build_catalog(inst))
    assert rep.verdict == PASS
    pd = PdCache()
    assert pd(inflate_T(tri, simple(tri.T, 0))) == 1
    assert global_dimension(tri.lam, pd) == 1


def test_support_finite():
    rep = check_support_finite(a2_split())
    assert rep.verdict == PASS
    assert rep.quantities["supp_Mf"] == {"1": ["2"]}
    k = point()
    rep = check_support_finite(build_triangular(k, k, zero_bimodule(k, k)))
    assert rep.quantities["supp_Mf"] == {"1": []}


CORPUS = generate_corpus(CorpusSpec(seed=3, count=12, primes=(2, 3)))


def test_corpus_instances_are_basic():
    from stratkit.presentation import validate_basic
    for inst in generate_corpus(CorpusSpec(seed=1, count=20)):
        assert validate_basic(inst.tri.lam).basic


def test_corpus_is_deterministic():
    spec = CorpusSpec(seed=9, count=6)
    a = [i.tri.lam.to_json() for i in generate_corpus(spec)]
    b = [i.tri.lam.to_json() for i in generate_corpus(spec)]
    assert a == b


def test_tiny_bounds_give_semisimple():
    # one vertex per side and total dimension 2 leaves no room for arrows
    spec = CorpusSpec(seed=4, count=10, max_t_vertices=1, max_u_vertices=1, max_total_dim=2)
    for inst in generate_corpus(spec):
        lam = inst.tri.lam
        assert lam.radical_basis() == () and inst.tri.M.is_zero()


def test_unit_component_bound_has_no_loops():
    spec = CorpusSpec(seed=4, count=10, max_component_dim=1)
    for inst in generate_corpus(spec):
        lam = inst.tri.lam
        assert all(lam.component_dim(v, v) == 1 for v in range(lam.n))


def test_verify_instance_on_corpus():
    for inst in CORPUS:
        for rep in verify_instance(inst):
            assert rep.verdict in (PASS, HYPOTHESIS), (inst.index, rep.theorem, rep.to_json())


def test_triple_membership_and_standards():
    for inst in CORPUS:
        cat = build_catalog(inst)
        rep = verify_triple_membership(inst.tri, inst.pA, inst.pB, cat.lam)
        assert rep.verdict == PASS
        assert verify_standard_transfer(inst.tri, inst.pA, inst.pB)


def test_functors_and_exactness():
    rng = random.Random(0)
    for inst in CORPUS:
        tri, cat = inst.tri, build_catalog(inst)
        assert functor_identities(tri, cat.T, cat.U) == []
        assert ext_vanishing(tri, cat.U[:4], cat.T[:4]) == []
        for _ in range(3):
            f, g = random_short_exact(rng, cat.lam)
            lam_ok, parts_ok = componentwise_exactness(tri, f, g)
            assert lam_ok and parts_ok
        f, g = split_sequence(cat.lam[0], cat.lam[-1])
        assert componentwise_exactness(tri, f, g) == (True, True)


def test_non_exact_sequence_detected():
    tri = a2_split()
    from stratkit.modcat import ModuleMap
    p1 = projective(tri.lam, 0)
    s1 = simple(tri.lam, 0)
    z = ModuleMap.zero(p1, s1)
    f = ModuleMap.identity(p1)
    assert componentwise_exactness(tri, f, z) == (False, False)


def test_extension_closure_small():
    for inst in CORPUS[:6]:
        fam = standard_modules(inst.tri.lam, inst.pC)
        checked, bad = extension_closure(fam, build_catalog(inst).lam[:8])
        assert bad == []
