"""Executable checks of the structural results on concrete instances.

Every verifier returns a :class:`TheoremReport` whose ``verdict`` is one of
``pass``, ``fail``, ``inconclusive`` (some projective dimension hit the cap
without a proof of infinitude) or ``hypothesis-violated``.

Projective dimensions are ints or :class:`~stratkit.modcat.AtLeast`.  An
``AtLeast`` flagged ``infinite`` was proven infinite by a repeated syzygy and
is compared as ``inf``; a plain ``AtLeast`` makes any comparison it enters
inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .algebra import BasicAlgebra
from .modcat import (
    DEFAULT_CAP,
    AtLeast,
    FdModule,
    ModuleMap,
    ext1_dim,
    is_short_exact,
    min_resolution,
    pd_max,
    pd_to_json,
    simple,
)
from .strat import (
    OrderedPartition,
    StandardFamily,
    check_certificate,
    delta_filtration,
    is_standardly_stratified,
    standard_modules,
)
from .triangular import (
    Triangular,
    inflate_T,
    inflate_U,
    join_partitions,
    restrict_T,
    restrict_U,
)

PASS, FAIL, INCONCLUSIVE, HYPOTHESIS = "pass", "fail", "inconclusive", "hypothesis-violated"

ASSUMPTIONS = [
    "gl.dim is the maximum projective dimension over simple modules",
    "the radical is the ideal spanned by non-idempotent basis elements (admissible presentations)",
]


@dataclass
class TheoremReport:
    instance: dict
    theorem: str
    quantities: dict = dc_field(default_factory=dict)
    verdict: str = PASS
    certificates: list = dc_field(default_factory=list)
    counterexample: dict | None = None
    notes: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_json(self) -> dict:
        out = {
            "instance": self.instance,
            "theorem": self.theorem,
            "quantities": self.quantities,
            "verdict": self.verdict,
            "certificates": self.certificates,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.notes:
            out["notes"] = self.notes
        return out


def merge_verdicts(verdicts) -> str:
    vs = list(verdicts)
    for v in (FAIL, HYPOTHESIS, INCONCLUSIVE):
        if v in vs:
            return v
    return PASS


# projective dimension values ------------------------------------------------


def pd_value(pd):
    """int, ``math.inf`` for a proven infinite pd, or ``None`` when only a lower bound is known."""
    if isinstance(pd, AtLeast):
        return math.inf if pd.infinite else None
    return pd


def is_finite(pd):
    """True / False, or None when undecided at the cap."""
    v = pd_value(pd)
    if v is None:
        return None
    return v != math.inf


def compare_le(a, b):
    """``a <= b`` for pd values or plain numbers; None when either side is undecided."""
    a, b = pd_value(a), pd_value(b)
    if a is None or b is None:
        return None
    return a <= b


def _plus(*xs):
    vals = [pd_value(x) for x in xs]
    if any(v is None for v in vals):
        return None
    return sum(vals)


def _max(*xs):
    vals = [pd_value(x) for x in xs]
    if any(v is None for v in vals):
        return None
    return max(vals)


def _minus(a, b):
    a, b = pd_value(a), pd_value(b)
    if a is None or b is None or b == math.inf:
        return None
    return a - b


def _num_json(v):
    if v is None:
        return "undecided"
    if v == math.inf:
        return "inf"
    return v


class PdCache:
    """Memoised projective dimensions, keyed by module identity."""

    def __init__(self, cap: int = DEFAULT_CAP):
        self.cap = cap
        self._store: dict = {}

    def __call__(self, m: FdModule):
        key = id(m)
        hit = self._store.get(key)
        if hit is not None and hit[0] is m:
            return hit[1]
        pd = min_resolution(m, self.cap)[1]
        self._store[key] = (m, pd)
        return pd


def global_dimension(a: BasicAlgebra, pd: PdCache):
    return pd_max(pd(simple(a, v)) for v in range(a.n))


def column_pd(tri: Triangular, pd: PdCache):
    """``m = max pd(M f_j)`` with ``pd(0) = 0``."""
    return pd_max(pd(c) for c in tri.M.columns)


# Theorem A -------------------------------------------------------------------


def verify_theorem_A(tri: Triangular, pA: OrderedPartition, pB: OrderedPartition, instance: dict | None = None,
                     certify: bool = True) -> TheoremReport:
    rep = TheoremReport(instance or {}, "A")
    pC = join_partitions(tri, pA, pB)
    lam_v = is_standardly_stratified(tri.lam, pC, stop_early=False)
    famA = standard_modules(tri.U, pA)
    cols = [delta_filtration(c, famA) for c in tri.M.columns]
    t_v = is_standardly_stratified(tri.T, pB, stop_early=False)
    u_v = is_standardly_stratified(tri.U, pA, fam=famA, stop_early=False)
    side_a = lam_v.holds
    cols_ok = all(c.filtered for c in cols)
    side_b = cols_ok and t_v.holds and u_v.holds
    rep.quantities = {
        "joint_partition": pC.names(tri.lam),
        "side_a": side_a,
        "side_b": side_b,
        "columns_filtered": [c.filtered for c in cols],
        "T_standardly_stratified": t_v.holds,
        "U_standardly_stratified": u_v.holds,
    }
    ok = side_a == side_b
    if certify:
        famC = standard_modules(tri.lam, pC)
        famB = standard_modules(tri.T, pB)
        for verdict, fam in ((lam_v, famC), (t_v, famB), (u_v, famA)):
            for c in verdict.certificates.values():
                if not check_certificate(c, fam):
                    ok = False
                    rep.notes.append("a certificate failed to replay")
        for c in cols:
            if c.filtered and not check_certificate(c, famA):
                ok = False
                rep.notes.append("a column certificate failed to replay")
    rep.certificates = [
        {"algebra": "Lambda", **lam_v.to_json(tri.lam)},
        {"algebra": "U", **u_v.to_json(tri.U)},
        {"algebra": "T", **t_v.to_json(tri.T)},
        {"columns": [c.to_json() for c in cols]},
    ]
    if not ok:
        rep.verdict = FAIL
        rep.counterexample = {"side_a": side_a, "side_b": side_b}
    return rep


# Theorem B -------------------------------------------------------------------


def verify_theorem_B(tri: Triangular, catalog, cap: int = DEFAULT_CAP, instance: dict | None = None,
                     pd: PdCache | None = None) -> TheoremReport:
    rep = TheoremReport(instance or {}, "B", notes=list(ASSUMPTIONS))
    pd = pd or PdCache(cap)
    m = column_pd(tri, pd)
    alpha = global_dimension(tri.T, pd)
    beta = global_dimension(tri.U, pd)
    gl = global_dimension(tri.lam, pd)
    q = rep.quantities
    q.update({"m": pd_to_json(m), "alpha": pd_to_json(alpha), "beta": pd_to_json(beta),
              "gl_dim_Lambda": pd_to_json(gl), "cap": cap})
    if is_finite(m) is False:
        rep.verdict = HYPOTHESIS
        rep.notes.append("some M f_j has infinite projective dimension")
        return rep
    if is_finite(m) is None:
        rep.verdict = INCONCLUSIVE
        rep.notes.append("pd(M f_j) undecided at the cap")
        return rep
    verdicts = []
    lower = _max(_minus(beta, m), alpha)
    upper = _max(beta, _plus(alpha, 1, m))
    q["gl_lower"] = _num_json(lower)
    q["gl_upper"] = _num_json(upper)
    lo_ok = compare_le(lower, gl) if lower is not None else None
    hi_ok = compare_le(gl, upper) if upper is not None else None
    q["gl_lower_holds"], q["gl_upper_holds"] = lo_ok, hi_ok
    for res in (lo_ok, hi_ok):
        verdicts.append(INCONCLUSIVE if res is None else (PASS if res else FAIL))

    # fin.dim: equal to gl.dim whenever the latter is finite; otherwise only catalog lower bounds exist
    fin = {}
    for key, a, mods, g in (("T", tri.T, catalog.T, alpha), ("U", tri.U, catalog.U, beta),
                            ("Lambda", tri.lam, catalog.lam, gl)):
        if is_finite(g):
            fin[key] = (g, True)
        else:
            vals = [pd_value(pd(x)) for x in mods]
            fin[key] = (max([v for v in vals if v is not None and v != math.inf], default=0), False)
    q["fin_dim"] = {k: {"value": v, "proven": exact} for k, (v, exact) in fin.items()}
    if all(exact for _, exact in fin.values()):
        a_, b_, f_ = fin["T"][0], fin["U"][0], fin["Lambda"][0]
        mm = pd_value(m)
        fin_ok = max(b_ - mm, a_) <= f_ <= max(b_, a_ + 1 + mm)
        q["fin_bounds"] = [max(b_ - mm, a_), max(b_, a_ + 1 + mm)]
        q["fin_holds"] = fin_ok
        verdicts.append(PASS if fin_ok else FAIL)
    else:
        q["fin_holds"] = None
        rep.notes.append("fin.dim chain not checked: some fin.dim is only a catalog-relative lower bound")

    # part (a) on the catalog
    rows, bad, undecided = [], [], 0
    for k, L in enumerate(catalog.lam):
        fl = is_finite(pd(L))
        fy = is_finite(pd(restrict_T(tri, L)))
        fx = is_finite(pd(restrict_U(tri, L)))
        if None in (fl, fy, fx):
            undecided += 1
            continue
        if fl != (fy and fx):
            bad.append({"module": k, "dims": list(L.dims), "pd_finite": fl, "Y_finite": fy, "X_finite": fx})
        rows.append(fl)
    q["part_a_checked"] = len(rows)
    q["part_a_undecided"] = undecided
    if bad:
        verdicts.append(FAIL)
        rep.counterexample = {"part_a": bad}
    elif undecided:
        verdicts.append(INCONCLUSIVE)
    rep.verdict = merge_verdicts(verdicts)
    if rep.verdict == FAIL and rep.counterexample is None:
        rep.counterexample = {"inequalities": {k: q[k] for k in ("gl_lower", "gl_upper") if k in q}}
    return rep


# Theorem C -------------------------------------------------------------------


def _agreement(mods, fam: StandardFamily, pd: PdCache):
    """Compare Δ-filtered with finite pd across ``mods``; returns (holds or None, mismatches)."""
    mism, undecided = [], 0
    for k, x in enumerate(mods):
        fin = is_finite(pd(x))
        filt = delta_filtration(x, fam).filtered
        if fin is None:
            undecided += 1
            continue
        if fin != filt:
            mism.append({"module": k, "dims": list(x.dims), "filtered": filt, "pd_finite": fin})
    if mism:
        return False, mism
    if undecided:
        return None, []
    return True, []


def verify_theorem_C(tri: Triangular, pA: OrderedPartition, pB: OrderedPartition, catalog,
                     cap: int = DEFAULT_CAP, instance: dict | None = None, pd: PdCache | None = None) -> TheoremReport:
    rep = TheoremReport(instance or {}, "C", notes=list(ASSUMPTIONS) + [
        "F(Δ) = P<∞ is tested on a catalog closed under restriction and inflation, not on all modules",
    ])
    pd = pd or PdCache(cap)
    m = column_pd(tri, pd)
    q = rep.quantities
    q["m"] = pd_to_json(m)
    if is_finite(m) is not True:
        rep.verdict = HYPOTHESIS if is_finite(m) is False else INCONCLUSIVE
        rep.notes.append("pd(M f_j) is not known to be finite")
        return rep
    pC = join_partitions(tri, pA, pB)
    famC, famA, famB = standard_modules(tri.lam, pC), standard_modules(tri.U, pA), standard_modules(tri.T, pB)
    a_holds, a_bad = _agreement(catalog.lam, famC, pd)
    u_holds, u_bad = _agreement(catalog.U, famA, pd)
    t_holds, t_bad = _agreement(catalog.T, famB, pd)
    b_holds = None if None in (u_holds, t_holds) else (u_holds and t_holds)
    if u_holds is False or t_holds is False:
        b_holds = False
    q.update({"a_holds": a_holds, "b_holds": b_holds, "U_side": u_holds, "T_side": t_holds,
              "catalog": catalog.sizes()})
    if a_holds is None or b_holds is None:
        rep.verdict = INCONCLUSIVE
        return rep
    if a_holds != b_holds:
        rep.verdict = FAIL
        rep.counterexample = {"Lambda": a_bad, "U": u_bad, "T": t_bad}
        return rep
    if a_holds:
        checks = []
        for key, a, fam, mods, p in (("Lambda", tri.lam, famC, catalog.lam, pC), ("U", tri.U, famA, catalog.U, pA),
                                     ("T", tri.T, famB, catalog.T, pB)):
            pd_delta = pd_max(pd(d) for d in fam.deltas.values())
            # standards are filtered, so they join the catalog for the comparison
            pool = list(mods) + list(fam.deltas.values())
            finite = [pd_value(pd(x)) for x in pool if is_finite(pd(x))]
            cat_max = max(finite, default=0)
            ss = is_standardly_stratified(a, p, fam=fam).holds
            q[f"pd_Delta_{key}"] = pd_to_json(pd_delta)
            q[f"fin_dim_catalog_{key}"] = cat_max
            q[f"standardly_stratified_{key}"] = ss
            checks.append(ss and pd_value(pd_delta) == cat_max)
        if not all(checks):
            rep.verdict = FAIL
            rep.counterexample = {"moreover": "fin.dim / pd(Δ) / stratification check failed"}
            return rep
        rep.notes.append("fin.dim values are catalog-relative; pd(Δ) is exact")
    rep.verdict = PASS
    return rep


# pd transfer -------------------------------------------------------------------


def verify_pd_transfer(tri: Triangular, catalog, cap: int = DEFAULT_CAP, instance: dict | None = None,
                       pd: PdCache | None = None) -> TheoremReport:
    rep = TheoremReport(instance or {}, "pd-transfer")
    pd = pd or PdCache(cap)
    m = column_pd(tri, pd)
    rep.quantities["m"] = pd_to_json(m)
    if is_finite(m) is not True:
        rep.verdict = HYPOTHESIS if is_finite(m) is False else INCONCLUSIVE
        return rep
    bad, undecided, rows = [], 0, []
    for k, X in enumerate(catalog.U):
        px, pi = pd(X), pd(inflate_U(tri, X))
        c1, c2 = compare_le(pi, px), compare_le(px, _plus(pi, m))
        rows.append({"side": "U", "module": k, "pd": pd_to_json(px), "pd_inflated": pd_to_json(pi)})
        if None in (c1, c2):
            undecided += 1
        elif not (c1 and c2):
            bad.append(rows[-1])
    for k, Y in enumerate(catalog.T):
        py, pi = pd(Y), pd(inflate_T(tri, Y))
        c1, c2 = compare_le(py, pi), compare_le(pi, _plus(py, 1, m))
        rows.append({"side": "T", "module": k, "pd": pd_to_json(py), "pd_inflated": pd_to_json(pi)})
        if None in (c1, c2):
            undecided += 1
        elif not (c1 and c2):
            bad.append(rows[-1])
    rep.quantities["table"] = rows
    rep.quantities["undecided"] = undecided
    if bad:
        rep.verdict = FAIL
        rep.counterexample = {"violations": bad}
    elif undecided:
        rep.verdict = INCONCLUSIVE
    return rep


# support finiteness ------------------------------------------------------------


def check_support_finite(tri: Triangular, instance: dict | None = None) -> TheoremReport:
    rep = TheoremReport(instance or {}, "support-finite", notes=[
        "finite vertex sets and finite-dimensional components make every support finite",
        "restrictions of finitely generated Λ-modules are finitely generated (automatic here)",
    ])
    U, T, M = tri.U, tri.T, tri.M
    col_supp = {T.vertices[j]: [U.vertices[i] for i in range(U.n) if M.dim(i, j)] for j in range(T.n)}
    row_supp = {U.vertices[i]: [T.vertices[j] for j in range(T.n) if M.dim(i, j)] for i in range(U.n)}
    lam = tri.lam
    proj_supp = {lam.vertices[v]: [lam.vertices[w] for w in range(lam.n) if lam.component_dim(v, w)]
                 for v in range(lam.n)}
    rep.quantities = {
        "supp_Mf": col_supp,
        "supp_eM": row_supp,
        "supp_projectives_Lambda": proj_supp,
        "component_dims_finite": True,
        "dim_Lambda": lam.dim,
    }
    ok = all(len(s) <= U.n for s in col_supp.values()) and all(len(s) <= T.n for s in row_supp.values())
    rep.verdict = PASS if ok else FAIL
    return rep


# triple membership and the change-of-rings functors ----------------------------------


def verify_triple_membership(tri: Triangular, pA: OrderedPartition, pB: OrderedPartition, mods,
                             instance: dict | None = None) -> TheoremReport:
    """``(Y, φ, X)`` Δ-filtered over Λ exactly when ``Y`` and ``X`` are filtered over T and U."""
    rep = TheoremReport(instance or {}, "triple-membership")
    pC = join_partitions(tri, pA, pB)
    famC, famA, famB = standard_modules(tri.lam, pC), standard_modules(tri.U, pA), standard_modules(tri.T, pB)
    bad = []
    for k, L in enumerate(mods):
        fl = delta_filtration(L, famC).filtered
        fy = delta_filtration(restrict_T(tri, L), famB).filtered
        fx = delta_filtration(restrict_U(tri, L), famA).filtered
        if fl != (fy and fx):
            bad.append({"module": k, "dims": list(L.dims), "L": fl, "Y": fy, "X": fx})
    rep.quantities = {"checked": len(mods)}
    if bad:
        rep.verdict = FAIL
        rep.counterexample = {"mismatches": bad}
    return rep


def verify_standard_transfer(tri: Triangular, pA: OrderedPartition, pB: OrderedPartition) -> bool:
    """Λ-standards are the inflations of the U- and T-standards."""
    from .modcat import iso_test
    pC = join_partitions(tri, pA, pB)
    famC, famA, famB = standard_modules(tri.lam, pC), standard_modules(tri.U, pA), standard_modules(tri.T, pB)
    for i, v in enumerate(tri.u_vertices):
        if not iso_test(famC.deltas[v], inflate_U(tri, famA.deltas[i])).isomorphic:
            return False
    for j, v in enumerate(tri.t_vertices):
        if not iso_test(famC.deltas[v], inflate_T(tri, famB.deltas[j])).isomorphic:
            return False
    return True


def restrict_map(tri: Triangular, f: ModuleMap, side: str) -> ModuleMap:
    verts = tri.t_vertices if side == "T" else tri.u_vertices
    res = restrict_T if side == "T" else restrict_U
    return ModuleMap(res(tri, f.source), res(tri, f.target), [f.blocks[v] for v in verts])


def inflate_map(tri: Triangular, f: ModuleMap, side: str) -> ModuleMap:
    from .exactla import Matrix
    inf = inflate_T if side == "T" else inflate_U
    verts = tri.t_vertices if side == "T" else tri.u_vertices
    src, tgt = inf(tri, f.source), inf(tri, f.target)
    blocks = [Matrix.zeros(f.source.field, tgt.dims[v], src.dims[v]) for v in range(tri.lam.n)]
    for k, v in enumerate(verts):
        blocks[v] = f.blocks[k]
    return ModuleMap(src, tgt, blocks)


def functor_identities(tri: Triangular, Ys, Xs) -> list:
    """Failures of restrict∘inflate = id and of the vanishing cross compositions."""
    bad = []
    for k, Y in enumerate(Ys):
        L = inflate_T(tri, Y)
        if not restrict_T(tri, L).same_data(Y):
            bad.append(("restrict_T inflate_T", k))
        if not restrict_U(tri, L).is_zero():
            bad.append(("restrict_U inflate_T", k))
    for k, X in enumerate(Xs):
        L = inflate_U(tri, X)
        if not restrict_U(tri, L).same_data(X):
            bad.append(("restrict_U inflate_U", k))
        if not restrict_T(tri, L).is_zero():
            bad.append(("restrict_T inflate_U", k))
    return bad


def componentwise_exactness(tri: Triangular, f: ModuleMap, g: ModuleMap) -> tuple:
    """``(exact over Λ, exact on the T part and the U part)`` for ``A -f-> B -g-> C``."""
    lam_ok = is_short_exact(f, g)
    t_ok = is_short_exact(restrict_map(tri, f, "T"), restrict_map(tri, g, "T"))
    u_ok = is_short_exact(restrict_map(tri, f, "U"), restrict_map(tri, g, "U"))
    return lam_ok, t_ok and u_ok


def ext_vanishing(tri: Triangular, Xs, Ys) -> list:
    """Pairs with ``Ext^1(inflate_U X, inflate_T Y) != 0`` (there should be none)."""
    bad = []
    for i, X in enumerate(Xs):
        LX = inflate_U(tri, X)
        for j, Y in enumerate(Ys):
            d = ext1_dim(LX, inflate_T(tri, Y))
            if d:
                bad.append((i, j, d))
    return bad


def extension_closure(fam: StandardFamily, mods, max_ext_dim: int = 3) -> tuple:
    """Realise every Ext class between certified-filtered modules; returns (checked, failures)."""
    from itertools import product
    from .modcat import ext1_data, ext_realize

    a = fam.algebra
    filt = [m for m in mods if delta_filtration(m, fam).filtered]
    checked, bad = 0, []
    elems = a.field.elements() if a.field.is_finite else [0, 1]
    for i, x in enumerate(filt):
        for j, y in enumerate(filt):
            data = ext1_data(x, y)
            k = len(data.class_reps)
            if k == 0 or k > max_ext_dim:
                continue
            for coeffs in product(elems, repeat=k):
                if not any(coeffs):
                    continue
                rep = data.class_reps[0].scale(coeffs[0])
                for f, c in zip(data.class_reps[1:], coeffs[1:]):
                    rep = rep + f.scale(c)
                ext = ext_realize(x, y, rep, data)
                checked += 1
                cert = delta_filtration(ext.middle, fam)
                if not ext.is_exact() or not cert.filtered or not check_certificate(cert, fam):
                    bad.append((i, j, coeffs))
    return checked, bad


# whole-instance driver -----------------------------------------------------------


def verify_instance(inst, cap: int = DEFAULT_CAP, which=("A", "B", "C", "pd")) -> list:
    from .corpus import build_catalog
    desc = inst.describe()
    pd = PdCache(cap)
    out = []
    if "A" in which:
        out.append(verify_theorem_A(inst.tri, inst.pA, inst.pB, desc))
    needs_catalog = {"B", "C", "pd"} & set(which)
    if needs_catalog:
        cat = build_catalog(inst)
        if "B" in which:
            out.append(verify_theorem_B(inst.tri, cat, cap, desc, pd))
        if "C" in which:
            out.append(verify_theorem_C(inst.tri, inst.pA, inst.pB, cat, cap, desc, pd))
        if "pd" in which:
            out.append(verify_pd_transfer(inst.tri, cat, cap, desc, pd))
    return out
