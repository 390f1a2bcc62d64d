"""Acceptance criteria 1-9; each test records one part of a criterion line."""

import functools
import time

import pytest

from conftest import (
    B2_A_EQ_2C,
    B2_A_GT_2C,
    B2_A_LT_2C,
    PICTURE_POINTS,
    HASSE_DASHED,
    HASSE_SOLID,
    closure,
    record,
    frak_c_table,
    frak_c_table_b_gt_a,
    class_order_mismatches,
    ratio_regime,
    weights,
)
from klcells.cellalgo import a_prime, dihedral_cells, frak_c_partition, tilde_partition
from klcells.cells import (
    a_estimates,
    cells_of_kind,
    check_duality,
    check_inverse_closed,
    check_left_connected,
    check_p4,
    check_refines,
)
from klcells.coxeter import INF, get_group
from klcells.hecke import bar
from klcells.induction import (
    Expander,
    check_dagger,
    check_I1_I3,
    check_I5,
    induction_datum,
    labels_from_points,
    preorder_on_U,
)
from klcells.klbasis import h_full, kl_table, mu_recursion_table
from klcells.semicont import essential_report
from klcells.weights import Hyperplane, builtin_arrangement, enumerate_facets

# -- shared computations ------------------------------------------------------


@functools.lru_cache(maxsize=None)
def partitions(group, params, R, T):
    """Brute-force and algorithmic partitions of ball(T), computed on ball(R)."""
    L = weights(group, *params)
    tp = tilde_partition(group, L, R, T)
    two = cells_of_kind("two-sided", R, L, T)
    left = cells_of_kind("left", R, L, T)
    return tp, two, left


def agrees(group, params, R, T):
    tp, two, left = partitions(group, params, R, T)
    return tp.two_sided().as_sets() == two.as_sets() and tp.left().as_sets() == left.as_sets()


@functools.lru_cache(maxsize=None)
def facet_samples(group):
    """Positive chamber (and for G2~ ray) samples of the builtin arrangement."""
    box = 30 if group == "g2" else 12
    out = []
    for F in enumerate_facets(builtin_arrangement(f"{group}-essential"), box):
        if not F.positive:
            continue
        if F.is_chamber:
            out += [tuple(p) for p in F.sample_points[: 2 if group == "g2" else 1]]
        elif group == "g2":
            out.append(tuple(F.sample_points[0]))
    return tuple(out)


RADII = {"g2": ((14, 10), (16, 10)), "b2": ((12, 9), (14, 10))}


# -- criterion 1: dihedral closed forms against brute force --------------------

DIHEDRAL = [(m, w) for m in (2, 3, 4, 5, 6, INF) for w in ((1, 1), (2, 1), (3, 1), (3, 2)) if m in (2, 4, 6, INF) or w[0] == w[1]]


def dihedral_mismatches(m, a, b):
    name = "a1" if m == INF else f"i2({m})"
    g = get_group(name)
    L = weights(name, a, b) if m in (2, 4, 6, INF) else weights(name, a)
    R = 12 if m == INF else m
    left = cells_of_kind("left", R, L)
    right = cells_of_kind("right", R, L)
    two = cells_of_kind("two-sided", R, L, with_a=True)
    inner = left.trusted
    tab = dihedral_cells(m, a, b)
    ex = tab.explicit(inner if m == INF else None)
    want_left = {frozenset(g.index_of_word(w) for w in ws) for _, _, lcs in ex for _, ws in lcs}
    want_two = {frozenset(g.index_of_word(w) for _, ws in lcs for w in ws): val for _, val, lcs in ex}
    bad = []
    if left.as_sets() != want_left:
        bad.append("left")
    if right.as_sets() != {frozenset(g.inv(w) for w in b_) for b_ in want_left}:
        bad.append("right")
    if {b_: val for b_, val in zip(two.blocks, two.a_values)} != want_two:
        bad.append("two-sided/a")
    return bad


def test_criterion_1_dihedral():
    t0 = time.time()
    bad = {}
    for m, (a, b) in DIHEDRAL:
        got = dihedral_mismatches(m, a, b)
        if got:
            bad[(m, a, b)] = got
    dt = time.time() - t0
    ok = not bad and dt < 10
    record(1, ok, f"{len(DIHEDRAL)} dihedral cases, {len(bad)} mismatches, {dt:.1f}s")
    assert not bad, bad
    assert dt < 10


# -- criterion 2: frak-C partition -------------------------------------------------

FRAK_SAMPLES = [(3, 1), (5, 2), (4, 3), (1, 2), (2, 3), (3, 4)]


def test_criterion_2_frak_c():
    t0 = time.time()
    bad = []
    for a, b in FRAK_SAMPLES:
        fc = frak_c_partition("g2", weights("g2", a, b))
        tab = frak_c_table(a, b) if a > b else frak_c_table_b_gt_a(a, b)
        if {frozenset(n): val for n, val in fc.named()} != {els: val for els, val in tab.values()}:
            bad.append((a, b))
    dt = time.time() - t0
    record(2, not bad and dt < 1, f"{len(FRAK_SAMPLES)} weights, {len(bad)} mismatches, {dt:.2f}s")
    assert not bad and dt < 1


# -- criterion 3: the tilde classes per regime ------------------------------------------

REGIME_SAMPLES = [(3, 1), (2, 1), (7, 4), (3, 2), (4, 3), (1, 1), (1, 2)]


def test_criterion_3_regimes():
    t0 = time.time()
    bad = {}
    regimes = set()
    for a, b in REGIME_SAMPLES:
        regimes.add(ratio_regime(a, b))
        tp = tilde_partition("g2", weights("g2", a, b), 10)
        miss = class_order_mismatches(tp, a, b)
        if miss:
            bad[(a, b)] = miss
    dt = time.time() - t0
    record(3, not bad and dt < 5, f"{len(regimes)} regimes, {len(bad)} mismatches, {dt:.1f}s")
    assert len(regimes) == 7
    assert not bad and dt < 5, bad


# -- criteria 4 and 5: algorithm against brute force on facet samples ----------------

CRIT = {"g2": 4, "b2": 5}


def _compare_all(group, R, T):
    samples = facet_samples(group)
    differ = [p for p in samples if not agrees(group, p, R, T)]
    return samples, differ


@pytest.mark.slow
@pytest.mark.parametrize("group", ["g2", "b2"])
@pytest.mark.xfail(strict=True, reason="cells of the prescribed ball are cut at its boundary; see notes")
def test_criteria_4_5_prescribed_radii(group):
    R, T = RADII[group][0]
    samples, differ = _compare_all(group, R, T)
    record(CRIT[group], not differ, f"R={R},R'={T}: {len(samples) - len(differ)}/{len(samples)} samples agree")
    assert not differ


@pytest.mark.slow
@pytest.mark.parametrize("group", ["g2", "b2"])
def test_criteria_4_5_enlarged_radii(group):
    R, T = RADII[group][1]
    samples, differ = _compare_all(group, R, T)
    record(CRIT[group], not differ, f"R={R},R'={T}: {len(samples) - len(differ)}/{len(samples)} samples agree")
    assert not differ, differ


@pytest.mark.slow
@pytest.mark.parametrize("group", ["g2", "b2"])
def test_criteria_4_5_differences_are_boundary_splits(group):
    # at the prescribed radii the brute-force blocks only split the true
    # cells; they never merge elements the algorithm separates
    R, T = RADII[group][0]
    bad = []
    for p in facet_samples(group):
        tp, two, left = partitions(group, p, R, T)
        if check_refines(two, tp.two_sided()) or check_refines(left, tp.left()):
            bad.append(p)
    record(CRIT[group], not bad, f"R={R}: brute force refines the algorithm on all samples" if not bad
           else f"R={R}: {len(bad)} samples merge across algorithm blocks")
    assert not bad, bad


# -- criterion 6: essential hyperplanes --------------------------------------------------

DECOYS = {"g2": ((3, -4), 16, 10), "b2": ((1, -3, 1), 14, 10)}


@pytest.mark.slow
@pytest.mark.parametrize("group", ["g2", "b2"])
def test_criterion_6_essential(group):
    decoy, R, T = DECOYS[group]
    arr = builtin_arrangement(f"{group}-essential")
    rep = essential_report(arr + [Hyperplane(decoy)], group, R, T)
    ok = (set(rep.essential) == set(arr) and rep.non_essential == [Hyperplane(decoy)]
          and not rep.unexamined and not rep.constancy_failures)
    record(6, ok, f"{group}: {len(rep.essential)} essential, decoy {'rejected' if ok else 'NOT rejected'}")
    assert ok


# -- criterion 7: the B2~ induction example ----------------------------------------------


@pytest.mark.parametrize("p", [B2_A_LT_2C, B2_A_EQ_2C, B2_A_GT_2C], ids=lambda p: ",".join(map(str, p)))
def test_criterion_7_induction(p):
    d = induction_datum(weights("b2", *p), 12)
    ex = Expander(d)
    order = preorder_on_U(d, ex)
    names = labels_from_points(d, PICTURE_POINTS)
    i5 = check_I5(d, order, ex)
    conds = all(r.ok for r in check_I1_I3(d)) and i5.ok and check_dagger(order).ok
    H = order.named_hasse(names)
    if p[0] < 2 * p[2]:
        hasse = H == HASSE_SOLID
    else:
        hasse = closure(H) == closure(HASSE_SOLID | HASSE_DASHED)
    clean = not order.inconclusive and not i5.inconclusive
    ok = conds and hasse and clean and len(names) == len(d.U)
    record(7, ok, f"{p}: I1-I5 {'ok' if conds else 'FAIL'}, order {'matches' if hasse else 'differs'}")
    assert ok


# -- criterion 8: property suites ---------------------------------------------------------


@pytest.mark.parametrize("group,params,R", [("g2", (3, 1), 8), ("b2", (6, 4, 3), 7), ("i2(6)", (3, 1), 6)])
def test_criterion_8_basis_properties(group, params, R):
    L = weights(group, *params)
    T = kl_table(L, R)
    g = T.group
    cols = mu_recursion_table(L, R)
    bad = 0
    for w in range(g.ball_size(R)):
        bad += bar(T.C(w)) != T.C(w)
        bad += cols[w] != T.column(w)
        bad += any(y != w and not (p.in_strictly_negative() and g.bruhat_leq(y, w)) for y, p in T.column(w).items())
    N = L.N()
    n = g.ball_size(min(3, R // 2))
    for x in range(n):
        for y in range(n):
            res = h_full(L, x, y, R)
            bad += not res.complete or any(h.degree > N or not h.is_bar_invariant() for h in res.coeffs.values())
    record(8, bad == 0, f"{group}{params} basis: {bad} violations")
    assert bad == 0


@pytest.mark.parametrize("group,params,R,inner", [("g2", (3, 1), 14, 8), ("b2", (6, 4, 3), 12, 6)])
def test_criterion_8_cell_properties(group, params, R, inner):
    L = weights(group, *params)
    left = cells_of_kind("left", R, L)
    right = cells_of_kind("right", R, L)
    two = cells_of_kind("two-sided", R, L, trusted=inner)
    est = a_estimates(L, R)
    tp = tilde_partition(group, L, R, inner)
    fails = check_duality(left, right) + check_left_connected(left) + check_p4(L, R, two, est)
    fails += [f"a' {w}" for k, blk in enumerate(tp.blocks) for w in blk if a_prime(w, L, tp.frak_c) != tp.class_a[k]]
    fails += [f"a {w}" for k, blk in enumerate(tp.blocks) for w in blk if w in two.ground and est[w] != tp.class_a[k]]
    small = cells_of_kind("two-sided", R - 2, L)
    fails += check_refines(small, cells_of_kind("two-sided", R, L, trusted=small.trusted))
    bigger = tilde_partition(group, L, R + 2, inner)
    fails += [] if bigger.two_sided().as_sets() == tp.two_sided().as_sets() else ["tilde R vs R+2"]
    record(8, not fails, f"{group}{params} cells: {len(fails)} violations")
    assert not fails, fails[:5]


# -- criterion 9: inverse closure ---------------------------------------------------------


@pytest.mark.slow
@pytest.mark.parametrize("group", ["g2", "b2"])
def test_criterion_9_inverse_closed(group):
    bad = []
    count = 0
    for R, T in RADII[group]:
        for p in facet_samples(group):
            tp, two, _ = partitions(group, p, R, T)
            for part in (two, tp.two_sided()):
                count += 1
                if check_inverse_closed(part):
                    bad.append((p, R))
    record(9, not bad, f"{group}: {count} two-sided partitions, {len(bad)} not inverse-closed")
    assert not bad, bad
