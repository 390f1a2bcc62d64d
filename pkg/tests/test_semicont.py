import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klcells.coxeter import get_group
from klcells.semicont import (
    check_constancy,
    essential_hyperplanes,
    essential_report,
    flip,
    join_partitions,
    orbit_closure,
    partitions_at,
    predict_facet_partition,
)
from klcells.weights import Hyperplane, builtin_arrangement, enumerate_facets

R, T = 12, 8


@pytest.fixture(scope="module")
def g2_facets():
    return enumerate_facets(builtin_arrangement("g2-essential"), 30)


def chamber_containing(facets, p):
    arr = builtin_arrangement("g2-essential")
    for F in facets:
        if F.is_chamber and all(
            (sum(n * x for n, x in zip(h.normal, p)) > 0) == (s > 0) for h, s in zip(arr, F.signature.signs)
        ):
            return F
    raise LookupError(p)


def test_constancy_inside_a_chamber(g2_facets):
    F = chamber_containing(g2_facets, (3, 1))
    v = check_constancy(F, "g2", R, T, samples=[(3, 1), (5, 2)])
    assert v.equal and "equal at the trusted radius" in str(v)
    assert check_constancy(F, "g2", R, T, samples=[(3, 1), (3, 1)]).equal


def test_constancy_failure_has_witness(g2_facets):
    F = chamber_containing(g2_facets, (3, 2))
    v = check_constancy(F, "g2", R, T, samples=[(3, 2), (2, 3)])
    assert not v.equal and "two-sided block" in v.witness


def test_constancy_needs_two_positive_samples(g2_facets):
    F = chamber_containing(g2_facets, (3, 1))
    with pytest.raises(ValueError):
        check_constancy(F, "g2", R, T, samples=[(3, 1), (0, 2)])


def test_partitions_at_rejects_zero_weights():
    with pytest.raises(ValueError):
        partitions_at("g2", (1, 0), R, T)
    with pytest.raises(ValueError):
        partitions_at("g2", (1, 1), R, T, method="guess")


def test_prediction_on_chambers_and_rays(g2_facets):
    for F in g2_facets:
        if not F.positive:
            continue
        pred = predict_facet_partition(F, "g2", R, T)
        actual = partitions_at("g2", F.sample_points[0], R, T)
        assert pred.differs(actual) is None, F.label()


def test_prediction_on_a_coordinate_ray(g2_facets):
    g = get_group("g2")
    (F,) = [f for f in g2_facets if f.dimension == 1 and not f.positive and f.sample_points[0][1] == 0]
    pred = predict_facet_partition(F, "g2", R, T)
    # L(s2) = L(s3) = 0 on this ray, so blocks are unions of W_{2,3}-orbits
    for b in pred.left:
        for w in b:
            for s in (1, 2):
                z = g.lmul(s, w)
                assert z not in set().union(*pred.left) or z in b
    chamber = partitions_at("g2", F.adjacent_chambers[0].sample_points[0], R, T)
    assert len(pred.left) < len(chamber.left)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_join_is_independent_of_merge_order(seed):
    a = frozenset({frozenset({1, 2}), frozenset({3}), frozenset({4, 5}), frozenset({6})})
    b = frozenset({frozenset({1}), frozenset({2, 3}), frozenset({4}), frozenset({5, 6})})
    want = frozenset({frozenset({1, 2, 3}), frozenset({4, 5, 6})})
    assert join_partitions([a, b], shuffle_seed=seed) == want
    assert join_partitions([a, b]) == want


def test_orbit_closure_is_seed_independent():
    g = get_group("g2")
    g.ensure_radius(6)
    blocks = frozenset(frozenset({w}) for w in g.ball_indices(4))
    base = orbit_closure(g, blocks, frozenset({0}), "left")
    assert base == orbit_closure(g, blocks, frozenset({0}), "left", shuffle_seed=3)
    for b in base:
        assert len(b) <= 2
    assert len(orbit_closure(g, blocks, frozenset({0}), "two-sided")) < len(base)


def test_flip():
    assert flip(Hyperplane((1, 1, 1)), (1, -1, 1)) == Hyperplane((1, -1, 1))


def test_essential_hyperplanes_g2_with_decoy():
    arr = builtin_arrangement("g2-essential")
    decoy = Hyperplane((3, -4))
    rep = essential_report(arr + [decoy], "g2", 14, 10, method="algorithm")
    assert set(rep.essential) == set(arr)
    assert rep.non_essential == [decoy] and rep.unexamined == []
    assert rep.constancy_failures == []
    md = rep.to_markdown()
    assert "| H(3,-4) | not essential |" in md
    data = json.loads(rep.dumps())
    assert data["schema"] == 1 and data["non_essential"] == ["H(3,-4)"]


def test_empty_candidate_list():
    rep = essential_report([], "g2", 10, 7)
    assert rep.essential == [] and rep.non_essential == []
    assert essential_hyperplanes([], "g2", 10, 7) == []
