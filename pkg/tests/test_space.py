import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vconv.errors import DimensionMismatchError, EvaluationError, MemberIndexError, PointOutsideDomainError
from vconv.space import (
    DomainSpec,
    FnObject,
    FnSequence,
    Member,
    ProbeSet,
    SemidistanceFamily,
    Space,
    load_space,
    neighborhood,
    partial_sums,
    sample_region,
    semidistance,
)

UNIT = DomainSpec.interval(0.0, 1.0)


def test_default_radius_is_quarter_diameter():
    assert UNIT.r0 == 0.25
    assert UNIT.beta == 0.5
    assert DomainSpec.interval(0.5, 5.5).r0 == 1.25


@pytest.mark.parametrize(
    "a, k, lo, hi",
    [(0.5, 0, 0.25, 0.75), (0.5, 2, 0.4375, 0.5625), (0.0, 0, 0.0, 0.25), (1.0, 1, 0.875, 1.0)],
)
def test_neighborhood_examples(a, k, lo, hi):
    region = neighborhood(UNIT, a, k)
    assert region.lower[0] == lo
    assert region.upper[0] == hi
    assert region.contains([a])[0]


def test_neighborhood_rejects_outside_point():
    with pytest.raises(PointOutsideDomainError):
        neighborhood(UNIT, 1.5, 0)


def test_sample_region_examples():
    assert sample_region(neighborhood(UNIT, 0.5, 0), 0).ravel().tolist() == [0.25, 0.5, 0.75]
    pts = sample_region(neighborhood(UNIT, 0.5, 0), 1).ravel()
    assert np.allclose(pts, np.linspace(0.25, 0.75, 5))


def test_sample_region_clipped_keeps_extremes():
    pts = sample_region(neighborhood(UNIT, 0.0, 0), 1).ravel()
    assert pts.min() == 0.0 and pts.max() == 0.25
    assert 0.0 in pts


def test_finite_domain_ball_enumeration():
    pts = [[0.0], [1.0], [2.0], [3.0], [4.0]]
    dom = DomainSpec.finite(pts, r0=1.0)
    got = sample_region(neighborhood(dom, [2.0], 0), 5)
    assert sorted(got.ravel().tolist()) == [1.0, 2.0, 3.0]


def test_finite_domain_rejects_bad_table():
    with pytest.raises(ValueError):
        DomainSpec.finite([[0.0], [1.0], [2.0]], distances=[[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    with pytest.raises(ValueError):
        DomainSpec.finite([[0.0], [1.0]], distances=[[0, 1], [2, 0]])


def test_box_validation():
    with pytest.raises(ValueError):
        DomainSpec.box([0.0, 1.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        DomainSpec.interval(0, 1, beta=1.0)


def test_box_2d_sampling_inside_region():
    dom = DomainSpec.box([0, 0], [1, 2])
    region = neighborhood(dom, [0.9, 1.0], 1)
    pts = sample_region(region, 3)
    assert pts.shape[1] == 2
    assert region.contains(pts).all()
    assert any((p == [0.9, 1.0]).all() for p in pts)


@pytest.mark.parametrize(
    "member, u, v, expected",
    [
        (Member("sup-norm"), (1, 2), (1, 2), 0.0),
        (Member("sup-norm"), (0, 3), (1, 1), 2.0),
        (Member("projection", 0), (0, 3), (1, 1), 1.0),
        (Member("euclidean"), (0, 0), (3, 4), 5.0),
        (Member("linear", weights=(1.0, -1.0)), (0, 3), (1, 1), 3.0),
    ],
)
def test_semidistance_examples(member, u, v, expected):
    fam = SemidistanceFamily(2, (member,))
    assert semidistance(fam, 0, u, v) == expected


def test_semidistance_errors():
    fam = SemidistanceFamily(2)
    with pytest.raises(MemberIndexError):
        semidistance(fam, 3, (0, 0), (0, 0))
    with pytest.raises(DimensionMismatchError):
        semidistance(fam, 0, (0, 0, 0), (0, 0))


FAMILY = SemidistanceFamily(
    3,
    (Member("sup-norm"), Member("euclidean"), Member("projection", 2), Member("linear", weights=(0.5, -2.0, 1.0))),
)
vec = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=3, max_size=3)


@settings(max_examples=200, deadline=None)
@given(vec, vec, vec, st.integers(0, 3))
def test_semidistance_axioms(u, v, w, i):
    d = lambda a, b: semidistance(FAMILY, i, a, b)  # noqa: E731
    assert d(u, u) == 0
    assert d(u, v) == d(v, u)
    assert d(u, w) <= d(u, v) + d(v, w) + 1e-12 * (1 + abs(d(u, v)) + abs(d(v, w)))


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 1), st.integers(0, 12))
def test_nesting_and_shrinking(a, k):
    outer, inner = neighborhood(UNIT, a, k), neighborhood(UNIT, a, k + 1)
    assert inner.radius == outer.radius * UNIT.beta
    assert outer.lower[0] <= inner.lower[0] and inner.upper[0] <= outer.upper[0]
    assert inner.contains([a])[0]


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 1), st.integers(0, 10), st.integers(0, 8))
def test_sample_region_deterministic_and_inside(a, k, depth):
    region = neighborhood(UNIT, a, k)
    first = sample_region(region, depth, 10)
    assert np.array_equal(first, sample_region(region, depth, 10))
    assert region.contains(first).all()


def test_schedule_refines_inside_smaller_ball():
    # coarse samples falling in the finer ball are resampled there, and every
    # finer sample lies in the coarser ball
    for a in (0.0, 0.3, 0.5, 1.0):
        for k in range(6):
            outer, inner = neighborhood(UNIT, a, k), neighborhood(UNIT, a, k + 1)
            coarse = sample_region(outer, 4 + k)
            fine = sample_region(inner, 5 + k)
            assert outer.contains(fine).all()
            kept = set(coarse[inner.contains(coarse)].ravel().tolist())
            assert kept <= set(fine.ravel().tolist())


def test_evaluation_error_carries_point():
    def bad(p):
        if np.any(p[:, 0] > 0.7):
            raise ZeroDivisionError("boom")
        return p[:, 0]

    f = FnObject("bad", bad)
    with pytest.raises(EvaluationError) as err:
        f.eval_many(np.linspace(0, 1, 11)[:, None])
    assert err.value.point[0] > 0.7


def test_sequence_batch_matches_generator():
    seq = FnSequence("pow", lambda n: FnObject(f"x^{n}", lambda p, n=n: p[:, 0] ** n), 6, start=1,
                     batch=lambda idx, p: p[None, :, 0] ** idx[:, None])
    plain = FnSequence("pow", seq.generator, 6, start=1)
    pts = np.linspace(0, 1, 9)[:, None]
    assert np.array_equal(seq.values_on(pts), plain.values_on(pts))
    with pytest.raises(IndexError):
        seq[0]


def test_partial_sums():
    terms = FnSequence("ones", lambda n: FnObject("1", lambda p: np.ones(len(p))), 5, start=1)
    sums = partial_sums(terms)
    assert sums.values_on([[0.2]])[:, 0, 0].tolist() == [1, 2, 3, 4, 5]
    assert sums[3]([0.5])[0] == 3


def test_probe_set_dedup_and_domain():
    probes = ProbeSet.of(UNIT, [0.2, 0.2, 0.8])
    assert probes.tolist() == [0.2, 0.8]
    with pytest.raises(PointOutsideDomainError):
        ProbeSet.of(UNIT, [2.0])


def test_load_space_from_json(tmp_path):
    doc = {"kind": "box", "lower": [0, 0], "upper": [1, 1], "r0": 0.5, "m": 2,
           "members": ["sup-norm", {"kind": "projection", "index": 1}]}
    path = tmp_path / "space.json"
    path.write_text(json.dumps(doc))
    space = load_space(path)
    assert isinstance(space, Space)
    assert space.domain.r0 == 0.5
    assert space.family.member(1).index == 1
    assert load_space(space.to_dict()).to_dict() == space.to_dict()
