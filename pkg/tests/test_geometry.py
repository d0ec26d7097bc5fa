import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from fpsphere import ffield, geometry
from fpsphere.errors import BoundInapplicableError, DimensionError


@pytest.mark.parametrize("p,r,expected", [(3, 1, (1, 0)), (3, 2, (1, 1)), (7, 3, (1, 3))])
def test_two_square_examples(p, r, expected):
    assert geometry.two_square_decomposition(p, r) == expected


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_two_square_matches_scan(p):
    for r in range(1, p):
        assert geometry.two_square_decomposition(p, r) == oracles.smallest_two_square(p, r)


def test_det_mod_p_simple():
    assert geometry.det_mod_p([[1, 2], [3, 4]], 7) == (-2) % 7
    assert geometry.det_mod_p([[1, 1], [1, 1]], 5) == 0


def test_witness_case_one_example():
    w = geometry.witness_matrix(3, 3, 1)
    assert w.a == 2
    assert w.det == 2
    assert w.entries == ((2, 1, 0, 0), (2, 0, 1, 0), (2, 0, 0, 1), (2, 2, 0, 0))


def test_witness_two_dimensional_case_two():
    w = geometry.witness_matrix(3, 2, 2)
    assert w.case == "case-II" and (w.x, w.y) == (1, 1)
    assert w.det == (-4 * 2 * 1 * 1) % 3 == 1


@pytest.mark.parametrize("p,n", list(itertools.product((3, 5, 7), range(2, 6))))
def test_witness_rows_and_determinants(p, n):
    for r in range(1, p):
        w = geometry.witness_matrix(p, n, r)
        assert w.det != 0
        assert w.det == geometry.closed_form_det(p, n, w.case, w.x, w.y)
        assert w.det == geometry.det_mod_p(w.entries, p)
        for row in w.entries:
            assert row[0] == w.a and oracles.length(row[1:], p) == r


def test_witness_needs_two_dimensions():
    with pytest.raises(DimensionError):
        geometry.witness_matrix(3, 1, 1)


def test_spheres_distinct_examples():
    assert geometry.spheres_distinct(3, 2, 1, (0, 0), (1, 1)) is True
    assert geometry.spheres_distinct(2, 2, 1, (0, 0), (1, 1)) is False
    t = (1, 2, 3)
    assert geometry.spheres_distinct(5, 3, 2, t, t) is False


@pytest.mark.parametrize("p,n", [(3, 2), (3, 3), (5, 2), (5, 3)])
def test_uniqueness_sweep_against_oracle(p, n):
    for r in range(1, p):
        seen = {}
        for t in oracles.points(p, n):
            key = frozenset(oracles.sphere(p, n, r, t))
            assert key not in seen, (t, seen.get(key))
            seen[key] = t


def test_intersection_examples():
    v = ffield.enumerate_sphere(3, 5, 1)[0]
    assert geometry.intersection_count(3, 5, 1, 0, v) == 32
    assert geometry.intersection_count(3, 5, 1, 1, (0,) * 5) == 90
    assert geometry.intersection_count(3, 2, 1, 1, (1, 1)) == 2


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(3, 2), (3, 3), (5, 2), (5, 3), (7, 2)]), st.data())
def test_intersection_matches_oracle(pn, data):
    p, n = pn
    r = data.draw(st.integers(0, p - 1))
    r2 = data.draw(st.integers(0, p - 1))
    v = tuple(data.draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n)))
    assert geometry.intersection_count(p, n, r, r2, v) == oracles.intersection(p, n, r, r2, v)


@pytest.mark.parametrize("args", [(3, 3, 1, 1, 2), (5, 2, 1, 3, 0), (3, 2, 1, 1, 1)])
def test_witt_examples(args):
    res = geometry.witt_invariance_check(*args)
    assert res.ok and len(res.counts) <= 1


def test_witt_vacuous_on_empty_offset_sphere():
    # S_0 of F_3^2 is empty
    res = geometry.witt_invariance_check(3, 2, 1, 1, 0)
    assert res.ok and res.vacuous


def test_witt_exhaustive_small():
    for p, n in ((3, 3), (5, 2), (5, 3)):
        for radii in itertools.product(range(p), repeat=3):
            assert geometry.witt_invariance_check(p, n, *radii).ok


def test_single_sample_gives_sphere_size():
    res = geometry.consistent_centers(3, 4, 1, [(1, 0, 0, 0)])
    assert res.m == 24 and res.h == 1


def test_whole_sphere_pins_center():
    t = (2, 0, 1)
    samples = ffield.enumerate_sphere(5, 3, 2, t)
    res = geometry.consistent_centers(5, 3, 2, samples)
    assert res.m == 1 and res.centers == [t]


def test_inconsistent_samples_give_zero():
    # no center of F_3^2 is at radius 1 from all four samples
    res = geometry.consistent_centers(3, 2, 1, [(0, 0), (1, 0), (0, 1), (2, 2)])
    assert res.m == 0 and res.centers == []


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(3, 3, 1), (3, 3, 2), (5, 2, 1), (3, 4, 2)]), st.data())
def test_consistent_centers_match_oracle(case, data):
    p, n, r = case
    pt = st.lists(st.integers(0, p - 1), min_size=n, max_size=n).map(tuple)
    samples = data.draw(st.lists(pt, min_size=1, max_size=3))
    res = geometry.consistent_centers(p, n, r, samples)
    assert res.centers == oracles.consistent(p, n, r, samples)


@pytest.mark.parametrize("p,n,h,expected", [(3, 4, 1, 9), (3, 12, 3, 729), (5, 7, 2, 125)])
def test_warning_floor_examples(p, n, h, expected):
    assert geometry.warning_floor(p, n, h) == expected


def test_warning_floor_inapplicable():
    with pytest.raises(BoundInapplicableError):
        geometry.warning_floor(3, 4, 2)


def test_m_two_samples_exhaustive():
    # n = 2h: the floor formula reads p^0 = 1; t itself is always consistent
    p, n, r = 3, 4, 1
    sr = ffield.sphere_array(p, n, r)
    for a, b in itertools.product(range(len(sr)), repeat=2):
        assert geometry.consistent_centers(p, n, r, [sr[a], sr[b]]).m >= 1


def test_m_floor_exhaustive_h1():
    floor = geometry.warning_floor(3, 4, 1)
    for x in ffield.enumerate_sphere(3, 4, 1):
        assert geometry.consistent_centers(3, 4, 1, [x]).m >= floor


def test_consistent_codes_sorted_unique():
    sr = ffield.sphere_array(3, 5, 1)
    codes = geometry.consistent_center_codes(3, 5, 1, sr[:2])
    assert np.all(np.diff(codes) > 0)
