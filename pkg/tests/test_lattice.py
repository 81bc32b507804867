import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from emptysimplex import DegenerateSimplexError, LatticeSimplex
from emptysimplex.lattice import (
    DeltaPolynomial,
    affine_lattice_index,
    bareiss_det,
    box_points,
    delta_polynomial,
    echelon,
    enumerate_dilation_points,
    integer_kernel,
    kfold_sumset,
    normalized_volume,
    rational_inverse,
    scan_bounding_box,
    sumset,
)

small_ints = st.integers(min_value=-6, max_value=6)


def square(n):
    return st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n)


def det_by_permutations(rows):
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i, j in itertools.combinations(range(n), 2) if perm[i] > perm[j])
        total += (-1) ** inversions * math.prod(rows[i][perm[i]] for i in range(n))
    return total


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4).flatmap(square))
def test_bareiss_matches_leibniz(rows):
    assert bareiss_det(rows) == det_by_permutations(rows)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(square))
def test_rational_inverse(rows):
    if det_by_permutations(rows) == 0:
        with pytest.raises(DegenerateSimplexError):
            rational_inverse(rows)
        return
    inv = rational_inverse(rows)
    n = len(rows)
    for i in range(n):
        for j in range(n):
            assert sum(rows[i][t] * inv[t][j] for t in range(n)) == Fraction(int(i == j))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small_ints, min_size=3, max_size=3),
                                                   min_size=n, max_size=n)))
def test_integer_kernel_is_saturated_basis(columns):
    kernel = integer_kernel(columns)
    for z in kernel:
        assert all(sum(zi * col[c] for zi, col in zip(z, columns)) == 0 for c in range(3))
    # rank-nullity, and the kernel is saturated: its HNF has unit pivots
    rank = len(echelon(columns)[1])
    assert len(kernel) == len(columns) - rank
    if kernel:
        reduced, pivots = echelon(kernel)
        assert len(pivots) == len(kernel)
        # index of the kernel lattice in its saturation is the gcd of maximal minors
        minors = [bareiss_det([[row[c] for c in cols] for row in kernel])
                  for cols in itertools.combinations(range(len(columns)), len(kernel))]
        assert math.gcd(*minors) == 1


def test_affine_lattice_index():
    assert affine_lattice_index([(0, 0), (1, 0), (0, 1)]) == 1
    assert affine_lattice_index([(0, 0), (2, 0), (0, 1)]) == 2
    assert affine_lattice_index([(0, 0), (2, 0), (4, 0)]) == math.inf
    assert affine_lattice_index([(1, 1), (3, 2), (2, 3), (2, 2)]) == 1


def test_degenerate_simplex_rejected():
    with pytest.raises(DegenerateSimplexError):
        LatticeSimplex(((0, 0), (1, 1), (2, 2)))


def test_delta_polynomial_helpers():
    delta = DeltaPolynomial((1, 0, 1, 0))
    assert delta.volume == 2
    assert str(delta) == "1 + t^2"
    assert [delta.ehrhart(n) for n in range(4)] == [1, 4, 11, 24]
    assert str(DeltaPolynomial((1, 3, 0))) == "1 + 3t"


def test_reeve_like_tetrahedron():
    # empty tetrahedron of volume 3: delta = 1 + 2t^2
    S = LatticeSimplex(((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 3)))
    assert normalized_volume(S) == 3
    assert delta_polynomial(S).coeffs == (1, 0, 2, 0)
    assert [h for _, h in box_points(S)] == [0, 2, 2]
    assert enumerate_dilation_points(S, 1) == sorted(S.vertices)


def random_simplex(rng, d, spread=3):
    while True:
        verts = [tuple(rng.randint(-spread, spread) for _ in range(d)) for _ in range(d + 1)]
        try:
            return LatticeSimplex(tuple(verts))
        except DegenerateSimplexError:
            continue


def test_enumeration_matches_box_scan_on_random_simplices():
    rng = random.Random(20240611)
    for trial in range(30):
        d = rng.choice([2, 3, 4])
        S = random_simplex(rng, d)
        n = rng.randint(0, 3)
        assert enumerate_dilation_points(S, n) == scan_bounding_box(S, n), (trial, S.vertices, n)


def test_ehrhart_volume_consistency_random():
    rng = random.Random(7)
    for _ in range(25):
        d = rng.choice([2, 3])
        S = random_simplex(rng, d, spread=2)
        delta = delta_polynomial(S)
        assert delta.coeffs[0] == 1
        assert all(c >= 0 for c in delta.coeffs)
        assert delta.volume == normalized_volume(S)
        for n in range(4):
            assert len(enumerate_dilation_points(S, n)) == delta.ehrhart(n)


def test_barycentric_and_contains():
    S = LatticeSimplex(((0, 0), (2, 0), (0, 2)))
    assert S.barycentric((1, 1)) == (0, Fraction(1, 2), Fraction(1, 2))
    assert S.contains((1, 1))
    assert not S.contains((2, 1))
    assert S.contains((3, 1), 2)


def test_sumsets():
    assert sumset([(0,), (1,)], [(0,), (2,)]) == [(0,), (1,), (2,), (3,)]
    assert kfold_sumset([(0, 0), (1, 0), (0, 1)], 2) == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]
    assert kfold_sumset([(1, 2)], 0) == [(0, 0)]
