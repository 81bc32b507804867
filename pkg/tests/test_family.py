import itertools
import math
import warnings

import pytest

from emptysimplex import ParameterError, WitnessError
from emptysimplex.family import (
    FamilyParams,
    build_simplex,
    idp_check,
    idp_failure,
    idp_failure_witness,
    last_vertex,
    lattice_points,
    verify_decomposition,
    w_point,
    w_points,
)
from emptysimplex.lattice import affine_lattice_index, box_points, delta_polynomial, kfold_sumset


def all_params(ks, mmax):
    for k in ks:
        for m in range(2, mmax + 1):
            allowed = [x for x in range(1, m // 2 + 1) if math.gcd(x, m) == 1]
            for a in itertools.product(allowed, repeat=k - 1):
                yield FamilyParams(k, m, a)


@pytest.mark.parametrize("k,m,a,constraint", [
    (1, 3, (), "k >= 2"),
    (2, 1, (1,), "m >= 2"),
    (3, 5, (1,), "len(a) == k-1"),
    (2, 5, (3,), "1 <= a_i <= m/2"),
    (2, 4, (2,), "gcd(a_i, m) == 1"),
    (2, 6, (0,), "1 <= a_i <= m/2"),
])
def test_parameter_errors_name_the_constraint(k, m, a, constraint):
    with pytest.raises(ParameterError) as info:
        FamilyParams(k, m, a)
    assert info.value.constraint == constraint


def test_create_normalizes_large_a():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        p = FamilyParams.create(2, 5, (4,))
    assert p.a == (1,)
    assert caught
    assert FamilyParams.create(3, 4).a == (1, 1)
    with pytest.raises(ParameterError):
        FamilyParams.create(2, 5, (4,), normalize=False)


@pytest.mark.parametrize("k,m,a,expected", [
    (2, 2, (1,), (1, 1, 2)),
    (2, 5, (2,), (2, 3, 5)),
    (3, 2, (1, 1), (1, 1, 1, 1, 2)),
    (3, 5, (1, 2), (1, 2, 3, 4, 5)),
])
def test_last_vertex(k, m, a, expected):
    assert last_vertex(FamilyParams(k, m, a)) == expected


def test_w_points_examples():
    assert w_points(FamilyParams(2, 5, (2,))) == [(1, 1, 1), (1, 2, 2), (2, 2, 3), (2, 3, 4)]
    assert w_points(FamilyParams(2, 2, (1,))) == [(1, 1, 1)]
    with pytest.raises(ValueError):
        w_point(FamilyParams(2, 5, (2,)), 5)


def test_all_ones_w_points_are_linear():
    # for a = (1, ..., 1): w_l = (1, .., 1, l, .., l)
    for k in (2, 3, 4):
        for m in (2, 3, 6):
            p = FamilyParams(k, m, (1,) * (k - 1))
            for ell in range(1, m):
                assert w_point(p, ell) == (1,) * (k - 1) + (ell,) * k


@pytest.mark.parametrize("params", list(all_params((2, 3), 5)), ids=lambda p: f"{p.k}-{p.label()}")
def test_empty_with_box_points_at_height_k(params):
    S = build_simplex(params)
    assert lattice_points(params) == sorted(S.vertices)
    box = box_points(S)
    assert box[0] == ((0,) * params.d, 0)
    assert sorted(p for p, h in box[1:]) == sorted(w_points(params))
    assert all(h == params.k for _, h in box[1:])


def test_decomposition_small():
    rep = verify_decomposition(FamilyParams(2, 5, (2,)), 2)
    assert rep.ok and not rep.missing and not rep.extra
    assert rep.lhs_size == rep.sumset_size + rep.w_part_size
    with pytest.raises(ValueError):
        verify_decomposition(FamilyParams(3, 2, (1, 1)), 2)


def test_lattice_points_of_kP_span_the_lattice():
    for params in all_params((2, 3), 5):
        assert affine_lattice_index(lattice_points(params, params.k)) == 1
        # the vertices alone only reach an index-m sublattice
        assert affine_lattice_index(kfold_sumset(build_simplex(params).vertices, params.k)) == params.m


def test_paired_coordinates_of_w_points():
    for params in all_params((2, 3, 4), 7):
        k, m, d = params.k, params.m, params.d
        for i in range(1, m):
            w = w_point(params, i)
            for j in range(1, k):
                assert w[j - 1] + w[d - j - 1] == i + 1
        for i in range(1, m):
            for x in params.a + params.b:
                assert (m - i) * x % m + i * x % m == m


def test_idp_small_case():
    S = build_simplex(FamilyParams(2, 3, (1,)))
    assert idp_failure(S, 1, 2) == (2, (1, 1, 1))
    assert idp_check(S, 2)
    with pytest.raises(ValueError):
        idp_failure(S, 1, 1)


def test_idp_witness():
    p = FamilyParams(3, 2, (1, 1))
    assert idp_failure_witness(p, 2) == (1, 1, 1, 1, 1)
    assert idp_failure_witness(p, 1) == (1, 1, 1, 1, 1)
    with pytest.raises(ValueError):
        idp_failure_witness(p, 3)


def test_witness_error_type():
    assert issubclass(WitnessError, RuntimeError)


def test_delta_of_the_family_for_larger_k():
    p = FamilyParams(4, 3, (1, 1, 1))
    assert delta_polynomial(build_simplex(p)).coeffs == (1, 0, 0, 0, 2, 0, 0, 0)
