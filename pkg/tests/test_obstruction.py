import copy
import itertools
import json
import math

import pytest

from emptysimplex import ParameterError
from emptysimplex.family import FamilyParams, w_point
from emptysimplex.obstruction import (
    adjacent_pair_witness,
    build_certificate,
    check_certificate,
    comparison_graph,
    find_cycle,
    modular_inverse,
    splitting_check,
    wraparound_indices,
    wraparound_pair_witness,
)
from emptysimplex import WitnessError

CASES = [(2, 5, (2,)), (2, 7, (2,)), (2, 7, (3,)), (3, 5, (1, 2))]


def second_difference(params, lo, mid, hi):
    a, b, c = (w_point(params, i) for i in (lo, mid, hi))
    return tuple(x + z - 2 * y for x, y, z in zip(a, b, c))


def params_with_hypothesis(kmax=3, mmax=9):
    for k in range(2, kmax + 1):
        for m in range(4, mmax + 1):
            allowed = [x for x in range(1, m // 2 + 1) if math.gcd(x, m) == 1]
            for a in itertools.product(allowed, repeat=k - 1):
                if any(2 <= x <= m - 2 for x in a):
                    yield FamilyParams(k, m, a)


@pytest.fixture(scope="module")
def cert252():
    return build_certificate(FamilyParams(2, 5, (2,)))


def test_known_witnesses(cert252):
    v = cert252.adjacent_pairs[0]
    assert v.p == (2, 0, 0) and v.q == (1, 1, 0)
    u = cert252.wraparound_pair
    assert u.p == (2, 3, 5) and u.q == (0, 0, 0)
    assert cert252.a == 2 and cert252.a_inverse == 3


def test_mirror_identity_and_coordinate_bounds():
    for params in params_with_hypothesis():
        m, d = params.m, params.d
        for i in range(2, m - 1):
            z = second_difference(params, i - 1, i, i + 1)
            mirrored = second_difference(params, m - i + 1, m - i, m - i - 1)
            assert all(x + y == 0 for x, y in zip(z, mirrored))
            assert all(x in (-1, 0, 1) for x in z)
            for j in range(1, d - 1 + 1):
                if j != d - j:
                    assert z[j - 1] + z[d - j - 1] == 0, (params, i, j)


def test_witness_pairs_satisfy_their_identities():
    for params in params_with_hypothesis(mmax=8):
        for i in range(2, params.m - 1):
            w = adjacent_pair_witness(params, i)
            assert tuple(p - q for p, q in zip(w.p, w.q)) == second_difference(params, i - 1, i, i + 1)
        a = next(x for x in params.a if 2 <= x <= params.m - 2)
        if 2 <= modular_inverse(a, params.m) <= params.m - 2:
            u = wraparound_pair_witness(params, a)
            assert tuple(p - q for p, q in zip(u.p, u.q)) == u.difference


def test_wraparound_indices():
    assert wraparound_indices(2, 5) == (3, 3, 4, 1, 2)
    inv, lo, hi, mlo, mhi = wraparound_indices(3, 7)
    assert inv == 5 and 3 * inv % 7 == 1
    assert (lo + mhi) % 7 == 0 and (hi + mlo) % 7 == 0


def test_argument_errors():
    p = FamilyParams(2, 5, (2,))
    with pytest.raises(ValueError):
        adjacent_pair_witness(p, 1)
    with pytest.raises(ParameterError):
        wraparound_pair_witness(p, 3)
    with pytest.raises(ParameterError):
        modular_inverse(2, 4)
    with pytest.raises(ParameterError) as info:
        build_certificate(FamilyParams(2, 5, (1,)))
    assert info.value.constraint == "2 <= a_j <= m-2 for some j"


def test_splitting_readings(cert252):
    checks = splitting_check(cert252.params, cert252.adjacent_pairs + [cert252.wraparound_pair])
    assert all(c.splittings == 0 for c in checks["A"])
    assert all(c.ok and c.splittings > 0 for c in checks["lattice"])


def test_comparison_graph_and_cycle():
    graph = comparison_graph(FamilyParams(2, 7, (3,)), 3)
    assert set(graph) == {1, 2, 3}
    assert all(c not in alts and alts for c, alts in graph.items())
    cycle = find_cycle(graph)
    for x, y in zip(cycle, cycle[1:] + cycle[:1]):
        assert y in graph[x]
    with pytest.raises(WitnessError):
        find_cycle({1: [2], 2: []})


@pytest.mark.parametrize("k,m,a", CASES)
def test_certificates_recheck(k, m, a):
    cert = build_certificate(FamilyParams(k, m, a))
    assert cert.ok and all(cert.membership) and len(cert.binomials) == 2 * (m - 2)
    data = json.loads(json.dumps(cert.to_json()))
    assert data["kind"] == "obstruction-certificate" and data["ok"]
    res = check_certificate(data)
    assert res.ok, res.problems


def test_tampering_is_detected(cert252):
    data = json.loads(json.dumps(cert252.to_json()))
    bad = copy.deepcopy(data)
    bad["adjacent_pairs"][0]["p"] = [1, 1, 1]
    assert not check_certificate(bad).ok
    bad = copy.deepcopy(data)
    bad["a_inverse"] = 2
    assert not check_certificate(bad).ok
    bad = copy.deepcopy(data)
    bad["cycle"] = []
    assert not check_certificate(bad).ok
    bad = copy.deepcopy(data)
    bad["params"]["a"] = [4]
    assert not check_certificate(bad).ok
