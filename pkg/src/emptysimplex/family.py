"""The empty simplices P(a_1, ..., a_{k-1}, m) and their dilations.

Vertices are v_0 = 0, v_i = e_i (1 <= i <= d-1) and

    v_d = sum_{i<k} a_i e_i + sum_{k<=j<d} (m - a_{d-j}) e_j + m e_d,

with d = 2k - 1. The box points of positive height are the m - 1 points
w_1, ..., w_{m-1}, all at height k, which drives the IDP threshold: nP has
IDP exactly when n >= k.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

from .errors import ParameterError, WitnessError
from .lattice import (
    LatticeSimplex,
    _contains_rows,
    _dilation_array,
    _sumset_array,
    Vector,
    box_points,
    enumerate_dilation_points,
    kfold_sumset,
    sumset,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FamilyParams:
    """Validated (k, m, a) with 1 <= a_i <= m/2 and gcd(a_i, m) = 1."""

    k: int
    m: int
    a: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        if self.k < 2:
            raise ParameterError("k >= 2", f"got k={self.k}")
        if self.m < 2:
            raise ParameterError("m >= 2", f"got m={self.m}")
        if len(self.a) != self.k - 1:
            raise ParameterError("len(a) == k-1", f"k={self.k} needs {self.k - 1} values, got {len(self.a)}")
        for i, ai in enumerate(self.a, 1):
            if not 1 <= 2 * ai <= self.m:
                raise ParameterError("1 <= a_i <= m/2", f"a_{i}={ai}, m={self.m}")
            if math.gcd(ai, self.m) != 1:
                raise ParameterError("gcd(a_i, m) == 1", f"a_{i}={ai}, m={self.m}")

    @classmethod
    def create(cls, k: int, m: int, a=None, normalize: bool = True) -> "FamilyParams":
        """Build params, defaulting ``a`` to all ones.

        With ``normalize`` an entry m/2 < a_i < m coprime to m is replaced by
        m - a_i (with a warning), which gives the same simplex up to
        unimodular equivalence.
        """
        a = (1,) * (k - 1) if a is None else tuple(int(x) for x in a)
        if normalize and m >= 2:
            fixed = []
            for i, ai in enumerate(a, 1):
                if m < 2 * ai < 2 * m and math.gcd(ai, m) == 1:
                    warnings.warn(f"a_{i}={ai} > m/2 replaced by m - a_{i} = {m - ai}", stacklevel=2)
                    ai = m - ai
                fixed.append(ai)
            a = tuple(fixed)
        return cls(k, m, a)

    @property
    def d(self) -> int:
        return 2 * self.k - 1

    @property
    def b(self) -> tuple[int, ...]:
        return tuple(self.m - x for x in self.a)

    @property
    def is_unimodular_family(self) -> bool:
        """True for P(1, ..., 1, m), the case where kP has a regular unimodular triangulation."""
        return all(x == 1 for x in self.a)

    def label(self) -> str:
        return f"P({','.join(map(str, self.a))},{self.m})"


def last_vertex(params: FamilyParams) -> Vector:
    k, m, d, a = params.k, params.m, params.d, params.a
    coords = [0] * d
    for i in range(1, k):
        coords[i - 1] = a[i - 1]
    for j in range(k, d):
        coords[j - 1] = m - a[d - j - 1]
    coords[d - 1] = m
    return tuple(coords)


def build_simplex(params: FamilyParams) -> LatticeSimplex:
    d = params.d
    verts = [(0,) * d]
    verts += [tuple(int(i == j) for j in range(d)) for i in range(d - 1)]
    verts.append(last_vertex(params))
    return LatticeSimplex(tuple(verts))


def w_point(params: FamilyParams, i: int) -> Vector:
    """w_i for 1 <= i <= m - 1, exactly."""
    m, a = params.m, params.a
    if not 1 <= i <= m - 1:
        raise ValueError(f"w_i needs 1 <= i <= m-1, got i={i}")
    head = [((i * (m - aj)) % m + i * aj) for aj in a]
    tail = [((i * aj) % m + i * (m - aj)) for aj in reversed(a)]
    nums = head + tail
    assert all(x % m == 0 for x in nums), (params, i, nums)
    return tuple(x // m for x in nums) + (i,)


def w_points(params: FamilyParams) -> list[Vector]:
    return [w_point(params, i) for i in range(1, params.m)]


def lattice_points(params: FamilyParams, n: int = 1) -> list[Vector]:
    return enumerate_dilation_points(build_simplex(params), n)


@dataclass
class DecompositionReport:
    n: int
    equal: bool
    disjoint: bool
    lhs_size: int
    sumset_size: int
    w_part_size: int
    box_matches_w: bool
    missing: list[Vector] = field(default_factory=list)
    extra: list[Vector] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.equal and self.disjoint and self.box_matches_w


def verify_decomposition(params: FamilyParams, n: int) -> DecompositionReport:
    """Compare nP ∩ Z^d with (n-fold sumset) ⊔ ((n-k)-fold sumset + {w_i}).

    Also checks that the positive-height box points are exactly the w_i,
    all at height k.
    """
    k = params.k
    if n < k:
        raise ValueError(f"decomposition holds for n >= k={k}, got n={n}")
    simplex = build_simplex(params)
    verts = simplex.vertices
    lhs = enumerate_dilation_points(simplex, n)
    deep = kfold_sumset(verts, n)
    shallow = sumset(kfold_sumset(verts, n - k), w_points(params))
    rhs = set(deep) | set(shallow)
    lhs_set = set(lhs)
    box = box_points(simplex)
    positive = sorted(p for p, h in box if h > 0)
    box_ok = positive == sorted(w_points(params)) and all(h == k for _, h in box if h > 0)
    return DecompositionReport(
        n=n,
        equal=lhs_set == rhs,
        disjoint=not (set(deep) & set(shallow)),
        lhs_size=len(lhs),
        sumset_size=len(deep),
        w_part_size=len(shallow),
        box_matches_w=box_ok,
        missing=sorted(lhs_set - rhs),
        extra=sorted(rhs - lhs_set),
    )


def idp_failure(simplex: LatticeSimplex, n: int, depth: int):
    """First (l, point) with point in l(nS) but not a sum of l points of nS, else None.

    Checks l(nS) ∩ Z^d = (l-1)(nS) ∩ Z^d + nS ∩ Z^d for l = 2..depth, which by
    induction is the same as l-fold decomposability.
    """
    if depth < 2:
        raise ValueError("depth must be at least 2")
    base = _dilation_array(simplex, n)
    prev = base
    for ell in range(2, depth + 1):
        target = _dilation_array(simplex, ell * n)
        reached = _sumset_array(prev, base)
        hit = _contains_rows(reached, target)
        if not hit.all():
            bad = sorted(tuple(int(x) for x in row) for row in target[~hit])
            return ell, bad[0]
        prev = target
    return None


def idp_check(simplex: LatticeSimplex, n: int, depth: int | None = None) -> bool:
    """Whether nS passes the IDP test up to ``depth`` summands (default d - 1).

    Every dilation by at least d - 1 has IDP, so depth d - 1 decides the
    property for lattice polytopes of dimension d.
    """
    if depth is None:
        depth = max(2, simplex.dim - 1)
    return idp_failure(simplex, n, depth) is None


def idp_failure_witness(params: FamilyParams, n: int) -> Vector:
    """A point of l'(nP) that is not a sum of l' points of nP, for n < k.

    l' is the least integer with l' n >= k, and the point is
    w_1 + (l' n - k) v_0. The claim is checked by an exhaustive sumset scan.
    """
    k = params.k
    if n >= k:
        raise ValueError(f"no witness exists: nP has IDP for n={n} >= k={k}")
    if n < 1:
        raise ValueError("n must be positive")
    ell = -(-k // n)
    simplex = build_simplex(params)
    v0 = simplex.vertices[0]
    point = tuple(w + (ell * n - k) * z for w, z in zip(w_point(params, 1), v0))
    if not simplex.contains(point, ell * n):
        raise WitnessError(f"{point} is not in {ell * n}P")
    reachable = set(kfold_sumset(enumerate_dilation_points(simplex, n), ell))
    if point in reachable:
        raise WitnessError(f"{point} decomposes into {ell} points of {n}P")
    return point
