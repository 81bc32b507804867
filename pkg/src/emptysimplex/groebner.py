"""Buchberger machinery for binomial ideals with +-1 coefficients.

Reduction of a binomial ``u - v`` rewrites each term separately: a term
divisible by a leading monomial ``L`` of ``L - T`` becomes ``(term / L) * T``.
Every step is a legal division step, so ``u - v`` reduces to zero exactly
when both terms reach the same normal monomial.
"""
from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ResourceLimitError
from .family import FamilyParams, build_simplex
from .lattice import enumerate_dilation_points, integer_kernel
from .monomials import (
    Binomial,
    DegRevLexOrder,
    Monomial,
    MonomialOrder,
    VariableCatalog,
    coprime,
    from_exponents,
    is_squarefree_monomial,
    mono_div,
    mono_divides,
    mono_gcd,
    mono_lcm,
    mono_mul,
)

log = logging.getLogger(__name__)


def orient_all(G: Iterable[Binomial], order: MonomialOrder) -> list[Binomial]:
    """Oriented, nonzero, duplicate-free binomials in canonical (sorted) order."""
    seen = {}
    for g in G:
        h = order.orient(g)
        if h is not None:
            seen.setdefault(h, None)
    return sorted(seen, key=lambda g: (order.key(g.lead), order.key(g.tail)))


class Reducer:
    """Rewrites monomials by the first generator (in list order) whose lead divides them."""

    def __init__(self, basis: Iterable[Binomial] = ()):
        self.basis: list[Binomial] = []
        self._first: dict[Monomial, int] = {}
        self._sizes: set[int] = set()
        for g in basis:
            self.add(g)

    def add(self, g: Binomial) -> int:
        self.basis.append(g)
        i = len(self.basis) - 1
        self._first.setdefault(g.lead, i)
        self._sizes.add(len(g.lead))
        return i

    def find(self, mono: Monomial) -> int | None:
        best = None
        first = self._first
        for size in self._sizes:
            if size > len(mono):
                continue
            for sub in set(itertools.combinations(mono, size)):
                i = first.get(sub)
                if i is not None and (best is None or i < best):
                    best = i
        return best

    def reduce_monomial(self, mono: Monomial) -> Monomial:
        while True:
            i = self.find(mono)
            if i is None:
                return mono
            g = self.basis[i]
            mono = mono_mul(mono_div(mono, g.lead), g.tail)


def _as_reducer(G, order: MonomialOrder) -> Reducer:
    if isinstance(G, Reducer):
        return G
    return Reducer(orient_all(G, order))


def normal_form(f: Binomial, G, order: MonomialOrder) -> Binomial | None:
    """Fully reduce ``f`` modulo ``G``; ``None`` when the remainder is zero.

    ``G`` may be a prebuilt :class:`Reducer` (its list order is the
    reduction strategy) or any iterable of binomials, which is first oriented
    and put in canonical order.
    """
    red = _as_reducer(G, order)
    u = red.reduce_monomial(f.lead)
    v = red.reduce_monomial(f.tail)
    if u == v:
        return None
    return order.orient(Binomial(u, v))


def s_polynomial(g1: Binomial, g2: Binomial, order: MonomialOrder) -> Binomial | None:
    """The S-pair of two binomials, oriented; ``None`` if it vanishes identically."""
    a, b = order.orient(g1), order.orient(g2)
    if a is None or b is None:
        return None
    lcm = mono_lcm(a.lead, b.lead)
    left = mono_mul(mono_div(lcm, a.lead), a.tail)
    right = mono_mul(mono_div(lcm, b.lead), b.tail)
    if left == right:
        return None
    return order.orient(Binomial(left, right))


def _overlapping_pairs(leads: Sequence[Monomial]) -> list[tuple[int, int]]:
    by_var: dict[int, list[int]] = {}
    for i, lead in enumerate(leads):
        for v in set(lead):
            by_var.setdefault(v, []).append(i)
    pairs = set()
    for idx in by_var.values():
        pairs.update(itertools.combinations(idx, 2))
    return sorted(pairs)


@dataclass
class BuchbergerResult:
    ok: bool
    basis_size: int
    pairs_checked: int
    pairs_skipped: int
    failing_pair: tuple[Binomial, Binomial] | None = None
    remainder: Binomial | None = None

    def __bool__(self) -> bool:
        return self.ok


def buchberger_check(G: Iterable[Binomial], order: MonomialOrder) -> BuchbergerResult:
    """Check that every S-pair of ``G`` reduces to zero modulo ``G``.

    Pairs with coprime leads are skipped (first criterion). Pairs are visited
    in canonical order, so the reported failure is the first one in that order.
    """
    basis = orient_all(G, order)
    red = Reducer(basis)
    leads = [g.lead for g in basis]
    pairs = _overlapping_pairs(leads)
    total = len(basis) * (len(basis) - 1) // 2
    for n, (i, j) in enumerate(pairs):
        s = s_polynomial(basis[i], basis[j], order)
        if s is None:
            continue
        r = normal_form(s, red, order)
        if r is not None:
            return BuchbergerResult(False, len(basis), n + 1, total - len(pairs),
                                    (basis[i], basis[j]), r)
    return BuchbergerResult(True, len(basis), len(pairs), total - len(pairs))


def buchberger(gens: Iterable[Binomial], order: MonomialOrder, step_limit: int = 200_000) -> list[Binomial]:
    """Compute a Gröbner basis of the ideal generated by ``gens``.

    Pairs are processed smallest-lcm first (normal strategy). ``step_limit``
    bounds the number of processed pairs.
    """
    red = Reducer()
    heap: list = []
    counter = itertools.count()

    def push_pairs(j: int):
        lead_j = red.basis[j].lead
        for i in range(j):
            lead_i = red.basis[i].lead
            if coprime(lead_i, lead_j):
                continue
            lcm = mono_lcm(lead_i, lead_j)
            heapq.heappush(heap, (order.key(lcm), next(counter), i, j))

    for g in orient_all(gens, order):
        r = normal_form(g, red, order) if red.basis else g
        if r is not None:
            push_pairs(red.add(r))
    steps = 0
    while heap:
        steps += 1
        if steps > step_limit:
            raise ResourceLimitError(f"Buchberger exceeded {step_limit} pair reductions")
        _, _, i, j = heapq.heappop(heap)
        s = s_polynomial(red.basis[i], red.basis[j], order)
        if s is None:
            continue
        r = normal_form(s, red, order)
        if r is not None:
            push_pairs(red.add(r))
    return list(red.basis)


def reduced_basis(G: Iterable[Binomial], order: MonomialOrder) -> list[Binomial]:
    """Minimal leads plus fully reduced tails."""
    basis = orient_all(G, order)
    keep = []
    for i, g in enumerate(basis):
        if any(mono_divides(h.lead, g.lead) and (h.lead != g.lead or j < i)
               for j, h in enumerate(basis) if j != i):
            continue
        keep.append(g)
    red = Reducer(keep)
    out = []
    for g in keep:
        out.append(Binomial(g.lead, red.reduce_monomial(g.tail)))
    return orient_all(out, order)


def initial_ideal_generators(G: Iterable[Binomial], order: MonomialOrder) -> list[Monomial]:
    """Minimal generators of the ideal spanned by the leading monomials of ``G``."""
    leads = sorted({g.lead for g in orient_all(G, order)}, key=lambda u: (len(u), u))
    return minimalize(leads)


def minimalize(monos: Iterable[Monomial]) -> list[Monomial]:
    out: list[Monomial] = []
    for u in sorted(set(monos), key=lambda u: (len(u), u)):
        if not any(mono_divides(v, u) for v in out):
            out.append(u)
    return sorted(out)


def is_squarefree(gens: Iterable[Monomial]) -> bool:
    return all(is_squarefree_monomial(u) for u in gens)


def count_standard_monomials(gens: Iterable[Monomial], degree: int, nvars: int) -> int:
    """Number of degree-``degree`` monomials in ``nvars`` variables divisible by no generator."""
    gens = list(gens)
    by_max: dict[int, list[Monomial]] = {}
    for g in gens:
        if not g:
            return 0
        by_max.setdefault(max(g), []).append(g)

    def rec(prefix: list[int], start: int, left: int) -> int:
        if left == 0:
            return 1
        total = 0
        for v in range(start, nvars):
            prefix.append(v)
            mono = tuple(prefix)
            if not any(mono_divides(g, mono) for g in by_max.get(v, ())):
                total += rec(prefix, v, left - 1)
            prefix.pop()
        return total

    return rec([], 0, degree)


@dataclass
class HilbertReport:
    degrees: list[int]
    standard: list[int]
    ehrhart: list[int]
    first_mismatch: int | None = None

    @property
    def ok(self) -> bool:
        return self.first_mismatch is None

    def rows(self):
        return list(zip(self.degrees, self.standard, self.ehrhart))


def hilbert_vs_ehrhart(params: FamilyParams, order: MonomialOrder, G: Iterable[Binomial],
                       maxdeg: int = 3) -> HilbertReport:
    """Compare standard-monomial counts of in(G) with |n(kP) ∩ Z^d| for n <= maxdeg.

    Since G lies in the toric ideal, equality in degree n means in(G) and
    in(I) agree in that degree.
    """
    cat_size = VariableCatalog(params).size
    gens = initial_ideal_generators(G, order)
    simplex = build_simplex(params)
    rep = HilbertReport([], [], [])
    for n in range(1, maxdeg + 1):
        std = count_standard_monomials(gens, n, cat_size)
        ehr = len(enumerate_dilation_points(simplex, n * params.k))
        rep.degrees.append(n)
        rep.standard.append(std)
        rep.ehrhart.append(ehr)
        if std != ehr and rep.first_mismatch is None:
            rep.first_mismatch = n
    return rep


def _binomial_from_vector(z: Sequence[int]) -> Binomial:
    pos = from_exponents({i: c for i, c in enumerate(z) if c > 0})
    neg = from_exponents({i: -c for i, c in enumerate(z) if c < 0})
    return Binomial(pos, neg)


def _cancel_common(g: Binomial) -> Binomial:
    common = mono_gcd(g.lead, g.tail)
    if not common:
        return g
    return Binomial(mono_div(g.lead, common), mono_div(g.tail, common))


def toric_gb_reference(cat: VariableCatalog, order: MonomialOrder,
                       step_limit: int = 200_000) -> list[Binomial]:
    """Reduced Gröbner basis of the toric ideal, computed from scratch.

    Starts from the lattice basis ideal of an integer kernel basis of the
    image matrix and saturates one variable at a time: a reverse
    lexicographic basis with that variable smallest is divided through by
    common factors. The result never consults the explicit families.
    """
    n = cat.size
    kernel = integer_kernel([cat.image(v) for v in range(n)])
    gens = [_binomial_from_vector(z) for z in kernel]
    for var in range(n):
        ranking = [v for v in range(n) if v != var] + [var]
        rev = DegRevLexOrder(n, ranking)
        gb = buchberger(gens, rev, step_limit)
        gens = orient_all((_cancel_common(g) for g in gb), rev)
        log.debug("saturated by %s: %d generators", cat.name(var), len(gens))
    return reduced_basis(buchberger(gens, order, step_limit), order)


def same_ideal(G1: Sequence[Binomial], G2: Sequence[Binomial], order: MonomialOrder) -> tuple[bool, list, list]:
    """Mutual reduction test; each side must be a Gröbner basis for the verdict to mean equality.

    Returns (ok, members of G1 not reducing to zero mod G2, members of G2 not
    reducing to zero mod G1).
    """
    r1, r2 = _as_reducer(G1, order), _as_reducer(G2, order)
    bad12 = [g for g in G1 if normal_form(g, r2, order) is not None]
    bad21 = [g for g in G2 if normal_form(g, r1, order) is not None]
    return not bad12 and not bad21, bad12, bad21
