"""Variables, monomials, binomials and monomial orders for the toric ideal of kP.

A monomial is a sorted tuple of variable indices with repetition, so
``x3^2 x7`` is ``(3, 3, 7)`` and the constant monomial is ``()``. A
:class:`Binomial` ``(first, second)`` stands for ``first - second``; all
coefficients are +-1 so nothing else needs storing.
"""
from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .family import FamilyParams, build_simplex, w_point
from .lattice import Vector

Monomial = tuple[int, ...]
ONE: Monomial = ()


class Binomial(NamedTuple):
    lead: Monomial
    tail: Monomial


# ---------------------------------------------------------------- monomials

def mono_mul(u: Monomial, v: Monomial) -> Monomial:
    return tuple(sorted(u + v))


def mono_divides(u: Monomial, v: Monomial) -> bool:
    """True if u divides v."""
    if len(u) > len(v):
        return False
    j, n = 0, len(v)
    for x in u:
        while j < n and v[j] < x:
            j += 1
        if j == n or v[j] != x:
            return False
        j += 1
    return True


def mono_div(v: Monomial, u: Monomial) -> Monomial:
    """v / u, assuming u divides v."""
    rest = Counter(v)
    rest.subtract(u)
    if any(c < 0 for c in rest.values()):
        raise ValueError(f"{u} does not divide {v}")
    return tuple(sorted(rest.elements()))


def mono_lcm(u: Monomial, v: Monomial) -> Monomial:
    return tuple(sorted((Counter(u) | Counter(v)).elements()))


def mono_gcd(u: Monomial, v: Monomial) -> Monomial:
    return tuple(sorted((Counter(u) & Counter(v)).elements()))


def coprime(u: Monomial, v: Monomial) -> bool:
    return not set(u).intersection(v)


def is_squarefree_monomial(u: Monomial) -> bool:
    return len(set(u)) == len(u)


def exponents(u: Monomial) -> dict[int, int]:
    return dict(sorted(Counter(u).items()))


def from_exponents(exps: dict[int, int]) -> Monomial:
    if any(e < 0 for e in exps.values()):
        raise ValueError("negative exponent")
    return tuple(sorted(itertools.chain.from_iterable([v] * e for v, e in exps.items())))


# ------------------------------------------------------------------ catalog

_NAME = re.compile(r"^(x|y)\[(\d+(?:,\d+)*)\]$")


class VariableCatalog:
    """Polynomial ring presenting the Ehrhart ring of kP.

    x-variables are indexed by weakly increasing k-sequences over {0..d},
    y-variables by 0..m. The sequences u_0 = 0 1 .. k-1 and u_m = k .. d are
    never x-variables: they are the aliases y_0 and y_m. Variable order is
    all x-variables (lexicographic in the sequence) then y_0, ..., y_m.
    """

    def __init__(self, params: FamilyParams):
        self.params = params
        k, m, d = params.k, params.m, params.d
        self.k, self.m, self.d = k, m, d
        self.u0: tuple[int, ...] = tuple(range(k))
        self.um: tuple[int, ...] = tuple(range(k, d + 1))
        verts = build_simplex(params).vertices
        self.vertices = verts

        def seq_point(seq):
            return tuple(sum(verts[i][c] for i in seq) for c in range(d))

        self.x_seqs = [s for s in itertools.combinations_with_replacement(range(d + 1), k)
                       if s not in (self.u0, self.um)]
        self.n_x = len(self.x_seqs)
        names, points, seqs = [], [], []
        for s in self.x_seqs:
            names.append("x[" + ",".join(map(str, s)) + "]")
            points.append(seq_point(s))
            seqs.append(s)
        for j in range(m + 1):
            names.append(f"y[{j}]")
            if j == 0:
                points.append(seq_point(self.u0))
                seqs.append(self.u0)
            elif j == m:
                points.append(seq_point(self.um))
                seqs.append(self.um)
            else:
                points.append(w_point(params, j))
                seqs.append(None)
        self.names: list[str] = names
        self.points: list[Vector] = points
        self.seqs: list[tuple[int, ...] | None] = seqs
        self.index = {n: i for i, n in enumerate(names)}
        self._x_index = {s: i for i, s in enumerate(self.x_seqs)}
        self._x_index[self.u0] = self.n_x
        self._x_index[self.um] = self.n_x + m
        assert self.size == math.comb(d + k, k) + m - 1

    @property
    def size(self) -> int:
        return len(self.names)

    def x(self, seq: Sequence[int]) -> int:
        """Variable for the vertex multiset ``seq``; u_0 / u_m resolve to y_0 / y_m."""
        return self._x_index[tuple(sorted(seq))]

    def y(self, j: int) -> int:
        if not 0 <= j <= self.m:
            raise ValueError(f"y_{j} out of range 0..{self.m}")
        return self.n_x + j

    def is_x(self, var: int) -> bool:
        return var < self.n_x

    def y_index(self, var: int) -> int:
        return var - self.n_x

    def image(self, var: int) -> Vector:
        """Exponent of pi(var) in Z^{d+1}: the lattice point with height 1 appended."""
        return self.points[var] + (1,)

    def name(self, var: int) -> str:
        return self.names[var]

    def parse(self, name: str) -> int:
        name = name.replace(" ", "")
        if name in self.index:
            return self.index[name]
        m = _NAME.match(name)
        if m and m.group(1) == "x":
            seq = tuple(int(t) for t in m.group(2).split(","))
            if tuple(sorted(seq)) in self._x_index:
                return self.x(seq)
        raise KeyError(f"unknown variable {name!r}")

    def monomial(self, *names: str) -> Monomial:
        """Build a monomial from variable names, e.g. ``cat.monomial("y[0]", "y[2]")``."""
        return tuple(sorted(self.parse(n) for n in names))

    def format(self, mono: Monomial) -> str:
        if not mono:
            return "1"
        parts = []
        for v, e in exponents(mono).items():
            parts.append(self.names[v] + (f"^{e}" if e > 1 else ""))
        return "*".join(parts)

    def format_binomial(self, g: Binomial) -> str:
        return f"{self.format(g.lead)} - {self.format(g.tail)}"


def pi_image(cat: VariableCatalog, mono: Monomial) -> Vector:
    """Sum of the variable images; the last coordinate is the degree."""
    acc = [0] * (cat.d + 1)
    for v in mono:
        for c, x in enumerate(cat.image(v)):
            acc[c] += x
    return tuple(acc)


def verify_membership(cat: VariableCatalog, g: Binomial) -> bool:
    """Whether ``g`` lies in the toric ideal, i.e. both terms have the same image."""
    return pi_image(cat, g.lead) == pi_image(cat, g.tail)


# ------------------------------------------------------------------ sorting

def interleave(seqs: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """s_{1,1} s_{2,1} .. s_{l,1} s_{1,2} .. s_{l,k} for factors s_1..s_l."""
    if not seqs:
        return ()
    k = len(seqs[0])
    return tuple(seqs[i][r] for r in range(k) for i in range(len(seqs)))


def sorted_factors(indices: Iterable[int], count: int) -> list[tuple[int, ...]]:
    """The sorted factorisation of a multiset of indices into ``count`` sequences."""
    flat = sorted(indices)
    if count <= 0 or len(flat) % count:
        raise ValueError("multiset size is not a multiple of the factor count")
    return sorted(tuple(flat[r * count + i] for r in range(len(flat) // count)) for i in range(count))


def is_sorted(seqs: Sequence[Sequence[int]]) -> bool:
    """Whether x_{s_1} ... x_{s_l} is a sorted monomial.

    Factor order is irrelevant: the check is that some arrangement of the
    factors interleaves to the globally sorted index sequence.
    """
    seqs = [tuple(s) for s in seqs]
    if len(seqs) <= 1:
        return True
    flat = [x for s in seqs for x in s]
    return sorted(seqs) == sorted_factors(flat, len(seqs))


def x_sequences(cat: VariableCatalog, mono: Monomial) -> list[tuple[int, ...]]:
    """Index sequences of the genuine x-variables in ``mono``."""
    return [cat.x_seqs[v] for v in mono if v < cat.n_x]


def sorting_weight(seq: Sequence[int], d: int) -> int:
    """Strictly convex score of a k-sequence; sums over a fiber are minimised by the sorted monomial.

    With c_t = #{j : s_j >= t} (t = 1..d) and c_0 = 0 this is
    sum_{0 <= a < b <= d} (c_a - c_b)^2, a positive definite quadratic form in
    coordinates where the sorted triangulation of the dilated simplex is the
    alcoved one.
    """
    c = [0] + [sum(1 for x in seq if x >= t) for t in range(1, d + 1)]
    return sum((c[a] - c[b]) ** 2 for a in range(len(c)) for b in range(a + 1, len(c)))


# ------------------------------------------------------------------- orders

def _lex_key(sorted_ranks: Sequence[int], sentinel: int) -> tuple[int, ...]:
    # lexicographic with rank 0 largest; see module tests for the padding argument
    return tuple(-r for r in sorted_ranks) + (-sentinel,)


class MonomialOrder:
    """A total, multiplicative order on monomials given by a sort key."""

    kind = "abstract"

    def __init__(self):
        self.key = lru_cache(maxsize=1 << 20)(self._key)

    def _key(self, mono: Monomial):
        raise NotImplementedError

    def compare(self, u: Monomial, v: Monomial) -> int:
        ku, kv = self.key(u), self.key(v)
        return (ku > kv) - (ku < kv)

    def less(self, u: Monomial, v: Monomial) -> bool:
        return self.key(u) < self.key(v)

    def orient(self, g: Binomial) -> Binomial | None:
        """Put the larger term first; ``None`` for the zero binomial."""
        ku, kv = self.key(g.lead), self.key(g.tail)
        if ku == kv:
            return None
        return g if ku > kv else Binomial(g.tail, g.lead)

    def describe(self) -> dict:
        return {"kind": self.kind}


class LexOrder(MonomialOrder):
    """Pure lexicographic order; ``ranking[0]`` is the largest variable."""

    kind = "lex"

    def __init__(self, nvars: int, ranking: Sequence[int] | None = None):
        self.nvars = nvars
        self.ranking = list(range(nvars)) if ranking is None else list(ranking)
        if sorted(self.ranking) != list(range(nvars)):
            raise ValueError("ranking must be a permutation of the variables")
        self.rank = {v: r for r, v in enumerate(self.ranking)}
        super().__init__()

    def _key(self, mono):
        return _lex_key(sorted(self.rank[v] for v in mono), self.nvars)

    def describe(self):
        return {"kind": self.kind, "ranking": self.ranking}


class DegRevLexOrder(MonomialOrder):
    """Graded reverse lexicographic order; ``ranking[-1]`` is the smallest variable."""

    kind = "degrevlex"

    def __init__(self, nvars: int, ranking: Sequence[int] | None = None):
        self.nvars = nvars
        self.ranking = list(range(nvars)) if ranking is None else list(ranking)
        if sorted(self.ranking) != list(range(nvars)):
            raise ValueError("ranking must be a permutation of the variables")
        self.rank = {v: r for r, v in enumerate(self.ranking)}
        super().__init__()

    def _key(self, mono):
        return (len(mono), tuple(-r for r in sorted((self.rank[v] for v in mono), reverse=True)))

    def describe(self):
        return {"kind": self.kind, "ranking": self.ranking}


class WeightOrder(MonomialOrder):
    """Compare by a nonnegative weight, then by ``tiebreak``."""

    kind = "weight"

    def __init__(self, weights: Sequence[int], tiebreak: MonomialOrder):
        if any(w < 0 for w in weights):
            raise ValueError("weights must be nonnegative")
        self.weights = list(weights)
        self.tiebreak = tiebreak
        super().__init__()

    def _key(self, mono):
        return (sum(self.weights[v] for v in mono), self.tiebreak.key(mono))

    def describe(self):
        return {"kind": self.kind, "weights": self.weights, "tiebreak": self.tiebreak.describe()}


class CompositeOrder(MonomialOrder):
    """The block order used for P(1, ..., 1, m).

    Two monomials are compared by (i) the degree of their x-parts, then
    (ii) the x-parts under a sorting order (convex sorting weight, ties broken
    lexicographically in catalog order), then (iii) the y-parts
    lexicographically with y_0 > y_1 > ... > y_m. The aliases y_0 and y_m
    count as y-variables throughout.
    """

    kind = "composite"

    def __init__(self, cat: VariableCatalog):
        self.cat = cat
        self.n_x = cat.n_x
        self.sort_weights = [sorting_weight(s, cat.d) for s in cat.x_seqs]
        super().__init__()

    def _key(self, mono):
        n_x = self.n_x
        cut = 0
        while cut < len(mono) and mono[cut] < n_x:
            cut += 1
        xs, ys = mono[:cut], mono[cut:]
        w = sum(self.sort_weights[v] for v in xs)
        return (cut, w, _lex_key(xs, n_x), _lex_key([v - n_x for v in ys], self.cat.m + 1))

    def sorting_key(self, mono: Monomial):
        """The (ii) component alone, for x-only monomials."""
        return self._key(mono)[1:3]


class SortingOrder(MonomialOrder):
    """Sorting order on monomials in all k-sequences (no aliasing).

    Variables are ``seqs`` positions; used to test that sorted monomials
    minimise their fibers independently of the catalog's alias convention.
    """

    kind = "sorting"

    def __init__(self, seqs: Sequence[Sequence[int]], d: int):
        self.seqs = [tuple(s) for s in seqs]
        self.weights = [sorting_weight(s, d) for s in self.seqs]
        super().__init__()

    def _key(self, mono):
        return (len(mono), sum(self.weights[v] for v in mono), _lex_key(mono, len(self.seqs)))


def make_order(cat: VariableCatalog, kind: str, **kw) -> MonomialOrder:
    """Order factory used by the CLI and tests."""
    n = cat.size
    if kind == "composite":
        return CompositeOrder(cat)
    if kind == "lex":
        return LexOrder(n, kw.get("ranking"))
    if kind == "degrevlex":
        return DegRevLexOrder(n, kw.get("ranking"))
    if kind == "weight":
        weights = kw.get("weights") or [1] * n
        return WeightOrder(weights, kw.get("tiebreak") or DegRevLexOrder(n))
    raise ValueError(f"unknown order kind {kind!r}")


# ------------------------------------------------------------ serialisation

def monomial_to_json(cat: VariableCatalog, mono: Monomial) -> dict[str, int]:
    return {cat.names[v]: e for v, e in exponents(mono).items()}


def monomial_from_json(cat: VariableCatalog, data: dict[str, int]) -> Monomial:
    return from_exponents({cat.parse(name): int(e) for name, e in data.items()})


def binomial_to_json(cat: VariableCatalog, g: Binomial) -> dict:
    return {"lead": monomial_to_json(cat, g.lead), "tail": monomial_to_json(cat, g.tail)}


def binomial_from_json(cat: VariableCatalog, data: dict) -> Binomial:
    return Binomial(monomial_from_json(cat, data["lead"]), monomial_from_json(cat, data["tail"]))
