"""Exact lattice arithmetic for full-dimensional lattice simplices.

Everything here works over Python integers and :class:`fractions.Fraction`.
The bulk membership scan in :func:`enumerate_dilation_points` uses numpy
int64 only after checking that no intermediate product can overflow, and
falls back to object arrays (Python ints) otherwise.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DegenerateSimplexError

Vector = tuple[int, ...]

_INT64_SAFE = 1 << 62
_CHUNK = 1 << 18


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for i in range(n - 1):
        if a[i][i] == 0:
            for r in range(i + 1, n):
                if a[r][i] != 0:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[n - 1][n - 1]


def rational_inverse(rows: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Inverse of a nonsingular integer matrix, exactly."""
    n = len(rows)
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
           for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise DegenerateSimplexError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [r[n:] for r in aug]


def echelon(rows: Iterable[Sequence[int]], ncols: int | None = None
            ) -> tuple[list[list[int]], list[int]]:
    """Row-style Hermite normal form over the first ``ncols`` columns.

    Returns the transformed rows (same count as the input, in HNF on the
    first ``ncols`` columns, with all-zero leading blocks at the bottom) and
    the list of pivot columns. Columns past ``ncols`` are carried along, so
    passing ``[A | I]`` yields the unimodular transform in the trailing block.
    """
    a = [list(map(int, r)) for r in rows]
    if not a:
        return [], []
    if ncols is None:
        ncols = len(a[0])
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        if top == len(a):
            break
        while True:
            nz = [r for r in range(top, len(a)) if a[r][col] != 0]
            if not nz:
                break
            best = min(nz, key=lambda r: abs(a[r][col]))
            a[top], a[best] = a[best], a[top]
            done = True
            for r in range(top + 1, len(a)):
                if a[r][col] != 0:
                    q = a[r][col] // a[top][col]
                    a[r] = [x - q * y for x, y in zip(a[r], a[top])]
                    if a[r][col] != 0:
                        done = False
            if done:
                break
        if a[top][col] == 0:
            continue
        if a[top][col] < 0:
            a[top] = [-x for x in a[top]]
        p = a[top][col]
        for r in range(top):
            q = a[r][col] // p
            if q:
                a[r] = [x - q * y for x, y in zip(a[r], a[top])]
        pivots.append(col)
        top += 1
    return a, pivots


def integer_kernel(columns: Sequence[Sequence[int]]) -> list[Vector]:
    """A Z-basis of {z : sum_i z_i * columns[i] = 0}."""
    n = len(columns)
    width = len(columns[0]) if n else 0
    aug = [list(col) + [int(i == j) for j in range(n)] for i, col in enumerate(columns)]
    reduced, pivots = echelon(aug, width)
    return [tuple(r[width:]) for r in reduced[len(pivots):]]


def affine_lattice_index(points: Iterable[Sequence[int]]) -> int | float:
    """Index in Z^d of the affine lattice spanned by ``points``; ``math.inf`` if not full rank."""
    pts = [tuple(p) for p in points]
    if not pts:
        raise ValueError("affine_lattice_index needs at least one point")
    d = len(pts[0])
    base = pts[0]
    diffs = [[x - y for x, y in zip(p, base)] for p in pts[1:]]
    diffs = [r for r in diffs if any(r)]
    if d == 0:
        return 1
    if len(diffs) < d:
        return math.inf
    reduced, pivots = echelon(diffs)
    if len(pivots) < d:
        return math.inf
    return math.prod(reduced[i][c] for i, c in enumerate(pivots))


@dataclass(frozen=True)
class DeltaPolynomial:
    """Coefficients (delta_0, ..., delta_d) of the Ehrhart numerator."""

    coeffs: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.coeffs) - 1

    @property
    def volume(self) -> int:
        return sum(self.coeffs)

    def ehrhart(self, n: int) -> int:
        """|nS ∩ Z^d| recovered from the numerator."""
        d = self.dim
        return sum(c * math.comb(n - j + d, d) for j, c in enumerate(self.coeffs) if n >= j)

    def __str__(self) -> str:
        terms = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if j == 0:
                terms.append(str(c))
            else:
                coef = "" if c == 1 else str(c)
                terms.append(f"{coef}t" + (f"^{j}" if j > 1 else ""))
        return " + ".join(terms) or "0"


@dataclass(frozen=True)
class LatticeSimplex:
    """A full-dimensional lattice simplex with an ordered vertex list."""

    vertices: tuple[Vector, ...]

    def __post_init__(self):
        verts = tuple(tuple(int(x) for x in v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if not verts:
            raise DegenerateSimplexError("simplex needs at least one vertex")
        d = len(verts) - 1
        if any(len(v) != d for v in verts):
            raise DegenerateSimplexError(
                f"{len(verts)} vertices need ambient dimension {d}, got lengths "
                f"{sorted({len(v) for v in verts})}")
        if d and self.det == 0:
            raise DegenerateSimplexError("edge vectors are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @cached_property
    def edges(self) -> list[list[int]]:
        """Rows are v_i - v_0 for i = 1..d."""
        v0 = self.vertices[0]
        return [[x - y for x, y in zip(v, v0)] for v in self.vertices[1:]]

    @cached_property
    def det(self) -> int:
        return bareiss_det(self.edges)

    @cached_property
    def _adjugate(self) -> list[list[int]]:
        # adj[i][j] with  r_i = sum_j adj[i][j] * (x - v0)_j / det
        if self.dim == 0:
            return []
        cols = [list(c) for c in zip(*self.edges)]  # B with edges as columns
        inv = rational_inverse(cols)
        adj = [[x * self.det for x in row] for row in inv]
        assert all(x.denominator == 1 for row in adj for x in row)
        return [[int(x) for x in row] for row in adj]

    @cached_property
    def _triangular_form(self):
        # sign-adjusted adjugate A; A U = L, L lower triangular, U unimodular
        sgn = 1 if self.det > 0 else -1
        adj = [[sgn * x for x in row] for row in self._adjugate]
        d = self.dim
        aug = [[adj[i][j] for i in range(d)] + [int(j == c) for c in range(d)] for j in range(d)]
        red, pivots = echelon(aug, d)
        assert pivots == list(range(d))
        tri = [[red[j][i] for j in range(d)] for i in range(d)]
        unimod = [[red[j][d + i] for j in range(d)] for i in range(d)]
        return tri, unimod, adj

    def dilate(self, n: int) -> "LatticeSimplex":
        return LatticeSimplex(tuple(tuple(n * x for x in v) for v in self.vertices))

    def barycentric(self, point: Sequence[int], n: int = 1) -> tuple[Fraction, ...]:
        """Coordinates r with point = sum r_i v_i and sum r_i = n."""
        v0 = self.vertices[0]
        rel = [x - n * y for x, y in zip(point, v0)]
        tail = [Fraction(sum(a * b for a, b in zip(row, rel)), self.det) for row in self._adjugate]
        return (n - sum(tail, Fraction(0)),) + tuple(tail)

    def contains(self, point: Sequence[int], n: int = 1) -> bool:
        return all(r >= 0 for r in self.barycentric(point, n))


def enumerate_dilation_points(simplex: LatticeSimplex, n: int) -> list[Vector]:
    """All lattice points of ``n * simplex``, sorted lexicographically.

    A point x lies in nS iff its scaled barycentric vector y = adj (x - n v_0)
    is nonnegative with coordinate sum at most n |det|. Writing adj U = L with
    U unimodular and L lower triangular turns this into a search over z = U^-1 x
    where each z_i has an exact integer range given z_1..z_{i-1}.
    """
    return _decode_rows(_dilation_array(simplex, n))


def _dilation_array(simplex: LatticeSimplex, n: int) -> np.ndarray:
    if n < 0:
        raise ValueError("dilation factor must be nonnegative")
    d = simplex.dim
    if d == 0:
        return np.zeros((1, 0), dtype=np.int64)
    tri, unimod, sgn_adj = simplex._triangular_form
    limit = n * abs(simplex.det)
    offset = [-sum(a * n * v for a, v in zip(row, simplex.vertices[0])) for row in sgn_adj]
    worst = (limit + 1) * (1 + max(abs(x) for row in unimod for x in row)) * (d + 1)
    worst *= 1 + max(abs(x) for row in tri for x in row)
    dtype = object if worst + max(map(abs, offset)) >= _INT64_SAFE else np.int64

    z = np.zeros((1, 0), dtype=dtype)
    ypart = np.array([offset], dtype=dtype)  # running L z + offset
    used = np.zeros(1, dtype=dtype)  # sum of finished y_i
    for i in range(d):
        piv = tri[i][i]
        known = ypart[:, i]
        lo = -((known) // piv)  # ceil(-known / piv)
        hi = (limit - used - known) // piv
        counts = hi - lo + 1
        keep = counts > 0
        if not keep.any():
            return np.zeros((0, d), dtype=np.int64)
        z, ypart, used, lo, counts = z[keep], ypart[keep], used[keep], lo[keep], counts[keep]
        counts = counts.astype(np.int64)
        rep = np.repeat(np.arange(len(z)), counts)
        starts = np.cumsum(counts) - counts
        step = np.arange(int(counts.sum()), dtype=np.int64) - np.repeat(starts, counts)
        zi = (lo[rep] + step.astype(dtype)).astype(dtype)
        column = np.array([tri[r][i] for r in range(d)], dtype=dtype)
        z = np.hstack([z[rep], zi[:, None]])
        ypart = ypart[rep] + zi[:, None] * column[None, :]
        used = used[rep] + ypart[:, i]
    pts = z @ np.array(unimod, dtype=dtype).T
    return np.asarray(pts, dtype=np.int64)


def scan_bounding_box(simplex: LatticeSimplex, n: int) -> list[Vector]:
    """Brute-force lattice points of ``n * simplex`` by scanning its bounding box.

    Slow; kept as an independent check on :func:`enumerate_dilation_points`.
    """
    return _decode_rows(_box_scan_array(simplex, n))


def _box_scan_array(simplex: LatticeSimplex, n: int) -> np.ndarray:
    if n < 0:
        raise ValueError("dilation factor must be nonnegative")
    d = simplex.dim
    if d == 0:
        return np.zeros((1, 0), dtype=np.int64)
    verts = [[n * x for x in v] for v in simplex.vertices]
    lo = [min(c) for c in zip(*verts)]
    hi = [max(c) for c in zip(*verts)]
    det = simplex.det
    sgn = 1 if det > 0 else -1
    adj = [[sgn * x for x in row] for row in simplex._adjugate]
    origin = verts[0]
    span = sum(max(abs(l - o), abs(h - o)) for l, h, o in zip(lo, hi, origin))
    bound = max(abs(x) for row in adj for x in row) * span * (d + 1)
    exact = bound >= _INT64_SAFE or n * abs(det) * (d + 1) >= _INT64_SAFE
    dtype = object if exact else np.int64
    # weights[j] is the contribution of coordinate j to every barycentric entry
    weights = np.array([[adj[i][j] for i in range(d)] for j in range(d)], dtype=dtype)
    limit = n * abs(det)

    dims = [h - l + 1 for l, h in zip(lo, hi)]
    split = 0
    while split < d and math.prod(dims[split:]) > _CHUNK:
        split += 1
    ranges = [np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo[split:], hi[split:])]
    if ranges:
        tail = np.stack(np.meshgrid(*ranges, indexing="ij"), -1).reshape(-1, len(ranges))
    else:
        tail = np.zeros((1, 0), dtype=np.int64)
    rel_tail = (tail - np.array(origin[split:], dtype=np.int64)).astype(dtype)
    tail_r = rel_tail @ weights[split:] if split < d else np.zeros((1, d), dtype=dtype)
    tail_s = tail_r.sum(axis=1)
    tail_max = tail_r.max(axis=0)
    tail_min_s = tail_s.min()

    found = []
    for head in itertools.product(*(range(l, h + 1) for l, h in zip(lo[:split], hi[:split]))):
        rel = [x - o for x, o in zip(head, origin)]
        head_r = [sum(rel[j] * adj[i][j] for j in range(split)) for i in range(d)]
        head_s = sum(head_r)
        if head_s + tail_min_s > limit or any(h + t < 0 for h, t in zip(head_r, tail_max)):
            continue
        r = tail_r + np.array(head_r, dtype=dtype)
        ok = np.all(r >= 0, axis=1) & (tail_s + head_s <= limit)
        if ok.any():
            block = tail[ok]
            found.append(np.hstack([np.tile(np.asarray(head, dtype=np.int64), (len(block), 1)), block]))
    if not found:
        return np.zeros((0, d), dtype=np.int64)
    return np.vstack(found)


def _decode_rows(arr: np.ndarray) -> list[Vector]:
    out = [tuple(int(x) for x in row) for row in arr]
    out.sort()
    return out


class _Codec:
    """Mixed-radix int64 keys for integer vectors inside a fixed box.

    Keys are additive (key(a) + key(b) - key(0) = key(a + b)) and sort in
    lexicographic order of the vectors.
    """

    def __init__(self, lo: Sequence[int], hi: Sequence[int]):
        self.lo = np.asarray(lo, dtype=np.int64)
        sizes = [int(h) - int(l) + 1 for l, h in zip(lo, hi)]
        if math.prod(sizes) >= _INT64_SAFE:
            raise OverflowError("point box too large for int64 keys")
        radix = [1] * len(sizes)
        for j in range(len(sizes) - 2, -1, -1):
            radix[j] = radix[j + 1] * sizes[j + 1]
        self.radix = np.asarray(radix, dtype=np.int64)
        self.sizes = sizes

    def encode(self, arr: np.ndarray, shift: np.ndarray | None = None) -> np.ndarray:
        base = self.lo if shift is None else shift
        return (np.asarray(arr, dtype=np.int64) - base) @ self.radix

    def decode(self, keys: np.ndarray) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        cols = []
        for r, s in zip(self.radix, self.sizes):
            cols.append((keys // r) % s)
        return np.stack(cols, axis=-1) + self.lo if cols else np.zeros((len(keys), 0), np.int64)


def _as_array(points, dim: int | None = None) -> np.ndarray:
    if isinstance(points, np.ndarray):
        return points.astype(np.int64, copy=False)
    pts = [tuple(p) for p in points]
    if not pts:
        return np.zeros((0, dim or 0), dtype=np.int64)
    return np.array(pts, dtype=np.int64).reshape(len(pts), -1)


def _sumset_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if len(a) == 0 or len(b) == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64)
    lo_a, lo_b = a.min(axis=0), b.min(axis=0)
    codec = _Codec(lo_a + lo_b, a.max(axis=0) + b.max(axis=0))
    ka = codec.encode(a, lo_a)
    kb = codec.encode(b, lo_b)
    step = max(1, _CHUNK * 8 // len(kb))
    parts = [np.unique((ka[i:i + step, None] + kb[None, :]).ravel()) for i in range(0, len(ka), step)]
    return codec.decode(np.unique(np.concatenate(parts)))


def _contains_rows(haystack: np.ndarray, needles: np.ndarray) -> np.ndarray:
    """Boolean mask: which rows of ``needles`` occur in ``haystack``."""
    if len(needles) == 0:
        return np.zeros(0, dtype=bool)
    if len(haystack) == 0:
        return np.zeros(len(needles), dtype=bool)
    both = np.vstack([haystack, needles])
    codec = _Codec(both.min(axis=0), both.max(axis=0))
    return np.isin(codec.encode(needles), codec.encode(haystack))


def _residue_representatives(diagonal: Sequence[int]) -> Iterator[tuple[int, ...]]:
    return itertools.product(*(range(h) for h in diagonal))


def box_points(simplex: LatticeSimplex) -> list[tuple[Vector, int]]:
    """Lattice points of the half-open parallelepiped with their heights.

    Each point is sum s_i v_i with 0 <= s_i < 1 and sum s_i an integer (the
    height). Coset representatives of Z^{d+1} modulo the lattice spanned by
    the lifted vertices (v_i, 1) come from its Hermite normal form, so the
    enumeration visits exactly |det| classes.
    """
    d = simplex.dim
    lifted = [list(v) + [1] for v in simplex.vertices]
    hnf, pivots = echelon(lifted)
    if len(pivots) != d + 1:
        raise DegenerateSimplexError("lifted vertices do not span")
    diag = [hnf[i][i] for i in range(d + 1)]
    inv = rational_inverse([list(c) for c in zip(*lifted)])
    out = []
    for y in _residue_representatives(diag):
        s = [sum((a * b for a, b in zip(row, y)), Fraction(0)) for row in inv]
        frac = [x - math.floor(x) for x in s]
        point = [sum((f * v[j] for f, v in zip(frac, simplex.vertices)), Fraction(0))
                 for j in range(d)]
        height = sum(frac, Fraction(0))
        assert height.denominator == 1 and all(x.denominator == 1 for x in point)
        out.append((tuple(int(x) for x in point), int(height)))
    out.sort(key=lambda t: (t[1], t[0]))
    return out


def delta_polynomial(simplex: LatticeSimplex) -> DeltaPolynomial:
    coeffs = [0] * (simplex.dim + 1)
    for _, h in box_points(simplex):
        coeffs[h] += 1
    return DeltaPolynomial(tuple(coeffs))


def normalized_volume(simplex: LatticeSimplex) -> int:
    return abs(simplex.det)


def sumset(left: Iterable[Sequence[int]], right: Iterable[Sequence[int]]) -> list[Vector]:
    """Minkowski sum of two finite point sets, sorted lexicographically."""
    a = _as_array(left)
    b = _as_array(right, a.shape[1] if a.ndim == 2 else None)
    if a.ndim == 2 and a.shape[1] == 0 and len(a) and len(b):
        return [()]
    return _decode_rows(_sumset_array(a, b))


def kfold_sumset(points: Iterable[Sequence[int]], n: int, dim: int | None = None) -> list[Vector]:
    """``points + ... + points`` (n times); the origin alone when n = 0."""
    pts = _as_array(points, dim)
    if dim is None:
        if len(pts) == 0:
            raise ValueError("dimension unknown for an empty point set")
        dim = pts.shape[1]
    acc = np.zeros((1, dim), dtype=np.int64)
    for _ in range(n):
        acc = _sumset_array(acc, pts)
    return _decode_rows(acc)
