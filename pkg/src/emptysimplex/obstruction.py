"""Certificates that kP has no regular unimodular triangulation when some 2 <= a_j <= m-2.

A certificate collects
  * pairs (v, v') of k-fold vertex sums with w_{i-1} + w_{i+1} - 2 w_i = v - v'
    and the mirrored identity, for 2 <= i <= m-2;
  * a pair (u, u') doing the same for the second differences around w_1 and
    w_{m-1} built from a = a_j and its inverse a' modulo m;
  * exhaustive checks that v + w_i (and the like) has only the trivial
    splittings into two lattice points of kP;
  * the six cubic binomials these give, each checked to lie in the toric ideal;
  * the comparison graph on classes {i, m-i}: every class is forced below some
    other class, so the graph has a cycle, which no term order can realise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .errors import ParameterError, WitnessError
from .family import FamilyParams, build_simplex, w_point
from .lattice import Vector, enumerate_dilation_points, kfold_sumset
from .monomials import Binomial, VariableCatalog, binomial_to_json, verify_membership

SCHEMA = "obstruction-certificate"


def _add(*vs):
    return tuple(map(sum, zip(*vs)))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _scale(c, v):
    return tuple(c * x for x in v)


class _Context:
    """Shared data for one parameter set: w-points, the sumset A and the lattice points of kP."""

    def __init__(self, params: FamilyParams):
        self.params = params
        self.k, self.m, self.d = params.k, params.m, params.d
        self.simplex = build_simplex(params)
        self.vertices = self.simplex.vertices
        self.w = {i: w_point(params, i) for i in range(1, params.m)}
        self.A = set(kfold_sumset(self.vertices, params.k))
        self.lattice = set(enumerate_dilation_points(self.simplex, params.k))

    def vertex_sequence(self, point: Vector) -> tuple[int, ...]:
        """The multiset J of k vertex indices with sum_{j in J} v_j = point."""
        k, m, d = self.k, self.m, self.d
        last = point[-1]
        if last % m:
            raise WitnessError(f"{point} is not a sum of vertices")
        top = last // m
        rest = _sub(point, _scale(top, self.vertices[d]))
        seq = [d] * top
        for j in range(1, d):
            c = rest[j - 1]
            if c < 0:
                raise WitnessError(f"{point} is not a sum of vertices")
            seq += [j] * c
        if len(seq) > k:
            raise WitnessError(f"{point} needs more than {k} vertices")
        return tuple(sorted([0] * (k - len(seq)) + seq))


def second_difference(ctx: _Context, lo: int, mid: int, hi: int) -> Vector:
    return _sub(_add(ctx.w[lo], ctx.w[hi]), _scale(2, ctx.w[mid]))


def _pivot_pair(z: Vector) -> tuple[Vector, Vector]:
    """(p, q) with p - q = z for z with entries in {-1, 0, 1}: pivot on the first nonzero entry."""
    if not any(z):
        return z, z
    j0 = next(j for j, x in enumerate(z) if x)
    if z[j0] < 0:
        q, p = _pivot_pair(tuple(-x for x in z))
        return p, q
    p = [0] * len(z)
    q = [0] * len(z)
    p[j0], q[j0] = 2, 1
    for j, x in enumerate(z):
        if j == j0:
            continue
        if x == 1:
            p[j] = 1
        elif x == -1:
            q[j] = 1
        elif x != 0:
            raise WitnessError(f"entry {x} outside {{-1, 0, 1}}")
    return tuple(p), tuple(q)


def _search_pair(ctx: _Context, diff: Vector) -> tuple[Vector, Vector] | None:
    """Brute force: some (p, q) in A x A with p - q = diff."""
    for q in sorted(ctx.A):
        p = _add(q, diff)
        if p in ctx.A:
            return p, q
    return None


@dataclass
class PairWitness:
    """p - q equals the forward second difference and q - p the mirrored one."""

    label: str
    indices: tuple[int, int, int]
    mirror_indices: tuple[int, int, int]
    difference: Vector
    p: Vector
    q: Vector
    method: str

    def to_json(self) -> dict:
        return {
            "label": self.label, "indices": list(self.indices), "mirror_indices": list(self.mirror_indices),
            "difference": list(self.difference), "p": list(self.p), "q": list(self.q), "method": self.method,
        }


def _pair_witness(ctx: _Context, label, indices, mirror, candidate) -> PairWitness:
    diff = second_difference(ctx, *indices)
    mirrored = second_difference(ctx, *mirror)
    if _add(diff, mirrored) != (0,) * ctx.d:
        raise WitnessError(f"{label}: mirrored second difference is not the negative")
    method = "construction"
    if candidate is None or not _pair_ok(ctx, diff, *candidate):
        candidate = _search_pair(ctx, diff)
        method = "search"
    if candidate is None:
        raise WitnessError(f"{label}: no pair in A x A has difference {diff}")
    return PairWitness(label, indices, mirror, diff, candidate[0], candidate[1], method)


def _pair_ok(ctx: _Context, diff, p, q) -> bool:
    return p in ctx.A and q in ctx.A and _sub(p, q) == diff


def adjacent_pair_witness(params: FamilyParams, i: int, ctx: _Context | None = None) -> PairWitness:
    """(v, v') for the second difference of w around w_i, 2 <= i <= m-2."""
    ctx = ctx or _Context(params)
    m = params.m
    if not 2 <= i <= m - 2:
        raise ValueError(f"need 2 <= i <= m-2, got i={i}, m={m}")
    diff = second_difference(ctx, i - 1, i, i + 1)
    if not any(diff):
        zero = (0,) * ctx.d
        candidate = (zero, zero)
    else:
        candidate = _pivot_pair(diff)
    return _pair_witness(ctx, f"v_{i}", (i - 1, i, i + 1), (m - i + 1, m - i, m - i - 1), candidate)


def modular_inverse(a: int, m: int) -> int:
    if math.gcd(a, m) != 1:
        raise ParameterError("gcd(a, m) == 1", f"a={a} has no inverse modulo m={m}")
    return pow(a, -1, m)


def wraparound_indices(a: int, m: int) -> tuple[int, int, int, int, int]:
    """(a', (a-1)a' mod m, (a+1)a' mod m, ((m-1)a-1)a' mod m, ((m-1)a+1)a' mod m)."""
    inv = modular_inverse(a, m)
    return (inv, (a - 1) * inv % m, (a + 1) * inv % m,
            ((m - 1) * a - 1) * inv % m, ((m - 1) * a + 1) * inv % m)


def wraparound_pair_witness(params: FamilyParams, a: int, ctx: _Context | None = None) -> PairWitness:
    """(u, u') for the second difference w_{(a-1)a'} + w_{(a+1)a'} - 2 w_1."""
    ctx = ctx or _Context(params)
    m = params.m
    if not 2 <= a <= m - 2:
        raise ParameterError("2 <= a <= m-2", f"got a={a}, m={m}")
    if a not in params.a:
        raise ParameterError("a = a_j for some j", f"a={a} is not among {params.a}")
    inv, lo, hi, mlo, mhi = wraparound_indices(a, m)
    if not 2 <= inv <= m - 2:
        raise ParameterError("2 <= a' <= m-2", f"inverse of {a} modulo {m} is {inv}")
    diff = second_difference(ctx, lo, 1, hi)
    top = ctx.vertices[ctx.d]
    if diff == top:
        candidate = (top, (0,) * ctx.d)
    else:
        p, q = _pivot_pair(_sub(diff, top))
        candidate = (_add(top, p), q)
    return _pair_witness(ctx, "u", (lo, 1, hi), (mhi, m - 1, mlo), candidate)


@dataclass
class SplitCheck:
    """All ways to write base + w_i as h1 + h2 over a point set, for every i."""

    reading: str
    base_label: str
    base: Vector
    splittings: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {"reading": self.reading, "point": self.base_label, "base": list(self.base),
                "splittings": self.splittings, "ok": self.ok,
                "counterexamples": [[i, list(h1), list(h2)] for i, h1, h2 in self.counterexamples]}


def _split_check(ctx: _Context, label: str, base: Vector, pool: set, reading: str) -> SplitCheck:
    rep = SplitCheck(reading, label, base)
    for i, w in ctx.w.items():
        target = _add(base, w)
        for h1 in sorted(pool):
            h2 = _sub(target, h1)
            if h1 <= h2 and h2 in pool:
                rep.splittings += 1
                if base not in (h1, h2):
                    rep.counterexamples.append((i, h1, h2))
    return rep


def splitting_check(params: FamilyParams, witnesses: list[PairWitness], ctx: _Context | None = None) -> dict:
    """Exhaustive splitting checks for each witness point, over A and over kP ∩ Z^d.

    Only the second pool is meaningful: every point of A has last coordinate
    divisible by m, so base + w_i never splits inside A and that reading holds
    vacuously.
    """
    ctx = ctx or _Context(params)
    out = {"A": [], "lattice": []}
    for wit in witnesses:
        for name, point in ((wit.label, wit.p), (wit.label + "'", wit.q)):
            out["A"].append(_split_check(ctx, name, point, ctx.A, "A"))
            out["lattice"].append(_split_check(ctx, name, point, ctx.lattice, "lattice"))
    return out


def _class(i: int, m: int) -> int:
    return min(i, m - i)


def comparison_graph(params: FamilyParams, a: int) -> dict[int, list[int]]:
    """Class c = {c, m-c} -> classes that y_c y_{m-c} is forced below, one of which must hold."""
    m = params.m
    _, lo, hi, _, _ = wraparound_indices(a, m)
    graph = {}
    for c in range(1, m // 2 + 1):
        if c == 1:
            alts = {_class(lo, m), _class(hi, m)}
        else:
            alts = {_class(c - 1, m), _class(c + 1, m)}
        # y_c y_{m-c} < y_c y_{m-c} is impossible, so the other alternative is forced
        alts.discard(c)
        graph[c] = sorted(alts)
    return graph


def find_cycle(graph: dict[int, list[int]]) -> list[int]:
    """Cycle reached by always taking the first successor; every node needs one."""
    node = min(graph)
    seen: dict[int, int] = {}
    path = []
    while node not in seen:
        if not graph.get(node):
            raise WitnessError(f"class {node} has no forced successor")
        seen[node] = len(path)
        path.append(node)
        node = graph[node][0]
    return path[seen[node]:]


@dataclass
class ObstructionCertificate:
    params: FamilyParams
    a: int
    a_inverse: int
    adjacent_pairs: list[PairWitness]
    wraparound_pair: PairWitness
    splitting: dict[str, list[SplitCheck]]
    binomials: list[tuple[str, Binomial]]
    membership: list[bool]
    graph: dict[int, list[int]]
    cycle: list[int]
    catalog: VariableCatalog

    @property
    def splitting_ok(self) -> bool:
        return all(c.ok for c in self.splitting["lattice"])

    @property
    def ok(self) -> bool:
        return self.splitting_ok and all(self.membership) and bool(self.cycle)

    def to_json(self) -> dict[str, Any]:
        cat = self.catalog
        return {
            "kind": SCHEMA,
            "params": {"k": self.params.k, "m": self.params.m, "a": list(self.params.a)},
            "a": self.a,
            "a_inverse": self.a_inverse,
            "w": {str(i): list(w_point(self.params, i)) for i in range(1, self.params.m)},
            "adjacent_pairs": [w.to_json() for w in self.adjacent_pairs],
            "wraparound_pair": self.wraparound_pair.to_json(),
            "splitting": {
                reading: {"ok": all(c.ok for c in checks), "checks": [c.to_json() for c in checks]}
                for reading, checks in self.splitting.items()
            },
            "binomials": [
                {"source": src, "binomial": binomial_to_json(cat, g), "text": cat.format_binomial(g), "in_ideal": ok}
                for (src, g), ok in zip(self.binomials, self.membership)
            ],
            "chain": [{"class": [c, self.params.m - c], "forced_below": [[j, self.params.m - j] for j in alts]}
                      for c, alts in sorted(self.graph.items())],
            "cycle": [[c, self.params.m - c] for c in self.cycle],
            "ok": self.ok,
        }


def _cubic_binomials(cat: VariableCatalog, ctx: _Context, wit: PairWitness) -> list[tuple[str, Binomial]]:
    """x_J y_lo y_hi - x_J' y_mid^2 and its mirror, where x_J, x_J' are the variables of q, p.

    p - q = w_lo + w_hi - 2 w_mid gives q + w_lo + w_hi = p + 2 w_mid. When
    p = q = 0 the x-factors are dropped.
    """
    (lo, mid, hi), (mlo, mmid, mhi) = wit.indices, wit.mirror_indices
    y = cat.y
    if any(wit.p) or any(wit.q):
        xp = (cat.x(ctx.vertex_sequence(wit.p)),)
        xq = (cat.x(ctx.vertex_sequence(wit.q)),)
    else:
        xp = xq = ()
    forward = Binomial(tuple(sorted(xq + (y(lo), y(hi)))), tuple(sorted(xp + (y(mid), y(mid)))))
    mirror = Binomial(tuple(sorted(xp + (y(mlo), y(mhi)))), tuple(sorted(xq + (y(mmid), y(mmid)))))
    return [(wit.label, forward), (wit.label + " mirror", mirror)]


def build_certificate(params: FamilyParams) -> ObstructionCertificate:
    m = params.m
    candidates = [x for x in params.a if 2 <= x <= m - 2]
    if not candidates:
        raise ParameterError("2 <= a_j <= m-2 for some j",
                             f"hypothesis not met for {params.label()}: no a_j in [2, m-2]")
    a = candidates[0]
    ctx = _Context(params)
    cat = VariableCatalog(params)
    adjacent = [adjacent_pair_witness(params, i, ctx) for i in range(2, m - 1)]
    wrap = wraparound_pair_witness(params, a, ctx)
    splits = splitting_check(params, adjacent + [wrap], ctx)
    binomials = []
    for wit in adjacent + [wrap]:
        binomials += _cubic_binomials(cat, ctx, wit)
    membership = [verify_membership(cat, g) for _, g in binomials]
    graph = comparison_graph(params, a)
    cycle = find_cycle(graph)
    return ObstructionCertificate(params, a, modular_inverse(a, m), adjacent, wrap, splits,
                                  binomials, membership, graph, cycle, cat)


@dataclass
class CertificateCheck:
    ok: bool
    problems: list[str]


def check_certificate(data: dict[str, Any]) -> CertificateCheck:
    """Re-validate a serialized certificate from its parameters up.

    Nothing computed in the certificate is trusted: w-points, A, the splitting
    checks, ideal membership and the comparison graph are all recomputed.
    """
    problems = []
    try:
        p = data["params"]
        params = FamilyParams(p["k"], p["m"], tuple(p["a"]))
    except (KeyError, TypeError, ParameterError) as exc:
        return CertificateCheck(False, [f"bad parameters: {exc}"])
    m = params.m
    ctx = _Context(params)
    cat = VariableCatalog(params)

    a, inv = data.get("a"), data.get("a_inverse")
    if a not in params.a or not 2 <= a <= m - 2:
        problems.append(f"a={a} is not an entry in [2, m-2]")
    elif inv is None or a * inv % m != 1:
        problems.append(f"a * a' = {a} * {inv} is not 1 modulo {m}")
    else:
        want = wraparound_indices(a, m)
        if tuple(data["wraparound_pair"]["indices"]) != (want[1], 1, want[2]):
            problems.append("wraparound indices do not match a and a'")

    witnesses = []
    expected_adjacent = {(i - 1, i, i + 1) for i in range(2, m - 1)}
    got_adjacent = {tuple(w["indices"]) for w in data.get("adjacent_pairs", [])}
    if got_adjacent != expected_adjacent:
        problems.append("adjacent pairs do not cover 2 <= i <= m-2")
    for wj in data.get("adjacent_pairs", []) + [data["wraparound_pair"]]:
        lo, mid, hi = wj["indices"]
        mlo, mmid, mhi = wj["mirror_indices"]
        pv, qv = tuple(wj["p"]), tuple(wj["q"])
        if not all(1 <= t <= m - 1 for t in (lo, mid, hi, mlo, mmid, mhi)):
            problems.append(f"{wj['label']}: index out of range")
            continue
        if pv not in ctx.A or qv not in ctx.A:
            problems.append(f"{wj['label']}: witness point outside A")
        if second_difference(ctx, lo, mid, hi) != _sub(pv, qv):
            problems.append(f"{wj['label']}: forward identity fails")
        if second_difference(ctx, mlo, mmid, mhi) != _sub(qv, pv):
            problems.append(f"{wj['label']}: mirrored identity fails")
        witnesses.append(PairWitness(wj["label"], (lo, mid, hi), (mlo, mmid, mhi), _sub(pv, qv), pv, qv, ""))

    if not problems:
        for c in splitting_check(params, witnesses, ctx)["lattice"]:
            if not c.ok:
                problems.append(f"{c.base_label} + w_{c.counterexamples[0][0]} splits nontrivially")
        for wit in witnesses:
            for src, g in _cubic_binomials(cat, ctx, wit):
                if not verify_membership(cat, g):
                    problems.append(f"{src}: {cat.format_binomial(g)} is not in the ideal")

    if a in params.a and 2 <= a <= m - 2:
        graph = comparison_graph(params, a)
        cycle = [c[0] for c in data.get("cycle", [])]
        if not cycle:
            problems.append("empty cycle")
        for x, y in zip(cycle, cycle[1:] + cycle[:1]):
            if y not in graph.get(x, ()):
                problems.append(f"cycle step {x} -> {y} is not a forced comparison")
        if any(not alts for alts in graph.values()):
            problems.append("some class has no forced successor")
    return CertificateCheck(not problems, problems)
