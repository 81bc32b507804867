"""Explicit binomial families for kP with P = P(1, ..., 1, m), and the sufficiency pipeline.

Members are stored as written: the first monomial is the intended leading
term under :class:`~emptysimplex.monomials.CompositeOrder`, and the checks
assert that this is so.
"""
from __future__ import annotations

import itertools
import logging
import math
import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Any

from .errors import ResourceLimitError
from .family import FamilyParams
from .groebner import buchberger_check, hilbert_vs_ehrhart, initial_ideal_generators, is_squarefree
from .monomials import (
    Binomial,
    CompositeOrder,
    MonomialOrder,
    VariableCatalog,
    binomial_from_json,
    binomial_to_json,
    interleave,
    is_squarefree_monomial,
    is_sorted,
    verify_membership,
)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 200
BUDGET_ENV = "EMPTYSIMPLEX_BUDGET"


def scale(k: int) -> int:
    """k * C(d + k, k), the size measure used by the resource guard."""
    d = 2 * k - 1
    return k * math.comb(d + k, k)


def check_scale(k: int, budget: int | None = None) -> None:
    if budget is None:
        budget = int(os.environ.get(BUDGET_ENV, DEFAULT_BUDGET))
    if scale(k) > budget:
        raise ResourceLimitError(
            f"scale k*C(d+k,k) = {scale(k)} for k={k} exceeds budget {budget}; "
            f"raise it with --budget or {BUDGET_ENV}")


def part_labels(k: int) -> list[str]:
    return ["G11", "G12", "G13", "G2"] + [f"G{n}" for n in range(3, k + 1)]


@dataclass
class FamilyG:
    params: FamilyParams
    cat: VariableCatalog
    parts: dict[str, list[Binomial]]

    def members(self) -> list[Binomial]:
        return [g for label in part_labels(self.params.k) for g in self.parts[label]]

    def __len__(self) -> int:
        return sum(len(v) for v in self.parts.values())

    def without(self, label: str, index: int) -> "FamilyG":
        """Copy with one member removed (for mutation experiments)."""
        parts = {key: list(v) for key, v in self.parts.items()}
        del parts[label][index]
        return FamilyG(self.params, self.cat, parts)

    def sizes(self) -> dict[str, int]:
        return {label: len(self.parts[label]) for label in part_labels(self.params.k)}

    def to_json(self) -> dict[str, Any]:
        return {
            "k": self.params.k,
            "m": self.params.m,
            "parts": {label: [binomial_to_json(self.cat, g) for g in self.parts[label]]
                      for label in part_labels(self.params.k)},
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "FamilyG":
        params = FamilyParams.create(data["k"], data["m"])
        cat = VariableCatalog(params)
        parts = {label: [binomial_from_json(cat, g) for g in data["parts"].get(label, [])]
                 for label in part_labels(params.k)}
        return cls(params, cat, parts)


def _quadratic_fibers(cat: VariableCatalog) -> dict[tuple[int, ...], list[tuple[int, int]]]:
    """Degree-2 monomials in the sequence-bearing variables, grouped by index multiset."""
    seq_vars = list(range(cat.n_x)) + [cat.y(0), cat.y(cat.m)]
    fibers = defaultdict(list)
    for a, b in itertools.combinations_with_replacement(seq_vars, 2):
        fibers[tuple(sorted(cat.seqs[a] + cat.seqs[b]))].append((a, b))
    return fibers


def _factorizations(cat: VariableCatalog, multiset: Counter, count: int) -> list[tuple[int, ...]]:
    """All multisets of ``count`` x-variables whose index sequences union to ``multiset``."""
    out = []

    def rec(rest: Counter, left: int, start: int, acc: list[int]):
        if left == 0:
            if not +rest:
                out.append(tuple(acc))
            return
        for v in range(start, cat.n_x):
            need = Counter(cat.x_seqs[v])
            if all(rest[i] >= c for i, c in need.items()):
                acc.append(v)
                rec(rest - need, left - 1, v, acc)
                acc.pop()

    rec(+multiset, count, 0, [])
    return out


def _covers(cat: VariableCatalog, seqs) -> bool:
    support = set().union(*map(set, seqs)) if seqs else set()
    return support >= set(cat.u0) or support >= set(cat.um)


def generate_G(k: int, m: int, order: MonomialOrder | None = None) -> FamilyG:
    """Enumerate G11, G12, G13, G2 and G3..Gk for P(1, ..., 1, m).

    G11 pairs every two distinct pure-x monomials in a quadratic fiber, larger
    one first under ``order`` (the composite order by default). G12 and G13
    pair each pure-x monomial with the fiber members carrying one or two
    aliases. For Gn both p = 0 and p = m are tried, and every factorisation
    of the remaining indices into n - 1 x-variables is emitted.
    """
    params = FamilyParams.create(k, m)
    cat = VariableCatalog(params)
    order = order or CompositeOrder(cat)
    aliases = {cat.y(0), cat.y(m)}
    parts: dict[str, list[Binomial]] = {label: [] for label in part_labels(k)}

    fibers = _quadratic_fibers(cat)
    for key in sorted(fibers):
        monos = fibers[key]
        pure = [mono for mono in monos if not aliases & set(mono)]
        for u, v in itertools.combinations(pure, 2):
            if order.less(u, v):
                u, v = v, u
            parts["G11"].append(Binomial(u, v))
        for mono in monos:
            n_alias = sum(1 for x in mono if x in aliases)
            if n_alias == 0:
                continue
            label = "G12" if n_alias == 1 else "G13"
            parts[label].extend(Binomial(u, mono) for u in pure)

    y = cat.y
    for p, q, r, s in itertools.combinations_with_replacement(range(m + 1), 4):
        if p < q and p + s == q + r:
            parts["G2"].append(Binomial((y(p), y(s)), (y(q), y(r))))

    for n in range(3, k + 1):
        label = f"G{n}"
        for mono in itertools.combinations_with_replacement(range(cat.n_x), n):
            seqs = [cat.x_seqs[v] for v in mono]
            flat = interleave(seqs)
            if list(flat) != sorted(flat):
                continue
            if any(_covers(cat, seqs[:i] + seqs[i + 1:]) for i in range(n)):
                continue
            for p, up in ((0, cat.u0), (m, cat.um)):
                rest = Counter(flat)
                rest.subtract(up)
                if any(c < 0 for c in rest.values()):
                    continue
                for ts in _factorizations(cat, rest, n - 1):
                    tail = tuple(sorted(ts + (y(p),)))
                    parts[label].append(Binomial(mono, tail))

    for label in parts:
        parts[label] = sorted(set(parts[label]))
    return FamilyG(params, cat, parts)


@dataclass
class Violation:
    label: str
    binomial: Binomial
    problem: str

    def describe(self, cat: VariableCatalog) -> str:
        return f"{self.label}: {cat.format_binomial(self.binomial)}: {self.problem}"


def membership_violations(G: FamilyG) -> list[Violation]:
    return [Violation(label, g, "terms have different images")
            for label in part_labels(G.params.k) for g in G.parts[label]
            if not verify_membership(G.cat, g)]


def lead_violations(G: FamilyG, order: MonomialOrder) -> list[Violation]:
    """Members whose first monomial is not the squarefree leading term."""
    bad = []
    for label in part_labels(G.params.k):
        for g in G.parts[label]:
            if not order.less(g.tail, g.lead):
                bad.append(Violation(label, g, "first monomial is not the leading term"))
            elif not is_squarefree_monomial(g.lead):
                bad.append(Violation(label, g, "leading term is not squarefree"))
    return bad


def shape_violations(G: FamilyG) -> list[Violation]:
    """Structural constraints of each part."""
    cat = G.cat
    bad = []
    for g in G.parts["G11"]:
        seqs_lead = [cat.seqs[v] for v in g.lead]
        if is_sorted(seqs_lead):
            bad.append(Violation("G11", g, "sorted monomial written first"))
    for g in G.parts["G2"]:
        p, s = (cat.y_index(v) for v in g.lead)
        q, r = (cat.y_index(v) for v in g.tail)
        if not (0 <= p < q <= r < s <= cat.m and p + s == q + r):
            bad.append(Violation("G2", g, "indices violate p < q <= r < s, p+s = q+r"))
    for n in range(3, G.params.k + 1):
        for g in G.parts[f"G{n}"]:
            seqs = [cat.seqs[v] for v in g.lead]
            if any(_covers(cat, seqs[:i] + seqs[i + 1:]) for i in range(n)):
                bad.append(Violation(f"G{n}", g, "leading factors minus one cover u_0 or u_m"))
    return bad


@dataclass
class Stage:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)
    witness: str | None = None


@dataclass
class SufficiencyReport:
    k: int
    m: int
    maxdeg: int
    stages: list[Stage]

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.stages) and len(self.stages) == len(PIPELINE_STAGES)

    @property
    def verdict(self) -> str:
        if self.ok:
            return "RUT certified"
        failed = next((s for s in self.stages if not s.ok), None)
        return f"failed at {failed.name}" if failed else "incomplete"

    def to_json(self) -> dict:
        return {
            "k": self.k, "m": self.m, "maxdeg": self.maxdeg, "verdict": self.verdict,
            "stages": [{"name": s.name, "ok": s.ok, "detail": s.detail, "witness": s.witness}
                       for s in self.stages],
        }


PIPELINE_STAGES = ("generate", "membership", "squarefree-leads", "buchberger", "hilbert", "triangulation")


def sufficiency_pipeline(k: int, m: int, maxdeg: int = 3, budget: int | None = None,
                         G: FamilyG | None = None, progress=None) -> SufficiencyReport:
    """Run every certification stage for kP, stopping at the first failure."""
    from .triangulation import complex_from_initial_ideal, verify_triangulation

    check_scale(k, budget)
    say = progress or (lambda msg: None)
    rep = SufficiencyReport(k, m, maxdeg, [])

    say("generating G")
    if G is None:
        G = generate_G(k, m)
    cat = G.cat
    order = CompositeOrder(cat)
    rep.stages.append(Stage("generate", True, {"sizes": G.sizes(), "total": len(G)}))

    def fail_on(name, violations, extra=None):
        ok = not violations
        witness = violations[0].describe(cat) if violations else None
        rep.stages.append(Stage(name, ok, {"violations": len(violations), **(extra or {})}, witness))
        return ok

    say("checking membership")
    if not fail_on("membership", membership_violations(G)):
        return rep
    say("checking leading terms")
    if not fail_on("squarefree-leads", lead_violations(G, order) + shape_violations(G)):
        return rep

    say("checking S-pairs")
    members = G.members()
    res = buchberger_check(members, order)
    witness = None
    if not res.ok:
        g1, g2 = res.failing_pair
        witness = (f"S({cat.format_binomial(g1)}, {cat.format_binomial(g2)}) "
                   f"reduces to {cat.format_binomial(res.remainder)}")
    rep.stages.append(Stage("buchberger", res.ok, {
        "basis_size": res.basis_size, "pairs_checked": res.pairs_checked,
        "pairs_skipped_coprime": res.pairs_skipped}, witness))
    if not res.ok:
        return rep

    say("comparing Hilbert and Ehrhart counts")
    hil = hilbert_vs_ehrhart(G.params, order, members, maxdeg)
    rep.stages.append(Stage("hilbert", hil.ok, {
        "degrees": hil.degrees, "standard": hil.standard, "ehrhart": hil.ehrhart},
        None if hil.ok else f"degree {hil.first_mismatch}: "
        f"{hil.standard[hil.first_mismatch - 1]} standard monomials vs "
        f"{hil.ehrhart[hil.first_mismatch - 1]} lattice points"))
    if not hil.ok:
        return rep

    say("extracting triangulation")
    gens = initial_ideal_generators(members, order)
    if not is_squarefree(gens):
        rep.stages.append(Stage("triangulation", False, {}, "initial ideal is not squarefree"))
        return rep
    cx = complex_from_initial_ideal(cat, gens)
    tri = verify_triangulation(cx)
    rep.stages.append(Stage("triangulation", tri.ok, tri.summary(), tri.first_witness()))
    return rep
