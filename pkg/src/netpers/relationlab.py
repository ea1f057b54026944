"""Dowker complexes of relations, nerves of covers, subdivisions and contiguity.

Complexes here are face-closed frozensets of sorted tuples. Vertices can be
any mutually comparable objects: integers for a base complex, simplices
(tuples) for its barycentric subdivision, chains of simplices for the second
subdivision. Simplices are stored sorted by Python's ordering; the least-vertex
maps instead use :func:`vertex_order_key`, which extends inclusion.
Simplicial maps are plain dicts from source vertices to target vertices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Hashable, Iterable, Mapping

from .filtration import Relation, closure, dowker_pair_from_relation, faces
from .homology import betti_numbers, compute_persistence, induced_map_rank, two_step_filtration

Complex = frozenset
SUBDIVISION_BUDGET = 50


def vertices(K: Iterable[tuple]) -> list:
    return sorted({v for s in K for v in s})


def maximal_simplices(K: Iterable[tuple]) -> list[tuple]:
    K = set(K)
    covered = set()
    for s in K:
        covered.update(faces(s))
    return sorted(K - covered, key=lambda s: (len(s), s))


def image(f: Mapping, simplex: Iterable) -> tuple:
    return tuple(sorted({f[v] for v in simplex}))


def compose(g: Mapping, f: Mapping) -> dict:
    """The vertex map ``g o f``."""
    return {v: g[w] for v, w in f.items()}


def is_simplicial(f: Mapping, K: Iterable[tuple], L: Iterable[tuple]) -> bool:
    L = set(L)
    return all(image(f, s) in L for s in maximal_simplices(K))


# ---------------------------------------------------------------------- covers

@dataclass(frozen=True)
class Cover:
    """Subcomplexes of ``host`` indexed by ``index``; their union is the host."""

    host: Complex
    members: Mapping[Hashable, Complex]
    index: tuple = field(default=())

    def __post_init__(self):
        idx = tuple(self.index) or tuple(sorted(self.members))
        object.__setattr__(self, "index", idx)
        union = set()
        for i in idx:
            member = self.members[i]
            if closure(member) != member:
                raise ValueError(f"cover member {i!r} is not closed under faces")
            if not member <= self.host:
                raise ValueError(f"cover member {i!r} is not a subcomplex of the host")
            union |= member
        if union != set(self.host):
            raise ValueError("cover members do not cover the host")

    @property
    def of_simplices(self) -> bool:
        """True when every member is the full simplex on its vertex set."""
        return all(closure([vertices(self.members[i])]) == self.members[i] for i in self.index)


def nerve(C: Cover) -> Complex:
    """Simplices are index sets whose members share a simplex."""
    out = set()
    level = []
    for i in C.index:
        if C.members[i]:
            out.add((i,))
            level.append(((i,), C.members[i]))
    pos = {i: k for k, i in enumerate(C.index)}
    while level:
        nxt = []
        for s, common in level:
            for j in C.index[pos[s[-1]] + 1:]:
                inter = common & C.members[j]
                if inter:
                    nxt.append((s + (j,), inter))
        out.update(s for s, _ in nxt)
        level = nxt
    return frozenset(out)


def cover_from_relation(R: Relation) -> Cover:
    """Cover of ``F_R`` by the full simplices ``A_x`` on each row's support.

    Indexed by the rows that are vertices of ``E_R``.
    """
    if R.is_empty():
        raise ValueError("cover_from_relation needs a nonempty relation")
    _, F = dowker_pair_from_relation(R)
    members = {}
    for i, x in enumerate(R.rows):
        support = [R.cols[j] for j in range(R.ncols) if R.incidence[i, j]]
        if support:
            members[x] = closure([support])
    return Cover(F, members, tuple(x for x in R.rows if x in members))


def relation_from_cover(C: Cover) -> Relation:
    """Relation between host vertices (rows) and cover indices (columns): v ~ i iff v is in member i.

    Its Dowker complexes are the host (rows) and the nerve (columns).
    """
    if not C.of_simplices:
        raise ValueError("relation_from_cover needs a cover of simplices")
    verts = vertices(C.host)
    member_verts = {i: set(vertices(C.members[i])) for i in C.index}
    inc = [[v in member_verts[i] for i in C.index] for v in verts]
    return Relation(inc, tuple(verts), C.index)


# ----------------------------------------------------------------- subdivision

def barycentric_subdivision(K: Iterable[tuple]):
    """First barycentric subdivision.

    Returns ``(Kb, ids)``: ``Kb`` has the simplices of ``K`` as vertices and
    inclusion chains as simplices (each stored in vertex order); ``ids`` maps
    every vertex of ``Kb`` to an integer in canonical order.
    """
    K = frozenset(tuple(s) for s in K)

    @lru_cache(maxsize=None)
    def chains_ending(s):
        out = [(s,)]
        for k in range(1, len(s)):
            for f in itertools.combinations(s, k):
                if f in K:
                    out.extend(c + (s,) for c in chains_ending(f))
        return out

    sub = {tuple(sorted(c)) for s in K for c in chains_ending(s)}
    ids = {s: i for i, s in enumerate(sorted(K))}
    return frozenset(sub), ids


def vertex_order_key(v):
    """Total order on vertices: simplices compare by dimension first, then lexicographically.

    Comparing by dimension first makes a face precede every simplex that
    contains it. Plain tuple order lacks this (``(0, 1) < (1,)``), and the
    composite least-vertex maps on second subdivisions then stop being
    contiguous to the assignment maps.
    """
    if isinstance(v, tuple):
        return (len(v), tuple(vertex_order_key(x) for x in v))
    return v


def least_vertex_map(K: Iterable[tuple]) -> dict:
    """Map from the subdivision of ``K`` to ``K`` sending each simplex to its least vertex."""
    return {s: min(s, key=vertex_order_key) for s in set(map(tuple, K))}


def is_order_reversing(f: Mapping, K: Iterable[tuple]) -> bool:
    K = set(K)
    return all(vertex_order_key(f[s]) >= vertex_order_key(f[t]) for t in K for s in faces(t) if s in K)


def _choose(candidates: list, rule: str) -> object:
    if rule == "least-index":
        return candidates[0]
    if rule == "greatest-index":
        return candidates[-1]
    if rule == "median-index":
        return candidates[len(candidates) // 2]
    raise ValueError(f"unknown choice rule {rule!r}")


def sink_assignment_map(R: Relation, choice_rule: str = "least-index") -> dict:
    """Map from the subdivision of E_R to F_R: a row simplex goes to a column related to all its rows."""
    if R.is_empty():
        raise ValueError("sink assignment needs a nonempty relation")
    E, _ = dowker_pair_from_relation(R)
    rpos = {x: i for i, x in enumerate(R.rows)}
    f = {}
    for s in E:
        rows = [rpos[x] for x in s]
        cands = [R.cols[j] for j in range(R.ncols) if R.incidence[rows, j].all()]
        f[s] = _choose(cands, choice_rule)
    return f


def source_assignment_map(R: Relation, choice_rule: str = "least-index") -> dict:
    """Map from the subdivision of F_R to E_R, the mirror of :func:`sink_assignment_map`."""
    return sink_assignment_map(R.transpose(), choice_rule)


def subdivide_map(f: Mapping, K: Iterable[tuple]) -> dict:
    """Induced map on subdivisions: a simplex of ``K`` goes to its image simplex."""
    return {s: image(f, s) for s in set(map(tuple, K))}


def inclusion(K: Iterable[tuple]) -> dict:
    return {v: v for v in vertices(K)}


class NotSimplicial(ValueError):
    pass


def are_contiguous(f: Mapping, g: Mapping, K: Iterable[tuple], L: Iterable[tuple]) -> bool:
    """Whether f(s) u g(s) is a simplex of ``L`` for every simplex ``s`` of ``K``.

    Checking maximal simplices suffices because ``L`` is face-closed.
    """
    L = set(L)
    tops = maximal_simplices(K)
    for name, h in (("f", f), ("g", g)):
        if not all(image(h, s) in L for s in tops):
            raise NotSimplicial(f"{name} is not simplicial")
    return all(tuple(sorted(set(image(f, s)) | set(image(g, s)))) in L for s in tops)


# ----------------------------------------------------------- theorem checking

@dataclass
class DowkerMaps:
    """Complexes and maps around one relation, through second subdivisions."""

    E: Complex
    F: Complex
    E1: Complex
    F1: Complex
    E2: Complex
    F2: Complex
    phi_E: dict      # E1 -> E
    phi_F: dict      # F1 -> F
    phi_E1: dict     # E2 -> E1
    phi_F1: dict     # F2 -> F1
    psi_F: dict      # E1 -> F
    psi_E: dict      # F1 -> E
    psi_F1: dict     # E2 -> F1
    psi_E1: dict     # F2 -> E1


def dowker_maps(R: Relation, choice_rule: str = "least-index",
                budget: int = SUBDIVISION_BUDGET) -> DowkerMaps:
    E, F = dowker_pair_from_relation(R)
    if len(E) > budget or len(F) > budget:
        raise ValueError(f"second subdivision limited to hosts with <= {budget} simplices "
                         f"(|E|={len(E)}, |F|={len(F)})")
    E1, _ = barycentric_subdivision(E)
    F1, _ = barycentric_subdivision(F)
    E2, _ = barycentric_subdivision(E1)
    F2, _ = barycentric_subdivision(F1)
    psi_F = sink_assignment_map(R, choice_rule)
    psi_E = source_assignment_map(R, choice_rule)
    return DowkerMaps(
        E, F, E1, F1, E2, F2,
        phi_E=least_vertex_map(E), phi_F=least_vertex_map(F),
        phi_E1=least_vertex_map(E1), phi_F1=least_vertex_map(F1),
        psi_F=psi_F, psi_E=psi_E,
        psi_F1=subdivide_map(psi_F, E1), psi_E1=subdivide_map(psi_E, F1),
    )


def contiguity_items(m: DowkerMaps) -> dict[str, bool]:
    """The four contiguity statements behind Dowker's homotopy equivalence."""
    return {
        "phiE.phiE1 ~ psiE.psiF1": are_contiguous(compose(m.phi_E, m.phi_E1),
                                                  compose(m.psi_E, m.psi_F1), m.E2, m.E),
        "phiF.phiF1 ~ psiF.psiE1": are_contiguous(compose(m.phi_F, m.phi_F1),
                                                  compose(m.psi_F, m.psi_E1), m.F2, m.F),
        "psiE.phiF1 ~ phiE.psiE1": are_contiguous(compose(m.psi_E, m.phi_F1),
                                                  compose(m.phi_E, m.psi_E1), m.F2, m.E),
        "psiF.phiE1 ~ phiF.psiF1": are_contiguous(compose(m.psi_F, m.phi_E1),
                                                  compose(m.phi_F, m.psi_F1), m.E2, m.F),
    }


def functorial_items(R: Relation, R2: Relation, choice_rule: str = "least-index") -> dict[str, bool]:
    """Contiguity statements making the equivalence commute with inclusions R in R2."""
    if not R.issubset(R2):
        raise ValueError("R must be contained in R2")
    E, F = dowker_pair_from_relation(R)
    E2, F2 = dowker_pair_from_relation(R2)
    F1, _ = barycentric_subdivision(F)
    F21, _ = barycentric_subdivision(F2)
    iota_E, iota_F, iota_F1 = inclusion(E), inclusion(F), inclusion(F1)
    psi_E = source_assignment_map(R, choice_rule)
    psi_E2 = source_assignment_map(R2, choice_rule)
    phi_F, phi_F2 = least_vertex_map(F), least_vertex_map(F2)
    return {
        "iotaE.psiE ~ psiE'.iotaF1": are_contiguous(compose(iota_E, psi_E),
                                                   compose(psi_E2, iota_F1), F1, E2),
        "iotaF.phiF ~ phiF'.iotaF1": are_contiguous(compose(iota_F, phi_F),
                                                   compose(phi_F2, iota_F1), F1, F2),
    }


@dataclass
class FDTReport:
    betti_E: list[int]
    betti_F: list[int]
    betti_E2: list[int]
    betti_F2: list[int]
    rank_E: list[int]
    rank_F: list[int]
    diagrams_equal: bool

    @property
    def ok(self) -> bool:
        return (self.betti_E == self.betti_F and self.betti_E2 == self.betti_F2
                and self.rank_E == self.rank_F and self.diagrams_equal)


def verify_fdt_pair(R: Relation, R2: Relation, max_hom_dim: int = 2) -> FDTReport:
    """Homology-level check of the functorial Dowker theorem for ``R`` inside ``R2``."""
    if R.is_empty() or R2.is_empty():
        raise ValueError("both relations must be nonempty")
    if not R.issubset(R2):
        raise ValueError("R must be contained in R2")
    cap = max_hom_dim + 1
    E, F = dowker_pair_from_relation(R, cap)
    E2, F2 = dowker_pair_from_relation(R2, cap)
    ks = range(max_hom_dim + 1)
    pe = compute_persistence(_capped(two_step_filtration(E, E2), cap), max_hom_dim)
    pf = compute_persistence(_capped(two_step_filtration(F, F2), cap), max_hom_dim)
    return FDTReport(
        betti_E=betti_numbers(E, max_hom_dim), betti_F=betti_numbers(F, max_hom_dim),
        betti_E2=betti_numbers(E2, max_hom_dim), betti_F2=betti_numbers(F2, max_hom_dim),
        rank_E=[induced_map_rank(E, E2, k) for k in ks],
        rank_F=[induced_map_rank(F, F2, k) for k in ks],
        diagrams_equal=pe == pf,
    )


def _capped(Fc, cap):
    return replace(Fc, max_dim=cap)


def random_relation(rng, nrows: int, ncols: int, density: float = 0.5) -> Relation:
    while True:
        inc = rng.random((nrows, ncols)) < density
        if inc.any():
            return Relation(inc)


def random_nested_pair(rng, nrows: int, ncols: int, density: float = 0.4,
                       extra: float = 0.3) -> tuple[Relation, Relation]:
    R = random_relation(rng, nrows, ncols, density)
    grow = rng.random((nrows, ncols)) < extra
    return R, Relation(R.incidence | grow)

