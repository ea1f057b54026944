"""Z/2 simplicial homology and persistence.

Chains are Python ints used as bitsets: bit ``i`` set means the ``i``-th
simplex of the relevant dimension is in the chain. Addition over Z/2 is XOR
and the pivot ("lowest one") of a column is its highest set bit.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .filtration import FilteredComplex, Simplex, faces

INF = math.inf


@dataclass(frozen=True)
class PersistenceDiagram:
    """Per-dimension sorted multisets of ``(birth, death)`` points."""

    points: Mapping[int, tuple[tuple[float, float], ...]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, pts in self.points.items():
            kept = sorted((float(b), float(d)) for b, d in pts if b < d)
            clean[int(k)] = tuple(kept)
        object.__setattr__(self, "points", clean)

    def __getitem__(self, k: int) -> tuple[tuple[float, float], ...]:
        return self.points.get(k, ())

    @property
    def dims(self) -> list[int]:
        return sorted(self.points)

    def __eq__(self, other):
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        keys = set(self.points) | set(other.points)
        return all(self[k] == other[k] for k in keys)

    def to_csv(self, dims: Iterable[int] | None = None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["dim", "birth", "death"])
        for k in sorted(self.points if dims is None else dims):
            for b, d in self[k]:
                writer.writerow([k, format_number(b), format_number(d)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "PersistenceDiagram":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0]] != ["dim", "birth", "death"]:
            raise ValueError('diagram CSV must start with header "dim,birth,death"')
        pts: dict[int, list] = {}
        for lineno, row in enumerate(rows[1:], start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"line {lineno}: expected 3 fields")
            try:
                k, b, d = int(row[0]), float(row[1]), float(row[2])
            except ValueError:
                raise ValueError(f"line {lineno}: cannot parse {row!r}") from None
            pts.setdefault(k, []).append((b, d))
        return cls(pts)


def format_number(x: float) -> str:
    if x == INF:
        return "inf"
    if float(x).is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


# ---------------------------------------------------------------- boundary data

def _index_by_dim(simplices: Sequence[Simplex]):
    by_dim: dict[int, list] = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(s)
    pos = {k: {s: i for i, s in enumerate(v)} for k, v in by_dim.items()}
    return by_dim, pos


def boundary_columns(simplices: Sequence[Simplex], dim: int,
                     by_dim=None, pos=None) -> list[int]:
    """Columns of the Z/2 boundary matrix from dimension ``dim`` to ``dim - 1``.

    Columns follow the order of the ``dim``-simplices in ``simplices``; rows
    follow the order of the ``(dim - 1)``-simplices.
    """
    if by_dim is None:
        by_dim, pos = _index_by_dim(simplices)
    if dim == 0:
        return [0] * len(by_dim.get(0, []))
    lower = pos.get(dim - 1, {})
    cols = []
    for s in by_dim.get(dim, []):
        c = 0
        for f in faces(s):
            try:
                c |= 1 << lower[f]
            except KeyError:
                raise ValueError(f"face {f} of {s} is missing") from None
        cols.append(c)
    return cols


def _lowest(c: int) -> int:
    return c.bit_length() - 1


# ----------------------------------------------------------------- persistence

def compute_persistence(F: FilteredComplex, max_hom_dim: int = 1) -> PersistenceDiagram:
    """Persistence diagram of a filtration over Z/2, dimensions ``0..max_hom_dim``.

    Standard left-to-right column reduction, performed dimension by dimension
    from the top down so that columns already known to be positive can be
    cleared. Zero-length pairs are dropped; essential classes die at ``inf``.
    """
    if max_hom_dim < 0:
        raise ValueError("max_hom_dim must be >= 0")
    if F.max_dim is not None and max_hom_dim + 1 > F.max_dim:
        raise ValueError(f"filtration truncated at dimension {F.max_dim}; homology in dimension "
                         f"{max_hom_dim} needs simplices of dimension {max_hom_dim + 1}")
    by_dim, pos = _index_by_dim(F.simplices)
    birth = F.as_dict()
    top = max_hom_dim + 1
    killed: dict[int, set[int]] = {k: set() for k in range(top + 2)}
    positive: dict[int, set[int]] = {0: set(range(len(by_dim.get(0, []))))}
    pts: dict[int, list] = {k: [] for k in range(max_hom_dim + 1)}
    for d in range(top, 0, -1):
        simplices = by_dim.get(d, [])
        lower = by_dim.get(d - 1, [])
        pivots: dict[int, int] = {}
        positive[d] = set(killed[d])        # cleared columns are known to reduce to zero
        for j, c in enumerate(boundary_columns(F.simplices, d, by_dim, pos)):
            if j in killed[d]:
                continue
            while c:
                other = pivots.get(_lowest(c))
                if other is None:
                    break
                c ^= other
            if not c:
                positive[d].add(j)
                continue
            low = _lowest(c)
            pivots[low] = c
            killed[d - 1].add(low)
            if d - 1 <= max_hom_dim:
                pts[d - 1].append((birth[lower[low]], birth[simplices[j]]))
    for k in range(max_hom_dim + 1):
        simplices = by_dim.get(k, [])
        for i in sorted(positive[k] - killed[k]):
            pts[k].append((birth[simplices[i]], INF))
    return PersistenceDiagram(pts)


# --------------------------------------------------------------- plain homology

def rank_z2(columns: Iterable[int]) -> int:
    """Rank over Z/2 of a matrix given as bitset columns."""
    basis: dict[int, int] = {}
    for c in columns:
        while c:
            low = _lowest(c)
            if low not in basis:
                basis[low] = c
                break
            c ^= basis[low]
    return len(basis)


def _sorted_complex(K: Iterable[Simplex]) -> list[Simplex]:
    return sorted({tuple(s) for s in K}, key=lambda s: (len(s), s))


def betti_numbers(K: Iterable[Simplex], up_to: int) -> list[int]:
    """Z/2 Betti numbers beta_0..beta_up_to of a face-closed complex."""
    simplices = _sorted_complex(K)
    by_dim, pos = _index_by_dim(simplices)
    ranks = {d: rank_z2(boundary_columns(simplices, d, by_dim, pos)) if d > 0 else 0
             for d in range(up_to + 2)}
    return [len(by_dim.get(k, [])) - ranks[k] - ranks[k + 1] for k in range(up_to + 1)]


def two_step_filtration(K: Iterable[Simplex], L: Iterable[Simplex]) -> FilteredComplex:
    """Filtration with ``K`` born at 0 and the rest of ``L`` born at 1."""
    K = {tuple(s) for s in K}
    L = {tuple(s) for s in L}
    if not K <= L:
        missing = sorted(K - L, key=lambda s: (len(s), s))[0]
        raise ValueError(f"K is not a subcomplex of L: {missing} not in L")
    return FilteredComplex.from_births({s: 0.0 if s in K else 1.0 for s in L})


def induced_map_rank(K: Iterable[Simplex], L: Iterable[Simplex], k: int) -> int:
    """Rank of H_k(K) -> H_k(L) induced by the inclusion K in L."""
    pd = compute_persistence(two_step_filtration(K, L), k)
    return sum(1 for b, d in pd[k] if b <= 0 and d > 1)


# --------------------------------------------------- induced maps on homology

@dataclass
class HomologyBasis:
    """A Z/2 basis of H_k with machinery to write cycles in that basis."""

    k: int
    simplices: list[Simplex]                # k-simplices, column order of chains
    index: dict
    generators: list[int]                   # cycle representatives
    _echelon: dict[int, tuple[int, int]]    # pivot -> (vector, generator tag)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def coordinates(self, cycle: int) -> int:
        """Coordinates (bitset over generators) of a k-cycle modulo boundaries."""
        tag = 0
        c = cycle
        while c:
            low = _lowest(c)
            entry = self._echelon.get(low)
            if entry is None:
                raise ValueError("chain is not a cycle of this complex")
            c ^= entry[0]
            tag ^= entry[1]
        return tag


def homology_basis(K: Iterable[Simplex], k: int) -> HomologyBasis:
    simplices = _sorted_complex(K)
    by_dim, pos = _index_by_dim(simplices)
    ks = by_dim.get(k, [])
    # cycles: kernel of boundary_k via reduction with recorded column operations
    cycles = []
    if k == 0:
        cycles = [1 << i for i in range(len(ks))]
    else:
        pivots: dict[int, tuple[int, int]] = {}
        for j, c in enumerate(boundary_columns(simplices, k, by_dim, pos)):
            v = 1 << j
            while c:
                low = _lowest(c)
                if low not in pivots:
                    break
                c ^= pivots[low][0]
                v ^= pivots[low][1]
            if c:
                pivots[_lowest(c)] = (c, v)
            else:
                cycles.append(v)
    echelon: dict[int, tuple[int, int]] = {}

    def insert(vec: int, tag: int) -> bool:
        while vec:
            low = _lowest(vec)
            if low not in echelon:
                echelon[low] = (vec, tag)
                return True
            vec ^= echelon[low][0]
            tag ^= echelon[low][1]
        return False

    for b in boundary_columns(simplices, k + 1, by_dim, pos):
        insert(b, 0)
    generators = []
    for z in cycles:
        if insert(z, 1 << len(generators)):
            generators.append(z)
    return HomologyBasis(k, ks, pos.get(k, {}), generators, echelon)


def push_chain(chain: int, source: HomologyBasis, target: HomologyBasis,
               vertex_map: Callable | Mapping) -> int:
    f = vertex_map.__getitem__ if isinstance(vertex_map, Mapping) else vertex_map
    out = 0
    i = 0
    while chain:
        if chain & 1:
            image = tuple(sorted({f(v) for v in source.simplices[i]}))
            if len(image) == source.k + 1:      # degenerate images vanish
                try:
                    out ^= 1 << target.index[image]
                except KeyError:
                    raise ValueError(f"image {image} is not a simplex of the target") from None
        chain >>= 1
        i += 1
    return out


def induced_homology_matrix(vertex_map, K: Iterable[Simplex], L: Iterable[Simplex],
                            k: int) -> list[list[int]]:
    """Matrix of H_k(K) -> H_k(L) over Z/2 in the bases from :func:`homology_basis`.

    Entry ``[i][j]`` is the coefficient of generator ``i`` of H_k(L) in the
    image of generator ``j`` of H_k(K).
    """
    src, tgt = homology_basis(K, k), homology_basis(L, k)
    cols = [tgt.coordinates(push_chain(z, src, tgt, vertex_map)) for z in src.generators]
    return [[(c >> i) & 1 for c in cols] for i in range(tgt.rank)]


def matrix_rank_z2(M: list[list[int]]) -> int:
    if not M:
        return 0
    cols = [sum(M[i][j] << i for i in range(len(M))) for j in range(len(M[0]))]
    return rank_z2(cols)
