"""Filtered simplicial complexes built from networks, relations and circle points.

Simplices are sorted tuples of vertex indices. A :class:`FilteredComplex`
keeps simplices in canonical order: birth ascending, then dimension, then
lexicographic vertex order.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .network import BudgetExceeded, Network

Simplex = tuple

DEFAULT_MAX_DIM = 2
SIMPLEX_BUDGET = 1_000_000


def faces(simplex: Simplex) -> list[Simplex]:
    """Codimension-one faces, in the order obtained by deleting vertex 0, 1, ..."""
    if len(simplex) == 1:
        return []
    return [simplex[:i] + simplex[i + 1:] for i in range(len(simplex))]


def closure(simplices: Iterable[Sequence]) -> frozenset:
    """Smallest face-closed set of sorted tuples containing every input simplex."""
    out = set()
    for s in simplices:
        s = tuple(sorted(s))
        if not s or s in out:
            continue
        for k in range(1, len(s) + 1):
            out.update(itertools.combinations(s, k))
    return frozenset(out)


def skeleton(simplices: Iterable[Simplex], max_dim: int) -> frozenset:
    return frozenset(s for s in simplices if len(s) - 1 <= max_dim)


def canonical_key(simplex: Simplex, birth: float):
    return (birth, len(simplex), simplex)


@dataclass(frozen=True)
class FilteredComplex:
    """Simplices with birth values, face-closed and monotone.

    ``max_dim`` is the skeleton cap the complex was truncated at, or ``None``
    when every simplex of the underlying complex is present.
    """

    simplices: tuple[Simplex, ...]
    births: tuple[float, ...]
    max_dim: int | None = None

    @classmethod
    def from_births(cls, births: dict, max_dim: int | None = None) -> "FilteredComplex":
        items = sorted(((tuple(s), float(b)) for s, b in births.items()),
                       key=lambda sb: canonical_key(*sb))
        return cls(tuple(s for s, _ in items), tuple(b for _, b in items), max_dim)

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return iter(zip(self.simplices, self.births))

    def as_dict(self) -> dict:
        return dict(zip(self.simplices, self.births))

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def validate(self) -> None:
        """Raise ``ValueError`` unless face closure, monotonicity and uniqueness hold."""
        table = self.as_dict()
        if len(table) != len(self.simplices):
            raise ValueError("duplicate simplex in filtration")
        for s, b in table.items():
            if list(s) != sorted(set(s)):
                raise ValueError(f"simplex {s} is not strictly increasing")
            for f in faces(s):
                if f not in table:
                    raise ValueError(f"face {f} of {s} missing")
                if table[f] > b:
                    raise ValueError(f"face {f} born at {table[f]} after {s} at {b}")
        keys = [canonical_key(s, b) for s, b in self]
        if keys != sorted(keys):
            raise ValueError("simplices are not in canonical order")

    def to_text(self) -> str:
        lines = [f"{b!r} {len(s) - 1} " + " ".join(map(str, s)) for s, b in self]
        return "\n".join(lines) + ("\n" if lines else "")


def complex_at(F: FilteredComplex, delta: float) -> list[Simplex]:
    return [s for s, b in F if b <= delta]


# -------------------------------------------------------------- network builders

def simplex_count(n: int, max_dim: int) -> int:
    return sum(math.comb(n, k) for k in range(1, min(n, max_dim + 1) + 1))


def _all_simplices(n: int, max_dim: int, chunk: int = 1 << 16):
    """Vertex arrays of all simplices up to ``max_dim``, in bounded-size chunks."""
    total = simplex_count(n, max_dim)
    if total > SIMPLEX_BUDGET:
        raise BudgetExceeded(f"{total} simplices up to dimension {max_dim} on {n} nodes "
                             f"exceeds the budget of {SIMPLEX_BUDGET}")
    for k in range(1, min(n, max_dim + 1) + 1):
        it = itertools.combinations(range(n), k)
        while True:
            block = list(itertools.islice(it, chunk))
            if not block:
                break
            yield np.array(block, dtype=np.intp).reshape(-1, k)


def _witness_births(W: np.ndarray, max_dim: int) -> FilteredComplex:
    # birth(sigma) = min over witnesses j of max over x in sigma of W[x, j]
    births = {}
    for arr in _all_simplices(W.shape[0], max_dim):
        vals = W[arr].max(axis=1).min(axis=1)
        births.update(zip(map(tuple, arr.tolist()), vals.tolist()))
    return FilteredComplex.from_births(births, max_dim)


def dowker_sink_filtration(X: Network, max_dim: int = DEFAULT_MAX_DIM) -> FilteredComplex:
    """A simplex is born at the least delta admitting a common delta-sink."""
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    return _witness_births(X.weights, max_dim)


def dowker_source_filtration(X: Network, max_dim: int = DEFAULT_MAX_DIM) -> FilteredComplex:
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    return _witness_births(X.weights.T, max_dim)


def rips_filtration(X: Network, max_dim: int = DEFAULT_MAX_DIM) -> FilteredComplex:
    """A simplex is born at the largest weight among its ordered pairs, self-pairs included."""
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    W = X.weights
    births = {}
    for arr in _all_simplices(X.n, max_dim):
        vals = W[arr[:, :, None], arr[:, None, :]].max(axis=(1, 2))
        births.update(zip(map(tuple, arr.tolist()), vals.tolist()))
    return FilteredComplex.from_births(births, max_dim)


NETWORK_FILTRATIONS = {
    "rips": rips_filtration,
    "dowker-sink": dowker_sink_filtration,
    "dowker-source": dowker_source_filtration,
}


# --------------------------------------------------------------------- relations

@dataclass(frozen=True, eq=False)
class Relation:
    """Binary relation between ordered sets, stored as a boolean incidence matrix.

    ``incidence[x, y]`` is true iff ``(x, y)`` is in the relation. Row and
    column labels default to ``0..n-1``.
    """

    incidence: np.ndarray
    rows: tuple | None = None
    cols: tuple | None = None

    def __post_init__(self):
        inc = np.array(self.incidence, dtype=bool)
        if inc.ndim != 2:
            raise ValueError("incidence must be a 2-d matrix")
        inc.setflags(write=False)
        object.__setattr__(self, "incidence", inc)
        rows = tuple(range(inc.shape[0])) if self.rows is None else tuple(self.rows)
        cols = tuple(range(inc.shape[1])) if self.cols is None else tuple(self.cols)
        if len(rows) != inc.shape[0] or len(cols) != inc.shape[1]:
            raise ValueError("label count does not match incidence shape")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    @property
    def nrows(self) -> int:
        return self.incidence.shape[0]

    @property
    def ncols(self) -> int:
        return self.incidence.shape[1]

    def is_empty(self) -> bool:
        return not self.incidence.any()

    def transpose(self) -> "Relation":
        return Relation(self.incidence.T, self.cols, self.rows)

    def issubset(self, other: "Relation") -> bool:
        return (self.incidence.shape == other.incidence.shape
                and bool(np.all(~self.incidence | other.incidence)))

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return (self.rows == other.rows and self.cols == other.cols
                and np.array_equal(self.incidence, other.incidence))

    def __hash__(self):
        return hash((self.rows, self.cols, self.incidence.tobytes()))

    def to_text(self) -> str:
        lines = [f"{self.nrows} {self.ncols}"]
        lines += [" ".join("1" if v else "0" for v in row) for row in self.incidence]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Relation":
        tokens = [line.split() for line in text.splitlines() if line.strip()]
        if not tokens or len(tokens[0]) != 2:
            raise ValueError("relation file must start with 'nrows ncols'")
        nr, nc = int(tokens[0][0]), int(tokens[0][1])
        body = tokens[1:]
        if len(body) != nr or any(len(r) != nc for r in body):
            raise ValueError(f"expected {nr} rows of {nc} entries")
        if any(v not in ("0", "1") for r in body for v in r):
            raise ValueError("relation entries must be 0 or 1")
        return cls(np.array([[v == "1" for v in r] for r in body], dtype=bool).reshape(nr, nc))


def network_relation(X: Network, delta: float) -> Relation:
    """The relation {(x, x') : w(x, x') <= delta} on X x X."""
    return Relation(X.weights <= delta, X.labels, X.labels)


def _witness_complex(inc: np.ndarray, labels: tuple, max_dim: int | None) -> frozenset:
    # every witness column contributes the full simplex on its support
    top = max_dim + 1 if max_dim is not None else None
    out = set()
    for col in inc.T:
        support = tuple(labels[i] for i in np.flatnonzero(col))
        if not support:
            continue
        for k in range(1, (len(support) if top is None else min(len(support), top)) + 1):
            out.update(itertools.combinations(support, k))
    return frozenset(out)


def dowker_pair_from_relation(R: Relation, max_dim: int | None = None):
    """Dowker complexes ``(E, F)`` of a nonempty relation.

    ``E`` lives on the rows: sigma is in E iff some column is related to every
    row of sigma. ``F`` lives on the columns, dually. Simplices are tuples of
    row (resp. column) labels; ``max_dim=None`` means no truncation.
    """
    if R.is_empty():
        raise ValueError("Dowker complexes need a nonempty relation")
    E = _witness_complex(R.incidence, R.rows, max_dim)
    F = _witness_complex(R.incidence.T, R.cols, max_dim)
    return E, F


# ------------------------------------------------------------------------- cech

def _min_arc_units(points: Sequence[int], n: int) -> int:
    # shortest closed arc (in units of 1/n) containing the given grid points
    if len(points) == 1:
        return 0
    p = sorted(points)
    gaps = [p[i + 1] - p[i] for i in range(len(p) - 1)] + [p[0] + n - p[-1]]
    return n - max(gaps)


def cech_circle_complex(n: int, r, max_dim: int | None = None) -> list[Simplex]:
    """Cech complex of n equally spaced points on the unit-circumference circle.

    A set of points spans a simplex iff the closed balls of radius ``r``
    around them share a point, i.e. iff the points fit in a closed arc of
    length ``2r``. Pass ``r`` as a :class:`~fractions.Fraction` for exact
    comparison; floats are compared with a 1e-12 slack.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    exact = isinstance(r, (int, Fraction))

    def fits(units: int) -> bool:
        if exact:
            return Fraction(units, n) <= 2 * Fraction(r)
        return units / n <= 2 * float(r) + 1e-12

    top = n if max_dim is None else min(n, max_dim + 1)
    out = []
    for k in range(1, top + 1):
        level = [s for s in itertools.combinations(range(n), k) if fits(_min_arc_units(s, n))]
        if not level:
            break
        out.extend(level)
    return out
