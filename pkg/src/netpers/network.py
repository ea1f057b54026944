"""Weighted directed networks, their transforms, and the exact network distance.

A network is a finite node set with an arbitrary real weight matrix: no
symmetry, zero diagonal, triangle inequality or sign condition is assumed.
The order of ``labels`` is the total order on nodes used by every downstream
construction.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

MAP_PAIR_BUDGET = 10**8
CORRESPONDENCE_BUDGET = 16


class NetworkParseError(ValueError):
    """Raised when a network file cannot be turned into a valid network."""


class BudgetExceeded(RuntimeError):
    """Raised when an exhaustive search would exceed its configured budget."""


@dataclass(frozen=True, eq=False)
class Network:
    labels: tuple[str, ...]
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        labels = tuple(str(l) for l in self.labels)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weight matrix must be square, got shape {w.shape}")
        if w.shape[0] < 1:
            raise ValueError("a network needs at least one node")
        if len(labels) != w.shape[0]:
            raise ValueError(f"{len(labels)} labels for a {w.shape[0]}x{w.shape[0]} matrix")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be distinct")
        bad = np.argwhere(~np.isfinite(w))
        if len(bad):
            i, j = bad[0]
            raise ValueError(f"non-finite weight at cell ({i}, {j})")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_matrix(cls, weights, labels: Sequence[str] | None = None) -> "Network":
        w = np.asarray(weights, dtype=np.float64)
        if labels is None:
            labels = [f"x{i + 1}" for i in range(w.shape[0])]
        return cls(tuple(labels), w)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown node label {label!r}") from None

    def weight(self, a: str, b: str) -> float:
        return float(self.weights[self.index(a), self.index(b)])

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.labels, self.weights.tobytes()))

    def __repr__(self):
        return f"Network(n={self.n}, labels={list(self.labels)!r})"

    def to_json(self) -> str:
        # repr(float) is the shortest round-trip decimal form
        return json.dumps({"labels": list(self.labels),
                           "weights": [[float(v) for v in row] for row in self.weights]})

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.labels)
        for row in self.weights:
            writer.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


# --------------------------------------------------------------------------- io

def _parse_cell(value, i: int, j: int) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise NetworkParseError(f"cell ({i}, {j}): cannot parse {value!r} as a number") from None
    if not math.isfinite(x):
        raise NetworkParseError(f"cell ({i}, {j}): non-finite weight {value!r}")
    return x


def _build(labels: list, rows: list) -> Network:
    n = len(labels)
    if len(rows) != n:
        raise NetworkParseError(f"expected {n} matrix rows for {n} labels, got {len(rows)}")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise NetworkParseError(f"row {i} has {len(row)} entries, expected {n} (matrix must be square)")
    if len(set(map(str, labels))) != n:
        raise NetworkParseError("duplicate node labels")
    if n == 0:
        raise NetworkParseError("empty network")
    w = [[_parse_cell(v, i, j) for j, v in enumerate(row)] for i, row in enumerate(rows)]
    return Network(tuple(map(str, labels)), np.array(w, dtype=np.float64))


def parse_network(text: str, format: str) -> Network:
    if format == "json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise NetworkParseError(f"invalid JSON: {exc}") from None
        if not isinstance(data, dict) or "weights" not in data:
            raise NetworkParseError('expected an object with "labels" and "weights"')
        rows = data["weights"]
        labels = data.get("labels") or [f"x{i + 1}" for i in range(len(rows))]
        return _build(list(labels), [list(r) for r in rows])
    if format == "csv":
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
        if not rows:
            raise NetworkParseError("empty CSV")
        return _build([s.strip() for s in rows[0]], [[s.strip() for s in r] for r in rows[1:]])
    raise NetworkParseError(f"unknown network format {format!r}")


def load_network(path, format: str | None = None) -> Network:
    path = Path(path)
    if format is None:
        format = path.suffix.lstrip(".").lower()
    try:
        text = path.read_text()
    except OSError as exc:
        raise NetworkParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_network(text, format)


def save_network(X: Network, path, format: str | None = None) -> None:
    path = Path(path)
    format = format or path.suffix.lstrip(".").lower()
    text = X.to_json() if format == "json" else X.to_csv()
    path.write_text(text)


# -------------------------------------------------------------------- transforms

def transpose(X: Network) -> Network:
    return Network(X.labels, X.weights.T.copy())


def max_symmetrize(X: Network) -> Network:
    return Network(X.labels, np.maximum(X.weights, X.weights.T))


def pair_swap(X: Network, z: str, z_prime: str) -> Network:
    """Exchange the two directed weights between ``z`` and ``z_prime``."""
    if z == z_prime:
        raise ValueError("pair swap needs two distinct nodes")
    i, j = X.index(z), X.index(z_prime)
    w = X.weights.copy()
    w[i, j], w[j, i] = X.weights[j, i], X.weights[i, j]
    return Network(X.labels, w)


def cycle_network(n: int) -> Network:
    """Directed n-cycle with unit edges x_i -> x_{i+1} and shortest-path weights."""
    if n < 3:
        raise ValueError("cycle networks need n >= 3")
    idx = np.arange(n)
    w = (idx[None, :] - idx[:, None]) % n
    return Network(tuple(f"x{i + 1}" for i in range(n)), w.astype(np.float64))


# -------------------------------------------------------------------- distortion

def distortion_of_relation(X: Network, Y: Network, R: Iterable[tuple[int, int]]) -> float:
    pairs = np.array(sorted(set(R)), dtype=int).reshape(-1, 2)
    if len(pairs) == 0:
        raise ValueError("distortion of an empty relation is undefined")
    xs, ys = pairs[:, 0], pairs[:, 1]
    return float(np.max(np.abs(X.weights[np.ix_(xs, xs)] - Y.weights[np.ix_(ys, ys)])))


def is_correspondence(R: Iterable[tuple[int, int]], nx: int, ny: int) -> bool:
    R = list(R)
    return {x for x, _ in R} == set(range(nx)) and {y for _, y in R} == set(range(ny))


def map_distortion(X: Network, Y: Network, phi: Sequence[int]) -> float:
    phi = np.asarray(phi, dtype=int)
    return float(np.max(np.abs(X.weights - Y.weights[np.ix_(phi, phi)])))


def codistortion(X: Network, Y: Network, phi: Sequence[int], psi: Sequence[int],
                 direction: str = "XY") -> float:
    """Co-distortion of the map pair.

    ``XY``: max over (x, y) of |w_X(x, psi(y)) - w_Y(phi(x), y)|.
    ``YX``: max over (x, y) of |w_Y(y, phi(x)) - w_X(psi(y), x)|.
    """
    phi = np.asarray(phi, dtype=int)
    psi = np.asarray(psi, dtype=int)
    if direction == "XY":
        return float(np.max(np.abs(X.weights[:, psi] - Y.weights[phi, :])))
    if direction == "YX":
        return float(np.max(np.abs(Y.weights[:, phi] - X.weights[psi, :])))
    raise ValueError(f"direction must be 'XY' or 'YX', got {direction!r}")


def _all_maps(n_from: int, n_to: int) -> np.ndarray:
    return np.array(list(itertools.product(range(n_to), repeat=n_from)), dtype=int).reshape(-1, n_from)


def network_distance_maps(X: Network, Y: Network, budget: int = MAP_PAIR_BUDGET,
                          chunk: int = 1 << 22):
    """Exact network distance by enumerating every map pair (phi, psi).

    Returns ``(d, phi, psi)`` where ``(phi, psi)`` is the first optimal pair in
    ``itertools.product`` order.
    """
    nx, ny = X.n, Y.n
    n_pairs = ny**nx * nx**ny
    if n_pairs > budget:
        raise BudgetExceeded(f"instance too large for exact search: {n_pairs} map pairs > budget {budget}")
    wx, wy = X.weights, Y.weights
    phis = _all_maps(nx, ny)          # (P, nx)
    psis = _all_maps(ny, nx)          # (Q, ny)
    dis_phi = np.abs(wx[None] - wy[phis[:, :, None], phis[:, None, :]]).max(axis=(1, 2))
    dis_psi = np.abs(wy[None] - wx[psis[:, :, None], psis[:, None, :]]).max(axis=(1, 2))
    # X-side lookups indexed by psi, Y-side by phi
    wx_psi_cols = wx[:, psis].transpose(1, 0, 2)         # (Q, nx, ny): w_X(x, psi(y))
    wy_phi_rows = wy[phis, :]                            # (P, nx, ny): w_Y(phi(x), y)
    wy_phi_cols = wy[:, phis].transpose(1, 2, 0)         # (P, nx, ny): w_Y(y, phi(x)) as [x, y]
    wx_psi_rows = wx[psis, :].transpose(0, 2, 1)         # (Q, nx, ny): w_X(psi(y), x) as [x, y]

    best, best_idx = math.inf, (0, 0)
    step = max(1, chunk // max(1, len(psis) * nx * ny))
    for start in range(0, len(phis), step):
        sl = slice(start, start + step)
        c_xy = np.abs(wx_psi_cols[None] - wy_phi_rows[sl, None]).max(axis=(2, 3))
        c_yx = np.abs(wy_phi_cols[sl, None] - wx_psi_rows[None]).max(axis=(2, 3))
        total = np.maximum(np.maximum(c_xy, c_yx), np.maximum(dis_phi[sl, None], dis_psi[None, :]))
        k = int(np.argmin(total))
        val = float(total.flat[k])
        if val < best:
            best = val
            best_idx = (start + k // len(psis), k % len(psis))
    phi = tuple(int(v) for v in phis[best_idx[0]])
    psi = tuple(int(v) for v in psis[best_idx[1]])
    return 0.5 * best, phi, psi


def network_distance_correspondences(X: Network, Y: Network,
                                     budget: int = CORRESPONDENCE_BUDGET,
                                     chunk: int = 1 << 14) -> float:
    """Exact network distance as half the least distortion over all correspondences."""
    nx, ny = X.n, Y.n
    m = nx * ny
    if m > budget:
        raise BudgetExceeded(f"instance too large for exact search: |X||Y| = {m} > budget {budget}")
    px, py = np.divmod(np.arange(m), ny)
    gamma = np.abs(X.weights[np.ix_(px, px)] - Y.weights[np.ix_(py, py)])   # (m, m)
    # projection masks: which pair indices hit each x / each y
    hit_x = np.zeros((m, nx), dtype=bool)
    hit_x[np.arange(m), px] = True
    hit_y = np.zeros((m, ny), dtype=bool)
    hit_y[np.arange(m), py] = True
    bits = 1 << np.arange(m)
    best = math.inf
    for start in range(1, 1 << m, chunk):
        masks = np.arange(start, min(start + chunk, 1 << m))
        member = (masks[:, None] & bits[None, :]) != 0                        # (B, m)
        ok = (member @ hit_x).all(axis=1) & (member @ hit_y).all(axis=1)
        if not ok.any():
            continue
        member = member[ok]
        both = member[:, :, None] & member[:, None, :]
        dis = np.where(both, gamma[None], -np.inf).max(axis=(1, 2))
        best = min(best, float(dis.min()))
    return 0.5 * best
