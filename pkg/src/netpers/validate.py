"""Seeded randomized and exhaustive checks of known structural results.

Every suite returns a :class:`SuiteReport`; a suite passes when its
``failures`` list is empty. Expected values come from small module-level
functions so a test can swap in a wrong oracle and watch the suite fail.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .diagmetric import bottleneck_distance, diagram_equal
from .filtration import (
    NETWORK_FILTRATIONS,
    cech_circle_complex,
    complex_at,
    dowker_sink_filtration,
    dowker_source_filtration,
    rips_filtration,
)
from .homology import compute_persistence
from .network import (
    Network,
    cycle_network,
    max_symmetrize,
    network_distance_correspondences,
    pair_swap,
    transpose,
)
from .relationlab import random_nested_pair, verify_fdt_pair

SUITES = ("cycle", "duality", "stability", "fdt", "cech", "invariance")


@dataclass
class SuiteReport:
    suite: str
    seed: int
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        lines = [f"{self.suite}: {status} ({self.cases} cases, {len(self.failures)} failures, "
                 f"{self.seconds:.2f}s, seed {self.seed})"]
        lines += [f"  {f}" for f in self.failures[:20]]
        if len(self.failures) > 20:
            lines.append(f"  ... {len(self.failures) - 20} more")
        return "\n".join(lines)


# --------------------------------------------------------------------- oracles

def expected_cycle_dim1(n: int) -> tuple[tuple[float, float], ...]:
    return ((1.0, float(math.ceil(n / 2))),)


def random_network(rng: np.random.Generator, n: int, low: float = -1.0, high: float = 2.0) -> Network:
    return Network.from_matrix(rng.uniform(low, high, size=(n, n)))


def diagonal_minimal(X: Network) -> Network:
    """Lower each self-weight to the smallest weight in its row and column.

    Dimension-0 Dowker invariance under pair swaps needs this: a node must
    enter the filtration through its own self-weight.
    """
    W = X.weights.copy()
    np.fill_diagonal(W, np.minimum(W.min(axis=0), W.min(axis=1)))
    return Network(X.labels, W)


def cycle_diagram(n: int, dim: int) -> tuple[tuple[float, float], ...]:
    """Dowker sink diagram of the n-cycle network in one dimension."""
    F = dowker_sink_filtration(cycle_network(n), max_dim=dim + 1)
    return compute_persistence(F, dim)[dim]


# ---------------------------------------------------------------------- suites

def check_cycle(seed: int = 0, n_cases: int = 8) -> SuiteReport:
    """Dimension-1 Dowker diagrams of cycle networks n = 3, 4, ...; ``n_cases`` sizes."""
    rep = SuiteReport("cycle", seed)
    for n in range(3, 3 + n_cases):
        got = cycle_diagram(n, 1)
        want = expected_cycle_dim1(n)
        rep.cases += 1
        if got != want:
            rep.failures.append(f"n={n}: got {got}, expected {want}")
    return rep


def check_duality(seed: int, n_cases: int = 200, max_n: int = 6) -> SuiteReport:
    rng = np.random.default_rng(seed)
    rep = SuiteReport("duality", seed)
    for case in range(n_cases):
        X = random_network(rng, int(rng.integers(1, max_n + 1)))
        si = compute_persistence(dowker_sink_filtration(X), 1)
        so = compute_persistence(dowker_source_filtration(X), 1)
        rep.cases += 1
        if not diagram_equal(si, so, dims=(0, 1)):
            rep.failures.append(f"case {case} (n={X.n}): sink {si.points} != source {so.points}")
    return rep


def check_stability(seed: int, n_cases: int = 200, max_n: int = 4) -> SuiteReport:
    rng = np.random.default_rng(seed)
    rep = SuiteReport("stability", seed)
    for case in range(n_cases):
        X = random_network(rng, int(rng.integers(1, max_n + 1)))
        Y = random_network(rng, int(rng.integers(1, max_n + 1)))
        dn = network_distance_correspondences(X, Y)
        rep.cases += 1
        for name, build in NETWORK_FILTRATIONS.items():
            dx, dy = compute_persistence(build(X), 1), compute_persistence(build(Y), 1)
            for k in (0, 1):
                db = bottleneck_distance(dx[k], dy[k])
                if not db <= 2 * dn + 1e-9:
                    rep.failures.append(f"case {case} {name} dim {k}: d_B={db} > 2*d_N={2 * dn}")
    return rep


def check_fdt(seed: int, n_cases: int = 100, max_side: int = 6, max_hom_dim: int = 2) -> SuiteReport:
    rng = np.random.default_rng(seed)
    rep = SuiteReport("fdt", seed)
    for case in range(n_cases):
        nr, nc = (int(v) for v in rng.integers(1, max_side + 1, size=2))
        R, R2 = random_nested_pair(rng, nr, nc)
        r = verify_fdt_pair(R, R2, max_hom_dim)
        rep.cases += 1
        if not r.ok:
            rep.failures.append(f"case {case} ({nr}x{nc}): {r}")
    return rep


def check_cech(seed: int = 0, n_cases: int = 8) -> SuiteReport:
    """Cech complexes of n evenly spaced circle points against cycle-network Dowker snapshots."""
    rep = SuiteReport("cech", seed)
    for n in range(3, 3 + n_cases):
        F = dowker_sink_filtration(cycle_network(n), max_dim=n - 1)
        for k in range(n + 1):
            dowker = set(complex_at(F, k))
            cech = set(cech_circle_complex(n, Fraction(k, 2 * n)))
            rep.cases += 1
            if dowker != cech:
                diff = sorted(dowker ^ cech, key=lambda s: (len(s), s))[:3]
                rep.failures.append(f"n={n} k={k}: complexes differ, e.g. {diff}")
    return rep


def check_invariance(seed: int, n_cases: int = 100, max_n: int = 6) -> SuiteReport:
    rng = np.random.default_rng(seed)
    rep = SuiteReport("invariance", seed)
    for case in range(n_cases):
        n = int(rng.integers(2, max_n + 1))
        X = random_network(rng, n)
        i, j = rng.choice(n, size=2, replace=False)
        S = pair_swap(X, X.labels[i], X.labels[j])
        rips = rips_filtration(X)
        rep.cases += 1
        for tag, Z in (("symmetrize", max_symmetrize(X)), ("transpose", transpose(X)), ("swap", S)):
            if rips_filtration(Z) != rips:
                rep.failures.append(f"case {case}: Rips filtration changed under {tag}")
        M = diagonal_minimal(X)
        MS = pair_swap(M, X.labels[i], X.labels[j])
        if (compute_persistence(dowker_sink_filtration(M), 0)[0]
                != compute_persistence(dowker_sink_filtration(MS), 0)[0]):
            rep.failures.append(f"case {case}: Dowker dim-0 diagram changed under pair swap")
        d0 = compute_persistence(dowker_sink_filtration(X), 1)
        if d0 != compute_persistence(dowker_source_filtration(transpose(X)), 1):
            rep.failures.append(f"case {case}: sink diagram differs from source diagram of transpose")
    return rep


_CHECKS = {
    "cycle": check_cycle,
    "duality": check_duality,
    "stability": check_stability,
    "fdt": check_fdt,
    "cech": check_cech,
    "invariance": check_invariance,
}

DEFAULT_CASES = {"cycle": 8, "duality": 200, "stability": 200, "fdt": 100, "cech": 8, "invariance": 100}


def run_suite(name: str, seed: int, n_cases: int | None = None) -> SuiteReport:
    if name not in _CHECKS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if n_cases is not None and n_cases < 1:
        raise ValueError("n_cases must be positive")
    t0 = time.perf_counter()
    rep = _CHECKS[name](seed, DEFAULT_CASES[name] if n_cases is None else n_cases)
    rep.seconds = time.perf_counter() - t0
    return rep


def swap_changes_dowker_dim1(X: Network, z: str, z_prime: str) -> bool:
    a = compute_persistence(dowker_sink_filtration(X), 1)[1]
    b = compute_persistence(dowker_sink_filtration(pair_swap(X, z, z_prime)), 1)[1]
    return a != b


__all__ = [
    "SUITES", "SuiteReport", "run_suite", "cycle_diagram", "expected_cycle_dim1",
    "random_network", "diagonal_minimal", "swap_changes_dowker_dim1",
]
