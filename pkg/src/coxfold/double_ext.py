"""Simply-laced affine double extensions of A4, D6 and E8.

Two new nodes are attached with entries in {0, -1}, to the base and to each
other. A candidate is kept when the (rank+2) matrix is singular. The scan
covers all 2^(2 rank + 1) candidates with batched exact determinants.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import exact, kernels
from .coxeter import CartanLike, GroupId, cartan_matrix

__all__ = [
    "DoubleExtension",
    "KernelReport",
    "enumerate_double",
    "candidate_matrices",
    "schur_determinants",
    "distinct_diagrams",
    "kernel_trivial",
    "kernel_report",
    "MINOR_RULES",
]

# "none": only det = 0.  "delete-new": removing either new node must leave a
# non-singular matrix.  "all": every proper principal minor containing a new
# node must be non-singular.
MINOR_RULES = ("none", "delete-new", "all")
CHUNK = 8192


@dataclass(frozen=True)
class DoubleExtension:
    base: GroupId
    v1: tuple[int, ...]
    v2: tuple[int, ...]
    coupling: int

    @property
    def rank(self) -> int:
        return self.base.rank

    def int_matrix(self) -> np.ndarray:
        return _assemble(_base_ints(self.base), [self.v1], [self.v2], [self.coupling])[0]

    @property
    def full(self) -> CartanLike:
        m = self.int_matrix()
        labels = ("beta1", "beta2") + self.base.labels
        return CartanLike(exact.to_matrix(m.tolist()), labels, "bordered", self.base)

    def has_disconnected_node(self) -> bool:
        return (not any(self.v1) and self.coupling == 0) or (not any(self.v2) and self.coupling == 0)

    def to_json(self) -> dict:
        return {"base": self.base.value, "v1": list(self.v1), "v2": list(self.v2), "coupling": self.coupling}


def _base_ints(base: GroupId) -> np.ndarray:
    return np.array([[int(x.rational_part) for x in row] for row in cartan_matrix(base).entries], dtype=np.int64)


def _assemble(a: np.ndarray, v1s, v2s, cs) -> np.ndarray:
    v1s = np.asarray(v1s, dtype=np.int64)
    v2s = np.asarray(v2s, dtype=np.int64)
    cs = np.asarray(cs, dtype=np.int64)
    count, n = v1s.shape
    out = np.zeros((count, n + 2, n + 2), dtype=np.int64)
    out[:, 0, 0] = out[:, 1, 1] = 2
    out[:, 0, 1] = out[:, 1, 0] = cs
    out[:, 0, 2:] = out[:, 2:, 0] = v1s
    out[:, 1, 2:] = out[:, 2:, 1] = v2s
    out[:, 2:, 2:] = a
    return out


def _candidates(n: int, start: int, stop: int):
    """Candidates indexed by bitmask: bits 0..n-1 -> v1, n..2n-1 -> v2, bit 2n -> coupling."""
    masks = np.arange(start, stop, dtype=np.int64)
    bits = -((masks[:, None] >> np.arange(2 * n + 1)) & 1)
    return bits[:, :n], bits[:, n : 2 * n], bits[:, 2 * n]


def candidate_matrices(base, start: int = 0, stop: int | None = None) -> np.ndarray:
    base = GroupId.parse(base)
    n = base.rank
    stop = 2 ** (2 * n + 1) if stop is None else stop
    v1, v2, c = _candidates(n, start, stop)
    return _assemble(_base_ints(base), v1, v2, c)


def _principal_dets(mats: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    idx = np.array(keep)
    return kernels.det_batch(mats[:, idx[:, None], idx[None, :]])


def _minor_ok(mats: np.ndarray, rule: str) -> np.ndarray:
    size = mats.shape[1]
    ok = np.ones(mats.shape[0], dtype=bool)
    if rule == "none":
        return ok
    base_nodes = list(range(2, size))
    subsets = [[1] + base_nodes, [0] + base_nodes]
    if rule == "all":
        subsets = []
        for r in range(1, size):
            for sub in itertools.combinations(range(size), r):
                if 0 in sub or 1 in sub:
                    subsets.append(list(sub))
    for sub in subsets:
        ok &= _principal_dets(mats, sub) != 0
    return ok


def _scan_chunk(base: GroupId, start: int, stop: int, rule: str):
    mats = candidate_matrices(base, start, stop)
    dets = kernels.det_batch(mats)
    hit = np.asarray(dets == 0)
    if rule != "none" and hit.any():
        sub = mats[hit]
        keep = _minor_ok(sub, rule)
        hit_idx = np.flatnonzero(hit)[~keep]
        hit[hit_idx] = False
    return np.flatnonzero(hit) + start


def enumerate_double(base, minor_rule: str = "none", threads: int | None = None) -> list[DoubleExtension]:
    """All labelled simply-laced double extensions with det = 0, sorted.

    ``minor_rule`` optionally also demands non-singular principal minors;
    see MINOR_RULES.
    """
    base = GroupId.parse(base)
    if not base.crystallographic:
        raise ValueError("double extensions are enumerated for A4, D6 and E8")
    if minor_rule not in MINOR_RULES:
        raise ValueError(f"minor_rule must be one of {MINOR_RULES}")
    n = base.rank
    total = 2 ** (2 * n + 1)
    bounds = [(s, min(s + CHUNK, total)) for s in range(0, total, CHUNK)]
    if threads and threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda b: _scan_chunk(base, b[0], b[1], minor_rule), bounds))
    else:
        parts = [_scan_chunk(base, s, e, minor_rule) for s, e in bounds]
    masks = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    v1, v2, c = _candidates(n, 0, 0) if masks.size == 0 else _from_masks(n, masks)
    out = [
        DoubleExtension(base, tuple(int(x) for x in a), tuple(int(x) for x in b), int(k)) for a, b, k in zip(v1, v2, c)
    ]
    out.sort(key=lambda e: (e.v1, e.v2, e.coupling), reverse=True)
    return out


def _from_masks(n: int, masks: np.ndarray):
    bits = -((masks[:, None] >> np.arange(2 * n + 1)) & 1)
    return bits[:, :n], bits[:, n : 2 * n], bits[:, 2 * n]


def schur_determinants(base, v1s, v2s, cs) -> list[int]:
    """Determinants via the Schur complement of the base block, in exact rationals.

    det M = det(A) det(C - B^T A^-1 B) with B = [v1 v2] and C = [[2, c], [c, 2]].
    Independent of the batched elimination used by the scan.
    """
    base = GroupId.parse(base)
    a = cartan_matrix(base).entries
    inv = [[x.rational_part for x in row] for row in exact.inverse(a)]
    da = exact.det(a).rational_part
    n = base.rank

    def form(x, y):
        return sum(Fraction(x[i]) * inv[i][j] * y[j] for i in range(n) for j in range(n) if x[i] and y[j])

    out = []
    for v1, v2, c in zip(v1s, v2s, cs):
        p = 2 - form(v1, v1)
        q = 2 - form(v2, v2)
        r = c - form(v1, v2)
        d = da * (p * q - r * r)
        assert d.denominator == 1
        out.append(int(d))
    return out


def _graph(ext: DoubleExtension):
    import networkx as nx

    m = ext.int_matrix()
    g = nx.Graph()
    for i in range(m.shape[0]):
        g.add_node(i, new=i < 2)
    for i in range(m.shape[0]):
        for j in range(i + 1, m.shape[0]):
            if m[i, j]:
                g.add_edge(i, j, w=int(m[i, j]))
    return g


def distinct_diagrams(exts: Sequence[DoubleExtension]) -> list[list[DoubleExtension]]:
    """Isomorphism classes of the diagrams, keeping base and new nodes apart."""
    import networkx as nx

    def nm(a, b):
        return a["new"] == b["new"]

    def em(a, b):
        return a["w"] == b["w"]

    buckets: dict[str, list[tuple[object, list[DoubleExtension]]]] = {}
    for ext in exts:
        g = _graph(ext)
        h = nx.weisfeiler_lehman_graph_hash(g, node_attr="new")
        classes = buckets.setdefault(h, [])
        for rep, members in classes:
            if nx.is_isomorphic(rep, g, node_match=nm, edge_match=em):
                members.append(ext)
                break
        else:
            classes.append((g, [ext]))
    out = [members for classes in buckets.values() for _, members in classes]
    out.sort(key=lambda cls: (-len(cls), cls[0].v1, cls[0].v2, cls[0].coupling))
    return out


@dataclass(frozen=True)
class KernelReport:
    realisable: bool
    coefficients: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]
    norms: tuple[Fraction, Fraction]
    mutual: Fraction
    failures: tuple[str, ...]


def kernel_report(ext: DoubleExtension) -> KernelReport:
    """Try to write both new roots inside the span of the base simple roots.

    Each root is fixed by its products with the base (G c = v); it is only a
    valid new simple root if its norm is 2, and the two must have mutual
    product equal to the coupling.
    """
    g = cartan_matrix(ext.base).entries
    cs = []
    for v in (ext.v1, ext.v2):
        c = exact.solve(g, exact.to_vector(v))
        cs.append(tuple(x.rational_part for x in c))
    gi = [[x.rational_part for x in row] for row in g]

    def form(x, y):
        return sum(x[i] * gi[i][j] * y[j] for i in range(len(x)) for j in range(len(y)))

    n1, n2, mutual = form(cs[0], cs[0]), form(cs[1], cs[1]), form(cs[0], cs[1])
    failures = []
    if n1 != 2:
        failures.append(f"first root would have norm {n1}")
    if n2 != 2:
        failures.append(f"second root would have norm {n2}")
    if mutual != ext.coupling:
        failures.append(f"mutual product would be {mutual}, coupling is {ext.coupling}")
    return KernelReport(not failures, (cs[0], cs[1]), (n1, n2), mutual, tuple(failures))


def kernel_trivial(ext: DoubleExtension) -> bool:
    return kernel_report(ext).realisable
