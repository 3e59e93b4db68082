"""Quasicrystal fragments of H2, H3, H4 generated by an affine reflection.

The shell P(m) holds the points reached by words using the translation
T = s_aff s_a0 exactly m times. Because P(m-1) is invariant under the acting
group, any word w0 T w1 T ... collapses to P(m) = W (P(m-1) + a0), which is
what is computed.

The acting group is either the full reflection group ("full") or its
rotation subgroup ("rotation", the default). For H3 and H4 the two give the
same shells, since the stabiliser of every axis used contains a reflection.
For H2 no reflection fixes a root direction, and only the rotation action
reproduces the published H2 counts (36, 40, ...).
Points are kept as integer Z[tau] arrays (rational and tau parts) after
scaling by the denominator of a0, so deduplication is exact.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import exact, kernels
from .affine import FIVEFOLD, THREEFOLD, TWOFOLD, axis_data
from .coxeter import (
    GroupId,
    RootVector,
    cartesian_embedding,
    generate_group,
    generate_root_system,
    gram_matrix,
    reflect,
)
from .golden import ZERO, GoldenRat, as_golden, parse_golden

__all__ = [
    "TranslationSpec",
    "Fragment",
    "FragmentTooLarge",
    "affine_reflect",
    "translate",
    "generate_fragment",
    "cardinality_table",
    "is_distinguished",
    "distinguished_report",
    "closure_shell",
    "word_shell_h2",
    "GENERIC_LENGTHS",
]

GENERIC_LENGTHS = (Fraction(5, 7), Fraction(13, 11))
ACTIONS = ("rotation", "full")
MAX_ROWS = 60_000_000


class FragmentTooLarge(MemoryError):
    pass


@dataclass(frozen=True)
class TranslationSpec:
    """Affine root a0 = -length * u, with u the oriented unit vector of ``axis``.

    For the twofold axis u is the highest root, so a0 = -length * a_H; for
    the fivefold axis of H3, u = -T5 and a0 = length * T5.
    """

    group: GroupId
    axis: str = TWOFOLD
    length: GoldenRat = GoldenRat(1)

    def __post_init__(self):
        object.__setattr__(self, "group", GroupId.parse(self.group))
        object.__setattr__(self, "length", as_golden(self.length))
        if self.group.crystallographic:
            raise ValueError("fragments are generated for H2, H3 and H4")
        if self.axis not in axis_data(self.group):
            raise ValueError(f"{self.group} has no {self.axis} axis; choose from {sorted(axis_data(self.group))}")
        if self.length.is_zero():
            raise ValueError("translation length must be non-zero")

    @classmethod
    def parse(cls, group, axis: str, length: str | GoldenRat) -> "TranslationSpec":
        if isinstance(length, str):
            length = parse_golden(length)
        return cls(GroupId.parse(group), axis, length)

    @property
    def affine_root(self) -> RootVector:
        return axis_data(self.group)[self.axis].unit.scale(-self.length)

    def to_json(self) -> dict:
        return {"group": self.group.value, "axis": self.axis, "length": self.length.to_json()}

    @classmethod
    def from_json(cls, obj) -> "TranslationSpec":
        return cls(GroupId.parse(obj["group"]), obj["axis"], GoldenRat.from_json(obj["length"]))


def affine_reflect(a0: RootVector, v: RootVector) -> RootVector:
    """s_aff(v) = a0 + v - 2 (a0|v)/(a0|a0) a0."""
    n2 = a0.norm2()
    if n2.is_zero():
        raise ValueError("affine root must be non-zero")
    return a0 + v - a0.scale(2 * a0.dot(v) / n2)


def linear_reflect(a0: RootVector, v: RootVector) -> RootVector:
    return v - a0.scale(2 * a0.dot(v) / a0.norm2())


def translate(a0: RootVector, v: RootVector) -> RootVector:
    """T = s_aff composed with s_a0, which is v -> v + a0."""
    return affine_reflect(a0, linear_reflect(a0, v))


# -- integer encoding ------------------------------------------------------------


def _common_den(values: Iterable[GoldenRat]) -> int:
    den = 1
    for x in values:
        den = math.lcm(den, x.den)
    return den


def _encode(vectors: Sequence[Sequence[GoldenRat]], den: int) -> np.ndarray:
    out = np.zeros((len(vectors), 2, len(vectors[0]) if vectors else 0), dtype=np.int64)
    for k, v in enumerate(vectors):
        for i, x in enumerate(v):
            y = x * den
            if not y.in_ztau():  # pragma: no cover
                raise ValueError("denominator does not clear the vector")
            out[k, 0, i] = int(y.rational_part)
            out[k, 1, i] = int(y.tau_part)
    return out


def _decode(arr: np.ndarray, den: int) -> list[tuple[GoldenRat, ...]]:
    return [
        tuple(GoldenRat(int(row[0, i]), int(row[1, i]), den) for i in range(arr.shape[2])) for row in arr
    ]


def _unique_rows(arr: np.ndarray) -> np.ndarray:
    if arr.shape[0] == 0:
        return arr
    flat = arr.reshape(arr.shape[0], -1)
    return np.unique(flat, axis=0).reshape(-1, *arr.shape[1:])


@dataclass(frozen=True, eq=False)
class Fragment:
    spec: TranslationSpec
    n: int
    den: int
    shells: tuple[np.ndarray, ...]  # shell m: (count, 2, rank) ints, scaled by den
    action: str = "rotation"

    @property
    def cardinalities(self) -> tuple[int, ...]:
        return tuple(s.shape[0] for s in self.shells)

    @property
    def union(self) -> np.ndarray:
        return _unique_rows(np.concatenate(self.shells))

    @property
    def union_cardinality(self) -> int:
        return self.union.shape[0]

    def shell_points(self, m: int) -> list[RootVector]:
        return [RootVector(self.spec.group, c) for c in _decode(self.shells[m], self.den)]

    def to_json(self, include_points: bool = True) -> dict:
        out = {
            "spec": self.spec.to_json(),
            "affine_root": self.spec.affine_root.to_json(),
            "n": self.n,
            "action": self.action,
            "cardinalities": list(self.cardinalities),
            "union_cardinality": self.union_cardinality,
        }
        if include_points:
            out["shells"] = [
                [[x.to_json() for x in c] for c in _decode(s, self.den)] for s in self.shells
            ]
        return out

    @classmethod
    def from_json(cls, obj) -> "Fragment":
        spec = TranslationSpec.from_json(obj["spec"])
        shells = [[tuple(GoldenRat.from_json(x) for x in c) for c in s] for s in obj.get("shells", [])]
        den = _common_den(x for s in shells for c in s for x in c)
        rank = spec.group.rank
        arrs = tuple(_encode(s, den) if s else np.zeros((0, 2, rank), dtype=np.int64) for s in shells)
        return cls(spec, int(obj.get("n", len(shells) - 1)), den, arrs, obj.get("action", "rotation"))

    def cartesian(self, m: int) -> list[tuple[GoldenRat, ...]]:
        if self.spec.group == GroupId.H2:
            raise ValueError("H2 has no Cartesian embedding over Q[tau]")
        emb = cartesian_embedding(self.spec.group)
        return [emb.to_cartesian(p) for p in self.shell_points(m)]

    def to_csv(self) -> str:
        """One row per point: shell, exact root coordinates, then Cartesian or planar coordinates."""
        from .render import planar_h2

        group = self.spec.group
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        coords = [f"c{i + 1}" for i in range(group.rank)]
        extra = ["x", "y"] if group == GroupId.H2 else [f"x{i + 1}" for i in range(3 if group == GroupId.H3 else 4)]
        wr.writerow(["shell"] + coords + extra)
        for m in range(len(self.shells)):
            pts = self.shell_points(m)
            if group == GroupId.H2:
                tail = [tuple(f"{z:.15f}" for z in planar_h2(p.coords)) for p in pts]
            else:
                emb = cartesian_embedding(group)
                tail = [tuple(str(z) for z in emb.to_cartesian(p)) for p in pts]
            for p, t in zip(pts, tail):
                wr.writerow([m] + [str(x) for x in p.coords] + list(t))
        return buf.getvalue()


def _apply_group(mats: np.ndarray, pts: np.ndarray, threads: int | None) -> np.ndarray:
    """Unique images g.p for all group elements g and points p."""
    if mats.shape[0] * pts.shape[0] > MAX_ROWS:
        raise FragmentTooLarge(
            f"{mats.shape[0]} group elements x {pts.shape[0]} points exceeds the {MAX_ROWS} row guard"
        )
    step = max(1, 2_000_000 // max(1, pts.shape[0]))
    chunks = [mats[i : i + step] for i in range(0, mats.shape[0], step)]

    def run(chunk):
        img = kernels.ztau_apply(chunk, pts)
        return _unique_rows(img.reshape(-1, *pts.shape[1:]))

    if threads and threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    return _unique_rows(np.concatenate(parts))


def _stabiliser(mats: np.ndarray, a0: np.ndarray) -> np.ndarray:
    img = kernels.ztau_apply(mats, a0[None])[:, 0]
    keep = np.all(img == a0[None], axis=(1, 2))
    return mats[keep]


def _orbit_representatives(stab: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """One point per orbit of the stabiliser of a0 (g(x + a0) = g x + a0 there)."""
    if stab.shape[0] <= 1:
        return pts
    img = kernels.ztau_apply(stab, pts)  # (S, V, 2, n)
    s, v = img.shape[:2]
    flat = img.reshape(s * v, -1)
    _, inverse = np.unique(flat, axis=0, return_inverse=True)
    ids = inverse.reshape(s, v).min(axis=0)
    _, first = np.unique(ids, return_index=True)
    return pts[np.sort(first)]


def _acting(group: GroupId, action: str) -> np.ndarray:
    if action not in ACTIONS:
        raise ValueError(f"action must be one of {ACTIONS}")
    w = generate_group(group)
    return w.rotations() if action == "rotation" else w.matrices


def generate_fragment(
    spec: TranslationSpec, n: int, threads: int | None = None, action: str = "rotation"
) -> Fragment:
    if n < 0:
        raise ValueError("cut-off n must be non-negative")
    group = spec.group
    mats = _acting(group, action)
    roots = [r.coords for r in generate_root_system(group)]
    a0 = spec.affine_root.coords
    den = _common_den(a0)
    shell = _unique_rows(_encode(roots, den))
    a0_arr = _encode([a0], den)[0]
    stab = _stabiliser(mats, a0_arr)
    shells = [shell]
    for _ in range(n):
        reps = _orbit_representatives(stab, shells[-1])
        shell = _apply_group(mats, reps + a0_arr[None], threads)
        shells.append(shell)
    return Fragment(spec, n, den, tuple(shells), action)


def cardinality_table(
    group, lengths: Sequence, threads: int | None = None, action: str = "rotation"
) -> list[tuple[GoldenRat, int]]:
    """|P(1)| along the highest root for each length; length 0 gives |Phi|.

    Negative lengths are taken by absolute value: Phi is centrally symmetric,
    so the sign of a0 does not change the count.
    """
    group = GroupId.parse(group)
    out = []
    for lam in lengths:
        lam = parse_golden(lam) if isinstance(lam, str) else as_golden(lam)
        if lam.is_zero():
            out.append((lam, len(generate_root_system(group))))
            continue
        frag = generate_fragment(TranslationSpec(group, TWOFOLD, abs(lam)), 1, threads, action)
        out.append((lam, frag.cardinalities[1]))
    return out


@dataclass(frozen=True)
class DistinguishedReport:
    cardinality: int
    generic: tuple[int, ...]
    distinguished: bool


def distinguished_report(
    spec: TranslationSpec, threads: int | None = None, action: str = "rotation"
) -> DistinguishedReport:
    card = generate_fragment(spec, 1, threads, action).cardinalities[1]
    generic = tuple(
        generate_fragment(TranslationSpec(spec.group, spec.axis, GoldenRat(g)), 1, threads, action).cardinalities[1]
        for g in GENERIC_LENGTHS
    )
    if len(set(generic)) != 1:
        raise RuntimeError(f"generic-length oracle disagrees: {dict(zip(map(str, GENERIC_LENGTHS), generic))}")
    return DistinguishedReport(card, generic, card < generic[0])


def is_distinguished(spec: TranslationSpec, threads: int | None = None, action: str = "rotation") -> bool:
    return distinguished_report(spec, threads, action).distinguished


# -- independent oracles -------------------------------------------------------------


def _generators(group: GroupId, action: str):
    refl = [lambda v, i=i: reflect(i, v) for i in range(group.rank)]
    if action == "full":
        return refl
    # products s_0 s_j generate the rotation subgroup
    return [lambda v, j=j: reflect(0, reflect(j, v)) for j in range(1, group.rank)]


def closure_shell(spec: TranslationSpec, action: str = "rotation") -> set[tuple[GoldenRat, ...]]:
    """P(1) as the closure of Phi + a0 under the generators alone, without group matrices."""
    group = spec.group
    gens = _generators(group, action)
    a0 = spec.affine_root
    seen = {(r + a0).coords for r in generate_root_system(group)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for c in frontier:
            v = RootVector(group, c)
            for gen in gens:
                u = gen(v).coords
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return seen


def word_shell_h2(spec: TranslationSpec, max_len: int = 12, action: str = "full") -> set[tuple[GoldenRat, ...]]:
    """Images of Phi under every literal word of length <= max_len containing T exactly once.

    The alphabet is {s1, s2, T} for the full action and {s1 s2, T} for the
    rotation action.
    """
    if spec.group != GroupId.H2:
        raise ValueError("word enumeration oracle is for H2")
    a0 = spec.affine_root
    phi = frozenset(r.coords for r in generate_root_system(GroupId.H2))
    ops = {"T": lambda v: translate(a0, v)}
    if action == "full":
        ops["s1"] = lambda v: reflect(0, v)
        ops["s2"] = lambda v: reflect(1, v)
    else:
        ops["r"] = lambda v: reflect(0, reflect(1, v))

    @lru_cache(maxsize=None)
    def apply(op: str, pts: frozenset) -> frozenset:
        return frozenset(ops[op](RootVector(GroupId.H2, c)).coords for c in pts)

    result: set = set()
    # walk words from the right: state = image of Phi under the suffix so far
    layer = {(phi, False)}
    for _ in range(max_len):
        nxt = set()
        for pts, used in layer:
            for op in ops:
                if op == "T" and used:
                    continue
                state = (apply(op, pts), used or op == "T")
                nxt.add(state)
                if state[1]:
                    result |= state[0]
        layer = nxt
    return result
