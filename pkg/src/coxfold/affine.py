"""Kac-Moody-type affine extensions: search, decomposition, induction and classification.

A bordered Cartan matrix is stored as ``[[2, v^T], [w, A]]`` with the new node
at index 0, so ``v`` is the new row and ``w`` the new column. Every border
entry in the single-extension search is a non-positive integer, which makes
the determinant ``2 det A - v^T adj(A) w`` monotone in the entry sizes and
lets the depth-first search prune on partial sums.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import exact, kernels
from .coxeter import (
    CartanLike,
    GroupId,
    RootVector,
    border_from_root,
    bordered_matrix,
    cartan_matrix,
    cartesian_embedding,
    diagram_automorphisms,
    gram_matrix,
    highest_root,
    root_from_border,
)
from .golden import ONE, TAU, ZERO, GoldenRat, as_golden, sqrt_golden, tau_pow
from .projection import PARALLEL, PERPENDICULAR, ProjectionMap, lift_bordered, project, projection_map

__all__ = [
    "BorderedCartan",
    "ExtensionRecord",
    "KMCheck",
    "Symmetrisation",
    "is_kac_moody_extension",
    "search_single_extensions",
    "decompose_affine_root",
    "affine_root",
    "induce",
    "axis_constraint",
    "axis_data",
    "fibonacci_rescale",
    "classify",
    "transpose",
    "galois_conjugate_extension",
    "symmetrise",
    "extend_affine_by_one",
    "named_extension",
    "symmetric_extension",
    "lift_transposed",
    "lift_symmetric",
    "induced_root_under_automorphism",
    "STANDARD_NAMES",
    "INDUCED_NAMES",
]

STANDARD_NAMES = ("A4=", "D6<", "D6=", "D6>", "E8=")
_INDUCED_FROM = {"H4=": "E8=", "H3=": "D6=", "H3<": "D6<", "H3>": "D6>", "H2=": "A4="}
INDUCED_NAMES = tuple(_INDUCED_FROM) + tuple("Hbar" + n[1:] for n in _INDUCED_FROM)


class ExtensionError(ValueError):
    pass


@dataclass(frozen=True)
class BorderedCartan:
    base: GroupId
    v: tuple[GoldenRat, ...]
    w: tuple[GoldenRat, ...]
    full: CartanLike
    name: str = ""
    conjugate: bool = False

    @classmethod
    def make(cls, base, v, w, name: str = "", conjugate: bool = False, corner=2) -> "BorderedCartan":
        base = GroupId.parse(base)
        v, w = exact.to_vector(v), exact.to_vector(w)
        if len(v) != base.rank or len(w) != base.rank:
            raise ExtensionError(f"border vectors for {base} need {base.rank} entries")
        for a, b in zip(v, w):
            if a.is_zero() != b.is_zero():
                raise ExtensionError("border zeros must be symmetric (v_i = 0 iff w_i = 0)")
        a = cartan_matrix(base).entries
        notes = ()
        if conjugate:
            a = exact.conj_matrix(a)
            notes = ("galois-conjugate",)
        labels = ("a0",) + base.labels if base.family == "H" else ("alpha0",) + base.labels
        full = CartanLike(bordered_matrix(a, v, w, corner), labels, "bordered", base, notes)
        return cls(base, v, w, full, name, conjugate)

    @property
    def rank(self) -> int:
        return self.base.rank

    def det(self) -> GoldenRat:
        return self.full.det()

    @property
    def is_affine(self) -> bool:
        return self.det().is_zero()

    def base_gram(self) -> exact.Matrix:
        g = gram_matrix(self.base).entries
        return exact.conj_matrix(g) if self.conjugate else g

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.v) if not x.is_zero())

    def renamed(self, name: str) -> "BorderedCartan":
        return replace(self, name=name)

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "base": self.base.value,
            "v": [x.to_json() for x in self.v],
            "w": [x.to_json() for x in self.w],
            "matrix": self.full.to_json(),
        }
        if self.conjugate:
            out["conjugate"] = True
        return out

    @classmethod
    def from_json(cls, obj) -> "BorderedCartan":
        m = obj.get("matrix", {})
        corner = GoldenRat.from_json(m["entries"][0][0]) if m else 2
        return cls.make(
            obj["base"],
            [GoldenRat.from_json(x) for x in obj["v"]],
            [GoldenRat.from_json(x) for x in obj["w"]],
            obj.get("name", ""),
            bool(obj.get("conjugate", False)),
            corner,
        )

    def __str__(self) -> str:
        head = f"{self.name or 'extension'} of {self.base}"
        return head + "\n" + str(self.full)


# -- Kac-Moody conditions ------------------------------------------------------


@dataclass(frozen=True)
class KMCheck:
    ok: bool
    diagonal: bool
    ring: str
    ring_ok: bool
    signs: bool
    determinant: GoldenRat
    failures: tuple[str, ...] = ()
    flags: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "diagonal": self.diagonal,
            "ring": self.ring,
            "ring_ok": self.ring_ok,
            "signs": self.signs,
            "determinant": self.determinant.to_json(),
            "failures": list(self.failures),
            "flags": list(self.flags),
        }


def _ring_of(entries) -> str:
    if all(x.is_integer() for x in entries):
        return "Z"
    if all(x.is_rational() for x in entries):
        return "Q"
    if all(x.in_ztau() for x in entries):
        return "Z[tau]"
    return "Q[tau]"


def is_kac_moody_extension(m, conjugate: bool | None = None) -> KMCheck:
    """Check the four conditions of a Kac-Moody-type affine extension.

    Diagonal 2; entries in Z for crystallographic bases and in Z[tau]
    (accepted with a flag if only in Q[tau]) for H bases; off-diagonal
    entries non-positive with symmetric zeros; determinant zero. Galois
    conjugate matrices have their signs checked on the conjugate.
    """
    if isinstance(m, BorderedCartan):
        if conjugate is None:
            conjugate = m.conjugate
        m = m.full
    if not isinstance(m, CartanLike):
        m = CartanLike(exact.to_matrix(m), tuple(f"n{i}" for i in range(len(m))), "bordered")
    if conjugate is None:
        conjugate = "galois-conjugate" in m.notes
    a = m.entries
    n = len(a)
    failures, flags = [], []
    diagonal = all(a[i][i] == 2 for i in range(n))
    if not diagonal:
        failures.append("diagonal entries must all be 2")
    off = [a[i][j] for i in range(n) for j in range(n) if i != j]
    ring = _ring_of(off)
    if m.base is not None and m.base.crystallographic:
        ring_ok = ring == "Z"
    else:
        ring_ok = True
        if ring == "Q[tau]" or ring == "Q":
            flags.append("entries in Q[tau]")
    if not ring_ok:
        failures.append(f"entries lie in {ring}, expected Z")
    signed = exact.conj_matrix(a) if conjugate else a
    if conjugate:
        flags.append("signs checked on the Galois conjugate")
    signs = True
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if signed[i][j].sign() > 0:
                signs = False
                failures.append(f"entry ({i},{j}) = {a[i][j]} is positive")
            if a[i][j].is_zero() != a[j][i].is_zero():
                signs = False
                failures.append(f"zero pattern not symmetric at ({i},{j})")
    d = exact.det(a)
    if not d.is_zero():
        failures.append(f"determinant is {d}, not 0")
    ok = diagonal and ring_ok and signs and d.is_zero()
    return KMCheck(ok, diagonal, ring, ring_ok, signs, d, tuple(failures), tuple(flags))


# -- exhaustive single-node search ----------------------------------------------


def _int_matrix(m: exact.Matrix) -> list[list[int]]:
    if any(not x.is_integer() for row in m for x in row):
        raise ExtensionError("search needs an integer base matrix")
    return [[int(x.rational_part) for x in row] for row in m]


def _border_search(a: list[list[int]], bound: int, require_nonzero: bool) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All integer borders with entries in [-bound, 0] and det of the bordered matrix 0.

    Uses det = 2 det A - sum_ij v_i w_j adj_ij; with adj >= 0 and v_i w_j >= 0
    every partial sum only grows, so branches overshooting 2 det A are cut.
    """
    n = len(a)
    gm = exact.to_matrix(a)
    adj = [[int(x.rational_part) for x in row] for row in exact.adjugate(gm)]
    if any(x < 0 for row in adj for x in row):
        raise ExtensionError("pruned search needs an entrywise non-negative adjugate")
    target = 2 * int(exact.det(gm).rational_part)
    options = [(0, 0)] + [(-p, -q) for p in range(1, bound + 1) for q in range(1, bound + 1)]
    found = []
    v = [0] * n
    w = [0] * n

    def rec(k: int, partial: int, chosen: list[int]):
        if k == n:
            if partial == target and (chosen or not require_nonzero):
                found.append((tuple(v), tuple(w)))
            return
        for vk, wk in options:
            if vk == 0:
                v[k] = w[k] = 0
                rec(k + 1, partial, chosen)
                continue
            inc = vk * wk * adj[k][k]
            for j in chosen:
                inc += vk * w[j] * adj[k][j] + v[j] * wk * adj[j][k]
            if partial + inc > target:
                continue
            v[k], w[k] = vk, wk
            chosen.append(k)
            rec(k + 1, partial + inc, chosen)
            chosen.pop()
        v[k] = w[k] = 0

    rec(0, 0, [])
    # confirm every hit with an exact determinant
    if found:
        mats = np.array(
            [[[2] + list(vv)] + [[ww[i]] + a[i] for i in range(n)] for vv, ww in found], dtype=np.int64
        )
        dets = kernels.det_batch(mats)
        found = [f for f, d in zip(found, dets) if int(d) == 0]
    return found


def _canonical(border, perms) -> tuple[tuple, int]:
    v, w = border
    images = set()
    for p in perms:
        nv, nw = [0] * len(v), [0] * len(v)
        for i, j in enumerate(p):
            nv[j], nw[j] = v[i], w[i]
        images.add((tuple(nv), tuple(nw)))
    return min(images), len(images)


def _standard_name(base: GroupId, v, w) -> str:
    if tuple(v) == tuple(w):
        return f"{base.value}="
    # the row carrying the larger entry marks the shorter affine root
    return f"{base.value}<" if min(v) < min(w) else f"{base.value}>"


@dataclass(frozen=True)
class SearchHit:
    extension: BorderedCartan
    orbit_size: int


def search_single_extensions(base, entry_bound: int = 4, with_orbits: bool = False):
    """Exhaustive search for connected affine single-node extensions of A4, D6 or E8.

    Results are canonical up to base-diagram automorphism and sorted by name.
    """
    base = GroupId.parse(base)
    if not base.crystallographic:
        raise ExtensionError("the integer search is defined for A4, D6 and E8")
    a = _int_matrix(cartan_matrix(base).entries)
    perms = diagram_automorphisms(cartan_matrix(base))
    reps = {}
    for border in _border_search(a, entry_bound, require_nonzero=True):
        rep, size = _canonical(border, perms)
        reps[rep] = size
    hits = []
    for (v, w), size in reps.items():
        ext = BorderedCartan.make(base, v, w, _standard_name(base, v, w))
        hits.append(SearchHit(ext, size))
    hits.sort(key=lambda h: (h.extension.name, [int(x.rational_part) for x in h.extension.v]))
    return hits if with_orbits else [h.extension for h in hits]


def extend_affine_by_one(ext: BorderedCartan, entry_bound: int = 4) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Borders of ``ext.full`` by one more node keeping det 0.

    Every solution should be the all-zero border, i.e. a disconnected node.
    """
    a = _int_matrix(ext.full.entries)
    return _border_search(a, entry_bound, require_nonzero=False)


# -- standard extensions and affine roots ------------------------------------


@lru_cache(maxsize=None)
def _standard_catalog() -> dict[str, BorderedCartan]:
    out = {}
    for g in (GroupId.A4, GroupId.D6, GroupId.E8):
        for ext in search_single_extensions(g):
            out[ext.name] = ext
    return out


def affine_root(ext: BorderedCartan) -> RootVector:
    """The affine root a0 realising the border, in base simple-root coordinates."""
    root = root_from_border(ext.base_gram(), ext.v, ext.w)
    if root is None:
        raise ExtensionError("no affine root in base span")
    return RootVector(ext.base, root, "conjugate" if ext.conjugate else "standard")


def decompose_affine_root(ext: BorderedCartan) -> RootVector:
    """Coefficients of -a0 over the base simple roots."""
    if not ext.is_affine:
        raise ExtensionError("decomposition needs det = 0")
    return -affine_root(ext)


def induce(ext: BorderedCartan, pmap: ProjectionMap) -> tuple[BorderedCartan, "ExtensionRecord"]:
    """Project the affine root of ``ext`` and border the target Cartan matrix with it."""
    if pmap.source != ext.base:
        raise ExtensionError(f"map starts at {pmap.source}, extension lives on {ext.base}")
    root = project(pmap, affine_root(ext))
    if root.is_zero():
        raise ExtensionError("projected affine root is zero")
    conj = pmap.subspace == PERPENDICULAR
    v, w = border_from_root(root.gram(), root.coords)
    name = ""
    if ext.name:
        name = ("Hbar" if conj else "H") + str(pmap.target.rank) + ext.name[-1]
    out = BorderedCartan.make(pmap.target, v, w, name, conj)
    return out, classify(out)


def named_extension(name: str) -> BorderedCartan:
    """Look up one of A4=, D6<, D6=, D6>, E8=, H2=, H3<, H3=, H3>, H4= and Hbar variants."""
    key = _normalise_name(name)
    catalog = _standard_catalog()
    if key in catalog:
        return catalog[key]
    plain = key.replace("Hbar", "H")
    if plain in _INDUCED_FROM:
        src = catalog[_INDUCED_FROM[plain]]
        sub = PERPENDICULAR if key.startswith("Hbar") else PARALLEL
        return induce(src, projection_map(src.base, sub))[0]
    raise KeyError(f"unknown extension {name!r}; known: {', '.join(STANDARD_NAMES + INDUCED_NAMES)}")


def _normalise_name(name: str) -> str:
    s = name.strip().replace(" ", "").replace("_", "").replace("^", "")
    s = s.replace("H\u0304", "Hbar").replace("\u0304", "")
    if s.lower().startswith("hbar"):
        return "Hbar" + s[4:]
    return s[:1].upper() + s[1:]


def symmetric_extension(group) -> BorderedCartan:
    """The symmetric extension of H2, H3 or H4 by minus the highest root."""
    group = GroupId.parse(group)
    if group.crystallographic:
        raise ExtensionError("symmetric H extensions only")
    root = (-highest_root(group)).coords
    v, w = border_from_root(gram_matrix(group).entries, root)
    return BorderedCartan.make(group, v, w, f"{group.value}aff")


# -- axes, constraints and Fibonacci families --------------------------------


TWOFOLD, THREEFOLD, FIVEFOLD = "twofold", "threefold", "fivefold"
AXES = (TWOFOLD, THREEFOLD, FIVEFOLD)


@dataclass(frozen=True)
class Axis:
    name: str
    unit: RootVector  # oriented so that its products with the simple roots are >= 0
    positions: tuple[int, ...]
    norm2: GoldenRat  # squared length with unit-norm simple roots

    @property
    def position(self) -> int:
        return self.positions[0]


@lru_cache(maxsize=None)
def axis_data(target) -> dict[str, Axis]:
    target = GroupId.parse(target)
    if target.crystallographic:
        raise ExtensionError("axes are defined for H2, H3 and H4")
    units = {TWOFOLD: highest_root(target)}
    if target == GroupId.H3:
        axes = cartesian_embedding(target).axes()
        units[THREEFOLD] = axes["T3"]
        units[FIVEFOLD] = axes["T5"]
    g = gram_matrix(target).entries
    out = {}
    for name, u in units.items():
        prods = exact.matvec(g, u.coords)
        if any(p.sign() < 0 for p in prods):
            u = -u
            prods = tuple(-p for p in prods)
        positions = tuple(i for i, p in enumerate(prods) if not p.is_zero())
        out[name] = Axis(name, u, positions, u.norm2() / 2)
    return out


def _axis(target, axis) -> Axis:
    target = GroupId.parse(target)
    data = axis_data(target)
    key = str(axis).lower().replace("-", "")
    key = {"2": TWOFOLD, "3": THREEFOLD, "5": FIVEFOLD, "2fold": TWOFOLD, "3fold": THREEFOLD, "5fold": FIVEFOLD}.get(
        key, key
    )
    if key not in data:
        raise ExtensionError(f"{target} has no {axis} axis extension; available: {', '.join(data)}")
    return data[key]


def axis_constraint(target, axis) -> GoldenRat:
    """Required product xy for a single-axis affine extension."""
    target = GroupId.parse(target)
    ax = _axis(target, axis)
    a = cartan_matrix(target).entries
    adj = exact.adjugate(a)
    total = sum((adj[k][l] for k in ax.positions for l in ax.positions), ZERO)
    return 2 * exact.det(a) / total


_REFERENCES = {
    "symmetric": ((1, -1), (1, -1)),
    "fivefold": ((1, -2), (1, -1)),
    "fivefold-swapped": ((1, -1), (1, -2)),
}


def _quad_value(pair) -> GoldenRat:
    return GoldenRat(pair[0], pair[1])


def _unit_exponent(x: GoldenRat) -> int | None:
    """k with x = tau^k, or None if x is not a positive unit."""
    if x.sign() <= 0 or not x.in_ztau() or abs(x.norm()) != 1:
        return None
    k = 0
    while x != ONE:
        if x > ONE:
            x = x / TAU
            k += 1
        else:
            x = x * TAU
            k -= 1
        if abs(k) > 200:  # pragma: no cover
            return None
    return k


@dataclass(frozen=True)
class ExtensionRecord:
    target: GroupId
    axis: str
    quadruplet: tuple[int, int, int, int]
    k: int
    multipliers: tuple[Fraction, Fraction]
    affine_root: RootVector
    translation_length: GoldenRat
    reference: tuple[int, int, int, int] = (1, -1, 1, -1)
    x: GoldenRat = ZERO
    y: GoldenRat = ZERO
    name: str = ""
    conjugate: bool = False

    @property
    def xy(self) -> GoldenRat:
        return self.x * self.y

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "target": self.target.value,
            "axis": self.axis,
            "conjugate": self.conjugate,
            "x": self.x.to_json(),
            "y": self.y.to_json(),
            "xy": self.xy.to_json(),
            "quadruplet": list(self.quadruplet),
            "reference": list(self.reference),
            "k": self.k,
            "multipliers": [str(self.multipliers[0]), str(self.multipliers[1])],
            "affine_root": self.affine_root.to_json(),
            "translation_length": self.translation_length.to_json(),
        }


def _fib_step(q, s: int):
    a, b, c, d = q
    for _ in range(s):
        a, b, c, d = b - a, a, d, c + d
    for _ in range(-s):
        a, b, c, d = b, a + b, d - c, c
    return (a, b, c, d)


def fibonacci_rescale(rec: ExtensionRecord, steps: int) -> ExtensionRecord:
    """Rescale (x, y) -> (tau^-s x, tau^s y); the quadruplet follows (a,b;c,d) -> (b-a, a; d, c+d).

    The index k counts powers of tau on x relative to the reference, so it
    drops by ``steps``.
    """
    if steps == 0:
        return rec
    u = tau_pow(steps)
    if rec.conjugate:
        u = u.conj()
    return replace(
        rec,
        quadruplet=_fib_step(rec.quadruplet, steps),
        k=rec.k - steps,
        x=rec.x / u,
        y=rec.y * u,
        affine_root=rec.affine_root.scale(u),
        translation_length=rec.translation_length * u,
        name="",
    )


def _split(x: GoldenRat) -> tuple[Fraction, tuple[int, int]]:
    c = x.content()
    q = x / c
    return c, (int(q.rational_part), int(q.tau_part))


def classify(ext: BorderedCartan) -> ExtensionRecord:
    """Place a single-axis H extension in its Fibonacci family."""
    if ext.base.crystallographic:
        raise ExtensionError("classification applies to H2, H3 and H4 extensions")
    if ext.conjugate:
        rec = classify(galois_conjugate_extension(ext))
        # the conjugate root measured against the same axis in real space:
        # its norm is the conjugate norm, and |u|^2 may itself be irrational
        n2 = axis_data(ext.base)[rec.axis].norm2
        lam = sqrt_golden(rec.translation_length.conj() ** 2 * n2.conj() / n2)
        if lam is None:  # pragma: no cover
            raise ExtensionError("conjugate translation length is not in Q[tau]")
        if rec.y.conj().sign() > 0:
            lam = -lam
        return replace(
            rec,
            name=ext.name,
            conjugate=True,
            x=rec.x.conj(),
            y=rec.y.conj(),
            affine_root=rec.affine_root.conj(),
            translation_length=lam,
        )
    support = ext.support()
    axis = next((ax for ax in axis_data(ext.base).values() if ax.positions == support), None)
    if axis is None:
        raise ExtensionError(f"border support {support} is not of single-axis form")
    p = axis.position
    x, y = ext.v[p], ext.w[p]
    if any(ext.v[i] != x or ext.w[i] != y for i in axis.positions):
        raise ExtensionError("border entries differ across the axis positions")
    gamma, qx = _split(x)
    delta, qy = _split(y)
    refs = ("symmetric",) if axis.name != FIVEFOLD else ("fivefold", "fivefold-swapped")
    for ref in refs:
        rx, ry = _REFERENCES[ref]
        for sign in (1, -1):
            kx = _unit_exponent(sign * GoldenRat(*qx) / _quad_value(rx))
            ky = _unit_exponent(sign * GoldenRat(*qy) / _quad_value(ry))
            if kx is not None and ky is not None and kx == -ky:
                g, d = sign * gamma, sign * delta
                root = affine_root(ext)
                lam2 = (y / x) / axis.norm2
                lam = sqrt_golden(lam2)
                if lam is None:  # pragma: no cover - every constraint here has a Q[tau] root
                    raise ExtensionError(f"translation length squared {lam2} has no square root in Q[tau]")
                if y.sign() > 0:
                    lam = -lam
                return ExtensionRecord(
                    ext.base,
                    axis.name,
                    qx + qy,
                    kx,
                    (g, d),
                    root,
                    lam,
                    rx + ry,
                    x,
                    y,
                    ext.name,
                )
    raise ExtensionError(f"(x, y) = ({x}, {y}) is not in a Fibonacci family of the {axis.name} axis")


def transpose(ext: BorderedCartan) -> BorderedCartan:
    name = ext.name + "^T" if ext.name and not ext.name.endswith("^T") else ext.name[:-2]
    return BorderedCartan.make(ext.base, ext.w, ext.v, name, ext.conjugate, ext.full[0, 0])


def galois_conjugate_extension(ext: BorderedCartan) -> BorderedCartan:
    if ext.base.crystallographic:
        raise ExtensionError("Galois conjugation is meant for H extensions")
    name = ext.name
    if name.startswith("Hbar"):
        name = "H" + name[4:]
    elif name.startswith("H"):
        name = "Hbar" + name[1:]
    return BorderedCartan.make(
        ext.base,
        [x.conj() for x in ext.v],
        [x.conj() for x in ext.w],
        name,
        not ext.conjugate,
        ext.full[0, 0].conj(),
    )


# -- symmetrisation --------------------------------------------------------------


@dataclass(frozen=True)
class Symmetrisation:
    D: tuple[GoldenRat, ...]
    S: exact.Matrix
    exists: bool
    side: str = "left"
    reason: str = ""

    @property
    def rational(self) -> bool:
        return all(d.is_rational() for d in self.D)

    @property
    def S_in_ztau(self) -> bool:
        return all(x.in_ztau() for row in self.S for x in row)

    def to_json(self) -> dict:
        return {
            "exists": self.exists,
            "side": self.side,
            "D": [d.to_json() for d in self.D],
            "S": [[x.to_json() for x in row] for row in self.S],
            "D_rational": self.rational,
            "S_in_Z[tau]": self.S_in_ztau,
            "reason": self.reason,
        }


def symmetrise(m, side: str = "left", anchor: int | None = None) -> Symmetrisation:
    """Find positive diagonal D with A = D S (side="left") or A = S D (side="right").

    The d_i are propagated along a spanning tree from d_i A_ij = d_j A_ji
    (left) or d_j A_ij = d_i A_ji (right) and normalised to 1 at ``anchor``
    (default: the last node). Every non-tree edge must be consistent.
    """
    if isinstance(m, BorderedCartan):
        m = m.full
    a = m.entries if isinstance(m, CartanLike) else exact.to_matrix(m)
    n = len(a)
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    for i in range(n):
        for j in range(n):
            if a[i][j].is_zero() != a[j][i].is_zero():
                return Symmetrisation((), (), False, side, "zero pattern is not symmetric")
    anchor = n - 1 if anchor is None else anchor
    d: list[GoldenRat | None] = [None] * n
    for start in [anchor] + list(range(n)):
        if d[start] is not None:
            continue
        d[start] = ONE
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j or a[i][j].is_zero() or d[j] is not None:
                    continue
                # left: d_j = d_i A_ji / A_ij ; right: d_j = d_i A_ij / A_ji
                d[j] = d[i] * (a[j][i] / a[i][j] if side == "left" else a[i][j] / a[j][i])
                stack.append(j)
    dd = tuple(d)  # type: ignore[arg-type]
    for i in range(n):
        for j in range(n):
            lhs, rhs = (dd[j] * a[i][j], dd[i] * a[j][i]) if side == "left" else (dd[i] * a[i][j], dd[j] * a[j][i])
            if lhs != rhs:
                return Symmetrisation(dd, (), False, side, f"inconsistent cycle through ({i},{j})")
    if any(x.sign() <= 0 for x in dd):
        return Symmetrisation(dd, (), False, side, "D is not positive")
    if side == "left":
        s = tuple(tuple(a[i][j] / dd[i] for j in range(n)) for i in range(n))
    else:
        s = tuple(tuple(a[i][j] / dd[j] for j in range(n)) for i in range(n))
    if not exact.is_symmetric(s):  # pragma: no cover
        return Symmetrisation(dd, s, False, side, "S is not symmetric")
    return Symmetrisation(dd, s, True, side)


# -- lifts of H extensions -------------------------------------------------------


def lift_transposed(name: str) -> CartanLike:
    """L(A(H)^T): lift the transposed induced matrix back to the crystallographic base."""
    ext = transpose(named_extension(name))
    pmap = projection_map(ext.base, PERPENDICULAR if ext.conjugate else PARALLEL)
    return lift_bordered(pmap, affine_root(ext))


def lift_symmetric(group) -> CartanLike:
    """L(A(H_aff)) for the symmetric extension of H2, H3 or H4."""
    ext = symmetric_extension(group)
    return lift_bordered(projection_map(ext.base), affine_root(ext))


def induced_root_under_automorphism(ext: BorderedCartan, perm: Sequence[int], pmap: ProjectionMap) -> RootVector:
    """Induced affine root after relabelling the extended diagram by ``perm``.

    Node j of the relabelled diagram is old node perm[j] (node 0 affine). The
    new affine root is written in the new simple roots and pushed through
    the same folding pattern.
    """
    n = ext.rank
    old = [affine_root(ext).coords] + [RootVector.simple(ext.base, i).coords for i in range(n)]
    new = [old[perm[j]] for j in range(n + 1)]
    basis_t = exact.transpose(tuple(new[1:]))
    c = exact.solve(basis_t, new[0])
    return project(pmap, RootVector(ext.base, c))
