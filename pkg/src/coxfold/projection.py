"""Folding projections E8->H4, D6->H3, A4->H2 and their inverse lift.

A projection pairs every source node with a partner: the plain node of pair i
contributes to target root a_i directly, the tau-node contributes tau*a_i.
The perpendicular projection uses the same pairing with sigma in place of tau
and lands in the Galois-conjugate basis.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

from . import exact
from .coxeter import (
    CartanLike,
    GroupId,
    RootVector,
    border_from_root,
    bordered_matrix,
    cartan_matrix,
    gram_matrix,
)
from .golden import SIGMA, TAU, ZERO, GoldenRat

__all__ = ["ProjectionMap", "derive_maps", "projection_map", "project", "lift", "lift_bordered"]

PARALLEL = "parallel"
PERPENDICULAR = "perpendicular"

# E8 pairing, 1-based (plain node, tau-node) for a1..a4
_E8_PAIRS = ((1, 7), (2, 6), (3, 5), (8, 4))
# surviving E8 nodes for the sub-foldings, in the order of the sub-diagram labels
_SUBDIAGRAMS = {GroupId.D6: (2, 3, 4, 5, 8, 6), GroupId.A4: (3, 4, 5, 8)}
_TARGETS = {GroupId.E8: GroupId.H4, GroupId.D6: GroupId.H3, GroupId.A4: GroupId.H2}


@dataclass(frozen=True)
class ProjectionMap:
    source: GroupId
    target: GroupId
    pairs: tuple[tuple[int, int], ...]  # 1-based (plain, tau) node numbers
    subspace: str = PARALLEL

    def __post_init__(self):
        if self.subspace not in (PARALLEL, PERPENDICULAR):
            raise ValueError(f"subspace must be {PARALLEL!r} or {PERPENDICULAR!r}")
        nodes = sorted(i for p in self.pairs for i in p)
        if nodes != list(range(1, self.source.rank + 1)) or len(self.pairs) != self.target.rank:
            raise ValueError("pairs must cover every source node exactly once, one pair per target node")

    @property
    def unit(self) -> GoldenRat:
        return TAU if self.subspace == PARALLEL else SIGMA

    @property
    def basis(self) -> str:
        return "standard" if self.subspace == PARALLEL else "conjugate"

    def with_subspace(self, subspace: str) -> "ProjectionMap":
        return replace(self, subspace=_norm_subspace(subspace))

    def matrix(self) -> exact.Matrix:
        """Target-by-source matrix of the projection on simple-root coordinates."""
        rows = [[ZERO] * self.source.rank for _ in range(self.target.rank)]
        for i, (p, q) in enumerate(self.pairs):
            rows[i][p - 1] = GoldenRat(1)
            rows[i][q - 1] = self.unit
        return exact.to_matrix(rows)

    def to_json(self) -> dict:
        return {
            "source": self.source.value,
            "target": self.target.value,
            "pairs": [list(p) for p in self.pairs],
            "subspace": self.subspace,
        }


def _norm_subspace(s: str) -> str:
    key = s.strip().lower()
    if key in ("par", "parallel", "pi_par"):
        return PARALLEL
    if key in ("perp", "perpendicular", "pi_perp"):
        return PERPENDICULAR
    raise ValueError(f"unknown subspace {s!r}; use par or perp")


def project(pmap: ProjectionMap, v: RootVector) -> RootVector:
    if v.group != pmap.source:
        raise ValueError(f"expected a {pmap.source} vector, got {v.group}")
    if v.basis != "standard":
        raise ValueError("source vectors must be in the standard basis")
    u = pmap.unit
    coords = tuple(v.coords[p - 1] + u * v.coords[q - 1] for p, q in pmap.pairs)
    return RootVector(pmap.target, coords, pmap.basis)


def lift(pmap: ProjectionMap, v: RootVector) -> RootVector:
    """Inverse of ``project``: a + b*tau on a_i goes to a on the plain node, b on the tau-node.

    For the perpendicular map the coefficient is read as p + q*sigma, so
    q = -b and p = a + b.
    """
    if v.group != pmap.target:
        raise ValueError(f"expected a {pmap.target} vector, got {v.group}")
    if v.basis != pmap.basis:
        raise ValueError(f"vector is in the {v.basis} basis, map expects {pmap.basis}")
    out = [ZERO] * pmap.source.rank
    for c, (p, q) in zip(v.coords, pmap.pairs):
        a, b = c.rational_part, c.tau_part
        if pmap.subspace == PARALLEL:
            out[p - 1], out[q - 1] = GoldenRat(a), GoldenRat(b)
        else:
            out[p - 1], out[q - 1] = GoldenRat(a + b), GoldenRat(-b)
    return RootVector(pmap.source, tuple(out))


def _is_nonstandard(v, w) -> list[str]:
    notes = []
    if any(x.sign() > 0 for x in v + w):
        notes.append("nonstandard: positive entries")
    if any(not x.is_integer() for x in v + w):
        notes.append("nonstandard: fractional entries")
    return notes


def lift_bordered(pmap: ProjectionMap, affine_root: RootVector) -> CartanLike:
    """Bordered source Cartan matrix whose extra node is the lifted affine root."""
    root = lift(pmap, affine_root)
    gram = gram_matrix(pmap.source).entries
    v, w = border_from_root(gram, root.coords)
    labels = ("alpha0",) + pmap.source.labels
    notes = _is_nonstandard(v, w)
    return CartanLike(
        bordered_matrix(cartan_matrix(pmap.source).entries, v, w), labels, "bordered", pmap.source, tuple(notes)
    )


def _restrict(source: GroupId) -> ProjectionMap:
    if source == GroupId.E8:
        return ProjectionMap(GroupId.E8, GroupId.H4, _E8_PAIRS)
    keep = _SUBDIAGRAMS[source]
    relabel = {old: new for new, old in enumerate(keep, start=1)}
    pairs = tuple((relabel[p], relabel[q]) for p, q in _E8_PAIRS if p in relabel and q in relabel)
    return ProjectionMap(source, _TARGETS[source], pairs)


def _check_simple_roots(pmap: ProjectionMap) -> None:
    # every source simple root must land on a_i or tau*a_i
    a_src = cartan_matrix(pmap.source).entries
    a_tgt = cartan_matrix(pmap.target).entries
    images = {}
    for i in range(pmap.source.rank):
        img = project(pmap, RootVector.simple(pmap.source, i)).coords
        nz = [k for k, c in enumerate(img) if not c.is_zero()]
        if len(nz) != 1 or img[nz[0]] not in (GoldenRat(1), TAU):
            raise RuntimeError(f"{pmap.source} node {i + 1} does not project onto a simple root or its tau-multiple")
        images[i] = (nz[0], img[nz[0]])
    # and the Gram forms must agree: (pi x | pi y) = (x|y) + tau * (something)
    for i in range(pmap.source.rank):
        for j in range(pmap.source.rank):
            (k, s), (l, t) = images[i], images[j]
            projected = s * t * a_tgt[k][l]
            if projected.rational_part != a_src[i][j].rational_part:
                raise RuntimeError(f"{pmap.source} pairing does not preserve the rational part of the form")


@lru_cache(maxsize=None)
def derive_maps() -> tuple[ProjectionMap, ProjectionMap, ProjectionMap]:
    """The three parallel projections, D6 and A4 obtained by restricting E8."""
    maps = tuple(_restrict(g) for g in (GroupId.E8, GroupId.D6, GroupId.A4))
    for m in maps:
        _check_simple_roots(m)
    return maps


def projection_map(group, subspace: str = PARALLEL) -> ProjectionMap:
    """Projection with the given source or target group."""
    group = GroupId.parse(group)
    for m in derive_maps():
        if group in (m.source, m.target):
            return m.with_subspace(subspace)
    raise ValueError(f"no projection involves {group}")
