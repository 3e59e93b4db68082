"""Root systems, Cartan data and reflection groups for A4, D6, E8, H2, H3, H4.

Vectors are kept in simple-root coordinates. The bilinear form is normalised
so every simple root has norm 2, which makes the Gram matrix equal to the
Cartan matrix for all six (equal root length) groups.

Node labels follow the folding picture: E8 is the chain alpha1..alpha7 with
alpha8 attached to alpha5; D6 is the chain alpha1..alpha4 with alpha5 and
alpha6 both attached to alpha4; the H groups are chains whose single label-5
edge sits at the end.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import exact
from .exact import Matrix
from .golden import ONE, SIGMA, TAU, ZERO, GoldenRat, as_golden
from . import kernels

__all__ = [
    "GroupId",
    "RootVector",
    "CartanLike",
    "CoxeterDiagram",
    "ReflectionGroup",
    "cartan_matrix",
    "gram_matrix",
    "reflect",
    "reflection_matrix",
    "generate_root_system",
    "generate_group",
    "highest_root",
    "cartan_to_diagram",
    "diagram_automorphisms",
    "cartesian_embedding",
    "NonCoxeterEntryError",
    "border_from_root",
    "root_from_border",
    "bordered_matrix",
]

GROUP_SIZE_CAP = 20000


class GroupId(str, enum.Enum):
    A4 = "A4"
    D6 = "D6"
    E8 = "E8"
    H2 = "H2"
    H3 = "H3"
    H4 = "H4"

    @property
    def rank(self) -> int:
        return int(self.value[1])

    @property
    def family(self) -> str:
        return self.value[0]

    @property
    def crystallographic(self) -> bool:
        return self.family != "H"

    @property
    def labels(self) -> tuple[str, ...]:
        stem = "a" if self.family == "H" else "alpha"
        return tuple(f"{stem}{i}" for i in range(1, self.rank + 1))

    @classmethod
    def parse(cls, name) -> "GroupId":
        if isinstance(name, GroupId):
            return name
        try:
            return cls(str(name).strip().upper())
        except ValueError:
            raise ValueError(f"unknown group {name!r}; expected one of {[g.value for g in cls]}") from None

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class RootVector:
    """Coordinates of a vector in the simple-root basis of ``group``.

    ``basis == "conjugate"`` marks coordinates with respect to the Galois
    conjugate simple roots (the second invariant subspace).
    """

    group: GroupId
    coords: tuple[GoldenRat, ...]
    basis: str = "standard"

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(as_golden(c) for c in self.coords))
        if len(self.coords) != self.group.rank:
            raise ValueError(f"{self.group} vectors need {self.group.rank} coordinates, got {len(self.coords)}")

    @classmethod
    def simple(cls, group: GroupId, i: int) -> "RootVector":
        return cls(group, tuple(ONE if j == i else ZERO for j in range(group.rank)))

    @classmethod
    def zero(cls, group: GroupId) -> "RootVector":
        return cls(group, (ZERO,) * group.rank)

    def _check(self, other: "RootVector"):
        if other.group != self.group or other.basis != self.basis:
            raise ValueError("vectors live in different spaces")

    def __add__(self, other: "RootVector") -> "RootVector":
        self._check(other)
        return RootVector(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)), self.basis)

    def __sub__(self, other: "RootVector") -> "RootVector":
        self._check(other)
        return RootVector(self.group, tuple(a - b for a, b in zip(self.coords, other.coords)), self.basis)

    def __neg__(self) -> "RootVector":
        return RootVector(self.group, tuple(-a for a in self.coords), self.basis)

    def scale(self, c) -> "RootVector":
        c = as_golden(c)
        return RootVector(self.group, tuple(c * a for a in self.coords), self.basis)

    def __rmul__(self, c) -> "RootVector":
        return self.scale(c)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def conj(self) -> "RootVector":
        other = "standard" if self.basis == "conjugate" else "conjugate"
        return RootVector(self.group, tuple(c.conj() for c in self.coords), other)

    def gram(self) -> Matrix:
        g = gram_matrix(self.group).entries
        return exact.conj_matrix(g) if self.basis == "conjugate" else g

    def dot(self, other: "RootVector") -> GoldenRat:
        self._check(other)
        return exact.bilinear(self.coords, self.gram(), other.coords)

    def norm2(self) -> GoldenRat:
        return self.dot(self)

    def sort_key(self):
        return tuple(_order_key(c) for c in self.coords)

    def __lt__(self, other: "RootVector") -> bool:
        return _vector_cmp(self.coords, other.coords) < 0

    def to_json(self) -> dict:
        out = {"group": self.group.value, "coords": [c.to_json() for c in self.coords]}
        if self.basis != "standard":
            out["basis"] = self.basis
        return out

    @classmethod
    def from_json(cls, obj) -> "RootVector":
        return cls(
            GroupId.parse(obj["group"]),
            tuple(GoldenRat.from_json(c) for c in obj["coords"]),
            obj.get("basis", "standard"),
        )

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


class _OrderKey:
    __slots__ = ("x",)

    def __init__(self, x: GoldenRat):
        self.x = x

    def __lt__(self, other):
        return self.x < other.x

    def __eq__(self, other):
        return self.x == other.x


def _order_key(x: GoldenRat) -> _OrderKey:
    return _OrderKey(x)


def _vector_cmp(u: Sequence[GoldenRat], v: Sequence[GoldenRat]) -> int:
    for a, b in zip(u, v):
        if a != b:
            return -1 if a < b else 1
    return 0


def sort_vectors(vectors: Iterable[RootVector]) -> list[RootVector]:
    """Canonical order: lexicographic by numerical value of the coordinates."""
    return sorted(vectors, key=lambda v: tuple(_order_key(c) for c in v.coords))


@dataclass(frozen=True)
class CartanLike:
    """A square matrix over Q[tau] with node labels.

    ``kind`` is ``"cartan"``, ``"gram"`` or ``"bordered"``; ``notes`` carries
    annotations such as the non-standard flag on lifted matrices.
    """

    entries: Matrix
    labels: tuple[str, ...]
    kind: str = "cartan"
    base: GroupId | None = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", exact.to_matrix(self.entries))
        n = len(self.entries)
        if any(len(row) != n for row in self.entries):
            raise ValueError("matrix must be square")
        if len(self.labels) != n:
            raise ValueError("one label per node required")
        if self.kind not in ("cartan", "gram", "bordered"):
            raise ValueError(f"unknown matrix kind {self.kind!r}")

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij) -> GoldenRat:
        i, j = ij
        return self.entries[i][j]

    def det(self) -> GoldenRat:
        return exact.det(self.entries)

    def transpose(self) -> "CartanLike":
        return replace(self, entries=exact.transpose(self.entries))

    def conj(self) -> "CartanLike":
        return replace(self, entries=exact.conj_matrix(self.entries))

    def is_symmetric(self) -> bool:
        return exact.is_symmetric(self.entries)

    def with_notes(self, *notes: str) -> "CartanLike":
        return replace(self, notes=tuple(dict.fromkeys(self.notes + notes)))

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "labels": list(self.labels),
            "entries": [[x.to_json() for x in row] for row in self.entries],
        }
        if self.base is not None:
            out["base"] = self.base.value
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    @classmethod
    def from_json(cls, obj) -> "CartanLike":
        return cls(
            tuple(tuple(GoldenRat.from_json(x) for x in row) for row in obj["entries"]),
            tuple(obj["labels"]),
            obj.get("kind", "cartan"),
            GroupId.parse(obj["base"]) if obj.get("base") else None,
            tuple(obj.get("notes", ())),
        )

    def __str__(self) -> str:
        return exact.format_matrix(self.entries)


@dataclass(frozen=True)
class CoxeterDiagram:
    """Edge labels ``m_ij`` for node pairs; pairs with ``m = 2`` are omitted."""

    labels: tuple[str, ...]
    edges: dict = field(default_factory=dict)

    def m(self, i: int, j: int) -> Fraction:
        if i == j:
            return Fraction(1)
        return self.edges.get((min(i, j), max(i, j)), Fraction(2))

    def coxeter_matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        n = len(self.labels)
        return tuple(tuple(self.m(i, j) for j in range(n)) for i in range(n))

    def relation_orders(self) -> tuple[tuple[int, ...], ...]:
        """Orders of ``s_i s_j``: a label p/q acts as a relation of order p."""
        return tuple(tuple(x.numerator for x in row) for row in self.coxeter_matrix())

    def __str__(self) -> str:
        parts = [f"{self.labels[i]}-{self.labels[j]}:{m}" for (i, j), m in sorted(self.edges.items())]
        return " ".join(parts) if parts else "(no edges)"


_CHAINS = {
    GroupId.A4: [(0, 1), (1, 2), (2, 3)],
    GroupId.D6: [(0, 1), (1, 2), (2, 3), (3, 4), (3, 5)],
    GroupId.E8: [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)],
    GroupId.H2: [(0, 1)],
    GroupId.H3: [(0, 1), (1, 2)],
    GroupId.H4: [(0, 1), (1, 2), (2, 3)],
}


@lru_cache(maxsize=None)
def cartan_matrix(group) -> CartanLike:
    group = GroupId.parse(group)
    n = group.rank
    rows = [[GoldenRat(2) if i == j else ZERO for j in range(n)] for i in range(n)]
    edges = _CHAINS[group]
    for k, (i, j) in enumerate(edges):
        value = -TAU if group.family == "H" and k == len(edges) - 1 else GoldenRat(-1)
        rows[i][j] = rows[j][i] = value
    return CartanLike(tuple(map(tuple, rows)), group.labels, "cartan", group)


@lru_cache(maxsize=None)
def gram_matrix(group) -> CartanLike:
    """Gram matrix ``(alpha_i | alpha_j)`` with every simple root of norm 2."""
    group = GroupId.parse(group)
    return replace(cartan_matrix(group), kind="gram")


@lru_cache(maxsize=None)
def reflection_matrix(group, i: int) -> Matrix:
    """Matrix of ``s_i`` on simple-root coordinates: ``I - e_i A[i, :]``."""
    group = GroupId.parse(group)
    a = cartan_matrix(group).entries
    n = group.rank
    if not 0 <= i < n:
        raise IndexError(f"node index {i} out of range for {group}")
    return tuple(
        tuple((ONE if r == c else ZERO) - (a[i][c] if r == i else ZERO) for c in range(n)) for r in range(n)
    )


def reflect(i: int, v: RootVector) -> RootVector:
    """Simple reflection ``s_i`` applied to ``v``."""
    group = v.group
    if not 0 <= i < group.rank:
        raise IndexError(f"node index {i} out of range for {group}")
    a = cartan_matrix(group).entries
    if v.basis == "conjugate":
        a = exact.conj_matrix(a)
    shift = exact.dot(a[i], v.coords)
    coords = list(v.coords)
    coords[i] = coords[i] - shift
    return RootVector(group, tuple(coords), v.basis)


@lru_cache(maxsize=None)
def _root_system(group: GroupId) -> tuple[RootVector, ...]:
    n = group.rank
    seen = {RootVector.simple(group, i).coords for i in range(n)}
    frontier = list(seen)
    guard = 0
    while frontier:
        guard += 1
        if guard > 10_000:  # pragma: no cover
            raise RuntimeError(f"root system of {group} did not close")
        nxt = []
        for coords in frontier:
            v = RootVector(group, coords)
            for i in range(n):
                w = reflect(i, v).coords
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return tuple(sort_vectors(RootVector(group, c) for c in seen))


def generate_root_system(group) -> list[RootVector]:
    """All roots, as the closure of the simple roots under simple reflections."""
    return list(_root_system(GroupId.parse(group)))


def highest_root(group) -> RootVector:
    group = GroupId.parse(group)
    roots = _root_system(group)
    best = [r for r in roots if all(all(a >= b for a, b in zip(r.coords, s.coords)) for s in roots)]
    if len(best) != 1:  # pragma: no cover
        raise RuntimeError(f"no unique highest root for {group}")
    return best[0]


# -- matrices over Z[tau] as integer arrays ---------------------------------


def ztau_matrix_array(m: Matrix) -> np.ndarray:
    """(2, n, n) int64 array of rational and tau parts; entries must lie in Z[tau]."""
    if any(not x.in_ztau() for row in m for x in row):
        raise ValueError("matrix has entries outside Z[tau]")
    return np.array([[[x.a for x in row] for row in m], [[x.b for x in row] for row in m]], dtype=np.int64)


def array_to_matrix(arr: np.ndarray, den: int = 1) -> Matrix:
    n = arr.shape[-1]
    return tuple(tuple(GoldenRat(int(arr[0, i, j]), int(arr[1, i, j]), den) for j in range(n)) for i in range(n))


@dataclass(frozen=True, eq=False)
class ReflectionGroup:
    """A finite Coxeter group as integer matrices acting on simple-root coordinates.

    ``matrices`` has shape (order, 2, n, n): rational and tau parts of each
    element. Element 0 is the identity.
    """

    group: GroupId
    matrices: np.ndarray
    lengths: np.ndarray  # word length in the simple reflections

    def __len__(self) -> int:
        return self.matrices.shape[0]

    @property
    def determinants(self) -> np.ndarray:
        return np.where(self.lengths % 2 == 0, 1, -1)

    def rotations(self) -> np.ndarray:
        """Matrices of the orientation-preserving (even length) subgroup."""
        return self.matrices[self.lengths % 2 == 0]

    def __iter__(self):
        for k in range(len(self)):
            yield self.element(k)

    def element(self, k: int) -> Matrix:
        return array_to_matrix(self.matrices[k])

    @property
    def order(self) -> int:
        return len(self)


@lru_cache(maxsize=None)
def _group(group: GroupId, cap: int) -> ReflectionGroup:
    n = group.rank
    gens = [ztau_matrix_array(reflection_matrix(group, i)) for i in range(n)]
    ident = ztau_matrix_array(exact.identity(n))
    seen = {ident.tobytes()}
    elements = [ident]
    lengths = [0]
    frontier = ident[None]
    level = 0
    while frontier.shape[0]:
        level += 1
        fresh = []
        for g in gens:
            for m in kernels.ztau_matmul_right(frontier, g):
                key = m.tobytes()
                if key not in seen:
                    seen.add(key)
                    elements.append(m)
                    lengths.append(level)
                    fresh.append(m)
                    if len(elements) > cap:
                        raise RuntimeError(f"group {group} exceeds the size cap of {cap}")
        frontier = np.array(fresh, dtype=np.int64).reshape(-1, 2, n, n)
    return ReflectionGroup(group, np.array(elements, dtype=np.int64), np.array(lengths, dtype=np.int64))


def generate_group(group, cap: int = GROUP_SIZE_CAP) -> ReflectionGroup:
    """Breadth-first closure of the simple reflections under multiplication."""
    return _group(GroupId.parse(group), cap)


# -- diagrams ----------------------------------------------------------------


class NonCoxeterEntryError(ValueError):
    pass


_PRODUCT_TO_M = {
    GoldenRat(0): Fraction(2),
    GoldenRat(1): Fraction(3),
    TAU * TAU: Fraction(5),
    SIGMA * SIGMA: Fraction(5, 2),
}


def cartan_to_diagram(a: CartanLike) -> CoxeterDiagram:
    """Read Coxeter labels off the products ``A_ij A_ji``: 0, 1, tau^2, sigma^2."""
    if a.kind not in ("cartan", "bordered"):
        raise ValueError("diagram extraction needs a Cartan or bordered matrix")
    edges = {}
    for i, j in itertools.combinations(range(a.size), 2):
        prod = a[i, j] * a[j, i]
        if prod not in _PRODUCT_TO_M:
            raise NonCoxeterEntryError(
                f"non-Coxeter entry: A[{a.labels[i]},{a.labels[j]}]*A[{a.labels[j]},{a.labels[i]}] = {prod}"
            )
        m = _PRODUCT_TO_M[prod]
        if m != 2:
            edges[(i, j)] = m
    return CoxeterDiagram(a.labels, edges)


def diagram_automorphisms(a: CartanLike) -> list[tuple[int, ...]]:
    """All node permutations ``p`` with ``A[p(i), p(j)] == A[i, j]``, sorted."""
    import networkx as nx
    from networkx.algorithms.isomorphism import DiGraphMatcher

    g = nx.DiGraph()
    for i in range(a.size):
        g.add_node(i, diag=a[i, i])
    for i in range(a.size):
        for j in range(a.size):
            if i != j and not a[i, j].is_zero():
                g.add_edge(i, j, w=a[i, j])
    matcher = DiGraphMatcher(
        g, g, node_match=lambda x, y: x["diag"] == y["diag"], edge_match=lambda x, y: x["w"] == y["w"]
    )
    perms = set()
    for mapping in matcher.isomorphisms_iter():
        perms.add(tuple(mapping[i] for i in range(a.size)))
    return sorted(perms)


# -- Cartesian realisations of H3 and H4 ---------------------------------------


@dataclass(frozen=True)
class CartesianEmbedding:
    """Unit-norm Cartesian simple roots of H3 or H4 (rows of ``roots``)."""

    group: GroupId
    roots: Matrix

    def to_cartesian(self, v: RootVector) -> tuple[GoldenRat, ...]:
        if v.group != self.group:
            raise ValueError("group mismatch")
        dim = len(self.roots[0])
        return tuple(exact.dot(v.coords, [self.roots[i][k] for i in range(self.group.rank)]) for k in range(dim))

    def to_roots(self, x: Sequence) -> RootVector:
        """Express a Cartesian vector in simple-root coordinates."""
        basis = exact.transpose(self.roots)
        return RootVector(self.group, exact.solve(basis, exact.to_vector(x)))

    def gram(self) -> Matrix:
        return exact.matmul(self.roots, exact.transpose(self.roots))

    def axes(self) -> dict[str, RootVector]:
        """Symmetry axes in root coordinates: T2 (and T3, T5 for H3)."""
        if self.group == GroupId.H3:
            return {
                "T2": self.to_roots((1, 0, 0)),
                "T3": self.to_roots((TAU, 0, SIGMA)),
                "T5": self.to_roots((TAU, -1, 0)),
            }
        return {"T2": self.to_roots((1, 0, 0, 0))}


@lru_cache(maxsize=None)
def cartesian_embedding(group) -> CartesianEmbedding:
    group = GroupId.parse(group)
    half = GoldenRat(1, 0, 2)
    if group == GroupId.H3:
        rows = ((0, 1, 0), tuple(-half * x for x in (-SIGMA, ONE, TAU)), (0, 0, 1))
    elif group == GroupId.H4:
        rows = (
            tuple(half * x for x in (-SIGMA, -TAU, ZERO, GoldenRat(-1))),
            tuple(half * x for x in (ZERO, -SIGMA, -TAU, ONE)),
            tuple(half * x for x in (ZERO, ONE, -SIGMA, -TAU)),
            tuple(half * x for x in (ZERO, GoldenRat(-1), -SIGMA, TAU)),
        )
    else:
        raise ValueError(f"no Cartesian embedding in Q[tau] for {group}")
    return CartesianEmbedding(group, exact.to_matrix(rows))


# -- borders ---------------------------------------------------------------


class ZeroRootError(ValueError):
    pass


def border_from_root(gram: Matrix, root: Sequence[GoldenRat]) -> tuple[tuple[GoldenRat, ...], tuple[GoldenRat, ...]]:
    """Border ``(v, w)`` of the Cartan matrix extended by ``root``.

    ``v_i = 2(a0|a_i)/(a0|a0)`` is the new row and ``w_i = 2(a_i|a0)/(a_i|a_i)``
    the new column, matching ``A_ij = 2(a_i|a_j)/(a_i|a_i)``.
    """
    root = exact.to_vector(root)
    w_raw = exact.matvec(gram, root)
    n2 = exact.dot(root, w_raw)
    if n2.is_zero():
        raise ZeroRootError("affine root has zero norm")
    v = tuple(2 * x / n2 for x in w_raw)
    w = tuple(2 * x / gram[i][i] for i, x in enumerate(w_raw))
    return v, w


def root_from_border(gram: Matrix, v: Sequence, w: Sequence) -> tuple[GoldenRat, ...] | None:
    """The vector realising border ``(v, w)`` over ``gram``, or None if none does.

    The column fixes the inner products with the simple roots, so the root is
    ``G^-1 (w_i (a_i|a_i)/2)``; the row must then agree with its norm.
    """
    v, w = exact.to_vector(v), exact.to_vector(w)
    rhs = tuple(x * gram[i][i] / 2 for i, x in enumerate(w))
    root = exact.solve(gram, rhs)
    n2 = exact.dot(root, rhs)
    if n2.is_zero():
        return None
    if any(2 * x / n2 != y for x, y in zip(rhs, v)):
        return None
    return root


def bordered_matrix(base: Matrix, v: Sequence, w: Sequence, corner=2) -> Matrix:
    """``[[corner, v^T], [w, base]]`` with the new node at index 0."""
    v, w = exact.to_vector(v), exact.to_vector(w)
    rows = [(as_golden(corner),) + v]
    rows += [(w[i],) + tuple(base[i]) for i in range(len(base))]
    return tuple(rows)
