"""Geometric simplicial complexes of open simplices over the rationals.

A complex is a finite set of *open* simplices with exact rational vertex
coordinates.  Distinct open simplices must be pairwise disjoint subsets of
ambient space; closedness (all faces present) is a derived predicate, not an
invariant.  Simplices are stored as sorted tuples of vertex identifiers; the
sorted order fixes orientations everywhere downstream.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from . import linalg
from .linalg import F0, F1, Vec, vec
from .errors import (
    AffinelyDependent,
    DuplicateSimplex,
    NotSubcomplex,
    OverlappingSimplices,
    PointOutsidePolyhedron,
)

Point = Vec
Simplex = tuple[str, ...]  # sorted vertex identifiers


def simplex(vertices: Iterable[str]) -> Simplex:
    return tuple(sorted(vertices))


def sdim(s: Simplex) -> int:
    return len(s) - 1


def sname(s: Simplex) -> str:
    return "-".join(s)


def proper_faces(s: Simplex):
    """All nonempty proper faces, by vertex subsets."""
    for k in range(1, len(s)):
        yield from combinations(s, k)


def faces_with_self(s: Simplex):
    for k in range(1, len(s) + 1):
        yield from combinations(s, k)


class Complex:
    """Immutable set of open simplices with a shared vertex table."""

    def __init__(self, ambient_dim: int, vertices: dict[str, Point],
                 simplices: Iterable[Simplex]):
        self.ambient_dim = ambient_dim
        self.vertices = dict(vertices)
        self.simplices = frozenset(tuple(s) for s in simplices)
        self._locate_cache: dict[Point, tuple[Simplex, tuple[Fraction, ...]]] = {}

    # -- basic queries ------------------------------------------------------

    def points(self, s: Simplex) -> list[Point]:
        return [self.vertices[v] for v in s]

    def dim(self) -> int:
        return max((sdim(s) for s in self.simplices), default=-1)

    def barycenter(self, s: Simplex) -> Point:
        pts = self.points(s)
        w = Fraction(1, len(pts))
        return linalg.vcomb([w] * len(pts), pts)

    def vertex_ids(self) -> list[str]:
        return sorted(v for (v,) in (s for s in self.simplices if len(s) == 1))

    def by_dim(self, d: int) -> list[Simplex]:
        return sorted(s for s in self.simplices if sdim(s) == d)

    def __contains__(self, s) -> bool:
        return tuple(s) in self.simplices

    def __len__(self) -> int:
        return len(self.simplices)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Complex)
                and self.ambient_dim == other.ambient_dim
                and self.simplices == other.simplices
                and all(self.vertices[v] == other.vertices[v]
                        for s in self.simplices for v in s))

    def __hash__(self):
        return hash((self.ambient_dim, self.simplices))

    # -- closure / closedness ----------------------------------------------

    def closure(self) -> "Complex":
        closed = set()
        for s in self.simplices:
            closed.update(faces_with_self(s))
        return Complex(self.ambient_dim, self.vertices, closed)

    def is_closed(self) -> bool:
        return all(f in self.simplices for s in self.simplices
                   for f in proper_faces(s))

    # -- point location -----------------------------------------------------

    def try_locate(self, x: Point) -> Optional[tuple[Simplex, tuple[Fraction, ...]]]:
        hit = self._locate_cache.get(x)
        if hit is not None:
            return hit
        for s in sorted(self.simplices):
            coords = linalg.barycentric_coords(self.points(s), x)
            if coords is not None and all(c > 0 for c in coords):
                self._locate_cache[x] = (s, tuple(coords))
                return s, tuple(coords)
        return None

    def locate(self, x: Point) -> tuple[Simplex, tuple[Fraction, ...]]:
        hit = self.try_locate(x)
        if hit is None:
            raise PointOutsidePolyhedron(f"point {x} is not in the polyhedron")
        return hit

    def point_in_closure(self, s: Simplex, x: Point) -> bool:
        coords = linalg.barycentric_coords(self.points(s), x)
        return coords is not None and all(c >= 0 for c in coords)

    def simplex_inside(self, small: Sequence[Point], s: Simplex) -> bool:
        """Exact test: is the open simplex on `small` contained in open s?

        Containment holds iff every vertex of `small` lies in closure(s) and
        the centroid of `small` lies in open s (support of barycentric
        weights is constant over a relatively open simplex).
        """
        spts = self.points(s)
        support = [False] * len(spts)
        for p in small:
            coords = linalg.barycentric_coords(spts, p)
            if coords is None or any(c < 0 for c in coords):
                return False
            for i, c in enumerate(coords):
                if c > 0:
                    support[i] = True
        return all(support)

    # -- star / core / skeleton --------------------------------------------

    def star(self, target) -> "SubcomplexRef":
        """Simplices whose closure meets the target (a SubcomplexRef of this
        complex or an iterable of Points)."""
        hit: set[Simplex] = set()
        if isinstance(target, SubcomplexRef):
            open_sets = [(self.points(t), True) for t in target.members]
        else:
            pts = [vec(p) for p in target]
            for p in pts:
                if self.try_locate(p) is None:
                    raise PointOutsidePolyhedron(f"point {p} is not in the polyhedron")
            open_sets = [([p], True) for p in pts]
        for s in self.simplices:
            spts = self.points(s)
            for opts, strict in open_sets:
                if linalg.convex_positions_intersect(spts, opts,
                                                     strict_a=False, strict_b=strict):
                    hit.add(s)
                    break
        return SubcomplexRef(self, hit)

    def closed_star(self, target) -> "SubcomplexRef":
        st = self.star(target)
        closed = set(st.members)
        for s in st.members:
            for f in proper_faces(s):
                if f in self.simplices:
                    closed.add(f)
        return SubcomplexRef(self, closed)

    def core(self) -> "SubcomplexRef":
        """Maximal subcomplex whose realization is a closed set.

        Computed as the greatest fixed point of face-completeness: a simplex
        survives only while every proper face survives with it.
        """
        surviving = set(self.simplices)
        changed = True
        while changed:
            changed = False
            for s in sorted(surviving, key=len, reverse=True):
                if any(f not in surviving for f in proper_faces(s)):
                    surviving.discard(s)
                    changed = True
        return SubcomplexRef(self, surviving)

    def skeleton(self, m: int, union_with: Optional["SubcomplexRef"] = None) -> "SubcomplexRef":
        members = {s for s in self.simplices if sdim(s) <= m}
        if union_with is not None:
            members |= set(union_with.members)
        return SubcomplexRef(self, members)

    def subcomplex(self, members: Iterable[Simplex]) -> "SubcomplexRef":
        return SubcomplexRef(self, members)

    def restrict(self, members: Iterable[Simplex]) -> "Complex":
        """Stand-alone Complex on a subset of simplices."""
        ms = [tuple(m) for m in members]
        used = {v for s in ms for v in s}
        return Complex(self.ambient_dim,
                       {v: p for v, p in self.vertices.items() if v in used}, ms)


class SubcomplexRef:
    """A subset of a parent complex's simplices."""

    def __init__(self, parent: Complex, members: Iterable[Simplex]):
        self.parent = parent
        self.members = frozenset(tuple(m) for m in members)
        missing = self.members - parent.simplices
        if missing:
            raise NotSubcomplex(f"not simplices of the parent: {sorted(missing)}")

    def as_complex(self) -> Complex:
        return self.parent.restrict(self.members)

    def is_closed(self) -> bool:
        return all(f in self.members for s in self.members for f in proper_faces(s))

    def __contains__(self, s) -> bool:
        return tuple(s) in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __eq__(self, other):
        return (isinstance(other, SubcomplexRef)
                and self.parent is other.parent and self.members == other.members)

    def __hash__(self):
        return hash(self.members)


def validate(ambient_dim: int, vertex_coords: dict[str, Sequence],
             simplex_list: Sequence[Sequence[str]],
             check_disjoint: bool = True) -> Complex:
    """Build a Complex, checking every structural invariant exactly.

    Raises DuplicateSimplex / AffinelyDependent / OverlappingSimplices with
    the offending simplices named.
    """
    verts = {v: vec(c) for v, c in vertex_coords.items()}
    for v, p in verts.items():
        if len(p) != ambient_dim:
            raise AffinelyDependent(
                f"vertex {v} has {len(p)} coordinates, ambient dimension is {ambient_dim}")
    by_point: dict[Point, str] = {}
    for v in sorted(verts):
        p = verts[v]
        if p in by_point:
            raise OverlappingSimplices(
                f"vertices {by_point[p]} and {v} share coordinates {p}")
        by_point[p] = v

    seen: set[Simplex] = set()
    simplices: list[Simplex] = []
    for raw in simplex_list:
        if len(set(raw)) != len(raw):
            raise AffinelyDependent(f"repeated vertex in simplex {raw}")
        s = simplex(raw)
        if s in seen:
            raise DuplicateSimplex(f"simplex {sname(s)} declared twice")
        seen.add(s)
        for v in s:
            if v not in verts:
                raise AffinelyDependent(f"simplex {sname(s)} uses unknown vertex {v}")
        simplices.append(s)

    K = Complex(ambient_dim, verts, simplices)
    for s in simplices:
        if not linalg.affinely_independent(K.points(s)):
            raise AffinelyDependent(f"vertices of {sname(s)} are affinely dependent")
    if check_disjoint:
        check_pairwise_disjoint(K)
    return K


def check_pairwise_disjoint(K: Complex) -> None:
    sims = sorted(K.simplices)
    boxes = {}
    for s in sims:
        pts = K.points(s)
        boxes[s] = ([min(p[i] for p in pts) for i in range(K.ambient_dim)],
                    [max(p[i] for p in pts) for i in range(K.ambient_dim)])
    for a, b in combinations(sims, 2):
        (alo, ahi), (blo, bhi) = boxes[a], boxes[b]
        if any(ahi[i] < blo[i] or bhi[i] < alo[i] for i in range(K.ambient_dim)):
            continue
        union = sorted(set(a) | set(b))
        if linalg.affinely_independent([K.vertices[v] for v in union]):
            continue  # both are faces of one geometric simplex
        if linalg.convex_positions_intersect(K.points(a), K.points(b)):
            raise OverlappingSimplices(
                f"open simplices {sname(a)} and {sname(b)} intersect")
