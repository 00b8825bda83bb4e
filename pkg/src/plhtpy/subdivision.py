"""Barycentric subdivision, subdivision witnesses, and normal PL
homeomorphisms.

A subdivision is always carried as a witness: the fine complex, the coarse
complex, and for each fine simplex the coarse simplex whose interior
contains it.  Verification is exact — containment by barycentric support and
coverage by rational relative volumes — never by sampling.

Barycenter vertices are named ``<v1>.<v2>...<vk>^bary`` (dot-joined vertex
identifiers of the subdivided simplex); user vertex identifiers must not
contain ``-``, ``.`` or whitespace so that generated names and serialized
simplex names stay unambiguous.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from . import linalg
from .complexes import (Complex, SubcomplexRef, Simplex, faces_with_self,
                        proper_faces, sdim, simplex, sname)
from .errors import NotClosed, NotNormal, NotNormalInput, NotSubcomplex

F1 = Fraction(1)


def bary_name(s: Simplex) -> str:
    return ".".join(s) + "^bary"


class SubdivisionWitness:
    """fine refines coarse; carrier(tau) is the coarse simplex with
    open(tau) inside its interior."""

    def __init__(self, fine: Complex, coarse: Complex,
                 carrier: dict[Simplex, Simplex]):
        self.fine = fine
        self.coarse = coarse
        self.carrier = {tuple(k): tuple(v) for k, v in carrier.items()}

    def compose(self, finer: "SubdivisionWitness") -> "SubdivisionWitness":
        """Witness for `finer.fine` refining self.coarse (finer refines
        self.fine)."""
        carrier = {t: self.carrier[finer.carrier[t]]
                   for t in finer.fine.simplices}
        return SubdivisionWitness(finer.fine, self.coarse, carrier)


def identity_witness(K: Complex) -> SubdivisionWitness:
    return SubdivisionWitness(K, K, {s: s for s in K.simplices})


def barycentric_subdivide(K: Complex) -> SubdivisionWitness:
    """First barycentric subdivision of a closed complex.

    Fine simplices are chains of proper inclusions of coarse simplices; the
    chain's largest element is the carrier.  Vertices of K keep their names;
    a simplex of dimension >= 1 contributes the vertex ``bary_name``.
    """
    if not K.is_closed():
        raise NotClosed("barycentric subdivision requires a closed complex")
    vname = {s: (s[0] if len(s) == 1 else bary_name(s)) for s in K.simplices}
    verts = {vname[s]: K.barycenter(s) for s in K.simplices}
    fine: dict[Simplex, Simplex] = {}

    def grow(chain: tuple[Simplex, ...]):
        fine[simplex(vname[s] for s in chain)] = chain[-1]
        top = chain[-1]
        for nxt in sorted(K.simplices):
            if len(nxt) > len(top) and set(top) < set(nxt):
                grow(chain + (nxt,))

    for s in sorted(K.simplices):
        grow((s,))
    fine_complex = Complex(K.ambient_dim, verts, fine.keys())
    return SubdivisionWitness(fine_complex, K, fine)


def iterated_subdivision(K: Complex, rounds: int) -> SubdivisionWitness:
    w = identity_witness(K)
    for _ in range(rounds):
        w = w.compose(barycentric_subdivide(w.fine))
    return w


def relative_volume(coarse_pts, fine_pts) -> Fraction:
    """vol(fine simplex) / vol(coarse simplex), both of the same dimension,
    via the determinant of the barycentric coordinate matrix."""
    rows = []
    for p in fine_pts:
        coords = linalg.barycentric_coords(coarse_pts, p)
        if coords is None:
            return Fraction(0)
        rows.append(list(coords))
    n = len(rows)
    det = F1
    m = [list(r) for r in rows]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                for j in range(c, n):
                    m[i][j] -= f * m[c][j]
    return abs(det)


def verify_subdivision(w: SubdivisionWitness):
    """(ok, violations): exact containment per carrier plus exact coverage
    of every coarse simplex by same-dimension fine pieces."""
    violations = []
    by_coarse: dict[Simplex, list[Simplex]] = {s: [] for s in w.coarse.simplices}
    for t in sorted(w.fine.simplices):
        c = w.carrier.get(t)
        if c is None or c not in w.coarse.simplices:
            violations.append((t, c, "carrier missing"))
            continue
        if not w.coarse.simplex_inside(w.fine.points(t), c):
            violations.append((t, c, "not inside carrier"))
            continue
        by_coarse[c].append(t)
    for c in sorted(w.coarse.simplices):
        cpts = w.coarse.points(c)
        total = sum((relative_volume(cpts, w.fine.points(t))
                     for t in by_coarse[c] if sdim(t) == sdim(c)),
                    Fraction(0))
        if total != 1:
            violations.append((None, c, f"coverage {total} != 1"))
    return (not violations), violations


class PLHomeo:
    """PL self-homeomorphism of |K|: a subdivision K' of K plus exact image
    points for the fine vertices and a target carrier per fine simplex."""

    def __init__(self, witness: SubdivisionWitness, vertex_image: dict,
                 target_carrier: dict[Simplex, Simplex]):
        self.witness = witness
        self.vertex_image = {v: linalg.vec(p) for v, p in vertex_image.items()}
        self.target_carrier = {tuple(k): tuple(v)
                               for k, v in target_carrier.items()}

    def image_points(self, t: Simplex):
        return [self.vertex_image[v] for v in t]

    def evaluate(self, x):
        t, coords = self.witness.fine.locate(linalg.vec(x))
        return linalg.vcomb(coords, self.image_points(t))


def identity_homeo(K: Complex) -> PLHomeo:
    w = identity_witness(K)
    return PLHomeo(w, {v: K.vertices[v] for s in K.simplices for v in s},
                   dict(w.carrier))


def identity_homeo_on(w: SubdivisionWitness) -> PLHomeo:
    """The identity of |K| presented on an arbitrary subdivision."""
    verts = {v: w.fine.vertices[v] for s in w.fine.simplices for v in s}
    return PLHomeo(w, verts, dict(w.carrier))


class NormalityReport:
    def __init__(self, partitions_simplices, is_subdivision,
                 carrier_respecting, violations, partitions_targets=None):
        self.partitions_simplices = partitions_simplices
        self.is_subdivision = is_subdivision
        self.carrier_respecting = carrier_respecting
        self.violations = list(violations)
        self.partitions_targets = partitions_targets

    @property
    def normal(self) -> bool:
        ok = (self.partitions_simplices and self.is_subdivision
              and self.carrier_respecting)
        if self.partitions_targets is not None:
            ok = ok and self.partitions_targets
        return ok


def verify_normal(phi: PLHomeo, partition_targets=None) -> NormalityReport:
    """Check the three normality conditions of a PL homeomorphism.

    (1) images of fine simplices partition each coarse simplex, (2) the
    domain is a genuine subdivision, (3) each fine simplex maps into the
    interior of its own carrier.  `partition_targets`, if given, is a
    collection of fine-simplex sets whose unions must be unions of image
    pieces — here each set must simply be a subcomplex-saturated set of
    fine simplices (exactness of the partition is then automatic).
    """
    w = phi.witness
    violations = []
    sub_ok, sub_violations = verify_subdivision(w)
    violations.extend(sub_violations)

    carrier_ok = True
    part_ok = True
    images: dict[Simplex, list[tuple[Simplex, list]]] = \
        {s: [] for s in w.coarse.simplices}
    for t in sorted(w.fine.simplices):
        ipts = phi.image_points(t)
        if not linalg.affinely_independent(ipts):
            part_ok = False
            violations.append((t, None, "image degenerate"))
            continue
        car = w.carrier.get(t)
        if car is not None and not w.coarse.simplex_inside(ipts, car):
            carrier_ok = False
            violations.append((t, car, "image leaves carrier"))
        tgt = phi.target_carrier.get(t)
        if tgt is None or tgt not in w.coarse.simplices \
                or not w.coarse.simplex_inside(ipts, tgt):
            part_ok = False
            violations.append((t, tgt, "image not inside target carrier"))
            continue
        images[tgt].append((t, ipts))
    for c in sorted(w.coarse.simplices):
        cpts = w.coarse.points(c)
        tops = [(t, ipts) for t, ipts in images[c] if len(ipts) == len(c)]
        total = sum((relative_volume(cpts, ipts) for _, ipts in tops),
                    Fraction(0))
        if total != 1:
            part_ok = False
            violations.append((None, c, f"image coverage {total} != 1"))
        for (t1, p1), (t2, p2) in combinations(tops, 2):
            if linalg.convex_positions_intersect(p1, p2):
                part_ok = False
                violations.append((t1, t2, "images overlap"))

    targets_ok = None
    if partition_targets is not None:
        targets_ok = True
        for target in partition_targets:
            members = frozenset(tuple(s) for s in
                                getattr(target, "members", target))
            if not members <= w.fine.simplices:
                targets_ok = False
                violations.append((None, None, "target not fine-saturated"))
    return NormalityReport(part_ok, sub_ok, carrier_ok, violations, targets_ok)


def extend_normal(K: Complex, K_Z: SubcomplexRef, phi0: PLHomeo) -> PLHomeo:
    """Extend a normal homeomorphism over a closed subcomplex to all of K.

    Skeleton induction: simplices outside K_Z are coned from their
    barycenter over the already-refined boundary; the cone point maps to
    itself and the cone map is the affine extension of the boundary map.
    A simplex whose boundary ends up unrefined (and hence fixed pointwise)
    is kept whole.
    """
    if not K.is_closed():
        raise NotClosed("extension requires a closed complex")
    if not K_Z.is_closed():
        raise NotSubcomplex("K_Z must be a closed subcomplex")
    if phi0.witness.coarse != K_Z.as_complex():
        raise NotSubcomplex("phi0 is not a homeomorphism over K_Z")
    if not verify_normal(phi0).normal:
        raise NotNormalInput("phi0 is not normal over K_Z")

    verts = dict(phi0.witness.fine.vertices)
    fine: dict[Simplex, Simplex] = dict(phi0.witness.carrier)
    image = dict(phi0.vertex_image)
    target = dict(phi0.target_carrier)
    for s in K.simplices:
        if len(s) == 1 and s not in K_Z:
            verts[s[0]] = K.vertices[s[0]]
            fine[s] = s
            image[s[0]] = K.vertices[s[0]]
            target[s] = s

    todo = sorted((s for s in K.simplices
                   if len(s) > 1 and s not in K_Z), key=lambda s: (len(s), s))
    for s in todo:
        boundary_fine = sorted(t for t, c in fine.items()
                               if set(c) < set(s))
        plain = set(boundary_fine) == set(proper_faces(s))
        if plain:
            # boundary unrefined, hence fixed pointwise: keep s whole
            fine[s] = s
            target[s] = s
            continue
        b = bary_name(s)
        bpt = K.barycenter(s)
        verts[b] = bpt
        image[b] = bpt
        fine[(b,)] = s
        target[(b,)] = s
        for t in boundary_fine:
            cone = simplex(t + (b,))
            fine[cone] = s
            target[cone] = s

    fine_complex = Complex(K.ambient_dim, verts, fine.keys())
    witness = SubdivisionWitness(fine_complex, K, fine)
    return PLHomeo(witness, image, target)


def canonical_homotopy(phi: PLHomeo):
    """One-step straight-line homotopy certificate from the identity of |K|
    to a normal homeomorphism; each fine simplex and its image share the
    closure of the simplex's carrier."""
    from . import plmaps
    report = verify_normal(phi)
    if not report.normal:
        raise NotNormal(f"not a normal homeomorphism: {report.violations}")
    w = phi.witness
    f = plmaps.identity_map_on(w)
    g = plmaps.PLMap(w.coarse, w.coarse, w, phi.vertex_image,
                     dict(w.carrier))
    fixed = w.coarse.subcomplex(())
    step = plmaps.HomotopyStep(f, g, identity_witness(w.fine),
                               {t: w.carrier[t] for t in w.fine.simplices})
    return plmaps.HomotopyCertificate([step], fixed)
