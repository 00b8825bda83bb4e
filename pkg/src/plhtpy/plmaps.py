"""Piecewise-linear maps, simplicial approximation, and certified
homotopies.

A PLMap is stored as a subdivision of its domain together with exact image
points for the fine vertices and, per fine simplex, a closed codomain
simplex containing the image of its closure.  A homotopy between two such
maps is certified per simplex: if both images of a simplex closure lie in
one closed codomain simplex, the straight-line segment between them stays
inside the polyhedron by convexity.  Certificates carry these witnesses so
they can be re-verified independently of how they were produced.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg, subdivision
from .complexes import (Complex, SubcomplexRef, Simplex, faces_with_self,
                        proper_faces, sdim, simplex, sname)
from .errors import (BarrierViolation, CarrierClash, FixedSetMismatch,
                     Incompatible, NotClosed, NotFull, NotSimplicial,
                     NotSubcomplex, RoundsExhausted)
from .subdivision import (SubdivisionWitness, barycentric_subdivide,
                          identity_witness)

F0 = Fraction(0)
F1 = Fraction(1)


def minimal_carrier(L: Complex, points) -> Simplex | None:
    """Smallest closed simplex of L containing all the points, or None."""
    for s in sorted(L.simplices, key=lambda s: (len(s), s)):
        if all(L.point_in_closure(s, p) for p in points):
            return s
    return None


def carrier_face(L: Complex, sigma: Simplex, points) -> Simplex | None:
    """Smallest face of closed sigma containing the points (all of which
    must lie in its closure); the unique minimal closed carrier."""
    spts = L.points(sigma)
    support = set()
    for p in points:
        coords = linalg.barycentric_coords(spts, p)
        if coords is None or any(c < 0 for c in coords):
            return None
        support.update(i for i, c in enumerate(coords) if c > 0)
    return simplex(sigma[i] for i in support)


class PLMap:
    """PL map |K| -> |L| with exact per-simplex carrier witnesses."""

    def __init__(self, domain: Complex, codomain: Complex,
                 dom_subdivision: SubdivisionWitness, vertex_image: dict,
                 target_carrier: dict[Simplex, Simplex], check: bool = True):
        self.domain = domain
        self.codomain = codomain
        self.dom_subdivision = dom_subdivision
        self.vertex_image = {v: linalg.vec(p) for v, p in vertex_image.items()}
        self.target_carrier = {tuple(k): tuple(v)
                               for k, v in target_carrier.items()}
        if check:
            self._check()

    @property
    def fine(self) -> Complex:
        return self.dom_subdivision.fine

    def _check(self):
        if not self.codomain.is_closed():
            raise NotClosed("codomain must be closed")
        for t in self.fine.simplices:
            c = self.target_carrier.get(t)
            if c is None or c not in self.codomain.simplices:
                raise CarrierClash(f"no target carrier for {sname(t)}")
            for v in t:
                if not self.codomain.point_in_closure(c, self.vertex_image[v]):
                    raise CarrierClash(
                        f"image of vertex {v} outside carrier {sname(c)}")

    def image_points(self, t: Simplex):
        return [self.vertex_image[v] for v in t]

    def evaluate(self, x):
        t, coords = self.fine.locate(linalg.vec(x))
        return linalg.vcomb(coords, self.image_points(t))

    def simplicial_vertex_map(self) -> dict | None:
        """Vertex-to-vertex map if the map is simplicial, else None."""
        coord_to_vertex = {self.codomain.vertices[v[0]]: v[0]
                           for v in self.codomain.simplices if len(v) == 1}
        vmap = {}
        for t in self.fine.simplices:
            for v in t:
                w = coord_to_vertex.get(self.vertex_image[v])
                if w is None:
                    return None
                vmap[v] = w
        for t in self.fine.simplices:
            img = simplex(set(vmap[v] for v in t))
            if img not in self.codomain.simplices:
                return None
        return vmap

    def is_simplicial(self) -> bool:
        return self.simplicial_vertex_map() is not None


def identity_map_on(w: SubdivisionWitness) -> PLMap:
    verts = {v: w.fine.vertices[v] for s in w.fine.simplices for v in s}
    return PLMap(w.coarse, w.coarse, w, verts, dict(w.carrier))


def identity_map(K: Complex) -> PLMap:
    return identity_map_on(identity_witness(K))


def constant_map(K: Complex, L: Complex, point) -> PLMap:
    point = linalg.vec(point)
    c, _ = L.locate(point)
    w = identity_witness(K)
    verts = {v: point for s in K.simplices for v in s}
    return PLMap(K, L, w, verts, {s: c for s in K.simplices})


def simplicial_map(K: Complex, L: Complex, vmap: dict[str, str]) -> PLMap:
    """Affine extension of a vertex-to-vertex assignment."""
    w = identity_witness(K)
    return simplicial_map_on(w, L, vmap)


def simplicial_map_on(w: SubdivisionWitness, L: Complex,
                      vmap: dict[str, str]) -> PLMap:
    verts = {}
    carrier = {}
    for t in w.fine.simplices:
        img = simplex(set(vmap[v] for v in t))
        if img not in L.simplices:
            raise NotSimplicial(
                f"image {sname(img)} of {sname(t)} is not a simplex")
        carrier[t] = img
        for v in t:
            verts[v] = L.vertices[vmap[v]]
    return PLMap(w.coarse, L, w, verts, carrier)


def subdivide_map(f: PLMap) -> PLMap:
    """Same map on the once-more barycentrically subdivided domain, with
    carriers recomputed as minimal faces of the parent carriers."""
    step = barycentric_subdivide(f.fine)
    w = f.dom_subdivision.compose(step)
    verts = {}
    for s in step.fine.simplices:
        for v in s:
            if v not in verts:
                verts[v] = f.evaluate(step.fine.vertices[v])
    carrier = {}
    for t in step.fine.simplices:
        parent = f.target_carrier[step.carrier[t]]
        c = carrier_face(f.codomain, parent, [verts[v] for v in t])
        carrier[t] = c if c is not None else parent
    return PLMap(f.domain, f.codomain, w, verts, carrier, check=False)


def check_star_condition(f: PLMap, v: str) -> str | None:
    """A codomain vertex w whose closed star absorbs the image of the open
    star of fine vertex v, tested carrier-wise; prefers w = f(v) when f(v)
    is itself a vertex."""
    incident = [t for t in f.fine.simplices if v in t]
    candidates = None
    for t in incident:
        verts = set(f.target_carrier[t])
        candidates = verts if candidates is None else candidates & verts
    if not candidates:
        return None
    fv = f.vertex_image[v]
    for w in sorted(candidates):
        if f.codomain.vertices[w] == fv:
            return w
    return min(candidates)


def simplicial_approximation(f: PLMap, max_rounds: int = 8):
    """(g, certificate): simplicial g homotopic to f by one straight-line
    step, found by iterated barycentric subdivision of the domain."""
    cur = f
    for _ in range(max_rounds + 1):
        assignment = {}
        failing = []
        for (v,) in (s for s in cur.fine.simplices if len(s) == 1):
            w = check_star_condition(cur, v)
            if w is None:
                failing.append(v)
            else:
                assignment[v] = w
        if not failing:
            g = simplicial_map_on(cur.dom_subdivision, cur.codomain, assignment)
            fixed = cur.domain.subcomplex(())
            step = HomotopyStep(cur, g, identity_witness(cur.fine),
                                dict(cur.target_carrier))
            return g, HomotopyCertificate([step], fixed)
        cur = subdivide_map(cur)
    raise RoundsExhausted(
        f"no simplicial approximation within {max_rounds} rounds",
        failing)


# ---------------------------------------------------------------------------
# Homotopy certificates
# ---------------------------------------------------------------------------

class HomotopyStep:
    """One straight-line homotopy (1-s)*frm + s*to with per-simplex
    common-carrier witnesses over a refinement of the shared domain."""

    def __init__(self, frm: PLMap, to: PLMap,
                 refinement: SubdivisionWitness,
                 carriers: dict[Simplex, Simplex]):
        self.frm = frm
        self.to = to
        self.refinement = refinement
        self.carriers = {tuple(k): tuple(v) for k, v in carriers.items()}

    def evaluate(self, x, s: Fraction):
        s = linalg.frac(s)
        a = self.frm.evaluate(x)
        b = self.to.evaluate(x)
        return tuple((1 - s) * p + s * q for p, q in zip(a, b))


class HomotopyCertificate:
    def __init__(self, steps, fixed_set: SubcomplexRef):
        self.steps = list(steps)
        self.fixed_set = fixed_set

    @property
    def initial(self) -> PLMap:
        return self.steps[0].frm

    @property
    def final(self) -> PLMap:
        return self.steps[-1].to

    def evaluate(self, x, s: Fraction):
        """Evaluate the concatenated homotopy, steps in equal time shares."""
        s = linalg.frac(s)
        n = len(self.steps)
        if s >= 1:
            return self.final.evaluate(x)
        k = int(s * n)
        return self.steps[k].evaluate(x, s * n - k)


def verify_certificate(cert: HomotopyCertificate):
    """Independent re-check of every witness in a certificate.

    Returns (ok, problems).  Checks per step: the refinement covers the
    shared fine domain, each refinement simplex has a common closed carrier
    containing both images of its closure, consecutive steps agree, and
    every step is constant on the fixed set.
    """
    problems = []
    for i, step in enumerate(cert.steps):
        f, g = step.frm, step.to
        if f.codomain != g.codomain:
            problems.append((i, None, "codomain mismatch"))
            continue
        if f.fine != g.fine:
            problems.append((i, None, "domain subdivision mismatch"))
            continue
        if step.refinement.coarse != f.fine:
            problems.append((i, None, "refinement base mismatch"))
            continue
        ok_sub, viol = subdivision.verify_subdivision(step.refinement)
        if not ok_sub:
            problems.append((i, None, f"bad refinement: {viol[:3]}"))
            continue
        L = f.codomain
        for t in sorted(step.refinement.fine.simplices):
            c = step.carriers.get(t)
            if c is None or c not in L.simplices:
                problems.append((i, t, "missing carrier"))
                continue
            for v in t:
                x = step.refinement.fine.vertices[v]
                for h in (f, g):
                    if not L.point_in_closure(c, h.evaluate(x)):
                        problems.append((i, t, "image outside carrier"))
                        break
        if i > 0:
            prev = cert.steps[i - 1].to
            if prev.fine.simplices != f.fine.simplices:
                problems.append((i, None, "steps do not chain"))
            else:
                for (v,) in (s for s in f.fine.simplices if len(s) == 1):
                    if prev.vertex_image[v] != f.vertex_image[v]:
                        problems.append((i, (v,), "steps disagree"))
        members = cert.fixed_set.members
        for t in f.fine.simplices:
            if f.dom_subdivision.carrier[t] in members:
                for v in t:
                    if f.vertex_image[v] != g.vertex_image[v]:
                        problems.append((i, (v,), "not constant on fixed set"))
    return (not problems), problems


def straight_line_homotopy(f: PLMap, g: PLMap,
                           fixed: SubcomplexRef | None = None) -> HomotopyCertificate:
    """Certificate for (1-s)f + sg; the two maps must share their domain
    subdivision (build both against a common refinement first)."""
    if f.domain != g.domain or f.codomain != g.codomain:
        raise Incompatible("maps must share domain and codomain")
    if f.fine != g.fine:
        raise Incompatible("maps must share their domain subdivision")
    L = f.codomain
    carriers = {}
    for t in sorted(f.fine.simplices):
        pts = f.image_points(t) + g.image_points(t)
        c = minimal_carrier(L, pts)
        if c is None:
            raise CarrierClash(
                f"no common carrier for images of {sname(t)}")
        carriers[t] = c
    if fixed is None:
        fixed = f.domain.subcomplex(())
    members = fixed.members
    for t in f.fine.simplices:
        if f.dom_subdivision.carrier[t] in members:
            for v in t:
                if f.vertex_image[v] != g.vertex_image[v]:
                    raise FixedSetMismatch(
                        f"maps differ at {v} on the fixed set")
    step = HomotopyStep(f, g, identity_witness(f.fine), carriers)
    return HomotopyCertificate([step], fixed)


# ---------------------------------------------------------------------------
# Urysohn separation and the rel-subcomplex pipeline
# ---------------------------------------------------------------------------

class PLFunction:
    """PL function |K| -> [0,1] given by vertex values on a subdivision."""

    def __init__(self, witness: SubdivisionWitness, values: dict[str, Fraction]):
        self.witness = witness
        self.values = {v: linalg.frac(x) for v, x in values.items()}
        assert all(0 <= x <= 1 for x in self.values.values())

    def evaluate(self, x) -> Fraction:
        t, coords = self.witness.fine.locate(linalg.vec(x))
        return sum((c * self.values[v] for c, v in zip(coords, t)), F0)


def combinatorial_closed_star(K: Complex, members) -> frozenset:
    """Closure of the set of simplices whose closure meets the subcomplex."""
    members = frozenset(tuple(s) for s in members)
    star = {s for s in K.simplices
            if any(f in members for f in faces_with_self(s))}
    closed = set(star)
    for s in star:
        closed.update(f for f in proper_faces(s) if f in K.simplices)
    return frozenset(closed)


def is_full(K: Complex, members) -> bool:
    """Every K-simplex all of whose vertices lie in the subcomplex belongs
    to it."""
    members = frozenset(tuple(s) for s in members)
    cverts = {v for s in members for v in s}
    return all(s in members for s in K.simplices if set(s) <= cverts)


def urysohn(K: Complex, K_C: SubcomplexRef, K_E: SubcomplexRef) -> PLFunction:
    """PL separating function: exactly 0 on |K_C|, 1 outside the interior
    of |K_E|.  K_C must be closed and full; the closed star of K_C must
    stay inside K_E."""
    if not K.is_closed():
        raise NotClosed("urysohn requires a closed complex")
    if not K_C.is_closed():
        raise NotSubcomplex("K_C must be closed")
    if not is_full(K, K_C.members):
        raise NotFull("K_C is not full; subdivide once first")
    star = combinatorial_closed_star(K, K_C.members)
    if not star <= K_E.members:
        raise BarrierViolation("closed star of K_C leaves K_E")
    cverts = {v for s in K_C.members for v in s}
    values = {v: (F0 if v in cverts else F1)
              for s in K.simplices for v in s}
    return PLFunction(identity_witness(K), values)


def restrict_members(w: SubdivisionWitness, coarse_members) -> frozenset:
    """Fine simplices lying over a set of coarse simplices."""
    coarse_members = frozenset(tuple(s) for s in coarse_members)
    return frozenset(t for t in w.fine.simplices
                     if w.carrier[t] in coarse_members)


def simplicialize_rel(f: PLMap, K_C: SubcomplexRef | None,
                      max_rounds: int = 8):
    """Deform f to a map simplicial outside a barrier around |K_C| while
    keeping it fixed on |K_C| exactly.

    Build: subdivide the domain once (making the fine copy of K_C full),
    run simplicial approximation to get mu, take barriers K_E = closed star
    of K_C and K_D = closed star of K_E in the final fine complex, blend
    with the 0/1 Urysohn function, and certify f -> result (and -> mu when
    mu already agrees on |K_C|), all constant on |K_C|.
    """
    if K_C is None or len(K_C.members) == 0:
        g, cert = simplicial_approximation(f, max_rounds)
        return g, cert
    if K_C.parent != f.domain:
        raise NotSubcomplex("K_C must be a subcomplex of the domain")
    if not K_C.is_closed():
        raise NotSubcomplex("K_C must be closed")

    f1 = subdivide_map(f)
    mu, cert_mu = simplicial_approximation(f1, max_rounds)
    base = cert_mu.steps[-1].frm          # f on the final subdivision
    fine = base.fine
    cfine = restrict_members(base.dom_subdivision, K_C.members)
    e_members = combinatorial_closed_star(fine, cfine)
    d_members = combinatorial_closed_star(fine, e_members)
    ref_c = fine.subcomplex(cfine)
    ref_e = fine.subcomplex(e_members)
    lam = urysohn(fine, ref_c, ref_e)
    # nesting sanity: |K_E| inside the interior of |K_D|
    if not combinatorial_closed_star(fine, e_members) <= d_members:
        raise BarrierViolation("barrier nesting failed")

    verts = {}
    for s in fine.simplices:
        for v in s:
            if v not in verts:
                lv = lam.values[v]
                fv = base.vertex_image[v]
                mv = mu.vertex_image[v]
                verts[v] = tuple((1 - lv) * p + lv * q
                                 for p, q in zip(fv, mv))
    carriers = {}
    L = f.codomain
    for t in sorted(fine.simplices):
        c = cert_mu.steps[-1].carriers[t]
        if all(L.point_in_closure(c, verts[v]) for v in t):
            carriers[t] = c
        else:
            c2 = minimal_carrier(L, [verts[v] for v in t]
                                 + base.image_points(t) + mu.image_points(t))
            if c2 is None:
                raise CarrierClash(f"no blend carrier for {sname(t)}")
            carriers[t] = c2
    result = PLMap(f.domain, L, base.dom_subdivision, verts, carriers)

    step_carriers = {}
    for t in fine.simplices:
        pts = base.image_points(t) + mu.image_points(t) + result.image_points(t)
        c = minimal_carrier(L, pts)
        if c is None:
            raise CarrierClash(f"no common carrier over {sname(t)}")
        step_carriers[t] = c
    steps = [HomotopyStep(base, result, identity_witness(fine),
                          dict(step_carriers))]
    mu_matches = all(mu.vertex_image[v] == result.vertex_image[v]
                     for t in cfine for v in t)
    if mu_matches:
        steps.append(HomotopyStep(result, mu, identity_witness(fine),
                                  dict(step_carriers)))
    fixed = f.domain.subcomplex(K_C.members)
    return result, HomotopyCertificate(steps, fixed)
