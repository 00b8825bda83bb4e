"""Cylinders |K| x [0,1]: staircase triangulation, PL retraction onto
(|K_A| x I) u (|K| x {0}), and the homotopy extension operator.

The retraction is built as a composition of elementary collapse
retractions: each collapse of a free face pair (tau, s) is a simplicial map
on the stellar subdivision at the barycenter of tau (the new vertex goes to
the vertex of s opposite tau, everything else stays).  The composite stays
an exact PLMap: before each collapse the current map's domain is refined so
every piece lands in a single linearity region of the collapse map.  Note
that the naive central projection from a point above the prism is
projective, not piecewise-linear, so it cannot be represented (or
certified) in this exact framework; the collapse route computes a PL
retraction with the same contract.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from . import linalg
from .complexes import (Complex, SubcomplexRef, Simplex, proper_faces,
                        sdim, simplex, sname)
from .errors import Incompatible, NotClosed, NotSubcomplex
from .plmaps import PLMap
from .subdivision import SubdivisionWitness, identity_witness

F0 = Fraction(0)
F1 = Fraction(1)


def lift(v: str, level: int) -> str:
    return f"{v}~{level}"

def unlift(v: str) -> tuple[str, int]:
    base, _, lv = v.rpartition("~")
    return base, int(lv)


class PrismComplex:
    """Staircase triangulation of |K| x [0,1]."""

    def __init__(self, base: Complex, cylinder: Complex,
                 projection: dict[Simplex, Simplex]):
        self.base = base
        self.cylinder = cylinder
        self.projection = projection

    def bottom_members(self) -> frozenset:
        return frozenset(s for s in self.cylinder.simplices
                         if all(unlift(v)[1] == 0 for v in s))

    def top_members(self) -> frozenset:
        return frozenset(s for s in self.cylinder.simplices
                         if all(unlift(v)[1] == 1 for v in s))

    def over(self, base_members) -> frozenset:
        base_members = frozenset(tuple(s) for s in base_members)
        return frozenset(s for s in self.cylinder.simplices
                         if self.projection[s] in base_members)

    def level_map(self, level: int) -> dict[str, str]:
        """Base vertex id -> lifted vertex id."""
        return {v: lift(v, level) for s in self.base.simplices
                for v in s}


def prism_triangulate(K: Complex) -> PrismComplex:
    """Each closed n-simplex prism splits into n+1 staircase simplices
    [w_0^0..w_i^0, w_i^1..w_n^1] using the global vertex order; shared
    faces agree across neighboring prisms."""
    if not K.is_closed():
        raise NotClosed("prisms require a closed base")
    verts: dict[str, tuple] = {}
    for s in K.simplices:
        for v in s:
            p = K.vertices[v]
            verts[lift(v, 0)] = tuple(p) + (F0,)
            verts[lift(v, 1)] = tuple(p) + (F1,)
    sims: set[Simplex] = set()
    for s in sorted(K.simplices):
        n = sdim(s)
        for i in range(n + 1):
            top = tuple(lift(v, 0) for v in s[:i + 1]) + \
                  tuple(lift(v, 1) for v in s[i:])
            sims.add(simplex(top))
            for k in range(1, len(top)):
                for f in combinations(sorted(top), k):
                    sims.add(f)
    cylinder = Complex(K.ambient_dim + 1, verts, sims)
    projection = {t: simplex({unlift(v)[0] for v in t})
                  for t in cylinder.simplices}
    return PrismComplex(K, cylinder, projection)


class CylinderRetraction:
    def __init__(self, prism: PrismComplex, target: SubcomplexRef,
                 map_: PLMap):
        self.prism = prism
        self.target = target
        self.map = map_


def _point_name(p) -> str:
    enc = "_".join(str(q).replace("-", "m").replace("/", "d") for q in p)
    return f"cut_{enc}"


class _Composite:
    """Mutable state of the composite retraction while collapsing."""

    def __init__(self, cylinder: Complex):
        self.cylinder = cylinder
        self.verts = dict(cylinder.vertices)      # domain coordinates
        self.simplices = set(cylinder.simplices)  # current fine complex
        self.domcar = {s: s for s in cylinder.simplices}
        self.image = {v: cylinder.vertices[v]
                      for s in cylinder.simplices for v in s}
        self.carrier = {s: s for s in cylinder.simplices}  # in live complex

    def split_edge(self, u: str, v: str, z_point, z_name: str):
        """Stellar subdivision at a point of the open edge (u, v)."""
        self.verts[z_name] = z_point
        pu, pv = self.verts[u], self.verts[v]
        coords = linalg.barycentric_coords([pu, pv], z_point)
        t0, t1 = coords
        self.image[z_name] = tuple(t0 * a + t1 * b for a, b
                                   in zip(self.image[u], self.image[v]))
        for t in [t for t in self.simplices if u in t and v in t]:
            self.simplices.discard(t)
            dc, rc = self.domcar.pop(t), self.carrier.pop(t)
            rest = tuple(x for x in t if x not in (u, v))
            for child in (simplex(rest + (u, z_name)),
                          simplex(rest + (v, z_name)),
                          simplex(rest + (z_name,))):
                if child not in self.simplices:
                    self.simplices.add(child)
                    self.domcar[child] = dc
                    self.carrier[child] = rc

    def bary_in(self, c: Simplex, v: str):
        pts = [self.cylinder.vertices[x] for x in c]
        return linalg.barycentric_coords(pts, self.image[v])

    def cut_region(self, c: Simplex, tau: Simplex):
        """Refine simplices carried by c until each is sign-pure for every
        difference of barycentric coordinates over the tau vertices."""
        idx = [c.index(u) for u in tau]
        pairs = [(i, j) for i in idx for j in idx if i < j]
        for (i, j) in pairs:
            while True:
                cut = None
                for t in sorted(s for s in self.simplices
                                if self.carrier.get(s) == c):
                    vals = {}
                    for v in t:
                        b = self.bary_in(c, v)
                        vals[v] = b[i] - b[j]
                    mixed = [(x, y) for x in t for y in t
                             if vals[x] > 0 > vals[y]]
                    if mixed:
                        cut = (mixed[0], vals)
                        break
                if cut is None:
                    break
                (x, y), vals = cut
                wx, wy = vals[x], vals[y]
                lam = wx / (wx - wy)      # zero of the affine functional
                z = tuple((1 - lam) * a + lam * b
                          for a, b in zip(self.verts[x], self.verts[y]))
                name = _point_name(z)
                if name in self.verts:
                    raise Incompatible("vertex name collision while cutting")
                self.split_edge(x, y, z, name)

    def apply_collapse(self, tau: Simplex, s: Simplex, tau_hat_target: str):
        """Compose with the collapse retraction removing (tau, s); the
        stellar vertex at the barycenter of tau maps to `tau_hat_target`
        (the vertex of s opposite tau)."""
        w = tau_hat_target
        for c in (s, tau):
            self.cut_region(c, tau)
        m = len(tau)
        new_image: dict[str, tuple] = {}
        new_carrier: dict[Simplex, Simplex] = {}
        for t in sorted(self.simplices):
            c = self.carrier.get(t)
            if c not in (s, tau):
                continue
            idx = {u: c.index(u) for u in tau}
            widx = c.index(w) if w in c else None
            barys = {v: self.bary_in(c, v) for v in t}
            # common minimal tau-coordinate over all vertices (sign-pure)
            u_min = next(u for u in tau
                         if all(barys[v][idx[u]] <= barys[v][idx[u2]]
                                for v in t for u2 in tau))
            cpts = [self.cylinder.vertices[x] for x in c]
            wpt = self.cylinder.vertices[w]
            for v in t:
                b = barys[v]
                au = b[idx[u_min]]
                img = [F0] * len(wpt)
                for u in tau:
                    if u == u_min:
                        continue
                    up = self.cylinder.vertices[u]
                    coef = b[idx[u]] - au
                    for kdim in range(len(img)):
                        img[kdim] += coef * up[kdim]
                wcoef = m * au + (b[widx] if widx is not None else F0)
                for kdim in range(len(img)):
                    img[kdim] += wcoef * wpt[kdim]
                new_image[v] = tuple(img)
            new_carrier[t] = simplex(set(c) - {u_min} | {w})
        self.image.update(new_image)
        self.carrier.update(new_carrier)


def _free_pairs(live: set, keep: frozenset):
    cofaces: dict[Simplex, list[Simplex]] = {t: [] for t in live}
    for s in live:
        for f in proper_faces(s):
            if f in live:
                cofaces[f].append(s)
    out = []
    for tau in live:
        if tau in keep:
            continue
        cf = cofaces[tau]
        if len(cf) == 1:
            s = cf[0]
            if s not in keep and len(s) == len(tau) + 1 and not cofaces[s]:
                out.append((tau, s))
    return out


def cylinder_retraction(K: Complex, K_A) -> CylinderRetraction:
    """PL retraction of |K| x I onto (|K_A| x I) u (|K| x {0}), identity on
    the target, built by greedy elementary collapses."""
    members = frozenset(tuple(s) for s in getattr(K_A, "members", K_A or ()))
    if members and not K.subcomplex(members).is_closed():
        raise NotSubcomplex("K_A must be closed")
    P = prism_triangulate(K)
    target = P.over(members) | P.bottom_members()
    tref = P.cylinder.subcomplex(target)

    if not members:
        # vertical projection is simplicial on the staircase complex
        vmap = {}
        for s in P.cylinder.simplices:
            for v in s:
                base, _ = unlift(v)
                vmap[v] = lift(base, 0)
        verts = {v: P.cylinder.vertices[vmap[v]] for v in vmap}
        carrier = {s: simplex({vmap[v] for v in s})
                   for s in P.cylinder.simplices}
        r = PLMap(P.cylinder, P.cylinder, identity_witness(P.cylinder),
                  verts, carrier)
        return CylinderRetraction(P, tref, r)

    comp = _Composite(P.cylinder)
    live = set(P.cylinder.simplices)
    while live != set(target):
        pairs = _free_pairs(live, target)
        if not pairs:
            raise Incompatible("cylinder does not collapse onto the target")
        tau, s = max(pairs, key=lambda p: (len(p[1]), p[1], p[0]))
        (w,) = set(s) - set(tau)
        comp.apply_collapse(tau, s, w)
        live.discard(s)
        live.discard(tau)

    fine = Complex(P.cylinder.ambient_dim, comp.verts, comp.simplices)
    witness = SubdivisionWitness(fine, P.cylinder, comp.domcar)
    r = PLMap(P.cylinder, P.cylinder, witness, comp.image, comp.carrier)
    return CylinderRetraction(P, tref, r)


def extend_homotopy(f: PLMap, H: PLMap, r: CylinderRetraction) -> PLMap:
    """G = H' o r with H' equal to f on the bottom and H on |K_A| x I.

    f must be affine on the base simplices and H on the prism simplices of
    the |K_A| cylinder (identity domain subdivisions); then H' is affine on
    every target simplex and the composition needs no further refinement.
    """
    P = r.prism
    if f.codomain != H.codomain:
        raise Incompatible("f and H must share their codomain")
    if f.fine != f.domain or H.fine != H.domain:
        raise Incompatible("f and H must be given on unsubdivided domains")
    if f.domain != P.base:
        raise Incompatible("f is not a map on the cylinder base")
    if not H.domain.simplices <= P.cylinder.simplices:
        raise Incompatible("H is not a map on a subcylinder")
    # H(.,0) = f on |K_A|, vertex-exact
    for s in H.domain.simplices:
        for v in s:
            base, lv = unlift(v)
            if lv == 0 and H.vertex_image[v] != f.vertex_image[base]:
                raise Incompatible(f"H(.,0) differs from f at {base}")

    Z = f.codomain
    timgs: dict[str, tuple] = {}
    tcar: dict[Simplex, Simplex] = {}
    for t in r.target.members:
        if t in H.domain.simplices:
            tcar[t] = H.target_carrier[t]
            for v in t:
                timgs[v] = H.vertex_image[v]
        else:
            sigma = P.projection[t]
            tcar[t] = f.target_carrier[sigma]
            for v in t:
                base, lv = unlift(v)
                if v not in timgs:
                    timgs[v] = f.vertex_image[base]
    Tc = r.target.as_complex()
    Hprime = PLMap(Tc, Z, identity_witness(Tc), timgs, tcar)

    rm = r.map
    gimgs = {}
    for s in rm.fine.simplices:
        for v in s:
            if v not in gimgs:
                gimgs[v] = Hprime.evaluate(rm.vertex_image[v])
    gcar = {t: tcar[rm.target_carrier[t]] for t in rm.fine.simplices}
    return PLMap(P.cylinder, Z, rm.dom_subdivision, gimgs, gcar)
