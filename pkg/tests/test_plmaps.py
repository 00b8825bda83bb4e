"""PL maps: evaluation, approximation, certificates, and the rel pipeline."""

from fractions import Fraction as F

import pytest

from plhtpy import plmaps as pm
from plhtpy import subdivision as sd
from plhtpy.errors import (CarrierClash, FixedSetMismatch, NotFull,
                           PointOutsidePolyhedron, RoundsExhausted)
from plhtpy.homology import induced_map


def test_evaluate_identity(disk):
    f = pm.identity_map(disk)
    x = (F(1, 3), F(1, 3))
    assert f.evaluate(x) == x
    with pytest.raises(PointOutsidePolyhedron):
        f.evaluate((F(3), F(3)))


def test_evaluate_deg2(deg2, tri3):
    assert deg2.evaluate(deg2.domain.vertices["h1"]) == tri3.vertices["b"]
    h0, h1 = deg2.domain.vertices["h0"], deg2.domain.vertices["h1"]
    mid = tuple((p + q) / 2 for p, q in zip(h0, h1))
    a, b = tri3.vertices["a"], tri3.vertices["b"]
    assert deg2.evaluate(mid) == tuple((p + q) / 2 for p, q in zip(a, b))


def test_evaluate_continuous_across_faces(rot):
    # shared faces receive the same image from both incident pieces: the
    # map is determined by vertex images, checked per shared vertex
    fine = rot.fine
    for s in fine.simplices:
        for v in s:
            assert rot.evaluate(fine.vertices[v]) == rot.vertex_image[v]


def test_star_condition_identity(tri3):
    f = pm.identity_map(tri3)
    for v in tri3.vertex_ids():
        assert pm.check_star_condition(f, v) == v


def test_star_condition_deg2(deg2):
    assert pm.check_star_condition(deg2, "h0") == "a"
    assert pm.check_star_condition(deg2, "h1") == "b"


def test_star_condition_none_for_disjoint_carriers(tri3):
    # an inconsistent witness whose declared carriers share no vertex
    # admits no center; valid maps always do, since closures of
    # vertex-disjoint simplices cannot both contain the vertex image
    w = sd.identity_witness(tri3)
    verts = {v: tri3.vertices[v] for v in tri3.vertex_ids()}
    carriers = {s: s for s in tri3.simplices}
    carriers[("a",)] = ("b", "c")
    f = pm.PLMap(tri3, tri3, w, verts, carriers, check=False)
    assert pm.check_star_condition(f, "a") is None


def test_approximation_of_simplicial_map_is_itself(deg2):
    g, cert = pm.simplicial_approximation(deg2)
    assert g.simplicial_vertex_map() == deg2.simplicial_vertex_map()
    ok, problems = pm.verify_certificate(cert)
    assert ok, problems


def test_approximation_rot(rot):
    g, cert = pm.simplicial_approximation(rot, max_rounds=2)
    assert g.is_simplicial()
    ok, problems = pm.verify_certificate(cert)
    assert ok, problems
    assert induced_map(g, 1).is_identity()


def test_approximation_deg2_induced(deg2):
    g, _ = pm.simplicial_approximation(deg2)
    assert abs(induced_map(g, 1).matrix[0][0]) == 2


def test_approximation_rounds_exhausted(rot):
    with pytest.raises(RoundsExhausted):
        # the same inconsistent-witness construction can never stabilize
        tri3 = rot.codomain
        w = sd.identity_witness(tri3)
        verts = {v: tri3.vertices[v] for v in tri3.vertex_ids()}
        carriers = {s: s for s in tri3.simplices}
        carriers[("a",)] = ("b", "c")
        bad = pm.PLMap(tri3, tri3, w, verts, carriers, check=False)
        pm.simplicial_approximation(bad, max_rounds=1)


def test_straight_line_same_map(deg2):
    cert = pm.straight_line_homotopy(deg2, deg2)
    ok, problems = pm.verify_certificate(cert)
    assert ok, problems


def test_straight_line_identity_to_constant(tri3, disk):
    # on the hollow triangle the far edge's images share no simplex
    with pytest.raises(CarrierClash):
        pm.straight_line_homotopy(pm.identity_map(tri3),
                                  pm.constant_map(tri3, tri3,
                                                  tri3.vertices["a"]))
    # with the solid triangle as codomain the straight line is valid:
    # every segment stays inside the closed 2-simplex
    ident = pm.identity_map(disk)
    const = pm.constant_map(disk, disk, disk.vertices["a"])
    cert = pm.straight_line_homotopy(ident, const)
    ok, problems = pm.verify_certificate(cert)
    assert ok, problems


def test_straight_line_fixed_set_mismatch(disk):
    ident = pm.identity_map(disk)
    const = pm.constant_map(disk, disk, disk.vertices["a"])
    fixed = disk.subcomplex([("b",)])
    with pytest.raises(FixedSetMismatch):
        pm.straight_line_homotopy(ident, const, fixed=fixed)


def test_certificate_mutation_detected(rot):
    g, cert = pm.simplicial_approximation(rot)
    step = cert.steps[0]
    victim = sorted(step.carriers)[0]
    step.carriers[victim] = ("a",)
    ok, problems = pm.verify_certificate(cert)
    assert not ok
    assert any(t == victim for _, t, _ in problems if t)


def test_urysohn_vertex_star(disk):
    fine = sd.barycentric_subdivide(disk).fine
    c_members = frozenset({("a",)})
    e_members = pm.combinatorial_closed_star(fine, c_members)
    lam = pm.urysohn(fine, fine.subcomplex(c_members),
                     fine.subcomplex(e_members))
    assert lam.values["a"] == 0
    assert all(lam.values[v] == 1 for v in lam.values if v != "a")
    # strictly positive on the open edges at a
    x = tuple((p + q) / 3 for p, q in zip(fine.vertices["a"],
                                          fine.vertices["a.b^bary"]))
    assert 0 < lam.evaluate(x) < 1


def test_urysohn_not_full(tri3):
    c = tri3.subcomplex([("a",), ("b",)])
    e = tri3.subcomplex(tri3.simplices)
    with pytest.raises(NotFull):
        pm.urysohn(tri3, c, e)


def test_simplicialize_rel_empty_fixed(rot):
    g, cert = pm.simplicialize_rel(rot, None)
    assert g.is_simplicial()
    ok, problems = pm.verify_certificate(cert)
    assert ok, problems
    assert induced_map(g, 1).is_identity()


def test_simplicialize_rel_perturbed_disk(perturbed_disk, disk,
                                          disk_boundary):
    f = perturbed_disk
    g, cert = pm.simplicialize_rel(f, disk_boundary)
    ok, problems = pm.verify_certificate(cert)
    assert ok, problems
    assert cert.fixed_set.members == disk_boundary.members
    # result equals the input (the identity) on the boundary exactly
    for x in [(F(0), F(0)), (F(1, 2), F(0)), (F(1, 4), F(3, 4)),
              (F(0), F(2, 3))]:
        assert g.evaluate(x) == x
    # the certificate is constant on the boundary at all times
    for x in [(F(1, 2), F(0)), (F(0), F(1, 3))]:
        for s in (F(0), F(1, 3), F(1, 2), F(1)):
            assert cert.evaluate(x, s) == x
    # simplicial outside the barrier: pieces not touching the boundary
    # region have vertex images at codomain vertices
    vmap = g.simplicial_vertex_map()
    coords = {tuple(p) for p in disk.vertices.values()}
    if vmap is None:
        interior = [t for t in g.fine.simplices
                    if all(g.vertex_image[v] in coords or
                           g.dom_subdivision.carrier[t] == ("a", "b", "c")
                           for v in t)]
        assert interior  # blended zone is confined near the boundary


def test_simplicialize_blend_endpoints(perturbed_disk, disk_boundary):
    f = perturbed_disk
    g, cert = pm.simplicialize_rel(f, disk_boundary)
    # H(x, 0) = f(x) for sampled interior points
    for x in [(F(1, 4), F(1, 4)), (F(1, 8), F(1, 2))]:
        assert cert.evaluate(x, F(0)) == cert.initial.evaluate(x)
        assert cert.evaluate(x, F(1)) == cert.final.evaluate(x)
