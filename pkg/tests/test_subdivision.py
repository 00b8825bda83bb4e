"""Barycentric subdivision, normality checking, and normal extension."""

from fractions import Fraction as F

import pytest

from plhtpy import plmaps as pm
from plhtpy import subdivision as sd
from plhtpy.complexes import simplex, validate
from plhtpy.errors import NotClosed, NotNormal, NotNormalInput, NotSubcomplex
from plhtpy.homology import euler_characteristic

TETRA_VERTS = {"p": (0, 0, 0), "q": (1, 0, 0), "r": (0, 1, 0),
               "s": (0, 0, 1)}


def closed_tetra():
    K = validate(3, TETRA_VERTS, [["p", "q", "r", "s"]],
                 check_disjoint=False)
    return K.closure()


def test_bary_counts_disk(disk):
    w = sd.barycentric_subdivide(disk)
    assert len(w.fine.by_dim(2)) == 6
    assert len(w.fine.by_dim(1)) == 12
    assert len(w.fine.by_dim(0)) == 7
    assert euler_characteristic(w.fine) == 1
    assert w.fine.is_closed()


def test_bary_counts_tri3(tri3):
    w = sd.barycentric_subdivide(tri3)
    assert len(w.fine.by_dim(1)) == 6
    assert len(w.fine.by_dim(0)) == 6


def test_bary_factorial_top_count():
    w = sd.barycentric_subdivide(closed_tetra())
    assert len(w.fine.by_dim(3)) == 24  # (3+1)!


def test_bary_requires_closed():
    K = validate(2, {"a": (0, 0), "b": (1, 0), "c": (0, 1)},
                 [["a", "b", "c"]], check_disjoint=False)
    with pytest.raises(NotClosed):
        sd.barycentric_subdivide(K)


def test_bary_preserves_euler_and_closedness(corpus):
    for name, (K, _) in corpus.items():
        w = sd.barycentric_subdivide(K)
        assert w.fine.is_closed(), name
        assert euler_characteristic(w.fine) == euler_characteristic(K), name


def test_bary_fullness_property(disk):
    # a simplex of the closure with all vertices in the subdivision is
    # itself a subdivision simplex
    fine = sd.barycentric_subdivide(disk).fine
    present = {v for s in fine.simplices for v in s}
    for s in fine.closure().simplices:
        if set(s) <= present:
            assert s in fine.simplices


def test_verify_subdivision(disk):
    w = sd.barycentric_subdivide(disk)
    ok, violations = sd.verify_subdivision(w)
    assert ok and not violations
    ok, violations = sd.verify_subdivision(sd.identity_witness(disk))
    assert ok


def test_verify_subdivision_flags_swapped_carrier(disk):
    w = sd.barycentric_subdivide(disk)
    carrier = dict(w.carrier)
    inner = next(t for t, c in carrier.items() if len(c) == 3 and len(t) == 3)
    carrier[inner] = ("a", "b")
    bad = sd.SubdivisionWitness(w.fine, w.coarse, carrier)
    ok, violations = sd.verify_subdivision(bad)
    assert not ok and violations


def test_iterated_subdivision(tri3):
    w = sd.iterated_subdivision(tri3, 2)
    assert len(w.fine.by_dim(1)) == 12
    ok, _ = sd.verify_subdivision(w)
    assert ok


def test_verify_normal_identity(disk):
    assert sd.verify_normal(sd.identity_homeo(disk)).normal
    w = sd.barycentric_subdivide(disk)
    assert sd.verify_normal(sd.identity_homeo_on(w)).normal


def test_verify_normal_flags_moved_vertex(disk):
    # displace the interior barycenter image onto the boundary: the image
    # of the interior fine simplices leaves their carrier
    w = sd.barycentric_subdivide(disk)
    phi = sd.identity_homeo_on(w)
    phi.vertex_image["a.b.c^bary"] = (F(1, 2), F(0))
    report = sd.verify_normal(phi)
    assert not report.normal
    assert not report.carrier_respecting
    assert report.violations


def test_verify_normal_partition_targets(disk):
    w = sd.barycentric_subdivide(disk)
    phi = sd.identity_homeo_on(w)
    good = [s for s in w.fine.simplices if len(s) == 1]
    assert sd.verify_normal(phi, [good]).normal
    report = sd.verify_normal(phi, [[("a", "zzz")]])
    assert report.partitions_targets is False


def boundary_slide_homeo(tri3):
    """Normal homeomorphism of the circle sliding each edge midpoint to
    the 1/3 point of its edge."""
    w = sd.barycentric_subdivide(tri3)
    image = {v: w.fine.vertices[v] for s in w.fine.simplices for v in s}
    for e in tri3.by_dim(1):
        u, v = e
        p, q = tri3.vertices[u], tri3.vertices[v]
        image[sd.bary_name(e)] = tuple(a + (b - a) / 3
                                       for a, b in zip(p, q))
    return sd.PLHomeo(w, image, dict(w.carrier))


def check_extension(K, K_Z, phi0):
    phi = sd.extend_normal(K, K_Z, phi0)
    assert sd.verify_normal(phi).normal
    assert phi0.witness.fine.simplices <= phi.witness.fine.simplices
    for v, p in phi0.vertex_image.items():
        assert phi.vertex_image[v] == p
    return phi


def test_extend_normal_disk_identity(disk, disk_boundary):
    phi0 = sd.identity_homeo_on(
        sd.barycentric_subdivide(disk_boundary.as_complex()))
    phi = check_extension(disk, disk_boundary, phi0)
    # cones from the triangle barycenter over the 6 subdivided edges
    assert len(phi.witness.fine.by_dim(2)) == 6


def test_extend_normal_disk_slide(disk, disk_boundary, tri3):
    phi0 = boundary_slide_homeo(tri3)
    # rebase the witness onto the subcomplex view of the boundary
    phi = check_extension(disk, disk_boundary, phi0)
    third = phi.evaluate((F(1, 2), F(0)))
    assert third == (F(1, 3), F(0))


def test_extend_normal_closed_edge():
    K = validate(1, {"a": (0,), "b": (1,)}, [["a"], ["b"], ["a", "b"]])
    K_Z = K.subcomplex([("a",), ("b",)])
    phi0 = sd.identity_homeo_on(sd.identity_witness(K_Z.as_complex()))
    phi = check_extension(K, K_Z, phi0)
    assert phi.witness.fine.simplices == K.simplices  # kept whole


def test_extend_normal_tetra_boundary():
    K = closed_tetra()
    boundary = K.subcomplex([s for s in K.simplices if len(s) <= 3])
    phi0 = sd.identity_homeo_on(
        sd.barycentric_subdivide(boundary.as_complex()))
    phi = check_extension(K, boundary, phi0)
    assert any(len(t) == 4 for t in phi.witness.fine.simplices)


def test_extend_normal_rejects_bad_input(disk, disk_boundary, tri3):
    w = sd.barycentric_subdivide(disk_boundary.as_complex())
    phi0 = sd.identity_homeo_on(w)
    phi0.vertex_image[sd.bary_name(("a", "b"))] = tri3.vertices["c"]
    with pytest.raises(NotNormalInput):
        sd.extend_normal(disk, disk_boundary, phi0)
    not_closed = disk.subcomplex([("a", "b", "c")])
    with pytest.raises(NotSubcomplex):
        sd.extend_normal(disk, not_closed,
                         sd.identity_homeo(not_closed.as_complex()))


def test_canonical_homotopy_identity(disk):
    cert = sd.canonical_homotopy(sd.identity_homeo(disk))
    ok, problems = pm.verify_certificate(cert)
    assert ok, problems
    x = (F(1, 4), F(1, 4))
    assert cert.evaluate(x, F(1, 2)) == x


def test_canonical_homotopy_extension(disk, disk_boundary):
    phi0 = sd.identity_homeo_on(
        sd.barycentric_subdivide(disk_boundary.as_complex()))
    phi = sd.extend_normal(disk, disk_boundary, phi0)
    cert = sd.canonical_homotopy(phi)
    ok, problems = pm.verify_certificate(cert)
    assert ok, problems
    # straight segments [x, phi(x)] stay inside the polyhedron
    for x in [(F(1, 4), F(1, 4)), (F(1, 2), F(1, 4)), (F(0), F(1, 2))]:
        for s in (F(1, 4), F(1, 2), F(3, 4)):
            disk.locate(cert.evaluate(x, s))


def test_canonical_homotopy_rejects_non_normal(disk):
    w = sd.barycentric_subdivide(disk)
    phi = sd.identity_homeo_on(w)
    phi.vertex_image["a.b.c^bary"] = (F(1, 2), F(0))
    with pytest.raises(NotNormal):
        sd.canonical_homotopy(phi)
