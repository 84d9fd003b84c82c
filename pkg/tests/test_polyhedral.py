import random

import pytest

from toricgf import (
    DegeneratePolytope,
    FanAxiomViolation,
    NonPointedCone,
    NotIntegral,
    NotLinearOnCone,
    build_fan,
    check_complete,
    cone_from_rays,
    dual_cone,
    face_lattice,
    lattice_polytope,
    normal_fan_of_polytope,
    support_from_ray_values,
)
from toricgf.intlinalg import dot, matvec, primitive_vector

from conftest import example1_fan, octahedron_fan, random_fan_2d, unit_square


def test_cone_from_rays_basic():
    c = cone_from_rays(2, [(1, 1), (0, 1)])
    assert c.dim == 2
    assert c.pointed
    assert set(c.rays) == {(1, 1), (0, 1)}


def test_cone_from_rays_zero_cone():
    c = cone_from_rays(2, [])
    assert c.dim == 0
    assert c.rays == ()
    assert c.pointed
    assert c.contains((0, 0))
    assert not c.contains((1, 0))


def test_cone_from_rays_line():
    c = cone_from_rays(2, [(1, 0), (-1, 0)])
    assert not c.pointed
    assert c.dim == 1
    assert c.contains((5, 0)) and c.contains((-5, 0))
    assert not c.contains((0, 1))
    with pytest.raises(NonPointedCone):
        cone_from_rays(2, [(1, 0), (-1, 0)], require_pointed=True)


def test_cone_reduces_redundant_generators():
    c = cone_from_rays(2, [(1, 0), (1, 1), (0, 1), (2, 4)])
    assert set(c.rays) == {(1, 0), (0, 1)}


def test_dual_cone_worked_example():
    c = cone_from_rays(2, [(1, 1), (0, 1)])
    d = dual_cone(c)
    assert set(d.rays) == {(1, 0), (-1, 1)}


def test_dual_cone_zero_is_whole_space():
    d = dual_cone(cone_from_rays(2, []))
    assert not d.pointed
    assert d.dim == 2
    assert d.inequalities == ()
    assert d.contains((-7, 3))
    # and back again
    assert dual_cone(d).rays == ()


def test_dual_cone_orthant_self_dual():
    c = cone_from_rays(2, [(1, 0), (0, 1)])
    assert set(dual_cone(c).rays) == {(1, 0), (0, 1)}


def test_dual_dual_identity_random():
    rng = random.Random(2)
    for _ in range(60):
        n = rng.choice([2, 3])
        gens = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n + rng.randint(0, 2))]
        gens = [g for g in gens if any(g)]
        if not gens:
            continue
        c = cone_from_rays(n, gens)
        if not (c.pointed and c.dim == n):
            continue
        dd = dual_cone(dual_cone(c))
        assert dd.rays == c.rays


def test_membership_agrees_with_generator_combinations():
    rng = random.Random(4)
    for _ in range(60):
        n = rng.choice([2, 3])
        gens = [tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(n)]
        gens = [g for g in gens if any(g)]
        if not gens:
            continue
        c = cone_from_rays(n, gens)
        coeffs = [rng.randint(0, 4) for _ in c.rays]
        pt = tuple(sum(k * r[i] for k, r in zip(coeffs, c.rays)) for i in range(n))
        assert c.contains(pt)


def test_simplicial_membership_against_exact_solve():
    # For simplicial cones the inequality test must match solving for the
    # nonnegative coordinates directly.
    from fractions import Fraction

    rng = random.Random(9)
    for _ in range(80):
        g1 = (rng.randint(-3, 3), rng.randint(-3, 3))
        g2 = (rng.randint(-3, 3), rng.randint(-3, 3))
        det = g1[0] * g2[1] - g1[1] * g2[0]
        if det == 0 or not any(g1) or not any(g2):
            continue
        c = cone_from_rays(2, [g1, g2])
        pt = (rng.randint(-5, 5), rng.randint(-5, 5))
        lam1 = Fraction(pt[0] * g2[1] - pt[1] * g2[0], det)
        lam2 = Fraction(g1[0] * pt[1] - g1[1] * pt[0], det)
        assert c.contains(pt) == (lam1 >= 0 and lam2 >= 0)


def test_face_lattice_2d():
    c = cone_from_rays(2, [(1, 1), (0, 1)])
    faces = face_lattice(c)
    assert len(faces) == 4
    assert sorted(d for _, d in faces) == [0, 1, 1, 2]


def test_face_lattice_ray():
    c = cone_from_rays(2, [(1, 0)])
    faces = face_lattice(c)
    assert len(faces) == 2


def test_face_lattice_3d_simplicial():
    c = cone_from_rays(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    faces = face_lattice(c)
    assert len(faces) == 8
    by_dim = {}
    for f, d in faces:
        by_dim[d] = by_dim.get(d, 0) + 1
    assert by_dim == {0: 1, 1: 3, 2: 3, 3: 1}
    # each face really is cut out by a supporting hyperplane
    for f, d in faces:
        for r in f.rays:
            assert c.contains(r)


def test_face_lattice_nonsimplicial():
    # cone over a square: 4 rays, 4 facets
    c = cone_from_rays(3, [(1, 1, 1), (-1, 1, 1), (-1, -1, 1), (1, -1, 1)])
    faces = face_lattice(c)
    by_dim = {}
    for f, d in faces:
        by_dim[d] = by_dim.get(d, 0) + 1
    assert by_dim == {0: 1, 1: 4, 2: 4, 3: 1}


def test_build_fan_example1():
    fan = example1_fan()
    assert len(fan.maximal_ids) == 4
    assert len(fan.ray_ids) == 4
    assert len(fan.cones) == 9
    assert fan.cones[fan.zero_id].dim == 0


def test_build_fan_incomplete_orthant():
    fan = build_fan(2, [[1, 0], [0, 1]], [[0, 1]])
    assert len(fan.cones) == 4
    report = check_complete(fan)
    assert not report.complete
    assert report.witness


def test_build_fan_overlapping_cones_rejected():
    with pytest.raises(FanAxiomViolation):
        build_fan(2, [[1, 0], [1, 1], [0, 1]], [[0, 1], [0, 2]])


def test_build_fan_rejects_redundant_listed_ray():
    # (1,1) is interior to the first quadrant cone, so no support value on
    # it could ever be enforced
    with pytest.raises(ValueError):
        build_fan(2, [[1, 0], [1, 1], [0, 1], [-1, -1]],
                  [[0, 1, 2], [2, 3], [3, 0]])


def test_build_fan_rejects_line():
    with pytest.raises(NonPointedCone):
        build_fan(2, [[1, 0], [-1, 0]], [[0, 1]])


def test_check_complete_example1():
    assert check_complete(example1_fan()).complete


def test_check_complete_missing_cone():
    fan = build_fan(2, [[1, 1], [0, 1], [-1, 1], [0, -1]],
                    [[0, 1], [1, 2], [2, 3]])
    report = check_complete(fan)
    assert not report.complete
    assert "ridge" in report.witness


def test_check_complete_dim1():
    fan = build_fan(1, [[1], [-1]], [[0], [1]])
    assert check_complete(fan).complete


def test_check_complete_octahedron():
    assert check_complete(octahedron_fan()).complete


def test_support_from_ray_values_example1():
    fan = example1_fan()
    h = support_from_ray_values(fan, [0, -2, 0, -2])
    sid = fan.cone_id([(1, 1), (0, 1)])
    assert h.linear_part(sid) == (2, -2)
    for r, v in zip(fan.input_rays, [0, -2, 0, -2]):
        assert h.value(r) == v


def test_support_zero_values():
    fan = example1_fan()
    h = support_from_ray_values(fan, [0, 0, 0, 0])
    for i in range(len(fan.cones)):
        for r in fan.cones[i].rays:
            assert dot(h.linear_part(i), r) == 0


def test_support_globally_linear():
    fan = example1_fan()
    a = (3, -1)
    values = [dot(a, r) for r in fan.input_rays]
    h = support_from_ray_values(fan, values)
    for i in fan.maximal_ids:
        assert h.linear_part(i) == a


def test_support_not_integral():
    # On cone((1,1),(1,-1)) values (1,0) force the functional (1/2, 1/2).
    fan = build_fan(2, [[1, 1], [1, -1], [-1, 0]], [[0, 1], [1, 2], [2, 0]])
    with pytest.raises(NotIntegral):
        support_from_ray_values(fan, [1, 0, 0])


def test_support_not_linear_on_cone():
    # On the cone over a square, r1 + r3 == r2 + r4 forces v1 + v3 == v2 + v4;
    # these values break that while every simplicial face stays integral.
    rays = [(1, 1, 1), (-1, 1, 1), (-1, -1, 1), (1, -1, 1),
            (0, 0, -1)]
    maximal = [[0, 1, 2, 3], [0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]]
    fan = build_fan(3, rays, maximal)
    with pytest.raises(NotLinearOnCone):
        support_from_ray_values(fan, [2, 0, 0, 0, 0])


def test_support_face_consistency_invariant():
    rng = random.Random(13)
    from conftest import random_support_2d

    for _ in range(20):
        fan = random_fan_2d(rng)
        h = random_support_2d(rng, fan)
        for fid, cid in fan.face_relation:
            diff = tuple(a - b for a, b in zip(h.linear_part(cid), h.linear_part(fid)))
            for r in fan.cones[fid].rays:
                assert dot(diff, r) == 0


def test_normal_fan_unit_square():
    fan, h = normal_fan_of_polytope(unit_square())
    assert set(fan.rays) == {(1, 0), (0, 1), (-1, 0), (0, -1)}
    assert h.value((1, 0)) == 0
    assert h.value((0, 1)) == 0
    assert h.value((-1, 0)) == 1
    assert h.value((0, -1)) == 1
    sid = next(i for i in fan.maximal_ids if h.linear_part(i) == (-1, -1))
    # the cone of the vertex (1,1) consists of directions minimized there
    cone = fan.cones[sid]
    assert all(dot((1, 1), r) <= min(dot(w, r) for w in unit_square().vertices)
               for r in cone.rays)


def test_normal_fan_segment():
    p = lattice_polytope(1, [[0], [2]])
    fan, h = normal_fan_of_polytope(p)
    assert set(fan.rays) == {(1,), (-1,)}
    assert h.value((1,)) == 0
    assert h.value((-1,)) == 2
    # vertex 2: shifted dual cone is 2 + R_{<=0}
    sid = fan.cone_id([(-1,)])
    assert h.linear_part(sid) == (-2,)


def test_normal_fan_standard_simplex():
    p = lattice_polytope(2, [[0, 0], [1, 0], [0, 1]])
    fan, h = normal_fan_of_polytope(p)
    # inner facet normals of the simplex
    assert set(fan.rays) == {(1, 0), (0, 1), (-1, -1)}
    for w in p.vertices:
        sid = next(i for i in fan.maximal_ids
                   if h.linear_part(i) == tuple(-x for x in w))
        assert fan.cones[sid].dim == 2


def test_normal_fan_always_complete():
    rng = random.Random(21)
    for _ in range(15):
        pts = {tuple(rng.randint(-3, 3) for _ in range(2)) for _ in range(rng.randint(3, 7))}
        try:
            p = lattice_polytope(2, pts)
        except DegeneratePolytope:
            continue
        fan, h = normal_fan_of_polytope(p)
        assert check_complete(fan).complete
        # linear part at each vertex cone is minus the vertex
        for w in p.vertices:
            assert any(h.linear_part(i) == tuple(-x for x in w)
                       for i in fan.maximal_ids)


def test_lattice_polytope_drops_non_vertices():
    p = lattice_polytope(2, [[0, 0], [2, 0], [1, 0], [0, 2], [1, 1]])
    assert p.vertices == ((0, 0), (0, 2), (2, 0))


def test_lattice_polytope_degenerate():
    with pytest.raises(DegeneratePolytope):
        lattice_polytope(2, [[0, 0], [1, 0], [2, 0]])
