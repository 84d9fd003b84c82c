"""Shared fixtures: the worked 2-D example, polytopes, and seeded random
complete fans in dimensions 2 and 3."""

import random
from functools import cmp_to_key

import pytest

from toricgf import build_fan, lattice_polytope, support_from_ray_values
from toricgf.intlinalg import determinant, dot, primitive_vector
from toricgf.polyhedral import NotIntegral, NotLinearOnCone


def example1_fan():
    """Complete 2-D fan on rays (1,1),(0,1),(-1,1),(0,-1)."""
    return build_fan(2, [[1, 1], [0, 1], [-1, 1], [0, -1]],
                     [[0, 1], [1, 2], [2, 3], [3, 0]])


def example1_support():
    return support_from_ray_values(example1_fan(), [0, -2, 0, -2])


def p2_fan():
    return build_fan(2, [[1, 0], [0, 1], [-1, -1]], [[0, 1], [1, 2], [2, 0]])


def octahedron_fan_data():
    rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0), (0, -1, 0), (0, 0, -1)]
    maximal = [[a, b, c] for a in (0, 3) for b in (1, 4) for c in (2, 5)]
    return rays, maximal


def octahedron_fan():
    rays, maximal = octahedron_fan_data()
    return build_fan(3, rays, maximal)


def unit_square():
    return lattice_polytope(2, [[0, 0], [1, 0], [0, 1], [1, 1]])


def _angular_cmp(v, w):
    def half(u):
        return 0 if (u[1] > 0 or (u[1] == 0 and u[0] > 0)) else 1

    hv, hw = half(v), half(w)
    if hv != hw:
        return hv - hw
    cross = v[0] * w[1] - v[1] * w[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


_DIAGONALS = [(1, 1), (-1, 1), (-1, -1), (1, -1)]
_STEEP = [(2, 1), (1, 2), (-2, 1), (-1, 2), (-2, -1), (-1, -2), (2, -1), (1, -2)]


def random_fan_2d(rng: random.Random):
    """Random complete 2-D fan: the four axis rays, a random selection of
    diagonals, and occasionally a steeper primitive ray."""
    rays = {(1, 0), (0, 1), (-1, 0), (0, -1)}
    rays.update(rng.sample(_DIAGONALS, rng.randint(0, 4)))
    if rng.random() < 0.3:
        rays.add(rng.choice(_STEEP))
    ordered = sorted(rays, key=cmp_to_key(_angular_cmp))
    maximal = [[i, (i + 1) % len(ordered)] for i in range(len(ordered))]
    return build_fan(2, ordered, maximal)


def random_support_2d(rng: random.Random, fan, bound: int = 2):
    """Random integral support values on a complete 2-D fan.

    Walk the maximal cones in angular order, bending the linear part across
    each shared ray by a multiple of the functional vanishing on it; only
    the closing cone can then fail integrality, and the walk is retried.
    """
    ordered = sorted(fan.rays, key=cmp_to_key(_angular_cmp))
    m = len(ordered)
    for _ in range(500):
        h = (rng.randint(-bound, bound), rng.randint(-bound, bound))
        values = {ordered[0]: dot(h, ordered[0]), ordered[1]: dot(h, ordered[1])}
        for i in range(1, m - 1):
            r = ordered[i]
            k = (-r[1], r[0])
            t = rng.randint(-1, 1)
            cand = (h[0] + t * k[0], h[1] + t * k[1])
            if max(abs(c) for c in cand) <= bound:
                h = cand
            values[ordered[i + 1]] = dot(h, ordered[i + 1])
        vals = [values[r] for r in fan.input_rays]
        try:
            return support_from_ray_values(fan, vals)
        except (NotIntegral, NotLinearOnCone):
            continue
    raise AssertionError("no valid support values found")


def random_fan_3d(rng: random.Random, subdivisions: int = 0):
    """Random complete simplicial 3-D fan: the octahedron fan with a number
    of barycentric ray insertions.  All cones stay unimodular, so every
    integer value assignment is a valid support function."""
    rays, maximal = octahedron_fan_data()
    rays = list(rays)
    maximal = [list(c) for c in maximal]
    for _ in range(subdivisions):
        pick = rng.randrange(len(maximal))
        cone = maximal.pop(pick)
        w = primitive_vector(tuple(sum(rays[i][j] for i in cone) for j in range(3)))
        rays.append(w)
        new = len(rays) - 1
        for omit in range(3):
            maximal.append([new] + [cone[j] for j in range(3) if j != omit])
    fan = build_fan(3, rays, maximal)
    for i in fan.maximal_ids:
        cols = [[r[j] for r in fan.cones[i].rays] for j in range(3)]
        assert determinant(cols) in (1, -1)
    return fan


def random_support_3d(rng: random.Random, fan, spread: int = 1):
    values = [rng.randint(-spread, spread) for _ in fan.input_rays]
    return support_from_ray_values(fan, values)


@pytest.fixture
def ex1():
    return example1_support()
