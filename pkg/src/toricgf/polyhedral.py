"""Cones, fans, support functions, and normal fans of lattice polytopes.

All cones are rational polyhedral cones in an ambient Z^n, kept in a double
description: a list of primitive generators and a list of integer inequality
vectors u with cone = {x : <u, x> >= 0 for all u}.  Linear span constraints
are folded into the inequality list as +-pairs.  Conversions between the two
descriptions go through exhaustive supporting-hyperplane enumeration, which
is exact and entirely adequate at desk scale (n <= 4, a few dozen rays).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .intlinalg import (
    Vector,
    dot,
    kernel_basis,
    primitive_vector,
    rank,
    rationally_solvable,
    solve_integral,
)


class FanAxiomViolation(Exception):
    """Two cones of a purported fan intersect in a non-face."""


class NonPointedCone(Exception):
    """A cone required to be strongly convex contains a line."""


class NotLinearOnCone(Exception):
    """Ray values on a cone admit no common linear functional."""


class NotIntegral(Exception):
    """Ray values force a rational but non-integral linear functional."""


class DegeneratePolytope(Exception):
    """The given points do not span a full-dimensional polytope."""


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone with both descriptions precomputed.

    ``rays`` is the minimal generating set (the extreme rays) when the cone
    is pointed; for non-pointed cones it is a primitive generating set that
    includes both directions of each line.
    """

    ambient_dim: int
    rays: tuple[Vector, ...]
    inequalities: tuple[Vector, ...]
    dim: int
    pointed: bool

    def contains(self, x) -> bool:
        return all(dot(u, x) >= 0 for u in self.inequalities)

    def is_simplicial(self) -> bool:
        return self.pointed and len(self.rays) == self.dim

    def __repr__(self):
        kind = "cone" if self.pointed else "cone*"
        return f"{kind}{list(self.rays)}"


def _greedy_basis(vectors) -> list[Vector]:
    """Maximal linearly independent subset, scanning in the given order."""
    basis: list[Vector] = []
    r = 0
    for v in vectors:
        if rank([list(b) for b in basis] + [list(v)]) > r:
            basis.append(v)
            r += 1
    return basis


def _hull_description(gens: list[Vector], n: int):
    """Span equations and facet normals of cone(gens).

    Returns (dim, equations, facets) where equations is an integer basis of
    the orthogonal complement of span(gens) and facets are the primitive
    inward facet normals of the cone inside its span.
    """
    if not gens:
        return 0, [tuple(r) for r in kernel_basis([], cols=n)], []
    d = rank([list(g) for g in gens])
    equations = kernel_basis([list(g) for g in gens])
    span = _greedy_basis(gens)
    facets = set()
    if d >= 1:
        for subset in combinations(gens, d - 1):
            # Normal inside span(gens) of the hyperplane spanned by subset.
            m = [[dot(s, b) for b in span] for s in subset]
            ker = kernel_basis(m, cols=d)
            if len(ker) != 1:
                continue
            t = ker[0]
            u = tuple(sum(t[j] * span[j][i] for j in range(d)) for i in range(n))
            u = primitive_vector(u)
            signs = [dot(u, g) for g in gens]
            if all(s >= 0 for s in signs):
                facets.add(u)
            elif all(s <= 0 for s in signs):
                facets.add(tuple(-x for x in u))
    return d, equations, sorted(facets)


def cone_from_rays(ambient_dim: int, generators, *, require_pointed: bool = False) -> Cone:
    """Cone spanned by integer generator vectors.

    Generators are reduced to primitive form; zero vectors are dropped.  For
    pointed cones the stored ray list is the set of extreme rays.
    """
    gens = sorted({primitive_vector(tuple(g)) for g in generators
                   if any(x != 0 for x in g)})
    for g in gens:
        if len(g) != ambient_dim:
            raise ValueError(f"generator {g} does not live in dimension {ambient_dim}")
    d, equations, facets = _hull_description(gens, ambient_dim)
    ineqs = list(facets)
    for e in sorted(equations):
        ineqs.append(tuple(e))
        ineqs.append(tuple(-x for x in e))
    pointed = rank([list(u) for u in ineqs]) == ambient_dim if ineqs else ambient_dim == 0
    if require_pointed and not pointed:
        raise NonPointedCone(f"generators {gens} span a cone containing a line")
    if pointed:
        rays = []
        for g in gens:
            tight = [list(u) for u in facets if dot(u, g) == 0]
            tight += [list(e) for e in equations]
            if rank(tight) == ambient_dim - 1:
                rays.append(g)
        rays = sorted(rays)
    else:
        rays = gens
    return Cone(ambient_dim=ambient_dim, rays=tuple(rays),
                inequalities=tuple(ineqs), dim=d, pointed=pointed)


def generators_from_inequalities(ambient_dim: int, inequalities) -> list[Vector]:
    """A finite generating set of {x : <u, x> >= 0 for all u}.

    By conic duality this is the inequality list of the cone spanned by the
    inequality vectors themselves.
    """
    return list(cone_from_rays(ambient_dim, inequalities).inequalities)


def dual_cone(c: Cone) -> Cone:
    """The cone of functionals nonnegative on c."""
    if not c.inequalities:
        return cone_from_rays(c.ambient_dim, [])
    return cone_from_rays(c.ambient_dim, c.inequalities)


def face_lattice(c: Cone) -> list[tuple[Cone, int]]:
    """All faces of a strongly convex cone, including c and the zero cone."""
    if not c.pointed:
        raise NonPointedCone("face lattice requires a strongly convex cone")
    ray_sets: set[frozenset[Vector]] = set()
    if c.is_simplicial():
        for k in range(len(c.rays) + 1):
            for subset in combinations(c.rays, k):
                ray_sets.add(frozenset(subset))
    else:
        facets = [u for u in c.inequalities]
        for k in range(len(facets) + 1):
            for subset in combinations(facets, k):
                tight = frozenset(g for g in c.rays
                                  if all(dot(u, g) == 0 for u in subset))
                ray_sets.add(tight)
    faces = [cone_from_rays(c.ambient_dim, sorted(rs)) for rs in ray_sets]
    faces.sort(key=lambda f: (f.dim, f.rays))
    return [(f, f.dim) for f in faces]


class Fan:
    """A face-closed collection of strongly convex cones with common-face
    intersections, indexed deterministically by (dim, lexicographic rays)."""

    def __init__(self, ambient_dim: int, cones: list[Cone],
                 face_relation: set[tuple[int, int]], input_rays: tuple[Vector, ...]):
        self.ambient_dim = ambient_dim
        self.cones = tuple(cones)
        self.face_relation = frozenset(face_relation)
        self.input_rays = input_rays
        self.maximal_ids = tuple(i for i, c in enumerate(cones) if c.dim == ambient_dim)
        self.ray_ids = tuple(i for i, c in enumerate(cones) if c.dim == 1)
        self._facets_of: dict[int, tuple[int, ...]] = {}
        for fid, cid in sorted(face_relation):
            self._facets_of.setdefault(cid, ())
            self._facets_of[cid] += (fid,)
        self._by_rays = {frozenset(c.rays): i for i, c in enumerate(self.cones)}

    @property
    def rays(self) -> tuple[Vector, ...]:
        """Primitive generators of the 1-dimensional cones, in id order."""
        return tuple(self.cones[i].rays[0] for i in self.ray_ids)

    def facet_ids(self, cone_id: int) -> tuple[int, ...]:
        return self._facets_of.get(cone_id, ())

    def cone_id(self, rays) -> int:
        return self._by_rays[frozenset(tuple(r) for r in rays)]

    @property
    def zero_id(self) -> int:
        return self.cone_id(())

    def __repr__(self):
        return (f"Fan(dim={self.ambient_dim}, cones={len(self.cones)}, "
                f"maximal={len(self.maximal_ids)})")


def build_fan(ambient_dim: int, rays, maximal_cones) -> Fan:
    """Assemble and validate a fan from rays and maximal ray-index sets.

    Raises NonPointedCone if a listed cone contains a line and
    FanAxiomViolation if two listed cones intersect in a non-face.
    """
    ray_list = []
    for r in rays:
        v = primitive_vector(tuple(r))
        if len(v) != ambient_dim:
            raise ValueError(f"ray {r} does not live in dimension {ambient_dim}")
        if v in ray_list:
            raise ValueError(f"duplicate ray {v}")
        ray_list.append(v)
    used = set()
    top = []
    for idxset in maximal_cones:
        idx = sorted(set(idxset))
        if not idx:
            raise ValueError("empty maximal cone")
        if any(i < 0 or i >= len(ray_list) for i in idx):
            raise ValueError(f"ray index out of range in {idxset}")
        used.update(idx)
        top.append(cone_from_rays(ambient_dim, [ray_list[i] for i in idx],
                                  require_pointed=True))
    if used != set(range(len(ray_list))):
        missing = sorted(set(range(len(ray_list))) - used)
        raise ValueError(f"rays {missing} are not used by any maximal cone")

    # Close under faces, remembering each cone's face ray-sets.
    cones_by_rays: dict[frozenset[Vector], Cone] = {}
    face_sets: dict[frozenset[Vector], set[frozenset[Vector]]] = {}

    def register(c: Cone):
        key = frozenset(c.rays)
        if key in face_sets:
            return
        faces = face_lattice(c)
        face_sets[key] = {frozenset(f.rays) for f, _ in faces}
        for f, _ in faces:
            fkey = frozenset(f.rays)
            if fkey not in cones_by_rays:
                cones_by_rays[fkey] = f
            if fkey != key and fkey not in face_sets:
                register(f)

    for c in top:
        register(c)

    # Pairwise intersections of the listed cones must be common faces; this
    # propagates to all faces automatically.
    for a, b in combinations(top, 2):
        gens = generators_from_inequalities(ambient_dim,
                                            a.inequalities + b.inequalities)
        inter = cone_from_rays(ambient_dim, gens)
        key = frozenset(inter.rays)
        if key not in face_sets[frozenset(a.rays)] or key not in face_sets[frozenset(b.rays)]:
            raise FanAxiomViolation(
                f"intersection of {a} and {b} is not a common face")

    ordered = sorted(cones_by_rays.values(), key=lambda c: (c.dim, c.rays))
    fan_rays = {c.rays[0] for c in ordered if c.dim == 1}
    for v in ray_list:
        if v not in fan_rays:
            raise ValueError(
                f"listed ray {v} is a redundant generator, not a ray of the fan")
    relation = set()
    for i, c in enumerate(ordered):
        for j, f in enumerate(ordered):
            if f.dim == c.dim - 1 and frozenset(f.rays) in face_sets[frozenset(c.rays)]:
                relation.add((j, i))
    return Fan(ambient_dim, ordered, relation, tuple(ray_list))


@dataclass
class CompletenessReport:
    complete: bool
    witness: str | None = None


def check_complete(f: Fan) -> CompletenessReport:
    """A fan is complete iff every ridge lies in exactly two maximal cones
    and the induced cell complex is a homology sphere."""
    n = f.ambient_dim
    if not f.maximal_ids:
        return CompletenessReport(False, "no full-dimensional cones")
    maximal = set(f.maximal_ids)
    for i, c in enumerate(f.cones):
        if c.dim != n - 1:
            continue
        parents = [cid for (fid, cid) in f.face_relation
                   if fid == i and cid in maximal]
        if len(parents) != 2:
            return CompletenessReport(
                False, f"ridge {list(c.rays)} lies in {len(parents)} maximal cone(s)")
    from .cellular import cell_complex, chain_complex, reduced_homology

    cc = cell_complex(f)
    keep = frozenset(i for i, c in enumerate(f.cones) if c.dim > 0)
    hom = reduced_homology(chain_complex(cc, keep))
    for d in range(-1, n):
        expected = 1 if d == n - 1 else 0
        if hom.betti[d] != expected:
            return CompletenessReport(
                False, f"reduced homology rank {hom.betti[d]} in degree {d}")
        if hom.torsion[d]:
            return CompletenessReport(False, f"torsion in homology degree {d}")
    return CompletenessReport(True)


@dataclass
class SupportFunction:
    """Integral piecewise linear data on a fan: one integer per ray, plus a
    representative linear functional per cone agreeing with those values."""

    fan: Fan
    ray_values: dict[Vector, int]
    linear_parts: dict[int, Vector]

    def value(self, ray: Vector) -> int:
        return self.ray_values[tuple(ray)]

    def linear_part(self, cone_id: int) -> Vector:
        return self.linear_parts[cone_id]


def support_from_ray_values(f: Fan, values) -> SupportFunction:
    """Solve for an integral linear functional on every cone of the fan.

    ``values`` is aligned with the ray list the fan was built from.  Raises
    NotLinearOnCone when no common functional exists on some cone and
    NotIntegral when a functional exists over Q but not over Z.
    """
    values = list(values)
    if len(values) != len(f.input_rays):
        raise ValueError(
            f"expected {len(f.input_rays)} ray values, got {len(values)}")
    by_ray = dict(zip(f.input_rays, (int(v) for v in values)))
    parts: dict[int, Vector] = {}
    for i, c in enumerate(f.cones):
        if c.dim == 0:
            parts[i] = (0,) * f.ambient_dim
            continue
        a = [list(r) for r in c.rays]
        b = [by_ray[r] for r in c.rays]
        h = solve_integral(a, b)
        if h is None:
            if rationally_solvable(a, b):
                raise NotIntegral(
                    f"values {b} on cone {list(c.rays)} need a non-integral functional")
            raise NotLinearOnCone(
                f"values {b} on cone {list(c.rays)} admit no linear functional")
        parts[i] = h
    # Representatives of a face and its parent agree on the face by
    # construction; spell the consistency check out anyway.
    for fid, cid in f.face_relation:
        for r in f.cones[fid].rays:
            assert dot(parts[fid], r) == dot(parts[cid], r)
    return SupportFunction(fan=f, ray_values=by_ray, linear_parts=parts)


@dataclass(frozen=True)
class LatticePolytope:
    """Full-dimensional lattice polytope given by its vertex set."""

    ambient_dim: int
    vertices: tuple[Vector, ...]


def _normal_cone(point: Vector, points: list[Vector], n: int) -> Cone:
    ineqs = [tuple(p[i] - point[i] for i in range(n))
             for p in points if p != point]
    return cone_from_rays(n, generators_from_inequalities(n, ineqs))


def lattice_polytope(ambient_dim: int, points) -> LatticePolytope:
    """Canonical polytope from a point list: keeps exactly the extreme points.

    Raises DegeneratePolytope when the points do not span dimension n.
    """
    pts = sorted({tuple(int(x) for x in p) for p in points})
    if not pts:
        raise DegeneratePolytope("no points given")
    for p in pts:
        if len(p) != ambient_dim:
            raise ValueError(f"point {p} does not live in dimension {ambient_dim}")
    base = pts[0]
    diffs = [[p[i] - base[i] for i in range(ambient_dim)] for p in pts[1:]]
    if rank(diffs) != ambient_dim:
        raise DegeneratePolytope(f"points span dimension {rank(diffs)} < {ambient_dim}")
    vertices = [p for p in pts
                if _normal_cone(p, pts, ambient_dim).dim == ambient_dim]
    return LatticePolytope(ambient_dim, tuple(sorted(vertices)))


def normal_fan_of_polytope(p: LatticePolytope) -> tuple[Fan, SupportFunction]:
    """Inner normal fan of a lattice polytope with its support data.

    The maximal cone attached to a vertex w consists of the directions
    minimized at w; its linear part equals -w, so the shifted dual cone is
    the tangent cone of the polytope at w.
    """
    n = p.ambient_dim
    verts = list(p.vertices)
    if len(verts) < n + 1:
        raise DegeneratePolytope("a full-dimensional polytope needs >= n+1 vertices")
    cones = [_normal_cone(w, verts, n) for w in verts]
    assert all(c.dim == n for c in cones)
    ray_list: list[Vector] = sorted({r for c in cones for r in c.rays})
    index = {r: i for i, r in enumerate(ray_list)}
    maximal = [[index[r] for r in c.rays] for c in cones]
    fan = build_fan(n, ray_list, maximal)
    values = [-min(dot(w, r) for w in verts) for r in ray_list]
    support = support_from_ray_values(fan, values)
    return fan, support
