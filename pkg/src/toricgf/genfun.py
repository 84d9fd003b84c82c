"""Multivariate Laurent polynomials and exact cone generating functions.

A LaurentPolynomial is a finite exponent-to-coefficient map over Z.  A
RationalGF is a numerator together with a multiset of primitive vectors g,
each standing for a denominator factor (1 - x^g); no polynomial gcd
cancellation is ever attempted, since equality is decided by
cross-multiplication.  Generating functions of shifted full-dimensional
pointed cones are assembled from a disjoint half-open triangulation, one
fundamental parallelepiped per simplicial piece.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product

from .intlinalg import (
    Vector,
    adjugate,
    determinant,
    dot,
    kernel_basis,
    matvec,
    primitive_vector,
    smith_normal_form,
    unimodular_inverse,
)
from .polyhedral import Cone, cone_from_rays, face_lattice


class NotPointed(Exception):
    """The cone contains a line, so its lattice series is not rational here."""


class NotFullDimensional(Exception):
    """The operation needs a full-dimensional cone."""


class DependentGenerators(Exception):
    """Parallelepiped generators must be linearly independent."""


class LaurentPolynomial:
    """Finite map from integer exponent vectors to nonzero coefficients.

    >>> x = LaurentPolynomial.monomial((1,))
    >>> (x + x).terms
    {(1,): 2}
    >>> ((1 - x) * (1 + x)).terms == {(0,): 1, (2,): -1}
    True
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: dict[Vector, int] | None = None):
        self.dim = dim
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def zero(cls, dim: int) -> "LaurentPolynomial":
        return cls(dim)

    @classmethod
    def monomial(cls, exponent, coeff: int = 1) -> "LaurentPolynomial":
        e = tuple(int(x) for x in exponent)
        return cls(len(e), {e: coeff})

    @classmethod
    def constant(cls, dim: int, value: int) -> "LaurentPolynomial":
        return cls(dim, {(0,) * dim: value})

    def coefficient(self, exponent) -> int:
        return self.terms.get(tuple(exponent), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.constant(self.dim, other)
        return isinstance(other, LaurentPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, int):
            return LaurentPolynomial.constant(self.dim, other)
        if isinstance(other, LaurentPolynomial):
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPolynomial(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        # Convolution; iterate over the smaller factor.
        a, b = (self, other) if len(self.terms) <= len(other.terms) else (other, self)
        out: dict[Vector, int] = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(e, 0) + ca * cb
                if s:
                    out[e] = s
                else:
                    del out[e]
        return LaurentPolynomial(self.dim, out)

    __rmul__ = __mul__

    def scale(self, k: int) -> "LaurentPolynomial":
        return LaurentPolynomial(self.dim, {e: k * c for e, c in self.terms.items()})

    def shift(self, b) -> "LaurentPolynomial":
        """Multiply by the monomial x^b."""
        b = tuple(b)
        return LaurentPolynomial(
            self.dim, {tuple(x + y for x, y in zip(e, b)): c
                       for e, c in self.terms.items()})

    def sorted_terms(self) -> list[tuple[Vector, int]]:
        """Terms in graded lexicographic exponent order."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = [f"{c}*x^{list(e)}" for e, c in self.sorted_terms()]
        return " + ".join(bits)


def binomial_product(dim: int, factors) -> LaurentPolynomial:
    """Product of (1 - x^g) over the given factor vectors."""
    out = LaurentPolynomial.constant(dim, 1)
    for g in factors:
        out = out - out.shift(g)
    return out


@dataclass(frozen=True)
class RationalGF:
    """numerator / product of (1 - x^g) over the factor multiset."""

    numerator: LaurentPolynomial
    denominator_factors: tuple[Vector, ...]

    def __post_init__(self):
        object.__setattr__(self, "denominator_factors",
                           tuple(sorted(self.denominator_factors)))

    @property
    def dim(self) -> int:
        return self.numerator.dim

    @classmethod
    def from_polynomial(cls, p: LaurentPolynomial) -> "RationalGF":
        return cls(numerator=p, denominator_factors=())

    def __add__(self, other: "RationalGF") -> "RationalGF":
        ca = Counter(self.denominator_factors)
        cb = Counter(other.denominator_factors)
        common = ca | cb
        num = (self.numerator * binomial_product(self.dim, (common - ca).elements())
               + other.numerator * binomial_product(self.dim, (common - cb).elements()))
        return RationalGF(num, tuple(common.elements()))

    def __repr__(self):
        return f"({self.numerator!r}) / prod(1 - x^g for g in {list(self.denominator_factors)})"


def rational_equal(a: RationalGF, b: RationalGF) -> bool:
    """Exact equality in the quotient field, by cross-multiplication.

    Common denominator factors are cancelled first; the binomials are not
    zero divisors, so this is sound.
    """
    ca = Counter(a.denominator_factors)
    cb = Counter(b.denominator_factors)
    left = a.numerator * binomial_product(a.dim, (cb - ca).elements())
    right = b.numerator * binomial_product(b.dim, (ca - cb).elements())
    return left == right


_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
           67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137,
           139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199]


@dataclass(frozen=True)
class HalfOpenSimplicialCone:
    """Simplicial piece of a triangulation with per-facet openness flags.

    ``closed_flags[i]`` refers to the facet opposite ``generators[i]``; a
    False entry excludes that facet, i.e. forces lambda_i > 0.
    """

    generators: tuple[Vector, ...]
    closed_flags: tuple[bool, ...]


def _triangulate_rays(c: Cone) -> list[tuple[Vector, ...]]:
    """Pulling triangulation using only the rays of the cone."""
    if c.dim == len(c.rays):
        return [c.rays]
    r0 = c.rays[0]
    pieces = []
    for face, d in face_lattice(c):
        if d != c.dim - 1 or r0 in face.rays:
            continue
        for sub in _triangulate_rays(face):
            pieces.append((r0,) + sub)
    return pieces


def _inward_normals(gens: tuple[Vector, ...]) -> list[Vector]:
    """For each generator, the primitive facet normal of the opposite facet,
    oriented into the simplicial cone."""
    n = len(gens[0])
    normals = []
    for i, g in enumerate(gens):
        others = [list(v) for j, v in enumerate(gens) if j != i]
        ker = kernel_basis(others, cols=n)
        assert len(ker) == 1
        u = primitive_vector(ker[0])
        if dot(u, g) < 0:
            u = tuple(-x for x in u)
        assert dot(u, g) > 0
        normals.append(u)
    return normals


def triangulate_halfopen(c: Cone) -> list[HalfOpenSimplicialCone]:
    """Decompose a full-dimensional pointed cone into pairwise disjoint
    half-open simplicial cones covering it exactly.

    A deterministic rational reference point in the interior decides which
    shared facets stay closed: the piece on the same side as the reference
    keeps the facet.
    """
    if not c.pointed:
        raise NotPointed(f"{c} contains a line")
    if c.dim != c.ambient_dim:
        raise NotFullDimensional(f"{c} has dimension {c.dim} < {c.ambient_dim}")
    simplices = _triangulate_rays(c)
    normals = [_inward_normals(gens) for gens in simplices]
    for start in range(len(_PRIMES) - len(c.rays)):
        weights = _PRIMES[start:start + len(c.rays)]
        z = tuple(sum(w * r[i] for w, r in zip(weights, c.rays))
                  for i in range(c.ambient_dim))
        if all(dot(u, z) != 0 for ns in normals for u in ns):
            break
    else:
        raise AssertionError("no generic reference point found")
    pieces = []
    for gens, ns in zip(simplices, normals):
        flags = tuple(dot(u, z) > 0 for u in ns)
        pieces.append(HalfOpenSimplicialCone(gens, flags))
    return pieces


def parallelepiped_points(generators, closed_flags=None) -> list[Vector]:
    """Lattice points of the half-open fundamental parallelepiped.

    The parallelepiped is {sum lambda_i g_i} with lambda_i in [0,1) where
    the facet opposite g_i is closed and (0,1] where it is open.  The point
    count always equals |det(generators)|.
    """
    gens = [tuple(g) for g in generators]
    if not gens:
        return [()]
    n = len(gens[0])
    if len(gens) != n:
        raise DependentGenerators(
            f"need {n} independent generators in dimension {n}, got {len(gens)}")
    if closed_flags is None:
        closed_flags = (True,) * n
    g_cols = [[gens[j][i] for j in range(n)] for i in range(n)]
    det = determinant(g_cols)
    if det == 0:
        raise DependentGenerators(f"generators {gens} are linearly dependent")
    adj = adjugate(g_cols)
    snf = smith_normal_form(g_cols)
    uinv = unimodular_inverse(snf.U)
    points = []
    for residue in product(*(range(d) for d in snf.diagonal())):
        x = matvec(uinv, list(residue))
        lam_num = matvec(adj, x)  # lambda_i = lam_num[i] / det
        shift = []
        for i in range(n):
            if closed_flags[i]:
                k = lam_num[i] // det  # floor of the exact rational
            else:
                k = -((-lam_num[i]) // det) - 1  # ceil - 1
            shift.append(k)
        pt = tuple(x[i] - sum(g_cols[i][j] * shift[j] for j in range(n))
                   for i in range(n))
        points.append(pt)
    assert len(set(points)) == abs(det)
    return sorted(points)


def in_half_open_piece(piece: HalfOpenSimplicialCone, x) -> bool:
    """Exact membership of a lattice point in a half-open simplicial cone."""
    gens = piece.generators
    n = len(gens[0])
    g_cols = [[gens[j][i] for j in range(n)] for i in range(n)]
    det = determinant(g_cols)
    lam_num = matvec(adjugate(g_cols), list(x))
    for i in range(n):
        num = lam_num[i] if det > 0 else -lam_num[i]
        if num < 0 or (num == 0 and not piece.closed_flags[i]):
            return False
    return True


def cone_genfun(shift, c: Cone) -> RationalGF:
    """Exact rational generating function of the lattice points of shift + c.

    Assembled as a sum over half-open simplicial pieces of
    (sum over parallelepiped points p of x^(shift+p)) / prod(1 - x^g_i),
    brought over a common denominator.
    """
    if not c.pointed:
        raise NotPointed(f"{c} contains a line")
    if c.dim != c.ambient_dim:
        raise NotFullDimensional(f"{c} has dimension {c.dim} < {c.ambient_dim}")
    shift = tuple(int(x) for x in shift)
    total = None
    for piece in triangulate_halfopen(c):
        pts = parallelepiped_points(piece.generators, piece.closed_flags)
        num = LaurentPolynomial(c.ambient_dim,
                                {tuple(s + p for s, p in zip(shift, pt)): 1
                                 for pt in pts})
        term = RationalGF(num, piece.generators)
        total = term if total is None else total + term
    return total


@dataclass(frozen=True)
class SeriesBox:
    """Coefficients of a formal series restricted to a finite exponent box."""

    box: tuple[tuple[int, int], ...]
    coefficients: dict[Vector, int]

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients",
            {e: c for e, c in self.coefficients.items() if c != 0})
        for e in self.coefficients:
            assert all(lo <= x <= hi for x, (lo, hi) in zip(e, self.box))

    def __eq__(self, other):
        return (isinstance(other, SeriesBox) and self.box == other.box
                and self.coefficients == other.coefficients)


def box_points(box):
    return product(*(range(lo, hi + 1) for lo, hi in box))


def truncated_series(shift, c: Cone, box) -> SeriesBox:
    """Indicator series of (shift + c) on a box, by direct membership tests.

    This is the independent oracle: it only evaluates the cone's inequality
    description and shares nothing with the generating function assembly.
    """
    shift = tuple(int(x) for x in shift)
    box = tuple((int(lo), int(hi)) for lo, hi in box)
    coeffs = {}
    for pt in box_points(box):
        moved = tuple(x - s for x, s in zip(pt, shift))
        if c.contains(moved):
            coeffs[pt] = 1
    return SeriesBox(box=box, coefficients=coeffs)


def expand_in_box(gf: RationalGF, box) -> SeriesBox:
    """Laurent series coefficients of a cone generating function on a box.

    Each factor 1/(1 - x^g) is expanded as the geometric series in the
    direction of g.  This is well defined because the factor directions span
    a pointed cone, on which a strictly positive integer functional exists
    and bounds the expansion depth needed to cover the box.
    """
    box = tuple((int(lo), int(hi)) for lo, hi in box)
    dim = gf.dim
    factors = list(gf.denominator_factors)
    if factors:
        fac_cone = cone_from_rays(dim, factors)
        if not fac_cone.pointed:
            raise NotPointed("factor directions span a cone with a line")
        phi = tuple(sum(u[i] for u in fac_cone.inequalities) for i in range(dim))
        assert all(dot(phi, g) >= 1 for g in factors)
        bound = sum(max(phi[i] * lo, phi[i] * hi) for i, (lo, hi) in enumerate(box))
        terms = dict(gf.numerator.terms)
        for g in factors:
            new: dict[Vector, int] = {}
            for e, coeff in terms.items():
                cur = e
                while dot(phi, cur) <= bound:
                    new[cur] = new.get(cur, 0) + coeff
                    cur = tuple(x + y for x, y in zip(cur, g))
            terms = new
    else:
        terms = dict(gf.numerator.terms)
    coeffs = {e: c for e, c in terms.items()
              if all(lo <= x <= hi for x, (lo, hi) in zip(e, box))}
    return SeriesBox(box=box, coefficients=coeffs)
