"""Cell structures on the unit sphere induced by complete fans.

Each nonzero cone of the fan meets the sphere in one closed cell of
dimension dim(cone) - 1; the empty cell sits in degree -1 and carries the
augmentation.  Incidence numbers come from comparing chosen orientations of
the cells, and reduced homology is read off integer boundary matrices via
Smith normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .intlinalg import (
    determinant,
    invariant_factors,
    is_zero_matrix,
    matmul,
    rank,
)
from .polyhedral import Fan


class NotFaceClosed(Exception):
    """The selected cone ids do not form a subcomplex."""


@dataclass
class CellComplex:
    """Regular cell decomposition of S^(n-1) coming from a fan.

    ``basis`` holds, per nonzero cone, the ordered spanning rays used to
    orient its cell.  Any consistent choice works; this one is deterministic
    so that boundary matrices are reproducible.
    """

    fan: Fan
    basis: dict[int, tuple]
    cells_by_degree: dict[int, tuple[int, ...]]
    _incidence: dict[tuple[int, int], int] = field(default_factory=dict, repr=False)
    _homology: dict = field(default_factory=dict, repr=False)

    @property
    def empty_cell(self) -> int:
        return self.fan.zero_id


def _greedy_ray_basis(rays):
    basis = []
    r = 0
    for v in rays:
        if rank([list(b) for b in basis] + [list(v)]) > r:
            basis.append(v)
            r += 1
    return basis


def cell_complex(f: Fan) -> CellComplex:
    """Build the sphere cell complex of a complete fan."""
    n = f.ambient_dim
    basis = {}
    cells: dict[int, list[int]] = {d: [] for d in range(-1, n)}
    cells[-1].append(f.zero_id)
    for i, c in enumerate(f.cones):
        if c.dim == 0:
            continue
        b = _greedy_ray_basis(c.rays)
        if c.dim == n and n >= 2:
            cols = [[b[j][i2] for j in range(n)] for i2 in range(n)]
            if determinant(cols) < 0:
                b[0], b[1] = b[1], b[0]
        basis[i] = tuple(b)
        cells[c.dim - 1].append(i)
    return CellComplex(fan=f, basis=basis,
                       cells_by_degree={d: tuple(ids) for d, ids in cells.items()})


def _first_independent_rows(cols, d, n):
    """Lexicographically first row subset on which the column set is invertible."""
    from itertools import combinations

    for rows in combinations(range(n), d):
        sub = [[col[r] for col in cols] for r in rows]
        if determinant(sub) != 0:
            return rows
    raise AssertionError("columns are not independent")


def incidence(cc: CellComplex, sigma_id: int, tau_id: int) -> int:
    """Incidence number of the cells of two cones; 0 unless tau is a facet
    of sigma.  Rays are incident to the empty cell with coefficient 1."""
    key = (sigma_id, tau_id)
    cached = cc._incidence.get(key)
    if cached is not None:
        return cached
    fan = cc.fan
    if (tau_id, sigma_id) not in fan.face_relation:
        result = 0
    elif tau_id == cc.empty_cell:
        result = 1
    else:
        sigma = fan.cones[sigma_id]
        n = fan.ambient_dim
        d = sigma.dim
        bs = cc.basis[sigma_id]
        bt = cc.basis[tau_id]
        tau_rays = [list(r) for r in bt]
        w = next(r for r in sigma.rays if rank(tau_rays + [list(r)]) == d)
        cand = list(bt) + [w]
        rows = _first_independent_rows(bs, d, n)
        det_s = determinant([[v[r] for v in bs] for r in rows])
        det_c = determinant([[v[r] for v in cand] for r in rows])
        assert det_c != 0
        result = 1 if (det_s > 0) == (det_c > 0) else -1
    cc._incidence[key] = result
    return result


@dataclass
class ChainComplex:
    """Augmented integer cellular chain complex of a subcomplex.

    ``ranks[d]`` is the number of cells in degree d for d in -1 .. n-1 and
    ``boundaries[d]`` is the matrix of the boundary map from degree d to
    degree d-1, with rows indexed by degree d-1 cells.
    """

    ambient_dim: int
    ranks: dict[int, int]
    boundaries: dict[int, list[list[int]]]


def chain_complex(cc: CellComplex, keep) -> ChainComplex:
    """Chain complex of the subcomplex spanned by the selected nonzero cones.

    ``keep`` is a collection of cone ids or a predicate on them.  The empty
    cell is always present in degree -1, so the empty selection yields the
    augmented complex of the empty subcomplex.
    """
    fan = cc.fan
    n = fan.ambient_dim
    if callable(keep):
        keep = frozenset(i for i, c in enumerate(fan.cones)
                         if c.dim > 0 and keep(i))
    else:
        keep = frozenset(keep)
    for i in keep:
        if fan.cones[i].dim == 0:
            raise ValueError("the zero cone is not a cell; it is always implied")
        for fid in fan.facet_ids(i):
            if fid != cc.empty_cell and fid not in keep:
                raise NotFaceClosed(
                    f"cone {i} is kept but its facet {fid} is not")
    cells = {-1: [cc.empty_cell]}
    for d in range(0, n):
        cells[d] = [i for i in cc.cells_by_degree[d] if i in keep]
    ranks = {d: len(cells[d]) for d in range(-1, n)}
    boundaries = {}
    for d in range(0, n):
        mat = [[incidence(cc, s, t) for s in cells[d]] for t in cells[d - 1]]
        boundaries[d] = mat
    for d in range(0, n - 1):
        lower, upper = boundaries[d], boundaries[d + 1]
        if lower and upper and lower[0] and upper[0]:
            assert is_zero_matrix(matmul(lower, upper)), "boundary of boundary is nonzero"
    return ChainComplex(ambient_dim=n, ranks=ranks, boundaries=boundaries)


@dataclass
class HomologyResult:
    """Reduced homology of an augmented complex: free ranks over Q and the
    invariant factor torsion of the integral homology, per degree."""

    betti: dict[int, int]
    torsion: dict[int, tuple[int, ...]]


def reduced_homology(c: ChainComplex) -> HomologyResult:
    n = c.ambient_dim
    factors = {}
    for d in range(0, n):
        mat = c.boundaries[d]
        factors[d] = invariant_factors(mat) if (mat and mat[0]) else []
    betti = {}
    torsion = {}
    for d in range(-1, n):
        rank_in = len(factors.get(d, []))
        rank_out = len(factors.get(d + 1, []))
        betti[d] = c.ranks[d] - rank_in - rank_out
        torsion[d] = tuple(x for x in factors.get(d + 1, []) if x > 1)
    return HomologyResult(betti=betti, torsion=torsion)


def homology_dims_mod_p(c: ChainComplex, p: int) -> dict[int, int]:
    """Dimensions of the reduced homology with coefficients in F_p."""
    n = c.ambient_dim
    ranks_p = {}
    for d in range(0, n):
        mat = c.boundaries[d]
        if mat and mat[0]:
            ranks_p[d] = sum(1 for x in invariant_factors(mat) if x % p != 0)
        else:
            ranks_p[d] = 0
    return {d: c.ranks[d] - ranks_p.get(d, 0) - ranks_p.get(d + 1, 0)
            for d in range(-1, n)}


def euler_characteristic(c: ChainComplex) -> int:
    """Alternating sum of chain ranks in cochain (codimension) indexing."""
    n = c.ambient_dim
    return sum((-1) ** (n - 1 - d) * c.ranks[d] for d in range(-1, n))


def subcomplex_homology(cc: CellComplex, keep) -> HomologyResult:
    """Memoized reduced homology of a subcomplex, keyed by its cone ids."""
    key = frozenset(keep)
    cached = cc._homology.get(key)
    if cached is None:
        cached = reduced_homology(chain_complex(cc, key))
        cc._homology[key] = cached
    return cached
