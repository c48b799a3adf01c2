"""Self-contained exact polyhedral kernel.

Half-space and vertex representations of bounded polytopes over exact
rationals, with redundancy removal, Fourier-Motzkin projection, double
description vertex enumeration and algebraic adjacency.  All constraint
rows are kept in a canonical integer form (coprime integer entries under
positive rescaling) so that equal half-spaces compare equal.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from ._rat import ONE, ZERO, Rat, rat, scale_to_integers
from .errors import BudgetExceeded, DimensionMismatch, EmptyPolytope, UnboundedPolytope
from .ratlinalg import (
    UNBOUNDED,
    implied_by,
    invert_matrix,
    lp_optimize,
    maximize_with_subset_growth,
    nullspace_basis,
    optimize_via_dual,
    rank,
    solve_affine,
)

__all__ = [
    "HRep",
    "VRep",
    "Incidence",
    "AdjacencyGraph",
    "canonical_constraint",
    "remove_redundant",
    "enumerate_vertices",
    "adjacency",
    "fm_project",
    "contains",
]

_PLAIN_LIMIT = 50  # above this, redundancy removal switches to the output-sensitive path


def canonical_constraint(coeffs: Sequence, rhs) -> tuple[tuple[int, ...], int]:
    """Scale ``<coeffs, x> <= rhs`` to coprime integer entries (positive factor)."""
    vals = [rat(v) for v in coeffs] + [rat(rhs)]
    ints = scale_to_integers(vals)
    return ints[:-1], ints[-1]


@dataclass(frozen=True)
class HRep:
    """Intersection of half-spaces ``<coeffs, x> <= rhs`` in canonical form."""

    dim: int
    constraints: tuple[tuple[tuple[int, ...], int], ...]
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        names = self.names or tuple(f"x{i}" for i in range(self.dim))
        if len(names) != self.dim:
            raise DimensionMismatch("coordinate names differ from the dimension")
        canon = []
        for coeffs, rhs in self.constraints:
            if len(coeffs) != self.dim:
                raise DimensionMismatch("constraint length differs from the dimension")
            canon.append(canonical_constraint(coeffs, rhs))
        object.__setattr__(self, "constraints", tuple(canon))
        object.__setattr__(self, "names", names)

    @classmethod
    def of(cls, rows: Iterable[tuple[Sequence, object]], names: Sequence[str] = ()) -> "HRep":
        rows = [(tuple(c), b) for c, b in rows]
        if not rows and not names:
            raise ValueError("cannot infer the dimension of an empty system")
        dim = len(names) if names else len(rows[0][0])
        return cls(dim, tuple(rows), tuple(names))

    def __len__(self) -> int:
        return len(self.constraints)


@dataclass(frozen=True)
class VRep:
    """Finite vertex list; always sorted lexicographically by coordinates."""

    dim: int
    vertices: tuple[tuple[Rat, ...], ...]
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        names = self.names or tuple(f"x{i}" for i in range(self.dim))
        if len(names) != self.dim:
            raise DimensionMismatch("coordinate names differ from the dimension")
        for v in self.vertices:
            if len(v) != self.dim:
                raise DimensionMismatch("vertex length differs from the dimension")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertices must be pairwise distinct")
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "names", names)

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class Incidence:
    """Per-vertex sets of tight constraint indices, tied to the source HRep."""

    hrep: HRep
    tight: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class AdjacencyGraph:
    """Undirected edges between vertex indices of a VRep."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if not (0 <= u < v < self.n_vertices):
                raise ValueError("edges must satisfy 0 <= u < v < n_vertices")
        object.__setattr__(self, "edges", tuple(sorted(set(self.edges))))

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)


# ---------------------------------------------------------------------------
# Basic predicates
# ---------------------------------------------------------------------------


def contains(h: HRep, x: Sequence) -> bool:
    """Exact membership test."""
    point = [rat(v) for v in x]
    if len(point) != h.dim:
        raise DimensionMismatch("point length differs from the dimension")
    return all(
        sum(c * v for c, v in zip(coeffs, point)) <= rhs for coeffs, rhs in h.constraints
    )


def _dedup(rows: Sequence[tuple[tuple[int, ...], int]]) -> list[tuple[tuple[int, ...], int]]:
    seen = set()
    out = []
    for row in rows:
        if row not in seen:
            seen.add(row)
            out.append(row)
    return out


def _feasible_point(rows, dim) -> tuple[Rat, ...] | None:
    if all(b >= 0 for _, b in rows):
        return (ZERO,) * dim  # the origin satisfies every row
    res = lp_optimize([ZERO] * dim, rows or [((0,) * dim, 0)], "max")
    return res.point if res.is_optimal else None


def _interior_point(rows, dim) -> tuple[Rat, ...] | None:
    """A point with strictly positive slack on every row, else None.

    Found by maximizing a common slack variable (capped at 1 to keep the
    program bounded even on unbounded feasible sets).  Solved on a growing
    active subset so huge systems never enter one program whole.
    """
    ext = [(tuple(c) + (1,), b) for c, b in rows]
    ext.append(((0,) * dim + (1,), 1))
    res = maximize_with_subset_growth(ext, [ZERO] * dim + [ONE])
    if not res.is_optimal or res.value <= 0:
        return None
    return res.point[:-1]


# ---------------------------------------------------------------------------
# Redundancy removal
# ---------------------------------------------------------------------------


def _violating_point(i_rows, cand) -> tuple[Rat, ...]:
    """A point satisfying ``i_rows`` with the candidate row strictly violated."""
    coeffs, rhs = cand
    relaxed = list(i_rows) + [(coeffs, rhs + 1)]
    res = optimize_via_dual(relaxed, coeffs)
    if not res.is_optimal or res.value <= rhs:
        raise RuntimeError("expected a violating point for a non-implied constraint")
    return res.point


def _ray_shoot(rows, z, x) -> int:
    """Index of the first constraint crossed on the segment from z to x.

    Requires z strictly inside every row.  The returned constraint touches
    the feasible set at the exit point, so it belongs in every defining
    subset containing the rows currently satisfied at x.
    """
    u = [a - b for a, b in zip(x, z)]
    best_t = None
    best_j = None
    for j, (coeffs, rhs) in enumerate(rows):
        den = sum(c * v for c, v in zip(coeffs, u))
        if den > 0:
            t = (rhs - sum(c * v for c, v in zip(coeffs, z))) / den
            if best_t is None or t < best_t:
                best_t, best_j = t, j
    if best_j is None:
        raise RuntimeError("ray shooting found no crossed constraint")
    return best_j


def _minimal_subset(rows, candidates: list[int]) -> list[int]:
    """Drop each candidate implied by the others (sequential exact tests)."""
    keep = list(candidates)
    for idx in list(keep):
        others = [rows[j] for j in keep if j != idx]
        if implied_by(others, rows[idx][0], rows[idx][1]):
            keep.remove(idx)
    return keep


def _implied_batch(args) -> list[bool]:
    """Worker: decide redundancy of a candidate slice against a fixed row set."""
    i_rows, cands = args
    return [implied_by(i_rows, cand[0], cand[1]) for cand in cands]


def _resolve_candidate(rows, z, ikeep, in_keep, idx: int) -> None:
    """Clarkson inner loop: discard idx as implied, or grow the kept set.

    Each round either certifies the candidate against the kept rows or adds,
    via ray shooting from the interior point through a violating point, one
    row that every defining subset must contain.
    """
    while True:
        i_rows = [rows[j] for j in ikeep]
        if implied_by(i_rows, rows[idx][0], rows[idx][1]):
            return
        x = _violating_point(i_rows, rows[idx])
        j_star = _ray_shoot(rows, z, x)
        if j_star in in_keep:
            raise RuntimeError("ray shooting revisited a kept constraint")
        ikeep.append(j_star)
        ikeep.sort()
        in_keep.add(j_star)
        if j_star == idx:
            return


def _clarkson_filter(rows, z, jobs: int = 1) -> list[int]:
    """Output-sensitive redundancy pre-filter around interior point z.

    Maintains a growing set of certified-necessary rows, seeded with the
    sign rows (almost always facets here, and cheap to clean up otherwise);
    every other candidate is either implied by the kept rows (and
    discarded) or contributes, via ray shooting, one more necessary row.
    The survivors may include a few non-facets; the final minimal pass
    cleans those up.  With several jobs, candidates are certified against
    the current kept set in parallel batches; the outcome does not depend
    on the split.
    """
    seeds = sorted(
        i
        for i, (coeffs, rhs) in enumerate(rows)
        if rhs == 0
        and sum(1 for v in coeffs if v) == 1
        and min(v for v in coeffs if v) < 0
    )
    ikeep: list[int] = list(seeds)
    in_keep: set[int] = set(seeds)
    if jobs <= 1:
        for idx in range(len(rows)):
            if idx not in in_keep:
                _resolve_candidate(rows, z, ikeep, in_keep, idx)
        return ikeep

    from concurrent.futures import ProcessPoolExecutor

    batch_size = 48 * jobs
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        start = 0
        while start < len(rows):
            batch = [
                i for i in range(start, min(start + batch_size, len(rows))) if i not in in_keep
            ]
            start += batch_size
            i_rows = [rows[j] for j in ikeep]
            chunks = [batch[c::jobs] for c in range(jobs)]
            args = [(i_rows, [rows[i] for i in chunk]) for chunk in chunks if chunk]
            verdicts: dict[int, bool] = {}
            for chunk, result in zip([c for c in chunks if c], pool.map(_implied_batch, args)):
                verdicts.update(zip(chunk, result))
            for idx in batch:  # deterministic order regardless of chunking
                if not verdicts[idx] and idx not in in_keep:
                    _resolve_candidate(rows, z, ikeep, in_keep, idx)
    return ikeep


def remove_redundant(h: HRep, jobs: int = 1) -> HRep:
    """Minimal subset of the constraints defining the same feasible set.

    A constraint is redundant exactly when it holds everywhere on the system
    formed by all the others; each candidate is decided by an exact LP test.
    Implicit equalities survive as opposing constraint pairs.  Raises
    :class:`EmptyPolytope` on inconsistent input.
    """
    rows = _dedup(h.constraints)
    if _feasible_point(rows, h.dim) is None:
        raise EmptyPolytope("the constraint system is infeasible")
    if len(rows) > _PLAIN_LIMIT:
        z = _interior_point(rows, h.dim)
        if z is not None:
            rows = [rows[j] for j in _clarkson_filter(rows, z, jobs=jobs)]
    keep = _minimal_subset(rows, list(range(len(rows))))
    return HRep(h.dim, tuple(rows[j] for j in keep), h.names)


# ---------------------------------------------------------------------------
# Vertex enumeration (double description)
# ---------------------------------------------------------------------------


def _int_dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _gcd_normalize(vec: list[int]) -> tuple[int, ...]:
    g = 0
    for v in vec:
        g = gcd(g, v)
    if g > 1:
        return tuple(v // g for v in vec)
    return tuple(vec)


def _dd_rays(
    hrows: list[tuple[int, ...]],
    max_rays: int | None,
    deadline: float | None,
) -> list[tuple[tuple[int, ...], int]]:
    """Extreme rays of the pointed cone {y : row . y <= 0}, with tight masks.

    Incremental double description: start from a simplicial cone built from
    a row basis, then cut with the remaining rows one at a time.  New rays
    arise only from adjacent pairs straddling the cutting hyperplane, where
    adjacency is the standard combinatorial test on tight sets.  Masks are
    exact because a positive combination of two rays is tight on a processed
    row exactly when both parents are.
    """
    dim = len(hrows[0])
    # Greedy row basis in insertion order.
    basis_idx: list[int] = []
    echelon: list[list[Rat]] = []
    for i, row in enumerate(hrows):
        vec = [rat(v) for v in row]
        for erow in echelon:
            lead = next(j for j, v in enumerate(erow) if v)
            if vec[lead]:
                f = vec[lead] / erow[lead]
                vec = [a - f * b for a, b in zip(vec, erow)]
        if any(vec):
            echelon.append(vec)
            basis_idx.append(i)
            if len(basis_idx) == dim:
                break
    if len(basis_idx) < dim:
        raise UnboundedPolytope("the homogenized system is not pointed")

    inv = invert_matrix([hrows[i] for i in basis_idx])
    rays: list[tuple[int, ...]] = []
    for j in range(dim):
        col = [-inv[i][j] for i in range(dim)]
        rays.append(scale_to_integers(col))
    processed = list(basis_idx)
    masks = []
    for ray in rays:
        m = 0
        for i in processed:
            if _int_dot(hrows[i], ray) == 0:
                m |= 1 << i
        masks.append(m)

    remaining = [i for i in range(len(hrows)) if i not in set(basis_idx)]
    for row_i in remaining:
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded("time limit reached during vertex enumeration")
        row = hrows[row_i]
        svals = [_int_dot(row, ray) for ray in rays]
        keep_rays: list[tuple[int, ...]] = []
        keep_masks: list[int] = []
        bit = 1 << row_i
        neg_list = []  # strictly inside the new half-space
        pos_list = []  # cut off
        for ray, mask, s in zip(rays, masks, svals):
            if s <= 0:
                keep_rays.append(ray)
                keep_masks.append(mask | bit if s == 0 else mask)
                if s < 0:
                    neg_list.append((ray, mask, s))
            else:
                pos_list.append((ray, mask, s))
        min_common = dim - 2
        for pray, pmask, ps in pos_list:
            for nray, nmask, ns in neg_list:
                common = pmask & nmask
                if common.bit_count() < min_common:
                    continue
                adjacent = True
                for omask in masks:
                    if omask is pmask or omask is nmask:
                        continue
                    if common & omask == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                new = [ps * nv - ns * pv for pv, nv in zip(pray, nray)]
                keep_rays.append(_gcd_normalize(new))
                keep_masks.append(common | bit)
        rays, masks = keep_rays, keep_masks
        processed.append(row_i)
        if max_rays is not None and len(rays) > max_rays:
            raise BudgetExceeded(
                f"intermediate description grew past {max_rays} rays"
            )
    return list(zip(rays, masks))


def _enumerate_full_dim(
    rows: list[tuple[tuple[int, ...], int]],
    dim: int,
    max_rays: int | None,
    deadline: float | None,
) -> list[tuple[Rat, ...]]:
    """Vertices of a nonempty bounded full-dimensional polytope."""
    hrows = [tuple(c) + (-b,) for c, b in rows]
    hrows.append((0,) * dim + (-1,))  # homogenization: t >= 0
    order = sorted(range(len(hrows)), key=lambda i: (sum(1 for v in hrows[i] if v), hrows[i]))
    hrows = [hrows[i] for i in order]
    vertices = []
    for ray, _mask in _dd_rays(hrows, max_rays, deadline):
        t = ray[-1]
        if t == 0:
            raise UnboundedPolytope("recession ray found in a supposedly bounded polytope")
        vertices.append(tuple(rat(v, t) for v in ray[:-1]))
    return vertices


def enumerate_vertices(
    h: HRep, *, max_rays: int | None = None, deadline: float | None = None
) -> tuple[VRep, Incidence]:
    """All vertices of a bounded, nonempty polytope, with tight-set incidence.

    Boundedness is verified by exact LPs in each coordinate direction before
    enumeration; empty and unbounded inputs raise distinct errors.  Lower
    dimensional polytopes are handled by first identifying the affine hull
    (the constraints that hold with equality everywhere) and enumerating
    inside it.
    """
    rows = _dedup(h.constraints)
    if _feasible_point(rows, h.dim) is None:
        raise EmptyPolytope("the constraint system is infeasible")
    unit = [ZERO] * h.dim
    for j in range(h.dim):
        for sign in (ONE, -ONE):
            unit[j] = sign
            if maximize_with_subset_growth(rows, unit).status == UNBOUNDED:
                raise UnboundedPolytope(f"coordinate {h.names[j]} is unbounded")
        unit[j] = ZERO

    if _interior_point(rows, h.dim) is not None:
        vertices = _enumerate_full_dim(rows, h.dim, max_rays, deadline)
    else:
        eq_idx = [
            j
            for j, (coeffs, rhs) in enumerate(rows)
            if lp_optimize(coeffs, rows, "min").value == rhs
        ]
        eq_rows = [rows[j][0] for j in eq_idx]
        eq_rhs = [rows[j][1] for j in eq_idx]
        x0 = solve_affine(eq_rows, eq_rhs)
        basis = nullspace_basis(eq_rows, h.dim)
        if not basis:
            vertices = [tuple(rat(v) for v in x0)]
        else:
            reduced = []
            for coeffs, rhs in rows:
                new_c = tuple(sum(c * w for c, w in zip(coeffs, wvec)) for wvec in basis)
                new_b = rhs - sum(c * v for c, v in zip(coeffs, x0))
                if any(new_c):
                    reduced.append(canonical_constraint(new_c, new_b))
            reduced = _dedup(reduced)
            inner = _enumerate_full_dim(reduced, len(basis), max_rays, deadline)
            vertices = [
                tuple(
                    x0[i] + sum(u * basis[kk][i] for kk, u in enumerate(v))
                    for i in range(h.dim)
                )
                for v in inner
            ]

    vrep = VRep(h.dim, tuple(vertices), h.names)
    tight = tuple(
        frozenset(
            j
            for j, (coeffs, rhs) in enumerate(h.constraints)
            if sum(c * x for c, x in zip(coeffs, v)) == rhs
        )
        for v in vrep.vertices
    )
    return vrep, Incidence(h, tight)


def adjacency(v: VRep, incidence: Incidence) -> AdjacencyGraph:
    """Vertices sharing an edge: common tight constraints of rank dim - 1."""
    if len(incidence.tight) != len(v.vertices):
        raise DimensionMismatch("incidence does not match the vertex list")
    coeff_rows = [c for c, _ in incidence.hrep.constraints]
    n = len(v.vertices)
    need = v.dim - 1
    edges = []
    for i in range(n):
        ti = incidence.tight[i]
        for j in range(i + 1, n):
            common = ti & incidence.tight[j]
            if len(common) < need:
                continue
            if rank([coeff_rows[k] for k in sorted(common)]) == need:
                edges.append((i, j))
    return AdjacencyGraph(n, tuple(edges))


# ---------------------------------------------------------------------------
# Fourier-Motzkin projection
# ---------------------------------------------------------------------------


def _eliminate_column(
    rows: list[tuple[tuple[int, ...], int]], col: int
) -> list[tuple[tuple[int, ...], int]]:
    zero, pos, neg = [], [], []
    for coeffs, rhs in rows:
        a = coeffs[col]
        if a == 0:
            zero.append((coeffs, rhs))
        elif a > 0:
            pos.append((coeffs, rhs))
        else:
            neg.append((coeffs, rhs))
    out = [( (c[:col] + c[col + 1:]), b) for c, b in zero]
    for pc, pb in pos:
        ap = pc[col]
        for nc, nb in neg:
            an = nc[col]
            merged = tuple(-an * p + ap * q for p, q in zip(pc, nc))
            rhs = -an * pb + ap * nb
            out.append((merged[:col] + merged[col + 1:], rhs))
    result = []
    for coeffs, rhs in out:
        if any(coeffs):
            result.append(canonical_constraint(coeffs, rhs))
        elif rhs < 0:
            raise EmptyPolytope("projection exposed an inconsistent system")
    return _dedup(result)


def fm_project(h: HRep, keep: Sequence[str] | Sequence[int]) -> HRep:
    """Orthogonal projection onto a coordinate subset, by variable elimination.

    Coordinates outside ``keep`` are eliminated one at a time (pairing the
    positive and negative occurrences); redundancy is removed after every
    elimination to keep the intermediate systems small.  The kept
    coordinates stay in their original order.
    """
    keep = list(keep)
    if not keep:
        raise DimensionMismatch("projection needs at least one kept coordinate")
    if all(isinstance(k, str) for k in keep):
        missing = [k for k in keep if k not in h.names]
        if missing:
            raise DimensionMismatch(f"unknown projection coordinates {missing}")
        keep_idx = {h.names.index(k) for k in keep}
    else:
        keep_idx = {int(k) for k in keep}
    if not keep_idx <= set(range(h.dim)):
        raise DimensionMismatch("projection coordinates outside the system")
    if keep_idx == set(range(h.dim)):
        return h
    rows = _dedup(h.constraints)
    names = list(h.names)
    live = list(range(h.dim))  # original index of each current column
    while len(live) > len(keep_idx):
        candidates = [i for i, orig in enumerate(live) if orig not in keep_idx]
        def cost(i: int) -> tuple[int, int]:
            npos = sum(1 for c, _ in rows if c[i] > 0)
            nneg = sum(1 for c, _ in rows if c[i] < 0)
            return (npos * nneg, i)
        col = min(candidates, key=cost)
        rows = _eliminate_column(rows, col)
        live.pop(col)
        names.pop(col)
        reduced = remove_redundant(HRep(len(live), tuple(rows), tuple(names)))
        rows = list(reduced.constraints)
    return HRep(len(live), tuple(rows), tuple(names))
