"""Finite constraint characterization of coherent lower previsions.

A lower prevision on a normalized gamble set containing all singleton
indicators is coherent exactly when it satisfies a finite family of linear
inequalities: nonnegativity, plus one inequality for each linearly
independent subset whose positive-combination equation has a qualifying
solution.  This module generates that family, and independently checks
coherence of a given prevision by direct subset enumeration, so the two
routes can validate each other.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Iterator, Sequence

from ._rat import ONE, ZERO, Rat, scale_to_integers
from .errors import IndexMismatch, MissingIndicators, NotNormalized
from .gambles import GambleSet, LowerPrevision, indicator, Event
from .polytope import HRep, canonical_constraint
from .ratlinalg import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    is_independent,
    solve_standard,
    solve_unique,
)

__all__ = [
    "LinearConstraint",
    "ConstraintOrigin",
    "ConstraintSet",
    "CoherenceResult",
    "DirectWitness",
    "independent_subsets",
    "combination_solution",
    "generate_constraints",
    "check_against",
    "check_direct",
]

NONNEG = "nonneg"
HOMOGENEOUS = "homogeneous"  # combination bounded by another gamble's value; rhs 0
INHOMOGENEOUS = "inhomogeneous"  # combination of unit payoff; rhs 1
GENERAL = "general"


@dataclass(frozen=True)
class ConstraintOrigin:
    """How a constraint was produced: subset, target, and the solved weights."""

    subset: tuple[str, ...]
    target: str  # a gamble name, or "unit" for the constant-one target
    lam: tuple[Rat, ...]


@dataclass(frozen=True)
class LinearConstraint:
    """Canonical integer inequality ``<coeffs, P> <= rhs`` over a gamble set.

    Equality and hashing ignore the kind tag and origin, so deduplication
    collapses exactly the constraints that define the same half-space.
    """

    coeffs: tuple[int, ...]
    rhs: int
    kind: str = field(default=GENERAL, compare=False)
    origin: ConstraintOrigin | None = field(default=None, compare=False)

    @classmethod
    def of(cls, coeffs: Sequence, rhs, kind: str = GENERAL, origin=None) -> "LinearConstraint":
        c, b = canonical_constraint(coeffs, rhs)
        return cls(c, b, kind, origin)

    def evaluate(self, values: Sequence[Rat]) -> Rat:
        return sum(c * v for c, v in zip(self.coeffs, values))


@dataclass(frozen=True)
class ConstraintSet:
    """Deduplicated constraints over a gamble set, with the raw emission count."""

    ambient: GambleSet
    constraints: tuple[LinearConstraint, ...]
    raw_generated: int

    def __len__(self) -> int:
        return len(self.constraints)

    def to_hrep(self) -> HRep:
        return HRep(
            len(self.ambient),
            tuple((c.coeffs, c.rhs) for c in self.constraints),
            self.ambient.names,
        )


@dataclass(frozen=True)
class DirectWitness:
    """A violated subset inequality: ``<lam, P>_subset <= gamma`` fails."""

    subset: tuple[str, ...]
    lam: tuple[Rat, ...]
    gamma: Rat


@dataclass(frozen=True)
class CoherenceResult:
    coherent: bool
    violations: tuple[tuple[LinearConstraint, Rat], ...] = ()
    witness: DirectWitness | None = None

    def __bool__(self) -> bool:
        return self.coherent


def _require_normalized(k: GambleSet) -> None:
    if not k.in_L:
        raise NotNormalized("every gamble must have minimum 0 and maximum 1")


def _require_indicators(k: GambleSet) -> None:
    present = {g.payoffs for g in k.gambles}
    missing = [
        w
        for w in k.space.elements
        if indicator(Event.of(k.space, [w])).payoffs not in present
    ]
    if missing:
        raise MissingIndicators(f"missing singleton indicators for outcomes {missing}")


def _int_columns(k: GambleSet) -> list[tuple[int, ...]]:
    """Integer-rescaled payoff vectors (independence is scale-invariant)."""
    return [scale_to_integers(g.payoffs) for g in k.gambles]


def _support_mask(payoffs: Sequence[Rat]) -> int:
    m = 0
    for i, v in enumerate(payoffs):
        if v:
            m |= 1 << i
    return m


def _reduce_int(echelon: list[tuple[int, list[int]]], vec: list[int]) -> list[int] | None:
    """Fraction-free reduction of an integer vector against an echelon basis.

    Returns the gcd-normalized residue, or None when the vector is spanned.
    Echelon entries are (pivot position, row) with strictly increasing pivots.
    """
    for lead, row in echelon:
        if vec[lead]:
            a, b = row[lead], vec[lead]
            vec = [a * x - b * y for x, y in zip(vec, row)]
    if not any(vec):
        return None
    g = 0
    for v in vec:
        g = gcd(g, v)
    if g > 1:
        vec = [v // g for v in vec]
    return vec


def _enumerate_independent(
    ivecs: list[tuple[int, ...]],
    max_size: int,
    roots: Sequence[int] | None = None,
    target_masks: frozenset[int] | None = None,
    supports: list[int] | None = None,
    full_mask: int = 0,
) -> list[tuple[int, ...]]:
    """Depth-first enumeration of linearly independent index subsets.

    With ``target_masks`` given, branches whose eventual support can neither
    be completed to the full space nor fit any target support are pruned;
    that never changes which useful subsets appear, only skips dead wood.
    """
    n = len(ivecs)
    out: list[tuple[int, ...]] = []
    if supports is None:
        prune = False
        suffix = [0] * (n + 1)
    else:
        prune = target_masks is not None
        suffix = [0] * (n + 1)
        for j in range(n - 1, -1, -1):
            suffix[j] = suffix[j + 1] | supports[j]

    def viable(u: int, reach: int) -> bool:
        if u | reach == full_mask:
            return True
        assert target_masks is not None
        return any(t & u == u and t | reach == reach for t in target_masks)

    def extend(start: int, chosen: tuple[int, ...], echelon, u: int) -> None:
        for j in range(start, n):
            if prune and not viable(u | supports[j], (u | supports[j]) | suffix[j + 1]):
                continue
            residue = _reduce_int(echelon, list(ivecs[j]))
            if residue is None:
                continue
            nc = chosen + (j,)
            if len(nc) >= 2:
                out.append(nc)
            if len(nc) < max_size:
                lead = next(i for i, v in enumerate(residue) if v)
                ech2 = echelon + [(lead, residue)]
                ech2.sort(key=lambda e: e[0])
                extend(j + 1, nc, ech2, u | supports[j] if supports else 0)

    for r in roots if roots is not None else range(n):
        if prune and not viable(supports[r], supports[r] | suffix[r + 1]):
            continue
        residue = _reduce_int([], list(ivecs[r]))
        if residue is None:
            continue
        lead = next(i for i, v in enumerate(residue) if v)
        extend(r + 1, (r,), [(lead, residue)], supports[r] if supports else 0)
    return out


def independent_subsets(k: GambleSet) -> Iterator[tuple[int, ...]]:
    """All linearly independent index subsets N with 1 < |N| <= |space|.

    Yields in a fixed order: by size, then lexicographically by indices.
    """
    _require_normalized(k)
    ivecs = _int_columns(k)
    subsets = _enumerate_independent(ivecs, len(k.space))
    subsets.sort(key=lambda t: (len(t), t))
    yield from subsets


def combination_solution(n: Sequence, target=None) -> tuple[Rat, ...] | None:
    """Weights lam with ``sum lam_g * g == target`` (None target means the unit).

    Accepts gambles or raw payoff vectors.  The subset must be linearly
    independent, so the solution is unique when it exists.
    """
    cols = [tuple(getattr(g, "payoffs", g)) for g in n]
    if target is None:
        target = tuple(ONE for _ in range(len(cols[0]) if cols else 0))
    else:
        target = tuple(getattr(target, "payoffs", target))
    return solve_unique(cols, target)


def _emissions_for_roots(args):
    """Worker: enumerate subsets rooted at given first indices and solve them."""
    (columns, supports, full_mask, targets_by_support, max_size, roots) = args
    ivecs = [scale_to_integers(c) for c in columns]
    target_masks = frozenset(targets_by_support) | {full_mask}
    subsets = _enumerate_independent(
        ivecs, max_size, roots=roots, target_masks=target_masks,
        supports=supports, full_mask=full_mask,
    )
    unit = tuple(ONE for _ in range(len(columns[0]) if columns else 0))
    emissions = []
    for subset in subsets:
        cols = [columns[i] for i in subset]
        mask = 0
        for i in subset:
            mask |= supports[i]
        if mask == full_mask:
            lam = solve_unique(cols, unit)
            if lam is not None and all(v != 0 for v in lam) and sum(1 for v in lam if v < 0) <= 1:
                emissions.append((subset, -1, lam))
        for f in targets_by_support.get(mask, ()):
            if f in subset:
                continue
            lam = solve_unique(cols, columns[f])
            if lam is not None and all(v > 0 for v in lam):
                emissions.append((subset, f, lam))
    return emissions


def generate_constraints(k: GambleSet, jobs: int = 1) -> ConstraintSet:
    """The finite sufficient constraint family for coherence on ``k``.

    Requires a normalized gamble set containing every singleton indicator.
    Emits one nonnegativity constraint per gamble; one ``<lam, P>_N <= P_f``
    constraint for each independent subset N and each gamble f outside N
    with matching support whose combination equation has a strictly positive
    solution; and one ``<lam, P>_N <= 1`` constraint for each independent
    full-support subset whose unit equation has an everywhere nonzero
    solution with at most one negative weight.  The raw emission count is
    kept alongside the deduplicated constraints.
    """
    _require_normalized(k)
    _require_indicators(k)
    nk = len(k)
    d = len(k.space)
    columns = [g.payoffs for g in k.gambles]
    supports = [_support_mask(c) for c in columns]
    full_mask = (1 << d) - 1
    targets_by_support: dict[int, tuple[int, ...]] = {}
    for f, mask in enumerate(supports):
        targets_by_support.setdefault(mask, ())
        targets_by_support[mask] += (f,)

    constraints: list[LinearConstraint] = []
    for g in range(nk):
        coeffs = [ZERO] * nk
        coeffs[g] = -ONE
        constraints.append(LinearConstraint.of(coeffs, ZERO, NONNEG))
    raw = nk

    payload = (columns, supports, full_mask, targets_by_support, d)
    if jobs > 1 and nk > 2:
        roots_per_task = [[r] for r in range(nk)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = pool.map(
                _emissions_for_roots, [payload + (roots,) for roots in roots_per_task]
            )
            emissions = [e for chunk in chunks for e in chunk]
    else:
        emissions = _emissions_for_roots(payload + (None,))
    emissions.sort(key=lambda e: (len(e[0]), e[0], e[1]))
    raw += len(emissions)

    for subset, f, lam in emissions:
        coeffs = [ZERO] * nk
        for i, weight in zip(subset, lam):
            coeffs[i] = weight
        names = tuple(k.names[i] for i in subset)
        if f < 0:
            constraints.append(
                LinearConstraint.of(
                    coeffs, ONE, INHOMOGENEOUS, ConstraintOrigin(names, "unit", lam)
                )
            )
        else:
            coeffs[f] = -ONE
            constraints.append(
                LinearConstraint.of(
                    coeffs, ZERO, HOMOGENEOUS, ConstraintOrigin(names, k.names[f], lam)
                )
            )

    seen: set[tuple] = set()
    deduped = []
    for c in constraints:
        key = (c.coeffs, c.rhs)
        if key not in seen:
            seen.add(key)
            deduped.append(c)
    return ConstraintSet(k, tuple(deduped), raw)


def check_against(p: LowerPrevision, cs: ConstraintSet) -> CoherenceResult:
    """Evaluate every generated constraint exactly at the given prevision."""
    if p.gamble_set != cs.ambient:
        raise IndexMismatch("prevision is not indexed by the constraint set's gamble set")
    violated = []
    for c in cs.constraints:
        lhs = c.evaluate(p.values)
        if lhs > c.rhs:
            violated.append((c, lhs - c.rhs))
    if violated:
        return CoherenceResult(False, tuple(violated))
    return CoherenceResult(True)


def check_direct(p: LowerPrevision, k: GambleSet) -> CoherenceResult:
    """Coherence by direct subset enumeration, without generated constraints.

    For every subset whose prevision-shifted payoff vectors are linearly
    independent, every admissible sign pattern (at most one negative weight)
    and both right-hand sides 0 and 1, the largest attainable value of
    ``<lam, P>`` over solutions of the pointwise combination equation is
    compared against the right-hand side.  Zero weights inside a solution
    delegate to a smaller subset, which is also enumerated, so closed sign
    patterns decide exactly the strict-pattern criterion.  Exponential in
    the size of the gamble set; intended for modest instances and as an
    independent cross-check of the constraint route.
    """
    if p.gamble_set != k:
        raise IndexMismatch("prevision is not indexed by the given gamble set")
    _require_normalized(k)
    _require_indicators(k)
    for name, value in zip(k.names, p.values):
        if value < 0:
            return CoherenceResult(
                False, witness=DirectWitness((name,), (-ONE,), ZERO)
            )
    d = len(k.space)
    nk = len(k)
    shifted = [
        tuple(v - pv for v in g.payoffs) for g, pv in zip(k.gambles, p.values)
    ]
    for size in range(2, d + 1):
        for subset in itertools.combinations(range(nk), size):
            if not is_independent([shifted[i] for i in subset]):
                continue
            cols = [k.gambles[i].payoffs for i in subset]
            weights = [p.values[i] for i in subset]
            for gamma in (ZERO, ONE):
                for neg in (None, *range(size)):
                    witness = _subset_violation(cols, weights, gamma, neg)
                    if witness is not None:
                        lam = witness
                        names = tuple(k.names[subset[i]] for i in range(size) if lam[i])
                        vals = tuple(v for v in lam if v)
                        return CoherenceResult(
                            False, witness=DirectWitness(names, vals, gamma)
                        )
    return CoherenceResult(True)


def _subset_violation(cols, weights, gamma, neg) -> tuple[Rat, ...] | None:
    """Max of <lam, weights> over sign-restricted solutions of the combination.

    Variables at the chosen negative position are negated so the program
    runs over a nonnegative orthant; the search stops as soon as the value
    passes gamma.  An unbounded objective is a violation too (solutions
    along a recession direction grow past any bound); a witness is then
    recovered by forcing the objective above gamma and asking for any
    feasible point.  Returns a violating lam (original signs), or None.
    """
    size = len(cols)
    d = len(cols[0])
    sign = [ONE] * size
    if neg is not None:
        sign[neg] = -ONE
    eq = []
    for w in range(d):
        eq.append(([sign[i] * cols[i][w] for i in range(size)], gamma))
    obj = [sign[i] * weights[i] for i in range(size)]
    status, value, point, _ = solve_standard([], eq, obj, stop_above=gamma)
    if status == INFEASIBLE:
        return None
    if status == UNBOUNDED:
        floor = [([-v for v in obj], -(gamma + 1))]
        status, _, point, _ = solve_standard(floor, eq, [ZERO] * size)
        if status != OPTIMAL:
            raise RuntimeError("unbounded subset program without a witness")
    elif value <= gamma:
        return None
    return tuple(sign[i] * point[i] for i in range(size))
