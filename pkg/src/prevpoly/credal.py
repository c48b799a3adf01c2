"""Credal sets, natural extension, and the lower-envelope coherence oracle.

The credal set of a lower prevision is the polytope of probability mass
functions dominating it.  Natural extensions are exact LP minima over that
polytope, and a prevision is coherent exactly when it is the lower envelope
of its own credal set; the envelope test relies only on linear programming,
which makes it an implementation-independent oracle for the other two
coherence routes.
"""

from __future__ import annotations

from dataclasses import dataclass
from ._rat import ONE, ZERO, Rat, rat
from .errors import DimensionMismatch, EmptyPolytope, SureLoss
from .gambles import Gamble, GambleSet, LowerPrevision, PossibilitySpace
from .polytope import HRep, enumerate_vertices
from .ratlinalg import lp_optimize

__all__ = [
    "MassFunction",
    "CredalSet",
    "credal_hrep",
    "credal_vertices",
    "natural_extension",
    "is_lower_envelope",
]


@dataclass(frozen=True)
class MassFunction:
    """Probability mass function: nonnegative rationals summing to one."""

    space: PossibilitySpace
    probabilities: tuple[Rat, ...]

    def __post_init__(self) -> None:
        if len(self.probabilities) != len(self.space):
            raise DimensionMismatch("mass vector length differs from the space size")
        if any(p < 0 for p in self.probabilities):
            raise ValueError("probabilities must be nonnegative")
        if sum(self.probabilities) != 1:
            raise ValueError("probabilities must sum to exactly one")

    @classmethod
    def of(cls, space: PossibilitySpace, probabilities) -> "MassFunction":
        return cls(space, tuple(rat(p) for p in probabilities))

    def __getitem__(self, label: str) -> Rat:
        return self.probabilities[self.space.index(label)]

    def expectation(self, g: Gamble) -> Rat:
        if g.space != self.space:
            raise DimensionMismatch("gamble lives on a different space")
        return sum(p * v for p, v in zip(self.probabilities, g.payoffs))


@dataclass(frozen=True)
class CredalSet:
    """Vertex description of the dominating mass functions."""

    space: PossibilitySpace
    hrep: HRep
    vertices: tuple[MassFunction, ...]

    def is_empty(self) -> bool:
        return not self.vertices

    def lower_expectation(self, g: Gamble) -> Rat:
        if self.is_empty():
            raise SureLoss("the credal set is empty")
        return min(v.expectation(g) for v in self.vertices)


def credal_hrep(p: LowerPrevision, k: GambleSet) -> HRep:
    """Mass-function constraints of the dominating set.

    Simplex rows (each mass nonnegative, total exactly one as an opposing
    pair) plus one domination row per gamble.  Works for any prevision; an
    incoherent one may produce an empty system.
    """
    if p.gamble_set != k:
        raise DimensionMismatch("prevision is not indexed by the given gamble set")
    d = len(k.space)
    rows: list[tuple[tuple, object]] = []
    for i in range(d):
        row = [ZERO] * d
        row[i] = -ONE
        rows.append((tuple(row), ZERO))
    rows.append((tuple(ONE for _ in range(d)), ONE))
    rows.append((tuple(-ONE for _ in range(d)), -ONE))
    for g, value in zip(k.gambles, p.values):
        rows.append((tuple(-v for v in g.payoffs), -value))
    return HRep(d, tuple(rows), k.space.elements)


def credal_vertices(p: LowerPrevision, k: GambleSet) -> CredalSet:
    """All extreme dominating mass functions; empty exactly when none exist."""
    h = credal_hrep(p, k)
    try:
        vrep, _ = enumerate_vertices(h)
    except EmptyPolytope:
        return CredalSet(k.space, h, ())
    points = tuple(MassFunction(k.space, v) for v in vrep.vertices)
    return CredalSet(k.space, h, points)


def natural_extension(p: LowerPrevision, k: GambleSet, f: Gamble) -> Rat:
    """Least-committal extension: the exact LP minimum of ``<mass, f>``.

    Raises :class:`SureLoss` when no mass function dominates the prevision.
    """
    if f.space != k.space:
        raise DimensionMismatch("target gamble lives on a different space")
    h = credal_hrep(p, k)
    res = lp_optimize(f.payoffs, h, "min")
    if not res.is_optimal:
        raise SureLoss("no dominating mass function exists")
    return res.value


def is_lower_envelope(p: LowerPrevision, k: GambleSet) -> bool:
    """Whether the prevision equals the pointwise minimum of its credal set.

    True exactly for coherent previsions; uses only linear programming, so
    it is independent of both the constraint generator and the direct
    subset checker.
    """
    h = credal_hrep(p, k)
    for g, value in zip(k.gambles, p.values):
        res = lp_optimize(g.payoffs, h, "min")
        if not res.is_optimal:
            return False
        if res.value != value:
            return False
    return True
