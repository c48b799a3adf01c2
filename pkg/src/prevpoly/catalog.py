"""Gamble-set families and end-to-end pipeline runs.

Builds the event-based and values-based families, runs the full pipeline
(augment, generate, reduce, project, enumerate, adjacency) under explicit
resource budgets, and reproduces count tables over parameter ranges.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from string import ascii_lowercase
from typing import Sequence

from ._rat import rat
from .coherence import generate_constraints
from .errors import BudgetExceeded, FamilyParameterError
from .gambles import (
    Event,
    GambleSet,
    PossibilitySpace,
    augment_with_indicators,
    degenerate_prevision,
    indicator,
    normalize,
)
from .polytope import (
    AdjacencyGraph,
    HRep,
    Incidence,
    VRep,
    adjacency,
    enumerate_vertices,
    fm_project,
    remove_redundant,
)

__all__ = [
    "FamilySpec",
    "Budget",
    "PipelineSummary",
    "TableRow",
    "PRESETS",
    "family_gambles",
    "run_pipeline",
    "reproduce_table",
    "degenerate_vertex_check",
]

FAMILIES = ("single", "custom", "lmass", "umass", "lumass", "pset", "values_based")


@dataclass(frozen=True)
class FamilySpec:
    """Parameters selecting one gamble set from a named family."""

    family: str
    omega_size: int = 0
    k: int = 0
    gambles: tuple[tuple[str, tuple], ...] = ()
    label: str = ""

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise FamilyParameterError(f"unknown family {self.family!r}")


@dataclass(frozen=True)
class Budget:
    """Resource limits for a pipeline run; None disables a limit."""

    max_vertices: int | None = 1_000_000
    max_dd_rays: int | None = 100_000
    time_limit: float | None = None  # seconds, per pipeline run


@dataclass(frozen=True)
class PipelineSummary:
    """Exact counts and artifacts of one pipeline run.

    The irredundant and vertex counts refer to the original coordinate
    space, after projecting out any auxiliary indicator coordinates.
    Timings are informational only and excluded from comparisons.
    """

    label: str
    original: GambleSet
    augmented: GambleSet
    auxiliary: tuple[str, ...]
    raw_generated: int
    deduped: int
    hrep: HRep
    vrep: VRep | None
    incidence: Incidence | None
    graph: AdjacencyGraph | None
    status: str
    timings: dict = field(compare=False, repr=False, default_factory=dict)

    @property
    def irredundant(self) -> int:
        return len(self.hrep.constraints)

    @property
    def n_vertices(self) -> int | None:
        return len(self.vrep) if self.vrep is not None else None


@dataclass(frozen=True)
class TableRow:
    parameter: int
    n_gambles: int
    raw_generated: int | None
    irredundant: int | None
    n_vertices: int | None
    status: str
    summary: PipelineSummary | None = None


def _labels(n: int) -> tuple[str, ...]:
    if n > len(ascii_lowercase):
        raise FamilyParameterError("possibility spaces beyond 26 outcomes are not supported")
    return tuple(ascii_lowercase[:n])


def _event_name(space: PossibilitySpace, members: Sequence[str]) -> str:
    return "I_" + "".join(w for w in space.elements if w in set(members))


def _indicator_set(space: PossibilitySpace, events: Sequence[tuple[str, ...]]) -> GambleSet:
    pairs = []
    seen = set()
    for members in events:
        g = indicator(Event.of(space, members))
        if g.payoffs in seen:
            continue
        seen.add(g.payoffs)
        pairs.append((_event_name(space, members), g))
    return GambleSet(space, tuple(n for n, _ in pairs), tuple(g for _, g in pairs))


def _values_based(space: PossibilitySpace, k: int) -> GambleSet:
    d = len(space)
    names, gambles = [], []
    for combo in itertools.product(range(k + 1), repeat=d):
        if min(combo) != 0 or max(combo) != k:
            continue
        payoffs = tuple(rat(v, k) for v in combo)
        sep = "" if k <= 9 else "_"
        names.append("g" + sep.join(str(v) for v in combo))
        gambles.append(payoffs)
    return GambleSet.of(space, list(zip(names, gambles)))


def family_gambles(spec: FamilySpec) -> GambleSet:
    """Deterministic gamble set for a family specification.

    Explicit gambles (single/custom) are normalized onto the min-0/max-1
    class; constant gambles carry no information and are dropped.
    """
    fam = spec.family
    if fam in ("single", "custom"):
        if not spec.gambles:
            raise FamilyParameterError(f"family {fam!r} needs explicit gambles")
        if fam == "single" and len(spec.gambles) != 1:
            raise FamilyParameterError("family 'single' takes exactly one gamble")
        width = len(spec.gambles[0][1])
        space = PossibilitySpace(_labels(spec.omega_size or width))
        pairs = []
        for name, payoffs in spec.gambles:
            g = GambleSet.of(space, [(name, payoffs)])[name]
            if g.in_unit_class():
                pairs.append((name, g))
                continue
            normalized = normalize(g, source=name)
            if normalized is None:
                continue
            pairs.append((name, normalized[0]))
        if not pairs:
            raise FamilyParameterError("no non-constant gambles remain after normalization")
        return GambleSet(space, tuple(n for n, _ in pairs), tuple(g for _, g in pairs))

    if spec.omega_size < 2:
        raise FamilyParameterError("event families need a space with at least two outcomes")
    space = PossibilitySpace(_labels(spec.omega_size))
    singles = [(w,) for w in space.elements]
    complements = [tuple(x for x in space.elements if x != w) for w in space.elements]
    if fam == "lmass":
        return _indicator_set(space, singles)
    if fam == "umass":
        return _indicator_set(space, complements)
    if fam == "lumass":
        return _indicator_set(space, singles + complements)
    if fam == "pset":
        events = [
            combo
            for size in range(1, len(space))
            for combo in itertools.combinations(space.elements, size)
        ]
        return _indicator_set(space, events)
    if fam == "values_based":
        if spec.k < 1:
            raise FamilyParameterError("values_based needs a grid parameter k >= 1")
        return _values_based(space, spec.k)
    raise FamilyParameterError(f"unknown family {fam!r}")


PRESETS: dict[str, FamilySpec] = {
    "toy": FamilySpec(
        "custom", gambles=(("f", ("1", "1/2", "0")), ("g", ("0", "2/3", "1"))), label="toy"
    ),
    "1on3": FamilySpec("single", gambles=(("f", ("1", "1/2", "0")),), label="1on3"),
    "1on3_lu": FamilySpec(
        "custom", gambles=(("f", ("1", "1/2", "0")), ("nf", ("0", "1/2", "1"))), label="1on3_lu"
    ),
    "2on3": FamilySpec(
        "custom", gambles=(("f", ("1", "1/2", "0")), ("g", ("0", "1", "1/2"))), label="2on3"
    ),
    "3on3": FamilySpec(
        "custom",
        gambles=(
            ("f", ("1", "0", "1/2")),
            ("g", ("0", "1/2", "1")),
            ("h", ("1/2", "1", "0")),
        ),
        label="3on3",
    ),
    # Extensions of the two- and three-gamble sets to larger spaces.  The
    # extra payoff values are a fixed convention chosen to keep the gambles
    # in general position; the resulting counts describe this convention,
    # not every possible extension.
    "2on4": FamilySpec(
        "custom",
        gambles=(("f", ("1", "1/2", "0", "1/3")), ("g", ("0", "2/3", "1", "1/4"))),
        label="2on4",
    ),
    "2on5": FamilySpec(
        "custom",
        gambles=(
            ("f", ("1", "1/2", "0", "1/3", "4/5")),
            ("g", ("0", "2/3", "1", "1/4", "1/5")),
        ),
        label="2on5",
    ),
    "3on4": FamilySpec(
        "custom",
        gambles=(
            ("f", ("1", "0", "1/2", "1/3")),
            ("g", ("0", "1/2", "1", "2/3")),
            ("h", ("1/2", "1", "0", "1/4")),
        ),
        label="3on4",
    ),
    "3on5": FamilySpec(
        "custom",
        gambles=(
            ("f", ("1", "0", "1/2", "1/3", "1/5")),
            ("g", ("0", "1/2", "1", "2/3", "2/5")),
            ("h", ("1/2", "1", "0", "1/4", "4/5")),
        ),
        label="3on5",
    ),
}


class _Deadline:
    def __init__(self, limit: float | None):
        self.at = time.monotonic() + limit if limit is not None else None

    def check(self, stage: str) -> None:
        if self.at is not None and time.monotonic() > self.at:
            raise BudgetExceeded(f"time limit reached before {stage}")


def run_pipeline(
    source: FamilySpec | GambleSet,
    budget: Budget = Budget(),
    jobs: int = 1,
) -> PipelineSummary:
    """Full pipeline on a gamble set or family specification.

    Augments with singleton indicators, generates the constraint family,
    removes redundancy, projects back onto the original coordinates,
    removes redundancy again, then enumerates vertices and their adjacency.
    A vertex-stage budget overrun degrades the run to a partial summary
    that still carries the exact constraint counts.
    """
    if isinstance(source, FamilySpec):
        label = source.label or source.family
        original = family_gambles(source)
    else:
        label = "custom"
        original = source
    deadline = _Deadline(budget.time_limit)
    timings: dict[str, float] = {}

    t0 = time.monotonic()
    augmented, auxiliary = augment_with_indicators(original)
    cs = generate_constraints(augmented, jobs=jobs)
    timings["generate"] = time.monotonic() - t0
    deadline.check("redundancy removal")

    t0 = time.monotonic()
    reduced = remove_redundant(cs.to_hrep(), jobs=jobs)
    timings["reduce"] = time.monotonic() - t0
    deadline.check("projection")

    t0 = time.monotonic()
    projected = fm_project(reduced, original.names)
    # A trivial projection returns the reduced system unchanged, in which
    # case the follow-up reduction has nothing left to do.
    final = projected if projected is reduced else remove_redundant(projected, jobs=jobs)
    timings["project"] = time.monotonic() - t0
    deadline.check("vertex enumeration")

    vrep = incidence = graph = None
    status = "ok"
    t0 = time.monotonic()
    try:
        vrep, incidence = enumerate_vertices(
            final, max_rays=budget.max_dd_rays, deadline=deadline.at
        )
        if budget.max_vertices is not None and len(vrep) > budget.max_vertices:
            raise BudgetExceeded(f"vertex count exceeds {budget.max_vertices}")
        graph = adjacency(vrep, incidence)
    except BudgetExceeded as exc:
        vrep = incidence = graph = None
        status = f"partial: {exc}"
    timings["enumerate"] = time.monotonic() - t0

    return PipelineSummary(
        label=label,
        original=original,
        augmented=augmented,
        auxiliary=auxiliary,
        raw_generated=cs.raw_generated,
        deduped=len(cs.constraints),
        hrep=final,
        vrep=vrep,
        incidence=incidence,
        graph=graph,
        status=status,
        timings=timings,
    )


def reproduce_table(
    family: str,
    parameters: Sequence[int],
    budget: Budget = Budget(),
    jobs: int = 1,
) -> list[TableRow]:
    """One pipeline run per parameter; budget overruns become row statuses.

    The parameter is the space size for event families and the grid
    parameter k for values_based (on three outcomes).
    """
    rows = []
    for p in parameters:
        if family == "values_based":
            spec = FamilySpec("values_based", omega_size=3, k=p, label=f"vb3_{p}")
        else:
            spec = FamilySpec(family, omega_size=p, label=f"{family}{p}")
        try:
            summary = run_pipeline(spec, budget=budget, jobs=jobs)
        except BudgetExceeded as exc:
            rows.append(
                TableRow(p, len(family_gambles(spec)), None, None, None, f"skipped: {exc}")
            )
            continue
        rows.append(
            TableRow(
                p,
                len(summary.original),
                summary.raw_generated,
                summary.irredundant,
                summary.n_vertices,
                summary.status,
                summary,
            )
        )
    return rows


def degenerate_vertex_check(summary: PipelineSummary) -> bool:
    """Point-evaluation uniqueness on indicator coordinates.

    For every singleton indicator present among the original gambles,
    exactly one enumerated vertex has a nonzero value at that coordinate,
    and that vertex is the point evaluation at the matching outcome.
    Vacuously true when no indicator is an original gamble or when the
    vertex stage was skipped.
    """
    if summary.vrep is None:
        return True
    k = summary.original
    for w in k.space.elements:
        ind = indicator(Event.of(k.space, [w]))
        col = next((j for j, g in enumerate(k.gambles) if g.payoffs == ind.payoffs), None)
        if col is None:
            continue
        nonzero = [v for v in summary.vrep.vertices if v[col] != 0]
        expected = degenerate_prevision(k, w).values
        if len(nonzero) != 1 or nonzero[0] != expected:
            return False
    return True
