"""Gamble and prevision domain model.

Gambles are exact rational payoff vectors over a finite possibility space.
This module provides normalization onto the class of gambles with minimum
zero and maximum one, supports, indicators, conjugacy via complements, and
augmentation of a gamble set with all singleton indicators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ._rat import ONE, ZERO, Rat, rat
from .errors import DimensionMismatch, IndexMismatch, NotNormalized

__all__ = [
    "PossibilitySpace",
    "Event",
    "Gamble",
    "GambleSet",
    "LowerPrevision",
    "AffineRecord",
    "indicator",
    "support",
    "normalize",
    "denormalize_value",
    "complement_gamble",
    "augment_with_indicators",
    "degenerate_prevision",
    "vacuous_prevision",
]


@dataclass(frozen=True)
class PossibilitySpace:
    """Finite, ordered set of distinct outcome labels."""

    elements: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("outcome labels must be distinct")
        if not self.elements:
            raise ValueError("the possibility space must be nonempty")

    @classmethod
    def of(cls, labels: Iterable[str]) -> "PossibilitySpace":
        return cls(tuple(labels))

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, label: str) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise KeyError(f"{label!r} is not an outcome of this space") from None


@dataclass(frozen=True)
class Event:
    """A subset of the possibility space."""

    space: PossibilitySpace
    members: frozenset[str]

    def __post_init__(self) -> None:
        unknown = self.members - set(self.space.elements)
        if unknown:
            raise KeyError(f"event members {sorted(unknown)} are not outcomes of the space")

    @classmethod
    def of(cls, space: PossibilitySpace, members: Iterable[str]) -> "Event":
        return cls(space, frozenset(members))

    def sorted_members(self) -> tuple[str, ...]:
        return tuple(w for w in self.space.elements if w in self.members)

    def __contains__(self, label: str) -> bool:
        return label in self.members

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Gamble:
    """Rational payoff vector over a possibility space."""

    space: PossibilitySpace
    payoffs: tuple[Rat, ...]

    def __post_init__(self) -> None:
        if len(self.payoffs) != len(self.space):
            raise DimensionMismatch("payoff vector length differs from the space size")

    @classmethod
    def of(cls, space: PossibilitySpace, payoffs: Iterable) -> "Gamble":
        return cls(space, tuple(rat(v) for v in payoffs))

    def __getitem__(self, label: str) -> Rat:
        return self.payoffs[self.space.index(label)]

    def minimum(self) -> Rat:
        return min(self.payoffs)

    def maximum(self) -> Rat:
        return max(self.payoffs)

    def in_unit_class(self) -> bool:
        """Minimum exactly 0 and maximum exactly 1."""
        return self.minimum() == 0 and self.maximum() == 1

    def is_constant(self) -> bool:
        return self.minimum() == self.maximum()

    def __add__(self, other: "Gamble") -> "Gamble":
        if other.space != self.space:
            raise DimensionMismatch("gambles live on different spaces")
        return Gamble(self.space, tuple(a + b for a, b in zip(self.payoffs, other.payoffs)))

    def __sub__(self, other: "Gamble") -> "Gamble":
        if other.space != self.space:
            raise DimensionMismatch("gambles live on different spaces")
        return Gamble(self.space, tuple(a - b for a, b in zip(self.payoffs, other.payoffs)))

    def scaled(self, factor) -> "Gamble":
        f = rat(factor)
        return Gamble(self.space, tuple(f * v for v in self.payoffs))

    def shifted(self, offset) -> "Gamble":
        a = rat(offset)
        return Gamble(self.space, tuple(v + a for v in self.payoffs))


def indicator(a: Event, space: PossibilitySpace | None = None) -> Gamble:
    """The gamble that pays 1 on the event and 0 elsewhere."""
    sp = space if space is not None else a.space
    if sp != a.space:
        raise KeyError("event belongs to a different space")
    return Gamble(sp, tuple(ONE if w in a.members else ZERO for w in sp.elements))


def support(g: Gamble) -> Event:
    """The outcomes where the gamble pays a nonzero amount."""
    return Event(g.space, frozenset(w for w, v in zip(g.space.elements, g.payoffs) if v))


@dataclass(frozen=True)
class AffineRecord:
    """Positive scale and shift linking a normalized gamble to its source."""

    scale: Rat
    shift: Rat
    source: str = ""

    def __post_init__(self) -> None:
        if self.scale <= 0:
            raise ValueError("scale must be positive")


def normalize(g: Gamble, source: str = "") -> tuple[Gamble, AffineRecord] | None:
    """Map onto the min-0/max-1 class; None for constant gambles.

    The returned record inverts the map: original value = scale * v + shift.
    """
    lo, hi = g.minimum(), g.maximum()
    if lo == hi:
        return None
    span = hi - lo
    scaled = Gamble(g.space, tuple((v - lo) / span for v in g.payoffs))
    return scaled, AffineRecord(scale=span, shift=lo, source=source)


def denormalize_value(value: Rat, record: AffineRecord) -> Rat:
    """Pull a prevision value back through the normalizing affine map."""
    return record.scale * rat(value) + record.shift


def complement_gamble(g: Gamble) -> Gamble:
    """Pointwise 1 - g; stays inside the min-0/max-1 class."""
    if not g.in_unit_class():
        raise NotNormalized("complement requires a gamble with minimum 0 and maximum 1")
    return Gamble(g.space, tuple(ONE - v for v in g.payoffs))


@dataclass(frozen=True)
class GambleSet:
    """Named, ordered collection of pairwise distinct gambles on one space.

    The order fixes the coordinate system of every derived polytope, so it
    is part of the value: two sets with the same gambles in different orders
    are different gamble sets.
    """

    space: PossibilitySpace
    names: tuple[str, ...]
    gambles: tuple[Gamble, ...]
    in_L: bool = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.names) != len(self.gambles):
            raise DimensionMismatch("names and gambles differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("gamble names must be distinct")
        seen: dict[tuple, str] = {}
        for name, g in zip(self.names, self.gambles):
            if g.space != self.space:
                raise DimensionMismatch(f"gamble {name!r} lives on a different space")
            key = g.payoffs
            if key in seen:
                raise ValueError(
                    f"gambles {seen[key]!r} and {name!r} are equal as payoff vectors"
                )
            seen[key] = name
        object.__setattr__(
            self, "in_L", all(g.in_unit_class() for g in self.gambles)
        )

    @classmethod
    def of(cls, space: PossibilitySpace, named_gambles: Iterable[tuple[str, Iterable]]) -> "GambleSet":
        pairs = [(name, Gamble.of(space, vals)) for name, vals in named_gambles]
        return cls(space, tuple(n for n, _ in pairs), tuple(g for _, g in pairs))

    def __len__(self) -> int:
        return len(self.gambles)

    def __iter__(self):
        return iter(zip(self.names, self.gambles))

    def __getitem__(self, name: str) -> Gamble:
        try:
            return self.gambles[self.names.index(name)]
        except ValueError:
            raise KeyError(f"no gamble named {name!r}") from None

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no gamble named {name!r}") from None

    def payoff_matrix(self) -> list[tuple[Rat, ...]]:
        """Rows indexed by outcomes, columns by gambles."""
        return [tuple(g.payoffs[i] for g in self.gambles) for i in range(len(self.space))]


def _fresh_name(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name = "_" + name
    return name


def augment_with_indicators(k: GambleSet) -> tuple[GambleSet, tuple[str, ...]]:
    """Append every singleton indicator not already present as a vector.

    Returns the widened set and the names of the appended coordinates, in
    outcome order.  Original gambles keep their positions, so projecting the
    widened polytope back onto the leading coordinates recovers the original
    coordinate system.  Idempotent.
    """
    if not k.in_L:
        raise NotNormalized("augmentation requires all gambles normalized to min 0, max 1")
    existing = {g.payoffs for g in k.gambles}
    taken = set(k.names)
    names = list(k.names)
    gambles = list(k.gambles)
    added: list[str] = []
    for w in k.space.elements:
        ind = indicator(Event.of(k.space, [w]))
        if ind.payoffs in existing:
            continue
        name = _fresh_name(f"I_{w}", taken)
        names.append(name)
        gambles.append(ind)
        added.append(name)
        taken.add(name)
        existing.add(ind.payoffs)
    if not added:
        return k, ()
    return GambleSet(k.space, tuple(names), tuple(gambles)), tuple(added)


@dataclass(frozen=True)
class LowerPrevision:
    """A rational value per gamble of a fixed gamble set."""

    gamble_set: GambleSet
    values: tuple[Rat, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(self.gamble_set):
            raise IndexMismatch("prevision length differs from the gamble set size")

    @classmethod
    def of(cls, gamble_set: GambleSet, values) -> "LowerPrevision":
        if isinstance(values, Mapping):
            missing = [n for n in gamble_set.names if n not in values]
            if missing:
                raise IndexMismatch(f"missing prevision values for {missing}")
            extra = [n for n in values if n not in gamble_set.names]
            if extra:
                raise IndexMismatch(f"prevision values for unknown gambles {extra}")
            vals = tuple(rat(values[n]) for n in gamble_set.names)
        else:
            vals = tuple(rat(v) for v in values)
        return cls(gamble_set, vals)

    def __getitem__(self, name: str) -> Rat:
        return self.values[self.gamble_set.index(name)]

    def as_dict(self) -> dict[str, Rat]:
        return dict(zip(self.gamble_set.names, self.values))


def degenerate_prevision(k: GambleSet, outcome: str) -> LowerPrevision:
    """Point evaluation at one outcome, restricted to the gamble set."""
    i = k.space.index(outcome)
    return LowerPrevision(k, tuple(g.payoffs[i] for g in k.gambles))


def vacuous_prevision(k: GambleSet, event: Event | None = None) -> LowerPrevision:
    """Minimum over an event (default: the whole space), per gamble."""
    if event is None:
        idx = range(len(k.space))
    else:
        if event.space != k.space:
            raise KeyError("event belongs to a different space")
        if not event.members:
            raise ValueError("the vacuous prevision needs a nonempty event")
        idx = [k.space.index(w) for w in event.sorted_members()]
    return LowerPrevision(k, tuple(min(g.payoffs[i] for i in idx) for g in k.gambles))
