from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from app.config import MAX_ENUMERATION_SIZE
from app.exceptions import ForeignLabel, InvalidInput, SpaceTooLarge

OutcomeLabel = str


class SpaceKind(str, Enum):
    RANDOM = "random"
    FUZZY = "fuzzy"


@dataclass(frozen=True)
class Event:
    """
    Событие: подмножество меток выборочного пространства (возможно пустое).
    """

    members: frozenset[OutcomeLabel] = frozenset()

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, label: object) -> bool:
        return label in self.members

    def issubset(self, other: "Event") -> bool:
        return self.members <= other.members


@dataclass(frozen=True)
class SampleSpace:
    """
    Конечное выборочное пространство: случайное (Ω) или нечёткое (Ψ).
    Порядок меток задаёт порядок перебора событий и разрешение ничьих.
    """

    kind: SpaceKind
    labels: tuple[OutcomeLabel, ...]

    def __post_init__(self):
        object.__setattr__(self, "kind", SpaceKind(self.kind))
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise InvalidInput("Sample space must contain at least one label")
        if any(not isinstance(label, str) or not label for label in self.labels):
            raise InvalidInput("Outcome labels must be non-empty strings")
        if len(set(self.labels)) != len(self.labels):
            raise InvalidInput("Outcome labels must be pairwise distinct")

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: OutcomeLabel) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ForeignLabel(f"Label {label!r} is not in the sample space")

    def event(self, labels: Iterable[OutcomeLabel]) -> Event:
        event = Event(frozenset(labels))
        self.check(event)
        return event

    def full(self) -> Event:
        return Event(frozenset(self.labels))

    def check(self, event: Event) -> None:
        foreign = sorted(event.members - set(self.labels))
        if foreign:
            raise ForeignLabel(f"Labels {foreign} are not in the sample space")

    def mask(self, event: Event) -> int:
        self.check(event)
        return sum(1 << i for i, label in enumerate(self.labels) if label in event)

    def from_mask(self, mask: int) -> Event:
        return Event(
            frozenset(label for i, label in enumerate(self.labels) if mask >> i & 1)
        )

    def ordered(self, event: Event) -> list[OutcomeLabel]:
        return [label for label in self.labels if label in event]

    def with_kind(self, kind: SpaceKind) -> "SampleSpace":
        return SampleSpace(kind, self.labels)


class EventAlgebra(NamedTuple):
    complement_a: Event
    union: Event
    intersection: Event


def enumerate_events(space: SampleSpace) -> list[Event]:
    """
    Все 2^N событий, упорядоченные по битовой маске в порядке меток.
    Пустое событие включено: σ-алгебра обязана его содержать.
    """
    if space.size > MAX_ENUMERATION_SIZE:
        raise SpaceTooLarge(
            f"Cannot enumerate 2^{space.size} events (limit is N <= {MAX_ENUMERATION_SIZE})"
        )
    return [space.from_mask(mask) for mask in range(1 << space.size)]


def event_algebra(a: Event, b: Event, space: SampleSpace) -> EventAlgebra:
    space.check(a)
    space.check(b)
    return EventAlgebra(
        complement_a=Event(frozenset(space.labels) - a.members),
        union=Event(a.members | b.members),
        intersection=Event(a.members & b.members),
    )
