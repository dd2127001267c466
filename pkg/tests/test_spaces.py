import pytest
from hypothesis import given

from app.exceptions import ForeignLabel, InvalidInput, SpaceTooLarge
from app.models.spaces import Event, SampleSpace, SpaceKind, enumerate_events, event_algebra
from tests.strategies import event_masks, labels


def test_single_label_space_has_two_events():
    space = SampleSpace(SpaceKind.RANDOM, ("x1",))
    assert enumerate_events(space) == [Event(), Event(frozenset({"x1"}))]


def test_events_follow_bitmask_order(random_space):
    events = enumerate_events(random_space)
    assert len(events) == 8
    assert [random_space.mask(event) for event in events] == list(range(8))
    assert events[0] == Event()
    assert events[-1] == random_space.full()


def test_power_set_is_closed_under_algebra():
    space = SampleSpace(SpaceKind.FUZZY, labels(4))
    events = enumerate_events(space)
    assert len(events) == 16
    family = set(events)
    for a in events:
        for b in events:
            result = event_algebra(a, b, space)
            assert {result.complement_a, result.union, result.intersection} <= family


def test_enumeration_guard():
    space = SampleSpace(SpaceKind.RANDOM, labels(21))
    with pytest.raises(SpaceTooLarge):
        enumerate_events(space)


@pytest.mark.parametrize("bad", [(), ("x1", "x1"), ("x1", "")])
def test_invalid_spaces(bad):
    with pytest.raises(InvalidInput):
        SampleSpace(SpaceKind.RANDOM, bad)


def test_containment_case(random_space):
    a = random_space.event(["x1"])
    b = random_space.event(["x1", "x2"])
    result = event_algebra(a, b, random_space)
    assert result.union == b
    assert result.intersection == a


def test_complement_of_empty_is_full(random_space):
    assert event_algebra(Event(), Event(), random_space).complement_a == random_space.full()


def test_foreign_labels_are_rejected(random_space):
    with pytest.raises(ForeignLabel):
        random_space.event(["x9"])
    with pytest.raises(ForeignLabel):
        event_algebra(Event(frozenset({"x9"})), Event(), random_space)


@given(event_masks(5), event_masks(5))
def test_algebra_agrees_with_bitmasks(a, b):
    space = SampleSpace(SpaceKind.RANDOM, labels(5))
    result = event_algebra(space.from_mask(a), space.from_mask(b), space)
    assert space.mask(result.union) == a | b
    assert space.mask(result.intersection) == a & b
    assert space.mask(result.complement_a) == ~a & 0b11111


@pytest.mark.parametrize("size", range(1, 7))
def test_commutativity_and_de_morgan(size):
    space = SampleSpace(SpaceKind.RANDOM, labels(size))

    def complement(event):
        return event_algebra(event, Event(), space).complement_a

    events = enumerate_events(space)
    for a in events:
        for b in events:
            ab = event_algebra(a, b, space)
            ba = event_algebra(b, a, space)
            assert ab.union == ba.union
            assert ab.intersection == ba.intersection
            duals = event_algebra(complement(a), complement(b), space)
            assert complement(ab.union) == duals.intersection
            assert complement(ab.intersection) == duals.union
