from fractions import Fraction

import pytest
from hypothesis import assume, given

from app.exceptions import EmptyReference, InvalidInput, NotExhaustive
from app.fixtures import generate_fixture
from app.models.disjunction import (
    PairClass,
    classify_pair,
    exact_union_possibility,
    prob_union_report,
    sigma_triviality,
    verify_exact_maxitivity,
    verify_prop_5_1,
    verify_prop_5_2,
)
from app.models.intensions import IntensionSet, measure
from app.models.measures import PossibilityDistribution, ProbabilityDistribution, fair_die
from app.models.spaces import SampleSpace, SpaceKind
from tests.strategies import event_masks, intension_sets, probability_distributions

F = Fraction


def atoms(*ids):
    return IntensionSet("u", {atom: 1 for atom in ids})


SUBJECT = atoms(0, 1, 2, 3)


@pytest.mark.parametrize(
    ("fi", "fj", "expected"),
    [
        (atoms(0, 1, 9), atoms(2, 3), PairClass.PROJECTION_EXCLUSIVE),
        (atoms(0, 1, 2), atoms(0, 1), PairClass.PROJECTION_NESTED),
        (atoms(0, 1, 2), atoms(1, 2, 3), PairClass.GENERAL),
        (atoms(7), atoms(0, 1), PairClass.PROJECTION_NESTED),
    ],
)
def test_classify_pair(fi, fj, expected):
    assert classify_pair(SUBJECT, fi, fj) is expected


def test_overlap_outside_subject_keeps_pair_exclusive():
    assert classify_pair(SUBJECT, atoms(0, 8), atoms(3, 8)) is PairClass.PROJECTION_EXCLUSIVE


def test_empty_subject():
    with pytest.raises(EmptyReference):
        classify_pair(IntensionSet("u"), atoms(0), atoms(1))


def test_exclusive_pair_union_is_the_sum():
    report = exact_union_possibility(SUBJECT, atoms(0, 1), atoms(2, 3), "a", "b")
    assert report.pair_class is PairClass.PROJECTION_EXCLUSIVE
    assert report.pi_union_exact == report.pi_i + report.pi_j == 1
    assert report.max_error == F(1, 2)
    assert (report.label_i, report.label_j) == ("a", "b")


def test_nested_pair_union_is_the_max():
    report = exact_union_possibility(SUBJECT, atoms(0, 1, 2), atoms(0, 1))
    assert report.pi_union_exact == report.pi_union_max == F(3, 4)
    assert report.max_error == 0


def test_general_pair_uses_inclusion_exclusion():
    report = exact_union_possibility(SUBJECT, atoms(0, 1, 2), atoms(1, 2, 3))
    assert report.pair_class is PairClass.GENERAL
    assert report.pi_intersection == F(1, 2)
    assert report.pi_union_exact == report.pi_union_sum == 1
    assert report.pi_union_sigma == F(3, 2)


@given(intension_sets(min_size=1), intension_sets(), intension_sets())
def test_union_lies_between_max_and_sum(fX, fi, fj):
    assume(measure(fX) > 0)
    report = exact_union_possibility(fX, fi, fj)
    assert report.pi_union_max <= report.pi_union_exact <= report.pi_union_sigma
    assert report.max_error >= 0
    if report.pair_class is PairClass.PROJECTION_NESTED:
        assert report.max_error == 0
    if report.pair_class is PairClass.PROJECTION_EXCLUSIVE:
        assert report.pi_union_exact == report.pi_union_sigma


def test_disjoint_events_add():
    die = fair_die(6)
    report = prob_union_report(die, die.space.event(["1"]), die.space.event(["2", "3"]))
    assert report.p_union == report.p_a + report.p_b == F(1, 2)
    assert report.additive_case
    assert report.pair_class is PairClass.MUTUALLY_EXCLUSIVE


def test_nested_events_take_the_max():
    die = fair_die(6)
    report = prob_union_report(die, die.space.event(["1"]), die.space.event(["1", "2"]))
    assert report.p_union == max(report.p_a, report.p_b) == report.p_b
    assert report.nested_case
    assert report.trivial
    assert report.pair_class is None


@given(probability_distributions(), event_masks(6), event_masks(6))
def test_probability_union_bounds(dist, a, b):
    space = dist.space
    full = (1 << space.size) - 1
    report = prob_union_report(dist, space.from_mask(a & full), space.from_mask(b & full))
    assert report.bounds_ok


def test_union_bound_is_capped_at_one():
    space = SampleSpace(SpaceKind.RANDOM, ("a", "b"))
    overweight = ProbabilityDistribution(space, {"a": F(7, 10), "b": F(7, 10)})
    report = prob_union_report(overweight, space.event(["a"]), space.event(["b"]))
    assert report.p_union == F(7, 5)
    assert not report.bounds_ok


def test_nested_pairs_are_exactly_maxitive():
    concepts = [("big", atoms(0, 1, 2, 3, 4)), ("small", atoms(0, 1)), ("mid", atoms(0, 1, 2))]
    report = verify_exact_maxitivity(SUBJECT, concepts)
    assert report.passed
    assert all(pair.max_error == 0 for pair in report.pairs)


def test_pairs_need_two_concepts():
    with pytest.raises(InvalidInput):
        verify_exact_maxitivity(SUBJECT, [("only", atoms(0))])


def test_max_is_a_lower_bound():
    concepts = [("a", atoms(0, 1)), ("b", atoms(1, 2)), ("c", atoms(0, 1, 2, 3))]
    report = verify_prop_5_1(SUBJECT, concepts)
    assert report.passed
    assert len(report.pairs) == 3


def test_feature_extraction():
    concepts = [("a", atoms(0)), ("b", atoms(0, 1, 2, 3)), ("c", atoms(0, 1, 2, 3, 4))]
    report = verify_prop_5_2(SUBJECT, concepts)
    assert report.pi_space == 1 == report.max_value
    assert report.argmax == "b"


def test_feature_extraction_needs_exhaustive_setup():
    with pytest.raises(NotExhaustive):
        verify_prop_5_2(SUBJECT, [("a", atoms(0, 1)), ("b", atoms(2))])


def test_sigma_triviality():
    space = SampleSpace(SpaceKind.FUZZY, ("x1", "x2", "x3"))
    report = sigma_triviality(PossibilityDistribution(space, {"x1": 1, "x2": F(1, 2), "x3": 0}))
    assert report.sigma == F(3, 2)
    assert report.positive == 2
    assert report.applies and report.passed

    single = sigma_triviality(PossibilityDistribution(space, {"x1": 1, "x2": 0, "x3": 0}))
    assert not single.applies
    assert not single.exceeds_one


def test_example_age45_identities():
    fixture = generate_fixture("example-5.1")
    concepts = dict(fixture.concepts)
    fX = fixture.subject
    youth_mid = exact_union_possibility(fX, concepts["YOUTH"], concepts["MID"])
    aged_mid = exact_union_possibility(fX, concepts["AGED"], concepts["MID"])
    youth_aged = exact_union_possibility(fX, concepts["YOUTH"], concepts["AGED"])
    assert youth_mid.pi_union_exact == youth_mid.pi_union_max
    assert aged_mid.pi_union_exact == aged_mid.pi_union_max
    assert youth_aged.pi_union_exact == youth_aged.pi_i + youth_aged.pi_j
    assert youth_aged.max_error == youth_aged.pi_i + youth_aged.pi_j - youth_aged.pi_union_max


def test_example_researcher_general_pair():
    fixture = generate_fixture("example-5.2")
    concepts = dict(fixture.concepts)
    report = exact_union_possibility(fixture.subject, concepts["EX"], concepts["SC"])
    assert report.pair_class is PairClass.GENERAL
    assert report.pi_union_exact == report.pi_i + report.pi_j - report.pi_intersection
    assert 0 < report.pi_intersection


@pytest.mark.parametrize("other", ["EX", "SC"])
def test_example_researcher_pairs_with_re_resolve_by_max(other):
    fixture = generate_fixture("example-5.2")
    concepts = dict(fixture.concepts)
    report = exact_union_possibility(fixture.subject, concepts[other], concepts["RE"])
    assert report.pair_class is PairClass.PROJECTION_NESTED
    assert report.pi_union_exact == report.pi_union_max == report.pi_j == 1
    assert report.max_error == 0
