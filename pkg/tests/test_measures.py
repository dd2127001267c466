from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from app.exceptions import AllZeroPossibility, KindMismatch, ZeroTotal
from app.models.measures import (
    FrequencyCounts,
    PossibilityDistribution,
    ProbabilityDistribution,
    check_poss_axioms,
    check_prob_axioms,
    event_table,
    fair_die,
    from_frequencies,
    innocent_prior,
    is_innocent,
    normalize,
    poss_event,
    prob_event,
    sample,
    splitmix64,
    total_variation,
)
from app.models.spaces import Event, SampleSpace, SpaceKind
from tests.strategies import (
    event_masks,
    possibility_distributions,
    probability_distributions,
)

F = Fraction


def counts_of(**counts):
    return FrequencyCounts(SampleSpace(SpaceKind.RANDOM, tuple(counts)), counts)


def test_frequencies_to_probabilities():
    dist = from_frequencies(counts_of(a=2, b=3, c=5))
    assert dist.vector() == [F(1, 5), F(3, 10), F(1, 2)]


def test_all_votes_on_one_outcome():
    dist = from_frequencies(counts_of(a=0, b=7, c=0))
    assert dist.vector() == [0, 1, 0]


def test_zero_total():
    with pytest.raises(ZeroTotal):
        from_frequencies(counts_of(a=0, b=0))


def test_probability_needs_random_space(fuzzy_space):
    with pytest.raises(KindMismatch):
        ProbabilityDistribution(fuzzy_space, {label: F(1, 3) for label in fuzzy_space.labels})


def test_prob_event():
    die = fair_die(6)
    assert prob_event(die, die.space.event(["2", "3"])) == F(1, 3)
    assert prob_event(die, die.space.full()) == 1
    assert prob_event(die, Event()) == 0


def test_poss_event(possibility, fuzzy_space):
    assert poss_event(possibility, Event()) == 0
    assert poss_event(possibility, fuzzy_space.full()) == 1
    assert poss_event(possibility, fuzzy_space.event(["x1", "x3"])) == F(1, 2)


@given(probability_distributions(), event_masks(6), event_masks(6))
def test_inclusion_exclusion(dist, a, b):
    size = dist.space.size
    a, b = a & ((1 << size) - 1), b & ((1 << size) - 1)
    space = dist.space
    ea, eb = space.from_mask(a), space.from_mask(b)
    union = prob_event(dist, space.from_mask(a | b))
    both = prob_event(dist, space.from_mask(a & b))
    assert union == prob_event(dist, ea) + prob_event(dist, eb) - both


def test_valid_probability_passes(uniform_probability):
    report = check_prob_axioms(uniform_probability)
    assert report.passed
    assert [check.name for check in report.checks] == [
        "nonnegativity",
        "normality",
        "additivity",
    ]


def test_sum_below_one_fails_normality(random_space):
    dist = ProbabilityDistribution(random_space, {label: F(3, 10) for label in random_space.labels})
    report = check_prob_axioms(dist)
    assert not report["normality"].passed
    assert "9/10" in report["normality"].witness


def test_negative_value_names_the_label(random_space):
    dist = ProbabilityDistribution(
        random_space, {"x1": F(-1, 10), "x2": F(1, 2), "x3": F(3, 5)}
    )
    report = check_prob_axioms(dist)
    assert not report["nonnegativity"].passed
    assert "x1" in report["nonnegativity"].witness


def test_real_values_use_tolerance(random_space):
    dist = ProbabilityDistribution(random_space, {"x1": 0.1, "x2": 0.2, "x3": 0.7})
    assert check_prob_axioms(dist).passed


def test_large_space_skips_additivity():
    space = SampleSpace(SpaceKind.RANDOM, tuple(f"x{i}" for i in range(11)))
    dist = ProbabilityDistribution(space, {label: F(1, 11) for label in space.labels})
    report = check_prob_axioms(dist)
    assert report.passed
    assert report["additivity"].skipped


@given(probability_distributions())
def test_random_probabilities_pass(dist):
    assert check_prob_axioms(dist).passed


@given(possibility_distributions())
def test_random_possibilities_pass(dist):
    assert check_poss_axioms(dist).passed


def test_possibility_normality_flag(fuzzy_space):
    values = {"x1": F(9, 10), "x2": F(1, 2), "x3": 0}
    flagged = PossibilityDistribution(fuzzy_space, values, normalized=True)
    assert not check_poss_axioms(flagged)["normality"].passed
    honest = PossibilityDistribution(fuzzy_space, values, normalized=False)
    assert check_poss_axioms(honest).passed


def test_sum_above_one_is_not_an_error(possibility):
    assert sum(possibility.vector()) > 1
    assert check_poss_axioms(possibility).passed


def test_value_above_one_fails(fuzzy_space):
    dist = PossibilityDistribution(fuzzy_space, {"x1": F(3, 2), "x2": F(1), "x3": 0})
    assert not check_poss_axioms(dist)["empty_set"].passed


def test_event_table_matches_events(possibility):
    table = event_table(possibility)
    assert len(table) == 8
    assert table[0] == 0
    assert table[0b101] == F(1, 2)


def test_innocent_prior(fuzzy_space, random_space):
    prior = innocent_prior(fuzzy_space)
    assert prior.vector() == [1, 1, 1]
    assert is_innocent(prior)
    assert poss_event(prior, fuzzy_space.event(["x3"])) == 1
    with pytest.raises(KindMismatch):
        innocent_prior(random_space)


def test_normalize(fuzzy_space):
    dist = PossibilityDistribution(
        fuzzy_space, {"x1": F(2, 5), "x2": F(1, 5), "x3": 0}, normalized=False
    )
    result = normalize(dist)
    assert result.vector() == [1, F(1, 2), 0]
    assert result.normalized
    with pytest.raises(AllZeroPossibility):
        normalize(PossibilityDistribution(fuzzy_space, dict.fromkeys(fuzzy_space.labels, 0), False))


def test_argmax_ties_go_to_first_label(fuzzy_space):
    dist = PossibilityDistribution(fuzzy_space, {"x1": F(1, 2), "x2": 1, "x3": 1})
    assert dist.argmax() == "x2"


def test_splitmix64_reference_values():
    assert [int(z) for z in splitmix64(0, 2)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4]


def test_point_mass_sampling(random_space):
    dist = ProbabilityDistribution(random_space, {"x1": 1, "x2": 0, "x3": 0})
    counts = sample(dist, 500, seed=7)
    assert counts.counts == {"x1": 500, "x2": 0, "x3": 0}


def test_sampling_is_deterministic():
    die = fair_die(6)
    assert sample(die, 10_000, 123) == sample(die, 10_000, 123)
    assert sample(die, 10_000, 123) != sample(die, 10_000, 124)


def test_fair_die_frequencies_converge():
    die = fair_die(6)
    estimate = from_frequencies(sample(die, 1_000_000, 42))
    deviations = np.array([float(estimate[label]) - 1 / 6 for label in die.space.labels])
    assert np.abs(deviations).max() <= 0.005
    assert total_variation(estimate, die) <= 0.01


def test_total_variation_shrinks_with_sample_size():
    die = fair_die(6)
    distances = [
        total_variation(from_frequencies(sample(die, n, 42)), die) for n in (100, 10_000, 1_000_000)
    ]
    assert distances[0] > distances[1] > distances[2]
    assert distances[2] <= 0.005
