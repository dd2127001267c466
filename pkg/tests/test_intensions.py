import math
from fractions import Fraction

import pytest
from hypothesis import assume, given

from app.exceptions import (
    BothEmpty,
    DegenerateGrid,
    DimensionMismatch,
    EmptyReference,
    InvalidInput,
    UniverseMismatch,
    ZeroVector,
)
from app.models.intensions import (
    EllipseSpec,
    Grid,
    IntensionSet,
    check_space_kind,
    compatibility_distribution,
    cosine,
    intersection,
    is_exhaustive,
    is_fuzzy_setup,
    measure,
    rasterize_ellipse,
    set_algebra,
    similarity,
    subsethood,
    union,
)
from app.models.measures import is_innocent
from app.models.spaces import SpaceKind
from tests.strategies import intension_sets


def atoms(*ids, universe="u"):
    return IntensionSet(universe, {atom: 1 for atom in ids})


def test_measure():
    assert measure(IntensionSet("u")) == 0
    assert measure(IntensionSet("u", {0: 2, 1: 3})) == 5


def test_zero_weights_are_dropped():
    f = IntensionSet("u", {3: 0, 1: 2})
    assert f.weights == {1: 2}
    assert f == IntensionSet("u", {1: 2})


def test_negative_weight_is_rejected():
    with pytest.raises(InvalidInput):
        IntensionSet("u", {0: -1})


def test_idempotence():
    f = IntensionSet("u", {0: 2, 5: 1})
    algebra = set_algebra(f, f)
    assert algebra.intersection == f
    assert algebra.union == f
    assert measure(algebra.difference) == 0


def test_disjoint_supports():
    f, g = atoms(0, 1), IntensionSet("u", {2: 3})
    assert measure(intersection(f, g)) == 0
    assert measure(union(f, g)) == measure(f) + measure(g)


@given(intension_sets(), intension_sets())
def test_union_plus_intersection_identity(f, g):
    assert measure(union(f, g)) + measure(intersection(f, g)) == measure(f) + measure(g)


def test_universe_mismatch():
    with pytest.raises(UniverseMismatch):
        intersection(atoms(0), atoms(0, universe="v"))


def test_subsethood_cases():
    fX = IntensionSet("u", {0: 1, 1: 2})
    assert subsethood(fX, IntensionSet("u", {0: 2, 1: 2, 7: 1})) == 1
    assert subsethood(fX, atoms(5, 6)) == 0
    assert subsethood(fX, atoms(1)) == Fraction(1, 3)
    with pytest.raises(EmptyReference):
        subsethood(IntensionSet("u"), fX)


def test_similarity_cases():
    f = atoms(0, 1, 2)
    assert similarity(f, f) == 1
    assert similarity(f, atoms(7)) == 0
    with pytest.raises(BothEmpty):
        similarity(IntensionSet("u"), IntensionSet("u"))


@given(intension_sets(min_size=1), intension_sets())
def test_similarity_never_exceeds_subsethood(f, g):
    assert similarity(f, g) <= subsethood(f, g)


@given(intension_sets(), intension_sets(min_size=1))
def test_similarity_never_exceeds_reverse_subsethood(f, g):
    assert similarity(f, g) <= subsethood(g, f)


@given(intension_sets(min_size=1), intension_sets(), intension_sets())
def test_triple_overlap_gives_positive_possibilities(fX, fi, fj):
    assume(fX.support & fi.support & fj.support)
    assert subsethood(fX, fi) > 0
    assert subsethood(fX, fj) > 0


@given(intension_sets(min_size=1), intension_sets(), intension_sets())
def test_subsethood_grows_with_the_concept(fX, fC, extra):
    larger = union(fC, extra)
    assert all(larger.weights.get(atom, 0) >= w for atom, w in fC.weights.items())
    assert subsethood(fX, fC) <= subsethood(fX, larger)


def test_cosine():
    assert cosine([1, 2], [2, 4]) == pytest.approx(1.0)
    assert cosine([1, 0], [0, 3]) == pytest.approx(0.0)
    assert cosine([1, 1], [1, 0]) == pytest.approx(1 / math.sqrt(2))
    with pytest.raises(ZeroVector):
        cosine([0, 0], [1, 1])
    with pytest.raises(DimensionMismatch):
        cosine([1, 2, 3], [1, 2])


def test_compatibility_with_universal_concept():
    fX = atoms(0, 1, 2)
    dist = compatibility_distribution(fX, [("PSI", atoms(*range(10))), ("A", atoms(0))])
    assert dist["PSI"] == 1
    assert dist["A"] == Fraction(1, 3)
    assert dist.normalized
    assert dist.space.kind is SpaceKind.FUZZY


def test_innocent_setup():
    fX = atoms(4, 5)
    dist = compatibility_distribution(fX, [("a", atoms(3, 4, 5)), ("b", atoms(4, 5, 6))])
    assert is_innocent(dist)


def test_sub_normalized_compatibility():
    dist = compatibility_distribution(atoms(0, 1), [("a", atoms(0)), ("b", atoms(1, 2))])
    assert not dist.normalized


def test_fuzzy_setup_and_witness():
    fX = atoms(0, 1, 2, 3)
    concepts = [("a", atoms(0, 1)), ("b", atoms(2, 3)), ("c", atoms(1, 2))]
    setup = is_fuzzy_setup(fX, concepts)
    assert setup.fuzzy
    assert setup.witness == ("a", "c")
    assert not is_fuzzy_setup(fX, concepts[:1]).fuzzy
    assert not is_fuzzy_setup(fX, concepts[:2]).fuzzy


def test_fuzzy_setup_checks_subject_universe():
    concepts = [("a", atoms(0, 1)), ("b", atoms(1, 2))]
    with pytest.raises(UniverseMismatch):
        is_fuzzy_setup(atoms(0, 1, universe="v"), concepts)
    with pytest.raises(UniverseMismatch):
        is_fuzzy_setup(atoms(0, 1, universe="v"), concepts[:1])


def test_concepts_overlapping_outside_subject_are_not_fuzzy():
    fX = atoms(0, 1)
    assert not is_fuzzy_setup(fX, [("a", atoms(0, 5)), ("b", atoms(1, 5))]).fuzzy


def test_exhaustive():
    fX = atoms(0, 1)
    assert is_exhaustive(fX, [("a", atoms(0)), ("b", atoms(0, 1, 2))])
    assert not is_exhaustive(fX, [("a", atoms(0)), ("b", atoms(1))])


def test_space_kind_consistency():
    fX = atoms(0, 1, 2)
    exclusive = [("a", atoms(0)), ("b", atoms(1, 2))]
    overlapping = [("a", atoms(0, 1)), ("b", atoms(1, 2))]
    assert check_space_kind(SpaceKind.RANDOM, fX, exclusive).consistent
    assert not check_space_kind(SpaceKind.FUZZY, fX, exclusive).consistent
    report = check_space_kind(SpaceKind.RANDOM, fX, overlapping)
    assert not report.consistent
    assert report.witness == ("a", "b")


def test_off_grid_ellipse_is_empty():
    spec = EllipseSpec(center=(100.0, 100.0), semi_axes=(2.0, 2.0))
    assert measure(rasterize_ellipse(spec, Grid(8, 8))) == 0


def test_coarse_circle_covers_four_cells():
    spec = EllipseSpec(center=(1.0, 1.0), semi_axes=(0.8, 0.8))
    f = rasterize_ellipse(spec, Grid(4, 4))
    assert f.support == {0, 1, 4, 5}
    assert f.universe == Grid(4, 4).universe


def test_unit_circle_area_converges():
    grid = Grid(256, 256, cell_size=2 / 256, origin=(-1.0, -1.0))
    f = rasterize_ellipse(EllipseSpec(center=(0.0, 0.0), semi_axes=(1.0, 1.0)), grid)
    assert measure(f) * grid.cell_area == pytest.approx(math.pi, rel=0.02)


def test_rotation_swaps_axes():
    grid = Grid(32, 32)
    wide = rasterize_ellipse(EllipseSpec((16.0, 16.0), (10.0, 3.0)), grid)
    tall = rasterize_ellipse(EllipseSpec((16.0, 16.0), (10.0, 3.0), rotation=math.pi / 2), grid)
    assert measure(wide) == measure(tall)
    assert wide != tall


def test_degenerate_inputs():
    with pytest.raises(DegenerateGrid):
        rasterize_ellipse(EllipseSpec((0.0, 0.0), (1.0, 1.0)), Grid(0, 4))
    with pytest.raises(InvalidInput):
        EllipseSpec((0.0, 0.0), (0.0, 1.0))


@given(intension_sets(min_size=1), intension_sets(), intension_sets())
def test_union_possibility_bounds(fX, fi, fj):
    assume(measure(fX) > 0)
    exact = subsethood(fX, union(fi, fj))
    pi_i, pi_j = subsethood(fX, fi), subsethood(fX, fj)
    assert max(pi_i, pi_j) <= exact <= pi_i + pi_j
