from .inference import ConditionalRelation, JointDistribution, MeasureKind
from .intensions import EllipseSpec, Grid, IntensionSet
from .measures import FrequencyCounts, PossibilityDistribution, ProbabilityDistribution
from .spaces import Event, SampleSpace, SpaceKind

__all__ = [
    "ConditionalRelation",
    "EllipseSpec",
    "Event",
    "FrequencyCounts",
    "Grid",
    "IntensionSet",
    "JointDistribution",
    "MeasureKind",
    "PossibilityDistribution",
    "ProbabilityDistribution",
    "SampleSpace",
    "SpaceKind",
]
