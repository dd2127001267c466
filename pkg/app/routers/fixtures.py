from app.exceptions import InvalidInput
from app.fixtures import FIXTURE_NAMES, Fixture, generate_fixture
from app.routers import CommandResult, CommandRouter, option
from app.schemas import (
    FixtureSchema,
    GridSchema,
    IntensionSetSchema,
    LabeledIntension,
    RunConfig,
)

router = CommandRouter(tags=["fixtures"])


def fixture_document(fixture: Fixture) -> FixtureSchema:
    grid = fixture.grid
    return FixtureSchema(
        name=fixture.name,
        grid=GridSchema(
            cols=grid.cols, rows=grid.rows, cell_size=grid.cell_size, origin=grid.origin
        ),
        subject=LabeledIntension(
            label=fixture.subject_label,
            intension=IntensionSetSchema.from_domain(fixture.subject),
        ),
        concepts=[
            LabeledIntension(label=label, intension=IntensionSetSchema.from_domain(f))
            for label, f in fixture.concepts
        ],
    )


@router.command(
    "fixtures",
    help="Сгенерировать именованную конфигурацию эллипсов",
    options=(option("--name", choices=FIXTURE_NAMES, help="Имя конфигурации"),),
)
def fixtures(config: RunConfig) -> CommandResult:
    """
    Документ фикстуры всегда JSON: его читают classify, measure и compare-union.
    """
    if config.name is None:
        raise InvalidInput(f"fixtures needs --name, one of {list(FIXTURE_NAMES)}")
    cols, rows = config.grid_size
    document = fixture_document(generate_fixture(config.name, cols, rows))
    text = document.model_dump_json(indent=2)
    return CommandResult(document, text)
