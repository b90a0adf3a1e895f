"""Command grammar and ActSpec wire format."""

import json
from pathlib import Path

import pytest

from xnet.commands import (
    ActSpec,
    CommandParseError,
    CommandParser,
    GoalDescriptor,
    VocabularyError,
    render_command,
)


@pytest.fixture
def parser():
    return CommandParser()


def fields(spec):
    return (spec.kind, spec.agent, spec.predicate, spec.speed,
            spec.goal.color if spec.goal else None)


def test_move_command(parser):
    spec = parser.parse("Robot1, move to the blue box!")
    assert fields(spec) == ("command", "Robot1", "move", "normal", "blue")
    assert spec.goal.shape == "box"


def test_dash_command_maps_to_fast(parser):
    spec = parser.parse("Robot1, dash to the green box!")
    assert fields(spec) == ("command", "Robot1", "move", "fast", "green")


def test_amble_command_maps_to_slow(parser):
    spec = parser.parse("Robot1, amble to the red box!")
    assert spec.speed == "slow"


def test_stop_command(parser):
    spec = parser.parse("Robot1, stop moving!")
    assert fields(spec) == ("command", "Robot1", "stop", None, None)


def test_continue_command(parser):
    spec = parser.parse("Robot1, continue moving!")
    assert spec.predicate == "continue"


def test_case_insensitive_and_optional_punctuation(parser):
    a = parser.parse("robot1, MOVE to the Blue box")
    b = parser.parse("Robot1, move to the blue box!")
    # Matching is case-insensitive; the agent keeps its typed case.
    assert a.agent.lower() == b.agent.lower()
    assert fields(a)[2:] == fields(b)[2:]


def test_unknown_color_is_vocabulary_error(parser):
    with pytest.raises(VocabularyError, match="known colors"):
        parser.parse("Robot1, move to the mauve box!")


def test_gibberish_yields_hint(parser):
    with pytest.raises(CommandParseError) as err:
        parser.parse("please do something")
    assert err.value.hint in (
        "<Agent>, (amble|move|dash) to the <color> box!",
        "<Agent>, stop moving!",
        "<Agent>, continue moving!",
    )


def test_stop_typo_hints_stop_production(parser):
    with pytest.raises(CommandParseError) as err:
        parser.parse("Robot1 stop the moving")
    assert err.value.hint == "<Agent>, stop moving!"


def test_determinism_excluding_sequence(parser):
    a = parser.parse("Robot1, move to the blue box!")
    b = parser.parse("Robot1, move to the blue box!")
    assert fields(a) == fields(b)
    assert b.sequence > a.sequence  # monotonically increasing


def test_round_trip_render_parse(parser):
    for text in ("Robot1, move to the blue box!", "Robot1, dash to the green box!",
                 "Robot1, amble to the yellow box!", "Robot1, stop moving!",
                 "Robot1, continue moving!"):
        spec = parser.parse(text)
        again = parser.parse(render_command(spec))
        assert fields(again) == fields(spec)


def test_actspec_invariants():
    with pytest.raises(ValueError):
        ActSpec(kind="command", agent="Robot1", predicate="move")  # no goal/speed
    with pytest.raises(ValueError):
        ActSpec(kind="command", agent="Robot1", predicate="stop",
                goal=GoalDescriptor("blue"))
    with pytest.raises(ValueError):
        ActSpec(kind="??", agent="Robot1")


def test_actspec_json_round_trip(parser):
    spec = parser.parse("Robot1, move to the blue box!")
    data = json.loads(spec.to_json_str())
    assert data["goal"] == {"color": "blue", "shape": "box"}
    assert ActSpec.from_json(data) == spec


def test_notification_actspec_shape():
    note = ActSpec(kind="notification", agent="Robot1",
                   message="discovered new object", object={"name": "box9"})
    data = note.to_json()
    assert data["kind"] == "notification" and "predicate" not in data


def test_wire_format_matches_schema():
    jsonschema = pytest.importorskip("jsonschema")
    schema_path = (Path(__file__).resolve().parent.parent
                   / "src" / "xnet" / "fixtures" / "actspec.schema.json")
    schema = json.loads(schema_path.read_text())
    parser = CommandParser()
    for text in ("Robot1, move to the blue box!", "Robot1, stop moving!"):
        jsonschema.validate(parser.parse(text).to_json(), schema)
    note = ActSpec(kind="notification", agent="Robot1", message="hi")
    jsonschema.validate(note.to_json(), schema)
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"kind": "command"}, schema)
