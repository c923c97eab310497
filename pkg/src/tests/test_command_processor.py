import json

import pytest

from core.command_processor import Check, CommandProcessor, RunReport
from core.errors import InvalidParameters, UnknownCommand

CATALOGUE = {
    "commands": [
        {
            "id": 1,
            "name": "square",
            "description": "Square an integer",
            "parameters": {
                "x": {"type": "integer", "required": True},
                "style": {"type": "string", "enum": ["plain", "fancy"], "default": "plain"},
            },
        },
        {"id": 2, "name": "fail", "description": "Always raises", "parameters": {}},
    ]
}


@pytest.fixture
def processor(tmp_path):
    path = tmp_path / "commands.json"
    path.write_text(json.dumps(CATALOGUE))
    proc = CommandProcessor(str(path))

    def square(params):
        value = params["x"] ** 2
        return {"results": {"value": value, "style": params["style"]}, "checks": [Check("nonnegative", value >= 0)]}

    async def fail(params):
        raise InvalidParameters("nothing to do")

    proc.register_command("square", square)
    proc.register_command("fail", fail)
    return proc


def test_register_unknown_command(processor):
    with pytest.raises(UnknownCommand):
        processor.register_command("cube", lambda params: {})


def test_parameter_validation(processor):
    assert processor._validate_command_params("square", {"x": 3}) == (True, "")
    ok, message = processor._validate_command_params("square", {})
    assert not ok and "x" in message
    ok, message = processor._validate_command_params("square", {"x": "3"})
    assert not ok and "integer" in message
    ok, message = processor._validate_command_params("square", {"x": True})
    assert not ok
    ok, message = processor._validate_command_params("square", {"x": 3, "style": "bold"})
    assert not ok and "plain" in message
    ok, message = processor._validate_command_params("square", {"x": 3, "colour": "red"})
    assert not ok and "colour" in message


@pytest.mark.asyncio
async def test_execute_sync_command(processor):
    report = await processor.execute_command("square", {"x": 4})
    assert report.passed
    assert report.results == {"value": 16, "style": "plain"}
    assert report.inputs == {"x": 4, "style": "plain"}
    assert processor.history[-1] is report
    assert "seconds" in report.timing


@pytest.mark.asyncio
async def test_engine_errors_become_error_reports(processor):
    report = await processor.execute_command("fail", {})
    assert report.status == "error"
    assert report.error_type == "InvalidParameters"
    assert report.failures()[0].detail == "nothing to do"


@pytest.mark.asyncio
async def test_invalid_parameters_and_unknown_commands(processor):
    report = await processor.execute_command("square", {"x": "four"})
    assert report.status == "error"
    assert report.error_type == "InvalidParameters"
    report = await processor.execute_command("cube", {"x": 2})
    assert report.error_type == "UnknownCommand"
    assert len(processor.history) == 2


@pytest.mark.asyncio
async def test_run_cells_keeps_order_and_exceptions(processor):
    def invert(x):
        return 1 / x

    results = await processor.run_cells(invert, [1, 2, 0, 4])
    assert results[:2] == [1.0, 0.5]
    assert isinstance(results[2], ZeroDivisionError)
    assert results[3] == 0.25


def test_report_serialization():
    report = RunReport(
        command="square",
        inputs={"x": 2},
        results={"value": 4, "series": [1, 2, 3]},
        checks=[Check("value", True, expected=4, actual=4), Check("extra", True, skipped=True, detail="skipped")],
        timing={"seconds": 0.5},
    )
    data = report.to_dict()
    assert "timing" not in data
    assert data["checks"][0] == {"name": "value", "passed": True, "expected": 4, "actual": 4}
    assert data["checks"][1]["skipped"]
    assert report.to_dict(include_timing=True)["timing"]["seconds"] == 0.5
    text = report.render_text()
    assert "checks: 2/2 passed" in text
    assert "series: [1, 2, 3]" in text
    assert "[skip] extra" in text
