import json
from importlib import resources

import jsonschema
import pytest

from positivity_lab import cli, fixtures

SCHEMAS = ["fan", "divisor", "surface_model", "scan_report", "serre_check", "example_report"]


def schema(name):
    text = resources.files("positivity_lab").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


@pytest.mark.parametrize("name", SCHEMAS)
def test_schemas_are_valid(name):
    jsonschema.Draft202012Validator.check_schema(schema(name))


@pytest.mark.parametrize("name", fixtures.FIXTURE_NAMES)
def test_fixture_exports_conform(name):
    fx = fixtures.get(name)
    jsonschema.validate(fx.fan.to_json(), schema("fan"))
    jsonschema.validate(fx.divisor([1] * fx.rank).to_json(), schema("divisor"))
    if fx.model is not None:
        jsonschema.validate(fx.model.to_json(), schema("surface_model"))


@pytest.mark.parametrize(
    "name, argv",
    [
        ("scan_report", ["scan", "--fixture", "F1", "--class", "2E+F", "--ample", "E+2F", "--steps", "3"]),
        ("serre_check", ["serre-check", "--fixture", "P1xP1", "--class", "H1-H2", "--samples", "5"]),
        ("serre_check", ["serre-check", "--fixture", "F1", "--class", "E+2F", "--samples", "5"]),
        ("example_report", ["example33", "--lambda", "3", "--mu", "2"]),
    ],
)
def test_reports_conform(capsys, name, argv):
    assert cli.main(argv) == 0
    jsonschema.validate(json.loads(capsys.readouterr().out), schema(name))


def test_schema_rejects_float_rationals():
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"coefficients": [0.5]}, schema("divisor"))
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"coefficients": ["1/0"]}, schema("divisor"))
