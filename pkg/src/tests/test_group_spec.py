import os

import pytest

from core import analysis
from core.errors import GroupSpecError, InconsistentPresentation, InvalidParameters, InvalidPermutation, NotAGroup
from core.group_spec import build_group, load_group_spec, parse_shorthand, resolve_group, validate_spec
from core.isoclinism import are_isoclinic

GROUPS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "cli", "groups")


def sample(name):
    return os.path.join(GROUPS_DIR, name)


@pytest.mark.parametrize(
    "name, order",
    [
        ("s3.yaml", 6),
        ("klein4.yaml", 4),
        ("d8.yaml", 8),
        ("q8.yaml", 8),
        ("gamma3.yaml", 16),
        ("heisenberg27.yaml", 27),
        ("phi10_p3.yaml", 243),
        ("c7.yaml", 7),
        ("c2_x_d8.yaml", 16),
    ],
)
def test_sample_specs(name, order):
    g = resolve_group(sample(name))
    assert g.order == order


def test_pcp_spec_keeps_label():
    g = build_group(load_group_spec(sample("heisenberg27.yaml")))
    assert g.label == "Heisenberg27"
    assert analysis.center(g).order == 3


def test_shorthand():
    assert parse_shorthand("Phi5:p=3") == {"kind": "family", "name": "Phi5", "p": 3}
    assert parse_shorthand("dihedral:order=16") == {"kind": "family", "name": "dihedral", "order": 16}
    assert resolve_group("Phi5:p=3").order == 243
    assert resolve_group("symmetric:degree=4").order == 24
    with pytest.raises(GroupSpecError):
        parse_shorthand("Phi5:p")
    with pytest.raises(GroupSpecError):
        parse_shorthand("Phi5:p=three")


def test_unknown_fields_are_rejected(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("kind: cayley\ntable: [[0]]\ncolour: red\n")
    with pytest.raises(GroupSpecError) as exc:
        load_group_spec(str(path))
    assert "colour" in str(exc.value)


@pytest.mark.parametrize(
    "spec",
    [
        ["kind", "cayley"],
        {"kind": "matrix"},
        {"kind": "permutation"},
        {"kind": "permutation", "cycles": [[[0, 1]]]},
        {"kind": "permutation", "generators": [[1, 0]], "cycles": [[[0, 1]]], "degree": 2},
        {"kind": "cayley"},
        {"kind": "family", "p": 3},
    ],
)
def test_invalid_specs(spec):
    with pytest.raises(GroupSpecError):
        validate_spec(spec)


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(GroupSpecError):
        load_group_spec(str(tmp_path / "missing.yaml"))
    path = tmp_path / "broken.yaml"
    path.write_text("kind: [unclosed\n")
    with pytest.raises(GroupSpecError):
        load_group_spec(str(path))


def test_family_spec_parameters():
    with pytest.raises(GroupSpecError):
        build_group({"kind": "family", "name": "Phi5", "order": 243})
    with pytest.raises(GroupSpecError):
        build_group({"kind": "family", "name": "Mathieu", "p": 11})
    with pytest.raises(InvalidParameters):
        build_group({"kind": "family", "name": "Gamma5", "p": 3})


def test_construction_errors_propagate():
    with pytest.raises(NotAGroup):
        build_group({"kind": "cayley", "table": [[0, 1], [1, 1]]})
    with pytest.raises(GroupSpecError):
        build_group({"kind": "pcp", "relative_orders": [3, "x"]})


def test_product_spec():
    g = resolve_group(sample("c2_x_d8.yaml"))
    assert g.label == "C2xD8"
    assert analysis.center(g).order == 4
    assert are_isoclinic(g, resolve_group(sample("d8.yaml"))) is not None


def test_product_of_shorthands():
    g = build_group({"kind": "product", "factors": ["Phi2:p=3", "cyclic:order=3"]})
    assert g.order == 81
    assert analysis.center(g).order == 9


@pytest.mark.parametrize(
    "spec, error",
    [
        ({"kind": "cayley", "table": [[0, 1], [1]]}, NotAGroup),
        ({"kind": "cayley", "table": [[0, 1], [1, 0.5]]}, NotAGroup),
        ({"kind": "cayley", "table": "01/10"}, NotAGroup),
        (
            {"kind": "pcp", "relative_orders": [3, 3, 3], "commutator_words": [{"pair": [1, 0, 2], "word": [0, 0, 1]}]},
            GroupSpecError,
        ),
        ({"kind": "pcp", "relative_orders": [3, 3, 3], "power_words": {"x": [0, 0, 1]}}, GroupSpecError),
        ({"kind": "pcp", "relative_orders": [3, 3, 3], "power_words": [[0, 0, 1]]}, GroupSpecError),
        ({"kind": "pcp", "relative_orders": [3, 3, 3], "power_words": {5: [0, 0, 1]}}, InconsistentPresentation),
        ({"kind": "family", "name": 5}, GroupSpecError),
        ({"kind": "family", "name": "Phi2", "p": "3"}, GroupSpecError),
        ({"kind": "permutation", "generators": [[1.7, 0.2, 2.0]]}, InvalidPermutation),
        ({"kind": "permutation", "generators": 3}, GroupSpecError),
        ({"kind": "permutation", "cycles": [[[0, 5]]], "degree": 3}, InvalidPermutation),
        ({"kind": "product", "factors": ["cyclic:order=2"]}, GroupSpecError),
        ({"kind": "product", "factors": ["cyclic:order=2", 7]}, GroupSpecError),
        ({"kind": [1], "table": [[0]]}, GroupSpecError),
        ({"kind": "cayley", "table": [[0]], "label": 3}, GroupSpecError),
    ],
)
def test_malformed_specs_raise_engine_errors(spec, error):
    with pytest.raises(error):
        build_group(spec)
