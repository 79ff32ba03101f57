import json
from pathlib import Path

import pytest

from gradedcontact.models import CourantJacobiData, JacobiPair, check_courant_jacobi, check_jacobi
from gradedcontact.modelfile import ModelError, load_model, parse_model

MODELS = Path(__file__).resolve().parent.parent / "models"


def write(tmp_path, doc, name="m.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return path


def test_constant_poisson_file(tmp_path):
    doc = {"kind": "jacobi", "base_dim": 2, "Lambda": [["0", "1"], ["-1", "0"]], "E": ["0", "0"]}
    md = parse_model(write(tmp_path, doc))
    assert isinstance(md.data, JacobiPair)
    assert check_jacobi(md.data).ok
    assert md.model.n == 1


def test_non_antisymmetric_lambda():
    doc = {"kind": "jacobi", "base_dim": 2, "Lambda": [["0", "1"], ["1", "0"]], "E": ["0", "0"]}
    with pytest.raises(ModelError, match="antisymmetric"):
        load_model(doc)


def test_cj_point_file():
    md = load_model({"kind": "courant-jacobi", "base_dim": 0, "rank": 2, "g": [["0", "1"], ["1", "0"]]})
    assert isinstance(md.data, CourantJacobiData)
    assert md.data.rank == 2 and md.data.dim == 0
    assert check_courant_jacobi(md.data).ok


def test_cj_skew_form():
    doc = {
        "kind": "courant-jacobi", "base_dim": 0, "rank": 2, "g": [["0", "1"], ["1", "0"]],
        "b": ["1", "0"], "T": [[["0", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]], "T_form": "skew",
    }
    md = load_model(doc)
    assert md.data.is_canonical() and check_courant_jacobi(md.data).ok
    doc["T_form"] = "full"
    assert not check_courant_jacobi(load_model(doc).data).ok


def test_cj_nonconstant_pairing():
    doc = {"kind": "courant-jacobi", "base_dim": 1, "rank": 1, "g": [["x1"]]}
    with pytest.raises(ModelError, match=r"g\[0\]\[0\]"):
        load_model(doc)


def test_contact_chart_file():
    doc = {
        "kind": "contact-chart",
        "coordinates": [{"name": "x", "degree": 0}, {"name": "p", "degree": 1}, {"name": "theta", "degree": 1}],
        "alpha": "p*dx + dtheta",
        "S": "x*p*theta",
    }
    md = load_model(doc)
    assert md.kind == "contact-chart" and md.model.n == 1
    assert md.model.S.degree() == 2


def test_wrong_degree_names_coordinate():
    doc = {
        "kind": "contact-chart",
        "coordinates": [{"name": "x", "degree": 0}, {"name": "p", "degree": 1}, {"name": "theta", "degree": 1}],
        "alpha": "p*dx + dtheta",
        "S": "x*p",
    }
    with pytest.raises(ModelError) as info:
        load_model(doc)
    assert "degree 2" in str(info.value) and "p" in str(info.value)


@pytest.mark.parametrize(
    "doc, fragment",
    [
        ({"kind": "nope"}, "unknown kind"),
        ({"kind": "contact-chart", "coordinates": []}, "coordinates"),
        ({"kind": "contact-chart", "coordinates": [{"name": "x", "degree": -1}], "alpha": "dx"}, "invalid degree"),
        ({"kind": "contact-chart", "coordinates": [{"name": "x"}]}, "alpha"),
        ({"kind": "contact-chart", "coordinates": [{"name": "x"}], "alpha": "x"}, "1-form"),
        ({"kind": "jacobi", "base_dim": -1}, "non-negative"),
        ({"kind": "jacobi", "base_dim": 1, "Lambda": [["0"]], "E": ["0", "0"]}, "length 1"),
    ],
)
def test_validation_errors(doc, fragment):
    with pytest.raises(ModelError, match=fragment):
        load_model(doc)


def test_expression_error_position():
    doc = {"kind": "jacobi", "base_dim": 1, "Lambda": [["0"]], "E": ["x1 + y"]}
    with pytest.raises(ModelError) as info:
        load_model(doc)
    assert info.value.where == "E[0]"
    assert (info.value.line, info.value.column) == (1, 6)


def test_json_syntax_error(tmp_path):
    path = write(tmp_path, '{"kind": "jacobi",\n  "base_dim": }')
    with pytest.raises(ModelError) as info:
        parse_model(path)
    assert info.value.line == 2


def test_shipped_models_load():
    paths = sorted(MODELS.glob("*.json"))
    assert len(paths) >= 8
    for path in paths:
        md = parse_model(path)
        assert md.path == str(path)
