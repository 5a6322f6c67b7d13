import json
from pathlib import Path

import numpy as np
import pytest

from nullosserman.catalog import (
    R4_DESCRIPTOR,
    U2_DESCRIPTOR,
    ModelDescriptor,
    build_r4_model,
    build_space_form_model,
    build_u2_model,
    canonical_structure,
    load_model,
    serialize_model,
    space_form_descriptor,
)
from nullosserman.curvature import ChartPointModel, LiePointModel, lie_group_curvature
from nullosserman.errors import SchemaError, StructureValidationError
from nullosserman.gff import phi_sectional_curvature

MODELS = Path(__file__).resolve().parents[1] / "models"


def _cases():
    yield U2_DESCRIPTOR, build_u2_model()
    yield R4_DESCRIPTOR, build_r4_model((0.0, 0.7, 0.0, 0.0))
    yield space_form_descriptor(2, 3, 1.0), canonical_structure(2, 3)


@pytest.mark.parametrize("descriptor,model", list(_cases()), ids=lambda v: getattr(v, "name", ""))
def test_serialization_round_trip_is_byte_identical(descriptor, model):
    text = serialize_model(descriptor, model)
    d2, m2 = load_model(text)
    assert d2 == descriptor
    assert serialize_model(d2, m2) == text


def test_loaded_u2_equals_builder():
    _, model = load_model((MODELS / "u2.json").read_text())
    ref = build_u2_model()
    assert isinstance(model, LiePointModel)
    assert np.array_equal(model.brackets, ref.brackets)
    assert np.array_equal(model.base.phi, ref.base.phi)
    assert phi_sectional_curvature(lie_group_curvature(model), model.base, np.eye(4)[2]) == pytest.approx(4.0)


def test_loaded_r4_is_a_chart():
    _, model = load_model((MODELS / "r4.json").read_text())
    assert isinstance(model, ChartPointModel)
    assert model.point.tolist() == [0.0, 0.7, 0.0, 0.0]


def test_r4_at_origin():
    S = build_r4_model().coordinate_point
    assert S.G[2, 2] == -1.0 and S.G[3, 3] == 1.0


def test_space_form_builder_frame():
    S, R = build_space_form_model(2, 2, 3.0)
    assert np.array_equal(S.G, np.diag([1.0, 1.0, 1.0, 1.0, -1.0, 1.0]))
    assert np.array_equal(S.phi[:2, :2], [[0.0, -1.0], [1.0, 0.0]])
    assert phi_sectional_curvature(R, S, S.im_phi_basis[:, 2]) == pytest.approx(3.0)


def _u2_doc():
    return json.loads((MODELS / "u2.json").read_text())


def test_corrupted_eta_names_the_axiom():
    doc = _u2_doc()
    doc["eta"][0][0] = 0.9
    with pytest.raises(StructureValidationError) as exc:
        load_model(json.dumps(doc))
    assert "eta_xi_duality" in exc.value.report.failed()
    assert "eta_xi_duality" in str(exc.value)


def test_unknown_kind_is_a_schema_error():
    doc = _u2_doc()
    doc["kind"] = "orbifold"
    with pytest.raises(SchemaError) as exc:
        load_model(json.dumps(doc))
    assert exc.value.field == "kind"
    with pytest.raises(SchemaError):
        ModelDescriptor("x", "orbifold")


@pytest.mark.parametrize(
    "edit,field",
    [
        (lambda d: d.pop("phi"), "phi"),
        (lambda d: d.update(eps=[1, 1, 1]), "eps"),
        (lambda d: d.update(frame_metric=[[1.0]]), "frame_metric"),
        (lambda d: d.update(brackets="none"), "brackets"),
        (lambda d: d.update(parameters={"c": "four"}), "parameters"),
    ],
)
def test_schema_errors_name_the_field(edit, field):
    doc = _u2_doc()
    edit(doc)
    with pytest.raises(SchemaError) as exc:
        load_model(json.dumps(doc))
    assert exc.value.field == field


def test_parse_error_reports_line():
    text = (MODELS / "u2.json").read_text().replace('"kind"', "kind", 1)
    with pytest.raises(SchemaError) as exc:
        load_model(text)
    assert exc.value.line == 3


def test_chart_frame_metric_must_match():
    doc = json.loads((MODELS / "r4.json").read_text())
    doc["frame_metric"][0][0] = 2.0
    with pytest.raises(SchemaError) as exc:
        load_model(json.dumps(doc))
    assert exc.value.field == "frame_metric"


def test_validation_can_be_deferred():
    doc = _u2_doc()
    doc["eta"][0][0] = 0.9
    _, model = load_model(json.dumps(doc), validate=False)
    assert model.base.eta[0, 0] == 0.9
