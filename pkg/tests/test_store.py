import numpy as np
import pytest

from knotpursuit.errors import ParseError
from knotpursuit.models import ModelRecord
from knotpursuit.models.store import load_model, model_from_record, model_to_json, model_to_record, save_model
from knotpursuit.pursuit import KnotModel, PursuitConfig, fit

from tests.conftest import circle_points


def test_vca_model_round_trip(tmp_path, vca_circle, rng):
    path = save_model(vca_circle, tmp_path / "vca.json")
    loaded = load_model(path)
    queries = rng.uniform(-1.5, 1.5, size=(20, 2))
    assert loaded.method == "vca"
    assert loaded.degrees == vca_circle.degrees
    assert np.allclose(loaded.evaluate_vanishing(queries), vca_circle.evaluate_vanishing(queries), atol=1e-12)
    assert loaded.diagnostics["epsilon"] == 0.1
    assert [len(v) for v in loaded.F.values()] == [len(v) for v in vca_circle.F.values()]


def test_knot_model_round_trip(tmp_path, rng):
    model = fit(circle_points(8), PursuitConfig(epsilon=0.1, delta=1e-6))
    loaded = load_model(save_model(model, tmp_path / "knots.json"))
    assert isinstance(loaded, KnotModel)
    assert np.array_equal(loaded.knots, model.knots)
    assert loaded.report == model.report
    assert loaded.diagnostics["config"]["delta"] == 1e-6
    queries = rng.uniform(-1.5, 1.5, size=(20, 2))
    assert np.allclose(loaded.evaluate_vanishing(queries), model.evaluate_vanishing(queries), atol=1e-12)


def test_record_is_plain_json(vca_circle):
    payload = model_to_json(vca_circle)
    assert payload["format_version"] == 1
    assert payload["knots"] is None
    record = ModelRecord.model_validate(payload)
    assert model_from_record(record).n_features == vca_circle.n_features


def test_record_keeps_layer_structure(vca_circle):
    record = model_to_record(vca_circle)
    assert record.registry.n_vars == 2
    assert record.registry.n_points == 8
    assert [layer.degree for layer in record.registry.layers] == sorted(vca_circle.registry.f_layers())[1:]


@pytest.mark.parametrize("content", ["not json", "{}", '{"method": "vca"}'])
def test_invalid_model_file(tmp_path, content):
    path = tmp_path / "broken.json"
    path.write_text(content)
    with pytest.raises(ParseError):
        load_model(path)
