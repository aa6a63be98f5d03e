from types import SimpleNamespace

import numpy as np
import pytest

from knotpursuit.errors import InputError
from knotpursuit.features import (
    ClassFeatureModel,
    export_features_csv,
    extract_feature_matrix,
    extract_features,
    feature_header,
    method_registry,
    restrict_higher_degrees,
    train_class_models,
)

from tests.conftest import circle_points


def _stub_model(degrees):
    stub = SimpleNamespace(degrees=list(degrees))
    return ClassFeatureModel(class_models=(stub,), selected=(tuple(range(len(degrees))),), method="vca")


@pytest.fixture
def two_circles():
    points = np.vstack([circle_points(8, radius=0.5), circle_points(8, radius=1.0, phase=0.2)])
    labels = np.repeat([0, 1], 8)
    return points, labels


@pytest.fixture
def two_circle_model(two_circles):
    points, labels = two_circles
    return train_class_models(points, labels, method="vca", params={"epsilon": 0.1})


def test_restrict_keeps_highest_degrees():
    model = _stub_model([1, 1, 2, 3])
    assert restrict_higher_degrees(model, 0.5).selected == ((2, 3),)
    assert restrict_higher_degrees(model, 0.3).selected == ((2, 3),)
    assert restrict_higher_degrees(model, 0.25).selected == ((3,),)


def test_restrict_breaks_ties_by_position():
    model = _stub_model([2, 2, 2])
    assert restrict_higher_degrees(model, 0.5).selected == ((0, 1),)


def test_restrict_full_fraction_is_identity():
    model = _stub_model([1, 2, 2, 3])
    restricted = restrict_higher_degrees(model, 1.0)
    assert restricted.selected == model.selected
    assert restricted.hd_fraction == 1.0


@pytest.mark.parametrize("fraction", [0.0, -0.5, 1.5])
def test_restrict_rejects_bad_fraction(fraction):
    with pytest.raises(InputError):
        restrict_higher_degrees(_stub_model([1, 2]), fraction)


def test_restrict_keep_count_is_exact_for_decimal_fractions():
    model = _stub_model(list(range(1, 11)))
    assert len(restrict_higher_degrees(model, 0.7).selected[0]) == 7
    assert len(restrict_higher_degrees(model, 0.3).selected[0]) == 3


def test_methods_are_registered():
    names = {m.name for m in method_registry.list_all()}
    assert {"proposed", "vca"} <= names
    assert method_registry.get("nope") is None


def test_train_rejects_single_class():
    with pytest.raises(InputError):
        train_class_models(circle_points(8), np.zeros(8, dtype=int), method="vca")


def test_train_rejects_unknown_method(two_circles):
    points, labels = two_circles
    with pytest.raises(InputError):
        train_class_models(points, labels, method="nope")


def test_train_rejects_label_mismatch(two_circles):
    points, labels = two_circles
    with pytest.raises(InputError):
        train_class_models(points, labels[:-1], method="vca")


def test_own_class_polynomials_vanish(two_circles, two_circle_model):
    points, labels = two_circles
    features = extract_feature_matrix(points, two_circle_model)
    assert features.shape == (16, two_circle_model.n_features)
    assert np.all(features >= 0)
    classes = np.array([i for i, _ in two_circle_model.layout])
    for c in (0, 1):
        own = features[labels == c][:, classes == c]
        other = features[labels == c][:, classes != c]
        assert own.max() <= 0.1 + 1e-9
        assert other.max() > own.max()


def test_extract_features_matches_evaluation(two_circle_model, rng):
    x = rng.normal(size=2)
    features = extract_features(x, two_circle_model)
    expected = np.concatenate([np.abs(m.evaluate_vanishing(x[None, :])[0]) for m in two_circle_model.class_models])
    assert np.allclose(features, expected)


def test_extract_rejects_wrong_dimension(two_circle_model):
    with pytest.raises(InputError):
        extract_features(np.zeros(3), two_circle_model)


def test_export_features_csv(tmp_path, two_circles, two_circle_model):
    points, labels = two_circles
    features = extract_feature_matrix(points, two_circle_model)
    path = export_features_csv(tmp_path / "features.csv", features, two_circle_model, labels)
    lines = path.read_text().splitlines()
    assert lines[0].split(",") == ["label"] + feature_header(two_circle_model)
    assert len(lines) == 17
    table = np.loadtxt(path, delimiter=",", skiprows=1)
    assert np.allclose(table[:, 1:], features)


def test_export_rejects_column_mismatch(tmp_path, two_circle_model):
    with pytest.raises(InputError):
        export_features_csv(tmp_path / "f.csv", np.zeros((2, 1)), two_circle_model)
