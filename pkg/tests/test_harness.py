import json
from types import SimpleNamespace

import numpy as np
import pytest

from knotpursuit.errors import InputError, ParseError
from knotpursuit.features import ClassFeatureModel
from knotpursuit.harness import (
    GENERATORS,
    ExperimentConfig,
    LabeledDataset,
    ScalingRecord,
    contour_grid,
    cross_validate,
    distinct_knots,
    evaluate_linear,
    export_contour_grid,
    gen_blobs,
    gen_circle,
    gen_concentric,
    kmeans,
    knn_predict,
    knots_path,
    knotting_ratio,
    load_builtin,
    load_csv,
    load_points,
    predict_linear,
    render_report,
    run_table1,
    run_table2,
    split_train_test,
    train_linear,
)
from knotpursuit.harness.generators import BLOB_CENTERS
from knotpursuit.models import ExperimentReport, MethodSummary
from knotpursuit.pursuit import PursuitConfig, fit

from tests.conftest import circle_points


@pytest.fixture(scope="module")
def iris():
    return load_builtin("iris")


def test_load_csv_assigns_sorted_label_ids(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("1.0,2.0,b\n3.0,4.0,a\n5.0,6.0,b\n")
    ds = load_csv(path)
    assert ds.points.shape == (3, 2)
    assert ds.labels.tolist() == [1, 0, 1]
    assert ds.label_names == ("a", "b")
    assert ds.name == "data"
    assert ds.n_classes == 2


def test_load_csv_named_label_column(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("kind,f1,f2\nx,1,2\ny,3,4\n")
    ds = load_csv(path, label_column="kind", has_header=True)
    assert ds.points.tolist() == [[1.0, 2.0], [3.0, 4.0]]
    assert ds.labels.tolist() == [0, 1]


def test_load_csv_reports_bad_cell(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("1,2,a\n3,x,b\n")
    with pytest.raises(ParseError) as err:
        load_csv(path)
    assert (err.value.row, err.value.column) == (2, 2)


def test_load_csv_counts_header_row(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("f1,f2,label\n1,2\n")
    with pytest.raises(ParseError) as err:
        load_csv(path, has_header=True)
    assert err.value.row == 2


def test_load_csv_missing_file(tmp_path):
    with pytest.raises(InputError):
        load_csv(tmp_path / "missing.csv")


def test_load_points(tmp_path):
    path = tmp_path / "points.csv"
    path.write_text("x,y\n0.5,1\n-1,2\n")
    assert load_points(path, has_header=True).tolist() == [[0.5, 1.0], [-1.0, 2.0]]


def test_scaling_maps_to_unit_box_and_back():
    points = np.array([[0.0, 5.0], [2.0, 5.0], [1.0, 5.0]])
    scaling = ScalingRecord.fit(points)
    scaled = scaling.apply(points)
    assert scaled.tolist() == [[-1.0, 0.0], [1.0, 0.0], [0.0, 0.0]]
    assert np.allclose(scaling.unscale(scaled), points)


def test_dataset_rejects_label_mismatch():
    with pytest.raises(InputError):
        LabeledDataset(points=np.zeros((3, 2)), labels=np.zeros(2, dtype=int))


def test_split_iris(iris):
    train, test = split_train_test(iris, 0.6, seed=0)
    assert (len(train), len(test)) == (90, 60)
    assert np.bincount(train.labels).tolist() == [30, 30, 30]
    assert np.allclose(train.points.min(axis=0), -1.0)
    assert np.allclose(train.points.max(axis=0), 1.0)
    assert train.scaling is test.scaling


def test_split_is_seeded(iris):
    a, _ = split_train_test(iris, 0.6, seed=3)
    b, _ = split_train_test(iris, 0.6, seed=3)
    c, _ = split_train_test(iris, 0.6, seed=4)
    assert np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, c.points)


def test_split_rejects_bad_fraction(iris):
    with pytest.raises(InputError):
        split_train_test(iris, 1.0)


def test_cross_validate_fold_sizes_and_single_entry(iris):
    train, _ = split_train_test(iris, 0.6, seed=0)
    seen = []

    def metric(fit_part, val_part, params):
        seen.append((len(fit_part), len(val_part)))
        return 1.0

    best, scores = cross_validate(train, {"epsilon": [0.1]}, metric, folds=3)
    assert best == {"epsilon": 0.1}
    assert scores == [({"epsilon": 0.1}, 1.0)]
    assert seen == [(60, 30)] * 3


def test_cross_validate_ties_prefer_small_parameters(iris):
    train, _ = split_train_test(iris, 0.6, seed=0)
    best, _ = cross_validate(train, {"epsilon": [0.3, 0.1], "lam": [1.0, 0.5]}, lambda *_: 0.5, folds=3)
    assert best == {"epsilon": 0.1, "lam": 0.5}


def test_cross_validate_picks_best_score(iris):
    train, _ = split_train_test(iris, 0.6, seed=0)
    best, _ = cross_validate(train, {"epsilon": [0.1, 0.2, 0.3]}, lambda f, v, p: -abs(p["epsilon"] - 0.2))
    assert best == {"epsilon": 0.2}


def test_linear_classifier_separates_toy_data():
    features = np.array([[0.0], [0.1], [1.0], [1.1]])
    labels = np.array([0, 0, 1, 1])
    model = train_linear(features, labels, reg=1.0)
    assert predict_linear(model, features).tolist() == [0, 0, 1, 1]


def test_linear_classifier_multiclass():
    features = np.repeat(np.eye(3), 4, axis=0) + 0.01 * np.arange(12)[:, None]
    labels = np.repeat([0, 1, 2], 4)
    model = train_linear(features, labels, reg=0.1)
    assert np.array_equal(predict_linear(model, features), labels)


def test_linear_classifier_needs_two_classes():
    with pytest.raises(InputError):
        train_linear(np.zeros((3, 1)), np.zeros(3, dtype=int))


def test_linear_classifier_handles_constant_column():
    features = np.array([[0.0, 0.0], [0.1, 0.0], [1.0, 0.0], [1.1, 0.0]])
    model = train_linear(features, [0, 0, 1, 1])
    assert predict_linear(model, features).tolist() == [0, 0, 1, 1]


def test_evaluate_without_features_predicts_majority():
    stub = SimpleNamespace(degrees=[])
    model = ClassFeatureModel(class_models=(stub, stub), selected=((), ()), method="vca")
    train = LabeledDataset(points=np.zeros((3, 2)), labels=np.array([1, 1, 0]))
    test = LabeledDataset(points=np.zeros((4, 2)), labels=np.array([1, 0, 1, 1]))
    outcome = evaluate_linear(model, train, test, reg=1.0)
    assert outcome.accuracy == 0.75
    assert outcome.n_features == 0


def test_knn_ties_go_to_lower_row():
    train = np.array([[0.0], [2.0]])
    assert knn_predict(train, [0, 1], [1.0]) == 0
    assert knn_predict(train, [1, 0], [1.0]) == 1


def test_knn_exact_match_and_batch():
    train = np.array([[0.0, 0.0], [1.0, 1.0], [5.0, 5.0]])
    labels = np.array([2, 0, 1])
    assert knn_predict(train, labels, train).tolist() == [2, 0, 1]
    assert isinstance(knn_predict(train, labels, [4.0, 4.0]), int)


def test_knn_vote_ties_go_to_lower_label():
    train = np.array([[0.0], [1.0]])
    assert knn_predict(train, [1, 0], [0.0], k=2) == 0


def test_knn_needs_training_points():
    with pytest.raises(InputError):
        knn_predict(np.zeros((0, 2)), [], [0.0, 0.0])


def test_kmeans_edge_counts():
    points = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    assert np.allclose(kmeans(points, 1), points.mean(axis=0, keepdims=True))
    centers = kmeans(points, 3)
    assert np.allclose(np.array(sorted(map(tuple, centers))), np.array(sorted(map(tuple, points))))
    with pytest.raises(InputError):
        kmeans(points, 4)


def test_kmeans_finds_blob_centers():
    points = gen_blobs(seed=0, n_points=60, noisy=0.05, quiet=0.05)
    centers = kmeans(points, 3, seed=0)
    for center in BLOB_CENTERS:
        assert np.min(np.linalg.norm(centers - center, axis=1)) < 0.1


def test_generators_are_seeded_and_shaped():
    for name, generator in GENERATORS.items():
        first, second = generator(seed=5), generator(seed=5)
        assert np.array_equal(first, second), name
        assert first.shape[1] == 2
    assert gen_blobs(n_points=61).shape == (61, 2)
    assert np.allclose(np.linalg.norm(gen_circle(noise=0.0, radius=2.0), axis=1), 2.0)
    radii = np.linalg.norm(gen_concentric(noise=0.0), axis=1)
    assert np.allclose(radii[:25], 0.5) and np.allclose(radii[25:], 1.0)


def test_distinct_knots_merges_chains():
    knots = np.array([[0.0, 0.0], [1.0, 1.0], [1e-9, 0.0], [2e-9, 0.0]])
    assert distinct_knots(knots, tol=1e-6).tolist() == [[0.0, 0.0], [1.0, 1.0]]
    assert knotting_ratio(knots, 4, tol=1e-6) == 0.5
    assert distinct_knots(knots[:1]).shape == (1, 2)


def test_contour_grid_signs(circle_model):
    grid = contour_grid(circle_model, ((-2.0, 2.0), (-2.0, 2.0)), 5)
    assert grid.coords.shape == (25, 2)
    assert grid.values.shape == (25, 1)
    assert grid.degrees == [2]
    center = grid.values[12, 0]
    assert center == pytest.approx(-1.0)
    assert grid.values[0, 0] == pytest.approx(7.0)
    assert grid.knots is None


def test_contour_rejects_small_resolution(circle_model):
    with pytest.raises(InputError):
        contour_grid(circle_model, ((-1.0, 1.0), (-1.0, 1.0)), 1)


def test_export_contour_csv_and_json(tmp_path, circle_model):
    path = tmp_path / "grid.csv"
    export_contour_grid(circle_model, ((-1.0, 1.0), (-1.0, 1.0)), 5, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,y,g0_deg2"
    assert len(lines) == 26
    assert not knots_path(path).exists()

    json_path = tmp_path / "grid.json"
    export_contour_grid(circle_model, ((-1.0, 1.0), (-1.0, 1.0)), 3, json_path, fmt="json")
    payload = json.loads(json_path.read_text())
    assert len(payload["points"]) == 9
    assert payload["knots"] is None


def test_export_contour_writes_knots(tmp_path):
    model = fit(circle_points(8), PursuitConfig(epsilon=0.1, delta=1e-6))
    path = tmp_path / "grid.csv"
    export_contour_grid(model, ((-1.5, 1.5), (-1.5, 1.5)), 4, path)
    knots = np.loadtxt(knots_path(path), delimiter=",", skiprows=1)
    assert knots.shape == (8, 2)


def test_render_report_marks_missing_values():
    report = ExperimentReport(
        table="table1",
        runs=1,
        seeds=[0],
        rows=[MethodSummary(dataset="iris", method="vca", accuracy_mean=0.9, n_features_mean=12.0)],
        notes=["a note"],
    )
    text = render_report(report)
    assert "note: a note" in text
    row = [line for line in text.splitlines() if line.startswith("iris")][0]
    assert row.split() == ["iris", "vca", "0.900", "0.000", "-", "12.0", "-"]


def test_render_table2():
    report = ExperimentReport(
        table="table2",
        runs=2,
        seeds=[0, 1],
        rows=[MethodSummary(dataset="wine", method="knots", accuracy_mean=0.5, knotting_ratio=0.25)],
    )
    text = render_report(report)
    assert "seeds 0,1" in text
    row = [line for line in text.splitlines() if line.startswith("wine")][0]
    assert row.split()[-1] == "0.250"


def _two_rings(n_per_class=14, seed=0):
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0.0, 2 * np.pi, size=(2, n_per_class))
    radii = np.array([[0.9], [0.4]]) + 0.01 * rng.standard_normal((2, n_per_class))
    rings = np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=-1)
    return LabeledDataset(
        points=rings.reshape(-1, 2),
        labels=np.repeat([0, 1], n_per_class),
        name="rings",
    )


def test_table2_ratio_counts_distinct_knots_per_class(monkeypatch):
    import knotpursuit.harness.experiments as experiments

    class_models = (
        SimpleNamespace(knots=np.zeros((5, 2)), degrees=[]),
        SimpleNamespace(knots=np.array([[0.0, 0.0], [0.5, 0.5], [0.5, 0.5]]), degrees=[]),
    )
    fitted = ClassFeatureModel(class_models=class_models, selected=((), ()), method="proposed")
    monkeypatch.setattr(experiments, "train_class_models", lambda *a, **k: fitted)
    monkeypatch.setattr(experiments, "cross_validate", lambda *a, **k: ({"epsilon": 0.1, "lam": 0.01}, {}))
    calls = []

    def counting_ratio(knots, n_original, tol=None):
        calls.append(n_original)
        return knotting_ratio(knots, n_original, tol)

    monkeypatch.setattr(experiments, "knotting_ratio", counting_ratio)

    ds = _two_rings()
    cfg = ExperimentConfig(runs=1, seed=0, record_runtime=False)
    train, _ = split_train_test(ds, cfg.train_fraction, 0)
    report = run_table2([ds], cfg)
    assert calls == [len(train), len(train)]
    assert report.row("rings", "knots").knotting_ratio == pytest.approx(3 / len(train))
    assert report.row("rings", "knots").n_features_mean == 3


@pytest.mark.parametrize("runner", [run_table1, run_table2])
def test_reports_are_reproducible_without_runtimes(runner):
    cfg = ExperimentConfig(
        runs=1,
        seed=3,
        cv_folds=2,
        epsilon_grid=[0.2],
        lambda_grid=[0.01],
        record_runtime=False,
        pursuit={"max_degree": 2, "max_resets": 1, "optimizer": {"max_iters": 15}},
    )
    first = runner([_two_rings()], cfg)
    second = runner([_two_rings()], cfg)
    assert render_report(first) == render_report(second)
    assert first.model_dump_json() == second.model_dump_json()
    assert all(row.runtime_mean is None for row in first.rows)
