import numpy as np
import pytest
from pydantic import ValidationError

from knotpursuit.basis import coordinate_candidates, find_basis
from knotpursuit.errors import InputError
from knotpursuit.harness import distinct_knots, gen_blobs
from knotpursuit.knotting import OptimizerParams
from knotpursuit.polycore import Constant, PolyRegistry, evaluate_matrix
from knotpursuit.pursuit import PursuitConfig, cool_eta, exact_vanish_pursuit, fit, knot_basis
from knotpursuit.pursuit.pursuit import PursuitStep

from tests.conftest import circle_from_span, circle_points

UNIT_CIRCLE = np.array([1.0, 0.0, 1.0, 0.0, 0.0, -1.0])

ONE_POINT = np.zeros((1, 2))


def _registry():
    return PolyRegistry(n_vars=2, n_points=1)


def test_cool_eta_formula():
    registry = _registry()
    assert cool_eta(1.0, 0.9, [Constant(degree=0, value=0.5)], ONE_POINT, registry) == pytest.approx(0.5)
    assert cool_eta(1.0, 0.9, [Constant(degree=0, value=0.95)], ONE_POINT, registry) == pytest.approx(0.9)
    assert cool_eta(1.0, 0.9, [], ONE_POINT, registry) == pytest.approx(0.9)


def test_cool_eta_snaps_to_delta():
    registry = _registry()
    assert cool_eta(0.011, 0.9, [], ONE_POINT, registry, delta=0.0099, snap=1e-3) == 0.0099
    assert cool_eta(1.0, 0.9, [Constant(degree=0, value=0.0)], ONE_POINT, registry, delta=0.01) == 0.01


def test_config_defaults_delta_to_a_hundredth_of_epsilon():
    cfg = PursuitConfig(epsilon=0.2)
    assert cfg.delta == pytest.approx(0.002)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"epsilon": 0.1, "delta": 0.2},
        {"epsilon": 0.1, "gamma": 1.0},
        {"epsilon": 0.1, "gamma": 0.0},
        {"epsilon": 0.0},
        {"epsilon": 0.1, "lam": -1.0},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ValidationError):
        PursuitConfig(**kwargs)


def test_config_from_settings_ignores_missing_overrides():
    cfg = PursuitConfig.from_settings(epsilon=0.3, delta=None, gamma=0.5)
    assert cfg.epsilon == 0.3
    assert cfg.gamma == 0.5
    assert cfg.delta == pytest.approx(0.003)


def test_pursuit_skips_loop_without_vanishing_polynomials(rng):
    x0 = rng.normal(size=(6, 2))
    registry = PolyRegistry(n_vars=2, n_points=6)
    candidates = coordinate_candidates(registry)
    layer = find_basis(candidates, registry.f_refs_upto(0), x0, x0, 0.01, 0.01, registry)
    assert layer.G == []
    step = exact_vanish_pursuit(layer, candidates, x0, x0, 0.01, PursuitConfig(epsilon=0.01), registry)
    assert np.array_equal(step.knots, x0)
    assert step.eta_trace == [0.01]


def test_fit_single_point():
    point = np.array([[0.3, -0.2]])
    model = fit(point, PursuitConfig(epsilon=0.1, delta=0.0))
    assert len(model.G[1]) == 2
    assert model.registry.max_degree == 1
    assert np.allclose(model.knots, point, atol=1e-8)
    assert model.report.resets == 0
    assert not model.report.truncated


def test_fit_empty_input_is_input_error():
    with pytest.raises(InputError):
        fit(np.zeros((0, 2)), PursuitConfig())


def test_fit_exact_circle_keeps_knots_and_finds_circle():
    points = circle_points(8)
    cfg = PursuitConfig(epsilon=0.1, delta=1e-6)
    model = fit(points, cfg)
    assert not model.report.truncated
    assert model.report.resets == 0
    assert np.allclose(model.knots, points, atol=1e-8)
    assert np.all(model.vanishing_norms(points) <= cfg.delta + 1e-8)

    assert np.allclose(circle_from_span(model), UNIT_CIRCLE, atol=1e-6)


def _small_config(**overrides):
    params = dict(
        epsilon=0.3,
        delta=0.01,
        lam=0.1,
        gamma=0.5,
        max_degree=4,
        max_resets=3,
        optimizer=OptimizerParams(max_iters=40),
    )
    params.update(overrides)
    return PursuitConfig(**params)


def test_fit_contracts_on_noisy_data(rng):
    points = circle_points(10) + 0.05 * rng.normal(size=(10, 2))
    cfg = _small_config()
    model = fit(points, cfg)
    g_polys = model.vanishing_polynomials()
    if g_polys:
        x0_norms = np.linalg.norm(evaluate_matrix(g_polys, model.registry, points), axis=0)
        assert np.all(x0_norms <= cfg.epsilon + 1e-8)
        if not model.report.truncated:
            assert model.report.max_g_z <= cfg.delta + cfg.vanishing_slack
    assert model.n_nonvanishing <= model.knots.shape[0]
    trace = model.report.eta_trace
    assert all(b <= a for a, b in zip(trace, trace[1:]))
    assert trace[-1] >= cfg.delta


def test_fit_is_deterministic(rng):
    points = circle_points(10) + 0.05 * rng.normal(size=(10, 2))
    first = fit(points, _small_config())
    second = fit(points, _small_config())
    assert np.array_equal(first.knots, second.knots)
    queries = rng.normal(size=(5, 2))
    assert np.array_equal(first.evaluate_vanishing(queries), second.evaluate_vanishing(queries))
    assert first.report == second.report


def test_degree_cap_is_reported(rng):
    points = rng.normal(size=(20, 2))
    model = fit(points, _small_config(epsilon=1e-3, delta=1e-5, max_degree=1))
    assert model.report.truncated
    assert model.report.truncation_reason == "max_degree"


def test_knot_basis_fits_the_knots():
    points = circle_points(8)
    model = fit(points, PursuitConfig(epsilon=0.1, delta=1e-6))
    basis = knot_basis(model)
    assert np.all(basis.vanishing_norms(model.knots) <= 1e-6 + 1e-8)


def test_fit_recovers_circle_from_thirty_points():
    model = fit(circle_points(30), PursuitConfig(epsilon=0.1, max_degree=3))
    assert np.allclose(circle_from_span(model), UNIT_CIRCLE, atol=1e-4)
    assert np.allclose(model.knots, circle_points(30), atol=1e-8)


def _nonvanishing_count(model):
    return sum(model.report.per_degree_f.values())


@pytest.mark.parametrize("lam", [0.01, 0.1])
def test_nonvanishing_count_never_exceeds_knot_count(rng, lam):
    datasets = [
        circle_points(12) + 0.05 * rng.normal(size=(12, 2)),
        gen_blobs(seed=1, n_points=24),
        rng.normal(size=(15, 3)),
    ]
    for points in datasets:
        model = fit(points, _small_config(epsilon=0.3, lam=lam, max_degree=5))
        assert _nonvanishing_count(model) <= model.knots.shape[0]
        assert model.n_nonvanishing <= model.knots.shape[0]


def _knot_moving_pursuit(monkeypatch):
    """Swap the per-degree pursuit for one that pushes the knots off the circle
    once, at degree 2, and otherwise keeps the basis step unchanged."""
    import knotpursuit.pursuit.pursuit as pursuit_module

    moved = []

    def pursue(layer, candidates, x0, z, eta, cfg, registry):
        knots = np.array(z, dtype=float)
        if layer.degree == 2 and not moved:
            moved.append(True)
            knots = knots * (1.0 + 0.1 * np.cos(3.0 * np.arange(knots.shape[0])))[:, None]
        return PursuitStep(layer=layer, knots=knots, eta=eta, eta_trace=[eta])

    monkeypatch.setattr(pursuit_module, "exact_vanish_pursuit", pursue)


def test_resets_strictly_lower_eta(monkeypatch):
    _knot_moving_pursuit(monkeypatch)
    cfg = PursuitConfig(epsilon=0.1, delta=0.001, gamma=0.5, max_degree=8, max_resets=20)
    model = fit(circle_points(16), cfg)
    report = model.report
    assert report.resets >= 1
    assert len(report.reset_etas) == report.resets
    etas = [cfg.epsilon] + report.reset_etas
    assert all(b < a for a, b in zip(etas, etas[1:]))
    assert all(eta >= cfg.delta for eta in etas)
    assert not report.truncated
    assert report.max_g_z <= cfg.delta + cfg.vanishing_slack
    assert _nonvanishing_count(model) <= model.knots.shape[0]


def test_reset_budget_truncates(monkeypatch):
    _knot_moving_pursuit(monkeypatch)
    cfg = PursuitConfig(epsilon=0.1, delta=0.001, gamma=0.5, max_degree=8, max_resets=0)
    model = fit(circle_points(16), cfg)
    assert model.report.resets == 0
    assert model.report.truncated
    assert model.report.truncation_reason == "max_resets"


def test_three_blobs_collapse_to_few_knots():
    model = fit(gen_blobs(seed=0), PursuitConfig())
    assert distinct_knots(model.knots, 1e-3).shape[0] <= 5
    assert _nonvanishing_count(model) <= model.knots.shape[0]
