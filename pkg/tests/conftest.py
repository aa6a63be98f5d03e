import numpy as np
import pytest

from knotpursuit.basis import VanishingModel, vca_fit
from knotpursuit.polycore import Combination, PolyRef, PolyRegistry, expand_to_monomials


def circle_points(n: int = 8, radius: float = 1.0, phase: float = 0.0) -> np.ndarray:
    theta = phase + 2.0 * np.pi * np.arange(n) / n
    return radius * np.column_stack([np.cos(theta), np.sin(theta)])


def unit_circle_polynomial() -> Combination:
    """x^2 + y^2 - 1 on a registry built for a single point (F0 = 1)."""
    x, y = PolyRef.coordinate(0), PolyRef.coordinate(1)
    return Combination.from_terms(2, [(1.0, x, x), (1.0, y, y)], [(-1.0, PolyRef.f(0, 0))])


def circle_registry() -> tuple[PolyRegistry, Combination]:
    registry = PolyRegistry(n_vars=2, n_points=1)
    g = unit_circle_polynomial()
    registry.commit_layer(1, [], [])
    registry.commit_layer(2, [g], [])
    return registry, g


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def circle8():
    return circle_points(8)


@pytest.fixture
def vca_circle(circle8) -> VanishingModel:
    return vca_fit(circle8, 0.1)


@pytest.fixture
def noisy_points(rng):
    return rng.uniform(-1.0, 1.0, size=(12, 2))


@pytest.fixture
def circle_model():
    registry, _ = circle_registry()
    return VanishingModel(registry=registry)


CIRCLE_MONOMIALS = [(2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)]


def circle_from_span(model: VanishingModel) -> np.ndarray:
    """The member of span G[2] closest to x^2 + y^2 - 1, scaled to constant term -1."""
    target = np.array([1.0, 0.0, 1.0, 0.0, 0.0, -1.0])
    basis = np.column_stack([
        [expand_to_monomials(g, model.registry).get(m, 0.0) for m in CIRCLE_MONOMIALS] for g in model.G[2]
    ])
    coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
    fitted = basis @ coef
    return fitted / -fitted[-1]
