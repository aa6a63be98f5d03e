"""Brute-force monomial expansion of registry polynomials, for tests."""

from typing import Optional

import numpy as np
import sympy

from knotpursuit.errors import CapacityError
from knotpursuit.polycore.points import as_point_set
from knotpursuit.polycore.polynomial import (
    Combination,
    Constant,
    Coordinate,
    Polynomial,
    PolyRef,
    RefLayer,
)
from knotpursuit.polycore.registry import PolyRegistry
from knotpursuit.settings import settings


class _Expander:
    def __init__(self, registry: PolyRegistry):
        self.registry = registry
        self.gens = sympy.symbols(f"x0:{registry.n_vars}")
        self._memo: dict[PolyRef, sympy.Poly] = {}

    def constant(self, value: float) -> sympy.Poly:
        return sympy.Poly(sympy.Float(value), *self.gens, domain=sympy.RR)

    def ref(self, ref: PolyRef) -> sympy.Poly:
        cached = self._memo.get(ref)
        if cached is None:
            poly, scale = self.registry.resolve(ref)
            cached = self.expand(poly)
            if ref.layer == RefLayer.F:
                cached = cached * self.constant(1.0 / scale)
            self._memo[ref] = cached
        return cached

    def expand(self, poly: Polynomial) -> sympy.Poly:
        if isinstance(poly, Constant):
            return self.constant(poly.value)
        if isinstance(poly, Coordinate):
            return sympy.Poly(self.gens[poly.index], *self.gens, domain=sympy.RR)
        if not isinstance(poly, Combination):
            raise TypeError(f"cannot expand {type(poly).__name__}")
        total = self.constant(0.0)
        for term in poly.base_terms:
            product = self.ref(term.left)
            if term.right is not None:
                product = product * self.ref(term.right)
            total = total + product * self.constant(term.coef)
        for term in poly.lower_terms:
            total = total + self.ref(term.ref) * self.constant(term.coef)
        return total


def expand_to_monomials(
    poly: Polynomial, registry: PolyRegistry, max_degree: Optional[int] = None
) -> dict[tuple[int, ...], float]:
    """Explicit coefficient map {exponent tuple: coefficient} of ``poly``."""
    cap = settings.oracle_max_degree if max_degree is None else max_degree
    if poly.degree > cap:
        raise CapacityError(f"degree {poly.degree} exceeds the oracle cap {cap}")
    expanded = _Expander(registry).expand(poly)
    coeffs = {}
    for monom, coef in expanded.terms():
        value = float(coef)
        if value != 0.0:
            coeffs[tuple(int(e) for e in monom)] = value
    if not coeffs:
        coeffs[(0,) * registry.n_vars] = 0.0
    return coeffs


def evaluate_monomials(coeffs: dict[tuple[int, ...], float], points) -> np.ndarray:
    pts = as_point_set(points)
    out = np.zeros(pts.shape[0])
    for exponents, coef in coeffs.items():
        out += coef * np.prod(pts ** np.array(exponents, dtype=float), axis=1)
    return out
