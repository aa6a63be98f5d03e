"""Polynomials as linear combinations of products of stored layer entries.

A polynomial never stores its monomials. Degree-t entries are built from
products ``f * g`` of registered nonvanishing polynomials (``f`` of degree 1,
``g`` of degree t-1) plus a correction over lower-degree nonvanishing
polynomials. Polynomials produced by one basis step share a ``TermLayout`` so
they can be evaluated together with a single matrix product.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Optional

import numpy as np


class PolyKind(str, Enum):
    CONSTANT = "constant"
    COORDINATE = "coordinate"
    COMBINATION = "combination"


class RefLayer(str, Enum):
    F = "F"  # nonvanishing layer entry, divided by its rescaling factor
    X = "X"  # coordinate primitive


@dataclass(frozen=True)
class PolyRef:
    layer: RefLayer
    degree: int
    position: int

    @classmethod
    def f(cls, degree: int, position: int) -> "PolyRef":
        return cls(RefLayer.F, degree, position)

    @classmethod
    def coordinate(cls, index: int) -> "PolyRef":
        return cls(RefLayer.X, 1, index)

    def as_tuple(self) -> tuple[str, int, int]:
        return (self.layer.value, self.degree, self.position)


@dataclass(frozen=True)
class BaseTerm:
    coef: float
    left: PolyRef
    right: Optional[PolyRef]  # None is the unit factor


@dataclass(frozen=True)
class LowerTerm:
    coef: float
    ref: PolyRef


@dataclass(frozen=True, eq=False)
class TermLayout:
    """Shared term structure; compared by identity."""

    pairs: tuple[tuple[PolyRef, Optional[PolyRef]], ...]
    lower: tuple[PolyRef, ...] = ()

    @cached_property
    def max_f_degree(self) -> int:
        """Highest F layer referenced; coordinates need no layer."""
        refs = [left for left, _ in self.pairs]
        refs.extend(right for _, right in self.pairs if right is not None)
        refs.extend(self.lower)
        return max((r.degree for r in refs if r.layer == RefLayer.F), default=0)

    def key(self) -> tuple:
        return (
            tuple((l.as_tuple(), r.as_tuple() if r is not None else None) for l, r in self.pairs),
            tuple(ref.as_tuple() for ref in self.lower),
        )


@dataclass(frozen=True)
class Polynomial:
    degree: int

    @property
    def kind(self) -> PolyKind:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(Polynomial):
    value: float

    @property
    def kind(self) -> PolyKind:
        return PolyKind.CONSTANT


@dataclass(frozen=True)
class Coordinate(Polynomial):
    index: int

    @property
    def kind(self) -> PolyKind:
        return PolyKind.COORDINATE


@dataclass(frozen=True, eq=False)
class Combination(Polynomial):
    layout: TermLayout
    base_coefs: np.ndarray
    lower_coefs: np.ndarray

    @property
    def kind(self) -> PolyKind:
        return PolyKind.COMBINATION

    @property
    def base_terms(self) -> tuple[BaseTerm, ...]:
        return tuple(
            BaseTerm(float(c), left, right)
            for c, (left, right) in zip(self.base_coefs, self.layout.pairs)
            if c != 0.0
        )

    @property
    def lower_terms(self) -> tuple[LowerTerm, ...]:
        return tuple(
            LowerTerm(float(c), ref)
            for c, ref in zip(self.lower_coefs, self.layout.lower)
            if c != 0.0
        )

    @classmethod
    def from_terms(
        cls,
        degree: int,
        base_terms: list[tuple[float, PolyRef, Optional[PolyRef]]],
        lower_terms: list[tuple[float, PolyRef]] = (),
    ) -> "Combination":
        layout = TermLayout(
            pairs=tuple((left, right) for _, left, right in base_terms),
            lower=tuple(ref for _, ref in lower_terms),
        )
        return cls(
            degree=degree,
            layout=layout,
            base_coefs=np.array([c for c, _, _ in base_terms], dtype=float),
            lower_coefs=np.array([c for c, _ in lower_terms], dtype=float),
        )


def combinations_from_block(
    degree: int, layout: TermLayout, base: np.ndarray, lower: np.ndarray
) -> list[Combination]:
    """One Combination per column of the coefficient matrices."""
    return [
        Combination(
            degree=degree,
            layout=layout,
            base_coefs=np.ascontiguousarray(base[:, j]),
            lower_coefs=np.ascontiguousarray(lower[:, j]),
        )
        for j in range(base.shape[1])
    ]
