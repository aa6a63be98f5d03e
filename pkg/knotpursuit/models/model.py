from typing import Any, Optional

from pydantic import BaseModel, Field

from knotpursuit.polycore import PolyKind, RefLayer

RefRecord = tuple[RefLayer, int, int]


class LayoutRecord(BaseModel):
    id: int
    pairs: list[tuple[RefRecord, Optional[RefRecord]]]
    lower: list[RefRecord] = Field(default_factory=list)


class PolynomialRecord(BaseModel):
    kind: PolyKind
    degree: int
    value: Optional[float] = None
    index: Optional[int] = None
    layout: Optional[int] = None
    base_coefs: list[float] = Field(default_factory=list)
    lower_coefs: list[float] = Field(default_factory=list)


class FEntryRecord(BaseModel):
    poly: PolynomialRecord
    scale: float


class LayerRecord(BaseModel):
    degree: int
    F: list[FEntryRecord] = Field(default_factory=list)
    G: list[PolynomialRecord] = Field(default_factory=list)


class RegistryRecord(BaseModel):
    n_vars: int
    n_points: int
    layouts: list[LayoutRecord] = Field(default_factory=list)
    layers: list[LayerRecord] = Field(default_factory=list)


class ModelRecord(BaseModel):
    format_version: int = 1
    method: str
    registry: RegistryRecord
    knots: Optional[list[list[float]]] = None
    config: dict[str, Any] = Field(default_factory=dict)
    diagnostics: dict[str, Any] = Field(default_factory=dict)
