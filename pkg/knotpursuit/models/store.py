"""JSON persistence of fitted models.

Layouts are stored once and referenced by id, so polynomials that were
evaluated together before saving are evaluated together after loading.
"""

import json
from pathlib import Path
from typing import Union

import numpy as np

from knotpursuit.basis import VanishingModel
from knotpursuit.errors import InputError, ParseError
from knotpursuit.models.model import (
    FEntryRecord,
    LayerRecord,
    LayoutRecord,
    ModelRecord,
    PolynomialRecord,
    RefRecord,
    RegistryRecord,
)
from knotpursuit.polycore import (
    Combination,
    Constant,
    Coordinate,
    FEntry,
    PolyKind,
    Polynomial,
    PolyRef,
    PolyRegistry,
    TermLayout,
)
from knotpursuit.pursuit import KnotModel, PursuitDiagnostics


def _ref_record(ref: PolyRef) -> RefRecord:
    return (ref.layer, ref.degree, ref.position)


def _ref(record: RefRecord) -> PolyRef:
    layer, degree, position = record
    return PolyRef(layer, degree, position)


class _RecordWriter:
    def __init__(self):
        self.layouts: dict[int, LayoutRecord] = {}

    def layout_id(self, layout: TermLayout) -> int:
        key = id(layout)
        if key not in self.layouts:
            self.layouts[key] = LayoutRecord(
                id=len(self.layouts),
                pairs=[(_ref_record(l), _ref_record(r) if r is not None else None) for l, r in layout.pairs],
                lower=[_ref_record(ref) for ref in layout.lower],
            )
        return self.layouts[key].id

    def poly(self, poly: Polynomial) -> PolynomialRecord:
        if isinstance(poly, Constant):
            return PolynomialRecord(kind=poly.kind, degree=poly.degree, value=poly.value)
        if isinstance(poly, Coordinate):
            return PolynomialRecord(kind=poly.kind, degree=poly.degree, index=poly.index)
        if isinstance(poly, Combination):
            return PolynomialRecord(
                kind=poly.kind,
                degree=poly.degree,
                layout=self.layout_id(poly.layout),
                base_coefs=poly.base_coefs.tolist(),
                lower_coefs=poly.lower_coefs.tolist(),
            )
        raise InputError(f"cannot serialize {type(poly).__name__}")


def registry_to_record(registry: PolyRegistry) -> RegistryRecord:
    writer = _RecordWriter()
    layers = []
    for degree in range(1, registry.max_degree + 1):
        layers.append(
            LayerRecord(
                degree=degree,
                F=[FEntryRecord(poly=writer.poly(e.poly), scale=e.scale) for e in registry.f_layer(degree)],
                G=[writer.poly(p) for p in registry.g_layer(degree)],
            )
        )
    return RegistryRecord(
        n_vars=registry.n_vars,
        n_points=registry.n_points,
        layouts=sorted(writer.layouts.values(), key=lambda r: r.id),
        layers=layers,
    )


def registry_from_record(record: RegistryRecord) -> PolyRegistry:
    layouts = {
        r.id: TermLayout(
            pairs=tuple((_ref(l), _ref(rr) if rr is not None else None) for l, rr in r.pairs),
            lower=tuple(_ref(ref) for ref in r.lower),
        )
        for r in record.layouts
    }
    registry = PolyRegistry(record.n_vars, record.n_points)

    def build(p: PolynomialRecord) -> Polynomial:
        if p.kind == PolyKind.CONSTANT:
            return Constant(degree=p.degree, value=p.value)
        if p.kind == PolyKind.COORDINATE:
            return Coordinate(degree=p.degree, index=p.index)
        layout = layouts.get(p.layout)
        if layout is None:
            raise ParseError(f"unknown layout id {p.layout}")
        if len(p.base_coefs) != len(layout.pairs) or len(p.lower_coefs) != len(layout.lower):
            raise ParseError(f"coefficient count does not match layout {p.layout}")
        return Combination(
            degree=p.degree,
            layout=layout,
            base_coefs=np.array(p.base_coefs, dtype=float),
            lower_coefs=np.array(p.lower_coefs, dtype=float),
        )

    for layer in sorted(record.layers, key=lambda r: r.degree):
        registry.commit_layer(
            layer.degree,
            [build(p) for p in layer.G],
            [FEntry(build(e.poly), e.scale) for e in layer.F],
        )
    return registry


def model_to_record(model: VanishingModel) -> ModelRecord:
    diagnostics = dict(model.diagnostics)
    config = diagnostics.pop("config", {})
    knots = getattr(model, "knots", None)
    return ModelRecord(
        method=model.method,
        registry=registry_to_record(model.registry),
        knots=knots.tolist() if knots is not None else None,
        config=config,
        diagnostics=diagnostics,
    )


def model_from_record(record: ModelRecord) -> VanishingModel:
    registry = registry_from_record(record.registry)
    diagnostics = {"config": record.config, **record.diagnostics} if record.config else dict(record.diagnostics)
    if record.knots is None:
        return VanishingModel(registry=registry, method=record.method, diagnostics=diagnostics)
    return KnotModel(
        registry=registry,
        method=record.method,
        diagnostics=diagnostics,
        knots=np.array(record.knots, dtype=float).reshape(-1, registry.n_vars),
        report=PursuitDiagnostics.model_validate(record.diagnostics),
    )


def save_model(model: VanishingModel, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(model_to_record(model).model_dump_json(indent=2))
    return path


def load_model(path: Union[str, Path]) -> VanishingModel:
    path = Path(path)
    try:
        record = ModelRecord.model_validate_json(path.read_text())
    except ValueError as e:
        raise ParseError(f"invalid model file {path}: {e}") from e
    return model_from_record(record)


def model_to_json(model: VanishingModel) -> dict:
    return json.loads(model_to_record(model).model_dump_json())
