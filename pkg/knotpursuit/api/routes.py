import logging

import numpy as np
from fastapi import APIRouter, HTTPException

from knotpursuit.api.schemas import EvaluateRequest, EvaluateResponse, FitRequest, VCARequest
from knotpursuit.errors import KnotPursuitError
from knotpursuit.features import method_registry
from knotpursuit.models import ModelRecord
from knotpursuit.models.store import model_from_record, model_to_record

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/models", tags=["models"])


def _fit(method_name: str, points: list[list[float]], params: dict) -> ModelRecord:
    method = method_registry.get(method_name)
    if method is None:
        raise HTTPException(status_code=404, detail=f"Method {method_name} not found")
    try:
        model = method.fit(np.array(points, dtype=float), params)
    except (KnotPursuitError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    logger.info("%s fit on %d points: %d vanishing polynomials", method_name, len(points), model.n_features)
    return model_to_record(model)


@router.post("/fit", response_model=ModelRecord)
def fit_model(request: FitRequest):
    return _fit("proposed", request.points, request.model_dump(exclude={"points"}, exclude_none=True))


@router.post("/vca", response_model=ModelRecord)
def fit_vca(request: VCARequest):
    return _fit("vca", request.points, request.model_dump(exclude={"points"}, exclude_none=True))


@router.post("/evaluate", response_model=EvaluateResponse)
def evaluate_model(request: EvaluateRequest):
    try:
        model = model_from_record(request.model)
        values = model.evaluate_vanishing(np.array(request.points, dtype=float))
    except (KnotPursuitError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    return EvaluateResponse(
        degrees=model.degrees,
        values=values.tolist(),
        features=np.abs(values).tolist(),
    )
