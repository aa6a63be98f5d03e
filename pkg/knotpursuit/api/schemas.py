from typing import Optional

from pydantic import BaseModel, Field

from knotpursuit.models import ModelRecord


class FitRequest(BaseModel):
    points: list[list[float]] = Field(min_length=1)
    epsilon: Optional[float] = None
    delta: Optional[float] = None
    lam: Optional[float] = None
    gamma: Optional[float] = None
    max_degree: Optional[int] = None
    max_resets: Optional[int] = None


class VCARequest(BaseModel):
    points: list[list[float]] = Field(min_length=1)
    epsilon: Optional[float] = None
    max_degree: Optional[int] = None


class EvaluateRequest(BaseModel):
    model: ModelRecord
    points: list[list[float]] = Field(min_length=1)


class EvaluateResponse(BaseModel):
    degrees: list[int]
    values: list[list[float]]
    features: list[list[float]]
