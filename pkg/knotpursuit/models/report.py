from typing import Any, Optional

from pydantic import BaseModel, Field


class MethodSummary(BaseModel):
    dataset: str
    method: str
    accuracy_mean: float
    accuracy_std: float = 0.0
    accuracies: list[float] = Field(default_factory=list)
    runtime_mean: Optional[float] = None
    n_features_mean: Optional[float] = None
    mean_degree: Optional[float] = None
    knotting_ratio: Optional[float] = None


class ExperimentReport(BaseModel):
    table: str
    runs: int
    seeds: list[int]
    rows: list[MethodSummary] = Field(default_factory=list)
    config: dict[str, Any] = Field(default_factory=dict)
    notes: list[str] = Field(default_factory=list)

    def row(self, dataset: str, method: str) -> Optional[MethodSummary]:
        for summary in self.rows:
            if summary.dataset == dataset and summary.method == method:
                return summary
        return None
