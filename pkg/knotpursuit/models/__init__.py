from knotpursuit.models.model import (
    FEntryRecord,
    LayerRecord,
    LayoutRecord,
    ModelRecord,
    PolynomialRecord,
    RegistryRecord,
)
from knotpursuit.models.report import ExperimentReport, MethodSummary
