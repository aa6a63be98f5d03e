from abc import ABC, abstractmethod
from typing import Any, Optional

from knotpursuit.basis import VanishingModel, vca_fit
from knotpursuit.pursuit import PursuitConfig, fit
from knotpursuit.settings import settings


class BaseMethod(ABC):
    name: str
    display_name: str
    description: str

    @abstractmethod
    def fit(self, points, params: Optional[dict[str, Any]] = None) -> VanishingModel:
        pass


class ProposedMethod(BaseMethod):
    name = "proposed"
    display_name = "Proposed"
    description = "Vanishing polynomials fitted jointly with data knots"

    def fit(self, points, params: Optional[dict[str, Any]] = None) -> VanishingModel:
        return fit(points, PursuitConfig.from_settings(**(params or {})))


class VCAMethod(BaseMethod):
    name = "vca"
    display_name = "VCA"
    description = "Vanishing Component Analysis on the raw points"

    def fit(self, points, params: Optional[dict[str, Any]] = None) -> VanishingModel:
        params = params or {}
        epsilon = params.get("epsilon")
        return vca_fit(points, settings.epsilon if epsilon is None else epsilon, params.get("max_degree"))


class MethodRegistry:
    _instance: Optional["MethodRegistry"] = None
    _methods: dict[str, BaseMethod]

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._methods = {}
        return cls._instance

    def register(self, method: BaseMethod):
        self._methods[method.name] = method

    def get(self, name: str) -> Optional[BaseMethod]:
        return self._methods.get(name)

    def list_all(self) -> list[BaseMethod]:
        return list(self._methods.values())


method_registry = MethodRegistry()


def register_methods():
    method_registry.register(ProposedMethod())
    method_registry.register(VCAMethod())
