from typing import Callable, Dict, List, Optional, Tuple

from fredholm.core.exceptions import ProblemNotFoundError
from fredholm.models.grid import QuadratureRule
from fredholm.models.problem import ProblemSpec

ProblemFactory = Callable[[Optional[QuadratureRule]], ProblemSpec]


class ProblemRegistry:
    """Registry of named problem factories"""

    def __init__(self):
        self._factories: Dict[str, ProblemFactory] = {}
        self._descriptions: Dict[str, str] = {}

    def register(self, name: str, factory: ProblemFactory, description: str = "") -> None:
        """
        Register a problem factory

        Args:
            name: Identifier used on the command line
            factory: Callable taking an optional quadrature rule and returning the spec.
                Manufactured problems bake the rule into their forcing term; the
                worked examples ignore it.
            description: One-line text shown by the problem listing
        """
        if not callable(factory):
            raise ValueError(f"Problem factory for {name} must be callable")
        self._factories[name] = factory
        self._descriptions[name] = description

    def create(self, name: str, rule: Optional[QuadratureRule] = None) -> ProblemSpec:
        """
        Build a registered problem

        Raises:
            ProblemNotFoundError: If the name is not registered
        """
        if name not in self._factories:
            raise ProblemNotFoundError(name, self._factories.keys())
        return self._factories[name](rule)

    def names(self) -> List[str]:
        return list(self._factories)

    def describe(self) -> List[Tuple[str, str]]:
        return [(name, self._descriptions[name]) for name in self._factories]

    def __contains__(self, name: str) -> bool:
        return name in self._factories

    def __len__(self) -> int:
        return len(self._factories)
