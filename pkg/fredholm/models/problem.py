"""Data model of one nonlinear Fredholm equation of the second kind.

    h(x) = f(x) + lam * integral_0^1 G(x, t, h(t)) dt

All callables take numpy arrays and must broadcast like ufuncs: the operators
call ``kernel(x[:, None], t[None, :], h[None, :])``.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

ArrayFunction = Callable[[np.ndarray], np.ndarray]
KernelFunction = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    lam: float
    forcing: ArrayFunction
    kernel: KernelFunction
    kernel_dh: KernelFunction
    exact: Optional[ArrayFunction] = None
    description: str = ""
    exact_formula: Optional[str] = None
    approximate_derivative: bool = False

    @property
    def has_exact(self) -> bool:
        return self.exact is not None

    def summary(self) -> str:
        """One-line description used by the problem listing."""
        exact = self.exact_formula or ("known" if self.has_exact else "unknown")
        text = f"lambda={self.lam:+g}, exact u(x)={exact}"
        if self.description:
            text = f"{text}; {self.description}"
        return text
