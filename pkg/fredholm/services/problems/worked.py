"""The two worked examples with known closed-form solutions.

Sign convention: the equations are written h = f + lam * int G, so the
first example (integral term "-1/4 int") has lam = -1/4 and the second
("+1/2 int") has lam = +1/2.
"""

import numpy as np

from fredholm.models.problem import ProblemSpec

COS1 = np.cos(1.0)
COS_E = np.cos(np.e)


def worked_example_1(rule=None) -> ProblemSpec:
    return ProblemSpec(
        name="paper-ex1",
        lam=-0.25,
        forcing=lambda x: x ** 2 - COS1 / 8.0 + 1.0 / 8.0,
        kernel=lambda x, t, h: t * np.sin(h),
        kernel_dh=lambda x, t, h: t * np.cos(h),
        exact=lambda x: x ** 2,
        exact_formula="x^2",
        description="f(x)=x^2-cos(1)/8+1/8, G(x,t,h)=t*sin(h), integral term enters with -1/4",
    )


def worked_example_2(rule=None) -> ProblemSpec:
    return ProblemSpec(
        name="paper-ex2",
        lam=0.5,
        forcing=lambda x: np.exp(x) - x * (COS1 - COS_E) / 2.0,
        kernel=lambda x, t, h: x * np.exp(t) * np.sin(h),
        kernel_dh=lambda x, t, h: x * np.exp(t) * np.cos(h),
        exact=np.exp,
        exact_formula="e^x",
        description="f(x)=e^x-x(cos(1)-cos(e))/2, G(x,t,h)=x*e^t*sin(h), integral term enters with +1/2",
    )
