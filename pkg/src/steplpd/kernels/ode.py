"""Adaptive matrix ODE integration (complex-valued, non-stiff)."""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from steplpd.kernels.quadrature import DEFAULT_SPEC, QuadratureSpec


class StiffnessError(RuntimeError):
    """Step size underflow / integrator failure."""


def ode_integrate(rhs: Callable[[float, np.ndarray], np.ndarray],
                  y0: np.ndarray,
                  span: tuple[float, float],
                  spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """Integrate Y' = rhs(x, Y) for a complex matrix (or vector) Y over span.

    Dormand-Prince 8(5,3) with local error controlled by spec tolerances.
    Returns Y at span[1] with the shape of y0.
    """
    y0 = np.asarray(y0, dtype=complex)
    shape = y0.shape

    def flat_rhs(x, y):
        return rhs(x, y.reshape(shape)).reshape(-1)

    sol = solve_ivp(flat_rhs, span, y0.reshape(-1), method="DOP853",
                    rtol=max(spec.rel_tol, 1e-13), atol=spec.abs_tol,
                    dense_output=False)
    if not sol.success:
        raise StiffnessError(f"ODE integration failed: {sol.message}")
    return sol.y[:, -1].reshape(shape)
