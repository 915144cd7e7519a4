"""Pointwise constitutive functions: double well, restriction function, mobility.

All functions accept scalars or numpy arrays and broadcast elementwise.
The double-well height omega and mobility scale mu are fixed by the
nondimensionalization (omega = 72 makes the equilibrium profile
u = (1 + tanh(3 x / eps)) / 2 and normalizes the interface energy to 1).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OMEGA_DW = 72.0
MU = 36.0


class SingularityError(ValueError):
    """Unregularized evaluation at a pure phase (alpha = 0, u in {0, 1})."""


@dataclass(frozen=True)
class WellParams:
    omega_dw: float = OMEGA_DW


@dataclass(frozen=True)
class RestrictionParams:
    p: float
    xi: float
    alpha: float
    epsilon: float


@dataclass(frozen=True)
class MobilityParams:
    alpha: float
    epsilon: float
    mu: float = MU


def f(u, omega=OMEGA_DW):
    """Double-well energy density (omega/4) u^2 (1-u)^2."""
    u = np.asarray(u, dtype=float)
    return 0.25 * omega * u**2 * (1.0 - u) ** 2


def f_prime(u, omega=OMEGA_DW):
    u = np.asarray(u, dtype=float)
    return 0.5 * omega * u * (1.0 - u) * (1.0 - 2.0 * u)


def f_double_prime(u, omega=OMEGA_DW):
    u = np.asarray(u, dtype=float)
    return 0.5 * omega * (1.0 - 6.0 * u + 6.0 * u**2)


def _well_power(u, p):
    """W^p and its first two u-derivatives, W(u) = u^2 (1-u)^2.

    p = 0, 1, 2 are handled exactly (polynomial); fractional p uses the
    generic power rule with the W = 0 limit patched to zero (valid for
    p > 1/2; smaller fractional p has a genuinely unbounded derivative
    at the pure phases and is only evaluated away from them).
    """
    u = np.asarray(u, dtype=float)
    W = u**2 * (1.0 - u) ** 2
    dW = 2.0 * u * (1.0 - u) * (1.0 - 2.0 * u)
    d2W = 2.0 * (1.0 - 6.0 * u + 6.0 * u**2)
    if p == 0:
        one = np.ones_like(W)
        return one, np.zeros_like(W), np.zeros_like(W)
    if p == 1:
        return W, dW, d2W
    if p == 2:
        return W**2, 2.0 * W * dW, 2.0 * (dW**2 + W * d2W)
    with np.errstate(divide="ignore", invalid="ignore"):
        Wp = W**p
        dWp = p * W ** (p - 1.0) * dW
        d2Wp = p * (p - 1.0) * W ** (p - 2.0) * dW**2 + p * W ** (p - 1.0) * d2W
    zero = W == 0.0
    if np.any(zero):
        dWp = np.where(zero, 0.0, dWp)
        d2Wp = np.where(zero, 0.0, d2Wp)
    return Wp, dWp, d2Wp


def _check_regularized(u, params: RestrictionParams):
    if params.alpha == 0.0:
        u = np.asarray(u, dtype=float)
        if np.any((u == 0.0) | (u == 1.0)):
            raise SingularityError(
                "restriction function is singular at u in {0, 1} for alpha = 0"
            )


def g_alpha(u, params: RestrictionParams):
    """Regularized restriction function 1 / sqrt(xi^2 (u^2(1-u)^2)^p + a^2 e^2)."""
    _check_regularized(u, params)
    Wp, _, _ = _well_power(u, params.p)
    inner = params.xi**2 * Wp + (params.alpha * params.epsilon) ** 2
    return inner**-0.5


def g_alpha_prime(u, params: RestrictionParams):
    _check_regularized(u, params)
    Wp, dWp, _ = _well_power(u, params.p)
    inner = params.xi**2 * Wp + (params.alpha * params.epsilon) ** 2
    return -0.5 * inner**-1.5 * params.xi**2 * dWp


def g_alpha_double_prime(u, params: RestrictionParams):
    _check_regularized(u, params)
    Wp, dWp, d2Wp = _well_power(u, params.p)
    x2 = params.xi**2
    inner = x2 * Wp + (params.alpha * params.epsilon) ** 2
    return 0.75 * inner**-2.5 * (x2 * dWp) ** 2 - 0.5 * inner**-1.5 * x2 * d2Wp


def restriction_lhs(u, p, xi):
    """Non-variational left-hand factor xi |u|^p |1-u|^p."""
    u = np.asarray(u, dtype=float)
    if p == 0:
        return xi * np.ones_like(u)
    return xi * np.abs(u) ** p * np.abs(1.0 - u) ** p


def mobility(u, params: MobilityParams):
    """Degenerate mobility mu u^2 (1-u)^2 + alpha eps (nonnegative for all u)."""
    u = np.asarray(u, dtype=float)
    return params.mu * u**2 * (1.0 - u) ** 2 + params.alpha * params.epsilon
