"""Real gamma function and the named constants of the stable operator.

All functions accept either a plain float or a :class:`StableIndex` for the
stability exponent.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

from ._quad import tanh_sinh

__all__ = [
    "PoleError",
    "StableIndex",
    "ConstantSet",
    "as_index",
    "gamma",
    "constants",
    "levy_constant",
    "green_constant",
    "omega",
    "hardy_constant",
    "k_alpha",
    "k_alpha_quadrature",
    "k_alpha_closed",
    "harmonic_offset",
]

ALPHA_GUARD = 1e-3


class PoleError(ValueError):
    """Raised when the gamma function is evaluated at a pole."""


@dataclass(frozen=True)
class StableIndex:
    """Stability exponent restricted to ``[1 + guard, 2 - guard]``."""

    alpha: float
    guard: float = ALPHA_GUARD

    def __post_init__(self):
        a = float(self.alpha)
        if not (1.0 + self.guard <= a <= 2.0 - self.guard):
            raise ValueError(
                f"alpha={a} outside the admissible band "
                f"[{1 + self.guard}, {2 - self.guard}]")
        object.__setattr__(self, "alpha", a)

    def __float__(self):
        return self.alpha


def as_index(alpha):
    """Validate ``alpha`` and return it as a float."""
    if isinstance(alpha, StableIndex):
        return alpha.alpha
    return StableIndex(alpha).alpha


def gamma(x):
    """Gamma function of a real argument.

    Negative non-integer arguments go through the reflection formula
    ``Gamma(x) Gamma(1 - x) = pi / sin(pi x)``.

    Raises
    ------
    PoleError
        If ``x`` is zero or a negative integer.
    """
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"gamma has a pole at {x}")
    if x < 0.5:
        # sin(pi x) computed from the distance to the nearest integer
        r = x - round(x)
        s = math.sin(math.pi * r) * (-1.0 if round(x) % 2 else 1.0)
        return math.pi / (s * math.gamma(1.0 - x))
    return math.gamma(x)


def levy_constant(alpha):
    """Normalising constant of the jump kernel ``C / |z|^(1+alpha)``."""
    a = as_index(alpha)
    return (a * 2.0 ** (a - 1.0) * gamma((a + 1.0) / 2.0)
            / (math.sqrt(math.pi) * gamma(1.0 - a / 2.0)))


def green_constant(alpha):
    """Prefactor of the Green function of the process killed on [-1, 1]."""
    a = as_index(alpha)
    return 2.0 ** (1.0 - a) / gamma(a / 2.0) ** 2


def omega(alpha):
    """``-1 / (cos(pi alpha / 2) Gamma(alpha))``, positive for alpha in (1, 2)."""
    a = as_index(alpha)
    return -1.0 / (math.cos(math.pi * a / 2.0) * gamma(a))


def hardy_constant(alpha):
    """Constant of the Hardy-Rellich inequality used for the part form."""
    a = as_index(alpha)
    return 2.0 ** a * gamma((1.0 + a) / 4.0) / gamma((1.0 - a) / 4.0) ** 2


def _k_prefactor(a):
    return (2.0 ** (2.0 - a) * (1.0 - a / 2.0)
            / (gamma(1.0 - a / 2.0) * gamma(a / 2.0)))


def k_alpha_quadrature(alpha, tol=1e-14):
    """K_alpha from its defining integral of ``h'(v) / (1 + v)`` over (1, inf).

    The integral is split at v = 2.  On [1, 2] the tanh-sinh rule absorbs the
    algebraic singularity at v = 1; on [2, inf) the map v = 2 / t turns the
    algebraic tail into an endpoint singularity at t = 0; the leading power
    of the tail is integrated in closed form first, which keeps the rule
    accurate as alpha approaches 2.
    """
    a = as_index(alpha)
    s = a / 2.0 - 1.0

    def head(u):
        # v = 1 + u
        return (u * (2.0 + u)) ** s / (2.0 + u)

    def tail(t):
        # remainder after removing the leading power v^(2s-1), integrated below
        v = 2.0 / t
        return ((v * v - 1.0) ** s / (1.0 + v) - v ** (2.0 * s - 1.0)) * 2.0 / (t * t)

    i1, _ = tanh_sinh(head, 1.0, tol=tol)
    i2, _ = tanh_sinh(tail, 1.0, tol=tol)
    i2 += 2.0 ** (2.0 * s) / (-2.0 * s)
    return _k_prefactor(a) * (i1 + i2)


def k_alpha_closed(alpha):
    """Beta-integral reduction ``Gamma(2 - alpha) / Gamma(1 - alpha/2)^2``."""
    a = as_index(alpha)
    return gamma(2.0 - a) / gamma(1.0 - a / 2.0) ** 2


k_alpha = k_alpha_quadrature


def harmonic_offset(alpha):
    """Limit of ``x^(alpha-1) - (alpha-1) h(x)`` as ``x -> inf``.

    Equals ``Gamma(alpha/2) Gamma((3-alpha)/2) / sqrt(pi)``; it fixes the
    constant term in the large-argument expansion of ``h``.
    """
    a = as_index(alpha)
    return gamma(a / 2.0) * gamma((3.0 - a) / 2.0) / math.sqrt(math.pi)


@dataclass(frozen=True)
class ConstantSet:
    C_alpha: float
    c_alpha: float
    omega_alpha: float
    kappa: float
    K_alpha: float


@lru_cache(maxsize=256)
def _constants(a):
    return ConstantSet(
        C_alpha=levy_constant(a),
        c_alpha=green_constant(a),
        omega_alpha=omega(a),
        kappa=hardy_constant(a),
        K_alpha=k_alpha_quadrature(a),
    )


def constants(alpha):
    """All named constants for one stability exponent."""
    return _constants(as_index(alpha))
