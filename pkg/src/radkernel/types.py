"""Small immutable value types shared across the package."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

XI_CLAMP = 1e-12


@dataclass(frozen=True)
class ComplexEval:
    """A complex value with an absolute error estimate and a method tag."""

    value: complex
    err: float
    method: str

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        object.__setattr__(self, "err", float(self.err))
        if self.err < 0 or (math.isnan(self.err)):
            raise ValueError(f"error estimate must be nonnegative, got {self.err}")


@dataclass(frozen=True)
class KernelParams:
    """Deformation parameter a and dimension m of the kernel K_a^m."""

    a: float
    m: int
    lam: float = field(init=False)
    prefactor: float = field(init=False)

    def __post_init__(self):
        a = float(self.a)
        if not (math.isfinite(a) and a > 0):
            raise DomainError(f"a must be positive and finite, got {self.a}")
        if int(self.m) != self.m or self.m < 2:
            raise DomainError(f"m must be an integer >= 2, got {self.m}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "m", int(self.m))
        lam = 0.5 * (self.m - 2)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(
            self, "prefactor", math.exp(2 * lam / a * math.log(a) + math.lgamma((2 * lam + a) / a))
        )

    def z_a(self, z):
        """Bessel argument (2/a) z^(a/2)."""
        return 2.0 / self.a * np.power(z, 0.5 * self.a)


@dataclass(frozen=True)
class GeomPoint:
    """Reduced coordinates z = |x||y| and xi = <x,y>/z of a kernel argument pair."""

    z: float
    xi: float

    def __post_init__(self):
        z, xi = float(self.z), float(self.xi)
        if not (math.isfinite(z) and math.isfinite(xi)):
            raise DomainError("non-finite geometry")
        if z < 0:
            raise DomainError(f"z must be nonnegative, got {z}")
        if abs(xi) > 1.0 + XI_CLAMP:
            raise DomainError(f"xi must lie in [-1, 1], got {xi}")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "xi", max(-1.0, min(1.0, xi)))

    @property
    def theta(self):
        return math.acos(self.xi)

    @classmethod
    def from_theta(cls, z, theta):
        return cls(z, math.cos(theta))


@dataclass(frozen=True)
class PrabhakarParams:
    """Parameters (alpha, beta, delta) of the Prabhakar function."""

    alpha: float
    beta: float
    delta: float

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise DomainError(f"delta must be positive, got {self.delta}")
        if not math.isfinite(self.beta):
            raise DomainError("beta must be finite")


@dataclass(frozen=True)
class ContourSpec:
    """Hankel-type contour: arc of radius epsilon and rays at angles +-mu."""

    epsilon: float
    mu: float

    def check(self, alpha):
        lo, hi = 0.5 * math.pi * alpha, min(math.pi, math.pi * alpha)
        if not (self.epsilon > 0):
            raise DomainError("contour radius must be positive")
        if not (lo < self.mu < hi):
            raise DomainError(f"mu={self.mu} outside the admissible window ({lo:.6f}, {hi:.6f}) for alpha={alpha}")
