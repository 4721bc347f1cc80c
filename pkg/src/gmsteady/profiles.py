"""Smooth radial decay profiles with exact derivative algebra.

Two families are used everywhere in this package:

* ``W(rate=a)``: exp(-a*sqrt(1+r^2)), a smooth stand-in for exponential
  decay e^{-a r};
* ``Z(rate=a)``: (1+r^2)^(-a/2), a smooth stand-in for algebraic decay
  r^{-a}.

Both are C^infinity on all of R^N, radial, and admit closed-form
Laplacians, which is what makes them usable as sub/super-solution
barriers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = ["BarrierFamily", "BarrierProfile", "eval_barrier"]


class BarrierFamily(Enum):
    W = "W"
    Z = "Z"


@dataclass(frozen=True)
class BarrierProfile:
    """A decay profile: family W (exponential) or Z (algebraic) with a rate.

    The rate must be positive for the W family.  The Z family admits
    rate 0 as the degenerate constant profile (used to tag fields with
    a non-decaying far-field model).
    """

    family: BarrierFamily
    rate: float

    def __post_init__(self) -> None:
        if self.family is BarrierFamily.W and not self.rate > 0:
            raise ValueError(f"W profile requires rate > 0, got {self.rate}")
        if self.family is BarrierFamily.Z and self.rate < 0:
            raise ValueError(f"Z profile requires rate >= 0, got {self.rate}")


def eval_barrier(profile: BarrierProfile, x_norm):
    """Evaluate the profile at radius ``x_norm`` (scalar or array).

    W(a): exp(-a*sqrt(1+r^2));  Z(a): (1+r^2)^(-a/2).
    """
    r = np.asarray(x_norm, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be nonnegative")
    u = 1.0 + r * r
    if profile.family is BarrierFamily.W:
        out = np.exp(-profile.rate * np.sqrt(u))
    else:
        out = u ** (-profile.rate / 2.0)
    if np.isscalar(x_norm) or np.ndim(x_norm) == 0:
        return float(out)
    return out
