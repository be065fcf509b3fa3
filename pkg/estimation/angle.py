"""
Modular arithmetic for phases

All angles are understood modulo 2π. ``Angle`` keeps the canonical
representative in [0, 2π); ``wrapped_abs`` is the distance to 0 on the
circle, π − |θ mod 2π − π|.
"""

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from utils.exceptions import InvalidArgumentError

TWO_PI = 2.0 * math.pi

# 2**j must stay an exact machine integer
MAX_LEVEL = 62


def _wrap_value(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise InvalidArgumentError(f"angle must be finite, got {x!r}")
    r = x - TWO_PI * math.floor(x / TWO_PI)
    # x slightly below a multiple of 2π can round up to exactly 2π
    if r >= TWO_PI or r < 0.0:
        return 0.0
    return r


class Angle(float):
    """A float held in [0, 2π); arithmetic between angles stays wrapped."""

    def __new__(cls, value: float = 0.0):
        return super().__new__(cls, _wrap_value(value))

    def __add__(self, other):
        return Angle(float(self) + float(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Angle(float(self) - float(other))

    def __rsub__(self, other):
        return Angle(float(other) - float(self))

    def __neg__(self):
        return Angle(-float(self))

    def __mul__(self, other):
        return Angle(float(self) * float(other))

    __rmul__ = __mul__

    def signed(self) -> float:
        """Representative in [-π, π)"""
        return reference_angle(self)

    def __repr__(self) -> str:
        return f"Angle({float(self)!r})"


def wrap(x: float) -> Angle:
    """Canonical representative of x in [0, 2π)."""
    return Angle(x)


def reference_angle(x: float) -> float:
    """Representative of x in [-π, π)."""
    r = _wrap_value(x)
    return r - TWO_PI if r >= math.pi else r


def wrapped_abs(theta: float) -> float:
    """Distance from theta to 0 modulo 2π, in [0, π]."""
    return math.pi - abs(_wrap_value(theta) - math.pi)


def angular_distance(a: float, b: float) -> float:
    return wrapped_abs(float(a) - float(b))


@dataclass(frozen=True)
class CandidateSet:
    """
    The 2**level angles whose 2**level-fold multiple equals ``base``.

    Members are (2kπ + base) / 2**level for k = 0, ..., 2**level - 1 and are
    produced lazily; nothing here enumerates the whole set unless asked.
    """
    level: int
    base: Angle

    def __post_init__(self):
        if isinstance(self.level, bool) or not isinstance(self.level, (int, np.integer)):
            raise InvalidArgumentError(f"level must be an integer, got {self.level!r}")
        if not 0 <= self.level <= MAX_LEVEL:
            raise InvalidArgumentError(f"level must be in [0, {MAX_LEVEL}], got {self.level}")
        object.__setattr__(self, "level", int(self.level))
        object.__setattr__(self, "base", Angle(self.base))

    @property
    def size(self) -> int:
        return 1 << self.level

    @property
    def spacing(self) -> float:
        return TWO_PI / self.size

    def member(self, k: int) -> Angle:
        if not 0 <= k < self.size:
            raise InvalidArgumentError(f"candidate index {k} outside [0, {self.size})")
        return Angle((TWO_PI * k + float(self.base)) / self.size)

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[Angle]:
        for k in range(self.size):
            yield self.member(k)

    def contains(self, theta: float, atol: float = 1e-9) -> bool:
        """True when wrap(2**level * theta) equals base within atol."""
        return angular_distance(self.size * float(theta), self.base) <= atol


def candidate_set(arg_z: float, j: int) -> CandidateSet:
    """Candidate set for level j built from arg Z_j."""
    return CandidateSet(level=j, base=Angle(arg_z))


def nearest_candidate(candidates: CandidateSet, theta_prev: float) -> Angle:
    """
    Member of ``candidates`` closest to ``theta_prev`` on the circle.

    Only the two lattice points bracketing 2**j * theta_prev are compared;
    on an exact tie the smaller k wins.
    """
    size = candidates.size
    x = (size * float(theta_prev) - float(candidates.base)) / TWO_PI
    lo = math.floor(x)

    best_k, best_d = -1, math.inf
    for k in sorted({lo % size, (lo + 1) % size}):
        d = angular_distance(candidates.member(k), theta_prev)
        if d < best_d:
            best_k, best_d = k, d
    return candidates.member(best_k)
