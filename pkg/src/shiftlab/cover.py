"""Exact arithmetic on the universal cover of the circle of charge directions.

A point of the cover is a :class:`LiftedRay`: a primitive integer vector
``u = (a, b)`` together with a sheet index ``m``.  Its phase is
``arg(u)/pi + 2m`` with ``arg(u)/pi`` in ``(-1, 1]``.  Phases are never
materialised as floats on a correctness path; every comparison reduces to
integer sign tests.

Charges ``(r, d)`` (rank, degree) map to the plane by ``Z(r, d) = -d + i r``,
so ``u = (-d, r)`` and coherent sheaves have phases in ``(0, 1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

__all__ = [
    "ChargeVector",
    "LiftedRay",
    "GeneratorLetter",
    "FunctorWord",
    "SL2ZMatrix",
    "Classification",
    "PHASE_ZERO",
    "SKYSCRAPER",
    "ray_from_sheaf_class",
    "compare_phases",
    "shift_ray",
    "displacement",
    "apply_letter",
    "apply_word",
    "letter_matrix",
    "word_matrix",
    "classify",
    "heart_degree",
]


@dataclass(frozen=True, slots=True)
class ChargeVector:
    """A class ``(r, d)`` in the charge lattice ``Z^2``."""

    r: int
    d: int

    def __post_init__(self):
        if self.r == 0 and self.d == 0:
            raise ValueError("charge vector (0, 0) is not allowed")

    @property
    def in_sheaf_cone(self) -> bool:
        return self.r > 0 or (self.r == 0 and self.d > 0)

    @property
    def is_primitive(self) -> bool:
        return math.gcd(self.r, self.d) == 1

    def primitive(self) -> ChargeVector:
        g = math.gcd(self.r, self.d)
        return ChargeVector(self.r // g, self.d // g)

    def __neg__(self) -> ChargeVector:
        return ChargeVector(-self.r, -self.d)


def _half(a: int, b: int) -> int:
    # Position of arg(a, b) within (-pi, pi]: lower half-plane, positive
    # real axis, upper half-plane, negative real axis.
    if b < 0:
        return 0
    if b == 0:
        return 1 if a > 0 else 3
    return 2


@dataclass(frozen=True, slots=True)
class LiftedRay:
    """A point ``arg(a, b)/pi + 2m`` of the universal cover."""

    a: int
    b: int
    m: int = 0

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise ValueError("ray direction must be nonzero")
        if math.gcd(self.a, self.b) != 1:
            raise ValueError(f"ray direction ({self.a}, {self.b}) is not primitive")

    @property
    def u(self) -> tuple[int, int]:
        return (self.a, self.b)

    def phase_float(self) -> float:
        """Approximate phase, for display and float oracles only."""
        return math.atan2(self.b, self.a) / math.pi + 2 * self.m

    def shifted(self, k: int) -> LiftedRay:
        return shift_ray(self, k)

    def __lt__(self, other: LiftedRay) -> bool:
        return compare_phases(self, other) < 0

    def __le__(self, other: LiftedRay) -> bool:
        return compare_phases(self, other) <= 0

    def __gt__(self, other: LiftedRay) -> bool:
        return compare_phases(self, other) > 0

    def __ge__(self, other: LiftedRay) -> bool:
        return compare_phases(self, other) >= 0

    def __str__(self) -> str:
        return f"ray({self.a},{self.b};{self.m})"


def _ray(a: int, b: int, m: int) -> LiftedRay:
    # Letters preserve primitivity, so skip the gcd check on the hot path.
    r = object.__new__(LiftedRay)
    object.__setattr__(r, "a", a)
    object.__setattr__(r, "b", b)
    object.__setattr__(r, "m", m)
    return r


PHASE_ZERO = LiftedRay(1, 0, 0)
SKYSCRAPER = LiftedRay(-1, 0, 0)


def ray_from_sheaf_class(c: ChargeVector) -> LiftedRay:
    """The ray of ``Z(c)`` on sheet 0; phase lies in ``(0, 1]``."""
    if not c.in_sheaf_cone:
        raise ValueError(f"class ({c.r}, {c.d}) is not in the sheaf cone")
    g = math.gcd(c.r, c.d)
    return _ray(-c.d // g, c.r // g, 0)


def _alpha_cmp(a1: int, b1: int, a2: int, b2: int) -> int:
    h1, h2 = _half(a1, b1), _half(a2, b2)
    if h1 != h2:
        return -1 if h1 < h2 else 1
    if h1 in (1, 3):
        return 0
    cross = a1 * b2 - b1 * a2
    return (cross < 0) - (cross > 0)


def compare_phases(x: LiftedRay, y: LiftedRay) -> int:
    """Return -1, 0 or 1 as the phase of ``x`` is below, equal to or above ``y``."""
    if x.m != y.m:
        return -1 if x.m < y.m else 1
    return _alpha_cmp(x.a, x.b, y.a, y.b)


def _shift_up(x: LiftedRay) -> LiftedRay:
    # alpha(-u) = alpha(u) + 1 when alpha(u) <= 0, else alpha(u) - 1.
    if x.b > 0 or (x.b == 0 and x.a < 0):
        return _ray(-x.a, -x.b, x.m + 1)
    return _ray(-x.a, -x.b, x.m)


def _shift_down(x: LiftedRay) -> LiftedRay:
    if x.b > 0 or (x.b == 0 and x.a < 0):
        return _ray(-x.a, -x.b, x.m)
    return _ray(-x.a, -x.b, x.m - 1)


def _mukai(x: LiftedRay) -> LiftedRay:
    # Rotation by -pi/2; wraps past -1 when alpha(u) is in (-1, -1/2].
    a, b = x.a, x.b
    if b < 0 and a <= 0:
        return _ray(b, -a, x.m - 1)
    return _ray(b, -a, x.m)


def _mukai_inv(x: LiftedRay) -> LiftedRay:
    a, b = x.a, x.b
    if a < 0 and b >= 0:
        return _ray(-b, a, x.m + 1)
    return _ray(-b, a, x.m)


def _twist(x: LiftedRay) -> LiftedRay:
    # The shear keeps each open half-plane and fixes the real axis, so
    # the sheet never changes.
    return _ray(x.a - x.b, x.b, x.m)


def _twist_inv(x: LiftedRay) -> LiftedRay:
    return _ray(x.a + x.b, x.b, x.m)


def shift_ray(x: LiftedRay, k: int) -> LiftedRay:
    """``x + k`` exactly."""
    if k % 2:
        x = _shift_up(x)
        k -= 1
    return _ray(x.a, x.b, x.m + k // 2)


def displacement(y: LiftedRay, x: LiftedRay) -> int:
    """The integer ``k`` with ``y = x + k``; ``ValueError`` if none exists."""
    if (y.a, y.b) == (x.a, x.b):
        return 2 * (y.m - x.m)
    if (y.a, y.b) == (-x.a, -x.b):
        x1 = _shift_up(x)
        return 1 + 2 * (y.m - x1.m)
    raise ValueError(f"{y} is not an integer translate of {x}")


class GeneratorLetter(Enum):
    MUKAI = "mukai"
    MUKAI_INV = "mukai_inv"
    TWIST = "twist"
    TWIST_INV = "twist_inv"
    SHIFT_UP = "shift_up"
    SHIFT_DOWN = "shift_down"

    @property
    def inverse(self) -> GeneratorLetter:
        return _INVERSES[self]


_INVERSES = {
    GeneratorLetter.MUKAI: GeneratorLetter.MUKAI_INV,
    GeneratorLetter.MUKAI_INV: GeneratorLetter.MUKAI,
    GeneratorLetter.TWIST: GeneratorLetter.TWIST_INV,
    GeneratorLetter.TWIST_INV: GeneratorLetter.TWIST,
    GeneratorLetter.SHIFT_UP: GeneratorLetter.SHIFT_DOWN,
    GeneratorLetter.SHIFT_DOWN: GeneratorLetter.SHIFT_UP,
}

_ACTIONS = {
    GeneratorLetter.MUKAI: _mukai,
    GeneratorLetter.MUKAI_INV: _mukai_inv,
    GeneratorLetter.TWIST: _twist,
    GeneratorLetter.TWIST_INV: _twist_inv,
    GeneratorLetter.SHIFT_UP: _shift_up,
    GeneratorLetter.SHIFT_DOWN: _shift_down,
}


@dataclass(frozen=True, slots=True)
class FunctorWord:
    """A word in the generator letters, applied left to right.

    ``FunctorWord((A, B))`` means: apply ``A`` first, then ``B``.  The empty
    word is the identity functor.
    """

    letters: tuple[GeneratorLetter, ...] = ()

    def __init__(self, letters: Iterable[GeneratorLetter | str] = ()):
        object.__setattr__(
            self, "letters", tuple(GeneratorLetter(g) for g in letters)
        )

    @classmethod
    def of(cls, text: str) -> FunctorWord:
        """Build from space-separated letter names, e.g. ``"twist mukai"``."""
        return cls(text.split())

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[GeneratorLetter]:
        return iter(self.letters)

    def __add__(self, other: FunctorWord) -> FunctorWord:
        return FunctorWord(self.letters + other.letters)

    def __pow__(self, k: int) -> FunctorWord:
        if k < 0:
            return self.inverse() ** (-k)
        return FunctorWord(self.letters * k)

    def inverse(self) -> FunctorWord:
        return FunctorWord(g.inverse for g in reversed(self.letters))

    def __repr__(self) -> str:
        return f"FunctorWord({' '.join(g.value for g in self.letters)!r})"


@dataclass(frozen=True, slots=True)
class SL2ZMatrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant must be 1")

    def __matmul__(self, o: SL2ZMatrix) -> SL2ZMatrix:
        return SL2ZMatrix(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __neg__(self) -> SL2ZMatrix:
        return SL2ZMatrix(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, k: int) -> SL2ZMatrix:
        if k < 0:
            return self.inverse() ** (-k)
        out = IDENTITY
        for _ in range(k):
            out = self @ out
        return out

    def inverse(self) -> SL2ZMatrix:
        return SL2ZMatrix(self.d, -self.b, -self.c, self.a)

    @property
    def trace(self) -> int:
        return self.a + self.d

    def apply(self, v: Sequence[int]) -> tuple[int, int]:
        x, y = v
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]


IDENTITY = SL2ZMatrix(1, 0, 0, 1)

_MATRICES = {
    GeneratorLetter.MUKAI: SL2ZMatrix(0, 1, -1, 0),
    GeneratorLetter.MUKAI_INV: SL2ZMatrix(0, -1, 1, 0),
    GeneratorLetter.TWIST: SL2ZMatrix(1, -1, 0, 1),
    GeneratorLetter.TWIST_INV: SL2ZMatrix(1, 1, 0, 1),
    GeneratorLetter.SHIFT_UP: SL2ZMatrix(-1, 0, 0, -1),
    GeneratorLetter.SHIFT_DOWN: SL2ZMatrix(-1, 0, 0, -1),
}


def apply_letter(g: GeneratorLetter, x: LiftedRay) -> LiftedRay:
    return _ACTIONS[g](x)


def apply_word(w: FunctorWord, x: LiftedRay) -> LiftedRay:
    for g in w.letters:
        x = _ACTIONS[g](x)
    return x


def letter_matrix(g: GeneratorLetter) -> SL2ZMatrix:
    """Charge action of ``g`` on ``u = (-d, r)`` column vectors."""
    return _MATRICES[g]


def word_matrix(w: FunctorWord) -> SL2ZMatrix:
    out = IDENTITY
    for g in w.letters:
        out = _MATRICES[g] @ out
    return out


@dataclass(frozen=True)
class Classification:
    kind: str  # plus_identity, minus_identity, elliptic, parabolic, hyperbolic
    order: int | None = None

    def __str__(self) -> str:
        if self.kind == "elliptic":
            return f"elliptic order {self.order}"
        return self.kind


# trace -> order of an elliptic element of SL(2, Z)
_ELLIPTIC_ORDERS = {0: 4, 1: 6, -1: 3}


def classify(M: SL2ZMatrix) -> Classification:
    t = M.trace
    if M == IDENTITY:
        return Classification("plus_identity")
    if M == -IDENTITY:
        return Classification("minus_identity")
    if abs(t) < 2:
        return Classification("elliptic", _ELLIPTIC_ORDERS[t])
    if abs(t) == 2:
        return Classification("parabolic")
    return Classification("hyperbolic")


def heart_degree(x: LiftedRay, s: LiftedRay) -> int:
    """The integer ``k`` with ``phase(x) - phase(s)`` in ``(k, k+1]``."""
    # delta: directed angle from s to x in (-1, 1]; the true difference is
    # delta + 2e for the e that matches the order of alpha(x), alpha(s).
    cross = s.a * x.b - s.b * x.a
    positive = cross > 0 or (cross == 0 and s.a * x.a + s.b * x.b < 0)
    order = _alpha_cmp(x.a, x.b, s.a, s.b)
    k = 2 * (x.m - s.m)
    if positive:
        return k - 2 if order < 0 else k
    return k + 1 if order > 0 else k - 1
