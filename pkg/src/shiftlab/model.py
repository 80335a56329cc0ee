"""Objects, hearts and Ext tables in the derived category of an elliptic curve.

Every object is a formal direct sum of shifted stable sheaves.  A stable
sheaf is remembered only by its primitive class ``(r, d)`` and an opaque
tag; its shifted position in the category is a :class:`LiftedRay`.
Autoequivalences send stables to stables, so applying a word to an object
moves each atom's ray and recomputes its class from the new direction.
"""

from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .cover import (
    PHASE_ZERO,
    ChargeVector,
    FunctorWord,
    LiftedRay,
    apply_word,
    heart_degree,
    ray_from_sheaf_class,
    shift_ray,
)

__all__ = [
    "Atom",
    "DObject",
    "HeartCut",
    "COH",
    "ExtTable",
    "NoHomError",
    "POLICIES",
    "atom",
    "standard_generator",
    "apply_word_obj",
    "phi_plus",
    "phi_minus",
    "heart_filtration",
    "assemble",
    "chi",
    "ext_dims",
    "ext_table",
    "eps_plus",
    "eps_minus",
]

POLICIES = ("generic", "isomorphic")


class NoHomError(ValueError):
    """Raised when two objects have no nonzero Hom in any degree."""


@dataclass(frozen=True, slots=True)
class Atom:
    """One shifted stable piece ``A[k]`` with multiplicity."""

    ray: LiftedRay
    cls: ChargeVector
    tag: str
    mult: int = 1
    shift: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.mult < 1:
            raise ValueError("multiplicity must be positive")
        if not (self.cls.in_sheaf_cone and self.cls.is_primitive):
            raise ValueError(f"class {self.cls} must be primitive in the sheaf cone")
        u = (-self.cls.d, self.cls.r)
        if self.ray.u != u and self.ray.u != (-u[0], -u[1]):
            raise ValueError(f"ray {self.ray} does not match class {self.cls}")
        # k with ray = ray_from_sheaf_class(cls) + k
        object.__setattr__(self, "shift", heart_degree(self.ray, PHASE_ZERO))

    def shifted(self, k: int) -> Atom:
        return Atom(shift_ray(self.ray, k), self.cls, self.tag, self.mult)


def atom(r: int, d: int, tag: str, shift: int = 0, mult: int = 1) -> Atom:
    cls = ChargeVector(r, d)
    return Atom(shift_ray(ray_from_sheaf_class(cls), shift), cls, tag, mult)


def _atom_key(a: Atom):
    return (a.tag, a.ray.m, a.ray.a, a.ray.b)


@dataclass(frozen=True)
class DObject:
    """A finite multiset of atoms; the empty multiset is the zero object."""

    atoms: tuple[Atom, ...] = ()

    def __init__(self, atoms: Iterable[Atom] = ()):
        merged: dict[tuple, Atom] = {}
        for a in atoms:
            key = (a.ray, a.tag)
            if key in merged:
                b = merged[key]
                merged[key] = Atom(b.ray, b.cls, b.tag, b.mult + a.mult)
            else:
                merged[key] = a
        object.__setattr__(self, "atoms", tuple(sorted(merged.values(), key=_atom_key)))

    @property
    def is_zero(self) -> bool:
        return not self.atoms

    def shifted(self, k: int) -> DObject:
        return DObject(a.shifted(k) for a in self.atoms)

    def __add__(self, other: DObject) -> DObject:
        return DObject(self.atoms + other.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)


@dataclass(frozen=True, slots=True)
class HeartCut:
    """The tilted heart of objects with phases in ``(s, s+1]``."""

    s: LiftedRay = PHASE_ZERO

    def degree(self, x: LiftedRay) -> int:
        return heart_degree(x, self.s)

    def __str__(self) -> str:
        return f"{self.s.a},{self.s.b},{self.s.m}"


COH = HeartCut(PHASE_ZERO)


def standard_generator(h: int = 3) -> DObject:
    """``O + O(h)`` for a line bundle ``O(h)`` of degree ``h``."""
    if h <= 0:
        raise ValueError(f"generator degree must be positive, got {h}")
    if h < 3:
        warnings.warn(
            f"degree {h} bundle is not very ample on an elliptic curve", stacklevel=2
        )
    return DObject([atom(1, 0, "O"), atom(1, h, f"O({h})")])


def _class_of_ray(ray: LiftedRay) -> ChargeVector:
    r, d = ray.b, -ray.a
    if r < 0 or (r == 0 and d < 0):
        r, d = -r, -d
    return ChargeVector(r, d)


def apply_word_obj(w: FunctorWord, E: DObject) -> DObject:
    out = []
    for a in E.atoms:
        ray = apply_word(w, a.ray)
        out.append(Atom(ray, _class_of_ray(ray), a.tag, a.mult))
    return DObject(out)


def _require_nonzero(E: DObject):
    if E.is_zero:
        raise ValueError("the zero object has no heart cohomology")


def phi_plus(A: HeartCut, E: DObject) -> int:
    _require_nonzero(E)
    return max(heart_degree(a.ray, A.s) for a in E.atoms)


def phi_minus(A: HeartCut, E: DObject) -> int:
    _require_nonzero(E)
    return min(heart_degree(a.ray, A.s) for a in E.atoms)


def heart_filtration(A: HeartCut, E: DObject) -> list[tuple[int, DObject]]:
    """Cohomology of ``E`` with respect to ``A``, highest degree first.

    Each piece is returned unshifted, so it lies in the heart; shifting it
    back by its degree and summing recovers ``E`` (see :func:`assemble`).
    """
    _require_nonzero(E)
    groups: dict[int, list[Atom]] = defaultdict(list)
    for a in E.atoms:
        k = heart_degree(a.ray, A.s)
        groups[k].append(a.shifted(-k))
    return [(k, DObject(groups[k])) for k in sorted(groups, reverse=True)]


def assemble(filtration: Iterable[tuple[int, DObject]]) -> DObject:
    out = DObject()
    for k, piece in filtration:
        out = out + piece.shifted(k)
    return out


@dataclass(frozen=True)
class ExtTable:
    """``dims[k] = dim Hom(E1, E2[k])``; only nonzero entries are stored."""

    dims: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {k: v for k, v in sorted(self.dims.items()) if v}
        if any(v < 0 for v in clean.values()):
            raise ValueError("ext dimensions must be nonnegative")
        object.__setattr__(self, "dims", clean)

    def __getitem__(self, k: int) -> int:
        return self.dims.get(k, 0)

    def __bool__(self) -> bool:
        return bool(self.dims)

    def items(self):
        return self.dims.items()

    @property
    def support(self) -> list[int]:
        return list(self.dims)

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def shifted(self, n: int) -> ExtTable:
        return ExtTable({k + n: v for k, v in self.dims.items()})

    def __add__(self, other: ExtTable) -> ExtTable:
        out = dict(self.dims)
        for k, v in other.dims.items():
            out[k] = out.get(k, 0) + v
        return ExtTable(out)

    def convolve(self, other: ExtTable) -> ExtTable:
        """Kunneth product: degrees add, dimensions multiply."""
        out: dict[int, int] = defaultdict(int)
        for k1, v1 in self.dims.items():
            for k2, v2 in other.dims.items():
                out[k1 + k2] += v1 * v2
        return ExtTable(out)


def chi(a: ChargeVector, b: ChargeVector) -> int:
    """Euler form ``r_a d_b - d_a r_b``."""
    return a.r * b.d - a.d * b.r


def _base_ext(a: Atom, b: Atom, policy: str) -> tuple[int, int]:
    # (dim Hom, dim Ext^1) between the unshifted stables.
    x = chi(a.cls, b.cls)
    if x > 0:
        return x, 0
    if x < 0:
        return 0, -x
    if a.cls != b.cls:
        return 0, 0
    if a.tag == b.tag or policy == "isomorphic":
        return 1, 1
    return 0, 0


def _accumulate(out: dict, a: Atom, b: Atom, policy: str):
    hom, ext1 = _base_ext(a, b, policy)
    mult = a.mult * b.mult
    offset = a.shift - b.shift
    if hom:
        out[offset] = out.get(offset, 0) + hom * mult
    if ext1:
        out[offset + 1] = out.get(offset + 1, 0) + ext1 * mult


def ext_dims(a: Atom, b: Atom, policy: str = "generic") -> ExtTable:
    """``dim Hom(a, b[k])`` for all ``k``.

    Stables of different classes have Homs in one degree only, fixed by the
    sign of the Euler form.  Stables of equal class are either the same
    object (same tag, or ``policy="isomorphic"``) or generic and orthogonal.
    """
    return ext_table(DObject([a]), DObject([b]), policy)


def ext_table(E1: DObject, E2: DObject, policy: str = "generic") -> ExtTable:
    """``dim Hom(E1, E2[k])``, summed over all pairs of atoms."""
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    out: dict[int, int] = {}
    for a in E1.atoms:
        for b in E2.atoms:
            _accumulate(out, a, b, policy)
    return ExtTable(out)


def _eps_degrees(table: ExtTable) -> list[int]:
    if not table:
        raise NoHomError("no nonzero Hom in any degree")
    return table.support


def eps_plus(E1: DObject, E2: DObject, policy: str = "generic") -> int:
    """Largest ``k`` with ``Hom(E1, E2[-k]) != 0``."""
    return -min(_eps_degrees(ext_table(E1, E2, policy)))


def eps_minus(E1: DObject, E2: DObject, policy: str = "generic") -> int:
    """Smallest ``k`` with ``Hom(E1, E2[-k]) != 0``."""
    return -max(_eps_degrees(ext_table(E1, E2, policy)))
