"""Shifting numbers, their heart and Ext-distance limits, and the product model.

The exact shifting number of a word is the translation number of its lifted
action on the cover.  Lifts commute with the unit shift, so the classical
estimate ``|f^n(x) - x - n tau| < 1`` holds for every ray ``x``; all limit
enclosures below are derived from it and are certified without floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .cover import (
    PHASE_ZERO,
    SKYSCRAPER,
    Classification,
    FunctorWord,
    LiftedRay,
    SL2ZMatrix,
    apply_word,
    classify,
    displacement,
    heart_degree,
    word_matrix,
)
from .model import (
    COH,
    DObject,
    ExtTable,
    HeartCut,
    apply_word_obj,
    eps_minus,
    eps_plus,
    ext_table,
    phi_minus,
    phi_plus,
    standard_generator,
)

__all__ = [
    "HEART_OFFSET",
    "EXT_OFFSET",
    "TauResult",
    "EntropyBound",
    "SpreadReport",
    "ProductWord",
    "orbit",
    "tau_exact",
    "tau_heart_limit",
    "tau_ext_limit",
    "tilde_tau",
    "entropy_lower_bound",
    "ext_growth_entropy",
    "spread_report",
    "convergence_rows",
    "product_phi_plus",
    "product_phi_minus",
    "product_ext_table",
    "product_eps",
    "product_tau",
    "product_tilde_tau",
    "product_spread",
]

# Poincare estimate (< 1) plus the phase spread of a heart-contained generator (< 1).
HEART_OFFSET = 2
# Two Poincare-type offsets, the policy discrepancy and the duality offset.
EXT_OFFSET = 4


@dataclass(frozen=True)
class TauResult:
    value: Fraction
    method: str  # exact, heart_limit, ext_limit
    lower: Fraction
    upper: Fraction
    classification: Classification | None = None
    n: int | None = None
    ratios: tuple[Fraction, ...] = ()
    raw: tuple[int, ...] = ()

    def contains(self, tau: Fraction) -> bool:
        return self.lower <= tau <= self.upper


@dataclass(frozen=True)
class EntropyBound:
    t: Fraction
    n: int
    lower_bound: Fraction


@dataclass(frozen=True)
class SpreadReport:
    n_F: int
    max_degree: int
    spread: int
    dim: int = 1

    @property
    def within_bound(self) -> bool:
        return self.spread <= 3 * self.dim


@dataclass(frozen=True)
class ProductWord:
    """External product ``F_1 x ... x F_d`` acting factorwise on ``E^d``."""

    factors: tuple[FunctorWord, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("a product word needs at least one factor")

    @property
    def dim(self) -> int:
        return len(self.factors)

    def __add__(self, other: ProductWord) -> ProductWord:
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return ProductWord(tuple(a + b for a, b in zip(self.factors, other.factors)))


def orbit(w: FunctorWord, E: DObject, N: int) -> Iterator[tuple[int, DObject]]:
    """Yield ``(n, F^n E)`` for ``n = 0..N``."""
    obj = E
    yield 0, obj
    for n in range(1, N + 1):
        obj = apply_word_obj(w, obj)
        yield n, obj


def _fixed_ray(M: SL2ZMatrix) -> LiftedRay:
    # Kernel of M - (tr/2) I, which has rank one for a parabolic M.
    lam = M.trace // 2
    p, q, r, s = M.a - lam, M.b, M.c, M.d - lam
    v = (q, -p) if (p, q) != (0, 0) else (s, -r)
    g = math.gcd(*v)
    return LiftedRay(v[0] // g, v[1] // g, 0)


def tau_exact(w: FunctorWord) -> TauResult:
    """Exact translation number of the lifted action of ``w``."""
    M = word_matrix(w)
    cl = classify(M)
    if cl.kind in ("plus_identity", "minus_identity"):
        tau = Fraction(displacement(apply_word(w, SKYSCRAPER), SKYSCRAPER))
    elif cl.kind == "elliptic":
        y = apply_word(w ** cl.order, SKYSCRAPER)
        tau = Fraction(displacement(y, SKYSCRAPER), cl.order)
    elif cl.kind == "parabolic":
        x = _fixed_ray(M)
        tau = Fraction(displacement(apply_word(w, x), x))
    else:
        tau = Fraction(_hyperbolic_tau(w, M))
    return TauResult(tau, "exact", tau, tau, classification=cl)


def _hyperbolic_tau(w: FunctorWord, M: SL2ZMatrix) -> int:
    # Real eigenlines are invariant, so tau is an integer; it is even when
    # the eigenvalues are positive and odd otherwise.
    parity = 0 if M.trace > 2 else 1
    x = y = SKYSCRAPER
    n = 0
    while True:
        n += 1
        y = apply_word(w, y)
        k = heart_degree(y, x)  # f^n(x) - x in (k, k+1]
        lo, hi = Fraction(k - 1, n), Fraction(k + 2, n)
        cands = [
            j for j in range(math.floor(lo), math.ceil(hi) + 1)
            if lo < j < hi and j % 2 == parity
        ]
        if len(cands) == 1:
            return cands[0]


def _heart_sequence(w, A, G, N, sign):
    phi = phi_plus if sign == "plus" else phi_minus
    return [phi(A, obj) for n, obj in orbit(w, G, N) if n > 0]


def tau_heart_limit(
    w: FunctorWord,
    A: HeartCut = COH,
    G: DObject | None = None,
    N: int = 32,
    sign: str = "plus",
) -> TauResult:
    """Shifting number from ``phi(F^n G)/n`` for ``n = 1..N``.

    The enclosure at ``N`` is ``[(phi - p - 2)/N, (phi - p + 2)/N]`` with
    ``p = phi(G)``; for ``G`` in the heart ``p = 0``.
    """
    if N < 1:
        raise ValueError("N must be positive")
    G = standard_generator() if G is None else G
    p = (phi_plus if sign == "plus" else phi_minus)(A, G)
    degs = _heart_sequence(w, A, G, N, sign)
    ratios = tuple(Fraction(v, n) for n, v in enumerate(degs, 1))
    last = degs[-1] - p
    return TauResult(
        ratios[-1],
        "heart_limit",
        Fraction(last - HEART_OFFSET, N),
        Fraction(last + HEART_OFFSET, N),
        n=N,
        ratios=ratios,
        raw=tuple(degs),
    )


def ext_offset(G: DObject) -> int:
    """Certified ext-enclosure constant; 4 plus the Coh-spread of ``G``."""
    return EXT_OFFSET + phi_plus(COH, G) - phi_minus(COH, G)


def tau_ext_limit(
    w: FunctorWord,
    G: DObject | None = None,
    N: int = 32,
    sign: str = "plus",
    policy: str = "generic",
) -> TauResult:
    if N < 1:
        raise ValueError("N must be positive")
    G = standard_generator() if G is None else G
    eps = eps_plus if sign == "plus" else eps_minus
    vals = [eps(G, obj, policy) for n, obj in orbit(w, G, N) if n > 0]
    ratios = tuple(Fraction(v, n) for n, v in enumerate(vals, 1))
    c = ext_offset(G)
    return TauResult(
        ratios[-1],
        "ext_limit",
        Fraction(vals[-1] - c, N),
        Fraction(vals[-1] + c, N),
        n=N,
        ratios=ratios,
        raw=tuple(vals),
    )


def tilde_tau(w: FunctorWord, G: DObject | None = None) -> int:
    """``phi^+_Coh(F G)``; its homogenization is the shifting number."""
    G = standard_generator() if G is None else G
    return phi_plus(COH, apply_word_obj(w, G))


def entropy_lower_bound(
    w: FunctorWord, G: DObject | None, t, n: int, A: HeartCut = COH
) -> EntropyBound:
    """Lower bound for the categorical entropy ``h_t`` from ``n`` steps."""
    t = Fraction(t)
    if t == 0:
        raise ValueError("t = 0 gives no bound")
    if n < 1:
        raise ValueError("n must be positive")
    G = standard_generator() if G is None else G
    Fn = apply_word_obj(w ** n, G)
    if t > 0:
        k = phi_plus(A, Fn) - phi_plus(A, G)
    else:
        k = phi_minus(A, Fn) - phi_minus(A, G)
    return EntropyBound(t, n, t * Fraction(k, n))


def ext_growth_entropy(
    w: FunctorWord, G: DObject | None, t: float, n: int, policy: str = "generic"
) -> float:
    """Diagnostic: ``(1/n) log sum_k dim Ext^k(G, F^n G) e^{-kt}`` (approximate)."""
    if n < 1:
        raise ValueError("n must be positive")
    G = standard_generator() if G is None else G
    table = ext_table(G, apply_word_obj(w ** n, G), policy)
    terms = [math.log(v) - k * float(t) for k, v in table.items()]
    top = max(terms)
    return (top + math.log(sum(math.exp(x - top) for x in terms))) / n


def spread_report(w: FunctorWord) -> SpreadReport:
    """Range of Coh-degrees of ``F(E)`` over all sheaves ``E``.

    Sheaf phases fill ``(0, 1]``; the lift maps it onto ``(y, y + 1]`` with
    ``y = f(0)``, so the extremes are read off the two boundary rays.
    """
    y = apply_word(w, PHASE_ZERO)
    lo = heart_degree(y, PHASE_ZERO)
    if y.b == 0:
        # y sits at an integer phase; the open end is not attained.
        lo += 1
    hi = heart_degree(apply_word(w, SKYSCRAPER), PHASE_ZERO)
    return SpreadReport(lo, hi, hi - lo, 1)


def convergence_rows(
    w: FunctorWord,
    A: HeartCut = COH,
    G: DObject | None = None,
    N: int = 32,
    policy: str = "generic",
) -> list[dict]:
    """Per-n heart degrees, Ext-distances, ratios and heart enclosures."""
    G = standard_generator() if G is None else G
    p = phi_plus(A, G)
    rows = []
    for n, obj in orbit(w, G, N):
        if n == 0:
            continue
        pp, pm = phi_plus(A, obj), phi_minus(A, obj)
        ep, em = eps_plus(G, obj, policy), eps_minus(G, obj, policy)
        rows.append(
            {
                "n": n,
                "phi_plus": pp,
                "phi_minus": pm,
                "eps_plus": ep,
                "eps_minus": em,
                "phi_plus_ratio": Fraction(pp, n),
                "phi_minus_ratio": Fraction(pm, n),
                "eps_plus_ratio": Fraction(ep, n),
                "eps_minus_ratio": Fraction(em, n),
                "heart_lower": Fraction(pp - p - HEART_OFFSET, n),
                "heart_upper": Fraction(pp - p + HEART_OFFSET, n),
            }
        )
    return rows


# Product model: heart degrees and Ext degrees add across factors.

def product_phi_plus(A: HeartCut, objs: Sequence[DObject]) -> int:
    return sum(phi_plus(A, E) for E in objs)


def product_phi_minus(A: HeartCut, objs: Sequence[DObject]) -> int:
    return sum(phi_minus(A, E) for E in objs)


def product_ext_table(tables: Sequence[ExtTable]) -> ExtTable:
    out = ExtTable({0: 1})
    for t in tables:
        out = out.convolve(t)
    return out


def product_eps(tables: Sequence[ExtTable], sign: str = "plus") -> int:
    support = product_ext_table(tables).support
    return -min(support) if sign == "plus" else -max(support)


def product_tau(
    pw: ProductWord,
    method: str = "exact",
    A: HeartCut = COH,
    G: DObject | None = None,
    N: int = 32,
) -> TauResult:
    if method == "exact":
        tau = sum((tau_exact(f).value for f in pw.factors), Fraction(0))
        return TauResult(tau, "exact", tau, tau)
    if method != "heart_limit":
        raise ValueError(f"unknown method {method!r}")
    G = standard_generator() if G is None else G
    seqs = [_heart_sequence(f, A, G, N, "plus") for f in pw.factors]
    degs = [sum(col) for col in zip(*seqs)]
    p = pw.dim * phi_plus(A, G)
    ratios = tuple(Fraction(v, n) for n, v in enumerate(degs, 1))
    c = HEART_OFFSET * pw.dim
    return TauResult(
        ratios[-1],
        "heart_limit",
        Fraction(degs[-1] - p - c, N),
        Fraction(degs[-1] - p + c, N),
        n=N,
        ratios=ratios,
        raw=tuple(degs),
    )


def product_tilde_tau(pw: ProductWord, G: DObject | None = None) -> int:
    return sum(tilde_tau(f, G) for f in pw.factors)


def product_spread(pw: ProductWord) -> SpreadReport:
    parts = [spread_report(f) for f in pw.factors]
    lo = sum(p.n_F for p in parts)
    hi = sum(p.max_degree for p in parts)
    return SpreadReport(lo, hi, hi - lo, pw.dim)
