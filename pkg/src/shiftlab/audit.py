"""Randomized audit of the quasimorphism bound, the spread bound and the
per-n inequalities relating heart degrees to Ext-distances.

Each pair draws from its own RNG stream keyed by ``(seed, pair index)``, so
a report depends only on the seed and config, never on scheduling.
"""

from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cover import FunctorWord, GeneratorLetter
from .dynamics import (
    HEART_OFFSET,
    ProductWord,
    ext_offset,
    orbit,
    product_spread,
    product_tilde_tau,
    tau_exact,
    tilde_tau,
)
from .model import (
    COH,
    DObject,
    HeartCut,
    NoHomError,
    ext_table,
    heart_filtration,
    phi_minus,
    phi_plus,
    standard_generator,
)
from .wordtext import format_word

__all__ = [
    "REPORT_VERSION",
    "LETTERS",
    "WordSampler",
    "InequalityReport",
    "AuditReport",
    "sample_word",
    "sample_product_word",
    "defect",
    "tilde_defect",
    "product_defect",
    "product_tilde_defect",
    "inequality_suite",
    "audit_run",
]

REPORT_VERSION = 1
# Weight order for WordSampler.weights.
LETTERS = tuple(GeneratorLetter)
MAX_LISTED_VIOLATIONS = 100


@dataclass(frozen=True)
class WordSampler:
    seed: int = 0
    max_len: int = 16
    weights: tuple[Fraction, ...] = (Fraction(1),) * 6

    def __post_init__(self):
        if self.max_len < 1:
            raise ValueError("max_len must be positive")
        w = tuple(Fraction(x) for x in self.weights)
        if len(w) != len(LETTERS) or any(x < 0 for x in w) or not any(w):
            raise ValueError("need six nonnegative weights, not all zero")
        object.__setattr__(self, "weights", w)

    def rng(self, index: int = 0) -> random.Random:
        """Independent stream for one pair; str seeds hash deterministically."""
        return random.Random(f"shiftlab:{self.seed}:{index}")


def sample_word(sampler: WordSampler, rng: random.Random | None = None) -> FunctorWord:
    rng = sampler.rng() if rng is None else rng
    n = rng.randint(1, sampler.max_len)
    weights = [float(x) for x in sampler.weights]
    return FunctorWord(rng.choices(LETTERS, weights=weights, k=n))


def sample_product_word(
    sampler: WordSampler, d: int, rng: random.Random | None = None
) -> ProductWord:
    rng = sampler.rng() if rng is None else rng
    return ProductWord(tuple(sample_word(sampler, rng) for _ in range(d)))


def defect(w1: FunctorWord, w2: FunctorWord) -> Fraction:
    """``|tau(w1 w2) - tau(w1) - tau(w2)|`` with exact shifting numbers."""
    return abs(tau_exact(w1 + w2).value - tau_exact(w1).value - tau_exact(w2).value)


def tilde_defect(w1: FunctorWord, w2: FunctorWord, G: DObject | None = None) -> int:
    G = standard_generator() if G is None else G
    return abs(tilde_tau(w1 + w2, G) - tilde_tau(w1, G) - tilde_tau(w2, G))


def product_defect(p1: ProductWord, p2: ProductWord) -> Fraction:
    total = sum(
        (tau_exact(a + b).value - tau_exact(a).value - tau_exact(b).value
         for a, b in zip(p1.factors, p2.factors)),
        Fraction(0),
    )
    return abs(total)


def product_tilde_defect(p1: ProductWord, p2: ProductWord, G: DObject | None = None) -> int:
    return abs(
        product_tilde_tau(p1 + p2, G) - product_tilde_tau(p1, G) - product_tilde_tau(p2, G)
    )


@dataclass
class InequalityReport:
    """Margins ``(n, lower_margin, upper_margin)``; a negative margin is a failure."""

    margins: list[tuple[int, int, int]] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    envelope_failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def inequality_suite(
    w: FunctorWord,
    G: DObject | None = None,
    N: int = 16,
    A: HeartCut = COH,
    policy: str = "generic",
    tau: Fraction | None = None,
) -> InequalityReport:
    """Check, for each ``n <= N``,

    * ``phi^-(G) <= phi^+(F^n G) - eps^+(G, F^n G)``
    * ``phi^-(F^n G) - eps^-(G, F^n G) <= phi^+(G[1])``
    * ``Hom(a[1], b) = 0`` for heart pieces ``a, b`` of ``F^n G``.

    When ``tau`` is given, also check that it lies in the heart and Ext
    enclosures at every ``n`` and that ``|eps^+ - eps^-| <= c``; those
    failures are kept apart in ``envelope_failures``.
    """
    if N < 1:
        raise ValueError("N must be positive")
    G = standard_generator() if G is None else G
    rep = InequalityReport()
    g_minus = phi_minus(A, G)
    sg_plus = phi_plus(A, G.shifted(1))
    p_plus, p_minus = phi_plus(A, G), g_minus
    c1 = ext_offset(G)
    for n, obj in orbit(w, G, N):
        if n == 0:
            continue
        fp, fm = phi_plus(A, obj), phi_minus(A, obj)
        support = ext_table(G, obj, policy).support
        if not support:
            raise NoHomError("no nonzero Hom in any degree")
        ep, em = -support[0], -support[-1]
        m1 = fp - ep - g_minus
        m2 = sg_plus - (fm - em)
        rep.margins.append((n, m1, m2))
        if m1 < 0:
            rep.failures.append(f"n={n}: phi-(G)={g_minus} > phi+(F^nG)-eps+={fp - ep}")
        if m2 < 0:
            rep.failures.append(f"n={n}: phi-(F^nG)-eps-={fm - em} > phi+(SG)={sg_plus}")
        pieces = [a for _, piece in heart_filtration(A, obj) for a in piece]
        raised = DObject(a.shifted(1) for a in pieces)
        if ext_table(raised, DObject(pieces), policy)[0]:
            rep.failures.append(f"n={n}: Hom(A[1], B) != 0 for heart pieces of F^nG")
        if tau is not None:
            nt = n * tau
            checks = [
                ("heart+", fp - p_plus, HEART_OFFSET),
                ("heart-", fm - p_minus, HEART_OFFSET),
                ("ext+", ep, c1),
                ("ext-", em, c1),
            ]
            for name, val, c in checks:
                if not (val - c <= nt <= val + c):
                    rep.envelope_failures.append(f"n={n}: {name} enclosure misses tau={tau}")
            if abs(ep - em) > c1:
                rep.envelope_failures.append(f"n={n}: |eps+ - eps-| = {abs(ep - em)} > {c1}")
    return rep


@dataclass
class AuditReport:
    seed: int
    config: dict
    pairs_tested: int = 0
    max_tau_defect: Fraction = Fraction(0)
    max_tilde_defect: int = 0
    max_spread: int = 0
    inequality_violations: int = 0
    envelope_violations: int = 0
    bound_violations: int = 0
    tilde_histogram: Counter = field(default_factory=Counter)
    tau_histogram: Counter = field(default_factory=Counter)
    spread_histogram: Counter = field(default_factory=Counter)
    violations: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not (self.inequality_violations or self.envelope_violations or self.bound_violations)

    def to_json_dict(self) -> dict:
        d = self.config["dim"]
        return {
            "version": REPORT_VERSION,
            "seed": self.seed,
            "config": self.config,
            "results": {
                "pairs_tested": self.pairs_tested,
                "max_tau_defect": str(self.max_tau_defect),
                "max_tilde_defect": self.max_tilde_defect,
                "max_spread": self.max_spread,
                "asserted_bounds": {"tilde_defect": 6 * d, "tau_defect": 12 * d, "spread": 3 * d},
                "inequality_violations": self.inequality_violations,
                "envelope_violations": self.envelope_violations,
                "bound_violations": self.bound_violations,
                "passed": self.passed,
                "tilde_defect_histogram": {str(k): v for k, v in sorted(self.tilde_histogram.items())},
                "tau_defect_histogram": {str(k): v for k, v in sorted(self.tau_histogram.items())},
                "spread_histogram": {str(k): v for k, v in sorted(self.spread_histogram.items())},
                "violations": self.violations[:MAX_LISTED_VIOLATIONS],
            },
        }


def _evaluate_pair(job: tuple) -> dict:
    sampler, index, d, N, h, policy = job
    rng = sampler.rng(index)
    G = standard_generator(h)
    p1 = sample_product_word(sampler, d, rng)
    p2 = sample_product_word(sampler, d, rng)
    out = {
        "index": index,
        "words": [[format_word(f) for f in p.factors] for p in (p1, p2)],
        "tau_defect": product_defect(p1, p2),
        "tilde_defect": product_tilde_defect(p1, p2, G),
        "spreads": [product_spread(p).spread for p in (p1, p2)],
        "violations": [],
    }
    for p in (p1, p2):
        for f in p.factors:
            rep = inequality_suite(f, G, N, policy=policy, tau=tau_exact(f).value)
            for msg in rep.failures:
                out["violations"].append(("inequality", format_word(f), msg))
            for msg in rep.envelope_failures:
                out["violations"].append(("envelope", format_word(f), msg))
    if out["tilde_defect"] > 6 * d:
        out["violations"].append(("bound", "", f"tilde defect {out['tilde_defect']} > {6 * d}"))
    if out["tau_defect"] > 12 * d:
        out["violations"].append(("bound", "", f"tau defect {out['tau_defect']} > {12 * d}"))
    for s in out["spreads"]:
        if s > 3 * d:
            out["violations"].append(("bound", "", f"spread {s} > {3 * d}"))
    return out


def audit_run(
    sampler: WordSampler,
    pairs: int,
    d: int = 1,
    N: int = 16,
    generator_degree: int = 3,
    policy: str = "generic",
    workers: int = 1,
) -> AuditReport:
    """Audit ``pairs`` random pairs of ``d``-fold product words.

    Violations never abort the run; each is recorded with the pair index,
    which together with the seed reproduces it.
    """
    if pairs < 1:
        raise ValueError("pairs must be positive")
    if d < 1:
        raise ValueError("dimension must be positive")
    config = {
        "pairs": pairs,
        "max_len": sampler.max_len,
        "dim": d,
        "weights": [str(w) for w in sampler.weights],
        "inequality_n": N,
        "generator_degree": generator_degree,
        "policy": policy,
    }
    jobs = [(sampler, i, d, N, generator_degree, policy) for i in range(pairs)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_evaluate_pair, jobs, chunksize=max(1, pairs // (8 * workers))))
    else:
        results = [_evaluate_pair(j) for j in jobs]
    return _merge(sampler.seed, config, results)


def _merge(seed: int, config: dict, results: Sequence[dict]) -> AuditReport:
    rep = AuditReport(seed=seed, config=config)
    for r in sorted(results, key=lambda r: r["index"]):
        rep.pairs_tested += 1
        rep.max_tau_defect = max(rep.max_tau_defect, r["tau_defect"])
        rep.max_tilde_defect = max(rep.max_tilde_defect, r["tilde_defect"])
        rep.max_spread = max(rep.max_spread, *r["spreads"])
        rep.tilde_histogram[r["tilde_defect"]] += 1
        rep.tau_histogram[r["tau_defect"]] += 1
        for s in r["spreads"]:
            rep.spread_histogram[s] += 1
        for kind, word, msg in r["violations"]:
            if kind == "inequality":
                rep.inequality_violations += 1
            elif kind == "envelope":
                rep.envelope_violations += 1
            else:
                rep.bound_violations += 1
            rep.violations.append(
                {"pair": r["index"], "seed": seed, "kind": kind, "word": word,
                 "pair_words": r["words"], "detail": msg}
            )
    return rep
