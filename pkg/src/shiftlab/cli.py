"""Command-line interface: ``shiftlab {tau,converge,audit,ext-table,orbit}``.

Exit codes: 0 success, 2 parse or flag error, 3 audit violation.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

from .audit import WordSampler, audit_run
from .cover import LiftedRay
from .dynamics import (
    convergence_rows,
    entropy_lower_bound,
    ext_growth_entropy,
    orbit,
    tau_exact,
    tau_ext_limit,
    tau_heart_limit,
)
from .model import COH, HeartCut, POLICIES, eps_minus, eps_plus, ext_table, standard_generator
from .wordtext import WordSyntaxError, format_word, parse_word

EXIT_VIOLATION = 3

CONVERGE_COLUMNS = [
    "n", "phi_plus", "phi_minus", "eps_plus", "eps_minus",
    "phi_plus_ratio", "phi_minus_ratio", "eps_plus_ratio", "eps_minus_ratio",
    "heart_lower", "heart_upper",
]


def _word(text: str):
    try:
        return parse_word(text)
    except WordSyntaxError as e:
        raise argparse.ArgumentTypeError(str(e))


def _cut(text: str) -> HeartCut:
    try:
        parts = [int(p) for p in text.split(",")]
        if len(parts) not in (2, 3):
            raise ValueError("expected a,b or a,b,m")
        return HeartCut(LiftedRay(*parts))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad heart cut {text!r}: {e}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _weights(text: str) -> tuple[Fraction, ...]:
    parts = [_fraction(p) for p in text.split(",")]
    if len(parts) != 6 or any(p < 0 for p in parts) or not any(parts):
        raise argparse.ArgumentTypeError("need six nonnegative weights, not all zero")
    return tuple(parts)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return v


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def _open_out(path: str | None):
    # never close stdout
    return open(path, "w", newline="") if path else contextlib.nullcontext(sys.stdout)


def cmd_tau(args) -> int:
    w = args.word
    G = standard_generator(args.generator_degree)
    exact = tau_exact(w)
    out = sys.stdout
    print(f"word: {format_word(w)}", file=out)
    print(f"tau: {exact.value}", file=out)
    print(f"classification: {exact.classification}", file=out)
    if args.method == "exact":
        return 0
    if args.method == "heart":
        res = tau_heart_limit(w, args.heart_cut, G, args.max_n)
        print(f"heart-cut: {args.heart_cut}", file=out)
    else:
        res = tau_ext_limit(w, G, args.max_n, args.sign, args.policy)
        print(f"sign: {args.sign}", file=out)
    print(f"method: {res.method}", file=out)
    print(f"enclosure: [{res.lower}, {res.upper}] at n={res.n}", file=out)
    print(f"contains-exact: {str(res.contains(exact.value)).lower()}", file=out)
    wr = _writer(out)
    wr.writerow(["n", "value", "ratio"])
    for n, (v, r) in enumerate(zip(res.raw, res.ratios), 1):
        wr.writerow([n, v, r])
    return 0


def cmd_converge(args) -> int:
    w = args.word
    G = standard_generator(args.generator_degree)
    tau = tau_exact(w).value
    cuts = args.heart_cut or [COH]
    cols = list(CONVERGE_COLUMNS)
    if args.entropy_t is not None:
        cols += ["entropy_lower_bound", "ext_entropy_approx"]
    with _open_out(args.out) as fh:
        for i, cut in enumerate(cuts):
            if i:
                fh.write("\n")
            fh.write(f"# heart-cut={cut} word={format_word(w)} tau={tau}\n")
            wr = _writer(fh)
            wr.writerow(cols)
            for row in convergence_rows(w, cut, G, args.max_n, args.policy):
                vals = [row[c] for c in CONVERGE_COLUMNS]
                if args.entropy_t is not None:
                    n = row["n"]
                    t = args.entropy_t
                    vals.append(entropy_lower_bound(w, G, t, n, cut).lower_bound)
                    vals.append(f"{ext_growth_entropy(w, G, float(t), n, args.policy):.12g}")
                wr.writerow(vals)
    return 0


def cmd_ext_table(args) -> int:
    w = args.word
    G = standard_generator(args.generator_degree)
    Fn = G
    for n, obj in orbit(w, G, args.n):
        Fn = obj
    table = ext_table(G, Fn, args.policy)
    out = sys.stdout
    out.write(f"# dim Hom(G, F^n G[k]) word={format_word(w)} n={args.n}\n")
    wr = _writer(out)
    wr.writerow(["degree", "dim"])
    for k, v in table.items():
        wr.writerow([k, v])
    out.write(f"# eps_plus={eps_plus(G, Fn, args.policy)} eps_minus={eps_minus(G, Fn, args.policy)}\n")
    return 0


def cmd_orbit(args) -> int:
    w = args.word
    G = standard_generator(args.generator_degree)
    wr = _writer(sys.stdout)
    wr.writerow(["n", "tag", "a", "b", "sheet", "rank", "degree", "heart_degree"])
    for n, obj in orbit(w, G, args.max_n):
        for a in obj:
            wr.writerow(
                [n, a.tag, a.ray.a, a.ray.b, a.ray.m, a.cls.r, a.cls.d, args.heart_cut.degree(a.ray)]
            )
    return 0


def cmd_audit(args) -> int:
    sampler = WordSampler(seed=args.seed, max_len=args.max_len, weights=args.weights)
    report = audit_run(
        sampler,
        args.pairs,
        d=args.dim,
        N=args.inequality_n,
        generator_degree=args.generator_degree,
        policy=args.policy,
        workers=args.workers,
    )
    doc = report.to_json_dict()
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        out = Path(args.out)
        out.write_text(text)
        for name, key in [
            ("tilde_hist", "tilde_defect_histogram"),
            ("tau_hist", "tau_defect_histogram"),
            ("spread_hist", "spread_histogram"),
        ]:
            with open(out.with_name(f"{out.stem}.{name}.csv"), "w", newline="") as fh:
                wr = _writer(fh)
                wr.writerow(["value", "count"])
                for k, v in doc["results"][key].items():
                    wr.writerow([k, v])
    else:
        sys.stdout.write(text)
    res = doc["results"]
    print(
        f"pairs={res['pairs_tested']} max_tilde_defect={res['max_tilde_defect']} "
        f"max_tau_defect={res['max_tau_defect']} max_spread={res['max_spread']} "
        f"passed={str(res['passed']).lower()}",
        file=sys.stderr,
    )
    return 0 if report.passed else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shiftlab",
        description="Exact shifting numbers of autoequivalences of an elliptic curve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, word=True):
        if word:
            p.add_argument("--word", type=_word, required=True,
                           help='word such as "T S^-1 [1]"; letters act left to right')
        p.add_argument("--generator-degree", type=_positive, default=3)
        p.add_argument("--policy", choices=POLICIES, default="generic")

    p = sub.add_parser("tau", help="exact shifting number, optionally with a limit table")
    common(p)
    p.add_argument("--method", choices=["exact", "heart", "ext"], default="exact")
    p.add_argument("--max-n", type=_positive, default=32)
    p.add_argument("--heart-cut", type=_cut, default=COH, help="u-vector a,b[,sheet]")
    p.add_argument("--sign", choices=["plus", "minus"], default="plus")
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("converge", help="CSV of heart degrees and Ext-distances per n")
    common(p)
    p.add_argument("--max-n", type=_positive, default=32)
    p.add_argument("--heart-cut", type=_cut, action="append",
                   help="u-vector a,b[,sheet]; repeat for several blocks")
    p.add_argument("--entropy-t", type=_fraction, default=None,
                   help="also emit entropy lower bounds at this nonzero t")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("audit", help="randomized quasimorphism and inequality audit")
    common(p, word=False)
    p.add_argument("--pairs", type=_positive, default=10_000)
    p.add_argument("--max-len", type=_positive, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=_positive, default=1)
    p.add_argument("--weights", type=_weights, default=(Fraction(1),) * 6,
                   help="six weights: mukai,mukai_inv,twist,twist_inv,shift_up,shift_down")
    p.add_argument("--inequality-n", type=_positive, default=16)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--out", default=None, help="JSON path; histogram CSVs go alongside")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("ext-table", help="dim Hom(G, F^n G[k]) by degree")
    common(p)
    p.add_argument("--n", type=int, default=1)
    p.set_defaults(func=cmd_ext_table)

    p = sub.add_parser("orbit", help="lifted-ray orbit of the generator's atoms")
    common(p)
    p.add_argument("--max-n", type=_positive, default=8)
    p.add_argument("--heart-cut", type=_cut, default=COH)
    p.set_defaults(func=cmd_orbit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "entropy_t", None) == 0:
        parser.error("--entropy-t must be nonzero")
    if getattr(args, "n", 1) < 0:
        parser.error("--n must be nonnegative")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
