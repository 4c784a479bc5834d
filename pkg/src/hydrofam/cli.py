"""Command-line front end: ``hydrofam {verify,jantzen,spectrum,intertwiner,solutions,quadric}``.

Exact inputs (``--k``, energies, interval endpoints) are parsed as ``p/q``
rationals. Output is JSON (default), CSV or plain text, and is byte-stable
for a fixed configuration and seed.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import diffop, jantzen, module_family, pair_and_groups, solutions
from .algebra_core import CoeffFn, PolyE, parse_rational
from .report import Report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_NEG_NUMBER = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+(e-?\d+)?$")


@dataclass(frozen=True)
class Tolerances:
    series_tol: float = 1e-14
    residual_tol_bound: float = 1e-8
    residual_tol_scatter: float = 1e-6
    residual_tol_zero: float = 1e-8


@dataclass(frozen=True)
class RunConfig:
    k: Fraction = Fraction(1)
    window: int = 24
    epsilon: int = 1
    tolerances: Tolerances = field(default_factory=Tolerances)
    output: str = "json"
    seed: int = 0
    inject: str | None = None

    def __post_init__(self):
        if self.window < 4:
            raise ValueError("window N must be at least 4")
        if self.k <= 0:
            raise ValueError("k must be positive")
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected a rational p/q, got {text!r}") from exc


def _epsilon(text: str) -> int:
    if text in ("1", "+1", "+"):
        return 1
    if text in ("-1", "-"):
        return -1
    raise argparse.ArgumentTypeError("epsilon must be +1 or -1")


def _float_list(text: str) -> list[float]:
    """``"0.1,0.5,1"`` or ``"start:stop:count"``."""
    try:
        if ":" in text:
            a, b, n = text.split(":")
            a, b, n = float(a), float(b), int(n)
            if n < 1:
                raise ValueError
            return [a + (b - a) * i / max(n - 1, 1) for i in range(n)]
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"malformed grid {text!r}") from exc


# ---------------------------------------------------------------------------
# fault injection for negative controls


def _injected(config: RunConfig):
    """Return ``(bracket constants, structure table, intertwiner, casimir constant)``."""
    brackets, table, tw, cas = None, None, jantzen.Intertwiner(config.k), None
    if not config.inject:
        return brackets, table, tw, cas
    kind, _, arg = config.inject.partition(":")
    if kind == "bracket":
        brackets = {arg: diffop.BRACKET_CONSTANTS[arg] + 1}
    elif kind == "structure":
        a, b, out = arg.split(",")
        table = dict(pair_and_groups.REAL_STRUCTURE)
        idx = pair_and_groups.REAL_BASIS.index(out)
        coords = list(table[(a, b)])
        coords[idx] = coords[idx] + 1
        table[(a, b)] = tuple(coords)
    elif kind == "psi":
        n, _, deg = arg.partition(",")
        n, deg = int(n), int(deg or 0)
        bump = PolyE([0] * deg + [1])
        tw = jantzen.Intertwiner(config.k, overrides={n: jantzen.psi_closed_form(n, config.k) + bump})
    elif kind == "casimir":
        cas = CoeffFn.k() * CoeffFn.k() * Fraction(1, 2) + 1
    else:
        raise UsageError(f"unknown injection {config.inject!r}")
    return brackets, table, tw, cas


# ---------------------------------------------------------------------------
# commands


def cmd_verify(config: RunConfig, trials: int = 10) -> tuple[int, dict, list[Report]]:
    brackets, table, tw, cas = _injected(config)
    reports = [
        diffop.verify_bracket_table(brackets),
        diffop.verify_centralizer(),
        diffop.verify_casimir_identity(cas),
        pair_and_groups.iso_transport_check((-2, 0, 1), table),
        pair_and_groups.jacobi_check("real", table),
    ]
    rng = random.Random(config.seed)
    jac = Report(f"random Jacobi triples (seed {config.seed})")
    for t in range(trials):
        a, b, c = (diffop.random_diffop(rng) for _ in range(3))
        jac.add(f"Jacobi triple {t}", diffop.jacobi_residual(a, b, c).is_zero())
    reports.append(jac)
    fam = module_family.ModuleFamily(config.k, config.epsilon, config.window)
    reports += [fam.bracket_consistency_check(), fam.omega_scalar_check(),
                fam.ladder_product_check(), fam.reflection_equivariance_check()]
    reports.append(jantzen.psi_recursion_check(min(20, config.window - 1), tw, (config.epsilon,)))
    passed = all(r.passed for r in reports)
    first = next((r.first_failure for r in reports if not r.passed), None)
    doc = {
        "schema": 1,
        "command": "verify",
        "config": _config_dict(config),
        "passed": passed,
        "first_failure": None if first is None else {"name": first.name, "detail": first.detail},
        "suites": [{"title": r.title, "passed": r.passed, "checks": len(r.checks),
                    "failures": [c.name for c in r.checks if not c.passed]} for r in reports],
    }
    return (EXIT_OK if passed else EXIT_FAIL), doc, reports


def cmd_jantzen(config: RunConfig, e: Fraction) -> jantzen.JantzenReport:
    _, _, tw, _ = _injected(config)
    return jantzen.classify_fiber(e, config.k, config.window, intertwiner=tw)


def cmd_spectrum(config: RunConfig, window_E: jantzen.Interval, m_max: int,
                 sample_count: int) -> dict:
    bound = jantzen.reducibility_points(config.k, window_E, m_max)
    pts = sorted(set(jantzen.sample_points(window_E, sample_count)) | set(bound))
    reports = jantzen.classify_many(pts, config.k, config.window)
    return {
        "schema": 1,
        "command": "spectrum",
        "k": str(config.k),
        "window_E": str(window_E),
        "m_max": m_max,
        "bound_states": [str(b) for b in bound],
        "samples": [{"e": str(r.point), "classification": str(r.classification),
                     "finite_quotient_dim": r.finite_quotient_dim()} for r in reports],
        "_reports": reports,
    }


def cmd_intertwiner(config: RunConfig, n_max: int) -> list[dict]:
    _, _, tw, _ = _injected(config)
    rows = []
    for n in range(0, n_max + 1):
        roots = [str(jantzen.psi_factor(m, config.k).linear_root()) for m in range(1, n + 1)]
        rows.append({"n": n, "psi": str(tw.psi(n)), "roots": roots})
    return rows


def _profile(kind: str, n: int | None, l: int, E: float | None, k: float) -> solutions.RadialProfile:
    if kind == "bound":
        if n is None:
            raise UsageError("--n is required for bound states")
        return solutions.RadialProfile.bound(n, l, k)
    if kind == "scattering":
        if E is None:
            raise UsageError("--E is required for scattering states")
        return solutions.RadialProfile.scattering(E, l, k)
    return solutions.RadialProfile.zero_energy(l, k)


def cmd_solutions(config: RunConfig, profile: solutions.RadialProfile,
                  grid: Sequence[float]) -> tuple[int, list[dict]]:
    tol = config.tolerances
    limit = {solutions.ProfileKind.Bound: tol.residual_tol_bound,
             solutions.ProfileKind.Scattering: tol.residual_tol_scatter,
             solutions.ProfileKind.ZeroEnergy: tol.residual_tol_zero}[profile.kind]
    rows = solutions.residual_rows(profile, grid)
    ok = all(r["residual"] < limit for r in rows)
    return (EXIT_OK if ok else EXIT_FAIL), rows


def cmd_quadric(config: RunConfig, x: Fraction, level: Fraction,
                grid: pair_and_groups.QuadricGrid) -> tuple[str, bool]:
    pts = pair_and_groups.quadric_sample(x, level, grid)
    return pair_and_groups.quadric_csv(pts, x), len(pts) == 0


# ---------------------------------------------------------------------------
# plumbing


def _config_dict(config: RunConfig) -> dict:
    return {"k": str(config.k), "window": config.window, "epsilon": config.epsilon,
            "seed": config.seed}


def _dump_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _rows_csv(rows: list[dict], cols: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([";".join(map(str, r[c])) if isinstance(r[c], list) else r[c] for c in cols])
    return buf.getvalue()


def _common(sub: bool) -> argparse.ArgumentParser:
    # subcommand copies default to SUPPRESS so flags given before the
    # subcommand are not overwritten
    def d(value):
        return argparse.SUPPRESS if sub else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=_rational, default=d(Fraction(1)), help="coupling constant (p/q)")
    common.add_argument("--window", type=int, default=d(24), help="weight window N")
    common.add_argument("--epsilon", type=_epsilon, default=d(1), help="family flag +1 or -1")
    common.add_argument("--format", choices=("json", "csv", "text"), default=d("json"))
    common.add_argument("--seed", type=int, default=d(0))
    common.add_argument("--out", metavar="FILE", default=d(None),
                        help="write output here instead of stdout")
    common.add_argument("--inject", default=d(None), help=argparse.SUPPRESS)
    return common


def build_parser() -> argparse.ArgumentParser:
    top, common = _common(False), _common(True)
    p = argparse.ArgumentParser(prog="hydrofam", parents=[top],
                                description="Exact and numeric checks for the planar Coulomb family.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run all exact symbolic suites")
    v.add_argument("--trials", type=int, default=10, help="random Jacobi triples")

    j = sub.add_parser("jantzen", parents=[common], help="Jantzen analysis at one point")
    j.add_argument("e", type=_rational)

    s = sub.add_parser("spectrum", parents=[common], help="bound states and classification")
    s.add_argument("--window-E", default="[-3, 3]", help="interval such as '[-3, 0)'")
    s.add_argument("--m-max", type=int, default=10)
    s.add_argument("--samples", type=int, default=13)

    i = sub.add_parser("intertwiner", parents=[common], help="table of psi_n")
    i.add_argument("--n-max", type=int, default=5)

    so = sub.add_parser("solutions", parents=[common], help="radial solution residuals")
    so.add_argument("--kind", choices=("bound", "scattering", "zero"), required=True)
    so.add_argument("--n", type=int)
    so.add_argument("--l", type=int, default=0)
    so.add_argument("--E", type=float)
    so.add_argument("--r", type=_float_list, default=[0.5, 1.0, 2.0, 5.0],
                    help="'0.1,0.5,1' or 'start:stop:count'")

    q = sub.add_parser("quadric", parents=[common], help="sample a homogeneous-space quadric")
    q.add_argument("--x", type=_rational, required=True)
    q.add_argument("--level", type=_rational, default=Fraction(1))
    q.add_argument("--resolution", default="24x12", help="angle x axial samples")

    for parser in (p, v, j, s, i, so, q):
        parser._negative_number_matcher = _NEG_NUMBER  # accept -2/9 as a positional
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(k=args.k, window=args.window, epsilon=args.epsilon,
                           output=args.format, seed=args.seed, inject=args.inject)
        return _run(args, config)
    except (UsageError, ValueError) as exc:
        print(f"hydrofam: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _run(args, config: RunConfig) -> int:
    fmt = config.output
    if args.command == "verify":
        code, doc, reports = cmd_verify(config, args.trials)
        if fmt == "json":
            text = _dump_json(doc)
        elif fmt == "csv":
            rows = [{"suite": r.title, "name": c.name, "passed": c.passed, "detail": c.detail}
                    for r in reports for c in r.checks]
            text = _rows_csv(rows, ["suite", "name", "passed", "detail"])
        else:
            text = "".join(f"# {r.title}\n" + "\n".join(r.lines()) + "\n" for r in reports)
        _emit(text, args.out)
        if code != EXIT_OK:
            first = doc["first_failure"]
            print(f"hydrofam: verification failed: {first['name']}", file=sys.stderr)
        return code

    if args.command == "jantzen":
        rep = cmd_jantzen(config, args.e)
        if fmt == "json":
            text = _dump_json(rep.to_dict())
        elif fmt == "csv":
            text = jantzen.classification_csv([rep])
        else:
            text = (f"e = {rep.point}, k = {rep.k}: {rep.classification}\n"
                    + "".join(f"  layer {q.order}: dim {q.dim}, "
                              f"{rep.definiteness[q.order].value}\n" for q in rep.quotients))
        _emit(text, args.out)
        return EXIT_OK

    if args.command == "spectrum":
        doc = cmd_spectrum(config, jantzen.Interval.parse(args.window_E), args.m_max, args.samples)
        reports = doc.pop("_reports")
        if fmt == "json":
            text = _dump_json(doc)
        elif fmt == "csv":
            text = jantzen.classification_csv(reports)
        else:
            text = (f"bound states: {', '.join(doc['bound_states']) or 'none'}\n"
                    + "".join(f"  {s['e']}: {s['classification']}\n" for s in doc["samples"]))
        _emit(text, args.out)
        return EXIT_OK

    if args.command == "intertwiner":
        if args.n_max < 0:
            raise UsageError("--n-max must be nonnegative")
        rows = cmd_intertwiner(config, args.n_max)
        if fmt == "json":
            text = _dump_json({"schema": 1, "command": "intertwiner", "k": str(config.k),
                               "rows": rows})
        elif fmt == "csv":
            text = _rows_csv(rows, ["n", "psi", "roots"])
        else:
            text = "".join(f"psi_{r['n']} = {r['psi']}\n" for r in rows)
        _emit(text, args.out)
        return EXIT_OK

    if args.command == "solutions":
        prof = _profile(args.kind, args.n, args.l, args.E, float(config.k))
        code, rows = cmd_solutions(config, prof, args.r)
        if fmt == "json":
            text = _dump_json({"schema": 1, "command": "solutions", "profile": prof.label(),
                               "rows": rows})
        elif fmt == "csv":
            text = solutions.solutions_csv(rows)
        else:
            text = "".join(f"r={r['r']:g}  R={complex(r['value_re'], r['value_im']):.10g}  "
                           f"residual={r['residual']:.3e}\n" for r in rows)
        _emit(text, args.out)
        return code

    if args.command == "quadric":
        try:
            na, nz = (int(t) for t in args.resolution.lower().split("x"))
        except ValueError as exc:
            raise UsageError(f"malformed resolution {args.resolution!r}") from exc
        if args.level == 0:
            raise UsageError("level must be nonzero")
        text, empty = cmd_quadric(config, args.x, args.level,
                                  pair_and_groups.QuadricGrid(na, nz))
        if fmt == "json":
            rows = list(csv.DictReader(io.StringIO(text)))
            text = _dump_json({"schema": 1, "command": "quadric", "x": str(args.x),
                               "level": str(args.level),
                               "classification": pair_and_groups.classification_report(args.x),
                               "points": rows,
                               "warning": "empty level set" if empty else None})
        _emit(text, args.out)
        if empty:
            print("hydrofam: warning: empty level set", file=sys.stderr)
        return EXIT_OK

    raise UsageError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
