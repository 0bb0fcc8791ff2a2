"""Command-line surface: compute, verify, simulate, search.

Exit codes: 0 success, 2 input error, 3 budget refusal, 4 I/O error.

Flags shared across subcommands can also be set through environment
variables with the PSL_ prefix (PSL_SEED, PSL_TRIALS, PSL_WORKERS,
PSL_OUT, PSL_FORMAT, PSL_BUDGET); explicit flags win.

Commands that write files (every `simulate`, and the others when --out
is given) also write a manifest.json recording the command, parameters,
seed, version, timestamps, and the produced files.  Re-running with the
manifest's parameters reproduces the CSV/JSON payloads byte for byte;
only the manifest's timestamps differ.

CSV payloads use '.' as the decimal mark, no thousands separators, LF
line endings, and 17-significant-digit floats, so equal results are
equal bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import bounds, combin, exact, montecarlo, seqcore
from .seqcore import BudgetExceededError, SequenceParseError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_IO = 4


def _env(name, default, cast):
    raw = os.environ.get(f"PSL_{name}")
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise SystemExit(f"bad value for PSL_{name}: {raw!r}")


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


class _Reporter:
    """Collects rows and renders them as table, CSV, or JSON."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.rows = []

    def add(self, **row):
        self.rows.append(row)

    def render(self) -> str:
        if not self.rows:
            return ""
        keys = list(self.rows[0].keys())
        if self.fmt == "json":
            return json.dumps(self.rows, default=str, indent=2) + "\n"
        if self.fmt == "csv":
            lines = [",".join(keys)]
            for r in self.rows:
                lines.append(",".join(_csv_cell(r[k]) for k in keys))
            return "\n".join(lines) + "\n"
        widths = {
            k: max(len(k), *(len(_cell(r[k])) for r in self.rows)) for k in keys
        }
        lines = ["  ".join(k.ljust(widths[k]) for k in keys)]
        for r in self.rows:
            lines.append("  ".join(_cell(r[k]).ljust(widths[k]) for k in keys))
        return "\n".join(lines) + "\n"


def _cell(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        return _fmt(x)
    return str(x)


def _manifest(command: str, params: dict, outputs, started: float) -> dict:
    clean = {
        k: v
        for k, v in sorted(params.items())
        if not k.startswith("_") and not callable(v)
    }
    return {
        "command": command,
        "params": clean,
        "seed": clean.get("seed"),
        "version": __version__,
        "started": started,
        "finished": time.time(),
        "outputs": list(outputs),
    }


def _write_outputs(outdir: str, payloads: dict, command: str, params: dict, started: float):
    out = Path(outdir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, text in payloads.items():
            (out / name).write_text(text)
        manifest = _manifest(command, params, payloads.keys(), started)
        (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _json_mirror(rows, seed, trials) -> str:
    return (
        json.dumps(
            {
                "meta": {"seed": seed, "trials": trials, "version": __version__},
                "rows": rows,
            },
            default=str,
            indent=2,
        )
        + "\n"
    )


# ---------------------------------------------------------------- compute


def cmd_compute(args) -> int:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(args.input).read_text()
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
    encoding = None if args.encoding == "auto" else args.encoding
    rep = _Reporter(args.format)
    want_acf = args.acf
    want_psl = args.psl or not (args.acf or args.measure)
    try:
        for lineno, seq in seqcore.read_sequence_lines(text.splitlines(), encoding):
            row = {"line": lineno, "n": seq.n}
            profile = None
            if want_acf or want_psl:
                profile = seqcore.acf(seq, args.path)
            if want_psl:
                row["psl"] = profile.psl if seq.n > 1 else None
            if want_acf:
                row["acf"] = " ".join(str(int(v)) for v in profile.values)
            if args.measure:
                result = seqcore.correlation_measure(
                    seq, args.measure, budget=args.budget
                )
                row[f"s{args.measure}"] = result.value
                row["witness_shifts"] = " ".join(str(u) for u in result.shifts)
                row["witness_k"] = result.k
            rep.add(**row)
    except SequenceParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    sys.stdout.write(rep.render())
    if args.out:
        return _write_outputs(
            args.out,
            {"compute." + ("json" if args.format == "json" else "csv"): rep.render()},
            "compute",
            vars(args),
            args._started,
        )
    return EXIT_OK


# ----------------------------------------------------------------- verify


def _verify_even_single(rep, m_max, q_max, budget):
    ok = True
    for m in range(1, m_max + 1):
        for q in range(1, q_max + 1):
            count = combin.count_even_tuples(m, q, budget=budget)
            bound = combin.bound_even_single(m, q)
            holds = combin.le_with_margin(count, bound) or count <= int(bound)
            rep.add(name=f"even_tuples(m={m},q={q})", n=m, lhs=count, rhs=bound, holds=holds)
            ok &= holds
    return ok


def _verify_even_double(rep, n_max, q_max, budget):
    ok = True
    for n in range(3, n_max + 1):
        for u in range(1, n):
            for v in range(u + 1, n):
                for q in range(1, q_max + 1):
                    for t in range(q):
                        try:
                            count = combin.count_S(n, u, v, q, t, budget=budget)
                        except BudgetExceededError:
                            raise
                        bound = combin.bound_S(n, q, t)
                        holds = combin.le_with_margin(count, bound)
                        rep.add(
                            name=f"S(u={u},v={v},q={q},t={t})",
                            n=n,
                            lhs=count,
                            rhs=bound,
                            holds=holds,
                        )
                        ok &= holds
    return ok


def _verify_moment(rep, n_max, p, h, budget):
    ok = True
    for n in range(3, n_max + 1):
        for u in range(1, n):
            for v in range(u + 1, n):
                report = combin.moment_report(n, u, v, p, h, seq_budget=budget)
                holds = report.consistent()
                rep.add(
                    name=f"moment(u={u},v={v},p={p},h={h})",
                    n=n,
                    lhs=report.exact,
                    rhs=report.bound,
                    holds=holds,
                )
                ok &= holds
    return ok


def _verify_concentration(rep, n):
    thetas = np.linspace(0.0, n - 1, 50)
    rows = exact.concentration_table_exact(n, thetas)
    ok = True
    for r in rows:
        rep.add(
            name=f"concentration(theta={r['theta']:.4g})",
            n=n,
            lhs=float(r["probability"]),
            rhs=r["bound"],
            holds=r["holds"],
        )
        ok &= r["holds"]
    return ok


def _verify_sandwich(rep, which):
    ok = True
    if which in ("gaussian", "all"):
        for z in np.arange(0.1, 8.05, 0.1):
            lo, val, hi = bounds.gaussian_sandwich(float(z))
            holds = lo <= val <= hi
            rep.add(name=f"gaussian_sandwich(z={z:.1f})", n=0, lhs=lo, rhs=hi, holds=holds)
            ok &= holds
    if which in ("stirling", "all"):
        for k in range(1, 501):
            lo, val, hi = bounds.stirling_log_bounds(k)
            holds = lo <= val <= hi
            rep.add(name=f"stirling(k={k})", n=k, lhs=lo, rhs=hi, holds=holds)
            ok &= holds
    return ok


def _verify_independence(rep, n, u):
    shifts = [u] if u else range(1, n)
    ok = True
    for s in shifts:
        report = exact.independence_check(n, s)
        rep.add(
            name=f"independence(u={s})",
            n=n,
            lhs=report["min_count"],
            rhs=report["max_count"],
            holds=report["uniform"],
        )
        ok &= report["uniform"]
    return ok


def cmd_verify(args) -> int:
    rep = _Reporter(args.format)
    ok = True
    ran = False
    try:
        if args.lemma == "even-single":
            ran = True
            ok &= _verify_even_single(rep, args.m, args.q, args.budget)
        elif args.lemma == "even-double":
            ran = True
            ok &= _verify_even_double(rep, args.n or 8, min(args.q, 2), args.budget)
        if args.moment:
            ran = True
            ok &= _verify_moment(rep, args.n or 10, args.p, args.h, args.budget)
        if args.concentration:
            ran = True
            ok &= _verify_concentration(rep, args.n or 16)
        if args.sandwich:
            ran = True
            ok &= _verify_sandwich(rep, args.sandwich)
        if args.independence:
            ran = True
            ok &= _verify_independence(rep, args.n or 12, args.u)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if not ran:
        print("error: nothing to verify; pass --lemma/--moment/--concentration/"
              "--sandwich/--independence", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(rep.render())
    if args.out:
        code = _write_outputs(
            args.out, {"verify.json": json.dumps(rep.rows, default=str, indent=2) + "\n"},
            "verify", vars(args), args._started,
        )
        if code:
            return code
    return EXIT_OK if ok else 1


# --------------------------------------------------------------- simulate


def _resolve_lambda(value, n):
    if value == "auto":
        return bounds.lambda_n(n)
    return float(value)


def cmd_simulate(args) -> int:
    started = args._started
    params = {k: v for k, v in vars(args).items() if not k.startswith("_") and k != "func"}
    try:
        if args.mode == "trend":
            ns = [int(x) for x in args.n.split(",")]
            rows = montecarlo.trend_report(ns, args.trials, args.seed, args.workers)
            payloads = {
                "trend.csv": montecarlo.trend_csv(rows),
                "trend.json": _json_mirror(rows, args.seed, args.trials),
            }
        elif args.mode in ("tail", "joint"):
            n = int(args.n)
            lam = _resolve_lambda(args.lam, n)
            cfg = montecarlo.SampleConfig(
                n=n, trials=args.trials, seed=args.seed, workers=args.workers
            )
            if args.mode == "tail":
                est = montecarlo.estimate_tail_single(cfg, args.u, lam)
                bound = bounds.lower_bound_single(n) if n > 2 else float("nan")
                row = {"n": n, "u": args.u, "v": None, "lam": lam,
                       "estimate": est, "bound": bound}
            else:
                est = montecarlo.estimate_tail_joint(cfg, args.u, args.v, lam)
                row = {"n": n, "u": args.u, "v": args.v, "lam": lam,
                       "estimate": est, "bound": bounds.upper_bound_joint(n)}
            payloads = {
                "tails.csv": montecarlo.tails_csv([row]),
                "tails.json": _json_mirror(
                    [dict(row, estimate=est.to_dict())], args.seed, args.trials
                ),
            }
            print(
                f"n={n} u={args.u}"
                + (f" v={args.v}" if args.mode == "joint" else "")
                + f" lambda={lam:.6g}: estimate {est.estimate:.6g} "
                f"[{est.ci_low:.6g}, {est.ci_high:.6g}]"
                + (f"  ({est.note})" if est.note else "")
            )
        elif args.mode == "concentration":
            n = int(args.n)
            cfg = montecarlo.SampleConfig(
                n=n, trials=args.trials, seed=args.seed, workers=args.workers
            )
            grid = np.linspace(0.0, args.theta_max or 4.0 * math.sqrt(n), args.theta_points)
            report = montecarlo.concentration_profile(cfg, grid)
            payloads = {
                "concentration.csv": montecarlo.concentration_csv(report),
                "concentration.json": _json_mirror(
                    report["rows"], args.seed, args.trials
                ),
            }
        elif args.mode == "rate":
            n = int(args.n)
            cfg = montecarlo.SampleConfig(
                n=n, trials=args.trials, seed=args.seed, workers=args.workers
            )
            report = montecarlo.psl_lower_event_rate(cfg)
            est = report["estimate"]
            row = {"n": n, "u": None, "v": None, "lam": report["lam"],
                   "estimate": est, "bound": report["lower_bound"]}
            payloads = {
                "rate.csv": montecarlo.tails_csv([row]),
                "rate.json": _json_mirror(
                    [dict(row, estimate=est.to_dict())], args.seed, args.trials
                ),
            }
            print(
                f"n={n} lambda={report['lam']:.6g}: Pr[M >= lambda] ~ "
                f"{est.estimate:.6g} [{est.ci_low:.6g}, {est.ci_high:.6g}]; "
                f"closed-form lower bound {report['lower_bound']:.6g}"
            )
        else:
            print(f"error: unknown simulate mode {args.mode}", file=sys.stderr)
            return EXIT_INPUT
    except (ValueError, BudgetExceededError) as exc:
        if isinstance(exc, BudgetExceededError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BUDGET
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return _write_outputs(args.out, payloads, f"simulate {args.mode}", params, started)


# ----------------------------------------------------------------- search


def cmd_search(args) -> int:
    rep = _Reporter(args.format)
    try:
        if args.min_psl:
            summary = exact.min_psl(args.min_psl)
            rep.add(
                n=summary.n,
                min_psl=summary.min_psl,
                witness=summary.witness.render(),
            )
        if args.dist:
            summary = exact.exact_psl_distribution(args.dist)
            rep.add(
                n=summary.n,
                min_psl=summary.min_psl,
                witness=summary.witness.render(),
                distribution=json.dumps(
                    {str(k): v for k, v in sorted(summary.distribution.items())}
                ),
                expectation=f"{summary.expectation.numerator}/{summary.expectation.denominator}",
            )
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if not rep.rows:
        print("error: pass --min-psl N or --dist N", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(rep.render())
    if args.out:
        return _write_outputs(
            args.out,
            {"search.json": json.dumps(rep.rows, default=str, indent=2) + "\n"},
            "search",
            vars(args),
            args._started,
        )
    return EXIT_OK


# ------------------------------------------------------------------ main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psl",
        description="Aperiodic autocorrelation and peak sidelobe level toolkit",
    )
    parser.add_argument("--version", action="version", version=f"psl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    fmt_default = _env("FORMAT", "table", str)
    seed_default = _env("SEED", 0, int)
    trials_default = _env("TRIALS", 10000, int)
    workers_default = _env("WORKERS", 1, int)
    out_default = _env("OUT", None, str)
    budget_default = _env("BUDGET", None, int)

    def common(p, out_required=False):
        p.add_argument("--format", choices=("table", "csv", "json"), default=fmt_default)
        p.add_argument("--out", default=out_default if not out_required else (out_default or "."),
                       help="directory for output files and manifest")

    p = sub.add_parser("compute", help="profiles and measures of sequences from a file")
    p.add_argument("--input", default="-", help="sequence file, '-' for stdin")
    p.add_argument("--encoding", choices=("auto", "plusminus", "binary01"), default="auto")
    p.add_argument("--acf", action="store_true", help="print the full profile")
    p.add_argument("--psl", action="store_true", help="print the peak sidelobe level")
    p.add_argument("--measure", type=int, default=None, metavar="R",
                   help="also compute the order-R correlation measure")
    p.add_argument("--path", choices=("naive", "bitparallel", "fft"), default="bitparallel")
    p.add_argument("--budget", type=int, default=budget_default or seqcore.DEFAULT_MEASURE_BUDGET)
    common(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="run exact inequality suites")
    p.add_argument("--lemma", choices=("even-single", "even-double"), default=None)
    p.add_argument("--moment", action="store_true")
    p.add_argument("--concentration", action="store_true")
    p.add_argument("--sandwich", choices=("gaussian", "stirling", "all"), default=None)
    p.add_argument("--independence", action="store_true")
    p.add_argument("--m", type=int, default=6, help="max m for even-single")
    p.add_argument("--q", type=int, default=4, help="max q")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--h", type=int, default=0)
    p.add_argument("--u", type=int, default=None)
    p.add_argument("--budget", type=int, default=budget_default or combin.DEFAULT_PAIR_BUDGET)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo reports as CSV/JSON files")
    p.add_argument("mode", choices=("trend", "tail", "joint", "concentration", "rate"))
    p.add_argument("--n", required=True,
                   help="sequence length; comma list for trend")
    p.add_argument("--u", type=int, default=1)
    p.add_argument("--v", type=int, default=2)
    p.add_argument("--lambda", dest="lam", default="auto",
                   help="threshold, or 'auto' for sqrt(2 n log n)")
    p.add_argument("--trials", type=int, default=trials_default)
    p.add_argument("--seed", type=int, default=seed_default)
    p.add_argument("--workers", type=int, default=workers_default)
    p.add_argument("--theta-max", type=float, default=None)
    p.add_argument("--theta-points", type=int, default=50)
    common(p, out_required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("search", help="exact minimum peak sidelobe level and distributions")
    p.add_argument("--min-psl", type=int, default=None, metavar="N")
    p.add_argument("--dist", type=int, default=None, metavar="N")
    common(p)
    p.set_defaults(func=cmd_search)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._started = time.time()
    return args.func(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
