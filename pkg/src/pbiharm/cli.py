"""Command-line front end.

Commands
--------
constant      extremal constants for one (p, interval) with residuals
table         bracket table per index, optional SVD oracle column and SVG plot
certify       upper + lower bound certificates for one (target, n, p)
oracle        singular values of a discretized Volterra operator (p = 2 only)
asymptote     n^2 * s_n sequence against its limit |I|^2 B(0,1)
factor-check  double-integration identities of the order-2 operator

Conventions: intervals are written ``a,b``; index ranges ``lo..hi``
(inclusive) or a single integer.  Exit codes: 0 success, 1 certificate or
convergence failure, 2 usage/precondition error.  Reports embed the library
version, grid size and tolerances; every command is deterministic given its
full flag set (including the seed), and JSON output is byte-stable across
reruns.  Files are written atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .numgrid import Grid, Interval, default_grid
from .extremal import (
    ConvergenceError,
    DEFAULT_TOL,
    b_constant,
    solve_aminus,
    solve_aplus,
    solve_j0,
    solve_ja,
    solve_jb,
)
from .bounds import (
    CERTIFICATE_REL_TOL,
    TargetOperator,
    certify_lower,
    certify_upper,
    reference_constant,
    snumber_table,
)
from .operators import (
    GAMMA_NOTE,
    check_factorization,
    svd_snumbers,
    t1_reference,
    volterra_matrix,
)

_ORACLE_DEFAULT_M = 4001
_ASYMPTOTE_DEFAULT_M = 8001


@dataclasses.dataclass
class RunConfig:
    """Validated run parameters shared by the command handlers."""

    command: str
    p: float = 2.0
    interval: Interval = Interval(0.0, 1.0)
    target: TargetOperator | None = None
    operator_order: int = 2          # t1/t2 choice for the oracle command
    n_lo: int = 2
    n_hi: int = 2
    m: int | None = None
    trials: int = 500
    seed: int = 0
    tol: float = DEFAULT_TOL
    fmt: str = "json"
    output: str | None = None
    plot: str | None = None
    oracle: str | None = None
    k: int | None = None


class UsageError(ValueError):
    pass


def _parse_interval(text: str) -> Interval:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"interval must be 'a,b', got {text!r}")
    try:
        a, b = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise UsageError(f"interval endpoints must be reals: {text!r}") from exc
    try:
        return Interval(a, b)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _parse_nrange(text: str) -> tuple[int, int]:
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
    else:
        lo_s = hi_s = text
    try:
        lo, hi = int(lo_s), int(hi_s)
    except ValueError as exc:
        raise UsageError(f"index range must be 'lo..hi' or an integer: {text!r}") from exc
    if lo > hi:
        raise UsageError(f"empty index range {text!r}")
    return lo, hi


def _parse_target(text: str) -> TargetOperator:
    try:
        return TargetOperator(text)
    except ValueError as exc:
        choices = ", ".join(t.value for t in TargetOperator)
        raise UsageError(f"unknown target {text!r} (choose from {choices})") from exc


def _grid_for(cfg: RunConfig, default_m: int | None = None) -> Grid:
    if cfg.m is not None:
        return Grid(cfg.interval, cfg.m)
    if default_m is not None:
        return Grid(cfg.interval, default_m)
    return default_grid(cfg.interval)


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".pbiharm-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        _atomic_write(output, text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _meta(grid_nodes: int | None, **extra) -> dict:
    meta = {"version": __version__}
    if grid_nodes is not None:
        meta["grid_nodes"] = grid_nodes
    meta.update(extra)
    return meta


def _csv_text(header: list[str], rows: list[list], meta: dict) -> str:
    lines = [f"# {key}={value}" for key, value in sorted(meta.items())]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join("" if v is None else repr(v) if isinstance(v, float) else str(v)
                              for v in row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# SVG (static, dependency-free)

_SVG_W, _SVG_H = 640, 440
_MARGIN = 56
_COLORS = ("#1f77b4", "#d62728", "#2ca02c")


def _svg_plot(series, hline, title, xlabel, ylabel) -> str:
    xs_all = np.concatenate([np.asarray(s[1], dtype=float) for s in series])
    ys_all = np.concatenate([np.asarray(s[2], dtype=float) for s in series])
    ys_all = np.append(ys_all, hline)
    x0, x1 = float(xs_all.min()), float(xs_all.max())
    y0, y1 = float(ys_all.min()), float(ys_all.max())
    if x1 == x0:
        x1 = x0 + 1.0
    pad = 0.05 * (y1 - y0) or 0.1 * abs(y1) or 1.0
    y0, y1 = y0 - pad, y1 + pad
    iw = _SVG_W - 2 * _MARGIN
    ih = _SVG_H - 2 * _MARGIN

    def sx(x):
        return _MARGIN + (x - x0) / (x1 - x0) * iw

    def sy(y):
        return _SVG_H - _MARGIN - (y - y0) / (y1 - y0) * ih

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_SVG_W}" height="{_SVG_H}" viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<text x="{_SVG_W / 2:.1f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
    ]
    # axes
    out.append(f'<line x1="{_MARGIN}" y1="{_SVG_H - _MARGIN}" x2="{_SVG_W - _MARGIN}" '
               f'y2="{_SVG_H - _MARGIN}" stroke="black"/>')
    out.append(f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" '
               f'y2="{_SVG_H - _MARGIN}" stroke="black"/>')
    for frac in (0.0, 0.5, 1.0):
        xv = x0 + frac * (x1 - x0)
        yv = y0 + frac * (y1 - y0)
        out.append(f'<text x="{sx(xv):.1f}" y="{_SVG_H - _MARGIN + 18}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{xv:.6g}</text>')
        out.append(f'<text x="{_MARGIN - 6}" y="{sy(yv):.1f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{yv:.6g}</text>')
    out.append(f'<text x="{_SVG_W / 2:.1f}" y="{_SVG_H - 12}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12">{xlabel}</text>')
    out.append(f'<text x="16" y="{_SVG_H / 2:.1f}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12" '
               f'transform="rotate(-90 16 {_SVG_H / 2:.1f})">{ylabel}</text>')
    # asymptote
    out.append(f'<line x1="{_MARGIN}" y1="{sy(hline):.2f}" x2="{_SVG_W - _MARGIN}" '
               f'y2="{sy(hline):.2f}" stroke="#777777" stroke-dasharray="6 4"/>')
    for i, (label, xs, ys) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                   f'points="{pts}"/>')
        out.append(f'<text x="{_SVG_W - _MARGIN - 4}" y="{_MARGIN + 16 + 16 * i}" '
                   f'text-anchor="end" font-family="sans-serif" font-size="12" '
                   f'fill="{color}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# command handlers

def cmd_constant(cfg: RunConfig) -> int:
    grid = _grid_for(cfg)
    solvers = [
        ("J0", solve_j0),
        ("Ja", solve_ja),
        ("Jb", solve_jb),
        ("A+", solve_aplus),
        ("A-", solve_aminus),
        ("B", b_constant),
    ]
    results = {}
    failures = []
    for name, solver in solvers:
        try:
            sol = solver(cfg.p, cfg.interval, grid, cfg.tol)
        except ConvergenceError as exc:
            failures.append((name, exc))
            continue
        results[name] = sol
    report = {
        "command": "constant",
        "meta": _meta(grid.m, solver_tol=cfg.tol),
        "parameters": {"p": cfg.p, "interval": [cfg.interval.a, cfg.interval.b]},
        "constants": {
            name: {
                "value": sol.value,
                "eigenvalue": sol.eigenvalue,
                "residual": sol.residual,
                "iterations": sol.iterations,
            }
            for name, sol in results.items()
        },
        "converged": not failures,
    }
    if failures:
        report["failures"] = {
            name: {"residual": exc.residual, "iterations": exc.iterations}
            for name, exc in failures
        }
    if cfg.fmt == "csv":
        rows = [[name, sol.value, sol.eigenvalue, sol.residual, sol.iterations]
                for name, sol in results.items()]
        text = _csv_text(["constant", "value", "eigenvalue", "residual", "iterations"],
                         rows, report["meta"])
    else:
        text = _json_text(report)
    _emit(text, cfg.output)
    for name, exc in failures:
        print(f"{name}: {exc}", file=sys.stderr)
    return 0 if not failures else 1


def cmd_table(cfg: RunConfig) -> int:
    n_lo, n_hi = cfg.n_lo, cfg.n_hi
    oracle_vals = None
    oracle_m = None
    if cfg.oracle is not None:
        if cfg.oracle != "svd":
            raise UsageError(f"unknown oracle {cfg.oracle!r} (only 'svd')")
        if cfg.p != 2.0:
            raise UsageError("the SVD oracle is only available at p = 2")
        if cfg.target is not TargetOperator.T2:
            raise UsageError("the SVD oracle applies to the Volterra target t2")
        oracle_m = cfg.m if cfg.m is not None else _ORACLE_DEFAULT_M
        grid = Grid(cfg.interval, oracle_m)
        spec = svd_snumbers(volterra_matrix(2, grid, 2.0), k=n_hi)
        oracle_vals = [spec.value(n) for n in range(n_lo, n_hi + 1)]
    table = snumber_table(cfg.target, cfg.interval, cfg.p, n_lo, n_hi, oracle_vals)
    meta = _meta(oracle_m, p=cfg.p, target=cfg.target.value,
                 limit=table.limit, solver_tol=DEFAULT_TOL)
    rows = [[r.n, r.lower, r.upper, r.oracle, r.n2_oracle] for r in table.rows]
    if cfg.fmt == "csv":
        text = _csv_text(["n", "lower", "upper", "oracle", "n2_oracle"], rows, meta)
    else:
        text = _json_text({
            "command": "table",
            "meta": meta,
            "parameters": {
                "target": cfg.target.value, "p": cfg.p,
                "interval": [cfg.interval.a, cfg.interval.b],
                "n": [n_lo, n_hi], "oracle": cfg.oracle,
            },
            "rows": [
                {"n": r.n, "lower": r.lower, "upper": r.upper,
                 "oracle": r.oracle, "n2_oracle": r.n2_oracle}
                for r in table.rows
            ],
            "limit": table.limit,
        })
    _emit(text, cfg.output)
    if cfg.plot is not None:
        ns = [r.n for r in table.rows]
        series = [
            ("n^2 lower", ns, [r.n * r.n * r.lower for r in table.rows]),
            ("n^2 upper", ns, [r.n * r.n * r.upper for r in table.rows]),
        ]
        if oracle_vals is not None:
            series.append(("n^2 oracle", ns, [r.n2_oracle for r in table.rows]))
        svg = _svg_plot(series, table.limit,
                        f"bracket vs index ({cfg.target.value}, p={cfg.p})",
                        "n", "n^2 * value")
        _atomic_write(cfg.plot, svg)
    return 0


def _certificate_dict(cert) -> dict:
    return {
        "target": cert.target.value,
        "side": cert.side.value,
        "n": cert.n,
        "p": cert.p,
        "bound_value": cert.bound_value,
        "trials": cert.trials,
        "seed": cert.seed,
        "worst_ratio": cert.worst_ratio,
        "margin": cert.margin,
        "passed": cert.passed,
    }


def cmd_certify(cfg: RunConfig) -> int:
    if cfg.trials < 1:
        raise UsageError("trials must be at least 1")
    n = cfg.n_lo
    upper = certify_upper(cfg.target, cfg.interval, n, cfg.p, cfg.trials, cfg.seed)
    lower = certify_lower(cfg.target, cfg.interval, n, cfg.p, cfg.trials, cfg.seed)
    report = {
        "command": "certify",
        "meta": _meta(None, certificate_rel_tol=CERTIFICATE_REL_TOL,
                      solver_tol=DEFAULT_TOL),
        "parameters": {
            "target": cfg.target.value, "p": cfg.p, "n": n,
            "interval": [cfg.interval.a, cfg.interval.b],
            "trials": cfg.trials, "seed": cfg.seed,
        },
        "upper": _certificate_dict(upper),
        "lower": _certificate_dict(lower),
        "passed": upper.passed and lower.passed,
    }
    _emit(_json_text(report), cfg.output)
    if not report["passed"]:
        for cert in (upper, lower):
            if not cert.passed:
                print(
                    f"{cert.side.value} certificate failed: worst ratio "
                    f"{cert.worst_ratio:.8g} vs bound {cert.bound_value:.8g}",
                    file=sys.stderr,
                )
        return 1
    return 0


def cmd_oracle(cfg: RunConfig) -> int:
    if cfg.p != 2.0:
        print("the SVD oracle is only valid at p = 2 "
              "(approximation numbers equal singular values there)", file=sys.stderr)
        return 2
    m = cfg.m if cfg.m is not None else _ORACLE_DEFAULT_M
    order = cfg.operator_order
    grid = Grid(cfg.interval, m)
    k = cfg.k if cfg.k is not None else 40
    spec = svd_snumbers(volterra_matrix(order, grid, 2.0), k=k)
    rows = []
    for i, s in enumerate(spec.values, start=1):
        row = [i, float(s)]
        if order == 1:
            ref = t1_reference(2.0, cfg.interval, i)
            row += [ref, float(s) / ref]
        rows.append(row)
    meta = _meta(m, note=GAMMA_NOTE)
    header = ["n", "value"] + (["reference", "ratio"] if order == 1 else [])
    if cfg.fmt == "csv":
        text = _csv_text(header, rows, meta)
    else:
        text = _json_text({
            "command": "oracle",
            "meta": meta,
            "parameters": {"target": "t1" if order == 1 else "t2",
                           "interval": [cfg.interval.a, cfg.interval.b],
                           "m": m, "k": k},
            "values": [dict(zip(header, row)) for row in rows],
        })
    _emit(text, cfg.output)
    return 0


def cmd_asymptote(cfg: RunConfig) -> int:
    if cfg.p != 2.0:
        print("the asymptote check needs the p = 2 oracle", file=sys.stderr)
        return 2
    if cfg.target is not None and cfg.target is not TargetOperator.T2:
        raise UsageError("the asymptote command applies to the Volterra target t2")
    m = cfg.m if cfg.m is not None else _ASYMPTOTE_DEFAULT_M
    n_max = cfg.n_hi
    grid = Grid(cfg.interval, m)
    spec = svd_snumbers(volterra_matrix(2, grid, 2.0), k=n_max)
    limit = cfg.interval.length ** 2 * reference_constant(2.0)
    rows = []
    for n in range(1, n_max + 1):
        s = spec.value(n)
        rows.append([n, s, n * n * s, n * n * s / limit - 1.0])
    meta = _meta(m, limit=limit, note=GAMMA_NOTE)
    if cfg.fmt == "csv":
        text = _csv_text(["n", "oracle", "n2_oracle", "rel_deviation"], rows, meta)
    else:
        text = _json_text({
            "command": "asymptote",
            "meta": meta,
            "parameters": {"target": "t2",
                           "interval": [cfg.interval.a, cfg.interval.b],
                           "m": m, "n_max": n_max},
            "rows": [dict(zip(["n", "oracle", "n2_oracle", "rel_deviation"], row))
                     for row in rows],
            "final_rel_deviation": rows[-1][3],
        })
    _emit(text, cfg.output)
    return 0


def cmd_factor_check(cfg: RunConfig) -> int:
    if cfg.trials < 1:
        raise UsageError("trials must be at least 1")
    grid = _grid_for(cfg)
    report = check_factorization(grid, cfg.trials, cfg.seed)
    payload = {
        "command": "factor-check",
        "meta": _meta(grid.m),
        "parameters": {"trials": cfg.trials, "seed": cfg.seed,
                       "interval": [cfg.interval.a, cfg.interval.b]},
        "report": dataclasses.asdict(report),
        "passed": report.passed,
    }
    _emit(_json_text(payload), cfg.output)
    if not report.passed:
        print("factorization identities failed; see report", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pbiharm",
        description="Extremal constants and two-sided s-number bound "
                    "certificates on an interval.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, target=True, nrange=None, trials=None):
        sp.add_argument("--p", type=float, default=2.0)
        sp.add_argument("--interval", default="0,1", metavar="A,B")
        sp.add_argument("--m", type=int, default=None,
                        help="grid nodes (default: scheme-dependent)")
        sp.add_argument("--format", dest="fmt", choices=("json", "csv"),
                        default="json")
        sp.add_argument("--output", default=None, metavar="PATH")
        if target:
            sp.add_argument("--target", default=None,
                            help="one of: e, ea, t2 (t1 also for oracle)")
        if nrange:
            sp.add_argument("--n", default=nrange, metavar="LO..HI|N")
        if trials is not None:
            sp.add_argument("--trials", type=int, default=trials)
            sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("constant", help="extremal constants for (p, interval)")
    common(sp, target=False)
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)

    sp = sub.add_parser("table", help="bracket table over an index range")
    common(sp, nrange="2..20")
    sp.add_argument("--oracle", default=None, choices=("svd",))
    sp.add_argument("--plot", default=None, metavar="SVG_PATH")

    sp = sub.add_parser("certify", help="run both certificate sides at one index")
    common(sp, nrange="5", trials=500)

    sp = sub.add_parser("oracle", help="singular values (p = 2)")
    common(sp)
    sp.add_argument("--k", type=int, default=None, help="values to compute")

    sp = sub.add_parser("asymptote", help="n^2 s_n against its limit")
    common(sp, nrange="40")

    sp = sub.add_parser("factor-check", help="double-integration identities")
    common(sp, target=False, trials=20)

    return parser


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig(command=args.command)
    cfg.p = float(getattr(args, "p", 2.0))
    cfg.interval = _parse_interval(getattr(args, "interval", "0,1"))
    cfg.m = getattr(args, "m", None)
    if cfg.m is not None and cfg.m < 3:
        raise UsageError("grid must have at least 3 nodes")
    cfg.fmt = getattr(args, "fmt", "json")
    cfg.output = getattr(args, "output", None)
    cfg.plot = getattr(args, "plot", None)
    cfg.oracle = getattr(args, "oracle", None)
    cfg.k = getattr(args, "k", None)
    cfg.tol = getattr(args, "tol", DEFAULT_TOL)
    if cfg.tol <= 0:
        raise UsageError("tol must be positive")
    target = getattr(args, "target", None)
    if args.command == "oracle":
        if target not in ("t1", "t2", None):
            raise UsageError(f"oracle target must be t1 or t2, got {target!r}")
        cfg.operator_order = 1 if target == "t1" else 2
    elif target is not None:
        cfg.target = _parse_target(target)
    elif args.command in ("table", "certify"):
        raise UsageError(f"--target is required for {args.command}")
    if hasattr(args, "n"):
        cfg.n_lo, cfg.n_hi = _parse_nrange(args.n)
        if cfg.n_lo < 1:
            raise UsageError("indices start at 1")
        if args.command == "certify" and cfg.n_lo != cfg.n_hi:
            raise UsageError("certify takes a single index n, not a range")
    if hasattr(args, "trials"):
        cfg.trials = args.trials
        cfg.seed = args.seed
    return cfg


_HANDLERS = {
    "constant": cmd_constant,
    "table": cmd_table,
    "certify": cmd_certify,
    "oracle": cmd_oracle,
    "asymptote": cmd_asymptote,
    "factor-check": cmd_factor_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return _HANDLERS[cfg.command](cfg)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
