"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 usage or configuration error.
The worker-thread count for sweeps is read from ``TURNPOINT_THREADS``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

from . import __version__

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
THREADS_ENV = "TURNPOINT_THREADS"


class ConfigError(ValueError):
    """Invalid configuration value."""


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be >= 1")
    return n


def _pmap(fn: Callable, items: Sequence) -> list:
    """Order-preserving map over worker threads."""
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(n) as ex:
        return list(ex.map(fn, items))


# -- output -----------------------------------------------------------------


def _num(v) -> str:
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def _emit(args, header: Sequence[str], rows: Sequence[Sequence], footer: dict | None = None):
    fmt = getattr(args, "out", "csv")
    if fmt == "json":
        doc = {"columns": list(header), "rows": [dict(zip(header, (_jsonable(v) for v in r)))
                                                 for r in rows]}
        if footer:
            doc.update({k: _jsonable(v) for k, v in footer.items()})
        text = json.dumps(doc, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_num(v) for v in r])
        if footer:
            buf.write("# " + ",".join(f"{k}={_num(v)}" for k, v in footer.items()) + "\n")
        text = buf.getvalue()
    _write(args, text)


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    return v


def _write(args, text: str) -> None:
    path = getattr(args, "output", None)
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- argument validation ----------------------------------------------------


def _positive(name: str, v: float, upper: float | None = None) -> float:
    if not (math.isfinite(v) and v > 0):
        raise ConfigError(f"--{name} must be a positive number")
    if upper is not None and v > upper:
        raise ConfigError(f"--{name} must be <= {upper}")
    return v


def _eps_list(text: str) -> list[float]:
    try:
        vals = [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse eps list {text!r}") from exc
    if len(vals) < 1:
        raise ConfigError("empty eps list")
    return [_positive("eps", v, 0.5) for v in vals]


def _selftest(checks: list[tuple[str, Callable[[], bool]]]) -> int:
    ok = True
    for name, fn in checks:
        try:
            good = bool(fn())
        except Exception as exc:  # report and continue
            good = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        ok &= good
        print(f"[{'PASS' if good else 'FAIL'}] {name}")
    return EXIT_OK if ok else EXIT_FAIL


# -- subcommands ------------------------------------------------------------


def _cmd_approx(args) -> int:
    from .approximant import uniform_wu_grid
    from .problem import ProblemSpec, load_problem
    from .airy import airy_eval

    if args.selftest:
        p = ProblemSpec((0.0, 1.0), nu0=0.5)

        def j2_airy():
            w = uniform_wu_grid(p, 1e-2, 0.2, [0.05])[0]
            return w.interval == "J2" and w.x == airy_eval(-0.05 * 1e-2 ** (-2 / 3)).ai

        def j1_airy():
            w = uniform_wu_grid(p, 1e-2, 0.2, [-0.3])[0]
            a = airy_eval(0.3 * 1e-2 ** (-2 / 3)).ai
            return w.interval == "J1" and abs(w.x * math.exp(w.log) - a) <= 1e-12 * a

        return _selftest([("mu=t, J2: x = Ai exactly", j2_airy),
                          ("mu=t, J1: exponential correction is 1", j1_airy)])
    p = load_problem(args.problem)
    eps = _positive("eps", args.eps, 0.5)
    delta = _positive("delta", args.delta)
    if args.grid < 2:
        raise ConfigError("--grid must be >= 2")
    nu = p.nu0 if args.nu is None else _positive("nu", args.nu, p.nu0)
    ts = np.linspace(-nu, nu, args.grid)
    pts = uniform_wu_grid(p, eps, delta, ts)
    rows = [(w.t, w.x, w.y, w.log, w.interval) for w in pts]
    _emit(args, ["t", "x", "y", "log", "interval"], rows)
    return EXIT_OK


def _cmd_airy_table(args) -> int:
    from .airy import airy_eval

    def table(a, b, h):
        n = int(round((b - a) / h)) + 1
        return [a + k * h for k in range(n) if a + k * h <= b + 1e-12 * max(1, abs(b))]

    if args.selftest:
        def rows15():
            return len(table(-5.0, 2.0, 0.5)) == 15

        def wron():
            return all(abs(airy_eval(x).wronskian * math.pi - 1) < 1e-12
                       for x in table(-5.0, 2.0, 0.5))

        def zero():
            q = airy_eval(0.0)
            return abs(q.ai - 0.3550280538878172) < 1e-15 and abs(q.aip + 0.2588194037928068) < 1e-15

        return _selftest([("-5..2 step 0.5 gives 15 rows", rows15),
                          ("Wronskian column is 1/pi", wron), ("Ai(0), Ai'(0)", zero)])
    h = _positive("step", args.step)
    if args.to < args.start:
        raise ConfigError("--to must be >= --from")
    rows = []
    for x in table(args.start, args.to, h):
        q = airy_eval(x)
        rows.append((x, q.ai, q.aip, q.bi, q.bip, q.wronskian))
    _emit(args, ["x", "Ai", "Aip", "Bi", "Bip", "wronskian"], rows)
    return EXIT_OK


def _cmd_series(args) -> int:
    from .problem import ProblemSpec, load_problem
    from .series import b0_coeffs, ell_riccati_coeffs, hyp_riccati_coeffs, nu_series

    if args.selftest:
        p = ProblemSpec((0.0, 1.0), nu0=2.0)

        def hyp():
            h = hyp_riccati_coeffs(p, -1.0, 3).coeffs
            return np.allclose(h, [1, 0.25, -0.15625, 0.234375], rtol=0, atol=1e-15)

        def b():
            c = b0_coeffs(2).coeffs
            return c[1] == -0.25j and c[2] == -7 / 32

        def ell():
            return abs(ell_riccati_coeffs(p, 1.0, 1).coeffs[1] + 0.25j) < 1e-15

        return _selftest([("mu=t, t=-1 slope coefficients", hyp), ("b1=-i/4, b2=-7/32", b),
                          ("mu=t, R1(1) = -i/4", ell)])
    if args.order < 1 or args.order > 60:
        raise ConfigError("--order must be in [1, 60]")
    if args.side == "b0":
        s = b0_coeffs(args.order)
    else:
        p = load_problem(args.problem)
        if args.t is None:
            raise ConfigError("--t is required for this side")
        fn = {"hyperbolic": hyp_riccati_coeffs, "elliptic": ell_riccati_coeffs,
              "nu": nu_series}[args.side]
        s = fn(p, args.t, args.order)
    rows = [(k, complex(c).real, complex(c).imag) for k, c in enumerate(s.coeffs)]
    _emit(args, ["order", "re", "im"], rows)
    return EXIT_OK


def _charts_report(p) -> dict:
    from . import blowup
    from .validation import criterion_7

    r = criterion_7()
    s = blowup.chart1_hu(p, 0.0, 0.2)
    z = 0.2 ** (-2.0 / 3.0)
    from .airy import airy_eval
    q = airy_eval(z)
    u1 = -0.2 ** (1.0 / 3.0) * q.aip / q.ai
    hu_ok = abs(s.slope - u1) <= 1e-12 * abs(u1)
    crit = blowup.chart1_hu(p, 0.3, 0.0)
    crit_ok = abs(crit.slope - math.sqrt(float(np.polyval(p.mu_hat_coeffs()[::-1], -0.09)))) < 1e-14
    checks = {"geometry": {"passed": r.passed, **{k: _jsonable(v) for k, v in r.detail.items()}},
              "chart1_r0": {"passed": bool(hu_ok), "slope": s.slope, "airy_ratio": u1},
              "chart1_critical": {"passed": bool(crit_ok), "slope": crit.slope}}
    checks["passed"] = all(v["passed"] for v in checks.values())
    return checks


def _cmd_charts_check(args) -> int:
    from . import blowup
    from .problem import load_problem

    if args.selftest:
        def tplus():
            out = blowup.to_physical(blowup.ChartPoint("Tplus", (1, 0, 0.3, 1)))
            return np.allclose(out, (1, 0, 0.09, 0.027), rtol=1e-15, atol=0)

        def escale():
            out = blowup.to_physical(blowup.ChartPoint("Escale", (1, 2, -1, 0.1)))
            return np.allclose(out, (1, 0.2, -0.01, 0.001), rtol=1e-15, atol=0)

        def trans():
            cp = blowup.transition(blowup.ChartPoint("Escale", (0, 1, 4, 0.1)), "Tplus")
            return np.allclose(cp.coords, (0, 0.5, 0.2, 0.125), rtol=1e-15, atol=0)

        return _selftest([("Tplus blow-down", tplus), ("Escale blow-down", escale),
                          ("Escale -> Tplus", trans)])
    p = load_problem(args.problem)
    rep = _charts_report(p)
    _write(args, json.dumps(rep, indent=2, default=_jsonable) + "\n")
    return EXIT_OK if rep["passed"] else EXIT_FAIL


def _cmd_validate(args) -> int:
    from .reference import rate_fit
    from .validation import run_all

    if args.selftest:
        e = np.geomspace(1e-1, 1e-3, 6)
        return _selftest([
            ("rate_fit: e = eps^(2/3) gives 2/3",
             lambda: abs(rate_fit(zip(e, e ** (2 / 3))).slope - 2 / 3) < 1e-12),
            ("rate_fit: e = 3 eps gives 1", lambda: abs(rate_fit(zip(e, 3 * e)).slope - 1) < 1e-12),
        ])
    sel = None
    if args.criteria:
        try:
            sel = {int(s) for s in args.criteria.split(",")}
        except ValueError as exc:
            raise ConfigError("--criteria must be a comma-separated list of integers") from exc
        if not sel <= set(range(1, 10)):
            raise ConfigError("criteria are numbered 1..9")
    results = run_all(sel)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


def _cmd_rates(args) -> int:
    from .approximant import approximant_error, direction_error
    from .problem import load_problem
    from .reference import rate_fit

    if args.selftest:
        e = np.geomspace(1e-1, 1e-3, 6)
        return _selftest([
            ("e = eps^(2/3) gives slope 2/3",
             lambda: abs(rate_fit(zip(e, e ** (2 / 3))).slope - 2 / 3) < 1e-12),
            ("e = 3 eps gives slope 1", lambda: abs(rate_fit(zip(e, 3 * e)).slope - 1) < 1e-12),
        ])
    p = load_problem(args.problem)
    eps = _eps_list(args.eps)
    if len(eps) < 3:
        raise ConfigError("rates needs at least three eps values")
    delta = _positive("delta", args.delta)
    if args.quantity == "approx":
        window = _positive("window", args.window, p.nu0)
        errs = _pmap(lambda e: approximant_error(p, e, delta, window).sup, eps)
    else:
        nu = _positive("nu", args.nu, p.nu0)
        errs = _pmap(lambda e: direction_error(p, nu, e), eps)
    fit = rate_fit(zip(eps, errs))
    _emit(args, ["eps", "sup_error"], list(zip(eps, errs)),
          {"slope": fit.slope, "half_width": fit.half_width})
    return EXIT_OK


def _cmd_eigen(args) -> int:
    from .eigen import bs_energies, eigen_table, reference_energies
    from .problem import load_well

    if args.selftest:
        return _selftest([
            ("V=t^2, eps=0.5, n=0: E_bs = 0.5", lambda: abs(bs_energies([0, 0, 1], 0.5, 0)[0] - 0.5) < 1e-12),
            ("V=t^2, eps=0.05, n=3: E_ref = 0.35",
             lambda: abs(reference_energies([0, 0, 1], 0.05, 3)[3] - 0.35) < 1e-8),
        ])
    v, _ = load_well(args.well)
    eps = _positive("eps", args.eps, 0.5)
    if args.nmax < 0:
        raise ConfigError("--nmax must be >= 0")
    res = eigen_table(v, eps, args.nmax, threads=_threads())
    rows = [(r.n, r.E_bs, r.E_ref, r.gap, r.gap_over_eps) for r in res]
    _emit(args, ["n", "E_bs", "E_ref", "gap", "gap_over_eps"], rows)
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="turnpoint", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"turnpoint {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, fmt=True):
        sp.add_argument("--selftest", action="store_true", help="run built-in examples and exit")
        if fmt:
            sp.add_argument("--out", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", help="write to this file instead of stdout")

    sp = sub.add_parser("approx", help="evaluate the uniform approximant on a grid")
    sp.add_argument("--problem", default="quad")
    sp.add_argument("--eps", type=float, default=1e-2)
    sp.add_argument("--delta", type=float, default=0.2)
    sp.add_argument("--grid", type=int, default=400)
    sp.add_argument("--nu", type=float)
    common(sp)
    sp.set_defaults(func=_cmd_approx)

    sp = sub.add_parser("airy-table", help="tabulate Ai, Ai', Bi, Bi'")
    sp.add_argument("--from", dest="start", type=float, default=-5.0)
    sp.add_argument("--to", type=float, default=2.0)
    sp.add_argument("--step", type=float, default=0.5)
    common(sp)
    sp.set_defaults(func=_cmd_airy_table)

    sp = sub.add_parser("series", help="dump formal series coefficients")
    sp.add_argument("--problem", default="quad")
    sp.add_argument("--t", type=float)
    sp.add_argument("--side", choices=("hyperbolic", "elliptic", "nu", "b0"), default="elliptic")
    sp.add_argument("--order", type=int, default=6)
    common(sp)
    sp.set_defaults(func=_cmd_series)

    sp = sub.add_parser("charts-check", help="blowup chart round-trip and conservation report")
    sp.add_argument("--problem", default="quad")
    common(sp, fmt=False)
    sp.set_defaults(func=_cmd_charts_check)

    sp = sub.add_parser("validate", help="run the acceptance criteria")
    sp.add_argument("--criteria", help="comma-separated subset of 1..9")
    common(sp, fmt=False)
    sp.set_defaults(func=_cmd_validate)

    sp = sub.add_parser("rates", help="error-versus-eps sweep with fitted slope")
    sp.add_argument("--problem", default="quad")
    sp.add_argument("--eps", default="1e-1,5e-2,2.5e-2,1.25e-2")
    sp.add_argument("--delta", type=float, default=0.2)
    sp.add_argument("--window", type=float, default=0.2)
    sp.add_argument("--quantity", choices=("approx", "direction"), default="approx")
    sp.add_argument("--nu", type=float, default=0.25)
    common(sp)
    sp.set_defaults(func=_cmd_rates)

    sp = sub.add_parser("eigen", help="Bohr-Sommerfeld versus shooting eigenvalues")
    sp.add_argument("--well", default="harmonic")
    sp.add_argument("--eps", type=float, default=1e-2)
    sp.add_argument("--nmax", type=int, default=8)
    common(sp)
    sp.set_defaults(func=_cmd_eigen)
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv`` and dispatch; returns the exit code."""
    from .problem import ProblemError

    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except (ConfigError, ProblemError, OSError) as exc:
        print(f"turnpoint: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
