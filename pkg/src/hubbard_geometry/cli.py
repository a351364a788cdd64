"""Command-line harness: run check suites and write a JSON report.

Exit status is 0 when every check meets its expectation, 1 when at least
one does not, and 2 for usage or configuration errors.  Every flag has an
environment-variable twin named ``HUBGEO_<FLAG>`` (for example
``HUBGEO_PRECISION=256`` or ``HUBGEO_U=1,2,1+i``); flags win over the
environment.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from typing import Sequence, TextIO

import mpmath

from . import __version__
from .checks import DEFAULT_U, SUITES, ConfigError, RunConfig, parse_coupling, run
from .elliptic import GUARD_BITS, PoleError, ThetaContext, to_mp, uniformize

ENV_PREFIX = "HUBGEO_"
CSV_COLUMNS = ("λ_re", "λ_im", "xc", "yc", "thc", "curve_residual", "flag")

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _env(name: str):
    return os.environ.get(ENV_PREFIX + name)


def _env_bool(name: str) -> bool:
    v = _env(name)
    return v is not None and v.strip().lower() in ("1", "true", "yes", "on")


def _env_list(name: str) -> list[str] | None:
    v = _env(name)
    return [s.strip() for s in v.split(",") if s.strip()] if v else None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hubgeo",
        description="Verify the curve, uniformization, Lax, R-matrix and fibration identities "
                    "of the one-dimensional Hubbard model.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--suite", action="append", choices=SUITES + ("all",),
                   help="suite to run (repeatable; default all)")
    p.add_argument("--precision", type=int, help="working precision in bits (default 128)")
    p.add_argument("--tolerance-exponent", type=int,
                   help="numeric tolerance is 2^-E (default precision/2 - 12)")
    p.add_argument("--samples", type=int, help="random spectral parameters per coupling (default 100)")
    p.add_argument("--seed", type=int, help="seed of the counter-based sampler (default 0)")
    p.add_argument("--u", action="append", metavar="U",
                   help="coupling, e.g. 2, -1/3 or 1+i (repeatable; default 1, 2, 3, 1+i)")
    p.add_argument("--stretch", action="store_true", default=None, help="also run the symbolic WEIF reduction")
    p.add_argument("--mutations", action="store_true", default=None,
                   help="add single-coefficient mutation controls (expected to fail)")
    p.add_argument("--timings", action="store_true", default=None,
                   help="record per-check runtimes (makes the report run-dependent)")
    p.add_argument("--jobs", type=int, help="worker processes (default 1)")
    p.add_argument("--out", help="write the report here instead of standard output")
    p.add_argument("--emit-weights", metavar="CSV",
                   help="write a table of uniformized weights for the first coupling and exit")
    p.add_argument("--grid", type=int, help="points per axis of the --emit-weights grid (default 9)")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    def pick(flag, env, conv, default):
        if flag is not None:
            return flag
        raw = _env(env)
        if raw is None:
            return default
        try:
            return conv(raw)
        except ValueError as exc:
            raise ConfigError(f"{ENV_PREFIX}{env}={raw!r}: {exc}") from exc

    suites = args.suite or _env_list("SUITE") or ["all"]
    us = args.u or _env_list("U") or list(DEFAULT_U)
    return RunConfig(
        precision_bits=pick(args.precision, "PRECISION", int, 128),
        tolerance_exponent=pick(args.tolerance_exponent, "TOLERANCE_EXPONENT", int, None),
        sample_count=pick(args.samples, "SAMPLES", int, 100),
        seed=pick(args.seed, "SEED", int, 0),
        U_list=tuple(us),
        suites=tuple(suites),
        stretch=args.stretch if args.stretch is not None else _env_bool("STRETCH"),
        mutations=args.mutations if args.mutations is not None else _env_bool("MUTATIONS"),
        timings=args.timings if args.timings is not None else _env_bool("TIMINGS"),
        jobs=pick(args.jobs, "JOBS", int, 1),
    )


# --- weight tables --------------------------------------------------------------


def _cx(v, digits: int) -> str:
    v = mpmath.mpc(v)
    re = mpmath.nstr(v.real, digits, min_fixed=1, max_fixed=0)
    im = mpmath.nstr(v.imag, digits, min_fixed=1, max_fixed=0)
    return f"{re}{'' if im.startswith('-') else '+'}{im}j"


def weight_grid(U, n: int = 9, prec: int = 128):
    """``lambda = s K + t i K'/4`` with ``s`` in [-1, 1] and ``t`` in [-1, 1], ``n`` points per axis."""
    if n < 1:
        raise ConfigError("grid needs at least one point per axis")
    with mpmath.workprec(prec + GUARD_BITS):
        U = to_mp(U)
        if U == 0:
            K, Kp = mpmath.pi / 2, mpmath.mpf(1)
        else:
            ctx = ThetaContext.for_coupling(U, prec)
            K, Kp = ctx.K, ctx.Kp
        steps = [mpmath.mpf(0)] if n == 1 else [mpmath.mpf(2 * k) / (n - 1) - 1 for k in range(n)]
        i = mpmath.mpc(0, 1)
        return [s * K + t * i * Kp / 4 for t in steps for s in steps]


def emit_weights(lams, U, fh: TextIO, prec: int = 128) -> int:
    """Write one CSV row per spectral parameter; poles are flagged, not dropped.  Returns the pole count."""
    digits = int(prec * 0.30103) + 2
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    poles = 0
    with mpmath.workprec(prec + GUARD_BITS):
        Um = to_mp(U)
        for lam in lams:
            lam = mpmath.mpc(to_mp(lam))
            head = [mpmath.nstr(lam.real, digits, min_fixed=1, max_fixed=0),
                    mpmath.nstr(lam.imag, digits, min_fixed=1, max_fixed=0)]
            try:
                w = uniformize(lam, Um, "sn", prec)
            except PoleError:
                poles += 1
                writer.writerow(head + ["", "", "", "", "pole"])
                continue
            res = abs(w.curve_residual(Um))
            writer.writerow(head + [_cx(w.xc, digits), _cx(w.yc, digits), _cx(w.thc, digits),
                                    mpmath.nstr(res, 6, min_fixed=1, max_fixed=0), "ok"])
    return poles


# --- entry point -----------------------------------------------------------------


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    def usage_error(exc) -> int:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    emit = args.emit_weights or _env("EMIT_WEIGHTS")
    if emit:
        # U = 0 (the trigonometric limit) is allowed here, unlike in the check suites.
        try:
            U = parse_coupling((args.u or _env_list("U") or list(DEFAULT_U))[0])
            prec = args.precision if args.precision is not None else int(_env("PRECISION") or 128)
            grid = args.grid if args.grid is not None else int(_env("GRID") or 9)
            if prec < 64:
                raise ConfigError("precision must be at least 64 bits")
            if U != 0 and U * U + 16 == 0:
                raise ConfigError(f"coupling {U} is degenerate (U^2 = -16)")
            lams = weight_grid(U, grid, prec)
        except (ConfigError, ValueError) as exc:
            return usage_error(exc)
        with open(emit, "w", encoding="utf-8", newline="") as fh:
            poles = emit_weights(lams, U, fh, prec)
        print(f"wrote {len(lams)} rows to {emit} ({poles} flagged as poles)", file=sys.stderr)
        return EXIT_PASS

    try:
        config = config_from_args(args)
    except (ConfigError, ValueError) as exc:
        return usage_error(exc)

    report = run(config)
    text = report.to_json()
    out = args.out or _env("OUT")
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failed = [r.name for r in report.records if not r.ok]
    if failed:
        print(f"{len(failed)} check(s) did not meet expectation: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
