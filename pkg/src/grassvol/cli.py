"""Command-line interface emitting figure-ready CSV or JSON.

Subcommands: ``volume`` (ball volume curves by any method), ``bounds``
(sphere-covering and sphere-packing cardinality bounds), ``distortion``
(rate-distortion curves: closed-form bound, random codes, Lloyd codebooks),
``hellinger`` (surrogate-accuracy sweeps), ``replay`` (re-run a recorded
manifest), and ``report`` (render the standard figures to files).

Every run writes a manifest describing the exact invocation and achieved
tolerances. The data payload goes to stdout or ``--out``; the manifest goes
to a ``<out>.manifest.json`` sidecar, or to stderr when printing to stdout,
so payload bytes are reproducible. Numbers carry 12 significant digits.

Exit codes: 0 success, 2 invalid parameters, 3 accuracy target not reached
(best-effort output is still emitted).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .exceptions import AccuracyError, NotTabulatedError, ParameterError
from .geometry import Params, canonicalize, max_radius_sq
from . import asymptotic, coding, exact, montecarlo

VOLUME_METHOD_ORDER = ("quadrature", "closed", "rmt", "finite", "mc")
BOUND_VOLUME_METHODS = ("quadrature", "closed", "rmt", "finite")
DISTORTION_METHOD_ORDER = ("bound", "random", "lloyd")


def _fmt(x) -> str:
    return format(float(x), ".12g")


def _parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ParameterError(f"--grid expects lo:hi:steps, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as err:
        raise ParameterError(f"bad --grid value {text!r}: {err}") from None
    if steps < 1 or hi < lo:
        raise ParameterError(f"--grid needs hi >= lo and steps >= 1, got {text!r}")
    return np.linspace(lo, hi, steps)


def _parse_bits_range(text: str) -> range:
    parts = text.split(":")
    if len(parts) != 2:
        raise ParameterError(f"--bits expects lo:hi, got {text!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError as err:
        raise ParameterError(f"bad --bits value {text!r}: {err}") from None
    if lo < 0 or hi < lo:
        raise ParameterError(f"--bits needs 0 <= lo <= hi, got {text!r}")
    return range(lo, hi + 1)


def _params_from_args(args) -> Params:
    return Params(args.n, args.p, args.q)


# ============================================================
# Row builders (one per data subcommand)
# ============================================================

def _volume_rows(args) -> tuple[list[str], list[dict], dict, int]:
    params = _params_from_args(args)
    if args.r is not None and args.grid is not None:
        raise ParameterError("give either --r or --grid, not both")
    if args.r is not None:
        radii = np.array([args.r], dtype=float)
    elif args.grid is not None:
        radii = _parse_grid(args.grid)
    else:
        raise ParameterError("one of --r or --grid is required")

    canon = canonicalize(params)
    tmax = float(max_radius_sq(params))
    if np.any(radii < 0) or np.any(radii ** 2 > tmax + 1e-9):
        raise ParameterError(
            f"radius out of range: need 0 <= r^2 <= {tmax} for {params}"
        )

    if args.method == "all":
        methods = list(VOLUME_METHOD_ORDER)
        if not exact.closed_form_supported(canon):
            methods.remove("closed")
    else:
        methods = [args.method]

    achieved: dict = {}
    exit_code = 0
    rows: list[dict] = []
    for method in methods:
        mus = stderrs = None
        errs = ""
        if method == "quadrature":
            config = exact.QuadratureConfig(abs_tol=args.tol, rel_tol=args.tol)
            try:
                mus, tol = exact.volume_curve(canon, radii, config)
            except AccuracyError as err:
                if err.estimate is None:
                    raise
                mus, tol = err.estimate, err.achieved_tol
                exit_code = 3
            achieved["quadrature_abs_tol"] = tol
            errs = _fmt(tol)
        elif method == "closed":
            mus = np.array(
                [float(exact.volume_closed_form(canon, r)) for r in radii]
            )
            errs = "0"
        elif method == "rmt":
            mus = np.atleast_1d(asymptotic.volume_rmt(canon, radii))
        elif method == "finite":
            mus = np.atleast_1d(asymptotic.volume_finite(canon, radii))
        elif method == "mc":
            mus, stderrs = montecarlo.estimate_volume_curve(
                canon, radii, args.samples, args.seed, threads=args.threads
            )
            achieved["mc_samples"] = args.samples
        for i, r in enumerate(radii):
            rows.append(
                {
                    "r": _fmt(r),
                    "r_sq": _fmt(r * r),
                    "mu": _fmt(mus[i]),
                    "method": method,
                    "abs_err_est": _fmt(stderrs[i]) if stderrs is not None else errs,
                    "stderr": _fmt(stderrs[i]) if stderrs is not None else "",
                }
            )
    columns = ["r", "r_sq", "mu", "method", "abs_err_est", "stderr"]
    return columns, rows, achieved, exit_code


def _volume_backend(name: str, tol: float):
    if name == "quadrature":
        config = exact.QuadratureConfig(abs_tol=tol, rel_tol=tol)
        return lambda params, r: exact.volume_quadrature(params, r, config)
    if name == "closed":
        return lambda params, r: float(exact.volume_closed_form(params, r))
    if name == "rmt":
        return asymptotic.volume_rmt
    if name == "finite":
        return asymptotic.volume_finite
    raise ParameterError(f"unknown volume method {name!r}")


def _bounds_rows(args) -> tuple[list[str], list[dict], dict, int]:
    params = _params_from_args(args)
    fn = _volume_backend(args.method, args.tol)
    if args.bound == "gv":
        value = coding.gv_bound(params, args.delta, fn)
    else:
        value = coding.hamming_bound(params, args.delta, fn)
    bits = math.inf if math.isinf(value) else math.log2(value)
    rows = [
        {
            "bound": args.bound,
            "delta": _fmt(args.delta),
            "method": args.method,
            "value": _fmt(value),
            "bits": _fmt(bits),
        }
    ]
    return ["bound", "delta", "method", "value", "bits"], rows, {}, 0


def _distortion_rows(args) -> tuple[list[str], list[dict], dict, int]:
    params = Params(args.n, args.p, args.p)
    methods = (
        list(DISTORTION_METHOD_ORDER) if args.method == "all" else [args.method]
    )
    sizes = [2 ** b for b in _parse_bits_range(args.bits)]
    bound_exempt = (args.n, args.p) == (2, 1)
    rows: list[dict] = []
    for method in methods:
        for N in sizes:
            if method == "bound":
                value, err = coding.distortion_lower_bound(params, N), ""
                valid = "false" if bound_exempt else "true"
            elif method == "random":
                rep = coding.random_code_distortion(
                    params, N, args.samples, args.trials, args.seed
                )
                value, err, valid = rep.distortion, _fmt(rep.stderr), "true"
            else:
                _, rep = coding.lloyd_quantizer(
                    params, N, args.samples, args.iters, args.seed
                )
                value, err, valid = rep.distortion, _fmt(rep.stderr), "true"
            rows.append(
                {
                    "N": str(N),
                    "bits": _fmt(math.log2(N)),
                    "distortion": _fmt(value),
                    "method": method,
                    "stderr": err,
                    "bound_valid": valid,
                }
            )
    columns = ["N", "bits", "distortion", "method", "stderr", "bound_valid"]
    return columns, rows, {"samples": args.samples}, 0


def _hellinger_rows(args) -> tuple[list[str], list[dict], dict, int]:
    if args.a < 0 or args.b < 0:
        raise ParameterError("--a and --b must be nonnegative")
    if args.pmax < 1:
        raise ParameterError("--pmax must be at least 1")
    rows = []
    for p in range(1, args.pmax + 1):
        params = Params(2 * p + args.a + args.b, p, p + args.a)
        rows.append(
            {
                "p": str(p),
                "hellinger": _fmt(asymptotic.surrogate_hellinger(params)),
            }
        )
    return ["p", "hellinger"], rows, {}, 0


# ============================================================
# Output plumbing
# ============================================================

def _render_csv(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([row[c] for c in columns])
    return buf.getvalue()


def _render_json(command: str, args_dict: dict, columns, rows) -> str:
    doc = {
        "command": command,
        "params": args_dict,
        "columns": columns,
        "rows": rows,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _public_args(args) -> dict:
    skip = {"func", "rows_fn"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip or v is None:
            continue
        out[k] = str(v) if isinstance(v, Path) else v
    return out


def _emit(args, argv, command, columns, rows, achieved, started, exit_code) -> int:
    if args.json:
        payload = _render_json(command, _public_args(args), columns, rows)
    else:
        payload = _render_csv(columns, rows)
    manifest = {
        "tool": "grassvol",
        "version": __version__,
        "command": command,
        "argv": list(argv),
        "args": _public_args(args),
        "achieved": achieved,
        "elapsed_s": round(time.monotonic() - started, 6),
        "output": str(args.out) if args.out else "stdout",
        "format": "json" if args.json else "csv",
        "exit_code": exit_code,
    }
    if args.out:
        Path(args.out).write_text(payload)
        Path(str(args.out) + ".manifest.json").write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n"
        )
    else:
        sys.stdout.write(payload)
        sys.stderr.write(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return exit_code


def _run_data_command(args, argv, command, rows_fn) -> int:
    started = time.monotonic()
    columns, rows, achieved, exit_code = rows_fn(args)
    return _emit(args, argv, command, columns, rows, achieved, started, exit_code)


def _cmd_replay(args, argv) -> int:
    manifest = json.loads(Path(args.manifest).read_text())
    stored = list(manifest.get("argv", []))
    if not stored:
        raise ParameterError(f"manifest {args.manifest} has no argv to replay")
    if stored[0] == "replay":
        raise ParameterError("refusing to replay a replay manifest")
    cleaned = []
    skip_next = False
    for tok in stored:
        if skip_next:
            skip_next = False
            continue
        if tok == "--out":
            skip_next = True
            continue
        cleaned.append(tok)
    if args.out:
        cleaned += ["--out", str(args.out)]
    return main(cleaned)


def _cmd_report(args, argv) -> int:
    from . import report

    started = time.monotonic()
    written = report.generate_report(
        args.outdir, quick=args.quick, seed=args.seed
    )
    manifest = {
        "tool": "grassvol",
        "version": __version__,
        "command": "report",
        "argv": list(argv),
        "args": _public_args(args),
        "achieved": {},
        "elapsed_s": round(time.monotonic() - started, 6),
        "output": str(args.outdir),
        "format": "files",
        "exit_code": 0,
    }
    Path(args.outdir, "report.manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )
    for path in written:
        sys.stdout.write(f"{path}\n")
    return 0


# ============================================================
# Parser
# ============================================================

def _add_common_output(sub) -> None:
    sub.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    sub.add_argument("--out", type=Path, default=None, help="write payload to file")


def _add_triple(sub) -> None:
    sub.add_argument("--n", type=int, required=True, help="ambient dimension")
    sub.add_argument("--p", type=int, required=True, help="center subspace dimension")
    sub.add_argument("--q", type=int, required=True, help="moving subspace dimension")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grassvol",
        description="Volumes of chordal balls in complex Grassmannians, with "
        "packing bounds and rate-distortion tools.",
    )
    parser.add_argument(
        "--version", action="version", version=f"grassvol {__version__}"
    )
    subs = parser.add_subparsers(dest="command", required=True)

    vol = subs.add_parser("volume", help="ball volume at one or many radii")
    _add_triple(vol)
    vol.add_argument("--r", type=float, default=None, help="single radius")
    vol.add_argument("--grid", default=None, help="radius grid lo:hi:steps")
    vol.add_argument(
        "--method",
        choices=VOLUME_METHOD_ORDER + ("all",),
        default="quadrature",
    )
    vol.add_argument("--samples", type=int, default=100000, help="MC sample count")
    vol.add_argument("--seed", type=int, default=0)
    vol.add_argument("--tol", type=float, default=1e-8, help="quadrature tolerance")
    vol.add_argument("--threads", type=int, default=1, help="MC worker threads")
    _add_common_output(vol)
    vol.set_defaults(rows_fn=_volume_rows)

    bnd = subs.add_parser("bounds", help="code-size bounds from ball volumes")
    _add_triple(bnd)
    bnd.add_argument("--delta", type=float, required=True, help="minimum distance")
    bnd.add_argument("--bound", choices=("gv", "hamming"), required=True)
    bnd.add_argument("--method", choices=BOUND_VOLUME_METHODS, default="quadrature")
    bnd.add_argument("--tol", type=float, default=1e-8)
    _add_common_output(bnd)
    bnd.set_defaults(rows_fn=_bounds_rows)

    dis = subs.add_parser("distortion", help="distortion-rate curves (q = p)")
    dis.add_argument("--n", type=int, required=True)
    dis.add_argument("--p", type=int, required=True)
    dis.add_argument("--bits", required=True, help="rate range lo:hi, N = 2^bits")
    dis.add_argument(
        "--method",
        choices=DISTORTION_METHOD_ORDER + ("all",),
        default="bound",
    )
    dis.add_argument("--samples", type=int, default=20000)
    dis.add_argument("--trials", type=int, default=4, help="random codebooks per N")
    dis.add_argument("--iters", type=int, default=15, help="Lloyd iterations")
    dis.add_argument("--seed", type=int, default=0)
    _add_common_output(dis)
    dis.set_defaults(rows_fn=_distortion_rows)

    hel = subs.add_parser(
        "hellinger", help="surrogate Hellinger distance versus subspace dimension"
    )
    hel.add_argument("--a", type=int, required=True, help="q - p offset")
    hel.add_argument("--b", type=int, required=True, help="n - p - q offset")
    hel.add_argument("--pmax", type=int, required=True)
    _add_common_output(hel)
    hel.set_defaults(rows_fn=_hellinger_rows)

    rep = subs.add_parser("replay", help="re-run a recorded manifest")
    rep.add_argument("--manifest", type=Path, required=True)
    rep.add_argument("--out", type=Path, default=None)

    fig = subs.add_parser("report", help="render standard figures and their CSVs")
    fig.add_argument("--outdir", type=Path, required=True)
    fig.add_argument("--quick", action="store_true", help="smaller sample sizes")
    fig.add_argument("--seed", type=int, default=0)

    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "replay":
            return _cmd_replay(args, argv)
        if args.command == "report":
            return _cmd_report(args, argv)
        return _run_data_command(args, argv, args.command, args.rows_fn)
    except (ParameterError, NotTabulatedError) as err:
        sys.stderr.write(f"grassvol: error: {err}\n")
        return 2
    except AccuracyError as err:
        sys.stderr.write(f"grassvol: accuracy: {err}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
