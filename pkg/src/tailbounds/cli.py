"""Command-line surface: single-point evaluation, grid sweeps, Monte Carlo.

Exit codes: 0 ok, 2 argument error, 3 solver failure, 4 unwritable output.
Within a sweep row, NA means a method exists but is inapplicable there
(a finding); an empty field means the value is unavailable (no formula
or not requested).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import bounds, montecarlo
from .exceptions import (
    ArgumentError,
    ConvergenceError,
    ParameterError,
    RangeError,
    SolverFailure,
    TailBoundsError,
)
from .models import exact_tail, make_model, parse_spec

SWEEP_COLUMNS = (
    "y", "exact", "chernoff",
    "new_lower", "new_alpha", "new_delta", "new_alpha_hat",
    "stroock", "stroock_alpha", "bo", "bo_alpha",
    "saddlepoint", "mc_p_hat", "mc_ci_lo", "mc_ci_hi",
)
_PROB_COLUMNS = frozenset(
    ("exact", "chernoff", "new_lower", "stroock", "bo", "saddlepoint",
     "mc_p_hat", "mc_ci_lo", "mc_ci_hi")
)
_ALL_BOUNDS = ("chernoff", "new", "stroock", "bo", "saddlepoint")

NA = "NA"


def _parse_bounds(text: str) -> tuple[str, ...]:
    names = tuple(tok.strip() for tok in text.split(",") if tok.strip())
    for name in names:
        if name not in _ALL_BOUNDS:
            raise ArgumentError(f"unknown bound {name!r}; choose from {','.join(_ALL_BOUNDS)}")
    return names


def _parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ArgumentError(f"grid must be min:max:steps, got {text!r}")
    try:
        y_min, y_max, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ArgumentError(f"bad grid {text!r}: {exc}") from None
    if steps < 2:
        raise ArgumentError(f"grid needs steps >= 2, got {steps}")
    if not y_min < y_max:
        raise ArgumentError(f"grid needs y_min < y_max, got {y_min} >= {y_max}")
    return y_min, y_max, steps


def _compute_row(task) -> dict:
    """One sweep row; module-level and tuple-driven so process pools can map it."""
    dist_text, y, sel, mc_cfg, trunc_nats, quad_tol, stream = task
    model = make_model(parse_spec(dist_text))
    row = {c: None for c in SWEEP_COLUMNS}
    row["y"] = y
    row["exact"] = exact_tail(model, y)
    if "chernoff" in sel:
        row["chernoff"] = bounds.chernoff_upper(model, y)
    if "new" in sel:
        res = bounds.lower_bound_new(model, y)
        if res.status != "ok":
            raise SolverFailure(
                f"lower_bound_new failed at y={y}: {res.diagnostics.get('reason', res.status)}",
                diagnostics=res.diagnostics,
            )
        row["new_lower"] = res.value
        row["new_alpha"] = res.alpha_opt
        row["new_delta"] = res.delta_opt
        row["new_alpha_hat"] = res.alpha_hat
    if "stroock" in sel:
        res = bounds.stroock_lower(model, y)
        if res.status == "ok":
            row["stroock"] = res.value
            row["stroock_alpha"] = res.alpha_opt
        else:
            row["stroock"] = NA
            row["stroock_alpha"] = NA
    if "bo" in sel:
        res = bounds.bo_lower(model, y)
        if res.status == "ok":
            row["bo"] = res.value
            row["bo_alpha"] = res.alpha_opt
        else:
            row["bo"] = NA
            row["bo_alpha"] = NA
    if "saddlepoint" in sel:
        row["saddlepoint"] = bounds.saddlepoint_tail(
            model, y, trunc_nats=trunc_nats, rel_tol=quad_tol
        )
    if mc_cfg is not None:
        samples, seed, confidence = mc_cfg
        est = montecarlo.empirical_tail(
            montecarlo.sample(parse_spec(dist_text), seed, samples, stream=stream),
            y, confidence,
        )
        row["mc_p_hat"] = est.p_hat
        row["mc_ci_lo"] = est.ci_lo
        row["mc_ci_hi"] = est.ci_hi
    return row


def format_field(column: str, value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if column in _PROB_COLUMNS:
        return f"{value:.5e}"
    return f"{value:.10g}"


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([format_field(c, row[c]) for c in SWEEP_COLUMNS])
    return buf.getvalue()


def render_json(rows: list[dict]) -> str:
    return json.dumps(rows, indent=2) + "\n"


def _emit(text: str, out_path: str | None) -> int:
    if out_path is None:
        sys.stdout.write(text)
        return 0
    try:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {out_path}: {exc}", file=sys.stderr)
        return 4
    return 0


def _cmd_eval(args) -> int:
    model = make_model(parse_spec(args.dist))
    if not args.y > model.mean:
        raise ArgumentError(f"y must exceed the mean ({model.mean:g})")
    sel = _parse_bounds(args.bounds)
    row = _compute_row((args.dist, args.y, sel, None, args.trunc_nats, args.tol, 0))
    ps = ",".join(f"{p:g}" for p in model.params)
    print(f"model {model.name}:{ps}  mean {model.mean:.10g}  xi_star {model.xi_star:.10g}")
    print(f"y {args.y:.10g}")
    if row["exact"] is not None:
        print(f"exact        {row['exact']:.5e}")
    if "chernoff" in sel:
        print(f"chernoff     {row['chernoff']:.5e}")
    if "new" in sel:
        print(
            f"new_lower    {row['new_lower']:.5e}  "
            f"(alpha* {row['new_alpha']:.6g}, delta* {row['new_delta']:.6g}, "
            f"alpha_hat {row['new_alpha_hat']:.6g})"
        )
    if "stroock" in sel:
        if row["stroock"] == NA:
            print("stroock      NA")
        else:
            print(f"stroock      {row['stroock']:.5e}  (alpha* {row['stroock_alpha']:.6g})")
    if "bo" in sel:
        if row["bo"] == NA:
            print("bo           NA")
        else:
            print(f"bo           {row['bo']:.5e}  (alpha* {row['bo_alpha']:.6g})")
    if "saddlepoint" in sel:
        print(f"saddlepoint  {row['saddlepoint']:.5e}")
    return 0


def _cmd_sweep(args) -> int:
    model = make_model(parse_spec(args.dist))
    y_min, y_max, steps = _parse_grid(args.y)
    if not y_min > model.mean:
        raise ArgumentError(f"y_min must exceed the mean ({model.mean:g})")
    sel = _parse_bounds(args.bounds)
    mc_cfg = None
    if args.samples is not None:
        if args.samples < 100:
            raise ArgumentError(f"need at least 100 samples, got {args.samples}")
        mc_cfg = (args.samples, args.seed, args.confidence)
    grid = np.linspace(y_min, y_max, steps)
    tasks = [
        (args.dist, float(y), sel, mc_cfg, args.trunc_nats, args.tol, i)
        for i, y in enumerate(grid)
    ]
    if args.parallel > 1:
        with ProcessPoolExecutor(max_workers=args.parallel) as ex:
            rows = list(ex.map(_compute_row, tasks))
    else:
        rows = [_compute_row(t) for t in tasks]
    if args.format == "json":
        text = render_json(rows)
    else:
        text = render_csv(rows)
    return _emit(text, args.out)


def _cmd_mc(args) -> int:
    spec = parse_spec(args.dist)
    model = make_model(spec)
    if args.samples < 100:
        raise ArgumentError(f"need at least 100 samples, got {args.samples}")
    est = montecarlo.empirical_tail(
        montecarlo.sample(spec, args.seed, args.samples), args.y, args.confidence
    )
    ps = ",".join(f"{p:g}" for p in model.params)
    print(
        f"model {model.name}:{ps}  y {args.y:.10g}  samples {est.n}  "
        f"seed {args.seed}  confidence {est.confidence:g}"
    )
    print(f"p_hat {est.p_hat:.5e}  hits {est.hits}  ci [{est.ci_lo:.5e}, {est.ci_hi:.5e}]")
    ex = exact_tail(model, args.y)
    if ex is not None:
        inside = "yes" if est.ci_lo <= ex <= est.ci_hi else "no"
        print(f"exact {ex:.5e}  (inside interval: {inside})")
    verdict_ok = True
    if args.y > model.mean:
        cb = bounds.chernoff_upper(model, args.y)
        ok = est.ci_lo <= cb
        verdict_ok &= ok
        print(f"chernoff {cb:.5e}  ci_lo <= chernoff: {'PASS' if ok else 'FAIL'}")
        res = bounds.lower_bound_new(model, args.y)
        if res.status == "ok":
            ok = est.ci_hi >= res.value
            verdict_ok &= ok
            print(f"new_lower {res.value:.5e}  ci_hi >= new_lower: {'PASS' if ok else 'FAIL'}")
    return 0 if verdict_ok else 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tailbounds",
        description="Chernoff upper bounds and tilted lower bounds for distribution tails",
    )
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="all estimates at a single tail point")
    pe.add_argument("--dist", required=True, help="family:p1[,p2], e.g. gamma:8,1")
    pe.add_argument("--y", required=True, type=float)
    pe.add_argument("--bounds", default=",".join(_ALL_BOUNDS))
    pe.add_argument("--tol", type=float, default=1e-10,
                    help="relative tolerance for the saddlepoint quadrature")
    pe.add_argument("--trunc-nats", type=float, default=40.0)
    pe.set_defaults(func=_cmd_eval)

    ps = sub.add_parser("sweep", help="estimates over a linear y grid")
    ps.add_argument("--dist", required=True)
    ps.add_argument("--y", required=True, help="grid as min:max:steps, e.g. 10:40:61")
    ps.add_argument("--bounds", default=",".join(_ALL_BOUNDS))
    ps.add_argument("--format", choices=("csv", "json"), default="csv")
    ps.add_argument("--out", default=None)
    ps.add_argument("--parallel", type=int, default=1)
    ps.add_argument("--samples", type=int, default=None)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--confidence", type=float, default=0.999)
    ps.add_argument("--tol", type=float, default=1e-10,
                    help="relative tolerance for the saddlepoint quadrature")
    ps.add_argument("--trunc-nats", type=float, default=40.0)
    ps.set_defaults(func=_cmd_sweep)

    pm = sub.add_parser("mc", help="Monte Carlo tail estimate with consistency verdicts")
    pm.add_argument("--dist", required=True)
    pm.add_argument("--y", required=True, type=float)
    pm.add_argument("--samples", type=int, default=100000)
    pm.add_argument("--seed", type=int, default=0)
    pm.add_argument("--confidence", type=float, default=0.999)
    pm.set_defaults(func=_cmd_mc)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, ArgumentError, RangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SolverFailure, ConvergenceError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3
    except TailBoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
