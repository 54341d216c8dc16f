"""Command-line front end: verdicts, reach tubes, bounds, and the catalogue.

Subcommands: check (resilience verdicts with per-condition diagnostics),
reach (inner-approximating tube with 2-D projection polygons), bounds
(reach-time and slowdown intervals), scenarios (built-in catalogue).
Outputs are JSON by default; reach also emits CSV polygons and a best-effort
SVG rendering. Exit codes: 0 success, 2 usage/parse error, 3 numerical
failure, 4 unmet mathematical precondition.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys

import numpy as np

from . import quantitative as qt
from . import reachability as rb
from . import zonotope as zn
from .errors import NumericalError, PreconditionError, ResilienceKitError
from .linalg import is_hurwitz
from .resilience import LinearSystem, check_resilience, compute_z_set, split_system
from .scenarios import list_scenarios, load_scenario

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_PRECONDITION = 4


class UsageError(Exception):
    """Bad arguments or unparseable input files."""


def _resolve_seed(value) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get("RESILIENCE_KIT_SEED")
    if env is not None:
        return int(env)
    return qt.DEFAULT_SEED


def _load_system(args):
    """Returns (LinearSystem, Scenario-or-None) from --scenario or --system."""
    if args.scenario:
        scen = load_scenario(args.scenario)
        return scen.system, scen
    try:
        with open(args.system, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read system file {args.system!r}: {exc}") from exc
    try:
        sysm = LinearSystem(
            A=np.array(doc["A"], dtype=float),
            B_bar=np.array(doc["B_bar"], dtype=float),
            actuator_labels=list(doc.get("actuator_labels", [])),
            state_labels=list(doc.get("state_labels", [])),
            name=str(doc.get("name", args.system)),
        )
    except (KeyError, TypeError, ValueError, ResilienceKitError) as exc:
        raise UsageError(f"invalid system description: {exc}") from exc
    return sysm, None


def _parse_lost(sysm: LinearSystem, spec: str) -> list[int]:
    """Lost actuators as labels or 1-based indices, comma separated."""
    tokens = [t.strip() for t in spec.split(",") if t.strip()]
    if not tokens:
        raise UsageError("--lost must name at least one actuator")
    out = []
    for tok in tokens:
        if tok.lstrip("-").isdigit():
            idx = int(tok) - 1
            if not 0 <= idx < len(sysm.actuator_labels):
                raise UsageError(f"actuator index {tok} out of range 1..{len(sysm.actuator_labels)}")
        else:
            try:
                idx = sysm.actuator_labels.index(tok)
            except ValueError:
                raise UsageError(
                    f"unknown actuator {tok!r}; labels: {', '.join(sysm.actuator_labels)}"
                ) from None
        out.append(idx)
    return out


def _parse_vector(spec: str, n: int, what: str) -> np.ndarray:
    try:
        vec = np.array([float(t) for t in spec.split(",")], dtype=float)
    except ValueError as exc:
        raise UsageError(f"cannot parse {what}: {exc}") from exc
    if vec.size != n:
        raise UsageError(f"{what} has {vec.size} entries, expected {n}")
    return vec


def _interval(pair) -> list:
    """JSON-safe interval: open (infinite) endpoints become null."""
    return [None if not np.isfinite(v) else float(v) for v in pair]


def _lost_doc(sysm: LinearSystem, lost: list[int]) -> dict:
    return {"labels": [sysm.actuator_labels[i] for i in lost],
            "indices": [int(i) for i in lost]}


def _emit(args, payload: str) -> None:
    if getattr(args, "output", None):
        tmp = args.output + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(payload)
        os.replace(tmp, args.output)
    else:
        sys.stdout.write(payload)
        if not payload.endswith("\n"):
            sys.stdout.write("\n")


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return _json_safe(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def cmd_check(args) -> int:
    sysm, _ = _load_system(args)
    lost = _parse_lost(sysm, args.lost)
    split = split_system(sysm, lost)
    verdict = check_resilience(sysm, split, tol=args.tol_verdict)
    doc = {
        "command": "check",
        "system": sysm.name,
        "lost": _lost_doc(sysm, lost),
        "verdicts": {
            "resiliently_stabilizable": verdict.resiliently_stabilizable,
            "resilient": verdict.resilient,
        },
        "conditions": {
            "z_empty": verdict.z_empty,
            "z_dim": verdict.z_dim,
            "rank_condition": verdict.rank_condition,
            "spectrum_condition": verdict.spectrum_condition,
            "eigenvector_condition": verdict.eigenvector_condition,
            "dim_equals_rankB": verdict.dim_equals_rankB,
        },
        "diagnostics": _json_safe(verdict.diagnostics),
    }
    _emit(args, json.dumps(doc, indent=2))
    return EXIT_OK


def _projection_polygons(tube, dims):
    polys = []
    for step, (t, Z) in enumerate(zip(tube.times, tube.sets)):
        pts = zn.polygon2d(zn.project(Z, dims))
        polys.append({"step": step, "time": float(t),
                      "points": [[float(x), float(y)] for x, y in pts]})
    return polys


def _tube_csv(polygons) -> str:
    buf = io.StringIO()
    buf.write("step,time,vertex_index,x,y\n")
    for poly in polygons:
        for k, (x, y) in enumerate(poly["points"]):
            buf.write(f"{poly['step']},{poly['time']:.12g},{k},{x:.12g},{y:.12g}\n")
    return buf.getvalue()


def _tube_svg(polygons, dims) -> str:
    pts = np.array([p for poly in polygons for p in poly["points"]], dtype=float)
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    W = H = 600.0
    pad = 40.0

    def map_xy(x, y):
        sx = pad + (x - lo[0]) / span[0] * (W - 2 * pad)
        sy = H - pad - (y - lo[1]) / span[1] * (H - 2 * pad)
        return sx, sy

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W:.0f}" height="{H:.0f}" '
             f'viewBox="0 0 {W:.0f} {H:.0f}">',
             f'<!-- projection dims {dims[0]},{dims[1]} -->']
    n = max(len(polygons) - 1, 1)
    for poly in polygons:
        if len(poly["points"]) < 3:
            continue
        s = " ".join("%.2f,%.2f" % map_xy(x, y) for x, y in poly["points"])
        shade = 0.15 + 0.55 * (1.0 - poly["step"] / n)
        parts.append(f'<polygon points="{s}" fill="steelblue" fill-opacity="{shade:.3f}" '
                     f'stroke="navy" stroke-width="1"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def cmd_reach(args) -> int:
    sysm, scen = _load_system(args)
    lost = _parse_lost(sysm, args.lost)
    split = split_system(sysm, lost)
    zset = compute_z_set(split)
    if zset.is_empty:
        raise PreconditionError(
            "control-deficit set is empty: the uncontrolled input set is not "
            "contained in the controlled one")
    n = sysm.n
    if args.x0 is not None:
        x0 = _parse_vector(args.x0, n, "--x0")
    elif scen is not None and scen.default_x0 is not None:
        x0 = np.asarray(scen.default_x0, dtype=float)
    else:
        x0 = np.zeros(n)
    tube = rb.reach_tube(sysm.A, zset, x0, args.horizon, args.steps)
    dim_pairs = []
    if args.dims:
        for chunk in args.dims.split(";"):
            pair = [int(t) for t in chunk.split(",")]
            if len(pair) != 2 or not all(0 <= d < n for d in pair):
                raise UsageError(f"bad --dims entry {chunk!r} for an n={n} system")
            dim_pairs.append(pair)
    projections = [{"dims": pair, "polygons": _projection_polygons(tube, pair)}
                   for pair in dim_pairs]
    if args.format in ("csv", "svg"):
        if not projections:
            raise UsageError(f"--format {args.format} requires --dims i,j")
        if args.format == "csv":
            _emit(args, _tube_csv(projections[0]["polygons"]))
        else:
            _emit(args, _tube_svg(projections[0]["polygons"], projections[0]["dims"]))
        return EXIT_OK
    doc = {
        "command": "reach",
        "system": sysm.name,
        "lost": _lost_doc(sysm, lost),
        "x0": _json_safe(x0),
        "horizon": float(args.horizon),
        "steps": int(args.steps),
        "times": _json_safe(tube.times),
        "sets": [{"center": _json_safe(Z.center),
                  "generators": _json_safe(Z.generators.T)} for Z in tube.sets],
        "projections": projections,
    }
    _emit(args, json.dumps(doc, indent=2))
    return EXIT_OK


def cmd_bounds(args) -> int:
    sysm, scen = _load_system(args)
    if not is_hurwitz(sysm.A):
        raise PreconditionError("bounds require a Hurwitz state matrix")
    lost = _parse_lost(sysm, args.lost)
    split = split_system(sysm, lost)
    zset = compute_z_set(split)
    if zset.is_empty:
        raise PreconditionError("control-deficit set is empty for this split")
    n = sysm.n
    if args.x0 is not None:
        x0 = _parse_vector(args.x0, n, "--x0")
    elif scen is not None and scen.default_x0 is not None:
        x0 = np.asarray(scen.default_x0, dtype=float)
    else:
        x0 = np.zeros(n)
    seed = _resolve_seed(args.seed)
    outer_pts = None
    if zset.outer is not None:
        outer_pts = zn.hpolytope_vertices(zset.outer)
    stoch = qt.sample_pairs(sysm.A, args.samples, seed, B_bar=sysm.B_bar,
                            Z=zset.inner, Z_outer_points=outer_pts)
    anchor = None
    try:
        P_ell = qt.ellipsoid_fit_P(zset.inner)
        anchor = qt.from_pair_P(sysm.A, P_ell, B_bar=sysm.B_bar, Z=zset.inner,
                                Z_outer_points=outer_pts, pair_id="ellipsoid")
    except (ResilienceKitError, PreconditionError):
        anchor = None
    pairs = list(stoch)
    if anchor is not None:
        pairs.append(anchor)
        lam_lo = lambda p: (p.lam_min_P * p.lam_min_Q) / (p.lam_max_P * p.lam_max_Q)
        partners = sorted(stoch, key=lam_lo, reverse=True)[:10]
        pairs.extend(qt.interpolated_pairs(sysm.A, anchor, partners, B_bar=sysm.B_bar,
                                           Z=zset.inner, Z_outer_points=outer_pts))
    rep = qt.best_bounds(pairs, x0)

    def interval_set(report):
        return {"T_N": _interval(report.T_N_interval),
                "T_M": _interval(report.T_M_interval),
                "r_q": _interval(report.r_q_interval)}

    sources = {"stochastic": interval_set(qt.best_bounds(stoch, x0))}
    if anchor is not None:
        sources["ellipsoid"] = interval_set(qt.best_bounds([anchor], x0))
    sources["combined"] = interval_set(rep)
    doc = {
        "command": "bounds",
        "system": sysm.name,
        "lost": _lost_doc(sysm, lost),
        "x0": _json_safe(x0),
        "samples": int(args.samples),
        "seed": int(seed),
        "intervals": sources["combined"],
        "sources": sources,
        "best_pair_ids": rep.best_pair_ids,
        "flags": rep.flags,
    }
    if args.oracle:
        if args.horizon is None or args.steps is None:
            raise UsageError("--oracle requires --horizon and --steps for the time grid")
        dt = args.horizon / args.steps
        target = (_parse_vector(args.target, n, "--target") if args.target
                  else np.zeros(n))
        t_n = rb.nominal_time_oracle(sysm, x0, target, dt, args.horizon)
        t_m = rb.malfunction_time_oracle(sysm, split, x0, target, dt, args.horizon)
        doc["oracle"] = {"T_N": t_n, "T_M": t_m, "dt": dt, "t_max": float(args.horizon)}
    _emit(args, json.dumps(doc, indent=2))
    return EXIT_OK


def cmd_scenarios(args) -> int:
    entries = []
    for name in list_scenarios():
        scen = load_scenario(name)
        entries.append({
            "name": name,
            "states": scen.system.n,
            "actuators": list(scen.system.actuator_labels),
            "default_splits": sorted(scen.default_splits),
            "notes": scen.notes,
        })
    _emit(args, json.dumps({"command": "scenarios", "scenarios": entries}, indent=2))
    return EXIT_OK


def _add_common(sub, need_lost=True):
    src = sub.add_mutually_exclusive_group(required=True)
    src.add_argument("--scenario", help="built-in scenario name")
    src.add_argument("--system", help="JSON system description file")
    if need_lost:
        sub.add_argument("--lost", required=True,
                         help="lost actuators: labels or 1-based indices, comma separated")
    sub.add_argument("--output", help="write output to this file (atomic); default stdout")
    sub.add_argument("--threads", type=int, default=1,
                     help="parallelism budget (results are order-independent)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resilience-kit",
        description="Resilience analysis of linear systems to partial loss of "
                    "control authority over actuators.")
    subs = parser.add_subparsers(dest="cmd", required=True)

    p_check = subs.add_parser("check", help="resilience / resilient-stabilizability verdicts")
    _add_common(p_check)
    p_check.add_argument("--tol-verdict", type=float, default=1e-9,
                         help="tolerance for rank/spectrum/eigenvector tests")
    p_check.set_defaults(func=cmd_check)

    p_reach = subs.add_parser("reach", help="inner-approximating reach tube")
    _add_common(p_reach)
    p_reach.add_argument("--x0", help="initial state, comma separated")
    p_reach.add_argument("--horizon", type=float, required=True, help="time horizon T [s]")
    p_reach.add_argument("--steps", type=int, required=True, help="number of tube steps N")
    p_reach.add_argument("--dims", help="projection dim pairs, e.g. '8,3' or '8,3;4,5' (0-based)")
    p_reach.add_argument("--format", choices=("json", "csv", "svg"), default="json")
    p_reach.set_defaults(func=cmd_reach)

    p_bounds = subs.add_parser("bounds", help="reach-time and slowdown-ratio bounds")
    _add_common(p_bounds)
    p_bounds.add_argument("--x0", help="initial state, comma separated")
    p_bounds.add_argument("--target", help="target state for --oracle (default origin)")
    p_bounds.add_argument("--samples", type=int, default=1000, help="random Lyapunov pairs")
    p_bounds.add_argument("--seed", type=int,
                          help="RNG seed (fallback: RESILIENCE_KIT_SEED, then built-in)")
    p_bounds.add_argument("--oracle", action="store_true",
                          help="also run the grid reach-time oracles")
    p_bounds.add_argument("--horizon", type=float, help="oracle time horizon [s]")
    p_bounds.add_argument("--steps", type=int, help="oracle grid steps")
    p_bounds.set_defaults(func=cmd_bounds)

    p_scen = subs.add_parser("scenarios", help="list built-in scenarios")
    p_scen.add_argument("--output", help="write output to this file (atomic); default stdout")
    p_scen.set_defaults(func=cmd_scenarios)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ResilienceKitError as exc:
        print(f"precondition not met: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
