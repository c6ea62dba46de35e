"""Command line front end: ingestion, dispatch, CSV/JSON emission.

Subcommands: kernel | sweep | condition | crg | estimate. All angles
are in radians everywhere: flag values, rays files, CSV columns. For a
fixed input and --seed the outputs are byte-identical: JSON keys are
sorted, floats are emitted via repr, and nothing timestamps itself.

Set BALAYAGE_THREADS to cap worker parallelism; it is applied to the
BLAS thread pools before numpy is first imported.
"""

from __future__ import annotations

import os

_cap = os.environ.get("BALAYAGE_THREADS")
if _cap:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                 "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        os.environ.setdefault(_var, _cap)

import argparse
import csv
import json
import math
import sys

import numpy as np

from .balayage import sweep_ray_system, swept_total_mass
from .crg import crg_check_ray, crg_check_ray_system
from .errors import BalayageKitError, ParseError
from .growth import (LogModulusOracle, akhiezer_class_verdict,
                     blaschke_functional, boundedness_detector,
                     lindelof_functional)
from .kernels import (AngleSpec, hadamard_kernel, harmonic_charge_interval,
                      harmonic_charge_slitplane, poisson_kernel)
from .measures import (DiscreteCharge, RaySystem, SweptCharge,
                       estimate_order_type, profile_from_charge)

SCHEMA = "balayage-kit/1"


class UsageError(Exception):
    """Bad flag value or unusable input file; maps to exit code 2."""


# -- ingestion -----------------------------------------------------------------


def _atom_from_json(obj, row: int) -> tuple[complex, float]:
    if not isinstance(obj, dict):
        raise ParseError(f"row {row}: expected an object, got {type(obj).__name__}")
    try:
        re = float(obj["re"])
        im = float(obj.get("im", 0.0))
        mass = float(obj.get("mass", obj.get("mult", 1.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"row {row}: {exc}") from exc
    return complex(re, im), mass


def ingest_zero_sequence(path: str) -> DiscreteCharge:
    """Read a zero set from a JSON or CSV file.

    JSON: a list of {"re": , "im": , "mass": } objects, or an object
    {"atoms": [...], "r0": gap}. CSV: rows "re,im,mult" (mult optional,
    default 1), comment lines start with '#'. Parse failures carry the
    offending row number.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    stripped = text.lstrip()
    if stripped.startswith("[") or stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"row {exc.lineno}: {exc.msg}") from exc
        gap = None
        if isinstance(data, dict):
            gap = data.get("r0")
            data = data.get("atoms", [])
        pairs = [_atom_from_json(obj, i + 1) for i, obj in enumerate(data)]
        return DiscreteCharge.from_pairs(pairs, inner_gap=gap)
    pairs = []
    row = 0
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        row += 1
        fields = [f.strip() for f in line.split(",")]
        if len(fields) not in (2, 3):
            raise ParseError(f"row {row}: expected re,im[,mult], got "
                             f"{len(fields)} fields")
        try:
            re, im = float(fields[0]), float(fields[1])
            mass = float(fields[2]) if len(fields) == 3 else 1.0
        except ValueError as exc:
            raise ParseError(f"row {row}: {exc}") from exc
        pairs.append((complex(re, im), mass))
    return DiscreteCharge.from_pairs(pairs)


def _read_rays(path: str) -> RaySystem:
    """Rays file: JSON {"angles": [...]} / [a1, a2, ...] or one angle per line."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    stripped = text.lstrip()
    if stripped.startswith("[") or stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"row {exc.lineno}: {exc.msg}") from exc
        if isinstance(data, dict):
            data = data.get("angles", [])
        angles = [float(a) for a in data]
    else:
        angles = [float(line) for line in text.split() if line.strip()]
    if not angles:
        raise ParseError("rays file holds no angles")
    return RaySystem(tuple(angles))


def _parse_complex(s: str, flag: str) -> complex:
    parts = s.split(",")
    if len(parts) != 2:
        raise UsageError(f"{flag} expects 're,im', got {s!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from exc


def _parse_grid(s: str) -> np.ndarray:
    """'min:max:points' -> log-spaced grid (linear when min <= 0)."""
    parts = s.split(":")
    if len(parts) != 3:
        raise UsageError(f"--grid expects 'min:max:points', got {s!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"--grid: {exc}") from exc
    if not (lo < hi and n >= 2):
        raise UsageError("--grid needs min < max and points >= 2")
    if lo > 0:
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


# -- emission ------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_csv(path: str, columns: list[str], rows) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(f"# schema: {SCHEMA}\n")
            writer = csv.writer(fh)
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def _emit_json(payload: dict) -> None:
    payload = dict(payload)
    payload["schema"] = SCHEMA
    print(json.dumps(payload, sort_keys=True))


def _write_json(path: str, payload: dict) -> None:
    payload = dict(payload)
    payload["schema"] = SCHEMA
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


# -- subcommands ---------------------------------------------------------------


def _cmd_kernel(args) -> int:
    z = _parse_complex(args.z, "--z")
    q = args.genus
    if args.kind == "poisson":
        if args.t is None:
            raise UsageError("kernel --kind poisson needs --t")
        value = poisson_kernel(q, args.t, z)
    elif args.kind == "omega":
        if args.t1 is None or args.t2 is None:
            raise UsageError("kernel --kind omega needs --t1 and --t2")
        value = harmonic_charge_interval(q, z, args.t1, args.t2)
    elif args.kind == "charge":
        if args.x is None:
            raise UsageError("kernel --kind charge needs --x")
        value = harmonic_charge_slitplane(q, z, args.x)
    else:  # hadamard
        if args.zeta is None:
            raise UsageError("kernel --kind hadamard needs --zeta")
        value = hadamard_kernel(q, _parse_complex(args.zeta, "--zeta"), z)
    print(f"{float(value):.10f}")
    return 0


def _default_r0(charge: DiscreteCharge) -> float:
    if charge.inner_gap:
        return charge.inner_gap
    radii = [abs(a.position) for a in charge.atoms if a.position != 0]
    if not radii:
        raise UsageError("cannot infer --r0 from a charge with no "
                         "off-origin atoms")
    return 0.5 * min(radii)


def _ray_total_mass(ray) -> float:
    single = SweptCharge(rays=(ray,), genus_used=(0,))
    return swept_total_mass(single)[0]


def _cmd_sweep(args) -> int:
    charge = ingest_zero_sequence(args.input)
    rays = _read_rays(args.rays)
    r0 = args.r0 if args.r0 is not None else _default_r0(charge)
    force = None
    if args.genus != "auto":
        try:
            force = int(args.genus)
        except ValueError as exc:
            raise UsageError(f"--genus expects 'auto' or an integer: {exc}")
    swept = sweep_ray_system(charge, rays, args.order, r0, force_genus=force)
    plan = swept.plan
    grid = _parse_grid(args.grid)
    rows = []
    for j, ray in enumerate(swept.rays):
        dens = np.atleast_1d(ray.density(grid))
        nn = np.atleast_1d(ray.n_of(grid))
        prev = 0.0
        for t, d, n in zip(grid, dens, nn):
            rows.append([j, float(t), float(d), float(n), float(n) - prev])
            prev = float(n)
        if all(g.genus == 0 for g in ray.groups):
            # the density integral converges: close the books with a tail row
            total = _ray_total_mass(ray)
            rows.append([j, math.inf, 0.0, total, total - prev])
    _write_csv(args.output, ["ray_index", "t", "density", "N", "mass"], rows)
    plan_payload = {
        "order": args.order,
        "r0": r0,
        "rays": list(rays.angles),
        "genus_used": list(swept.genus_used),
        "off_ray_mass": swept.off_ray_atoms.total_mass,
        "decisions": [
            {"alpha": d.alpha, "beta": d.beta, "genus": d.genus,
             "method": d.method} for d in plan.decisions],
    }
    if args.plan_out:
        _write_json(args.plan_out, plan_payload)
    else:
        plan_payload["schema"] = SCHEMA
        print(json.dumps(plan_payload, sort_keys=True), file=sys.stderr)
    return 0


def _cmd_condition(args) -> int:
    charge = ingest_zero_sequence(args.input)
    p = args.order
    grid = _parse_grid(args.grid) if args.grid else None
    r0 = args.r0 if args.r0 is not None else _default_r0(charge)
    angle = None
    if args.angle:
        a, b = (float(v) for v in args.angle.split(","))
        angle = AngleSpec(a, b)

    if args.kind in ("blaschke", "lindelof"):
        if grid is None:
            radii = [abs(a.position) for a in charge.atoms] or [10.0 * r0]
            grid = np.geomspace(2.0 * r0, max(2.0 * max(radii), 200.0 * r0), 32)
        if args.kind == "blaschke":
            if angle is None:
                raise UsageError("condition --kind blaschke needs --angle")
            values = np.array([blaschke_functional(charge, angle, p, r0, r)
                               for r in grid])
        else:
            values = np.array([lindelof_functional(charge, int(p), r0, r)
                               for r in grid])
        rep = boundedness_detector(grid, values)
        payload = {"kind": args.kind, "verdict": rep.verdict,
                   "slope": rep.slope, "order": p, "r0": r0}
    else:  # akhiezer | carleman
        if angle is None:
            raise UsageError(f"condition --kind {args.kind} needs --angle")
        oracle = LogModulusOracle(charge, offset=args.offset)
        trace = akhiezer_class_verdict(
            oracle, angle, p, r0, grid=grid,
            kind="J" if args.kind == "akhiezer" else "carleman")
        grid, values = trace.grid, trace.values
        payload = {"kind": args.kind, "verdict": trace.verdict,
                   "slope": trace.slope, "order": p, "r0": r0,
                   "cross_verdict": trace.cross_verdict}
    if args.output:
        _write_csv(args.output, ["r", "value"],
                   [[float(r), float(v)] for r, v in zip(grid, values)])
    _emit_json(payload)
    return 0


def _trace_payload(trace) -> dict:
    return {"verdict": trace.verdict, "limit": trace.limit,
            "spread": trace.spread, "stable": trace.stable,
            "p": trace.p, "genus": trace.genus, "kappa": trace.kappa,
            "seed": trace.seed, "notes": list(trace.notes)}


def _cmd_crg(args) -> int:
    zeros = ingest_zero_sequence(args.zeros)
    counts = None
    if args.truncation_study:
        counts = tuple(int(v) for v in args.truncation_study.split(","))
    common = dict(x_min=args.xmin, x_max=args.xmax, points=args.points,
                  seed=args.seed, truncation_counts=counts)
    if args.rays:
        rays = _read_rays(args.rays)
        traces = crg_check_ray_system(zeros, args.order, rays, **common)
    else:
        traces = [crg_check_ray(zeros, args.order, **common)]
    rows = []
    for j, tr in enumerate(traces):
        for x, phi, bar in zip(tr.x, tr.values, tr.tail_bars):
            rows.append([j, float(x), float(phi), float(bar)])
    if args.output:
        _write_csv(args.output, ["ray_index", "x", "phi", "tail_bar"], rows)
    verdicts = {tr.verdict for tr in traces}
    overall = ("CRG" if verdicts == {"CRG"} else
               "not-CRG" if "not-CRG" in verdicts else "inconclusive")
    payload = {"verdict": overall, "order": args.order,
               "rays": [_trace_payload(tr) for tr in traces]}
    _emit_json(payload)
    return 0


def _cmd_estimate(args) -> int:
    charge = ingest_zero_sequence(args.input)
    if args.grid:
        grid = _parse_grid(args.grid)
    else:
        radii = [abs(a.position) for a in charge.atoms if a.position != 0]
        if not radii:
            raise UsageError("cannot build a radial grid: no off-origin atoms")
        grid = np.geomspace(0.5 * min(radii), 1.5 * max(radii), 33)
    profile = profile_from_charge(charge, grid)
    verdict = estimate_order_type(profile, p=args.order)
    _emit_json({"kind": "estimate", "verdict": verdict.verdict,
                "fitted_order": verdict.fitted_order,
                "type_estimate": verdict.type_estimate,
                "ratio_log_slope": verdict.ratio_log_slope,
                "order": args.order})
    return 0


# -- parser / dispatch ---------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="balayage",
        description="Balayage of discrete charges onto ray systems, growth "
                    "condition functionals, and the principal-value test for "
                    "completely regular growth. Angles are radians.")
    sub = parser.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", help="evaluate one kernel value")
    k.add_argument("--kind", required=True,
                   choices=["poisson", "omega", "charge", "hadamard"])
    k.add_argument("--genus", type=int, default=0)
    k.add_argument("--z", required=True, help="evaluation point 're,im'")
    k.add_argument("--t", type=float, help="boundary point (poisson)")
    k.add_argument("--t1", type=float, help="interval start (omega)")
    k.add_argument("--t2", type=float, help="interval end (omega)")
    k.add_argument("--x", type=float, help="slit endpoint (charge)")
    k.add_argument("--zeta", help="source point 're,im' (hadamard)")
    k.set_defaults(func=_cmd_kernel)

    s = sub.add_parser("sweep", help="sweep a charge onto a ray system")
    s.add_argument("--input", required=True, help="charge file (JSON or CSV)")
    s.add_argument("--rays", required=True, help="rays file (angles, radians)")
    s.add_argument("--order", type=float, required=True)
    s.add_argument("--genus", default="auto",
                   help="'auto' or an integer forced for every angle")
    s.add_argument("--r0", type=float, help="inner disk radius kept free")
    s.add_argument("--grid", required=True, help="t sampling 'min:max:points'")
    s.add_argument("--output", required=True, help="CSV path")
    s.add_argument("--plan-out", help="JSON path for the sweep plan")
    s.set_defaults(func=_cmd_sweep)

    c = sub.add_parser("condition", help="growth condition functional trace")
    c.add_argument("--kind", required=True,
                   choices=["blaschke", "lindelof", "akhiezer", "carleman"])
    c.add_argument("--input", required=True, help="charge file (JSON or CSV)")
    c.add_argument("--order", type=float, required=True)
    c.add_argument("--angle", help="boundary rays 'alpha,beta' (radians)")
    c.add_argument("--r0", type=float)
    c.add_argument("--offset", type=float, default=0.0,
                   help="log-modulus normalization constant")
    c.add_argument("--grid", help="r grid 'min:max:points'")
    c.add_argument("--output", help="trace CSV path")
    c.set_defaults(func=_cmd_condition)

    g = sub.add_parser("crg", help="completely-regular-growth criterion")
    g.add_argument("--zeros", required=True, help="zero set file (JSON or CSV)")
    g.add_argument("--order", type=float, required=True)
    g.add_argument("--rays", help="rays file; omit for the single ray R+")
    g.add_argument("--xmin", type=float)
    g.add_argument("--xmax", type=float)
    g.add_argument("--points", type=int, default=64)
    g.add_argument("--truncation-study", help="atom counts 'k1,k2,k3'")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output", help="trace CSV path")
    g.set_defaults(func=_cmd_crg)

    e = sub.add_parser("estimate", help="order/type of a radial profile")
    e.add_argument("--input", required=True, help="charge file (JSON or CSV)")
    e.add_argument("--order", type=float, help="candidate order p")
    e.add_argument("--grid", help="r grid 'min:max:points'")
    e.set_defaults(func=_cmd_estimate)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"balayage {args.command}: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"balayage {args.command}: parse error: {exc}", file=sys.stderr)
        return 2
    except BalayageKitError as exc:
        print(f"balayage {args.command} failed in {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"balayage {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
