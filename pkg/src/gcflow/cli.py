"""Command-line front end: build bodies, analyze, run flows, verify, study.

Exit codes encode the failing invariant family:
  0 success, 2 convexity violation, 3 inequality failure,
  4 step failure, 5 I/O or argument error.
All outputs are deterministic for a fixed seed/config/resolution.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import body as B
from . import functionals as F
from .errors import ConvexityViolation, GcflowError, StepFailure
from .flow import FlowConfig, roundness_study, run
from .grid import build_grid

EXIT_OK = 0
EXIT_CONVEXITY = 2
EXIT_INEQUALITY = 3
EXIT_STEP_FAILURE = 4
EXIT_IO = 5

MARGIN_TOL = 1e-8

# default roundness corpora: (cap_height values, smoothing) per dimension
ROUNDNESS_CORPUS = {2: ((0.02, 0.05, 0.1), 0.1), 3: ((0.05, 0.1, 0.15), 0.2)}


def _fail_io(msg):
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_IO


def _load_spec(arg):
    """BodySpec from inline JSON or a file path."""
    text = arg.strip()
    if not text.startswith("{"):
        text = Path(arg).read_text()
    return B.spec_from_dict(json.loads(text))


def _out_dir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _grid_for(args):
    res = args.resolution or (512 if args.dimension == 2 else 48)
    return build_grid(args.dimension, res)


# ---------------------------------------------------------------------------
# SVG rendering (n=2 only): boundary from the support envelope
# x(theta) = s u + s' u_perp.
# ---------------------------------------------------------------------------


def _svg_frame(field, scale):
    g = field.grid
    d = g.derivative_fields(field.values)
    s, s1 = d["f"], d["f1"]
    u = g.nodes
    x = s * u[:, 0] - s1 * u[:, 1]
    y = s * u[:, 1] + s1 * u[:, 0]
    half = 250.0
    px = half + half * x / scale
    py = half - half * y / scale
    pts = " ".join(f"{a:.3f},{b:.3f}" for a, b in zip(px, py))
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" width="500" height="500" '
        'viewBox="0 0 500 500">\n'
        '<rect width="500" height="500" fill="white"/>\n'
        f'<polygon points="{pts}" fill="none" stroke="black" stroke-width="1.5"/>\n'
        "</svg>\n"
    )


# ---------------------------------------------------------------------------
# random convex bodies (seeded trig perturbations)
# ---------------------------------------------------------------------------


def random_trig_spec(n, rng, grid):
    """Random strictly convex TrigPerturbation; amplitude halved until the
    sampled field has a comfortable convexity margin."""
    if n == 2:
        terms = tuple(
            (k, float(rng.normal()), float(rng.normal())) for k in range(2, 7)
        )
    else:
        terms = tuple(
            (l, m, float(rng.normal()))
            for l in range(2, 5)
            for m in range(-l, l + 1)
        )
    amp = 0.2 / sum(abs(c) for t in terms for c in t[-2 if n == 2 else -1 :])
    spec = B.TrigPerturbation(1.0, terms, amp)
    for _ in range(40):
        margin = B.convexity_margin(
            B.SupportField(grid, B.support_values(spec, grid))
        )
        if margin >= 0.05:
            return spec
        spec = B.TrigPerturbation(1.0, terms, spec.amplitude * 0.5)
    raise ConvexityViolation("could not produce a convex random body")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_body_make(args):
    spec = _load_spec(args.spec)
    grid = _grid_for(args)
    field = B.support_from_spec(spec, grid)
    r_in, _, r_out, _ = B.inradius_circumradius(field)
    info = {
        "spec": B.spec_to_dict(spec),
        "n": grid.n,
        "resolution": grid.resolution,
        "volume": B.volume(field),
        "diameter": B.diameter(field),
        "inradius": r_in,
        "circumradius": r_out,
        "pinching": B.pinching_ratio(field),
        "convexity_margin": B.convexity_margin(field),
    }
    out = _out_dir(args)
    _write_json(out / "body.json", info)
    print(json.dumps(info, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_analyze(args):
    spec = _load_spec(args.spec)
    grid = _grid_for(args)
    field = B.support_from_spec(spec, grid)
    report = F.functional_report(field)
    doc = report.to_dict()
    doc["margins"] = report.margins()
    out = _out_dir(args)
    _write_json(out / "report.json", doc)
    failing = {k: v for k, v in doc["margins"].items() if v < -MARGIN_TOL}
    for name, value in sorted(doc["margins"].items()):
        flag = "FAIL" if name in failing else "ok"
        print(f"{name:24s} {value:+.6e}  {flag}")
    if failing:
        print(f"failing checks: {', '.join(sorted(failing))}", file=sys.stderr)
        return EXIT_INEQUALITY
    return EXIT_OK


def cmd_flow_run(args):
    spec = _load_spec(args.spec)
    if args.config:
        text = args.config.strip()
        if not text.startswith("{"):
            text = Path(args.config).read_text()
        config = FlowConfig.from_dict(json.loads(text))
    else:
        config = FlowConfig(n=args.dimension)
    if args.resolution:
        config.resolution = args.resolution
    out = _out_dir(args)

    frames = []

    def observer(state, row):
        if config.n == 2 and args.frames:
            frames.append(B.normalize(state.field))

    code = EXIT_OK
    try:
        trace = run(spec, config, observer=observer)
    except StepFailure as err:
        print(f"step failure: {err}", file=sys.stderr)
        trace = err.trace
        code = EXIT_STEP_FAILURE
    trace.write(out / "trace.csv", out / "trace.meta.json")
    if frames:
        scale = 1.05 * max(f.values.max() for f in frames)
        for i, f in enumerate(frames):
            (out / f"frame_{i:04d}.svg").write_text(_svg_frame(f, scale))
    last = trace.snapshots[-1]
    print(
        f"steps={trace.metadata.get('steps')} stop={trace.metadata.get('stop_reason')} "
        f"pinching={last['pinching']:.4f} residual={last['soliton_residual']:.2e}"
    )
    return code


def cmd_verify(args):
    grid = _grid_for(args)
    rng = np.random.default_rng(args.seed)
    failures = []
    worst = {}
    for i in range(args.count):
        spec = random_trig_spec(grid.n, rng, grid)
        field = B.support_from_spec(spec, grid)
        report = F.functional_report(field)
        for name, value in report.margins().items():
            worst[name] = min(worst.get(name, np.inf), value)
            if value < -MARGIN_TOL:
                failures.append((i, name, value, B.spec_to_dict(spec)))
    print(f"n={grid.n} resolution={grid.resolution} bodies={args.count} seed={args.seed}")
    for name in sorted(worst):
        print(f"{name:24s} worst margin {worst[name]:+.6e}")
    if args.out:
        _write_json(
            _out_dir(args) / "verify.json",
            {
                "n": grid.n,
                "seed": args.seed,
                "count": args.count,
                "worst_margins": worst,
                "failures": [
                    {"index": i, "check": nm, "margin": v, "spec": sp}
                    for i, nm, v, sp in failures
                ],
            },
        )
    if failures:
        for i, name, value, _ in failures:
            print(f"body {i}: {name} = {value:+.3e}", file=sys.stderr)
        return EXIT_INEQUALITY
    return EXIT_OK


def stability_family(n, count=9):
    """Ball-to-ellipsoid Minkowski interpolation spanning several eps decades."""
    axes = (2.0, 1.0) if n == 2 else (2.0, 1.0, 1.0)
    lams = np.linspace(0.1, 0.9, count)
    return [
        B.MinkowskiSum(
            (B.Scaled(1.0 - lam, B.Ball(1.0)), B.Scaled(lam, B.Ellipsoid(axes)))
        )
        for lam in lams
    ]


def cmd_study_stability(args):
    grid = _grid_for(args)
    rows = []
    for spec in stability_family(grid.n, args.count or 9):
        field = B.support_from_spec(spec, grid)
        eps, gap, ratio = F.stability_gap(field)
        rows.append({"eps": eps, "gap": gap, "ratio": ratio})
    live = [r for r in rows if r["ratio"] is not None and r["eps"] > 0]
    if not live:
        print("degenerate family: all entropies at noise level")
        return EXIT_OK
    eps = np.log10([r["eps"] for r in live])
    gap = np.log10([r["gap"] for r in live])
    if eps.max() - eps.min() < 1.5:
        print(f"error: eps spread {eps.max() - eps.min():.2f} decades < 1.5", file=sys.stderr)
        return EXIT_IO
    slope = float(np.polyfit(eps, gap, 1)[0])
    max_ratio = max(r["ratio"] for r in live)
    threshold = 1.0 / (grid.n + 1) - 0.05
    doc = {
        "n": grid.n,
        "resolution": grid.resolution,
        "rows": rows,
        "slope": slope,
        "slope_threshold": threshold,
        "max_ratio": max_ratio,
    }
    if args.out:
        _write_json(_out_dir(args) / "stability.json", doc)
    for r in rows:
        print(f"eps={r['eps']:.6e} gap={r['gap']:.6e} ratio={r['ratio']}")
    print(f"slope={slope:.4f} (threshold {threshold:.4f}) max_ratio={max_ratio:.4f}")
    if slope < threshold or not np.isfinite(max_ratio):
        return EXIT_INEQUALITY
    return EXIT_OK


def cmd_study_roundness(args):
    n = args.dimension
    res = args.resolution or (512 if n == 2 else 24)
    deltas, rho = ROUNDNESS_CORPUS[n]
    specs = [B.SlicedBall(1.0, d, rho) for d in deltas] + [B.Ball(1.0)]
    rows = roundness_study(specs, FlowConfig(n=n, resolution=res))
    if args.out:
        _write_json(_out_dir(args) / "roundness.json", {"n": n, "rows": rows})
    for r in rows:
        print(
            f"eps0={r['initial_entropy']:.4f} pinch0={r['initial_pinching']:.3f} "
            f"-> pinch={r['terminal_pinching']:.4f} ck0={r['terminal_ck0']:.2e} "
            f"resid={r['terminal_soliton_residual']:.2e} [{r['status']}]"
        )
    if any(r["status"] != "ok" for r in rows):
        return EXIT_STEP_FAILURE
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gcflow", description="Gauss curvature flow laboratory"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec=False, config=False):
        if spec:
            p.add_argument("--spec", required=True, help="BodySpec JSON (path or inline)")
        if config:
            p.add_argument("--config", help="FlowConfig JSON (path or inline)")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--resolution", type=int, default=0)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--count", type=int, default=0)
        p.add_argument("--dimension", type=int, choices=(2, 3), default=2)

    p = sub.add_parser("body-make", help="sample a body and report its geometry")
    common(p, spec=True)
    p.set_defaults(fn=cmd_body_make)

    p = sub.add_parser("analyze", help="functional report and inequality margins")
    common(p, spec=True)
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("flow-run", help="run the flow, write trace + optional frames")
    common(p, spec=True, config=True)
    p.add_argument("--frames", action="store_true", help="write SVG frames (n=2)")
    p.set_defaults(fn=cmd_flow_run)

    p = sub.add_parser("verify", help="inequality suite on seeded random bodies")
    common(p)
    p.set_defaults(fn=cmd_verify, out="")

    p = sub.add_parser("study-stability", help="stability-gap scaling regression")
    common(p)
    p.set_defaults(fn=cmd_study_stability, out="")

    p = sub.add_parser("study-roundness", help="SlicedBall roundness study")
    common(p)
    p.set_defaults(fn=cmd_study_roundness, out="")

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.count == 0 and args.fn is cmd_verify:
        args.count = 20
    try:
        return args.fn(args)
    except ConvexityViolation as err:
        print(f"convexity violation: {err}", file=sys.stderr)
        return EXIT_CONVEXITY
    except StepFailure as err:
        print(f"step failure: {err}", file=sys.stderr)
        return EXIT_STEP_FAILURE
    except (OSError, json.JSONDecodeError, ValueError) as err:
        return _fail_io(str(err))
    except GcflowError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INEQUALITY


if __name__ == "__main__":
    sys.exit(main())
