"""Command-line front door for the library.

Subcommands: classify | rh | orbit | flow | monodromy | backlund |
selftest.  Inputs come from a JSON file, an inline JSON string, or stdin;
outputs are JSON or CSV, deterministic for a fixed (input, seed,
tolerance) triple.  The exit code is 0 exactly when every requested check
lands within tolerance.  Set PVI_LOG=DEBUG (or any logging level) for
verbose progress on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import backlund, cubic, flow, fuchsian, modular, params, rk, serialize

log = logging.getLogger(__name__)


def _load_input(spec):
    if spec is None:
        raise SystemExit("this subcommand needs --input")
    if spec == "-":
        return json.load(sys.stdin)
    text = spec.strip()
    if text.startswith("{"):
        return json.loads(text)
    with open(spec, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _emit(args, payload):
    fh, owned = _open_out(args.out)
    try:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    finally:
        if owned:
            fh.close()


def _label_from_points(points):
    if not points:
        return "smooth"
    if len(points) == 1:
        return points[0].local_type
    types = sorted(p.local_type for p in points)
    if all(t == "A1" for t in types):
        return f"{len(types)}A1"
    return "+".join(types)


def cmd_classify(args):
    data = _load_input(args.input)
    tol = args.tol if args.tol is not None else 1e-8
    if "kappa" in data or "kappa_free" in data:
        kappa = serialize.decode_exponents(data)
        a = params.kappa_to_a(kappa)
        lift = cubic.discriminant_lift(a)
        wall = params.on_wall(kappa, tol=tol)
        label = params.classify_stratum(kappa, tol=tol)
        payload = {
            "on_wall": wall,
            "discriminant_lift": serialize.encode_complex(lift),
            "stratum": label.dynkin_type,
            "index_set_size": label.index_set_size,
            "singular_points": serialize.encode_singular_report(label.report)[
                "points"
            ],
        }
    elif "theta" in data:
        theta = serialize.decode_complex_seq(data["theta"], 4)
        report = cubic.singular_points(theta, tol=tol)
        payload = {
            "on_wall": bool(report.points),
            "discriminant_lift": None,
            "stratum": _label_from_points(report.points),
            "index_set_size": sum(p.milnor for p in report.points),
            "singular_points": serialize.encode_singular_report(report)[
                "points"
            ],
        }
    else:
        raise SystemExit("classify input needs 'kappa', 'kappa_free' or 'theta'")
    _emit(args, payload)
    return 0


def cmd_rh(args):
    data = _load_input(args.input)
    pt = serialize.decode_phase_point(data)
    tol = args.tol if args.tol is not None else 1e-6
    rep = fuchsian.monodromy(pt)
    point = fuchsian.rh_point(pt)
    apparency = fuchsian.apparent_check(pt)
    payload = {
        "x": serialize.encode_complex_seq(point.x),
        "a": serialize.encode_complex_seq(params.kappa_to_a(pt.kappa)),
        "theta": serialize.encode_complex_seq(point.theta),
        "traces": serialize.encode_complex_seq(rep.traces()),
        "fricke_residual": float(point.residual),
        "apparency": float(apparency),
        "product_defect": float(rep.product_defect()),
    }
    _emit(args, payload)
    checks = (
        point.residual <= tol
        and apparency <= tol
        and rep.product_defect() <= tol
    )
    return 0 if checks else 1


def cmd_orbit(args):
    data = _load_input(args.input)
    point = serialize.decode_ambient_point(data["point"])
    word = modular.parse_word(data.get("word", ""))
    n = int(data.get("n", 0))
    if args.max_steps is not None:
        n = min(n, args.max_steps)
    tol = args.tol if args.tol is not None else 1e-8
    samples = modular.orbit(point, word, n)
    fh, owned = _open_out(args.out)
    try:
        serialize.write_orbit_csv(fh, samples)
    finally:
        if owned:
            fh.close()
    f_values = [
        cubic.eval_f(s.point.x, s.point.theta) for s in samples
    ]
    scale = max(1.0, max(float(np.max(np.abs(s.point.x))) for s in samples))
    drift = max(abs(f - f_values[0]) for f in f_values)
    return 0 if drift <= tol * scale**3 else 1


def cmd_flow(args):
    data = _load_input(args.input)
    pt = serialize.decode_phase_point(data["point"])
    path = flow.TimePath.make(
        [serialize.decode_complex_seq(v, 3) for v in data["path"]]
    )
    tol = args.tol if args.tol is not None else 1e-6
    traj = flow.integrate(pt, path)
    in_chart = all(
        abs(s.t[0]) <= 1e-9 and abs(s.t[1] - 1.0) <= 1e-9
        for s in traj.samples
    )
    residuals = flow.pvi_residual(traj) if in_chart else None
    fh, owned = _open_out(args.out)
    try:
        serialize.write_trajectory_csv(fh, traj, residuals)
    finally:
        if owned:
            fh.close()
    if residuals is not None and residuals.max() > tol:
        return 1
    return 0


def cmd_monodromy(args):
    data = _load_input(args.input)
    pt = serialize.decode_phase_point(data["point"])
    braid = modular.parse_word(data["braid"])
    tol = args.tol if args.tol is not None else 1e-4
    ret = flow.nonlinear_monodromy(pt, braid)
    start = fuchsian.rh_point(pt)
    end = fuchsian.rh_point(ret)
    word = modular.braid_to_modular(braid, orientation=args.orientation)
    predicted = modular.apply_word(
        word, modular.AmbientPoint.make(start.x, start.theta)
    )
    deviation = float(np.max(np.abs(end.x - predicted.x)))
    payload = {
        "orientation": args.orientation,
        "x_start": serialize.encode_complex_seq(start.x),
        "x_return": serialize.encode_complex_seq(end.x),
        "x_modular": serialize.encode_complex_seq(predicted.x),
        "deviation": deviation,
        "end_point": serialize.encode_phase_point(ret),
    }
    _emit(args, payload)
    return 0 if deviation <= tol else 1


def cmd_backlund(args):
    data = _load_input(args.input)
    pt = serialize.decode_phase_point(data["point"])
    word = backlund.parse_backlund_word(data["word"])
    tol = args.tol if args.tol is not None else 1e-10
    out = backlund.apply_word(word, pt)
    drift = float(
        np.max(
            np.abs(params.rh_param(out.kappa) - params.rh_param(pt.kappa))
        )
    )
    payload = {
        "end": serialize.encode_phase_point(out),
        "theta_drift": drift,
    }
    _emit(args, payload)
    return 0 if drift <= tol else 1


def _selftest_checks(seed):
    rng = np.random.default_rng(seed)

    worst = 0.0
    for _ in range(200):
        x = rng.normal(size=3) + 1j * rng.normal(size=3)
        th = rng.normal(size=4) + 1j * rng.normal(size=4)
        point = modular.AmbientPoint.make(x, th)
        base = cubic.eval_f(x, th)
        for i in (1, 2, 3):
            moved = modular.apply_generator(i, point)
            worst = max(
                worst,
                abs(cubic.eval_f(moved.x, moved.theta) - base)
                / max(1.0, abs(base)),
            )
    yield "fricke invariance (200 points)", worst, 1e-12

    worst = 0.0
    for _ in range(20):
        x = rng.normal(size=3) + 1j * rng.normal(size=3)
        th = rng.normal(size=4) + 1j * rng.normal(size=4)
        point = modular.AmbientPoint.make(x, th)
        for i in (1, 2, 3):
            j = (i % 3) + 1
            lhs = modular.apply_word([i, j, i], point)
            rhs = modular.apply_word([j, i, j], point)
            worst = max(worst, float(np.max(np.abs(lhs.x - rhs.x))))
    yield "modular braid relations (20 points)", worst, 1e-10

    theta = np.array([8.0, 8.0, 8.0, 28.0], dtype=complex)
    report = cubic.singular_points(theta)
    ok = (
        len(report.points) == 1
        and report.points[0].local_type == "D4"
        and float(np.max(np.abs(report.points[0].x - 2.0))) <= 1e-8
    )
    yield "D4 surface has one triple point at (2,2,2)", 0.0 if ok else 1.0, 0.5

    kap = params.Exponents.from_free(0.21, 0.33, 0.17, 0.11)
    pt = fuchsian.PhasePoint.make(0.4 + 0.3j, 0.2 - 0.5j, (0.0, 1.0, 2.0), kap)
    point = fuchsian.rh_point(pt)
    yield "riemann-hilbert residual", float(point.residual), 1e-6

    kap_r = params.Exponents.from_free(0.23, 0.31, 0.17, 0.29)
    pt_r = fuchsian.PhasePoint.make(0.4 + 0.3j, 0.0, (0.0, 1.0, 2.0), kap_r)
    _, rep = flow.riccati_flow(
        pt_r, flow.TimePath.make([(0, 1, 2), (0, 1, 2.3 + 0.2j)])
    )
    yield "riccati locus invariance", rep.max_p, 1e-8

    worst = 0.0
    for _ in range(20):
        k = params.Exponents.from_free(*(rng.normal(size=4) * 0.3))
        t = np.array([0.0, 1.0, 2.0]) + rng.normal(size=3) * 0.1
        q = complex(rng.normal(), rng.normal())
        p = complex(rng.normal(), rng.normal())
        if min(abs(q - ti) for ti in t) < 0.1 or abs(p) < 0.1:
            continue
        ptb = fuchsian.PhasePoint.make(q, p, t, k)
        for i in range(5):
            out = backlund.apply_word([i, i], ptb)
            worst = max(worst, abs(out.q - ptb.q), abs(out.p - ptb.p))
    yield "backlund involutions (20 points)", worst, 1e-10


def cmd_selftest(args):
    seed = args.seed if args.seed is not None else 0
    failures = 0
    for name, value, tol in _selftest_checks(seed):
        passed = value <= tol
        status = "pass" if passed else "FAIL"
        print(f"{status}  {name}: {value:.3e} (tol {tol:.0e})")
        failures += 0 if passed else 1
    return 0 if failures == 0 else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pvi",
        description="Painleve VI dynamics: cubic surfaces, monodromy, flows.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "classify": (cmd_classify, "wall status and surface singularities"),
        "rh": (cmd_rh, "monodromy coordinates of a phase point"),
        "orbit": (cmd_orbit, "iterate a modular-group word, CSV output"),
        "flow": (cmd_flow, "integrate the Hamiltonian flow, CSV output"),
        "monodromy": (cmd_monodromy, "compare a braid loop with its modular action"),
        "backlund": (cmd_backlund, "apply a transformation word"),
        "selftest": (cmd_selftest, "run a quick deterministic battery"),
    }
    for name, (func, help_text) in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", help="JSON file, inline JSON, or - for stdin")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--tol", type=float, help="check tolerance")
        p.add_argument("--seed", type=int, help="seed for randomized batteries")
        p.add_argument("--max-steps", type=int, dest="max_steps",
                       help="cap on iteration counts")
        p.add_argument("--orientation", choices=("fwd", "inv"), default="fwd",
                       help="braid-to-modular convention")
        p.set_defaults(func=func)
    return parser


def main(argv=None):
    level = os.environ.get("PVI_LOG")
    if level:
        logging.basicConfig(level=level.upper())
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (
        ValueError,
        KeyError,
        OSError,
        json.JSONDecodeError,
        cubic.NoConvergenceError,
        params.UnclassifiableError,
        modular.EscapeError,
        flow.BlowUpError,
        fuchsian.PoleClearanceError,
        rk.StepUnderflowError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
