"""Batch command-line front end.

`wallstokes fields|rankmap|simulate|plan|verify --config <file>
[--out <dir>] [--threads N]` — JSON-configured scenarios, deterministic
plot-ready CSV/JSON output, and a bundled verification suite.  The
`WALLSTOKES_THREADS` environment variable is the fallback for
`--threads`.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import liealg, planner, series, sim, swimmer
from . import greens


class ConfigError(ValueError):
    """Invalid scenario configuration (unknown key, bad value, bad state)."""


def _fmt(v):
    return f"{float(v):.17g}"


def _require_keys(doc, allowed, required, where):
    unknown = sorted(set(doc) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {where}; "
                          f"allowed: {sorted(allowed)}")
    missing = sorted(set(required) - set(doc))
    if missing:
        raise ConfigError(f"missing required key(s) {missing} in {where}")


def _parse_params(doc):
    _require_keys(doc, {"a", "mu"}, {"a"}, "params")
    try:
        return swimmer.SwimmerParams(a=float(doc["a"]),
                                     mu=float(doc.get("mu", 1.0)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid params: {exc}") from exc


def _parse_state(kind, doc, params):
    if kind == "three_sphere":
        _require_keys(doc, {"xi1", "xi2", "x", "y", "theta"},
                      {"xi1", "xi2", "y"}, "state")
        st = swimmer.ThreeSphereState(
            float(doc["xi1"]), float(doc["xi2"]), float(doc.get("x", 0.0)),
            float(doc["y"]), float(doc.get("theta", 0.0)))
        bad = swimmer.check_three_sphere(st, params)
    else:
        _require_keys(doc, {"xi", "c", "quat"}, {"xi", "c"}, "state")
        st = swimmer.FourSphereState(
            xi=tuple(float(v) for v in doc["xi"]),
            c=tuple(float(v) for v in doc["c"]),
            quat=tuple(float(v) for v in doc.get("quat", (1, 0, 0, 0))))
        bad = swimmer.check_four_sphere(st, params)
    if bad:
        raise ConfigError("inadmissible state: " + "; ".join(bad))
    return st


def load_config(path, command):
    """Parse and fully validate a scenario config; fail before computing."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config {path} is not valid JSON (line {exc.lineno}, "
            f"column {exc.colno}): {exc.msg}") from exc

    common = {"kind", "params", "wall", "state"}
    per_command = {
        "fields": common | {"series"},
        "rankmap": common | {"grid", "depth", "tol"},
        "simulate": common | {"stroke", "dt"},
        "plan": common | {"target", "budget", "tol", "trust_radius"},
        "verify": common | {"suites"},
    }
    _require_keys(doc, per_command[command], {"kind", "params"}, "config")
    kind = doc["kind"]
    if kind not in ("three_sphere", "four_sphere"):
        raise ConfigError(f"kind must be three_sphere or four_sphere, got {kind!r}")
    params = _parse_params(doc["params"])
    wall = bool(doc.get("wall", True))
    out = {"kind": kind, "params": params, "wall": wall, "doc": doc}
    if "state" in doc:
        out["state"] = _parse_state(kind, doc["state"], params)

    if command == "fields":
        if "state" not in out:
            raise ConfigError("fields requires a state")
    elif command == "rankmap":
        if kind != "three_sphere":
            raise ConfigError("rankmap supports only three_sphere")
        grid = doc.get("grid")
        if not isinstance(grid, dict):
            raise ConfigError("rankmap requires a grid object")
        _require_keys(grid, {"xi1", "xi2", "y", "theta"},
                      {"xi1", "xi2", "y", "theta"}, "grid")
        out["grid"] = {k: [float(v) for v in grid[k]] for k in
                       ("xi1", "xi2", "y", "theta")}
        out["depth"] = int(doc.get("depth", liealg.DEFAULT_DEPTH))
        out["tol"] = float(doc.get("tol", liealg.DEFAULT_TOL))
    elif command == "simulate":
        if "state" not in out:
            raise ConfigError("simulate requires a state")
        stroke = doc.get("stroke")
        if not isinstance(stroke, dict):
            raise ConfigError("simulate requires a stroke object")
        _require_keys(stroke, {"times", "shapes"}, {"times", "shapes"}, "stroke")
        try:
            out["stroke"] = sim.Stroke(times=np.array(stroke["times"], dtype=float),
                                       shapes=np.array(stroke["shapes"], dtype=float))
        except ValueError as exc:
            raise ConfigError(f"invalid stroke: {exc}") from exc
        nshape = 2 if kind == "three_sphere" else 4
        if out["stroke"].shapes.shape[1] != nshape:
            raise ConfigError(f"stroke shapes must have {nshape} components")
        out["dt"] = float(doc["dt"]) if "dt" in doc else None
    elif command == "plan":
        if kind != "three_sphere":
            raise ConfigError("plan supports only three_sphere")
        if "state" not in out:
            raise ConfigError("plan requires a state")
        if "target" not in doc:
            raise ConfigError("plan requires a target state")
        out["target"] = _parse_state(kind, doc["target"], params)
        out["budget"] = int(doc.get("budget", planner.DEFAULT_BUDGET))
        out["tol"] = float(doc.get("tol", planner.DEFAULT_TOL))
        out["trust_radius"] = float(doc.get("trust_radius",
                                            planner.DEFAULT_TRUST_RADIUS))
    elif command == "verify":
        suites = doc.get("suites", sorted(_SUITES))
        unknown = sorted(set(suites) - set(_SUITES))
        if unknown:
            raise ConfigError(f"unknown verify suite(s) {unknown}; "
                              f"available: {sorted(_SUITES)}")
        out["suites"] = list(suites)
    return out


# -- commands ---------------------------------------------------------------

def cmd_fields(cfg, outdir):
    st = cfg["state"]
    params = cfg["params"]
    wall = cfg["wall"]
    lines = []
    if cfg["kind"] == "three_sphere":
        F1, F2 = swimmer.three_sphere_fields(st, params, wall=wall)
        names = ("xidot1", "xidot2", "xdot", "ydot", "thetadot")
        want_series = bool(cfg["doc"].get("series", wall)) and wall
        if want_series:
            s1, s2 = series.series_fields(st.xi1, st.xi2, st.y, st.theta,
                                          params.a)
            lines.append("component,F1,F2,F1_series,F2_series,F1_dev,F2_dev")
            for i, nm in enumerate(names):
                lines.append(",".join([nm, _fmt(F1[i]), _fmt(F2[i]),
                                       _fmt(s1.values[i]), _fmt(s2.values[i]),
                                       _fmt(F1[i] - s1.values[i]),
                                       _fmt(F2[i] - s2.values[i])]))
        else:
            lines.append("component,F1,F2")
            for i, nm in enumerate(names):
                lines.append(",".join([nm, _fmt(F1[i]), _fmt(F2[i])]))
    else:
        fields = swimmer.four_sphere_fields(st, params, wall=wall)
        names = tuple(f"xidot{i+1}" for i in range(4)) + (
            "cxdot", "cydot", "czdot", "omega1", "omega2", "omega3")
        lines.append("component," + ",".join(f"F{k+1}" for k in range(4)))
        for i, nm in enumerate(names):
            lines.append(",".join([nm] + [_fmt(f[i]) for f in fields]))
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if outdir is not None:
        with open(os.path.join(outdir, "fields.csv"), "w", newline="\n") as fh:
            fh.write(text)
    return 0


def cmd_rankmap(cfg, outdir, threads):
    grid = cfg["grid"]
    rows = liealg.rank_map(grid["xi1"], grid["xi2"], grid["y"], grid["theta"],
                           cfg["params"], depth=cfg["depth"], tol=cfg["tol"],
                           wall=cfg["wall"], threads=threads)
    lines = ["xi1,xi2,y,theta,dim,sigma_min_ratio"]
    for r in rows:
        lines.append(",".join([_fmt(r["xi1"]), _fmt(r["xi2"]), _fmt(r["y"]),
                               _fmt(r["theta"]), str(int(r["dim"])),
                               _fmt(r["sigma_min_ratio"])]))
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if outdir is not None:
        with open(os.path.join(outdir, "rankmap.csv"), "w", newline="\n") as fh:
            fh.write(text)
    return 0


def cmd_simulate(cfg, outdir):
    traj = sim.integrate(cfg["state"], cfg["stroke"], cfg["params"],
                         dt=cfg["dt"], wall=cfg["wall"])
    path = os.path.join(outdir if outdir is not None else ".", "trajectory.csv")
    sim.export_csv(traj, path)
    delta = sim.net_displacement(traj)
    sys.stdout.write("net_displacement," +
                     ",".join(_fmt(v) for v in delta) + "\n")
    sys.stdout.write(f"trajectory,{path}\n")
    return 0


def cmd_plan(cfg, outdir):
    try:
        plan = planner.plan_local(cfg["state"], cfg["target"],
                                  budget=cfg["budget"], tol=cfg["tol"],
                                  params=cfg["params"], wall=cfg["wall"],
                                  trust_radius=cfg["trust_radius"])
    except planner.NotLocallyControllableError as exc:
        sys.stdout.write(json.dumps(
            {"error": "not_locally_controllable",
             "detail": str(exc),
             "rank": exc.report.dimension}, indent=2, sort_keys=True) + "\n")
        return 3
    base = outdir if outdir is not None else "."
    plan_path = os.path.join(base, "plan.json")
    plan.to_json(plan_path)
    lines = [f"achieved_error,{_fmt(plan.achieved_error)}",
             f"iterations,{plan.iterations}",
             f"converged,{plan.converged}",
             f"plan,{plan_path}"]
    if plan.stroke is not None:
        # re-verify the plan by forward integration at the planner's own
        # resolution and export the trajectory
        nlegs = len(plan.stroke.times) - 1
        dt = plan.stroke.duration / (planner.PLAN_STEPS_PER_LEG * nlegs)
        traj = sim.integrate(cfg["state"], plan.stroke, cfg["params"], dt=dt,
                             wall=cfg["wall"])
        traj_path = os.path.join(base, "plan_trajectory.csv")
        sim.export_csv(traj, traj_path)
        replay = traj.states[-1] - plan.predicted_final
        lines.append(f"replay_deviation,{_fmt(np.linalg.norm(replay))}")
        lines.append(f"trajectory,{traj_path}")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0 if plan.converged else 4


# -- verification suites ----------------------------------------------------

def _suite_wall_noslip(cfg):
    rng = np.random.default_rng(20240817)
    params = cfg["params"]
    worst = 0.0
    for _ in range(20):
        sources = []
        for _ in range(3):
            pos = np.array([rng.uniform(-2, 2), rng.uniform(0.5, 4),
                            rng.uniform(-2, 2)])
            f = rng.standard_normal(3)
            sources.append((pos, f))
        for _ in range(20):
            wp = np.array([rng.uniform(-5, 5), 0.0, rng.uniform(-5, 5)])
            u = greens.point_force_velocity(sources, wp, params.mu)
            scale = sum(np.linalg.norm(f) / (8 * np.pi * params.mu)
                        for _, f in sources)
            worst = max(worst, np.linalg.norm(u) / scale)
    return worst, worst < 1e-12, "wall velocity / stokeslet scale"


def _suite_lorentz_drag(cfg):
    params = cfg["params"]
    worst = 0.0
    for ratio in (0.01, 0.02, 0.05):
        y = params.a / ratio
        M = np.eye(3) - 6 * np.pi * params.mu * params.a * greens.self_image(
            np.array([0.0, y, 0.0]), params.mu)
        para = M[0, 0]
        perp = M[1, 1]
        worst = max(worst,
                    abs(para - (1 + 9 * ratio / 16)) / (1 + 9 * ratio / 16),
                    abs(perp - (1 + 9 * ratio / 8)) / (1 + 9 * ratio / 8))
    return worst, worst < 2 * 0.05**2, "drag factor relative error"


def _suite_scallop(cfg):
    params = cfg["params"]
    st = swimmer.ThreeSphereState(1.0, 1.4, 0.0, 4.0, 0.5)
    out = sim.Stroke(times=np.array([0.0, 1.0, 2.0]),
                     shapes=np.array([[1.0, 1.4], [1.25, 1.1], [1.4, 1.5]]))
    stroke = sim.reciprocal_stroke(out)
    traj = sim.integrate(st, stroke, params, dt=stroke.duration / 10000,
                         wall=cfg["wall"])
    err = float(np.linalg.norm(sim.net_displacement(traj)))
    return err, err < 1e-8, "reciprocal-stroke net displacement"


def _suite_symmetry(cfg):
    params = cfg["params"]
    rng = np.random.default_rng(5)
    worst = 0.0
    S = np.array([1.0, 1.0, -1.0, 1.0, -1.0])
    for _ in range(5):
        x1 = rng.uniform(0.6, 1.8)
        x2 = rng.uniform(0.6, 1.8)
        yv = rng.uniform(3.0, 12.0)
        t = rng.uniform(-1.2, 1.2)
        F1, F2 = swimmer.three_sphere_fields(
            swimmer.ThreeSphereState(x1, x2, 0.0, yv, t), params)
        G1, G2 = swimmer.three_sphere_fields(
            swimmer.ThreeSphereState(x2, x1, 0.0, yv, -t), params)
        # swap shape slots of the mirrored field, flip x and theta rates
        mirrored = S * np.concatenate([[G2[1], G2[0]], G2[2:]])
        worst = max(worst, float(np.max(np.abs(F1 - mirrored))))
    return worst, worst < 1e-10, "mirror-conjugation residual"


def _suite_degenerate_plan(cfg):
    params = cfg["params"]
    st = swimmer.ThreeSphereState(1.0, 1.4, 0.0, 4.0, math.pi / 2)
    try:
        planner.plan_local(st, st, params=params)
    except planner.NotLocallyControllableError as exc:
        return float(exc.report.dimension), exc.report.dimension <= 3, \
            "vertical start rejected with rank"
    return 5.0, False, "vertical start was not rejected"


_SUITES = {
    "wall_noslip": _suite_wall_noslip,
    "lorentz_drag": _suite_lorentz_drag,
    "scallop": _suite_scallop,
    "symmetry": _suite_symmetry,
    "degenerate_plan": _suite_degenerate_plan,
}


def cmd_verify(cfg, outdir):
    results = []
    for name in cfg["suites"]:
        value, ok, what = _SUITES[name](cfg)
        results.append({"suite": name, "value": value, "pass": bool(ok),
                        "detail": what})
        sys.stdout.write(
            f"{name} ({what}) = {value:.3e}: {'PASS' if ok else 'FAIL'}\n")
    failures = [r for r in results if not r["pass"]]
    if outdir is not None:
        with open(os.path.join(outdir, "verify.json"), "w", newline="\n") as fh:
            fh.write(json.dumps({"results": results,
                                 "failures": [r["suite"] for r in failures]},
                                indent=2, sort_keys=True) + "\n")
    if failures:
        sys.stdout.write(json.dumps(
            {"failures": [r["suite"] for r in failures]}, sort_keys=True) + "\n")
        return 1
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="wallstokes",
        description="Sphere-assembly micro-swimmers near a no-slip wall: "
                    "fields, controllability rank maps, stroke simulation, "
                    "and local planning.")
    parser.add_argument("command",
                        choices=["fields", "rankmap", "simulate", "plan",
                                 "verify"])
    parser.add_argument("--config", required=True, help="JSON scenario file")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--threads", type=int, default=None,
                        help="parallelism cap (fallback: WALLSTOKES_THREADS)")
    args = parser.parse_args(argv)

    threads = args.threads
    if threads is None:
        env = os.environ.get("WALLSTOKES_THREADS")
        if env is not None:
            try:
                threads = int(env)
            except ValueError:
                print(f"invalid WALLSTOKES_THREADS={env!r}", file=sys.stderr)
                return 2
    if threads is not None and threads < 1:
        print("--threads must be >= 1", file=sys.stderr)
        return 2

    try:
        cfg = load_config(args.config, args.command)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)

    try:
        if args.command == "fields":
            return cmd_fields(cfg, args.out)
        if args.command == "rankmap":
            return cmd_rankmap(cfg, args.out, threads)
        if args.command == "simulate":
            return cmd_simulate(cfg, args.out)
        if args.command == "plan":
            return cmd_plan(cfg, args.out)
        return cmd_verify(cfg, args.out)
    except (swimmer.ConfigurationError, swimmer.DegenerateConfigurationError,
            sim.AdmissibilityError, planner.PlannerError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
