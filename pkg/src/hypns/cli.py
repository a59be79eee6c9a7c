"""Command-line entry point: ``hypns <subcommand> [--config FILE] [--out DIR] ...``.

Every subcommand resolves a JSON config against its defaults, writes its
artifacts into ``--out`` together with ``<command>.config.json`` (the fully
resolved config, including every physical constant), and exits with

    0  all checks passed
    1  a certificate or assertion failed
    2  usage or config error
    3  I/O error
"""
from __future__ import annotations

import argparse
import copy
import csv
import datetime
import io
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, eigen, eos, invariant, kernels, sim

log = logging.getLogger("hypns")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

PARAM_DEFAULTS = {"tau1": 1.0, "tau2": 1.0, "kappa": 1.5, "mu": 1.0, "gas_const": 1.0, "cv": 1.5}

DEFAULTS = {
    "eos-check": {"params": PARAM_DEFAULTS, "samples": 10_000, "fd_samples": 200},
    "eigen-sweep": {"params": PARAM_DEFAULTS, "radius": 1e-3, "samples": 10_000, "workers": 1},
    "invariant-certify": {"w_range": [1e-3, 1e3], "z_range": [1e-3, 1e3], "n_w": 200, "n_z": 200,
                          "gammas": list(invariant.DEFAULT_GAMMAS)},
    "invariant-point": {"w": 1.0, "z": 1.0, "gamma": 5.0 / 3.0},
    "roots": {"gammas": [5.0 / 3.0], "z_range": [0.01, 100.0], "n_z": 101, "z": None},
    "sim-run": {"params": PARAM_DEFAULTS,
                "spec": {"family": "bump", "amplitude": 1e-3, "width": 4.0, "center": 0.0,
                         "direction": None, "skew": 6.0},
                "grid": {"resolution": sim.DEFAULT_RESOLUTION, "domain": list(sim.DEFAULT_DOMAIN)},
                "cfl": sim.DEFAULT_CFL, "t_end": 1.0, "output_every": 10, "svg": False},
    "sim-blowup-scan": {"params": {"tau1": 10.0, "tau2": 10.0, "kappa": 15.0, "mu": 10.0,
                                   "gas_const": 1.0, "cv": 1.5},
                        "spec": {"family": "sawtooth", "amplitude": 0.2, "width": 1.0,
                                 "center": 0.0, "direction": None, "skew": 6.0},
                        "amplitudes": [0.2], "resolutions": [2048, 4096],
                        "grid": {"domain": list(sim.DEFAULT_DOMAIN)},
                        "cfl": sim.DEFAULT_CFL, "t_end": 20.0, "threshold": sim.BLOWUP_THRESHOLD,
                        "output_every": 5, "svg": False},
}

ECHO_ONLY = ("command", "seed", "timestamp", "version", "backend")

# keys of nested blocks that accept arbitrary sub-keys are validated by the consumers
NESTED = {"params", "spec", "grid"}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# config handling

def _merge(defaults: dict, user: dict, where: str = "") -> dict:
    out = copy.deepcopy(defaults)
    for key, val in user.items():
        if key not in defaults:
            if where == "params" and key == "gamma":
                out[key] = val
                continue
            raise UsageError(f"unknown config key {where + '.' if where else ''}{key}")
        if key in NESTED and isinstance(defaults[key], dict):
            if not isinstance(val, dict):
                raise UsageError(f"config key {key} must be an object")
            out[key] = _merge(defaults[key], val, key)
        else:
            out[key] = val
    return out


def load_config(command: str, path) -> dict:
    user = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise OSError(f"cannot read config {path}: {exc.strerror or exc}") from exc
        try:
            user = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed config {path}: {exc}") from None
        if not isinstance(user, dict):
            raise UsageError("config must be a JSON object")
        for key in ECHO_ONLY:              # lets a config echo be fed back in
            user.pop(key, None)
    cfg = _merge(DEFAULTS[command], user)
    up = user.get("params")
    if isinstance(up, dict) and "gamma" in up and "cv" not in up:
        cfg["params"]["cv"] = None       # derived from gamma
    return cfg


def make_params(block: dict, art: "Artifacts" = None) -> eos.PhysicalParams:
    block = dict(block)
    try:
        vals = {k: (None if v is None else float(v)) for k, v in block.items()}
        gamma = vals.get("gamma")
        if gamma is not None and not 1 < gamma <= eos.GAMMA_MAX * (1 + 1e-14):
            raise ValueError(f"adiabatic index must lie in (1, 5/3], got {gamma!r}")
        if vals.get("cv") is None:
            if gamma is None:
                raise ValueError("give cv or gamma")
            vals["cv"] = vals["gas_const"] / (gamma - 1)
        params = eos.PhysicalParams(**vals)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid params: {exc}") from None
    if art is not None:
        art.resolve_params(params)
    return params


def _positive_int(cfg, key):
    val = cfg[key]
    if isinstance(val, bool) or not isinstance(val, int) or val < 1:
        raise UsageError(f"{key} must be a positive integer")
    return val


def _range(cfg, key):
    val = cfg[key]
    if not (isinstance(val, list) and len(val) == 2 and all(isinstance(x, (int, float)) for x in val)
            and 0 < val[0] <= val[1]):
        raise UsageError(f"{key} must be [lo, hi] with 0 < lo <= hi")
    return float(val[0]), float(val[1])


# ---------------------------------------------------------------------------
# output

def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def rows_to_csv(rows: list, columns) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if row.get(c) is None else _fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


class Artifacts:
    """Writes files into the output directory, preceded by the config echo."""

    def __init__(self, out: Path, command: str, config: dict, seed, timestamp: bool):
        self.out = out
        self.command = command
        self.config = config
        self.seed = seed
        self.timestamp = timestamp
        self.written = []

    def resolve_params(self, params: eos.PhysicalParams):
        """Echo the validated constants (including the derived ``gamma``)."""
        self.config["params"] = params.to_dict()

    def _echo(self):
        try:
            self.out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise OSError(f"cannot create output directory {self.out}: {exc.strerror or exc}") from exc
        echo = {"command": self.command, "seed": self.seed, "version": __version__,
                "backend": kernels.BACKEND_NAME, **self.config}
        if self.timestamp:
            echo["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
        self._write(f"{self.command}.config.json", dumps(echo))

    def _write(self, name: str, text: str) -> Path:
        path = self.out / name
        try:
            path.write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
        self.written.append(path)
        return path

    def write(self, name: str, text: str) -> Path:
        if not self.written:
            self._echo()
        return self._write(name, text)


def svg_lines(series: list, xlabel: str, ylabel: str, title: str, logy: bool = False) -> str:
    """Line chart as SVG text via matplotlib (optional dependency), with stable output."""
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        raise UsageError("SVG output needs matplotlib (pip install 'artifact[plot]')") from None
    matplotlib.rcParams["svg.hashsalt"] = "hypns"
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, x, y in series:
        ax.plot(x, y, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if logy:
        ax.set_yscale("log")
    if len(series) > 1:
        ax.legend()
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands

def cmd_eos_check(cfg, args, art: Artifacts) -> int:
    params = make_params(cfg["params"], art)
    samples = _positive_int(cfg, "samples")
    fd = _positive_int(cfg, "fd_samples")
    results = eos.check_suite(params, samples, args.seed, fd)
    rows = [r.to_dict() for r in results]
    ok = all(r.passed for r in results)
    if args.format == "json":
        art.write("eos_check.json", dumps({"passed": ok, "checks": rows}))
    else:
        art.write("eos_check.csv", rows_to_csv(rows, ["check", "error", "tolerance", "passed"]))
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: error {r.error:.3e} (tol {r.tolerance:g})")
    print("eos-check:", "PASS" if ok else "FAILED")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_eigen_sweep(cfg, args, art: Artifacts) -> int:
    params = make_params(cfg["params"], art)
    radius = cfg["radius"]
    if not isinstance(radius, (int, float)) or not radius >= 0:
        raise UsageError("radius must be a non-negative number")
    samples = _positive_int(cfg, "samples")
    workers = _positive_int(cfg, "workers")
    rep = eigen.hyperbolicity_sweep(float(radius), samples, params, seed=args.seed, workers=workers)
    summary = rep.summary()
    if args.format == "json":
        art.write("eigen_sweep.json", dumps({"summary": summary}))
    else:
        art.write("eigen_sweep.csv", rep.to_csv())
    art.write("eigen_sweep.summary.json", dumps(summary))
    print(f"eigen-sweep: {len(rep.failures)} failures in {samples} samples, "
          f"min gap {rep.min_gap:.3e}, max residual {rep.max_residual:.3e}")
    print("eigen-sweep:", "PASS" if rep.passed else "FAILED")
    return EXIT_OK if rep.passed else EXIT_FAIL


def _gammas(cfg):
    gammas = cfg["gammas"]
    if not isinstance(gammas, list) or not gammas:
        raise UsageError("gammas must be a non-empty list")
    try:
        out = [float(g) for g in gammas]
        for g in out:
            invariant.ReducedParams(1.0, 1.0, g)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid gamma: {exc}") from None
    return out


def cmd_invariant_certify(cfg, args, art: Artifacts) -> int:
    rep = invariant.negativity_certificate(_range(cfg, "w_range"), _range(cfg, "z_range"),
                                           _positive_int(cfg, "n_w"), _positive_int(cfg, "n_z"),
                                           _gammas(cfg))
    summary = rep.summary()
    if args.format == "csv":
        art.write("invariant_certificate.csv", rep.to_csv())
    art.write("invariant_certificate.json", dumps(summary))
    am = rep.argmax
    print(f"invariant-certify: max R = {rep.max_R:.6e} at gamma={am['gamma']:.6g}, "
          f"z={am['z']:.6g}, w={am['w']:.6g}; max spread {rep.max_spread:.2e}")
    print("invariant-certify:", "PASS" if rep.passed else "FAILED")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_invariant_point(cfg, args, art: Artifacts) -> int:
    for key in ("w", "z", "gamma"):
        if getattr(args, key, None) is not None:
            cfg[key] = args.__dict__[key]
    try:
        p = invariant.ReducedParams(float(cfg["w"]), float(cfg["z"]), float(cfg["gamma"]))
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid point: {exc}") from None
    e = invariant.riemann_invariant(p)
    region = invariant.region_partition(p.z, p.gamma, p.w)
    row = {"w": p.w, "z": p.z, "gamma": p.gamma, "R_a": float(e.R_a), "R_b": float(e.R_b),
           "R_c": float(e.R_c), "M": float(e.M), "N": float(e.N), "L": float(e.L),
           "f": float(e.f), "g": float(e.g), "P": float(e.P), "Q": float(e.Q),
           "region": region.label, "expression": region.expression}
    if args.format == "json":
        art.write("invariant_point.json", dumps(row))
    else:
        art.write("invariant_point.csv", rows_to_csv([row], list(row)))
    print(f"R(w={p.w:.15g}, z={p.z:.15g}, gamma={p.gamma:.15g})")
    for key in ("R_a", "R_b", "R_c"):
        print(f"  {key} = {row[key]:.15g}")
    print(f"  region {region.label}, certified by expression ({region.expression})")
    ok = float(e.R_a) < 0
    return EXIT_OK if ok else EXIT_FAIL


ROOT_COLUMNS = ["gamma", "z", "w_N", "w_M", "w_P", "w_Q", "ordered", "res_w_N", "res_w_M",
                "res_w_P", "res_w_Q", "Q_monotone", "condition"]


def cmd_roots(cfg, args, art: Artifacts) -> int:
    gammas = _gammas(cfg)
    if cfg["z"] is not None:
        z = cfg["z"]
        if not isinstance(z, list) or not z:
            raise UsageError("z grid is empty")
        try:
            z = np.asarray([float(x) for x in z])
        except (TypeError, ValueError):
            raise UsageError("z grid must contain numbers") from None
        if np.any(~(z > 0)):
            raise UsageError("z values must be positive")
    else:
        lo, hi = _range(cfg, "z_range")
        n = cfg["n_z"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise UsageError("z grid is empty (n_z must be a positive integer)")
        z = np.geomspace(lo, hi, n)
    g0 = invariant.gamma0()
    rows = []
    ok = True
    for g in gammas:
        table = invariant.root_table(z, g)
        res = invariant.root_residuals(table)
        ordered = np.asarray(table.ordered)
        resid_ok = all(np.all(np.asarray(r) < 1e-10) for r in res.values())
        ok &= bool(np.all(ordered)) and resid_ok
        for i, zi in enumerate(z):
            a = invariant.classify_monotonicity(g, float(zi))
            rows.append({"gamma": g, "z": float(zi), "w_N": table.w_N[i], "w_M": table.w_M[i],
                         "w_P": table.w_P[i], "w_Q": table.w_Q[i], "ordered": bool(ordered[i]),
                         "res_w_N": res["w_N"][i], "res_w_M": res["w_M"][i],
                         "res_w_P": res["w_P"][i], "res_w_Q": res["w_Q"][i],
                         "Q_monotone": a.monotone, "condition": a.condition})
    summary = {"gamma0": g0, "a0_at_gamma0": float(invariant.a0(g0)), "rows": len(rows),
               "all_ordered": ok}
    if args.format == "json":
        art.write("roots.json", dumps({"summary": summary, "rows": rows}))
    else:
        art.write("roots.csv", rows_to_csv(rows, ROOT_COLUMNS))
    art.write("roots.summary.json", dumps(summary))
    print(f"gamma0 = {g0:.10f}  (a0(gamma0) = {invariant.a0(g0):.3e})")
    print("roots:", "PASS" if ok else "FAILED", f"({len(rows)} rows)")
    return EXIT_OK if ok else EXIT_FAIL


def _sim_inputs(cfg, art):
    params = make_params(cfg["params"], art)
    spec_cfg = dict(cfg["spec"])
    if spec_cfg.get("direction") is not None:
        d = spec_cfg["direction"]
        if not isinstance(d, list) or len(d) != 5:
            raise UsageError("spec.direction must be a list of five numbers")
        spec_cfg["direction"] = tuple(float(x) for x in d)
    try:
        spec = sim.InitialData(**spec_cfg)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid spec: {exc}") from None
    domain = cfg["grid"]["domain"]
    if not (isinstance(domain, list) and len(domain) == 2 and domain[0] < domain[1]):
        raise UsageError("grid.domain must be [lo, hi] with lo < hi")
    cfl = cfg["cfl"]
    if not isinstance(cfl, (int, float)) or not 0 < cfl <= 1:
        raise UsageError("cfl must lie in (0, 1]")
    t_end = cfg["t_end"]
    if not isinstance(t_end, (int, float)) or not t_end >= 0:
        raise UsageError("t_end must be non-negative")
    return params, spec, tuple(float(x) for x in domain), float(cfl), float(t_end)


def cmd_sim_run(cfg, args, art: Artifacts) -> int:
    params, spec, domain, cfl, t_end = _sim_inputs(cfg, art)
    n = _positive_int(cfg["grid"], "resolution")
    every = _positive_int(cfg, "output_every")
    try:
        res = sim.run(spec, params, t_end, cfl, n, domain, every)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    summary = res.summary()
    d = res.diagnostics.arrays()
    if args.format == "json":
        art.write("sim_diagnostics.json", dumps({k: d[k] for k in sim.RunDiagnostics.COLUMNS}))
    else:
        art.write("sim_diagnostics.csv", res.diagnostics.to_csv())
    st = res.final
    theta = st.theta(params)
    rows = [{"x": x, "v": a, "u": b, "theta": c, "q": e, "S": f, "E": g}
            for x, a, b, c, e, f, g in zip(st.x, st.v, st.u, theta, st.q, st.S, st.E)]
    art.write("sim_final_state.csv", rows_to_csv(rows, ["x", "v", "u", "theta", "q", "S", "E"]))
    art.write("sim_summary.json", dumps(summary))
    if cfg["svg"]:
        art.write("sim_max_ux.svg", svg_lines([("max|u_x|", d["t"], d["max_ux"])],
                                              "t", "max |u_x|", "gradient history"))
        art.write("sim_balance.svg", svg_lines([("balance residual", d["t"], d["balance_residual"])],
                                               "t", "relative residual", "relative-entropy balance"))
    print(f"sim-run: status {res.status}, t = {st.time:.6g}, steps {res.steps}, "
          f"classical {res.classical}, max |balance residual| "
          f"{summary['max_abs_balance_residual']:.3e}")
    if res.low_temperature_flag:
        print("sim-run: warning: min theta <= 1/2 (relative entropy may be non-convex)")
    return EXIT_OK if res.status == "completed" else EXIT_FAIL


def cmd_sim_blowup_scan(cfg, args, art: Artifacts) -> int:
    params, spec, domain, cfl, t_end = _sim_inputs(cfg, art)
    amps = cfg["amplitudes"]
    res_list = cfg["resolutions"]
    if not isinstance(amps, list) or not amps or not all(isinstance(a, (int, float)) for a in amps):
        raise UsageError("amplitudes must be a non-empty list of numbers")
    if not isinstance(res_list, list) or not res_list or not all(
            isinstance(n, int) and not isinstance(n, bool) and n >= 4 for n in res_list):
        raise UsageError("resolutions must be a non-empty list of integers >= 4")
    threshold = cfg["threshold"]
    if not isinstance(threshold, (int, float)) or not threshold > 1:
        raise UsageError("threshold must be a number > 1")
    every = _positive_int(cfg, "output_every")
    try:
        rep = sim.blowup_scan(spec, [float(a) for a in amps], res_list, params, t_end,
                              float(threshold), cfl, domain, every)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    verdicts = {}
    for a in sorted(set(float(x) for x in amps)):
        comp = rep.compressive(a)
        rare = rep.rarefactive(a)
        verdicts[repr(a)] = {
            "t_star": [e.t_star for e in comp],
            "t_star_variation": rep.t_star_variation(a),
            "stabilizes": rep.stabilizes(a),
            "peak_ratio_compressive": [e.peak_ratio for e in comp],
            "peak_ratio_rarefactive": [e.peak_ratio for e in rare],
        }
    summary = {"threshold": float(threshold), "compressive_sign": sim.compressive_sign(spec, params),
               "nonlinearity_factor": sim.nonlinearity_factor(params), "amplitudes": verdicts}
    if args.format == "json":
        art.write("blowup_scan.json", dumps({"summary": summary, "rows": rep.table()}))
    else:
        art.write("blowup_scan.csv", rep.to_csv())
    art.write("blowup_scan.summary.json", dumps(summary))
    if cfg["svg"]:
        series = [(f"eps={e.amplitude:g} N={e.resolution} {'+' if e.sign > 0 else '-'}",
                   e.t, e.ratio) for e in rep.entries]
        art.write("blowup_scan.svg", svg_lines(series, "t", "max|u_x| / initial",
                                               "gradient growth", logy=True))
    print("amplitude,resolution,sign,t_star,status,peak_ratio")
    for e in rep.entries:
        ts = "" if e.t_star is None else f"{e.t_star:.6g}"
        print(f"{e.amplitude:g},{e.resolution},{e.sign:+d},{ts},{e.status},{e.peak_ratio:.4g}")
    return EXIT_OK


COMMANDS = {
    "eos-check": cmd_eos_check,
    "eigen-sweep": cmd_eigen_sweep,
    "invariant-certify": cmd_invariant_certify,
    "invariant-point": cmd_invariant_point,
    "roots": cmd_roots,
    "sim-run": cmd_sim_run,
    "sim-blowup-scan": cmd_sim_blowup_scan,
}

HELP = {
    "eos-check": "Gibbs relation, entropy closure, partials and temperature round trip",
    "eigen-sweep": "strict hyperbolicity certificate on random near-equilibrium states",
    "invariant-certify": "sign certificate of the genuine-nonlinearity coefficient on a grid",
    "invariant-point": "evaluate the coefficient by all three expressions at one point",
    "roots": "root table w_N, w_M, w_P, w_Q and monotonicity verdicts over a z grid",
    "sim-run": "evolve smooth data and record entropy diagnostics",
    "sim-blowup-scan": "compressive and rarefactive steepening runs over amplitudes and grids",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypns", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=HELP[name], description=HELP[name])
        p.add_argument("--config", help="JSON config file (missing keys take defaults)")
        p.add_argument("--out", default="out", help="output directory (created if missing)")
        p.add_argument("--seed", type=_u64, default=0, help="RNG seed (unsigned 64-bit)")
        p.add_argument("--no-timestamp", action="store_true",
                       help="omit the timestamp from the config echo")
        p.add_argument("--format", choices=("csv", "json"), default="csv",
                       help="format of the bulk artifact")
        if name == "invariant-point":
            p.add_argument("--w", type=float)
            p.add_argument("--z", type=float)
            p.add_argument("--gamma", type=float)
    return parser


def _u64(text: str) -> int:
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= val < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return val


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        cfg = load_config(args.command, args.config)
        art = Artifacts(Path(args.out), args.command, cfg, args.seed, not args.no_timestamp)
        return COMMANDS[args.command](cfg, args, art)
    except UsageError as exc:
        print(f"hypns {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hypns {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
