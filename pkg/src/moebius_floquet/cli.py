"""Command-line interface: ``moebius-floquet classify|portrait|trajectory|stability``.

Parameters come from flags or from a TOML file (``--config``) with the
sections ``[hamiltonian]``, ``[curve]``, ``[sweep]``, ``[integrator]`` and
``[output]``; flags win.  Complex values may be written as numbers, as
strings such as ``"0.27+0.32i"``, or as ``[re, im]`` pairs.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 sweep finished with unresolved cells.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import render, serialize
from .core import (
    Hamiltonian2,
    classify_hamiltonian,
    eigenvalues,
    hamiltonian_from_matrix,
    is_exceptional,
    pseudo_hermitian_parameter,
)
from .errors import IntegratorFailure, NoDominantState, SingularMatrix
from .floquet import (
    IntegratorOptions,
    monodromy,
    stroboscopic_eigenstates,
    trajectory,
)
from .modulation import FAMILIES, custom
from .static import poincare_portrait
from .sweep import Axis, SweepSpec, default_workers, extract_boundaries, run_sweep

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_PARTIAL = 0, 2, 3, 4

#: static Hamiltonians ``(tau, eta, b, mu)`` for the portrait command
PORTRAIT_PRESETS = {
    "elliptic": (0, 0, 1, 1),
    "hyperbolic": (0, 0, 1, -1),
    "loxodromic": (0, 0, 1, 1j),
    "parabolic": (0, 0.5, 1, 0),
}

#: curves for the trajectory command: family and parameters
CURVE_PRESETS = {
    "centered": ("circular", {"delta": 0, "rho": 1}),
    "crossing": ("circular", {"delta": 1, "rho": 1}),
    "decentered": ("circular", {"delta": 0.700145 + 0.254176j, "rho": 1.357497}),
    "quadratic": ("quadratic", {"delta": 0}),
    "quadratic-loxodromic": ("quadratic", {"delta": 1.2 + 0.3j}),
    "quadratic-elliptic": ("quadratic", {"delta": 0.393399}),
    "rectangular-loxodromic": ("rectangular", {"delta": 0.27 + 0.32j, "rho": 1, "alpha": 1}),
    "rectangular-elliptic": ("rectangular", {"delta": 0.153, "rho": 1, "alpha": 1}),
}

_CURVE_KEYS = ("delta", "rho", "alpha", "omega", "b", "eta", "time_scale", "scale", "value", "duration")


class ConfigError(ValueError):
    pass


def parse_complex(value) -> complex:
    """Number, ``[re, im]`` pair, or string such as ``1-2i`` / ``1-2j``."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(f"complex pair needs two entries: {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float, complex)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, str):
        s = value.strip().replace(" ", "").replace("i", "j")
        try:
            z = complex(s)
        except ValueError:
            raise ConfigError(f"not a complex number: {value!r}") from None
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ConfigError(f"complex value must be finite: {value!r}")
        return z
    raise ConfigError(f"not a complex number: {value!r}")


def parse_matrix(text: str) -> tuple[complex, ...]:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != 4:
        raise ConfigError("--matrix needs four comma-separated entries a,b,c,d")
    return tuple(parse_complex(p) for p in parts)


def parse_axis(value) -> Axis:
    if isinstance(value, str):
        value = value.split(",")
    if len(value) != 3:
        raise ConfigError(f"axis needs min,max,count: {value!r}")
    try:
        return Axis(float(value[0]), float(value[1]), int(value[2]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad axis {value!r}: {exc}") from None


def load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from None


def _pick(flag, section: dict, key: str, default=None):
    if flag is not None:
        return flag
    return section.get(key, default)


def _options(args, cfg) -> IntegratorOptions:
    sec = cfg.get("integrator", {})
    try:
        opts = IntegratorOptions(
            rel_tol=float(_pick(args.rel_tol, sec, "rel_tol", 1e-10)),
            abs_tol=float(sec.get("abs_tol", 1e-12)),
            initial_step=sec.get("initial_step"),
            max_step=sec.get("max_step"),
            backend=sec.get("backend"),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad [integrator] section: {exc}") from None
    if not (opts.rel_tol > 0 and opts.abs_tol > 0):
        raise ConfigError("integrator tolerances must be positive")
    if opts.backend not in (None, "cython", "python"):
        raise ConfigError(f"unknown backend {opts.backend!r}")
    return opts


def _out_dir(args, cfg) -> str:
    out = _pick(args.out, cfg.get("output", {}), "dir", "out")
    os.makedirs(out, exist_ok=True)
    return out


def _seed(args, cfg) -> int:
    seed = _pick(args.seed, cfg.get("output", {}), "seed", cfg.get("seed", 0))
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ConfigError("seed must be an unsigned 64-bit integer")
    return seed


def _hamiltonian(args, cfg) -> Hamiltonian2:
    sec = cfg.get("hamiltonian", {})
    preset = getattr(args, "preset", None)
    if args.matrix is not None:
        a, b, c, d = parse_matrix(args.matrix)
        return hamiltonian_from_matrix(a, b, c, d)
    if preset is not None:
        return Hamiltonian2(*PORTRAIT_PRESETS[preset])
    if "matrix" in sec:
        entries = [parse_complex(v) for v in sec["matrix"]]
        if len(entries) != 4:
            raise ConfigError("[hamiltonian] matrix needs four entries")
        return hamiltonian_from_matrix(*entries)
    if "preset" in sec:
        if sec["preset"] not in PORTRAIT_PRESETS:
            raise ConfigError(f"unknown preset {sec['preset']!r}")
        return Hamiltonian2(*PORTRAIT_PRESETS[sec["preset"]])
    if sec:
        return Hamiltonian2(
            tau=parse_complex(sec.get("tau", 0)),
            eta=parse_complex(sec.get("eta", 0)),
            b=parse_complex(sec.get("b", 1)),
            mu=parse_complex(sec.get("mu", 0)),
        )
    raise ConfigError("no Hamiltonian given (use --matrix, --preset or a [hamiltonian] section)")


def _curve(args, cfg):
    sec = dict(cfg.get("curve", {}))
    preset = getattr(args, "preset", None) or sec.pop("preset", None)
    family = args.curve
    params = {}
    if preset is not None and family is None:
        if preset not in CURVE_PRESETS:
            raise ConfigError(f"unknown curve preset {preset!r}")
        family, params = CURVE_PRESETS[preset]
        params = dict(params)
    family = family or sec.get("family")
    if family is None:
        raise ConfigError("no curve given (use --curve, --preset or a [curve] section)")
    if family == "custom":
        if "segments" not in sec:
            raise ConfigError("custom curve needs [[curve.segments]] entries")
        try:
            return custom(sec["segments"], parse_complex(sec.get("b", 1)), parse_complex(sec.get("eta", 0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad custom curve: {exc}") from None
    if family not in FAMILIES:
        raise ConfigError(f"unknown curve family {family!r}; expected one of {sorted(FAMILIES)} or custom")
    for key in _CURVE_KEYS:
        if key in sec and key not in params:
            params[key] = sec[key]
        flag = getattr(args, key, None)
        if flag is not None:
            params[key] = flag
    for key in ("delta", "b", "eta", "value"):
        if key in params:
            params[key] = parse_complex(params[key])
    try:
        return FAMILIES[family](**params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {family} curve: {exc}") from None


def _emit(obj: dict) -> None:
    print(json.dumps(obj, sort_keys=True))


def cmd_classify(args, cfg) -> int:
    opts = _options(args, cfg)
    if args.matrix is not None or (args.curve is None and "hamiltonian" in cfg):
        h = _hamiltonian(args, cfg)
        spec = eigenvalues(h)
        s = pseudo_hermitian_parameter(h)
        _emit({
            "class": classify_hamiltonian(h).value,
            "is_ep": is_exceptional(h),
            "eigenvalues": [serialize.cpair(spec.lambda_plus), serialize.cpair(spec.lambda_minus)],
            "dominant": spec.dominant,
            "pseudo_hermitian_s": s,
        })
        return EXIT_OK
    curve = _curve(args, cfg)
    m = monodromy(curve, opts)
    report = serialize.spectrum_report(m)
    report["family"] = curve.family
    report["winding_number"] = _winding(curve)
    _emit(report)
    return EXIT_OK


def _winding(curve):
    """Winding number about the static EP, or None if the curve passes through it."""
    try:
        return curve.winding_number(0j)
    except ValueError:
        return None


def cmd_portrait(args, cfg) -> int:
    h = _hamiltonian(args, cfg)
    sec = cfg.get("portrait", {})
    n = int(_pick(args.samples, sec, "samples", 1000))
    t_max = float(_pick(args.t_max, sec, "t_max", 10.0))
    steps = int(_pick(args.steps, sec, "steps", 200))
    if n < 1 or steps < 2 or not t_max > 0:
        raise ConfigError("need samples >= 1, steps >= 2 and t_max > 0")
    portrait = poincare_portrait(h, n, t_max, steps, _seed(args, cfg))
    out = _out_dir(args, cfg)
    name = args.preset or "portrait"
    csv_path = os.path.join(out, f"portrait-{name}.csv")
    svg_path = os.path.join(out, f"portrait-{name}.svg")
    serialize.write_portrait_csv(portrait, csv_path)
    label = f"{classify_hamiltonian(h).value}: tau={h.tau:g} eta={h.eta:g} b={h.b:g} mu={h.mu:g}"
    render.write_svg(render.portrait_svg(portrait, title=label), svg_path)
    _emit({"class": classify_hamiltonian(h).value, "csv": csv_path, "svg": svg_path})
    return EXIT_OK


def _initial_state(args, cfg, m):
    text = _pick(args.state, cfg.get("trajectory", {}), "state", "eig0")
    if isinstance(text, str) and text.startswith("eig"):
        vecs = stroboscopic_eigenstates(m)
        k = int(text[3:] or 0)
        if k >= len(vecs):
            raise ConfigError(f"only {len(vecs)} stroboscopic eigenstate(s) at this point")
        return vecs[k]
    parts = text.split(",") if isinstance(text, str) else text
    if len(parts) != 2:
        raise ConfigError("--state needs eig0, eig1 or two components a,b")
    return [parse_complex(p) for p in parts]


def cmd_trajectory(args, cfg) -> int:
    opts = _options(args, cfg)
    curve = _curve(args, cfg)
    sec = cfg.get("trajectory", {})
    periods = int(_pick(args.periods, sec, "periods", 5))
    spp = int(_pick(args.samples_per_period, sec, "samples_per_period", 200))
    if periods < 1 or spp < 1:
        raise ConfigError("need periods >= 1 and samples_per_period >= 1")
    m = monodromy(curve, opts)
    s0 = _initial_state(args, cfg, m)
    traj = trajectory(curve, s0, periods, spp, opts)
    out = _out_dir(args, cfg)
    report = serialize.spectrum_report(m)
    report["family"] = curve.family
    paths = {k: os.path.join(out, f"trajectory.{k}") for k in ("csv", "svg")}
    paths["json"] = os.path.join(out, "spectrum.json")
    serialize.write_trajectory_csv(traj, paths["csv"])
    serialize.write_json(report, paths["json"])
    render.write_svg(render.trajectory_svg(traj, title=f"{curve.family}: {report['class']}"), paths["svg"])
    _emit({"class": report["class"], **paths})
    return EXIT_OK


def _sweep_spec(args, cfg, opts) -> SweepSpec:
    sec = cfg.get("sweep", {})
    family = _pick(args.family, sec, "family", "rectangular")
    kw = {"family": family, "options": opts}
    if args.delta_range is not None or "delta_axis" in sec:
        kw["delta_axis"] = parse_axis(_pick(args.delta_range, sec, "delta_axis"))
    if args.rho_range is not None or "rho_axis" in sec:
        kw["rho_axis"] = parse_axis(_pick(args.rho_range, sec, "rho_axis"))
    for key in ("alpha", "omega", "time_scale", "delta_imag", "tol"):
        val = _pick(getattr(args, key, None), sec, key)
        if val is not None:
            kw[key] = float(val)
    for key in ("b", "eta"):
        val = _pick(getattr(args, key, None), sec, key)
        if val is not None:
            kw[key] = parse_complex(val)
    try:
        return SweepSpec(**kw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad sweep: {exc}") from None


def cmd_stability(args, cfg) -> int:
    opts = _options(args, cfg)
    spec = _sweep_spec(args, cfg, opts)
    workers = int(_pick(args.workers, cfg, "workers", default_workers()))
    if workers < 1:
        raise ConfigError("workers must be >= 1")
    grid = run_sweep(spec, workers)
    out = _out_dir(args, cfg)
    stem = os.path.join(out, "stability")
    serialize.write_grid_csv(grid, stem + ".csv")
    serialize.write_grid_binary(grid, stem + ".bin")
    boundaries = extract_boundaries(grid, refine=bool(args.refine))
    with open(stem + "-boundaries.csv", "w") as fh:
        fh.write("class_a,class_b,delta,rho\n")
        for bset in boundaries:
            a, b = (c.value for c in bset.classes)
            for d, r in bset.points:
                fh.write(f"{a},{b},{d!r},{r!r}\n")
    mid = 0.5 * (spec.rho_axis.start + spec.rho_axis.stop)
    inset = spec.curve(0.5 * (spec.delta_axis.start + spec.delta_axis.stop), mid)
    title = f"{spec.family} alpha={spec.alpha:g}"
    render.write_svg(render.stability_svg(grid, inset=inset, title=title), stem + ".svg")
    counts = grid.counts()
    _emit({"counts": counts, "csv": stem + ".csv", "bin": stem + ".bin", "svg": stem + ".svg"})
    return EXIT_PARTIAL if counts["Unresolved"] else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML file with run parameters")
    common.add_argument("--out", help="output directory (default: out)")
    common.add_argument("--seed", type=int, help="random seed for portraits (default 0)")
    common.add_argument("--workers", type=int, help="sweep worker processes (default: CPUs)")
    common.add_argument("--rel-tol", type=float, dest="rel_tol", help="integrator relative tolerance")

    curve = argparse.ArgumentParser(add_help=False)
    curve.add_argument("--curve", choices=sorted(FAMILIES) + ["custom"], help="modulation curve family")
    curve.add_argument("--delta", help="curve centre (complex)")
    curve.add_argument("--rho", type=float, help="modulation depth")
    curve.add_argument("--alpha", type=float, help="aspect ratio")
    curve.add_argument("--omega", type=float, help="angular frequency of circular/elliptical curves")
    curve.add_argument("--b", help="coupling b (complex)")
    curve.add_argument("--eta", help="detuning eta (complex)")
    curve.add_argument("--time-scale", type=float, dest="time_scale", help="slow-down factor")
    curve.add_argument("--scale", type=float, help="loop size of the quadratic curve")

    p = argparse.ArgumentParser(prog="moebius-floquet", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common, curve], help="class of a Hamiltonian or a curve's monodromy")
    c.add_argument("--matrix", help="static Hamiltonian entries a,b,c,d (row-major)")
    c.set_defaults(func=cmd_classify, preset=None)

    po = sub.add_parser("portrait", parents=[common], help="polarisation portrait of a static Hamiltonian")
    po.add_argument("--preset", choices=sorted(PORTRAIT_PRESETS))
    po.add_argument("--matrix", help="Hamiltonian entries a,b,c,d (row-major)")
    po.add_argument("--samples", type=int, help="number of random initial polarisations (1000)")
    po.add_argument("--t-max", type=float, dest="t_max", help="final time (10)")
    po.add_argument("--steps", type=int, help="time samples per trajectory (200)")
    po.set_defaults(func=cmd_portrait)

    t = sub.add_parser("trajectory", parents=[common, curve], help="state evolution under a modulation curve")
    t.add_argument("--preset", choices=sorted(CURVE_PRESETS))
    t.add_argument("--state", help="eig0, eig1 or two components a,b (default eig0)")
    t.add_argument("--periods", type=int, help="number of periods (5)")
    t.add_argument("--samples-per-period", type=int, dest="samples_per_period", help="(200)")
    t.set_defaults(func=cmd_trajectory)

    s = sub.add_parser("stability", parents=[common], help="stability diagram over (delta, rho)")
    s.add_argument("--family", choices=["rectangular", "elliptical", "circular", "quadratic"])
    s.add_argument("--alpha", type=float)
    s.add_argument("--delta-range", dest="delta_range", help="min,max,count (default -1,6,400)")
    s.add_argument("--rho-range", dest="rho_range", help="min,max,count (default 0,4,300)")
    s.add_argument("--omega", type=float, help="angular frequency (default pi/2)")
    s.add_argument("--b", help="coupling (complex)")
    s.add_argument("--eta", help="detuning (complex)")
    s.add_argument("--time-scale", type=float, dest="time_scale")
    s.add_argument("--delta-imag", type=float, dest="delta_imag", help="imaginary offset of delta")
    s.add_argument("--tol", type=float, help="classification tolerance on sigma (1e-7)")
    s.add_argument("--refine", action="store_true", help="bisect boundary points to 1e-6")
    s.set_defaults(func=cmd_stability)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    # numerical errors first: some of them are ValueError subclasses
    except (IntegratorFailure, SingularMatrix, NoDominantState, FloatingPointError, OverflowError) as exc:
        print(f"moebius-floquet: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, ValueError, KeyError) as exc:
        print(f"moebius-floquet: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
