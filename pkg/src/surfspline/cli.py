"""Command-line front end: placement, density certification, studies, dyadic checks.

Four subcommands (``place``, ``density``, ``study``, ``dyadic``), each taking
``--config <path>`` and ``--out <dir>`` plus an optional ``--seed``.  Configs
are strict JSON: unknown keys are rejected so a typo in an exponent name can
never silently fall back to a default.  All outputs are deterministic given
(config, seed); floats are serialized with 17 significant digits.

Exit codes: 0 success, 1 numerical failure, 2 input/config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .centers import CenterSet
from .density import (
    DensityField,
    DensityParams,
    NoAdmissibleRadius,
    certify_self_majorization,
    certify_slow_growth,
    default_stability_cap,
    lemma_transfer_sg_to_sm,
    lemma_transfer_sm_to_sg,
    majorant,
    minimal_density,
)
from .dyadic import (
    DyadicParams,
    UndersampledDensity,
    bad_cube_bound_check,
    classify,
    enumerate_cubes,
    max_overlap,
    overlap_count,
)
from .kernels import KernelParams, bump
from .placement import MultiresSpec, build_ring_plan, cardinality_report, generate_centers
from .polyrep import ReproductionError
from .quasiinterp import AssemblyError, convergence_study

SCHEMA_VERSION = 1


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# deterministic serialization


def format_float(v: float) -> str:
    return f"{v:.17g}"


def _json_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for k in obj:  # preserve insertion order: configs are built deterministically
            items.append(f'{pad}  "{k}": {_json_text(obj[k], indent + 1)}')
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}  {_json_text(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if obj is None:
        return "null"
    return json.dumps(obj)


def write_json(path: Path, obj: dict) -> None:
    obj = {"schema_version": SCHEMA_VERSION, **obj}
    path.write_text(_json_text(obj) + "\n")


def write_csv(path: Path, header: str, rows) -> None:
    lines = [header]
    for row in rows:
        lines.append(",".join(format_float(v) if isinstance(v, float) else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# centers / density file formats


def write_centers(path: Path, cs: CenterSet) -> None:
    levels = cs.levels if cs.levels is not None else np.zeros(len(cs), dtype=int)
    rows = [tuple(map(float, p)) + (int(lv),) for p, lv in zip(cs.points, levels)]
    write_csv(path, f"dim,{cs.dim}", rows)


def read_centers(path: Path) -> CenterSet:
    try:
        lines = Path(path).read_text().strip().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read centers file {path}: {exc}") from exc
    if not lines or not lines[0].startswith("dim,"):
        raise ConfigError(f"centers file {path} missing 'dim,<d>' header")
    try:
        dim = int(lines[0].split(",")[1])
    except (IndexError, ValueError) as exc:
        raise ConfigError(f"bad centers header {lines[0]!r}") from exc
    if len(lines) < 2:
        raise ConfigError(f"centers file {path} holds no centers")
    pts, levels = [], []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != dim + 1:
            raise ConfigError(f"bad centers row {ln!r} (expected {dim + 1} fields)")
        pts.append([float(v) for v in parts[:dim]])
        levels.append(int(parts[dim]))
    return CenterSet(np.array(pts), levels=np.array(levels))


def write_density(path: Path, pts: np.ndarray, values: np.ndarray) -> None:
    d = pts.shape[1]
    header = ",".join(f"x{a + 1}" for a in range(d)) + ",rho"
    rows = [tuple(map(float, p)) + (float(v),) for p, v in zip(pts, values)]
    write_csv(path, header, rows)


def read_density(path: Path, params: DensityParams | None = None) -> DensityField:
    try:
        lines = Path(path).read_text().strip().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read density file {path}: {exc}") from exc
    if not lines or not lines[0].startswith("x1"):
        raise ConfigError(f"density file {path} missing 'x1,...,rho' header")
    d = len(lines[0].split(",")) - 1
    pts, vals = [], []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != d + 1:
            raise ConfigError(f"bad density row {ln!r}")
        pts.append([float(v) for v in parts[:d]])
        vals.append(float(parts[d]))
    if not pts:
        raise ConfigError(f"density file {path} holds no samples")
    return DensityField(np.array(pts), np.array(vals), params)


# ---------------------------------------------------------------------------
# strict config handling


def load_config(path: str, command: str) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - {command}
    if unknown:
        raise ConfigError(f"unexpected top-level keys {sorted(unknown)}; expected only {command!r}")
    if command not in raw:
        raise ConfigError(f"config missing the {command!r} block")
    block = raw[command]
    if not isinstance(block, dict):
        raise ConfigError(f"{command!r} block must be a JSON object")
    return block


def take(block: dict, key: str, required: bool = True, default=None):
    if key not in block:
        if required:
            raise ConfigError(f"missing config key {key!r}")
        return default
    return block.pop(key)


def ensure_consumed(block: dict) -> None:
    if block:
        raise ConfigError(f"unknown config keys {sorted(block)}")


def _box(obj, d: int) -> tuple[np.ndarray, np.ndarray]:
    if not isinstance(obj, dict) or set(obj) != {"lo", "hi"}:
        raise ConfigError("box must be {'lo': [...], 'hi': [...]}")
    lo, hi = np.asarray(obj["lo"], dtype=float), np.asarray(obj["hi"], dtype=float)
    if lo.shape != (d,) or hi.shape != (d,):
        raise ConfigError(f"box vectors must have length {d}")
    return lo, hi


def _probe_grid(obj, d: int) -> np.ndarray:
    if not isinstance(obj, dict) or set(obj) != {"lo", "hi", "count"}:
        raise ConfigError("probe must be {'lo': [...], 'hi': [...], 'count': n}")
    lo, hi = np.asarray(obj["lo"], dtype=float), np.asarray(obj["hi"], dtype=float)
    n = int(obj["count"])
    if lo.shape != (d,) or hi.shape != (d,) or n < 2:
        raise ConfigError("bad probe grid")
    axes = [np.linspace(lo[a], hi[a], n) for a in range(d)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


# ---------------------------------------------------------------------------
# subcommands


def cmd_place(block: dict, out: Path, seed: int) -> None:
    d = int(take(block, "d"))
    spec = MultiresSpec(
        j=int(take(block, "j")),
        k=int(take(block, "k")),
        d=d,
        defect=np.asarray(take(block, "defect"), dtype=float),
        box=_box(take(block, "box"), d),
        epsilon=float(take(block, "epsilon", required=False, default=1.0 / 3.0)),
        degree=take(block, "degree", required=False),
    )
    ensure_consumed(block)
    plan = build_ring_plan(spec)
    cs = generate_centers(spec)
    card = cardinality_report(spec, cs)
    write_centers(out / "centers.csv", cs)
    write_json(out / "place_report.json", {
        "j": spec.j, "k": spec.k, "d": spec.d,
        "epsilon": spec.epsilon, "degree": spec.degree,
        "core": {"radius": plan.core_radius, "spacing": plan.core_spacing},
        "rings": [{"J": r.index, "inner": r.inner, "outer": r.outer, "spacing": r.spacing}
                  for r in plan.rings],
        "global_spacing": plan.global_spacing,
        "spacings": [plan.core_spacing] + [r.spacing for r in plan.rings],
        "n_centers": len(cs),
        "cardinality": {
            "ball_radius": card.ball_radius,
            "actual": card.actual,
            "bound": card.bound,
            "uniform_count": card.uniform_count,
            "ratio_to_bound": card.ratio_to_bound,
        },
    })


def cmd_density(block: dict, out: Path, seed: int) -> None:
    cs = read_centers(Path(take(block, "centers_file")))
    degree = int(take(block, "degree"))
    epsilon = float(take(block, "epsilon"))
    r = float(take(block, "r"))
    cap = take(block, "stability_cap", required=False)
    cap = float(cap) if cap is not None else default_stability_cap(cs.dim, degree)
    probes = _probe_grid(take(block, "probe"), cs.dim)
    ensure_consumed(block)
    params = DensityParams(degree=degree, stability_cap=cap,
                           majorant_exponent=r, growth_exponent=epsilon)
    rho = np.empty(probes.shape[0])
    for i, p in enumerate(probes):
        try:
            rho[i], _ = minimal_density(cs, p, degree, cap)
        except NoAdmissibleRadius as exc:
            raise NoAdmissibleRadius(f"at probe {p.tolist()}: {exc}") from exc
    df = DensityField(probes, rho, params)
    write_density(out / "density.csv", probes, rho)
    hvals = np.array([majorant(df, p, r) for p in probes])
    write_density(out / "majorant.csv", probes, hvals)
    c_sg = certify_slow_growth(df, epsilon)
    c_sm = certify_self_majorization(df, r)
    eps_from_sm, c_sg_from_sm = lemma_transfer_sm_to_sg(c_sm, r)
    r_from_sg, c_sm_from_sg = lemma_transfer_sg_to_sm(c_sg, epsilon)
    write_json(out / "certificates.json", {
        "degree": degree, "stability_cap": cap, "epsilon": epsilon, "r": r,
        "n_samples": len(df),
        "c_sg": c_sg,
        "c_sm": c_sm,
        "lemma_sm_to_sg": {"epsilon": eps_from_sm, "c_sg_bound": c_sg_from_sm},
        "lemma_sg_to_sm": {"r": r_from_sg, "c_sm_bound": c_sm_from_sg},
    })


def cmd_study(block: dict, out: Path, seed: int) -> None:
    d = int(take(block, "d"))
    k = int(take(block, "k"))
    degree = int(take(block, "degree"))
    epsilon = float(take(block, "epsilon"))
    js = [int(j) for j in take(block, "js")]
    if len(js) < 3:
        raise ConfigError("js sweep must have length >= 3")
    placement = take(block, "placement")
    if placement not in ("uniform", "multires"):
        raise ConfigError("placement must be 'uniform' or 'multires'")
    bump_cfg = take(block, "bump")
    if not isinstance(bump_cfg, dict) or set(bump_cfg) != {"exponent", "scale"}:
        raise ConfigError("bump must be {'exponent': p, 'scale': s}")
    quad = take(block, "quadrature", required=False,
                default={"cells_per_rho": 4, "rule": "gauss2"})
    if not isinstance(quad, dict) or set(quad) != {"cells_per_rho", "rule"}:
        raise ConfigError("quadrature must be {'cells_per_rho': m, 'rule': ...}")
    box = _box(take(block, "box"), d)
    probes = _probe_grid(take(block, "probe"), d)
    defect = take(block, "defect", required=False)
    ensure_consumed(block)

    params = KernelParams(d=d, k=k, degree=degree)
    f = bump(int(bump_cfg["exponent"]), np.zeros(d), float(bump_cfg["scale"]))

    def factory(j):
        if placement == "uniform":
            h = 2.0**-j
            axes = []
            for a in range(d):
                i0 = int(np.ceil(box[0][a] / h))
                i1 = int(np.floor(box[1][a] / h))
                axes.append(np.arange(i0, i1 + 1) * h)
            mesh = np.meshgrid(*axes, indexing="ij")
            return CenterSet(np.stack([m.ravel() for m in mesh], axis=1))
        spec = MultiresSpec(j=j, k=k, d=d, defect=np.asarray(defect, dtype=float),
                            box=box, epsilon=epsilon, degree=degree)
        return generate_centers(spec)

    if placement == "multires" and defect is None:
        raise ConfigError("multires placement requires a defect")
    res = convergence_study(
        js, factory, f, params, degree=degree, epsilon=epsilon, probes=probes,
        cells_per_rho=int(quad["cells_per_rho"]), rule=str(quad["rule"]),
        defect=np.asarray(defect, dtype=float).reshape(-1) if defect is not None else None,
    )
    rows = []
    for i, j in enumerate(res.js):
        row = (j, float(res.global_errors[i]))
        if res.defect_errors is not None:
            row += (float(res.defect_errors[i]),)
        rows.append(row)
    header = "j,sup_error" + (",defect_error" if res.defect_errors is not None else "")
    write_csv(out / "study.csv", header, rows)
    report = {"js": list(res.js), "global_slope": res.global_slope}
    if res.defect_slope is not None:
        report["defect_slope"] = res.defect_slope
    write_json(out / "slopes.json", report)


def cmd_dyadic(block: dict, out: Path, seed: int) -> None:
    density_file = Path(take(block, "density_file"))
    gamma = float(take(block, "gamma"))
    sigma = float(take(block, "sigma"))
    two_k = float(take(block, "two_k"))
    r = float(take(block, "r"))
    levels = take(block, "levels")
    if not (isinstance(levels, list) and len(levels) == 2):
        raise ConfigError("levels must be [lo, hi]")
    overlap_points = int(take(block, "overlap_points", required=False, default=20))
    df = read_density(density_file)
    box = _box(take(block, "box"), df.dim)
    ensure_consumed(block)
    params = DyadicParams(gamma=gamma, sigma=sigma, two_k=two_k)
    cubes = enumerate_cubes(box, range(int(levels[0]), int(levels[1]) + 1), df.dim)
    good, bad = classify(cubes, df, params)
    c_sm = certify_self_majorization(df, r)
    ratio = bad_cube_bound_check(bad, df, params, c_sm, r)
    good_set = set(good)
    rows = []
    for cube in cubes:
        rows.append((cube.level,) + cube.corner_index + cube.gender
                    + ("good" if cube in good_set else "bad",))
    d = df.dim
    header = ("level," + ",".join(f"k{a + 1}" for a in range(d)) + ","
              + ",".join(f"e{a + 1}" for a in range(d)) + ",class")
    write_csv(out / "partition.csv", header, rows)
    rng = np.random.default_rng(seed)
    lo, hi = box
    bound = max_overlap(d, gamma)
    worst = 0
    by_level: dict[int, list] = {}
    for cube in cubes:
        by_level.setdefault(cube.level, []).append(cube)
    for _ in range(overlap_points):
        x = rng.uniform(lo, hi)
        for level_cubes in by_level.values():
            worst = max(worst, overlap_count(level_cubes, x, params))
    write_json(out / "bound_check.json", {
        "gamma": gamma, "sigma": sigma, "two_k": two_k, "r": r,
        "c_sm": c_sm,
        "n_cubes": len(cubes), "n_good": len(good), "n_bad": len(bad),
        "bad_cube_max_ratio": ratio,
        "overlap": {"bound": bound, "max_observed": worst,
                    "points": overlap_points},
    })


COMMANDS = {
    "place": cmd_place,
    "density": cmd_density,
    "study": cmd_study,
    "dyadic": cmd_dyadic,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="surfspline",
        description="Surface-spline approximation with nonuniform centers",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", required=True)
        p.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    try:
        block = load_config(args.config, args.command)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        COMMANDS[args.command](block, out, args.seed)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NoAdmissibleRadius, AssemblyError, ReproductionError, UndersampledDensity) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
