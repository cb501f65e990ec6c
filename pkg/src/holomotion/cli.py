"""Scenario runner: parse a scenario file, dispatch, report, render.

Each run writes a JSON report {scenario, inputs, results, certificates,
runtime_ms}, a CSV table of the headline results, and (on request) a
matplotlib figure.  Exit codes: 0 all certificates pass, 2 a certificate
failed, 1 input error.  All outputs except the runtime_ms field are
byte-deterministic for identical inputs and tolerances.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import barycentric, flow, geometry, monodromy, radial, words
from .figures import RENDERABLE_KINDS, render_figure

KINDS = ("words", "monodromy", "counterexample", "geometry", "extend", "barycenter")


class ScenarioError(Exception):
    """Input problem; carries the offending key for the error message."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def _need(payload: dict, key: str, kinds=None):
    if key not in payload:
        raise ScenarioError(key, "missing required key")
    value = payload[key]
    if kinds is not None and not isinstance(value, kinds):
        raise ScenarioError(key, f"expected {kinds}, got {type(value).__name__}")
    return value


def _as_complex(value, key: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(value[0], value[1])
    raise ScenarioError(key, "expected a number or an [re, im] pair")


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


# ---------------------------------------------------------------------------
# kind handlers: each returns (results, certificates, csv_rows, figure_data)
# ---------------------------------------------------------------------------

def _run_words(payload: dict):
    rank = _need(payload, "rank", int)
    try:
        word = words.parse_word(_need(payload, "word", str), rank)
    except ValueError as exc:
        raise ScenarioError("word", str(exc))
    operations = payload.get("operations") or [
        {"op": "reduce"},
        {"op": "exponent_sums"},
        {"op": "is_trivial"},
    ]
    results = {"word": words.format_word(words.reduce_word(word)), "steps": []}
    rows = [("operation", "output")]
    for op_spec in operations:
        name = _need(op_spec, "op", str)
        if name == "reduce":
            out = words.format_word(words.reduce_word(word))
        elif name == "is_trivial":
            out = words.is_trivial(word)
        elif name == "exponent_sums":
            out = list(words.exponent_sums(word))
        elif name == "delete_generator":
            out = words.format_word(
                words.delete_generator(word, _need(op_spec, "index", int))
            )
        elif name == "fill_infinity":
            out = words.format_word(words.fill_infinity(word))
        elif name == "commutator":
            other = words.parse_word(_need(op_spec, "other", str), rank)
            out = words.format_word(words.commutator(word, other))
        else:
            raise ScenarioError("operations", f"unknown operation {name!r}")
        results["steps"].append({"op": name, "output": out})
        rows.append((name, json.dumps(out)))
    return results, {}, rows, None


def _load_motion_spec(payload: dict) -> monodromy.CoveringMotionSpec:
    n = _need(payload, "n", int)
    z0 = _as_complex(_need(payload, "z0"), "z0")
    raw_points = _need(payload, "points", list)
    if len(raw_points) != n:
        raise ScenarioError("points", f"expected {n} points, got {len(raw_points)}")
    points = tuple(_as_complex(p, "points") for p in raw_points)
    try:
        config = monodromy.PointConfig(n=n, z0=z0, points=points)
    except ValueError as exc:
        raise ScenarioError("points", str(exc))
    try:
        word = words.parse_word(_need(payload, "word", str), n + 2)
    except ValueError as exc:
        raise ScenarioError("word", str(exc))
    return monodromy.CoveringMotionSpec(config=config, word=word)


def _chirka_table(spec) -> dict:
    table = monodromy.chirka_numbers(spec)
    return {"|".join(sorted(pair)): turns for pair, turns in table.items()}


def _run_monodromy(payload: dict):
    spec = _load_motion_spec(payload)
    results = {
        "monodromy_trivial": monodromy.monodromy_is_trivial(spec),
        "chirka_numbers": dict(sorted(_chirka_table(spec).items())),
        "reduced_word": words.format_word(words.reduce_word(spec.word)),
    }
    restrictions = {}
    for kept in payload.get("subsets", []):
        try:
            res = monodromy.restrict_to_subset(spec, kept)
        except ValueError as exc:
            raise ScenarioError("subsets", str(exc))
        restrictions["|".join(sorted(kept))] = {
            "word": words.format_word(res.word),
            "trivial": res.trivial,
        }
    if restrictions:
        results["restrictions"] = restrictions
    quadruple_results = {}
    for quad in payload.get("quadruples", []):
        try:
            value = monodromy.trace_monodromy_trivial(spec, quad)
        except ValueError as exc:
            raise ScenarioError("quadruples", str(exc))
        quadruple_results["|".join(sorted(quad))] = value
    if quadruple_results:
        results["trace_monodromy"] = quadruple_results
    rows = [("pair", "turns")]
    rows += sorted(results["chirka_numbers"].items())
    return results, {}, rows, None


def _run_counterexample(payload: dict):
    family = payload.get("family", "trace")
    n = _need(payload, "n", int)
    if family not in ("chirka", "trace"):
        raise ScenarioError("family", "expected 'chirka' or 'trace'")
    if n < 0 or (family == "trace" and n < 1):
        raise ScenarioError("n", f"invalid n = {n} for family {family!r}")
    builder = (
        monodromy.build_chirka_counterexample
        if family == "chirka"
        else monodromy.build_trace_counterexample
    )
    spec = builder(n)
    chirka = _chirka_table(spec)
    results = {
        "family": family,
        "n": n,
        "word": words.format_word(spec.word),
        "word_length": len(spec.word),
        "exponent_sums": list(words.exponent_sums(spec.word)),
        "chirka_numbers": dict(sorted(chirka.items())),
        "monodromy_trivial": monodromy.monodromy_is_trivial(spec),
        "z0": _pair(spec.config.z0),
        "points": [_pair(p) for p in spec.config.points],
    }
    certificates = {
        "full_word_nontrivial": not monodromy.monodromy_is_trivial(spec),
        "chirka_condition_holds": all(v == 0 for v in chirka.values()),
    }
    rows = [("case", "trivial")]
    if family == "trace":
        report = monodromy.verify_property_A(n)
        results["property_A"] = report.to_dict()
        certificates["property_A"] = report.passed
        for j, ok in enumerate(report.deletions_trivial):
            rows.append((f"delete g{j}", ok))
        rows.append(("fill infinity", report.infinity_fill_trivial))
        subsets = monodromy.all_subsets_containing_moving(spec.config)
        proper = [s for s in subsets if len(s) < len(spec.config.labels())]
        all_trivial = all(
            monodromy.restrict_to_subset(spec, s).trivial for s in proper
        )
        certificates["all_proper_subsets_trivial"] = all_trivial
        results["proper_subsets_checked"] = len(proper)
    rows.append(("full word", monodromy.monodromy_is_trivial(spec)))
    return results, certificates, rows, None


def _run_geometry(payload: dict):
    ell = _need(payload, "ellE", (int, float))
    R = _need(payload, "R", (int, float))
    if ell < 0:
        raise ScenarioError("ellE", "must be >= 0")
    if R <= 1:
        raise ScenarioError("R", "must exceed 1")
    L = geometry.config_length_bound(float(ell))
    core = geometry.annulus_core_length(float(R))
    threshold = geometry.annulus_extension_threshold(L) if L > 0 else None
    n_core = 32768
    circle = np.sqrt(R) * np.exp(2j * np.pi * np.arange(n_core) / n_core)
    quadrature = geometry.annulus_curve_length(float(R), circle)
    results = {
        "length_bound": L,
        "length_bound_cap": geometry.LENGTH_BOUND_CAP,
        "core_length": core,
        "core_length_quadrature": quadrature,
        "extension_threshold": threshold,
        "annulus_extends_everything": bool(threshold is not None and R > threshold),
    }
    certificates = {
        "quadrature_matches_core_length": abs(quadrature - core) < 1e-6,
    }
    rows = [("quantity", "value")] + [
        (k, v) for k, v in results.items() if v is not None
    ]
    return results, certificates, rows, None


def _parse_traces(raw, key: str) -> radial.MotionTraces:
    if not isinstance(raw, list) or not raw:
        raise ScenarioError(key, "expected a non-empty list of coefficient arrays")
    arrays = []
    for arr in raw:
        if not isinstance(arr, list) or not arr:
            raise ScenarioError(key, "each trace is a non-empty coefficient array")
        arrays.append([_as_complex(c, key) for c in arr])
    try:
        return radial.MotionTraces.from_coefficients(arrays)
    except ValueError as exc:
        raise ScenarioError(key, str(exc))


def _run_extend(payload: dict):
    traces = _parse_traces(_need(payload, "traces", list), "traces")
    n_samples = int(payload.get("samples", 256))
    n_rays = int(payload.get("rays", 64))
    tol = float(payload.get("tol", flow.CROSS_TRACK_TOL))
    agreement_tol = float(payload.get("agreement_tol", 1e-4))
    holomorphy_tol = float(payload.get("holomorphy_tol", 1e-6))
    n_pairs = int(payload.get("injectivity_pairs", 300))
    try:
        em = flow.extend_motion(traces, n_samples=n_samples, n_rays=n_rays, tol=tol)
    except (ValueError, radial.MonotonicityViolation) as exc:
        raise ScenarioError("traces", str(exc))
    rs = em.structure
    lemma = radial.verify_lemma_properties(rs)
    agreement = em.agreement_residual()
    base_grid = [0.5 * (3 * rs.radii.r + rs.radii.R), rs.radii.R - 0.5]
    basepoint_dev = max(
        abs(em.evaluate(0.0, rho * np.exp(1j * th)) - rho * np.exp(1j * th))
        for rho in base_grid
        for th in np.linspace(-np.pi, np.pi, 8, endpoint=False)
    )
    holo = max(
        flow.holomorphy_residual(em, complex(z))
        for z in (
            base_grid[0],
            base_grid[0] * np.exp(2j),
            rs.radii.R - 0.25,
        )
    )
    injectivity = flow.injectivity_certificate(em, n_pairs=n_pairs)
    results = {
        "radii": {"r": rs.radii.r, "R": rs.radii.R},
        "stolz": {"epsilon": rs.stolz_epsilon, "c": rs.stolz_c},
        "n_samples": n_samples,
        "n_rays": n_rays,
        "agreement_residual": agreement,
        "holomorphy_residual": holo,
        "basepoint_deviation": float(basepoint_dev),
        "injectivity": injectivity.to_dict(),
        "lemma": lemma.to_dict(),
    }
    certificates = {
        "lemma_properties": lemma.passed,
        "agreement": agreement < agreement_tol,
        "holomorphy": holo < holomorphy_tol,
        "basepoint_identity": basepoint_dev < 1e-6,
        "injectivity": injectivity.passed,
    }
    rows = [("certificate", "value", "passed")]
    rows.append(("agreement_residual", agreement, certificates["agreement"]))
    rows.append(("holomorphy_residual", holo, certificates["holomorphy"]))
    rows.append(("basepoint_deviation", basepoint_dev, certificates["basepoint_identity"]))
    rows.append(("injectivity_min_separation", injectivity.min_separation, injectivity.passed))
    rho_grid = np.linspace(rs.radii.r / 2, rs.radii.R, 96)
    curves = []
    for theta in rs.ray_angles[:: max(1, rs.n_rays // 24)]:
        pts = rs.curve_point(0, float(theta), rho_grid)
        curves.append([_pair(p) for p in pts])
    marks = [_pair(v) for v in traces.evaluate(np.array([1.0 + 0j]))[:, 0]]
    grid_images = []
    lam_probe = 0.5 + 0j
    for theta in rs.ray_angles[:: max(1, rs.n_rays // 8)]:
        for rho in np.linspace(1.2 * rs.radii.r, 0.97 * rs.radii.R, 6):
            z = rho * np.exp(1j * float(theta))
            grid_images.append(_pair(em.evaluate(lam_probe, z)))
    figure_data = {
        "curves": curves,
        "marks": marks,
        "grid_images": grid_images,
        "radii": {"r": rs.radii.r, "R": rs.radii.R},
    }
    if payload.get("dump_structure"):
        results["structure"] = rs.to_json_dict()
    return results, certificates, rows, figure_data


def _load_boundary_csv(path: Path) -> barycentric.CircleHomeo:
    try:
        text = path.read_text(encoding="ascii").strip().splitlines()
    except OSError as exc:
        raise ScenarioError("boundary_map", f"cannot read {path}: {exc}")
    rows = [line.split(",") for line in text if line.strip()]
    if rows and rows[0][0].strip().lower() == "k":
        rows = rows[1:]
    try:
        theta = np.array([float(r[1]) for r in rows], dtype=float)
    except (IndexError, ValueError):
        raise ScenarioError("boundary_map", "expected CSV rows k,theta_k")
    try:
        return barycentric.CircleHomeo(theta)
    except ValueError as exc:
        raise ScenarioError("boundary_map", str(exc))


def _run_barycenter(payload: dict, base_dir: Path):
    if "boundary_map" in payload:
        homeo = _load_boundary_csv(base_dir / str(payload["boundary_map"]))
    elif "theta" in payload:
        try:
            homeo = barycentric.CircleHomeo(np.asarray(payload["theta"], dtype=float))
        except ValueError as exc:
            raise ScenarioError("theta", str(exc))
    else:
        raise ScenarioError("boundary_map", "need boundary_map (CSV path) or theta")
    points = [_as_complex(p, "points") for p in _need(payload, "points", list)]
    values = {}
    rows = [("point", "value")]
    inside = True
    for z in points:
        if abs(z) >= 1:
            raise ScenarioError("points", f"point {z} is not interior")
        w = barycentric.barycentric_extend(homeo, z)
        values[f"{z.real!r},{z.imag!r}"] = _pair(w)
        rows.append((f"{z.real!r}+{z.imag!r}j", f"{w.real!r}+{w.imag!r}j"))
        inside = inside and abs(w) < 1
    results = {"extension_values": values}
    step = payload.get("beltrami_step")
    if step:
        beltrami = {}
        for z in points:
            try:
                mu = barycentric.beltrami_of_extension(homeo, z, float(step))
            except ValueError as exc:
                raise ScenarioError("beltrami_step", str(exc))
            beltrami[f"{z.real!r},{z.imag!r}"] = _pair(mu)
        results["beltrami"] = beltrami
    certificates = {"values_inside_disk": inside}
    boundary = [_pair(v) for v in homeo.boundary_values()[:: max(1, homeo.n // 256)]]
    grid = [
        rho * np.exp(2j * np.pi * k / 16)
        for rho in (0.3, 0.6, 0.85)
        for k in range(16)
    ]
    images = [_pair(barycentric.barycentric_extend(homeo, z)) for z in grid]
    figure_data = {"boundary": boundary, "grid_images": images}
    return results, certificates, rows, figure_data


# ---------------------------------------------------------------------------
# dispatch and reporting
# ---------------------------------------------------------------------------

def _dispatch(kind: str, payload: dict, base_dir: Path):
    if kind == "words":
        return _run_words(payload)
    if kind == "monodromy":
        return _run_monodromy(payload)
    if kind == "counterexample":
        return _run_counterexample(payload)
    if kind == "geometry":
        return _run_geometry(payload)
    if kind == "extend":
        return _run_extend(payload)
    if kind == "barycenter":
        return _run_barycenter(payload, base_dir)
    raise ScenarioError("kind", f"unknown scenario kind {kind!r}")


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, complex):
        return _pair(obj)
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _write_report(report: dict, path: Path) -> None:
    path.write_text(
        json.dumps(report, sort_keys=True, indent=2, default=_json_default) + "\n",
        encoding="ascii",
    )


def _write_csv(rows, path: Path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for row in rows:
            fh.write(",".join(str(c) for c in row) + "\n")


def run_scenario(
    scenario_path,
    out_dir=None,
    overrides: dict | None = None,
    kind: str | None = None,
    svg: bool = False,
    png: bool = False,
) -> int:
    """Execute one scenario file and write its report set; returns exit code."""
    scenario_path = Path(scenario_path)
    out = Path(out_dir) if out_dir else scenario_path.parent
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    try:
        try:
            payload = json.loads(scenario_path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ScenarioError("scenario", f"cannot read {scenario_path}: {exc}")
        except json.JSONDecodeError as exc:
            raise ScenarioError("scenario", f"invalid JSON: {exc}")
        if isinstance(payload, list) and kind == "extend":
            payload = {"traces": payload}
        if not isinstance(payload, dict):
            raise ScenarioError("scenario", "top-level JSON object expected")
        payload = dict(payload)
        payload.update(overrides or {})
        scenario_kind = kind or payload.get("kind")
        if scenario_kind not in KINDS:
            raise ScenarioError("kind", f"expected one of {KINDS}, got {scenario_kind!r}")
        results, certificates, rows, figure_data = _dispatch(
            scenario_kind, payload, scenario_path.parent
        )
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    report = {
        "scenario": scenario_kind,
        "inputs": payload,
        "results": results,
        "certificates": certificates,
        "runtime_ms": (time.perf_counter() - started) * 1000.0,
    }
    if figure_data is not None:
        report["figure_data"] = figure_data

    stem = scenario_path.stem
    _write_report(report, out / f"{stem}_report.json")
    _write_csv(rows, out / f"{stem}_results.csv")
    if svg or png:
        if scenario_kind not in RENDERABLE_KINDS:
            print(f"error: figure: no renderer for kind {scenario_kind!r}", file=sys.stderr)
            return 1
        if svg:
            render_figure(report, scenario_kind, out / f"{stem}_figure.svg")
        if png:
            render_figure(report, scenario_kind, out / f"{stem}_figure.png")

    failed = [name for name, ok in certificates.items() if not ok]
    if failed:
        print(f"certificate failures: {', '.join(sorted(failed))}", file=sys.stderr)
        return 2
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holomotion",
        description="Scenario runner for motion monodromy, extension flows, "
        "and barycentric extensions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--svg", action="store_true", help="render the SVG figure")
        p.add_argument("--png", action="store_true", help="render the PNG figure")
        p.add_argument("--samples", type=int, default=None, help="boundary samples N")
        p.add_argument("--rays", type=int, default=None, help="ray count M")
        p.add_argument("--tol", type=float, default=None, help="cross-track tolerance")

    common(sub.add_parser("run", help="dispatch on the file's kind field"))
    for kind in KINDS:
        sub_parser = sub.add_parser(kind, help=f"run a {kind} scenario")
        common(sub_parser)
        if kind == "geometry":
            sub_parser.add_argument("--ellE", type=float, default=None, help="systole input")
            sub_parser.add_argument("--R", type=float, default=None, help="outer annulus radius")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    overrides: dict = {}
    if args.samples is not None:
        overrides["samples"] = args.samples
    if args.rays is not None:
        overrides["rays"] = args.rays
    if args.tol is not None:
        overrides["tol"] = args.tol
    if getattr(args, "ellE", None) is not None:
        overrides["ellE"] = args.ellE
    if getattr(args, "R", None) is not None:
        overrides["R"] = args.R
    kind = None if args.command == "run" else args.command
    return run_scenario(
        args.scenario,
        out_dir=args.out,
        overrides=overrides,
        kind=kind,
        svg=args.svg,
        png=args.png,
    )


if __name__ == "__main__":
    sys.exit(main())
