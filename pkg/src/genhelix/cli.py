"""Command-line interface: generate curves, analyze them, verify identities.

Exit codes are a stable scripting contract:

    0   helix / check passed
    1   not a helix / check failed
    2   bad parameters / check not applicable
    3   I/O or file-format failure
    4   degenerate curve

``analyze`` writes the classification report as JSON (17 significant digits);
``verify`` prints the measured deviation against its threshold.  The default
tolerance is 1e-3, overridable by the HELIX_TOL environment variable and the
--tol flag (flag wins).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import curves as _curves
from .errors import BadParams, EvenDimension, GeometryError, NotAHelix
from .frenet import frenet_apparatus, frenet_residual
from .harmonic import (
    closed_form_constant_ratios,
    criterion_residual,
    curvature_ratios,
    expanded_residual_odd,
    harmonic_curvatures,
)
from .helix import VERDICT_DEGENERATE, VERDICT_HELIX, classify, verify_theorem

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BAD_PARAMS = 2
EXIT_IO = 3
EXIT_DEGENERATE = 4

_KIND_ALIASES = {
    "circular-helix": ("circular_helix", {}),
    "w-curve-5": ("w_curve_5", {}),
    "clifford-s3": ("clifford_s3", {}),
    "generic-3d": ("generic_3d", {}),
    "perturbed-circular-helix": ("perturbed", {"base": "circular_helix"}),
    "perturbed-clifford-s3": ("perturbed", {"base": "clifford_s3"}),
    "perturbed-w-curve-5": ("perturbed", {"base": "w_curve_5"}),
}

_THEOREM_ALIASES = {
    "T8≡C9": "T8C9",
    "T8=C9": "T8C9",
    "T8C9": "T8C9",
    "T3": "T3",
    "T6": "T6",
    "T7": "T7",
    "T10": "T10",
}


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _json_value(x):
    if x is None:
        return "null"
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        inner = ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in x.items())
        return "{" + inner + "}"
    if isinstance(x, float) and not np.isfinite(x):
        return "null"
    return _fmt(x)


def _write_report(report_dict: dict, path: str | None) -> None:
    lines = ",\n".join(f'  {json.dumps(k)}: {_json_value(v)}' for k, v in report_dict.items())
    text = "{\n" + lines + "\n}\n"
    if path:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_params(text: str | None) -> dict:
    params = {}
    if not text:
        return params
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise BadParams(f"parameter {item!r} is not of the form key=value")
        key, value = item.split("=", 1)
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise BadParams(f"parameter {key.strip()!r} has non-numeric value {value!r}")
    return params


def _default_tol(args_tol: float | None) -> float:
    if args_tol is not None:
        if args_tol <= 0:
            raise BadParams(f"tol must be positive, got {args_tol}")
        return args_tol
    env = os.environ.get("HELIX_TOL")
    if env:
        try:
            tol = float(env)
        except ValueError:
            raise BadParams(f"HELIX_TOL is not a number: {env!r}")
        if tol <= 0:
            raise BadParams(f"HELIX_TOL must be positive, got {tol}")
        return tol
    return 1e-3


def _load_unit_curve(path: str, min_nodes: int = 64):
    """Curve file -> (space, UnitSpeedCurve); file problems raise ValueError."""
    spec = _curves.load_curve(path)
    direct = _curves.unit_curve_from_file_spec(spec)
    if direct is not None:
        return spec.space, direct
    node_count = max(len(spec.points), min_nodes)
    return spec.space, _curves.resample_by_arclength(spec, node_count)


def run_generate(kind: str, params: dict, node_count: int, out_path: str) -> int:
    if kind not in _KIND_ALIASES:
        raise BadParams(
            f"unknown kind {kind!r}; choose from {sorted(_KIND_ALIASES)}"
        )
    base_kind, preset = _KIND_ALIASES[kind]
    spec = _curves.generate(base_kind, **preset, **params)
    curve = _curves.resample_by_arclength(spec, node_count)
    _curves.save_unit_curve(out_path, spec.space, curve)
    return EXIT_OK


def run_analyze(in_path: str, tol: float, report_path: str | None, dump_profiles: bool) -> int:
    space, curve = _load_unit_curve(in_path)
    report = classify(space, curve, tol=tol)
    _write_report(report.to_json_dict(), report_path)
    if dump_profiles and report.verdict != VERDICT_DEGENERATE:
        base = report_path if report_path else in_path
        _dump_profiles(space, curve, base)
    if report.verdict == VERDICT_HELIX:
        return EXIT_OK
    if report.verdict == VERDICT_DEGENERATE:
        return EXIT_DEGENERATE
    return EXIT_FAIL


def _dump_profiles(space, curve, base_path: str) -> None:
    app = frenet_apparatus(space, curve)
    profile = harmonic_curvatures(app)
    residual = criterion_residual(app, profile)
    s_vals = curve.grid.nodes()

    frames_rows = ",\n    ".join(
        "[" + ", ".join("[" + ", ".join(_fmt(x) for x in vec) + "]" for vec in node) + "]"
        for node in app.frames
    )
    curv_rows = ",\n    ".join(
        "[" + ", ".join(_fmt(x) for x in row) + "]" for row in app.curvatures
    )
    with open(base_path + ".apparatus.json", "w", encoding="ascii") as fh:
        fh.write(
            "{\n"
            f'  "s": [{", ".join(_fmt(v) for v in s_vals)}],\n'
            f'  "frames": [\n    {frames_rows}\n  ],\n'
            f'  "curvatures": [\n    {curv_rows}\n  ]\n'
            "}\n"
        )
    h_rows = ",\n    ".join(
        "[" + ", ".join(_fmt(x) for x in row) + "]" for row in profile.values
    )
    with open(base_path + ".profile.json", "w", encoding="ascii") as fh:
        fh.write(
            "{\n"
            f'  "s": [{", ".join(_fmt(v) for v in s_vals)}],\n'
            f'  "H": [\n    {h_rows}\n  ],\n'
            f'  "criterion_residual": [{", ".join(_fmt(v) for v in residual.residual)}]\n'
            "}\n"
        )


def run_verify(in_path: str, theorem: str, tol: float) -> int:
    key = _THEOREM_ALIASES.get(theorem.strip())
    if key is None:
        raise BadParams(
            f"unknown theorem selector {theorem!r}; choose from T3, T6, T7, T8≡C9, T10"
        )
    space, curve = _load_unit_curve(in_path)

    if key in ("T3", "T6", "T7"):
        try:
            deviation, details = verify_theorem(key, space, curve, tol=tol)
        except NotAHelix as exc:
            print(f"theorem={theorem} inapplicable: {exc}")
            return EXIT_BAD_PARAMS
        verdict = "pass" if deviation < tol else "fail"
        print(f"theorem={theorem} deviation={deviation:.6e} threshold={tol:.6e} {verdict}")
        return EXIT_OK if verdict == "pass" else EXIT_FAIL

    app = frenet_apparatus(space, curve)
    profile = harmonic_curvatures(app)

    if key == "T8C9":
        if space.dim % 2 == 0 or space.dim < 5:
            print(
                f"theorem={theorem} inapplicable: expansion needs odd intrinsic "
                f"dimension >= 5, curve has {space.dim}"
            )
            return EXIT_BAD_PARAMS
        base = criterion_residual(app, profile)
        expanded = expanded_residual_odd(app, profile)
        keep = base._valid() & expanded._valid()
        gap = np.max(np.abs(base.residual[keep] - expanded.residual[keep]))
        deviation = float(gap) / base.normalization
        verdict = "pass" if deviation < tol else "fail"
        print(f"theorem={theorem} deviation={deviation:.6e} threshold={tol:.6e} {verdict}")
        return EXIT_OK if verdict == "pass" else EXIT_FAIL

    # T10: recursion against the constant-ratio closed forms.
    interior = app.interior()
    ratios = curvature_ratios(app)[interior]
    means = ratios.mean(axis=0)
    ratio_spread = float(np.max(np.abs(ratios - means) / np.abs(means)))
    if ratio_spread > tol:
        print(
            f"theorem={theorem} inapplicable: curvature ratios are not constant "
            f"(relative spread {ratio_spread:.3e} > {tol:.3e})"
        )
        return EXIT_BAD_PARAMS
    closed = closed_form_constant_ratios(means)
    deviation = 0.0
    hv = profile.values[interior]
    for i, (h_even, h_odd) in enumerate(closed):
        even_idx = 2 * i  # pair i is (H_{2i}, H_{2i+1}); H_0 itself is a convention
        odd_idx = 2 * i + 1
        if odd_idx <= profile.order:
            dev = np.max(np.abs(hv[:, odd_idx - 1] - h_odd)) / (1.0 + abs(h_odd))
            deviation = max(deviation, float(dev))
        if 1 <= even_idx <= profile.order:
            dev = np.max(np.abs(hv[:, even_idx - 1] - 0.0)) / 1.0
            deviation = max(deviation, float(dev))
    verdict = "pass" if deviation < tol else "fail"
    print(f"theorem={theorem} deviation={deviation:.6e} threshold={tol:.6e} {verdict}")
    return EXIT_OK if verdict == "pass" else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genhelix",
        description="Generate, analyze, and verify generalized-helix curves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a curve file for a named test family")
    gen.add_argument("--kind", required=True)
    gen.add_argument("--params", default="", help="comma-separated key=value reals")
    gen.add_argument("--nodes", type=int, default=2000)
    gen.add_argument("--out", required=True)

    ana = sub.add_parser("analyze", help="classify a curve file")
    ana.add_argument("--in", dest="in_path", required=True)
    ana.add_argument("--tol", type=float, default=None)
    ana.add_argument("--report", default=None)
    ana.add_argument("--dump-profiles", action="store_true")

    ver = sub.add_parser("verify", help="check a helix identity on a curve file")
    ver.add_argument("--in", dest="in_path", required=True)
    ver.add_argument("--theorem", required=True)
    ver.add_argument("--tol", type=float, default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            if args.nodes < 64:
                raise BadParams(f"--nodes must be >= 64, got {args.nodes}")
            params = _parse_params(args.params)
            try:
                return run_generate(args.kind, params, args.nodes, args.out)
            except OSError as exc:
                print(f"error: cannot write output: {exc}", file=sys.stderr)
                return EXIT_IO
        if args.command == "analyze":
            tol = _default_tol(args.tol)
            try:
                return run_analyze(args.in_path, tol, args.report, args.dump_profiles)
            except (OSError, ValueError, json.JSONDecodeError, GeometryError) as exc:
                print(f"error: {_file_diagnostic(exc)}", file=sys.stderr)
                return EXIT_IO
        if args.command == "verify":
            tol = _default_tol(args.tol)
            try:
                return run_verify(args.in_path, args.theorem, tol)
            except BadParams:
                raise
            except (OSError, ValueError, json.JSONDecodeError, GeometryError) as exc:
                print(f"error: {_file_diagnostic(exc)}", file=sys.stderr)
                return EXIT_IO
    except BadParams as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_PARAMS
    parser.error("unknown command")
    return EXIT_BAD_PARAMS


def _file_diagnostic(exc: Exception) -> str:
    if isinstance(exc, json.JSONDecodeError):
        return f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
    return f"{type(exc).__name__}: {exc}"


if __name__ == "__main__":
    sys.exit(main())
