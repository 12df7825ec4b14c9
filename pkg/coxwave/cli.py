"""The ``coxwave`` command line.

Subcommands: ``construct`` builds a scene, ``verify`` checks one,
``sample`` runs a reconstruction experiment and ``report`` summarises
report files. Exit codes are 0 when everything passed, 1 when a check
failed and 2 when the input could not be used.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
import traceback
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import defaults
from .config import SceneConfig, load_config
from .documents import (
    ExperimentReport,
    PlanDocument,
    SceneDocument,
    SignalDocument,
    VerificationReport,
    decode_rationals,
    read_document,
    write_document,
)
from .exceptions import CoxwaveError, InvalidConfig, InvalidDocument
from .lattice import DilationScheme
from .region import Frame, Region
from .sampling import SamplingPlan, run_sampling_experiment
from .scenes import Scene, build_scene, resolve_group, verify_scene
from .svg import (
    render_chamber_fan,
    render_regions,
    write_box_list,
    write_svg,
)

__all__ = ("build_parser", "main")

_LOG = logging.getLogger(__name__)
_LOG.setLevel(logging.INFO)


def _add_scene_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="scene config JSON file")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--k-max", dest="k_max", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coxwave",
        description="Wavelet sets for Coxeter group dilations.",
    )
    parser.add_argument(
        "--log-level", default="INFO", help="root log level (default INFO)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a scene")
    _add_scene_flags(p)
    p.add_argument("--method", choices=("mra", "section5", "example31"))
    p.add_argument("--family")
    p.add_argument("--scheme", help="diagonal scales, e.g. diag:2,2")
    p.add_argument("--sides", help="scaling box sides, e.g. 1,1")
    p.add_argument("--lattice", help="lattice steps, e.g. 1,1")
    p.add_argument("--depth", type=int)
    p.add_argument("--alpha-index", dest="alpha_star_index", type=int)
    p.add_argument("--a")
    p.add_argument("--m", type=int)
    p.add_argument("--step", help="staircase resolution, e.g. 1/64")
    p.add_argument("--out", help="scene JSON path")
    p.add_argument("--svg", help="SVG path for planar scenes")
    p.add_argument("--fan", help="SVG path for the chamber fan")

    p = sub.add_parser("verify", help="verify a scene")
    _add_scene_flags(p)
    p.add_argument("scene", help="scene JSON written by construct")
    p.add_argument("--out", help="report JSON path")
    p.add_argument(
        "--timing", action="store_true", help="record wall-clock time"
    )

    p = sub.add_parser("sample", help="run a sampling experiment")
    p.add_argument("--plan", required=True)
    p.add_argument("--signal", required=True)
    p.add_argument("--radii", default="8,16,32,64")
    p.add_argument("--seed", type=int, default=defaults.DEFAULT_SEED)
    p.add_argument("--out", help="report JSON path")

    p = sub.add_parser("report", help="summarise report files")
    p.add_argument("reports", nargs="+")
    return parser


def _scene_config(args: argparse.Namespace) -> SceneConfig:
    base = load_config(args.config) if args.config else SceneConfig()
    flags = {
        k: getattr(args, k, None)
        for k in (
            "method",
            "family",
            "scheme",
            "sides",
            "lattice",
            "depth",
            "alpha_star_index",
            "a",
            "m",
            "step",
            "seed",
            "samples",
            "k_max",
            "out",
            "svg",
        )
    }
    return base.replace(**flags)


def _write_figures(
    scene: Scene, config: SceneConfig, out: Path, fan: str | None
) -> None:
    doc = scene.document
    names = list(doc.wavelet_sets)
    if doc.method != "mra":
        names.append("F")
    regions = [scene.regions[n] for n in names]
    dim = regions[0].dim
    if dim == 2:
        svg = Path(config.svg) if config.svg else out.with_suffix(".svg")
        write_svg(
            render_regions(regions, names, title=f"{doc.method} {doc.group}"),
            svg,
        )
    else:
        write_box_list(regions, out.with_suffix(".boxes.json"), names)
    if fan is not None:
        group = resolve_group(doc.group)
        if group.dim != 2:
            raise InvalidDocument("a chamber fan needs a planar group")
        write_svg(render_chamber_fan(group), fan)


def cmd_construct(args: argparse.Namespace) -> int:
    config = _scene_config(args)
    scene = build_scene(config)
    out = Path(config.out)
    write_document(scene.document, out)
    _write_figures(scene, config, out, args.fan)
    print(
        f"wrote {out} with {len(scene.document.wavelet_sets)} wavelet "
        "set(s)"
    )
    return defaults.EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    config = _scene_config(args)
    doc = read_document(args.scene)
    if not isinstance(doc, SceneDocument):
        raise InvalidDocument(f"{args.scene} is not a scene")
    start = time.perf_counter()
    report = verify_scene(doc, config, Path(args.scene).name)
    if args.timing:
        report.wall_clock = time.perf_counter() - start
    out = Path(args.out) if args.out else Path(args.scene).with_suffix(
        ".report.json"
    )
    write_document(report, out)
    print(f"{'PASS' if report.passed else 'FAIL'} {out}")
    return defaults.EXIT_OK if report.passed else defaults.EXIT_CHECK_FAILED


def _plan(doc: PlanDocument) -> SamplingPlan:
    try:
        frame = Frame(np.array(doc.frame, dtype=float))
    except (TypeError, ValueError) as e:
        raise InvalidDocument(f"bad plan frame: {e}") from e
    p = Region.box(frame, decode_rationals(doc.lo), decode_rationals(doc.hi))
    scheme = None
    if doc.scales is not None:
        scheme = DilationScheme.diagonal(frame, decode_rationals(doc.scales))
    if doc.level != 0 and scheme is None:
        raise InvalidDocument("a dilated plan needs scales")
    return SamplingPlan.for_box(p, doc.radius, doc.level, scheme)


def _radii(text: str) -> list[int]:
    try:
        radii = [int(r) for r in text.split(",")]
    except ValueError as e:
        raise InvalidConfig(f"bad radii {text!r}") from e
    if not radii or any(r < 0 for r in radii):
        raise InvalidConfig(f"bad radii {text!r}")
    return radii


def cmd_sample(args: argparse.Namespace) -> int:
    plan_doc = read_document(args.plan)
    signal_doc = read_document(args.signal)
    if not isinstance(plan_doc, PlanDocument):
        raise InvalidDocument(f"{args.plan} is not a plan")
    if not isinstance(signal_doc, SignalDocument):
        raise InvalidDocument(f"{args.signal} is not a signal")
    plan = _plan(plan_doc)
    radii = _radii(args.radii)
    rows = run_sampling_experiment(
        plan, signal_doc.signal(), radii, seed=args.seed
    )
    report = ExperimentReport.of(rows, plan.level, args.seed)
    out = Path(args.out) if args.out else Path(args.signal).with_suffix(
        ".experiment.json"
    )
    write_document(report, out)
    for r in rows:
        print(
            f"R={r.radius:<4d} l2_rel={r.l2_rel_error:.3e} "
            f"sup={r.sup_error:.3e} interp={r.interp_max_abs_err:.3e}"
        )
    return defaults.EXIT_OK


def _report_lines(path: str) -> tuple[list[str], bool]:
    doc = read_document(path)
    if isinstance(doc, VerificationReport):
        lines = [
            f"  {name:<28} {check['measured']!s:<24.24} "
            f"{check['tolerance']!s:<12.12} "
            f"{'pass' if check['passed'] else 'FAIL'}"
            for name, check in doc.checks.items()
        ]
        return lines, doc.passed
    if isinstance(doc, ExperimentReport):
        lines = [
            f"  R={row['R']:<4} l2_rel={row['l2_rel_error']:.3e} "
            f"interp={row['interp_max_abs_err']:.3e}"
            for row in doc.rows
        ]
        return lines, doc.passed
    raise InvalidDocument(f"{path} is not a report")


def cmd_report(args: argparse.Namespace) -> int:
    all_passed = True
    for path in args.reports:
        lines, passed = _report_lines(path)
        all_passed &= passed
        print(f"{path}: {'pass' if passed else 'FAIL'}")
        print("\n".join(lines))
    return defaults.EXIT_OK if all_passed else defaults.EXIT_CHECK_FAILED


_COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "sample": cmd_sample,
    "report": cmd_report,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return its exit code."""

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return defaults.EXIT_INVALID if e.code else defaults.EXIT_OK
    try:
        logging.getLogger().setLevel(args.log_level.upper())
        return _COMMANDS[args.command](args)
    except CoxwaveError as e:
        _LOG.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return defaults.EXIT_INVALID
    except Exception:
        _LOG.error("Unhandled exception:")
        _LOG.error(traceback.format_exc())
        return defaults.EXIT_INVALID

