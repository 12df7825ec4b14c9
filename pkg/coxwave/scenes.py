"""Build scene documents from configs and verify them.

A scene stores every set in one frame, together with the group, the
diagonal dilation and the lattice steps, so it can be verified without
rerunning the construction.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .config import SceneConfig
from .documents import (
    DATA,
    SceneDocument,
    VerificationReport,
    decode_rationals,
    encode_cells,
    encode_rationals,
    multiplicity_report_data,
    tile_report_data,
)
from .exceptions import InvalidDocument, UnsupportedParameter
from .groups import MatrixGroup, reflection_group, rotation_group
from .lattice import (
    DilationScheme,
    Lattice,
    digit_representatives,
    gram_max_offdiag,
    is_translation_tile,
)
from .mra import (
    MRAConstruction,
    ScalingBoxSpec,
    check_mra,
    construct_mra,
    standard_scaling_box,
)
from .multiplicity import Annulus, MultiplicityReport, dilation_multiplicity
from .region import Frame, Region
from .roots import build_root_system, dual_basis, simple_system
from .wavelet_sets import (
    construct_example31,
    construct_section5,
    dilation_tile_report,
    frame_cone,
    section5_identities,
    verify_wavelet_set,
    wedge_region,
)
from .workers import BlockPool

__all__ = ("Scene", "resolve_group", "build_scene", "verify_scene")

_LOG = logging.getLogger(__name__)
_LOG.setLevel(logging.INFO)

_ROTATION = "rotation:"


@dataclass(frozen=True)
class Scene:
    """A scene document and the regions it was built from."""

    document: SceneDocument
    regions: dict[str, Region]

    @property
    def wavelet_regions(self) -> list[Region]:
        return [self.regions[n] for n in self.document.wavelet_sets]


def resolve_group(tag: str) -> MatrixGroup:
    """The group named by a scene: a reflection group family or
    ``"rotation:m"``."""

    if tag.startswith(_ROTATION):
        try:
            m = int(tag[len(_ROTATION) :])
        except ValueError as e:
            raise InvalidDocument(f"bad rotation group {tag!r}") from e
        return rotation_group(m)
    return reflection_group(simple_system(build_root_system(tag)))


def _document(
    config: SceneConfig,
    group: str,
    frame: Frame,
    scales: tuple[Fraction, ...],
    steps: tuple[Fraction, ...],
    regions: dict[str, Region],
    wavelet_sets: list[str],
    params: DATA,
) -> Scene:
    doc = SceneDocument(
        method=config.method,
        group=group,
        frame=frame.basis.tolist(),
        scales=encode_rationals(scales),
        lattice_steps=encode_rationals(steps),
        wavelet_sets=wavelet_sets,
        sets={name: encode_cells(r.cells) for name, r in regions.items()},
        params=params,
    )
    return Scene(doc, regions)


def _build_mra(config: SceneConfig) -> Scene:
    rs = build_root_system(config.family)
    dual = dual_basis(simple_system(rs))
    sides = ScalingBoxSpec(config.side_lengths or (Fraction(1),) * rs.dim)
    mra = construct_mra(dual, sides, config.scales, config.lattice_steps)
    regions = {"K": mra.k}
    regions.update({f"K_{i}": k for i, k in enumerate(mra.splits)})
    names = [f"omega_{i}" for i in range(1, len(mra.wavelet_sets) + 1)]
    regions.update(zip(names, mra.wavelet_sets))
    params = {
        "q": int(mra.scheme.q),
        "digits": [encode_rationals(v) for v in mra.digits.digits],
    }
    return _document(
        config,
        rs.family_tag,
        mra.k.frame,
        mra.scheme.scales,
        mra.lattice.steps,
        regions,
        names,
        params,
    )


def _build_section5(config: SceneConfig) -> Scene:
    rs = build_root_system(config.family)
    dual = dual_basis(simple_system(rs))
    sides = ScalingBoxSpec(config.side_lengths or (Fraction(1),) * rs.dim)
    p = standard_scaling_box(dual, sides)
    scheme = DilationScheme.diagonal(p.frame, config.scales)
    state = construct_section5(
        p, scheme, config.alpha_star_index, config.depth
    )
    identities = section5_identities(state)
    params = {
        "depth": state.depth,
        "residual_volume": state.residual_volume,
        "translation": encode_rationals(state.translation),
        "pieces_disjoint": state.pieces_disjoint(),
        "identities": {
            "p_missing": identities.p_missing,
            "p_excess": identities.p_excess,
            "f_missing": identities.f_missing,
            "f_excess": identities.f_excess,
        },
        "notes": list(state.notes),
    }
    regions = {"P": p, "F": state.f_region, "W": state.union}
    return _document(
        config,
        rs.family_tag,
        p.frame,
        scheme.scales,
        config.lattice_steps or sides.s,
        regions,
        ["W"],
        params,
    )


def _build_example31(config: SceneConfig) -> Scene:
    state = construct_example31(
        config.a, config.m, config.depth, config.step
    )
    lo, hi = state.base.bounds()
    steps = tuple(b - a for a, b in zip(lo, hi))
    params = {
        "a": config.a,
        "m": config.m,
        "depth": state.depth,
        "residual_volume": state.residual_volume,
        "pieces_disjoint": state.pieces_disjoint(),
        "notes": list(state.notes),
    }
    regions = {"E": state.base, "F": state.f_region, "W": state.union}
    return _document(
        config,
        f"{_ROTATION}{config.m}",
        state.frame,
        state.scheme.scales,
        steps,
        regions,
        ["W"],
        params,
    )


def build_scene(config: SceneConfig) -> Scene:
    """Run the construction named by ``config.method``."""

    builders = {
        "mra": _build_mra,
        "section5": _build_section5,
        "example31": _build_example31,
    }
    scene = builders[config.method](config)
    _LOG.info(
        f"Built a {config.method} scene with "
        f"{len(scene.document.wavelet_sets)} wavelet set(s)."
    )
    return scene


def _check(measured: Any, tolerance: Any, passed: bool, **extra: Any) -> DATA:
    return {
        "measured": measured,
        "tolerance": tolerance,
        "passed": bool(passed),
        **extra,
    }


def _mra_checks(
    doc: SceneDocument,
    config: SceneConfig,
    regions: dict[str, Region],
    omegas: list[Region],
    group: MatrixGroup,
    scheme: DilationScheme,
    lattice: Lattice,
    pool: BlockPool,
) -> dict[str, DATA]:
    checks: dict[str, DATA] = {}
    tol = config.tolerances
    mult = dilation_multiplicity(
        omegas,
        group,
        scheme,
        Annulus(omegas[0].dim, 0.5, 1.5),
        config.k_max,
        config.samples,
        config.seed,
        pool=pool,
    )
    checks["multiplicity"] = _multiplicity_check(mult, config)
    for name, omega in zip(doc.wavelet_sets, omegas):
        tile = is_translation_tile(omega, lattice)
        checks[f"translation:{name}"] = _check(
            tile.defect,
            0.0,
            tile.is_tile,
            **tile_report_data(tile),
        )
        gram = gram_max_offdiag(omega, lattice.dual(), config.gram_radius)
        checks[f"gram:{name}"] = _check(
            gram, tol.mra_gram, gram <= tol.mra_gram
        )

    if "K" in regions:
        q = int(scheme.q)
        splits = tuple(regions.get(f"K_{i}") for i in range(q))
        if any(s is None for s in splits):
            raise InvalidDocument("an MRA scene needs K_0 .. K_{q-1}")
        mra = MRAConstruction(
            regions["K"],
            scheme,
            lattice,
            digit_representatives(scheme, lattice),
            tuple(s for s in splits if s is not None),
            tuple(omegas),
        )
        exact = check_mra(mra, config.gram_radius)
        for key in ("partition", "congruence", "refinement"):
            ok = getattr(exact, key)
            checks[key] = _check(ok, True, ok)
    return checks


def _multiplicity_check(
    report: MultiplicityReport, config: SceneConfig
) -> DATA:
    one = report.fraction(1)
    limit = config.tolerances.multiplicity_one
    return _check(one, limit, one >= limit, **multiplicity_report_data(report))


def _recursion_checks(
    doc: SceneDocument,
    config: SceneConfig,
    regions: dict[str, Region],
    omega: Region,
    group: MatrixGroup,
    scheme: DilationScheme,
    lattice: Lattice,
    pool: BlockPool,
) -> dict[str, DATA]:
    tol = config.tolerances
    verdict = verify_wavelet_set(
        omega,
        group,
        scheme,
        lattice,
        Annulus(omega.dim, 0.5, 1.5),
        config.samples,
        config.seed,
        config.k_max,
        config.gram_radius,
        pool,
    )
    tile = verdict.translation_report
    checks = {
        "translation:W": _check(
            tile.defect,
            tol.translation_defect,
            tile.defect <= tol.translation_defect,
            **tile_report_data(tile),
        ),
        "gram:W": _check(
            verdict.gram_bound, tol.gram, verdict.gram_bound <= tol.gram
        ),
        "multiplicity": _multiplicity_check(
            verdict.dilation_histogram, config
        ),
    }
    if "F" in regions:
        if doc.method == "example31":
            cone = wedge_region(int(doc.params.get("m", 4))).cone
        else:
            cone = frame_cone(omega.frame)
        report = dilation_tile_report(
            regions["F"],
            scheme,
            cone,
            n_samples=config.samples,
            seed=config.seed,
            k_max=config.k_max,
            pool=pool,
        )
        checks["dilation_tile:F"] = _check(
            report.coverage.fraction(1),
            tol.multiplicity_one,
            report.disjoint,
            required=False,
            disjoint=report.disjoint,
            **multiplicity_report_data(report.coverage),
        )
    return checks


def verify_scene(
    doc: SceneDocument,
    config: SceneConfig,
    scene_name: str = "scene",
    pool: BlockPool | None = None,
) -> VerificationReport:
    """Run the translation, multiplicity and Gram checks on a scene.

    Failed checks are recorded in the report, never raised.

    Raises
    ------
    InvalidDocument
        The scene cannot be read back into regions and a group.
    """

    regions = {name: doc.region(name) for name in doc.sets}
    try:
        omegas = [regions[n] for n in doc.wavelet_sets]
    except KeyError as e:
        raise InvalidDocument(f"scene has no set named {e}") from e
    if not omegas:
        raise InvalidDocument("scene lists no wavelet sets")
    frame = omegas[0].frame
    try:
        scheme = DilationScheme.diagonal(frame, decode_rationals(doc.scales))
        lattice = Lattice.rectangular(
            frame, decode_rationals(doc.lattice_steps)
        )
    except ValueError as e:
        raise InvalidDocument(str(e)) from e
    group = resolve_group(doc.group)
    pool = pool or BlockPool()

    if doc.method == "mra":
        checks = _mra_checks(
            doc, config, regions, omegas, group, scheme, lattice, pool
        )
    elif doc.method in ("section5", "example31"):
        checks = _recursion_checks(
            doc, config, regions, omegas[0], group, scheme, lattice, pool
        )
    else:
        raise UnsupportedParameter("method", doc.method)

    passed = all(
        c["passed"] for c in checks.values() if c.get("required", True)
    )
    _LOG.info(
        f"Verified {scene_name}: {'pass' if passed else 'FAIL'} "
        f"({sum(c['passed'] for c in checks.values())}/{len(checks)} "
        "checks passed)."
    )
    return VerificationReport(
        scene=scene_name,
        seed=config.seed,
        n_samples=config.samples,
        checks=dict(sorted(checks.items())),
        passed=passed,
    )

