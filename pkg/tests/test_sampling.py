from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad

from coxwave.exceptions import (
    FrameMismatch,
    IncompletePlan,
    NotASpectrum,
    OutsideBand,
    OutsideDualCone,
    StraddlingBox,
)
from coxwave.groups import ReflectionGroup
from coxwave.lattice import DilationScheme, Lattice
from coxwave.region import (
    Box,
    Frame,
    Region,
    fourier_indicator,
    same_set,
)
from coxwave.roots import DualBasis, SimpleSystem
from coxwave.sampling import (
    BandlimitedSignal,
    SamplingPlan,
    directional_decompose,
    dual_cone,
    eval_tube_extension,
    evaluation_grid,
    grid_energy,
    phi_eval,
    random_box_signal,
    run_sampling_experiment,
    sample_signal,
    signal_eval,
    wsk_reconstruct,
    wsk_reconstruct_dilated,
)

Fixture = tuple[SimpleSystem, DualBasis, ReflectionGroup]

F2 = Frame.identity(2)
UNIT = Region.box(F2, (0, 0), (1, 1))
_QUAD = {"limit": 200, "epsabs": 1e-13, "epsrel": 1e-13}


def _one(box: Box, frame: Frame = F2, c: complex = 1) -> BandlimitedSignal:
    return BandlimitedSignal(frame, ((c, box),))


def _axis(lo: float, hi: float, x: float, y: float = 0.0) -> complex:
    # integral of exp(2 pi i l (x + i y)) over [lo, hi)
    def re(t: float) -> float:
        return float(np.exp(-2 * np.pi * y * t) * np.cos(2 * np.pi * x * t))

    def im(t: float) -> float:
        return float(np.exp(-2 * np.pi * y * t) * np.sin(2 * np.pi * x * t))

    return complex(quad(re, lo, hi, **_QUAD)[0], quad(im, lo, hi, **_QUAD)[0])


def _oracle(
    f: BandlimitedSignal, x: np.ndarray, y: np.ndarray | None = None
) -> complex:
    eta = f.frame.basis.T @ x
    damp = f.frame.basis.T @ y if y is not None else np.zeros_like(eta)
    total = 0j
    for c, box in f.terms:
        term = c * f.frame.det_abs
        for j in range(f.dim):
            term *= _axis(
                float(box.lo[j]), float(box.hi[j]), eta[j], damp[j]
            )
        total += term
    return total


def test_signal_basics() -> None:
    f = _one(UNIT.cells[0], c=2 - 1j)
    assert f(np.zeros(2)) == pytest.approx(2 - 1j)
    assert f.norm_squared() == pytest.approx(5.0)
    assert f.is_supported_in(UNIT)
    assert not f.is_supported_in(Region.box(F2, (0, 0), (1, "1/2")))
    assert f.spectrum().exact_volume == 1


def test_signal_eval_matches_quadrature() -> None:
    rng = np.random.default_rng(12)
    for _ in range(50):
        dim = int(rng.integers(1, 4))
        frame = Frame(np.eye(dim) + 0.3 * rng.normal(size=(dim, dim)))
        box = Region.box(
            frame,
            [Fraction(int(v), 8) for v in rng.integers(-8, 0, size=dim)],
            [Fraction(int(v), 8) for v in rng.integers(1, 9, size=dim)],
        )
        f = random_box_signal(box, 3, rng)
        x = rng.uniform(-2, 2, size=dim)
        bound = sum(abs(c) * float(b.volume) for c, b in f.terms)
        bound *= frame.det_abs
        assert abs(complex(f(x)) - _oracle(f, x)) <= 1e-8 * max(1.0, bound)


def test_signal_eval_is_linear() -> None:
    rng = np.random.default_rng(1)
    p = Region.box(F2, (-1, -1), (1, 1))
    f = random_box_signal(p, 4, rng)
    g = random_box_signal(p, 4, rng)
    x = evaluation_grid(2)
    assert np.allclose(signal_eval(f + g, x), f(x) + g(x), atol=1e-12)
    with pytest.raises(FrameMismatch):
        f + _one(UNIT.cells[0], Frame([[2.0, 0.0], [0.0, 1.0]]))


def test_plancherel_on_a_grid() -> None:
    f = _one(Box.of(("-1/2", "-1/2"), ("1/2", "1/2")))
    energy = grid_energy(f, 40.0, 0.1)
    assert energy == pytest.approx(f.norm_squared(), rel=0.02)


def test_phi() -> None:
    assert phi_eval(UNIT, np.zeros(2)) == pytest.approx(1.0)
    skew = Frame([[1.0, 0.5], [0.0, 1.0]])
    p = Region.box(skew, (0, 0), ("1/2", 2))
    plan = SamplingPlan.for_box(p, radius=2)
    gammas = plan.gammas()
    diffs = gammas[1:] - gammas[0]
    assert np.max(np.abs(phi_eval(p, diffs))) < 1e-12
    assert plan.spectral_defect() < 1e-10


def test_phi_matches_quadrature() -> None:
    skew = Frame([[1.0, 0.5], [0.0, 1.0]])
    p = Region.box(skew, (0, 0), ("1/2", 2))
    x = np.array([0.3, -0.8])
    assert complex(phi_eval(p, x)) == pytest.approx(
        _oracle(_one(p.cells[0], skew), x), abs=1e-8
    )


def test_interpolation_at_samples() -> None:
    skew = Frame([[1.0, 0.5], [0.0, 1.0]])
    p = Region.box(skew, (0, 0), (1, "3/2"))
    plan = SamplingPlan.for_box(p, radius=8)
    for seed in range(5):
        f = random_box_signal(p, 6, np.random.default_rng(seed))
        samples = sample_signal(f, plan)
        near = plan.with_radius(3)
        back = wsk_reconstruct(plan, samples, near.sample_points())
        expected = [samples[tuple(map(int, n))] for n in near.indices()]
        assert np.max(np.abs(back - expected)) <= 1e-10


def test_single_term_interpolates_exactly() -> None:
    f = _one(Box.of(("1/4", 0), ("1/2", "1/2")), c=3j)
    plan = SamplingPlan.for_box(UNIT, radius=4)
    samples = sample_signal(f, plan)
    gamma = plan.gammas()[17]
    value = complex(wsk_reconstruct(plan, samples, -gamma))
    assert value == pytest.approx(complex(f(-gamma)), abs=1e-12)


def test_experiment_error_decreases(i2_4: Fixture) -> None:
    frame = i2_4[1].frame()
    p = Region.box(frame, (0, 0), (1, 1))
    plan = SamplingPlan.for_box(p)
    assert plan.radius == 32
    errors = []
    for seed in range(5):
        f = random_box_signal(p, 8, np.random.default_rng(seed))
        rows = run_sampling_experiment(plan, f, [8, 16, 32, 64], seed=seed)
        assert [r.radius for r in rows] == [8, 16, 32, 64]
        assert all(r.interp_max_abs_err <= 1e-10 for r in rows)
        assert all(r.seed == seed for r in rows)
        errors.append([r.l2_rel_error for r in rows])
    mean = np.mean(errors, axis=0)
    assert all(a > b for a, b in zip(mean, mean[1:]))


def test_zero_signal() -> None:
    plan = SamplingPlan.for_box(UNIT, radius=4)
    zero = BandlimitedSignal(F2)
    samples = sample_signal(zero, plan)
    assert not np.any(wsk_reconstruct(plan, samples, evaluation_grid(2)))
    rows = run_sampling_experiment(plan, zero, [2, 4])
    assert all(r.l2_rel_error == 0.0 for r in rows)
    assert all(r.sup_error == 0.0 for r in rows)


def test_missing_samples() -> None:
    plan = SamplingPlan.for_box(UNIT, radius=2)
    samples = sample_signal(_one(UNIT.cells[0]), plan)
    del samples[(0, 0)]
    with pytest.raises(IncompletePlan):
        wsk_reconstruct(plan, samples, np.zeros(2))


def test_experiment_frame_mismatch() -> None:
    plan = SamplingPlan.for_box(UNIT, radius=2)
    other = _one(UNIT.cells[0], Frame([[2.0, 0.0], [0.0, 1.0]]))
    with pytest.raises(FrameMismatch):
        run_sampling_experiment(plan, other, [2])


def test_signal_outside_the_band_is_rejected() -> None:
    plan = SamplingPlan.for_box(UNIT, radius=4)
    far = _one(Box.of((3, 3), ("7/2", "7/2")))
    with pytest.raises(OutsideBand) as info:
        run_sampling_experiment(plan, far, [8, 16])
    assert info.value.excess == pytest.approx(0.25)

    plan.check(_one(UNIT.cells[0]))
    edge = _one(Box.of((0, 1), (1, "65/64")))
    with pytest.raises(OutsideBand):
        plan.check(edge)


def test_dilated_band() -> None:
    scheme = DilationScheme.diagonal(F2, (2, 3))
    plan = SamplingPlan.for_box(UNIT, radius=2, level=1, scheme=scheme)
    assert same_set(plan.band(), Region.box(F2, (0, 0), (2, 3)))
    plan.check(_one(Box.of((1, 2), (2, 3))))
    with pytest.raises(OutsideBand):
        plan.check(_one(Box.of((1, 2), ("17/8", 3))))
    assert SamplingPlan.for_box(UNIT, radius=2).band() is UNIT


def test_lattice_must_be_a_spectrum() -> None:
    coarse = Lattice.rectangular(F2, (2, 2)).dual()
    plan = SamplingPlan(UNIT, coarse, radius=2)
    inside = _one(Box.of((0, 0), ("1/2", "1/2")))
    with pytest.raises(NotASpectrum) as info:
        run_sampling_experiment(plan, inside, [2])
    assert info.value.defect == pytest.approx(2 / np.pi)
    plan.check(inside, tolerance=1.0)
    assert SamplingPlan.for_box(UNIT).spectral_defect() <= 1e-10


def test_dilated_plan_needs_a_scheme() -> None:
    with pytest.raises(ValueError):
        SamplingPlan.for_box(UNIT, radius=2, level=1)


def test_level_zero_is_the_plain_series() -> None:
    scheme = DilationScheme.diagonal(F2, (2, 2))
    plan = SamplingPlan.for_box(UNIT, radius=6, scheme=scheme)
    f = random_box_signal(UNIT, 4, np.random.default_rng(3))
    samples = sample_signal(f, plan)
    x = evaluation_grid(2)
    assert np.array_equal(
        wsk_reconstruct_dilated(plan, samples, x),
        wsk_reconstruct(plan, samples, x),
    )


def test_dilated_reconstruction_rescales() -> None:
    skew = Frame([[1.0, 0.5], [0.0, 1.0]])
    p = Region.box(skew, (0, 0), (1, 1))
    scheme = DilationScheme.diagonal(skew, (2, 2))
    fine = SamplingPlan.for_box(p, radius=8, level=1, scheme=scheme)
    coarse = SamplingPlan.for_box(p, radius=8)

    wide = Region.box(skew, (0, 0), (2, 2))
    f = random_box_signal(wide, 6, np.random.default_rng(5))
    assert f.is_supported_in(wide)
    g = f.pullback(scheme, 1)
    assert g.is_supported_in(p)

    f_samples = sample_signal(f, fine)
    g_samples = sample_signal(g, coarse)
    keys = sorted(f_samples)
    assert np.allclose(
        [f_samples[k] for k in keys], [g_samples[k] for k in keys], atol=1e-12
    )

    x = evaluation_grid(2, 1.0)
    b = scheme.ambient(1)
    assert np.allclose(g(x @ b), f(x), atol=1e-12)
    rec_f = wsk_reconstruct_dilated(fine, f_samples, x)
    rec_g = wsk_reconstruct(coarse, g_samples, x @ b)
    assert np.allclose(rec_f, rec_g, atol=1e-10)
    assert np.allclose(rec_f - f(x), rec_g - g(x @ b), atol=1e-10)

    rows = run_sampling_experiment(fine, f, [4, 8])
    assert all(r.interp_max_abs_err <= 1e-10 for r in rows)


def _chamber_signal(
    dual: DualBasis, group: ReflectionGroup, rng: np.random.Generator
) -> BandlimitedSignal:
    # one small box around a point deep inside every chamber
    frame = dual.frame()
    centre = 3 * dual.dual_roots.sum(axis=0)
    terms = []
    for w in group:
        t = frame.to_frame(w @ centre)
        lo = [Fraction(round(float(v) * 64) - 3, 64) for v in t]
        hi = [Fraction(round(float(v) * 64) + 3, 64) for v in t]
        coeff = complex(rng.normal(), rng.normal())
        terms.append((coeff, Box(tuple(lo), tuple(hi))))
    return BandlimitedSignal(frame, tuple(terms))


@pytest.mark.parametrize("fixture", ["i2_4", "a3"])
def test_directional_decomposition(
    fixture: str, request: pytest.FixtureRequest
) -> None:
    simple, dual, group = request.getfixturevalue(fixture)
    f = _chamber_signal(dual, group, np.random.default_rng(11))
    parts = directional_decompose(f, group, simple)
    assert sorted(parts) == list(range(group.order))

    x = np.random.default_rng(12).uniform(-2, 2, size=(100, simple.dim))
    total = sum(part(x) for part in parts.values())
    assert np.allclose(total, f(x), rtol=0, atol=1e-10)
    energy = sum(part.norm_squared() for part in parts.values())
    assert energy == pytest.approx(f.norm_squared(), rel=1e-12)


def test_decomposition_inside_the_chamber(i2_4: Fixture) -> None:
    simple, dual, group = i2_4
    frame = dual.frame()
    f = BandlimitedSignal(
        frame,
        ((1.0, Box.of((1, 1), (2, 2))), (2j, Box.of((0, 3), (1, 4)))),
    )
    parts = directional_decompose(f, group, simple)
    assert list(parts) == [0]
    assert len(parts[0].terms) == 2


def test_straddling_box(i2_4: Fixture) -> None:
    simple, dual, group = i2_4
    f = BandlimitedSignal(dual.frame(), ((1.0, Box.of((-1, 1), (1, 2))),))
    with pytest.raises(StraddlingBox):
        directional_decompose(f, group, simple)


def test_dual_cone(i2_4: Fixture) -> None:
    simple, dual, group = i2_4
    assert np.allclose(
        dual_cone(simple, np.eye(2)).generators, simple.simple_roots
    )
    rng = np.random.default_rng(6)
    for w in group:
        cone = dual_cone(simple, w)
        assert np.allclose(cone.generators, simple.simple_roots @ w.T)
        y = rng.uniform(0.01, 1, size=(1000, 2)) @ cone.generators
        lam = rng.uniform(0.01, 1, size=(1000, 2)) @ dual.dual_roots @ w.T
        assert np.all(np.einsum("ij,ij->i", y, lam) > 0)
        assert cone.contains(y[0])


def test_tube_extension(i2_4: Fixture) -> None:
    simple, _, _ = i2_4
    f = _one(Box.of((2, "1/2"), (3, 1)), c=1 - 2j)
    cone = dual_cone(simple, np.eye(2))
    direction = simple.simple_roots.sum(axis=0)
    direction /= np.linalg.norm(direction)

    x = np.zeros(2)
    gaps = [
        abs(eval_tube_extension(f, x, s * direction, cone) - complex(f(x)))
        for s in (1.0, 0.1, 0.01)
    ]
    assert gaps[0] > gaps[1] > gaps[2]

    x = np.array([0.4, -1.3])
    y = 0.3 * direction
    value = eval_tube_extension(f, x, y, cone)
    assert value == pytest.approx(_oracle(f, x, y), abs=1e-8)
    damping = sum(
        abs(c) * fourier_indicator(Region(F2, (b,)), -1j * y).real
        for c, b in f.terms
    )
    assert abs(value) <= damping + 1e-12

    with pytest.raises(OutsideDualCone):
        eval_tube_extension(f, x, -y, cone)
