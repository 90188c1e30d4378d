"""Indicator machinery against quadrature, extended-precision, and symmetry oracles."""

import math

import mpmath
import numpy as np
import pytest

import heliodsm.indicators as ind
from heliodsm.forward import SourceEnsemble, dipole, monopole, synthesize_cauchy
from heliodsm.geometry import circle_directions, circle_surface, make_grid, sphere_directions
from heliodsm.indicators import (
    ReducedData,
    decay_probe,
    indicator_at,
    indicator_field,
    indicator_grid_values,
    moment_2d,
    moment_3d,
    plane_wave_identity,
    reduced_data,
)
from heliodsm.presets import preset_config


# ----------------------------------------------------------------------
# closed-form moments vs direction-set quadrature (the moment oracle)
# ----------------------------------------------------------------------

def _moment_by_quadrature(directions, p, q, z, k):
    mono = np.ones(len(directions))
    if p > 0:
        mono = mono * directions.nodes[:, p - 1]
    if q > 0:
        mono = mono * directions.nodes[:, q - 1]
    phase = np.exp(1j * k * (directions.nodes @ np.asarray(z, float)))
    return complex(np.sum(directions.weights * mono * phase))


def test_moment_2d_trivial_values():
    assert moment_2d(0, 0, [0.0, 0.0], 1.0) == pytest.approx(2 * math.pi)
    assert moment_2d(1, 0, [0.0, 0.0], 1.0) == 0.0
    assert moment_2d(1, 1, [0.0, 0.0], 1.0) == pytest.approx(math.pi)
    assert moment_2d(1, 2, [0.0, 0.0], 1.0) == 0.0


def test_moment_2d_diagonal_angle_drops_cos_term():
    # at alpha = pi/4 the cos(2 alpha) term vanishes: d1^2 moment = pi J0
    k, r = 1.0, 3.0
    z = r * np.array([math.cos(math.pi / 4), math.sin(math.pi / 4)])
    dirs = circle_directions(512)
    quad = _moment_by_quadrature(dirs, 1, 1, z, k)
    assert abs(quad - moment_2d(1, 1, z, k)) < 1e-12
    from heliodsm.specfun import bessel_j

    assert moment_2d(1, 1, z, k) == pytest.approx(math.pi * bessel_j(0, 3.0), abs=1e-12)


def test_moment_2d_against_quadrature_sweep():
    dirs = circle_directions(512)
    rng = np.random.default_rng(11)
    for t in (0.0, 1.0, 5.0, 20.0, 50.0):
        for _ in range(5):
            zhat = rng.normal(size=2)
            zhat /= np.linalg.norm(zhat)
            z = t * zhat
            for p in range(3):
                for q in range(p, 3):
                    quad = _moment_by_quadrature(dirs, p, q, z, 1.0)
                    assert abs(quad - moment_2d(p, q, z, 1.0)) < 1e-10


def test_moment_3d_trivial_values():
    assert moment_3d(0, 0, [0.0, 0.0, 0.0], 1.0) == pytest.approx(4 * math.pi)
    assert moment_3d(1, 1, [0.0, 0.0, 0.0], 1.0) == pytest.approx(4 * math.pi / 3)
    assert moment_3d(1, 3, [0.0, 0.0, 0.0], 1.0) == 0.0


def test_moment_3d_against_quadrature_sweep():
    dirs = sphere_directions(64, 128)
    rng = np.random.default_rng(12)
    for t in (0.0, 1.0, 5.0, 20.0, 50.0):
        for _ in range(5):
            zhat = rng.normal(size=3)
            zhat /= np.linalg.norm(zhat)
            z = t * zhat
            for p in range(4):
                for q in range(p, 4):
                    quad = _moment_by_quadrature(dirs, p, q, z, 1.0)
                    assert abs(quad - moment_3d(p, q, z, 1.0)) < 1e-10


def test_moment_3d_mixed_pair_example():
    # k|z| = 5 along alpha = pi/3, beta = pi/5
    a, b = math.pi / 3, math.pi / 5
    z = 5.0 * np.array([math.sin(a) * math.cos(b), math.sin(a) * math.sin(b), math.cos(a)])
    dirs = sphere_directions(64, 128)
    quad = _moment_by_quadrature(dirs, 1, 3, z, 1.0)
    assert abs(quad - moment_3d(1, 3, z, 1.0)) < 1e-10


def test_moment_3d_on_polar_axis():
    z = np.array([0.0, 0.0, 2.5])
    dirs = sphere_directions(48, 96)
    for p in range(4):
        for q in range(p, 4):
            quad = _moment_by_quadrature(dirs, p, q, z, 1.0)
            assert abs(quad - moment_3d(p, q, z, 1.0)) < 1e-11


def test_moment_index_validation():
    with pytest.raises(ValueError):
        moment_2d(0, 3, [1.0, 0.0], 1.0)
    with pytest.raises(ValueError):
        moment_3d(4, 0, [1.0, 0.0, 0.0], 1.0)


# ----------------------------------------------------------------------
# reduced data and the plane-wave identity
# ----------------------------------------------------------------------

def test_reduced_zero_data(example1):
    _, _, clean, _ = example1
    zero = type(clean)(
        surface=clean.surface,
        dirichlet=np.zeros_like(clean.dirichlet),
        neumann=np.zeros_like(clean.neumann),
    )
    red = reduced_data(zero, 15.0, circle_directions(64))
    assert np.all(red.values == 0)


def test_reduced_linearity(example1):
    cfg, _, clean, _ = example1
    dirs = circle_directions(128)
    red = reduced_data(clean, cfg.wavenumber, dirs)
    scaled = type(clean)(
        surface=clean.surface,
        dirichlet=(2.0 - 1.0j) * clean.dirichlet,
        neumann=(2.0 - 1.0j) * clean.neumann,
    )
    red2 = reduced_data(scaled, cfg.wavenumber, dirs)
    assert np.allclose(red2.values, (2.0 - 1.0j) * red.values, rtol=1e-13, atol=0)


def test_plane_wave_identity_singles():
    k = 9.0
    lam = 2.0 - 0.5j
    z = np.array([0.4, -1.0])
    mono = SourceEnsemble(sources=(monopole(z, lam),))
    for ang in np.linspace(0, 2 * math.pi, 7):
        d = np.array([math.cos(ang), math.sin(ang)])
        val = plane_wave_identity(mono, k, d)
        assert abs(val) == pytest.approx(abs(lam), abs=1e-13)
    eta = np.array([0.3, 1.1])
    dip = SourceEnsemble(sources=(dipole(z, eta),))
    for ang in np.linspace(0, 2 * math.pi, 7):
        d = np.array([math.cos(ang), math.sin(ang)])
        val = plane_wave_identity(dip, k, d)
        assert abs(val) == pytest.approx(k * abs(eta @ d), abs=1e-12)


def test_plane_wave_identity_extended_precision_oracle():
    # independent high-precision summation for the mixed ensemble
    cfg = preset_config("example3")
    ens = cfg.ensemble()
    k = cfg.wavenumber
    d = np.array([1.0, 0.0])
    mpmath.mp.dps = 40
    total = mpmath.mpc(0)
    for s in ens.sources:
        phase = mpmath.expjpi(mpmath.mpf(2) * (k * float(s.location @ d)) / (2 * mpmath.pi))
        lam = mpmath.mpc(s.scalar_intensity)
        eta_d = mpmath.mpc(complex(s.vector_intensity @ d.astype(complex)))
        total += (lam - 1j * k * eta_d) * phase
    got = plane_wave_identity(ens, k, d)
    assert abs(got - complex(total)) < 1e-12


def test_identity_couples_forward_and_reduction(example1):
    cfg, ens, _, _ = example1
    k = cfg.wavenumber
    surf = circle_surface(cfg.measurement_radius, 2048)
    cauchy = synthesize_cauchy(ens, k, surf)
    dirs = circle_directions(256)
    red = reduced_data(cauchy, k, dirs)
    closed = np.array([plane_wave_identity(ens, k, d) for d in dirs.nodes])
    gap = np.max(np.abs(red.values - closed)) / np.max(np.abs(closed))
    assert gap < 1e-8


def test_dimension_mismatch_rejected(example1):
    _, _, clean, _ = example1
    with pytest.raises(ValueError):
        reduced_data(clean, 15.0, sphere_directions(8, 8))


# ----------------------------------------------------------------------
# indicator fields
# ----------------------------------------------------------------------

def test_single_monopole_readoff_exact():
    k = 15.0
    lam = 4.0 - 2.0j
    z = np.array([0.7, -0.2])
    ens = SourceEnsemble(sources=(monopole(z, lam),))
    cauchy = synthesize_cauchy(ens, k, circle_surface(6.0, 1024))
    red = reduced_data(cauchy, k, circle_directions(256))
    vals = indicator_at(red, k, z[None, :])[0]
    assert abs(vals[0] - lam) < 1e-8
    assert np.max(np.abs(vals[1:])) < 1e-8


def test_single_dipole_readoff_exact():
    k = 15.0
    eta = np.array([1.0, 0.0])
    z = np.array([-0.4, 0.9])
    ens = SourceEnsemble(sources=(dipole(z, eta),))
    cauchy = synthesize_cauchy(ens, k, circle_surface(6.0, 1024))
    red = reduced_data(cauchy, k, circle_directions(256))
    vals = indicator_at(red, k, z[None, :])[0]
    assert abs(vals[0]) < 1e-8
    assert abs(vals[1] - 1.0) < 1e-8
    assert abs(vals[2]) < 1e-8


def test_indicator_grid_matches_pointwise(example1):
    cfg, _, _, noisy = example1
    k = cfg.wavenumber
    red = reduced_data(noisy, k, cfg.direction_set())
    grid = make_grid([-4, -4], [4, 4], [7, 9])
    grid_vals = indicator_grid_values(red, k, grid)
    point_vals = indicator_at(red, k, grid.points)
    assert np.max(np.abs(grid_vals - point_vals)) < 1e-12
    fld = indicator_field(red, k, grid, 1)
    assert np.array_equal(fld.values, grid_vals[:, 1])


def test_indicator_grid_matches_pointwise_3d(example4):
    cfg, _, _, noisy = example4
    k = cfg.wavenumber
    red = reduced_data(noisy, k, cfg.direction_set())
    grid = make_grid([-3, -3, -3], [3, 3, 3], [5, 4, 6])
    grid_vals = indicator_grid_values(red, k, grid)
    point_vals = indicator_at(red, k, grid.points)
    assert np.max(np.abs(grid_vals - point_vals)) < 1e-12


def test_conjugation_symmetry_under_mirroring(example1):
    # |I(z; ensemble)| equals |I(-z; mirrored ensemble)| for real intensities
    cfg, ens, _, _ = example1
    k = cfg.wavenumber
    mirrored = SourceEnsemble(
        sources=tuple(monopole(-s.location, s.scalar_intensity) for s in ens.sources)
    )
    surf = cfg.surface()
    red_a = reduced_data(synthesize_cauchy(ens, k, surf), k, cfg.direction_set())
    red_b = reduced_data(synthesize_cauchy(mirrored, k, surf), k, cfg.direction_set())
    probes = np.array([[0.3, 0.4], [2.0, 2.9], [-1.7, 2.2], [1.1, -0.6]])
    va = indicator_at(red_a, k, probes)
    vb = indicator_at(red_b, k, -probes)
    assert np.max(np.abs(np.abs(va) - np.abs(vb))) < 1e-12


def test_noise_free_argmax_sits_at_the_sources(example1):
    # Local maximizers of |I_0| near each source, probed on a 0.002-step
    # local lattice.  Cross-source interference shifts the weakest source's
    # maximizer by up to ~1.8 fine cells (0.019 here), so the bound is two
    # fine-grid cells, not one.
    cfg, ens, clean, _ = example1
    k = cfg.wavenumber
    red = reduced_data(clean, k, cfg.direction_set())
    fine_cell = (2 * math.pi / k) / 39
    ax = np.arange(-0.05, 0.0502, 0.002)
    X, Y = np.meshgrid(ax, ax, indexing="ij")
    for s in ens.sources:
        pts = np.stack([X.ravel() + s.location[0], Y.ravel() + s.location[1]], 1)
        vals = np.abs(indicator_at(red, k, pts)[:, 0])
        best = pts[int(np.argmax(vals))]
        assert np.linalg.norm(best - s.location) <= 2 * fine_cell


def test_multi_source_readoff_within_cross_term_budget(example1, example4):
    # noise-free read-off at the exact locations deviates from the true
    # intensity only by the finite-separation cross term (<= 35% here)
    for cfg, ens, clean, _ in (example1, example4):
        k = cfg.wavenumber
        red = reduced_data(clean, k, cfg.direction_set())
        vals = indicator_at(red, k, ens.locations())
        for j, s in enumerate(ens.sources):
            rel = abs(vals[j, 0] - s.scalar_intensity) / abs(s.scalar_intensity)
            assert rel <= 0.35


def test_component_out_of_range(example1):
    cfg, _, _, noisy = example1
    red = reduced_data(noisy, cfg.wavenumber, cfg.direction_set())
    grid = make_grid([-1, -1], [1, 1], [4, 4])
    with pytest.raises(ValueError):
        indicator_field(red, cfg.wavenumber, grid, 3)


def test_thread_count_does_not_change_results(example4):
    from heliodsm import _threads

    cfg, _, _, noisy = example4
    k = cfg.wavenumber
    red = reduced_data(noisy, k, cfg.direction_set())
    grid = make_grid([-3, -3, -3], [3, 3, 3], [17, 16, 15])
    try:
        _threads.set_thread_count(1)
        a = indicator_grid_values(red, k, grid)
        _threads.set_thread_count(3)
        b = indicator_grid_values(red, k, grid)
    finally:
        _threads.set_thread_count(None)
    assert np.array_equal(a, b)


# ----------------------------------------------------------------------
# decay probe
# ----------------------------------------------------------------------

def test_decay_probe_validation():
    with pytest.raises(ValueError):
        decay_probe(2, 0, 0, [5.0, 20.0])
    with pytest.raises(ValueError):
        decay_probe(2, 0, 0, [20.0, 20.0])


def test_decay_probe_3d_00_env():
    # 4 pi |j0| envelope is exactly 4 pi / t
    kl = [50.0, 100.0, 200.0]
    env = decay_probe(3, 0, 0, kl)
    for base, val in zip(kl, env):
        assert val == pytest.approx(4 * math.pi / base, rel=0.05)


def test_coefficient_debug_hook_scales_readoff():
    k = 12.0
    z = np.array([0.5, 0.5])
    ens = SourceEnsemble(sources=(monopole(z, 2.0),))
    cauchy = synthesize_cauchy(ens, k, circle_surface(5.0, 512))
    red = reduced_data(cauchy, k, circle_directions(128))
    clean = indicator_at(red, k, z[None, :])[0, 0]
    try:
        ind.coefficient_scale = 1.01
        scaled = indicator_at(red, k, z[None, :])[0, 0]
    finally:
        ind.coefficient_scale = 1.0
    assert abs(scaled / clean - 1.01) < 1e-12


def test_reduced_data_validation(example1):
    _, _, clean, _ = example1
    dirs = circle_directions(16)
    with pytest.raises(ValueError):
        ReducedData(directions=dirs, values=np.zeros(5, dtype=complex))
