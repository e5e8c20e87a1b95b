"""Dispersion matrix, root finders, and mode reconstruction."""

import math

import numpy as np
import pytest

import slabdecay.dispersion as disp
from slabdecay.errors import (DegenerateExponentError, DegenerateParameterError,
                              HypothesisNotMetError, NotARootError, ParameterError)
from slabdecay.symbols import SlabParams, Symbol


def make_slab(r, g=1.0, sigma=1.0):
    return SlabParams(ell=1.0, dim=3,
                      symbol=Symbol(family="fractional", g=g, sigma=sigma, r=r))


def test_det_vanishes_at_rho_zero():
    slab = make_slab(0.5)
    for k in (0.25, 1.0, 8.0, 64.0):
        m = disp.build_matrix(0.0, k, slab.mu(k), slab.ell)
        assert abs(m.det) <= 1e-12 * m.scale


def test_degenerate_rho_rejected():
    k = 2.0
    with pytest.raises(DegenerateExponentError):
        disp.build_matrix(4.0 * math.pi ** 2 * k ** 2, k, 1.0, 1.0)


def test_column_scaling_keeps_entries_finite():
    slab = make_slab(1.0)
    k = 512.0
    m = disp.build_matrix(1.0, k, slab.mu(k), slab.ell)
    assert np.all(np.isfinite(m.entries))
    assert np.isfinite(m.det)


def test_largeness_precondition():
    slab = make_slab(1.0)
    assert not disp.largeness_ok(8.0, slab.mu(8.0))
    assert disp.largeness_ok(64.0, slab.mu(64.0))
    with pytest.raises(HypothesisNotMetError):
        disp.find_high_freq_root(8.0, slab.mu(8.0), slab.ell)


def test_high_freq_root_in_bracket_with_tiny_residual():
    slab = make_slab(0.5)
    k = 64.0
    mu = slab.mu(k)
    res = disp.find_high_freq_root(k, mu, slab.ell)
    kap = res.rho.real * k / mu
    assert disp.KAPPA_MINUS - 1e-12 <= kap <= disp.KAPPA_PLUS + 1e-12
    scale = disp.build_matrix(res.rho, k, mu, slab.ell).scale
    assert abs(res.det_residual) <= 1e-8 * scale
    # reference bracket endpoints for this configuration
    assert res.bracket[0] == pytest.approx(0.5013, rel=1e-3)
    assert res.bracket[1] == pytest.approx(6.80, rel=1e-2)


def test_gamma43_sign_mutation_breaks_bracket(monkeypatch):
    """Mutation sanity: flipping the boundary-stress coupling sign must
    visibly break the bracket root (wrong location or no root at all)."""
    slab = make_slab(0.5)
    k, mu = 64.0, make_slab(0.5).mu(64.0)
    baseline = disp.find_high_freq_root(k, mu, slab.ell).rho.real
    monkeypatch.setattr(disp, "_GAMMA43_COEFF", +2.0)
    try:
        mutated = disp.find_high_freq_root(k, mu, slab.ell).rho.real
        assert abs(mutated - baseline) > 1e-3 * baseline
    except disp.NoRootInBracketError:
        pass  # equally acceptable failure mode


def test_low_freq_kappa_converges_to_third():
    slab = make_slab(1.0)
    errs = [abs(disp.find_low_freq_root(k, slab).kappa - 1.0 / 3.0)
            for k in (1e-1, 1e-2, 1e-3)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[-1] < 0.02 / 3.0


def test_low_freq_seed_tracks_zero_frequency_weight():
    # r = 0 keeps sigma active at xi = 0, so kappa -> mu(0)/3 = 2/3
    slab = make_slab(0.0)
    res = disp.find_low_freq_root(1e-3, slab)
    assert res.kappa.real == pytest.approx(2.0 / 3.0, rel=1e-3)


def test_low_freq_complex_kappa_still_decaying():
    slab = make_slab(1.0, g=4.0)
    res = disp.find_low_freq_root(1e-2, slab)
    assert abs(res.kappa.imag) > 0.0
    assert res.rho.real > 0.0


def test_degenerate_g_three_raises():
    with pytest.raises(DegenerateParameterError):
        disp.find_low_freq_root(1e-2, make_slab(1.0, g=3.0))


def test_scan_root_midrange():
    slab = make_slab(1.0)
    res = disp.find_scan_root(1.0, slab.mu(1.0), slab.ell)
    assert res.method == "scan"
    assert 0.0 < res.rho.real < 4.0 * math.pi ** 2


def test_sweep_dispatch_and_row_errors():
    slab = make_slab(1.0)
    rows = disp.sweep_dispersion(slab, [0.01, 1.0, 64.0])
    methods = [r.method for _, r in rows]
    assert methods == ["low_freq", "scan", "bracket"]
    # in-row error for the degenerate parameter, sweep continues
    rows = disp.sweep_dispersion(make_slab(1.0, g=3.0), [0.01, 64.0])
    assert isinstance(rows[0][1], DegenerateParameterError)
    assert not isinstance(rows[1][1], Exception)
    with pytest.raises(ParameterError):
        disp.sweep_dispersion(slab, [])


def test_sweep_preserves_input_order_and_length():
    slab = make_slab(0.5)
    moduli = [2.0 ** j for j in range(8)]
    rows = disp.sweep_dispersion(slab, moduli)
    assert [k for k, _ in rows] == moduli


def test_null_vector_requires_a_root():
    full_rank = disp.DispersionMatrix(
        entries=np.eye(4, dtype=complex), log_scaling=np.zeros(4),
        rho=1.0, xi_mod=1.0, mu=1.0, ell=1.0)
    with pytest.raises(NotARootError):
        disp.null_vector(full_rank)


def test_null_vector_at_root_annihilates():
    slab = make_slab(0.5)
    k, mu = 8.0, make_slab(0.5).mu(8.0)
    res = disp.find_high_freq_root(k, mu, slab.ell)
    mat = disp.build_matrix(res.rho, k, mu, slab.ell)
    assert np.linalg.norm(mat.entries @ res.null_vector) <= 1e-8 * mat.scale


def test_reconstruct_mode_satisfies_the_equations():
    slab = make_slab(0.5)
    k, mu = 8.0, make_slab(0.5).mu(8.0)
    res = disp.find_high_freq_root(k, mu, slab.ell)
    prof = disp.reconstruct_mode(res, k, mu, slab.ell, grid_size=257)
    for name, val in prof.residuals.items():
        assert val <= 1e-6, f"{name} residual {val}"
    # kinematic consistency: h = -v(ell)/rho
    assert prof.h == pytest.approx(-prof.v[-1] / res.rho, rel=1e-10)
