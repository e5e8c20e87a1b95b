"""Synthesis: data families, lattice sums, quadrature, decay-law fitting."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slabdecay.errors import FitDomainError, ParameterError
from slabdecay.stokes1d import EnergyCurve
from slabdecay.symbols import SlabParams, Symbol
from slabdecay.synthesis import (InitialDataSpec, fit_decay_law,
                                 synthesize_plane, synthesize_torus,
                                 theoretical_envelope)


def make_slab(r=1.0):
    return SlabParams(ell=1.0, dim=3,
                      symbol=Symbol(family="fractional", g=1, sigma=1, r=r))


def test_data_family_amplitudes():
    flat = InitialDataSpec(family="flat_spectrum", cutoff=2.0)
    assert flat.amplitude(1.5, 3) == 1.0
    assert flat.amplitude(2.5, 3) == 0.0
    sob = InitialDataSpec(family="sobolev_h", s=2.0, eps=0.1)
    k = 3.0
    assert sob.amplitude(k, 3) == pytest.approx((1 + k * k) ** (-(4 + 2 + 0.1) / 4))
    rz = InitialDataSpec(family="riesz_weighted", lam=2.0, eps=0.1)
    assert rz.amplitude(0.0, 3) == 0.0
    assert rz.amplitude(0.5, 3) == pytest.approx(0.5 ** (2 - 1 + 0.1)
                                                 * sob.amplitude(0.5, 3))
    assert rz.amplitude(5.0, 3) == pytest.approx(sob.amplitude(5.0, 3))


def test_data_spec_validation():
    with pytest.raises(ParameterError):
        InitialDataSpec(family="nope")
    with pytest.raises(ParameterError):
        InitialDataSpec(family="sobolev_h", s=-1.0)
    with pytest.raises(ParameterError):
        InitialDataSpec(family="flat_spectrum", cutoff=0.0)


def test_theoretical_envelope():
    slab = make_slab(0.5)
    assert theoretical_envelope(slab, 0.0) == 1.0
    # high frequency: envelope / |xi|^(2r-1) -> 2 pi sigma (here 2r-1 = 0)
    k = 1e5
    assert theoretical_envelope(slab, k) == pytest.approx(2.0 * math.pi, rel=1e-3)
    # low frequency: envelope ~ g |xi|^2
    k = 1e-5
    assert theoretical_envelope(slab, k) / k ** 2 == pytest.approx(1.0, rel=1e-3)


def test_fit_decay_law_synthetic_laws():
    t = np.linspace(0.1, 20.0, 200)
    stretched = fit_decay_law(EnergyCurve(t, np.exp(-2.0 * np.sqrt(t))),
                              "stretched_exp", (0.1, 20.0), alpha=1.0)
    assert stretched.exponent == pytest.approx(2.0, abs=1e-10)
    assert stretched.quality == pytest.approx(1.0)
    expo = fit_decay_law(EnergyCurve(t, np.exp(-3.0 * t)), "exponential", (0.1, 20.0))
    assert expo.exponent == pytest.approx(3.0, abs=1e-10)
    alg = fit_decay_law(EnergyCurve(t, (1 + t) ** -2.5), "algebraic", (0.1, 20.0))
    assert alg.exponent == pytest.approx(2.5, abs=1e-10)


@given(st.floats(0.1, 5.0), st.floats(-2.0, 2.0))
def test_fit_exponential_recovers_random_rate(rate, loga):
    t = np.linspace(0.1, 10.0, 60)
    fit = fit_decay_law(EnergyCurve(t, np.exp(loga - rate * t)),
                        "exponential", (0.1, 10.0))
    assert fit.exponent == pytest.approx(rate, rel=1e-8)
    assert fit.intercept == pytest.approx(loga, abs=1e-8)


def test_fit_decay_law_model_selection():
    t = np.linspace(0.1, 20.0, 200)
    curve = EnergyCurve(t, np.exp(-3.0 * t))
    alg = fit_decay_law(curve, "algebraic", (0.1, 20.0))
    expo = fit_decay_law(curve, "exponential", (0.1, 20.0))
    assert expo.quality > alg.quality
    auto = fit_decay_law(curve, "auto", (0.1, 20.0))
    assert auto.law == "exponential"


def test_fit_decay_law_stretched_free_recovers_power():
    t = np.linspace(1.0, 100.0, 300)
    rec = fit_decay_law(EnergyCurve(t, np.exp(-1.5 * t ** 0.4)),
                        "stretched_free", (1.0, 100.0))
    assert rec.alpha == pytest.approx(0.4, abs=1e-6)
    assert rec.exponent == pytest.approx(1.5, rel=1e-5)


def test_fit_decay_law_domain_errors():
    t = np.linspace(0.1, 1.0, 5)
    with pytest.raises(FitDomainError):
        fit_decay_law(EnergyCurve(t, np.exp(-t)), "exponential", (0.1, 1.0))
    t = np.linspace(0.5, 20.0, 50)
    with pytest.raises(FitDomainError):
        fit_decay_law(EnergyCurve(t, np.exp(-t)), "log_corrected_exp", (0.5, 20.0))


def test_torus_truncation_beyond_support_is_exact():
    slab = make_slab(1.0)
    data = InitialDataSpec(family="flat_spectrum", cutoff=1.0)
    r1 = synthesize_torus(slab, data, lattice_radius=1, T=0.5, dt=math.inf,
                          law="none", fit_window=None)
    r2 = synthesize_torus(slab, data, lattice_radius=2, T=0.5, dt=math.inf,
                          law="none", fit_window=None)
    assert np.array_equal(r1.curve.values, r2.curve.values)


def test_torus_total_is_sum_of_cached_contributions():
    slab = make_slab(1.0)
    data = InitialDataSpec(family="sobolev_h", s=2.0)
    res = synthesize_torus(slab, data, lattice_radius=4, T=0.5, dt=math.inf,
                           law="none", fit_window=None)
    total = np.zeros_like(res.curve.values)
    for curve in res.per_mode_cache.values():
        total = total + curve.values
    assert np.allclose(total, res.curve.values, rtol=1e-13, atol=0.0)


def test_torus_monotone_and_zero_mode_convention():
    slab = make_slab(1.0)
    res = synthesize_torus(slab, InitialDataSpec(family="sobolev_h", s=2.0),
                           lattice_radius=3, T=1.0, dt=math.inf,
                           law="none", fit_window=None)
    assert np.all(np.diff(res.curve.values) <= 1e-12 * res.curve.values[0])
    assert res.curve.meta["zero_mode"] == 0.0


def test_torus_lattice_multiplicities():
    slab = make_slab(1.0)
    data = InitialDataSpec(family="flat_spectrum", cutoff=2.0)
    res = synthesize_torus(slab, data, lattice_radius=2, T=0.2, dt=math.inf,
                           law="none", fit_window=None)
    # Z^2 moduli <= 2: |xi| = 1 (x4), sqrt(2) (x4), 2 (x4)
    ks = sorted(res.per_mode_cache)
    assert ks == pytest.approx([1.0, math.sqrt(2.0), 2.0])
    for k in ks:
        assert res.per_mode_cache[k].meta["weight"] == pytest.approx(4.0)


def test_plane_quadrature_refinement_stability():
    slab = make_slab(0.0)
    data = InitialDataSpec(family="flat_spectrum", cutoff=1.0)
    curves = {}
    for n in (24, 48, 96):
        curves[n] = synthesize_plane(slab, data, {"nodes_per_decade": n},
                                     T=50.0, dt=math.inf,
                                     law="none", fit_window=None)

    def gap(a, b):
        t = curves[a].curve.times
        mask = (t >= 5.0) & (t <= 50.0)
        rel = np.abs(curves[b].curve.values[mask]
                     - curves[a].curve.values[mask]) \
            / curves[a].curve.values[mask]
        return rel.max()

    # roughly second-order in node spacing: each doubling cuts the gap
    assert gap(48, 96) < 0.005
    assert gap(48, 96) < 0.5 * gap(24, 48)


def test_plane_rejects_unknown_quadrature_keys():
    slab = make_slab(0.0)
    data = InitialDataSpec(family="flat_spectrum", cutoff=1.0)
    with pytest.raises(ParameterError):
        synthesize_plane(slab, data, {"bogus": 1}, T=1.0, dt=math.inf)


def test_plane_low_high_split_recorded():
    slab = make_slab(0.0)
    data = InitialDataSpec(family="flat_spectrum", cutoff=1.0)
    res = synthesize_plane(slab, data, None, T=10.0, dt=math.inf,
                           law="none", fit_window=None)
    assert 0.0 < res.curve.meta["low_high_split"] <= 1.0
    assert res.curve.meta["domain"] == "plane"


def test_calibration_reported():
    slab = make_slab(1.0)
    res = synthesize_torus(slab, InitialDataSpec(family="sobolev_h", s=2.0),
                           lattice_radius=4, T=0.5, dt=math.inf,
                           law="none", fit_window=None)
    cal = res.meta["calibration"]
    assert 0.0 < cal["c_empirical"] <= cal["c_max"]
