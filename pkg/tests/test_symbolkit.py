"""Symbol layer: closed-form constants, the spectral profile, band rates."""

import math

import numpy as np
import pytest

from fowlerlab.symbolkit import (
    A_I,
    B_I,
    SymbolParams,
    band_rate,
    band_report,
    derive_constants,
    phi_I,
    psi_I,
    sigma_I,
    spectral_profile,
)

# grid-verified closed forms, frozen (12 significant digits)
ALPHA = 0.045980714466948645
XI_STAR = 0.04826396385768372
XI_C = 0.08866656331159073

REL = 1e-12


def test_constants_closed_form():
    assert A_I == pytest.approx(math.gamma(2.0 / 3.0) * (2.0 * math.pi) ** (4.0 / 3.0) / 2.0, rel=0)
    assert B_I / A_I == pytest.approx(math.sqrt(3.0), rel=1e-15)


def test_derive_constants_agrees_with_closed_form():
    p = derive_constants(1e-6)
    assert p.a_I == A_I and p.b_I == B_I
    assert p.C_I == 4.0 / 9.0


def test_params_validation():
    with pytest.raises(AssertionError):
        SymbolParams(C_I=0.5)
    p = SymbolParams().with_u_phi(1.5)
    assert p.u_phi == 1.5 and p.a_I == A_I


def test_sigma_basics():
    assert sigma_I(0.0) == 0.0
    s = sigma_I(1.0)
    assert isinstance(s, complex)
    assert s.real == pytest.approx(-A_I, rel=REL)
    assert s.imag == pytest.approx(B_I, rel=REL)
    # reality of the underlying kernel: sigma(-xi) = conj(sigma(xi))
    xi = np.linspace(0.01, 3.0, 57)
    assert np.allclose(sigma_I(-xi), np.conj(sigma_I(xi)), rtol=0, atol=1e-14)


def test_psi_sign_structure():
    inside = np.linspace(1e-4, XI_C * (1 - 1e-9), 2000)
    outside = np.linspace(XI_C * (1 + 1e-9), 1.0, 2000)
    assert np.max(psi_I(inside).real) < 0.0
    assert np.min(psi_I(outside).real) > 0.0
    # the minimum of Re psi is -alpha, at xi_star
    assert psi_I(XI_STAR).real == pytest.approx(-ALPHA, rel=1e-10)


def test_phi_transport_is_purely_imaginary():
    p = SymbolParams(u_phi=0.7)
    xi = np.linspace(-2.0, 2.0, 101)
    gap = phi_I(xi, p) - psi_I(xi)
    assert np.allclose(gap.real, 0.0, atol=1e-15)
    assert np.allclose(gap.imag, 2.0 * math.pi * 0.7 * xi, rtol=1e-14, atol=1e-16)


def test_spectral_profile_frozen_values():
    prof = spectral_profile(SymbolParams())
    assert prof.alpha == pytest.approx(ALPHA, rel=REL)
    assert prof.xi_star == pytest.approx(XI_STAR, rel=REL)
    assert prof.xi_c == pytest.approx(XI_C, rel=REL)
    # closed-form relations among the three
    assert prof.alpha == pytest.approx(A_I**3 / (108.0 * math.pi**4), rel=REL)
    assert prof.xi_c / prof.xi_star == pytest.approx(1.5**1.5, rel=REL)


def test_band_report_default_band():
    p = SymbolParams()
    c, d = 0.6 * XI_STAR, XI_STAR
    rep = band_report(c, d, p)
    assert rep.beta == pytest.approx(0.03670083138340395, rel=1e-9)
    # the band sits left of xi_star, where Re psi decreases: max at c
    assert not rep.max_at_d and not rep.edge_ordering_ok
    assert rep.re_at_c > rep.re_at_d
    assert band_rate(c, d, p) == rep.beta


def test_band_report_right_of_the_minimizer():
    rep = band_report(XI_STAR, 1.2 * XI_STAR, SymbolParams())
    assert rep.max_at_d and rep.edge_ordering_ok
    assert 0.0 < rep.beta < ALPHA * (1 + 1e-12)


def test_band_report_rejects_stable_bands():
    with pytest.raises(ValueError):
        band_report(0.2, 0.3, SymbolParams())  # entirely above xi_c
    with pytest.raises(AssertionError):
        band_report(-0.1, 0.05, SymbolParams())
