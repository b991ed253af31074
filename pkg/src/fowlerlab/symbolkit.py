"""Fourier symbols and spectral constants of the nonlocal dune operator.

The operator I acts on 2pi-free frequency variables with the convention

    F phi(xi) = int phi(x) exp(-2 pi i x xi) dx,

forced by the 4 pi^2 xi^2 symbol of -d^2/dx^2.  Its multiplier is

    sigma_I(xi) = -a_I |xi|^{4/3} + i b_I xi |xi|^{1/3},

anti-diffusive at low frequencies.  The full linear symbol of the flow
(I - d^2/dx^2, plus transport at background speed u_phi) is

    psi_I(xi) = 4 pi^2 xi^2 + sigma_I(xi),
    phi_I(xi) = psi_I(xi) + 2 pi i u_phi xi.

Re psi_I dips below zero exactly on 0 < |xi| < xi_c: that band of amplified
frequencies drives everything downstream (kernel sign changes, the e^{alpha t}
envelope, the instability witness).
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import gamma

__all__ = [
    "SymbolParams",
    "SpectralProfile",
    "BandReport",
    "sigma_I",
    "psi_I",
    "phi_I",
    "derive_constants",
    "spectral_profile",
    "band_rate",
    "band_report",
]

FOUR_PI2 = 4.0 * math.pi**2

# Closed forms: integrating zeta^{-1/3} against exp(-2 pi i xi zeta) gives
# Gamma(2/3) (2 pi |xi|)^{-2/3} exp(-i pi/3 sgn xi); multiplying by the
# (2 pi i xi)^2 of the second derivative and splitting real/imaginary parts
# leaves cos(pi/3) = 1/2 and sin(pi/3) = sqrt(3)/2 prefactors.
A_I = gamma(2.0 / 3.0) * (2.0 * math.pi) ** (4.0 / 3.0) / 2.0
B_I = A_I * math.sqrt(3.0)
C_I = 4.0 / 9.0


@dataclass(frozen=True)
class SymbolParams:
    """Operator constants plus the background state u_phi."""

    a_I: float = A_I
    b_I: float = B_I
    C_I: float = C_I
    u_phi: float = 0.0

    def __post_init__(self):
        assert self.a_I > 0 and self.b_I > 0
        assert abs(self.C_I - 4.0 / 9.0) == 0.0, "C_I is fixed at 4/9"

    def with_u_phi(self, u_phi):
        return SymbolParams(self.a_I, self.b_I, self.C_I, float(u_phi))


@dataclass(frozen=True)
class SpectralProfile:
    """alpha = -min Re phi_I, its minimizer xi_star, and the band edge xi_c."""

    alpha: float
    xi_star: float
    xi_c: float


@dataclass(frozen=True)
class BandReport:
    """band_rate diagnostics: beta plus the proof-style edge conditions.

    The growth argument needs Re phi_I <= -beta on [c, d], which
    beta = -max Re phi_I guarantees by construction.  edge_ordering_ok
    records the stricter textbook condition Re phi_I(c) < Re phi_I(d) = -beta;
    on bands left of xi_star (where Re phi_I is decreasing) the max sits at c
    and that ordering fails, which is reported, not hidden.
    """

    c: float
    d: float
    beta: float
    re_at_c: float
    re_at_d: float
    max_at_d: bool
    edge_ordering_ok: bool


def _sigma(xi, a, b):
    xi = np.asarray(xi, dtype=float)
    mag = np.abs(xi)
    return -a * mag ** (4.0 / 3.0) + 1j * b * xi * mag ** (1.0 / 3.0)


def sigma_I(xi):
    """Multiplier of I alone: -a_I |xi|^{4/3} + i b_I xi |xi|^{1/3}."""
    out = _sigma(xi, A_I, B_I)
    return complex(out) if out.ndim == 0 else out


def psi_I(xi):
    """Symbol of I - d^2/dx^2: 4 pi^2 xi^2 + sigma_I(xi)."""
    xi = np.asarray(xi, dtype=float)
    out = FOUR_PI2 * xi**2 + _sigma(xi, A_I, B_I)
    return complex(out) if out.ndim == 0 else out


def phi_I(xi, params: SymbolParams):
    """Full linear symbol including the i 2 pi u_phi xi transport term."""
    xi = np.asarray(xi, dtype=float)
    out = (
        FOUR_PI2 * xi**2
        + _sigma(xi, params.a_I, params.b_I)
        + 2j * math.pi * params.u_phi * xi
    )
    return complex(out) if out.ndim == 0 else out


def _symbol_by_quadrature(xi):
    """Evaluate int_0^inf zeta^{-1/3} (2 pi i xi)^2 e^{-2 pi i xi zeta} dzeta.

    The integrand's zeta^{-1/3} head is tamed by zeta = s^3 on [0, 1]; the
    oscillatory tail on [1, inf) goes to QAWF (quad with cos/sin weights).
    """
    w = 2.0 * math.pi * abs(xi)
    head_c = 3.0 * quad(lambda s: s * math.cos(w * s**3), 0.0, 1.0, limit=200)[0]
    head_s = 3.0 * quad(lambda s: s * math.sin(w * s**3), 0.0, 1.0, limit=200)[0]
    tail_c = quad(lambda z: z ** (-1.0 / 3.0), 1.0, np.inf, weight="cos", wvar=w)[0]
    tail_s = quad(lambda z: z ** (-1.0 / 3.0), 1.0, np.inf, weight="sin", wvar=w)[0]
    base = (head_c + tail_c) - 1j * (head_s + tail_s)  # F[zeta_+^{-1/3}](xi)
    out = -FOUR_PI2 * xi**2 * base
    return out if xi >= 0 else np.conj(out)


@lru_cache(maxsize=1)
def derive_constants(tol=1e-6):
    """Produce a_I, b_I two independent ways and insist they agree.

    Route (i): the Gamma-function closed form (module constants A_I, B_I).
    Route (ii): direct numerical quadrature of the defining integral at a few
    frequencies, from which (a, b) are read off via sigma/|xi|^{4/3}.

    Raises RuntimeError on disagreement beyond `tol` -- that means the
    quadrature (or the closed form) is wrong, and nothing downstream can be
    trusted.
    """
    worst = 0.0
    for xi in (0.5, 1.0, 2.0):
        s = _symbol_by_quadrature(xi)
        a_q = -s.real / xi ** (4.0 / 3.0)
        b_q = s.imag / (xi * xi ** (1.0 / 3.0))
        worst = max(worst, abs(a_q - A_I) / A_I, abs(b_q - B_I) / B_I)
    if worst > tol:
        raise RuntimeError(
            f"constant derivation routes disagree: relative gap {worst:.3e} > {tol:.1e}"
        )
    return SymbolParams(A_I, B_I, C_I, 0.0)


@lru_cache(maxsize=8)
def _profile_cached(a_I, b_I):
    alpha = a_I**3 / (108.0 * math.pi**4)
    xi_star = (a_I / (6.0 * math.pi**2)) ** 1.5
    xi_c = (a_I / FOUR_PI2) ** 1.5

    # Cross-check against a dense grid scan of Re psi on (0, 2 xi_c).
    xi = np.linspace(0.0, 2.0 * xi_c, 1_000_001)[1:]
    re = FOUR_PI2 * xi**2 - a_I * xi ** (4.0 / 3.0)
    j = int(np.argmin(re))
    # Parabolic refinement of the minimizer (the grid alone leaves ~3e-6
    # relative jitter in xi_star; the parabola through the bracketing triple
    # removes it).
    x0, x1, x2 = xi[j - 1], xi[j], xi[j + 1]
    y0, y1, y2 = re[j - 1], re[j], re[j + 1]
    denom = (y0 - 2.0 * y1 + y2)
    xi_star_grid = x1 + 0.5 * (y0 - y2) / denom * (x1 - x0)
    alpha_grid = -(FOUR_PI2 * xi_star_grid**2 - a_I * xi_star_grid ** (4.0 / 3.0))
    xi_c_grid = brentq(
        lambda z: FOUR_PI2 * z**2 - a_I * z ** (4.0 / 3.0), xi_star, 2.0 * xi_c
    )

    assert abs(alpha_grid - alpha) / alpha <= 1e-6, (alpha, alpha_grid)
    assert abs(xi_star_grid - xi_star) / xi_star <= 1e-6, (xi_star, xi_star_grid)
    assert abs(xi_c_grid - xi_c) / xi_c <= 1e-6, (xi_c, xi_c_grid)
    return SpectralProfile(alpha=alpha, xi_star=xi_star, xi_c=xi_c)


def spectral_profile(params: SymbolParams) -> SpectralProfile:
    """Closed-form alpha, xi_star, xi_c, grid-verified to 1e-6 relative.

    alpha = a^3/(108 pi^4), xi_star = (a/6 pi^2)^{3/2}, xi_c = (a/4 pi^2)^{3/2}.
    Independent of u_phi (transport only shifts Im phi_I).
    """
    return _profile_cached(params.a_I, params.b_I)


def band_report(c, d, params: SymbolParams, n_grid=10_000) -> BandReport:
    """Grid-maximize Re phi_I over [c, d] and package beta with diagnostics."""
    assert 0.0 < c <= d, "band edges must satisfy 0 < c <= d"
    xi = np.linspace(c, d, n_grid)
    re = FOUR_PI2 * xi**2 - params.a_I * xi ** (4.0 / 3.0)
    top = float(np.max(re))
    if top >= 0.0:
        raise ValueError(
            f"band [{c:g}, {d:g}] is not strictly unstable: max Re phi_I = {top:.3e} >= 0"
        )
    re_c, re_d = float(re[0]), float(re[-1])
    max_at_d = bool(np.argmax(re) == len(xi) - 1)
    return BandReport(
        c=float(c),
        d=float(d),
        beta=-top,
        re_at_c=re_c,
        re_at_d=re_d,
        max_at_d=max_at_d,
        edge_ordering_ok=bool(max_at_d and re_c < re_d < 0.0),
    )


def band_rate(c, d, params: SymbolParams, n_grid=10_000) -> float:
    """beta = -max Re phi_I on [c, d] > 0; raises if the band is not unstable.

    Re phi_I is V-shaped on (0, xi_c) (decreasing to xi_star, increasing
    after), so the grid max always lands on an endpoint; the grid density
    only matters for bands straddling xi_star.
    """
    return band_report(c, d, params, n_grid=n_grid).beta
