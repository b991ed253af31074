"""fowlerlab: a numerical laboratory for the nonlocal conservation law

    du/dt + d(u^2/2)/dx + I[u] - d^2u/dx^2 = 0

modeling dune height under shear flow.  I is a fractional anti-diffusion
(Fourier multiplier -a_I |xi|^{4/3} + i b_I xi |xi|^{1/3}) that destabilizes
every constant state; the package implements the operator three cross-checking
ways, the linear semigroup kernel, explicit finite-difference and spectral
Duhamel solvers, and an experiment harness that measures the instability.
"""

__version__ = "0.1.0"

from .symbolkit import (  # noqa: F401
    SymbolParams,
    SpectralProfile,
    sigma_I,
    psi_I,
    phi_I,
    derive_constants,
    spectral_profile,
    band_rate,
    band_report,
)
from .nonlocal_op import (  # noqa: F401
    SpatialGrid,
    Field,
    Spectrum,
    apply_quadrature,
    apply_singular,
    apply_spectral,
    causal_oracle,
)
from .kernel import (  # noqa: F401
    KernelSnapshot,
    kernel_snapshot,
    apply_semigroup,
    dxk_norm,
    envelope_fit,
)
from .solver_fd import SimConfig, InitialDatum, Trajectory, fd_step, run, stable_dt  # noqa: F401
from .solver_spectral import duhamel_step, run_mild  # noqa: F401
from .experiments import (  # noqa: F401
    InstabilityWitness,
    RunReport,
    build_w0,
    build_w0_spectrum,
    make_witness,
    verify_witness,
    instability_demo,
)
