"""Parameter space and matrix builders for two magnon modes in a lossy cavity.

The basic object is a 3x3 non-Hermitian coupled-mode matrix in the fixed mode
order (a, m1, m2): one cavity mode with amplitude decay rate kappa, two magnon
modes with decay rates gamma1, gamma2, coherent couplings g1, g2 to the cavity,
and half-splitting s between the magnon frequencies.  The rotating frame sits
at the magnon midpoint, so the two magnons appear at +s and -s and the cavity
at zero detuning.  All rates are dimensionless in units of kappa unless stated
otherwise; the only SI-aware helper is :func:`drive_amplitude_from_power`.

Everything here is a pure function of immutable inputs and safe to call from
any number of threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# CODATA reduced Planck constant, J*s. Pinned for reproducible SI conversion.
HBAR = 1.0545718e-34

_SQRT2 = math.sqrt(2.0)


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class SystemParams:
    """Rates and detunings of the three-mode system, in units of kappa.

    kappa   : cavity amplitude decay rate (> 0; sets the rate unit)
    gamma1  : decay rate of magnon 1 (>= 0)
    gamma2  : decay rate of magnon 2 (>= 0)
    g1, g2  : coherent magnon-photon couplings (>= 0)
    s       : half the magnon-magnon frequency splitting; any real value,
              the usual sweep variable
    """

    kappa: float = 1.0
    gamma1: float = 0.01
    gamma2: float = 0.01
    g1: float = 0.2
    g2: float = 0.2
    s: float = 0.0

    def __post_init__(self):
        for name in ("kappa", "gamma1", "gamma2", "g1", "g2", "s"):
            _require_finite(name, getattr(self, name))
        if self.kappa <= 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        for name in ("gamma1", "gamma2", "g1", "g2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")

    @property
    def symmetric_couplings(self) -> bool:
        return self.g1 == self.g2

    @property
    def induced_rate(self) -> float:
        """Cavity-mediated collective rate g1*g2/kappa."""
        return self.g1 * self.g2 / self.kappa


@dataclass(frozen=True)
class DriveParams:
    """Cavity drive: detuning delta from the magnon midpoint and amplitude.

    The amplitude carries square-root-of-photon-flux units; in kappa units the
    default drive strength is 1.
    """

    delta: float = 0.0
    amplitude: float = 1.0

    def __post_init__(self):
        _require_finite("delta", self.delta)
        _require_finite("amplitude", self.amplitude)
        if self.amplitude < 0:
            raise ValueError(f"amplitude must be non-negative, got {self.amplitude}")


@dataclass(frozen=True)
class EffectiveHamiltonian:
    """Drive-frame system: matrix (H - delta*I) and drive vector sqrt(kappa)*(E, 0, 0)."""

    matrix: np.ndarray
    force: np.ndarray

    def __post_init__(self):
        self.matrix.setflags(write=False)
        self.force.setflags(write=False)


@dataclass(frozen=True)
class AdiabaticModel:
    """Reduced 2x2 magnon-only model after eliminating a fast cavity.

    matrix       : 2x2 complex matrix in mode order (m1, m2); the off-diagonal
                   entries are -i*g1*g2/kappa, a purely dissipative coupling
    induced_rate : g1*g2/kappa
    gamma_tilde1 : dressed decay rate gamma1 + g1**2/kappa
    gamma_tilde2 : dressed decay rate gamma2 + g2**2/kappa
    """

    matrix: np.ndarray
    induced_rate: float
    gamma_tilde1: float
    gamma_tilde2: float

    def __post_init__(self):
        self.matrix.setflags(write=False)


@dataclass(frozen=True)
class PolaritonBasis:
    """Unitary map from (a, m1, m2) to the normal modes (dark, upper, lower).

    Row order is (A, B, C) with A = (m1 - m2)/sqrt(2) the dark combination,
    B = (a + (m1 + m2)/sqrt(2))/sqrt(2) and C = (a - (m1 + m2)/sqrt(2))/sqrt(2)
    the two bright, counter-oscillating combinations.
    """

    transform: np.ndarray

    def __post_init__(self):
        self.transform.setflags(write=False)


def polariton_basis() -> PolaritonBasis:
    """Return the symmetric-coupling polariton basis as a unitary matrix."""
    u = np.array(
        [
            [0.0, 1.0 / _SQRT2, -1.0 / _SQRT2],
            [1.0 / _SQRT2, 0.5, 0.5],
            [1.0 / _SQRT2, -0.5, -0.5],
        ],
        dtype=complex,
    )
    return PolaritonBasis(transform=u)


def build_full_hamiltonian(params: SystemParams) -> np.ndarray:
    """Build the 3x3 non-Hermitian coupled-mode matrix in mode order (a, m1, m2).

    The diagonal carries -i*kappa, s - i*gamma1, -s - i*gamma2; the couplings
    g1, g2 sit symmetrically between the cavity and each magnon, and there is
    no direct magnon-magnon element.
    """
    p = params
    return np.array(
        [
            [-1j * p.kappa, p.g1, p.g2],
            [p.g1, p.s - 1j * p.gamma1, 0.0],
            [p.g2, 0.0, -p.s - 1j * p.gamma2],
        ],
        dtype=complex,
    )


def build_driven_system(params: SystemParams, drive: DriveParams) -> EffectiveHamiltonian:
    """Shift into the drive frame: matrix = H - delta*I, force = sqrt(kappa)*(E, 0, 0)."""
    matrix = build_full_hamiltonian(params) - drive.delta * np.eye(3)
    force = np.array([math.sqrt(params.kappa) * drive.amplitude, 0.0, 0.0], dtype=complex)
    return EffectiveHamiltonian(matrix=matrix, force=force)


def drive_amplitude_from_power(power: float, drive_frequency: float) -> float:
    """Convert drive power (W) and angular frequency (rad/s) to an amplitude.

    Returns sqrt(P / (hbar * omega_d)) in units of sqrt(photons/s).
    """
    power = _require_finite("power", power)
    drive_frequency = _require_finite("drive_frequency", drive_frequency)
    if power < 0:
        raise ValueError(f"power must be non-negative, got {power}")
    if drive_frequency <= 0:
        raise ValueError(f"drive_frequency must be positive, got {drive_frequency}")
    return math.sqrt(power / (HBAR * drive_frequency))


def build_adiabatic_model(params: SystemParams) -> AdiabaticModel:
    """Eliminate the cavity by slaving it to the magnons (a = -i(g1 m1 + g2 m2)/kappa).

    Valid when the cavity relaxes much faster than everything else
    (kappa >> g_i, gamma_i).  The reduced matrix is

        [[ s - i*gamma_tilde1,  -i*g1*g2/kappa     ],
         [ -i*g1*g2/kappa,      -s - i*gamma_tilde2]]

    with gamma_tilde_i = gamma_i + g_i**2/kappa: each magnon picks up a
    cavity-induced decay, and the two magnons acquire a purely imaginary
    (dissipative) mutual coupling.
    """
    p = params
    gt1 = p.gamma1 + p.g1 ** 2 / p.kappa
    gt2 = p.gamma2 + p.g2 ** 2 / p.kappa
    rate = p.g1 * p.g2 / p.kappa
    matrix = np.array(
        [
            [p.s - 1j * gt1, -1j * rate],
            [-1j * rate, -p.s - 1j * gt2],
        ],
        dtype=complex,
    )
    return AdiabaticModel(matrix=matrix, induced_rate=rate, gamma_tilde1=gt1, gamma_tilde2=gt2)


def polariton_transform(params: SystemParams) -> np.ndarray:
    """Rotate the undamped, symmetric-coupling system into the polariton basis.

    Uses only the Hermitian part (damping ignored) with g1 = g2 = g.  The
    result is diag(0, sqrt(2)g, -sqrt(2)g) plus s/sqrt(2) couplings that feed
    the dark mode A from the bright modes B and C once s != 0:

        [[ 0,        s/sqrt2,  -s/sqrt2 ],
         [ s/sqrt2,  sqrt2*g,   0       ],
         [-s/sqrt2,  0,        -sqrt2*g ]]

    Raises ValueError for asymmetric couplings, where this basis does not
    diagonalize the s = 0 system.
    """
    if params.g1 != params.g2:
        raise ValueError("polariton basis requires symmetric couplings g1 == g2")
    g, s = params.g1, params.s
    hermitian = np.array(
        [
            [0.0, g, g],
            [g, s, 0.0],
            [g, 0.0, -s],
        ],
        dtype=complex,
    )
    u = polariton_basis().transform
    return u @ hermitian @ u.conj().T


def lindblad_mean_field_drift(hamiltonian_diag, dissipators) -> np.ndarray:
    """Mean-field drift matrix of a two-mode Lindblad master equation.

    For H = delta1*m1'm1 + delta2*m2'm2 and collapse channels
    sigma_k = c_k . (m1, m2) entering as rate_k * L(sigma_k) with
    L(sigma) rho = 2 sigma rho sigma' - sigma'sigma rho - rho sigma'sigma,
    the first moments obey d<Y>/dt = M <Y> with

        M = -i*diag(delta1, delta2) - sum_k rate_k * outer(conj(c_k), c_k).

    With the three channels gamma1*L(m1), gamma2*L(m2) and
    2*(g1 g2/kappa)*L((m1+m2)/sqrt(2)) this reproduces exactly
    -i * build_adiabatic_model(...).matrix for delta = (+s, -s): a shared
    lossy reservoir generates the same dissipative coupling as the
    adiabatically eliminated cavity.
    """
    d1, d2 = hamiltonian_diag
    drift = -1j * np.diag([complex(d1), complex(d2)])
    for rate, coeff in dissipators:
        rate = float(rate)
        if rate < 0:
            raise ValueError(f"dissipator rate must be non-negative, got {rate}")
        c = np.asarray(coeff, dtype=complex)
        if c.shape != (2,):
            raise ValueError(f"dissipator coefficient vector must have length 2, got shape {c.shape}")
        drift = drift - rate * np.outer(c.conj(), c)
    return drift


def coupling_strength_estimate(spin_count: float, cavity_frequency: float, mode_volume: float) -> float:
    """Documented estimate of the collective magnon-photon coupling (rad/s).

    g = (sqrt(5)/2) * gamma_e * sqrt(N) * B_vac with gamma_e = 2pi * 28 GHz/T
    and B_vac = sqrt(mu0 * hbar * omega_c / (2 V)) the vacuum magnetic field
    of a cavity mode of angular frequency omega_c and volume V (SI form of
    the Gaussian-convention sqrt(2 pi hbar omega_c / V)).  For a 1 mm YIG
    sphere (N ~ 1e18 spins) in a centimeter-scale microwave cavity this lands
    in the tens-of-MHz range.  This helper documents how a material-level
    coupling arises; the simulation interface itself takes g directly in
    kappa units.
    """
    if spin_count < 0 or mode_volume <= 0 or cavity_frequency <= 0:
        raise ValueError("spin_count >= 0, cavity_frequency > 0 and mode_volume > 0 required")
    gamma_e = 2 * math.pi * 28e9  # rad/s per tesla
    mu0 = 4 * math.pi * 1e-7
    b_vac = math.sqrt(mu0 * HBAR * cavity_frequency / (2.0 * mode_volume))
    return (math.sqrt(5) / 2) * gamma_e * math.sqrt(spin_count) * b_vac
