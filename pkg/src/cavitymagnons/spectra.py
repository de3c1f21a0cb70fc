"""Complex eigenvalue spectra, branch tracking and exceptional-point search.

Two regimes of the three-mode system are of interest: strong coupling with
comparable linewidths, where the eigenfrequencies repel with a minimum gap of
2*sqrt(2)*g, and the weak-coupling / bad-cavity regime, where the magnon-like
eigenvalues attract and coalesce at exceptional points of the reduced two-mode
model located at s = +/- g1*g2/kappa.

The 3x3 eigenvalues are computed from the characteristic cubic in closed form
(depressed cubic via complex Cardano) with one Newton polish per root; tests
validate them against companion-matrix and LAPACK eigensolvers.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, replace

import numpy as np

from .model import AdiabaticModel, SystemParams, build_adiabatic_model, build_full_hamiltonian

# A pair of eigenvalues closer than this (in kappa units) counts as coalesced.
EP_GAP_TOLERANCE = 1e-6
# Bracket refinement width for the exceptional-point search, in kappa units.
# The gap rises as sqrt(|s - s_ep|) away from a coalescence, so reaching a
# 1e-6 gap requires localizing s far more tightly than 1e-6.
EP_SEARCH_XATOL = 1e-13

_OMEGA = cmath.exp(2j * math.pi / 3)  # primitive cube root of unity


class ExceptionalPointNotFound(ValueError):
    """Raised when no eigenvalue coalescence exists inside the search bracket."""


@dataclass(frozen=True)
class EigenBranchSet:
    """Continuity-tracked eigenvalue branches along a sweep in s.

    sweep_values    : (n,) real sweep points, strictly increasing
    branches        : (n, k) complex, column j is one persistent branch; at each
                      sweep point the columns are a permutation of the raw
                      eigenvalues (tracking only reorders, never alters)
    ambiguous_spans : sweep intervals where two branches are numerically
                      coalesced and the assignment between them is arbitrary
                      (square-root topology at an exceptional point)
    """

    sweep_values: np.ndarray
    branches: np.ndarray
    ambiguous_spans: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        self.sweep_values.setflags(write=False)
        self.branches.setflags(write=False)

    def magnon_branch_indices(self) -> tuple[int, int]:
        """Identify the (plus, minus) magnon-like branches.

        At the sweep endpoint with the largest |s| the magnon-like branches
        have real parts closest to +s and -s; the remaining branch (if any) is
        cavity-like.  Labels propagate across the sweep by branch continuity.
        """
        k = self.branches.shape[1]
        end = -1 if abs(self.sweep_values[-1]) >= abs(self.sweep_values[0]) else 0
        s_end = self.sweep_values[end]
        values = self.branches[end]
        plus = int(np.argmin(np.abs(values.real - s_end)))
        rest = [j for j in range(k) if j != plus]
        minus = rest[int(np.argmin(np.abs(values[rest].real + s_end)))]
        return plus, minus

    def cavity_branch_index(self) -> int:
        """Index of the branch that is neither of the magnon-like pair."""
        if self.branches.shape[1] != 3:
            raise ValueError("cavity branch only defined for the three-mode sweep")
        plus, minus = self.magnon_branch_indices()
        return ({0, 1, 2} - {plus, minus}).pop()


@dataclass(frozen=True)
class ExceptionalPoint:
    """Location of an eigenvalue coalescence along the s axis.

    location         : s value minimizing the branch gap
    degenerate_value : the (nearly) common eigenvalue there
    gap_at_location  : residual |lambda_plus - lambda_minus|
    """

    location: float
    degenerate_value: complex
    gap_at_location: float


def _cubic_roots(b: complex, c: complex, d: complex) -> np.ndarray:
    """Roots of the monic cubic x^3 + b x^2 + c x + d with complex coefficients."""
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    if p == 0 and q == 0:
        return np.full(3, -shift, dtype=complex)
    disc = cmath.sqrt((q / 2.0) ** 2 + (p / 3.0) ** 3)
    # Pick the branch that avoids cancellation in -q/2 +/- disc.
    u3 = -q / 2.0 + disc
    alt = -q / 2.0 - disc
    if abs(alt) > abs(u3):
        u3 = alt
    u = u3 ** (1.0 / 3.0)
    v = -p / (3.0 * u)
    roots = np.array(
        [
            u + v,
            u * _OMEGA + v * _OMEGA.conjugate(),
            u * _OMEGA.conjugate() + v * _OMEGA,
        ],
        dtype=complex,
    )
    return roots - shift


def _polish_root(x: complex, b: complex, c: complex, d: complex) -> complex:
    """One guarded Newton step on the monic cubic; controls Cardano cancellation.

    The step is kept only if it reduces the residual (near multiple roots the
    derivative collapses and a raw step could fly off).
    """
    f = ((x + b) * x + c) * x + d
    df = (3.0 * x + 2.0 * b) * x + c
    if df == 0:
        return x
    x_new = x - f / df
    f_new = ((x_new + b) * x_new + c) * x_new + d
    return x_new if abs(f_new) <= abs(f) else x


def eigenvalues_3x3(matrix: np.ndarray) -> np.ndarray:
    """Three complex eigenvalues of a 3x3 matrix via its characteristic cubic.

    Uses the closed-form depressed cubic with one Newton polish per root;
    after polishing each root satisfies |det(lambda I - H)| <= 1e-9 ||H||^3.
    """
    h = np.asarray(matrix, dtype=complex)
    if h.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise ValueError("matrix entries must be finite")
    trace = h[0, 0] + h[1, 1] + h[2, 2]
    minors = (
        h[1, 1] * h[2, 2] - h[1, 2] * h[2, 1]
        + h[0, 0] * h[2, 2] - h[0, 2] * h[2, 0]
        + h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0]
    )
    det = (
        h[0, 0] * (h[1, 1] * h[2, 2] - h[1, 2] * h[2, 1])
        - h[0, 1] * (h[1, 0] * h[2, 2] - h[1, 2] * h[2, 0])
        + h[0, 2] * (h[1, 0] * h[2, 1] - h[1, 1] * h[2, 0])
    )
    b, c, d = -trace, minors, -det
    roots = _cubic_roots(b, c, d)
    return np.array([_polish_root(x, b, c, d) for x in roots], dtype=complex)


def closed_form_symmetric(params: SystemParams) -> np.ndarray:
    """Eigenvalues (lambda0, lambda+, lambda-) for kappa = gamma1 = gamma2, g1 = g2.

    lambda0 = -i*kappa and lambda+- = -i*kappa +/- sqrt(s^2 + 2 g^2): all three
    linewidths are identical and the real parts repel with minimum gap
    2*sqrt(2)*g at s = 0.
    """
    p = params
    if not (p.kappa == p.gamma1 == p.gamma2):
        raise ValueError("closed form requires kappa == gamma1 == gamma2")
    if p.g1 != p.g2:
        raise ValueError("closed form requires g1 == g2")
    split = math.sqrt(p.s ** 2 + 2.0 * p.g1 ** 2)
    lam0 = -1j * p.kappa
    return np.array([lam0, lam0 + split, lam0 - split], dtype=complex)


def weak_coupling_approx(params: SystemParams) -> np.ndarray:
    """Approximate eigenvalues (lambda0, lambda+, lambda-) for g, |s| << kappa, gamma ~ 0.

    lambda0  = -i*kappa*(1 - 2 g^2/(s^2 + kappa^2))   (cavity-like)
    lambda+- = -i*Gamma +/- i*sqrt(Gamma^2 - s^2)     (magnon-like), Gamma = g^2/kappa

    Inside |s| < Gamma the magnon pair is purely imaginary with coinciding real
    parts (level attraction) and coalesces at s = +/- Gamma; at s = 0 the
    narrow branch lambda+ is exactly 0 and the broad one is -2i*Gamma.
    Validity is the caller's concern; no parameter checks beyond symmetry.
    """
    p = params
    if p.g1 != p.g2:
        raise ValueError("weak-coupling form requires g1 == g2")
    g, s, kappa = p.g1, p.s, p.kappa
    big_gamma = g ** 2 / kappa
    lam0 = -1j * kappa * (1.0 - 2.0 * g ** 2 / (s ** 2 + kappa ** 2))
    radical = cmath.sqrt(complex(big_gamma ** 2 - s ** 2))
    return np.array(
        [lam0, -1j * big_gamma + 1j * radical, -1j * big_gamma - 1j * radical],
        dtype=complex,
    )


def adiabatic_eigenvalues(model: AdiabaticModel) -> np.ndarray:
    """Eigenvalues (lambda+, lambda-) of the reduced two-mode model, symmetric case.

    lambda+- = -i*(gamma + g^2/kappa) +/- sqrt(s^2 - (g1 g2/kappa)^2).  The
    radical is independent of gamma, so the phase-transition points sit at
    s = +/- g1 g2/kappa regardless of the magnon damping.
    """
    if model.gamma_tilde1 != model.gamma_tilde2:
        raise ValueError("closed-form adiabatic eigenvalues require equal dressed dampings")
    s = model.matrix[0, 0].real
    radical = cmath.sqrt(complex(s ** 2 - model.induced_rate ** 2))
    common = -1j * model.gamma_tilde1
    return np.array([common + radical, common - radical], dtype=complex)


def track_branches(raw: np.ndarray, ambiguity_tol: float = 1e-9) -> tuple[np.ndarray, list[int]]:
    """Assign raw eigenvalues (n, k) to persistent branches by nearest matching.

    Between consecutive sweep points the permutation minimizing the summed
    complex-plane displacement is chosen (ties prefer the identity).  Steps
    where the best and runner-up assignments are indistinguishable (within
    ambiguity_tol relative) are reported: there the branches are coalesced and
    either assignment is valid.
    """
    raw = np.asarray(raw, dtype=complex)
    n, k = raw.shape
    tracked = raw.copy()
    ambiguous_steps: list[int] = []
    perms = list(itertools.permutations(range(k)))
    for i in range(1, n):
        prev = tracked[i - 1]
        costs = [sum(abs(raw[i, p[j]] - prev[j]) for j in range(k)) for p in perms]
        order = int(np.argmin(costs))
        best = costs[order]
        runner_up = min(c for m, c in enumerate(costs) if m != order)
        scale = max(best, np.abs(raw[i]).max(), 1e-300)
        if runner_up - best <= ambiguity_tol * scale:
            ambiguous_steps.append(i)
        tracked[i] = raw[i, list(perms[order])]
    return tracked, ambiguous_steps


def sweep_eigenvalues(
    params: SystemParams,
    s_min: float,
    s_max: float,
    n_points: int,
    adiabatic: bool = False,
) -> EigenBranchSet:
    """Eigenvalues along an s sweep with continuity-tracked branch identity.

    The full three-mode spectrum is used unless adiabatic=True, which sweeps
    the reduced two-mode model instead.  Sweep points are uniform in s.
    """
    if n_points < 1:
        raise ValueError(f"n_points must be at least 1, got {n_points}")
    if s_max < s_min:
        raise ValueError(f"empty sweep range [{s_min}, {s_max}]")
    s_values = np.linspace(s_min, s_max, n_points)
    rows = []
    for s in s_values:
        point = replace(params, s=float(s))
        if adiabatic:
            rows.append(np.linalg.eigvals(build_adiabatic_model(point).matrix))
        else:
            rows.append(eigenvalues_3x3(build_full_hamiltonian(point)))
    tracked, ambiguous = track_branches(np.array(rows))
    spans = tuple(
        (float(s_values[i - 1]), float(s_values[i])) for i in ambiguous
    )
    return EigenBranchSet(sweep_values=s_values, branches=tracked, ambiguous_spans=spans)


def _eig_2x2(matrix: np.ndarray) -> np.ndarray:
    """Closed-form 2x2 eigenvalues; exact through a coalescence, where iterative
    eigensolvers leave sqrt(eps)-size splittings on a defective matrix."""
    mean = (matrix[0, 0] + matrix[1, 1]) / 2.0
    radical = cmath.sqrt(((matrix[0, 0] - matrix[1, 1]) / 2.0) ** 2 + matrix[0, 1] * matrix[1, 0])
    return np.array([mean + radical, mean - radical], dtype=complex)


def _golden_section_min(func, a: float, b: float, xatol: float) -> float:
    """Golden-section minimum of a unimodal scalar function on [a, b].

    Uses an absolute interval tolerance: unlike smooth-minimum stopping rules
    (which give up at sqrt(eps)*|x| resolution) this keeps shrinking the
    bracket, which matters at a square-root cusp where the function still
    varies strongly at tiny scales.
    """
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1, f2 = func(x1), func(x2)
    while b - a > xatol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = func(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = func(x2)
    return 0.5 * (a + b)


def _magnon_pair_gap(params: SystemParams, s: float, adiabatic: bool) -> tuple[float, complex]:
    point = replace(params, s=float(s))
    if adiabatic:
        values = _eig_2x2(build_adiabatic_model(point).matrix)
    else:
        values = eigenvalues_3x3(build_full_hamiltonian(point))
        # In the bad-cavity regime the cavity-like eigenvalue is by far the
        # broadest; drop it and keep the magnon-like pair.
        values = np.delete(values, np.argmin(values.imag))
    gap = abs(values[0] - values[1])
    return gap, complex(values.mean())


def find_exceptional_point(
    params: SystemParams,
    s_min: float,
    s_max: float,
    model: str = "adiabatic",
) -> ExceptionalPoint:
    """Locate an eigenvalue coalescence of the magnon-like pair in [s_min, s_max].

    Minimizes the pair gap |lambda+ - lambda-| by golden-section search,
    refined to EP_SEARCH_XATOL*kappa in s.  By default the search runs on the
    reduced two-mode model, whose coalescence sits exactly at s = g1*g2/kappa
    for equal dressed dampings; model="full" searches the three-mode spectrum
    instead (its coalescence is shifted upward by O(g^2/kappa^2) relative
    corrections).  Raises ExceptionalPointNotFound when the residual gap at
    the minimum exceeds EP_GAP_TOLERANCE*kappa.
    """
    if model not in ("adiabatic", "full"):
        raise ValueError(f"model must be 'adiabatic' or 'full', got {model!r}")
    if s_max <= s_min:
        raise ValueError(f"empty search bracket [{s_min}, {s_max}]")
    adiabatic = model == "adiabatic"
    location = _golden_section_min(
        lambda s: _magnon_pair_gap(params, s, adiabatic)[0],
        float(s_min),
        float(s_max),
        EP_SEARCH_XATOL * params.kappa,
    )
    gap, value = _magnon_pair_gap(params, location, adiabatic)
    if gap > EP_GAP_TOLERANCE * params.kappa:
        raise ExceptionalPointNotFound(
            f"no coalescence in [{s_min}, {s_max}]: minimum gap {gap:.3e} at s={location:.6g} "
            f"exceeds {EP_GAP_TOLERANCE * params.kappa:.1e}"
        )
    return ExceptionalPoint(location=location, degenerate_value=value, gap_at_location=gap)
