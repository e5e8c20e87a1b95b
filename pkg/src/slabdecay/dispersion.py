"""Dispersion relation of the per-frequency slab problem.

Separable solutions e^{-rho t} of the transformed system exist exactly when a
4x4 determinant vanishes.  This module builds that matrix (with per-column
scaling so that huge exponentials never overflow), locates the slow surface
root by bracketed bisection at high frequency and by Newton continuation in
the parameter kappa (rho = 4 pi^2 kappa |xi|^2) at low frequency, and
reconstructs the exact mode profile belonging to a root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ContinuationFailedError,
    DegenerateExponentError,
    DegenerateParameterError,
    HypothesisNotMetError,
    NoRootInBracketError,
    NotARootError,
    ParameterError,
)
from .symbols import SlabParams, eval_symbol

TWO_PI = 2.0 * math.pi

# Bisection bracket in units of mu/|xi|.  The leading term of the determinant
# expansion is proportional to kappa (1 - 4 pi kappa) mu/|xi|^3, so the sign
# change sits just above kappa = 1/(4 pi); these endpoints straddle it and
# coincide with the admissible range for the root.
KAPPA_MINUS = 1.0 / (4.0 * math.pi)
KAPPA_PLUS = 1.0 + 1.0 / (4.0 * math.pi)

# Test hook: flips the sign of the -2*sqrt(..) coefficient in Gamma_43.
# Used by the verification suite to confirm the bracket test has teeth.
_GAMMA43_COEFF = -2.0


def largeness_ok(xi_mod: float, mu: float) -> bool:
    """High-frequency hypothesis: (1 + 1/(4 pi)) mu(xi) / |xi|^3 < 1."""
    return (1.0 + 1.0 / (4.0 * math.pi)) * mu / xi_mod ** 3 < 1.0


def exponents(rho: complex, xi_mod: float) -> np.ndarray:
    """Vertical exponents a_1..a_4; principal branch fixes a_3."""
    a1 = TWO_PI * xi_mod
    a3 = np.sqrt(complex(4.0 * math.pi ** 2 * xi_mod ** 2 - rho))
    return np.array([a1, -a1, a3, -a3], dtype=complex)


@dataclass
class DispersionMatrix:
    """Column-scaled dispersion matrix.

    ``entries`` is A(rho, xi) with column j multiplied by
    exp(-max(0, Re a_j) * ell); ``scaling`` holds those positive factors as
    log values, so the unscaled determinant is
    det(entries) * exp(sum(log_scaling)).
    """

    entries: np.ndarray
    log_scaling: np.ndarray
    rho: complex
    xi_mod: float
    mu: float
    ell: float

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.entries))

    @property
    def scale(self) -> float:
        """Hadamard-type magnitude of the scaled matrix, for relative residuals."""
        return float(np.prod(np.linalg.norm(self.entries, axis=0))) or 1.0


def _gammas(rho: complex, xi_mod: float, mu: float):
    k = xi_mod
    a3 = np.sqrt(complex(4.0 * math.pi ** 2 * k ** 2 - rho))
    g23 = a3 / (TWO_PI * k)
    g33 = 1.0 - rho / (8.0 * math.pi ** 2 * k ** 2)
    g41 = (rho / (TWO_PI * k) - 4.0 * math.pi * k) * rho / mu + 1.0
    g42 = (-rho / (TWO_PI * k) + 4.0 * math.pi * k) * rho / mu + 1.0
    g43 = _GAMMA43_COEFF * a3 * rho / mu + 1.0
    g44 = 2.0 * a3 * rho / mu + 1.0
    return a3, g23, g33, g41, g42, g43, g44


def build_matrix(rho: complex, xi_mod: float, mu: float, ell: float) -> DispersionMatrix:
    """Assemble the column-scaled 4x4 dispersion matrix A(rho, xi)."""
    if xi_mod <= 0:
        raise ParameterError("xi_mod must be positive")
    k = xi_mod
    degen = 4.0 * math.pi ** 2 * k ** 2
    if abs(complex(rho) - degen) <= 1e-13 * degen:
        raise DegenerateExponentError(
            f"rho = 4 pi^2 |xi|^2 = {degen} makes the exponents coincide"
        )
    a3, g23, g33, g41, g42, g43, g44 = _gammas(rho, k, mu)
    a = np.array([TWO_PI * k, -TWO_PI * k, a3, -a3], dtype=complex)
    log_scaling = np.maximum(0.0, a.real) * ell
    # exp(a_j * ell) with the column scaling folded in; |.| <= 1 always
    e = np.exp(a * ell - log_scaling)
    s = np.exp(-log_scaling)
    entries = np.array(
        [
            [s[0], s[1], s[2], s[3]],
            [s[0], -s[1], g23 * s[2], -g23 * s[3]],
            [e[0], e[1], g33 * e[2], g33 * e[3]],
            [g41 * e[0], g42 * e[1], g43 * e[2], g44 * e[3]],
        ],
        dtype=complex,
    )
    return DispersionMatrix(entries, log_scaling, complex(rho), k, mu, ell)


def det_dispersion(rho: complex, xi_mod: float, mu: float, ell: float) -> complex:
    """Determinant of the scaled matrix.  Sign-faithful for real rho below
    the degeneracy, since the removed factors are positive reals."""
    return build_matrix(rho, xi_mod, mu, ell).det


@dataclass
class DispersionResult:
    rho: complex
    kappa: complex | None
    bracket: tuple | None
    det_residual: float
    null_vector: np.ndarray | None
    iterations: int
    method: str
    meta: dict = field(default_factory=dict)


def null_vector(mat: DispersionMatrix, tol: float = 1e-6) -> np.ndarray:
    """Unit-norm vector minimizing ||A v|| (smallest right singular vector)."""
    u, sv, vh = np.linalg.svd(mat.entries)
    if sv[-1] > tol * sv[0]:
        raise NotARootError(
            f"matrix is numerically full rank (sigma_min/sigma_max = {sv[-1] / sv[0]:.3e})"
        )
    return vh[-1].conj()


def _result_at_root(rho, xi_mod, mu, ell, *, kappa, bracket, iterations, method, **meta):
    mat = build_matrix(rho, xi_mod, mu, ell)
    vec = null_vector(mat, tol=1e-4)
    return DispersionResult(
        rho=complex(rho),
        kappa=kappa,
        bracket=bracket,
        det_residual=abs(mat.det) / mat.scale,
        null_vector=vec,
        iterations=iterations,
        method=method,
        meta=meta,
    )


def find_high_freq_root(
    xi_mod: float,
    mu: float,
    ell: float,
    rtol: float = 1e-12,
    max_iter: int = 200,
) -> DispersionResult:
    """Bisect the real determinant on the bracket (1/(4pi), 1+1/(4pi)) mu/|xi|.

    The determinant is negative at the lower endpoint and positive at the
    upper one once |xi| is large enough.  If the endpoint signs disagree with
    that (a finite-|xi| effect), the bracket interior is scanned for a sign
    change; failing that, the lower endpoint is relaxed by the size of the
    neglected higher-order terms, since the crossing can sit an O(mu/|xi|^3)
    relative distance below it (the leading determinant term vanishes there).
    """
    if not largeness_ok(xi_mod, mu):
        raise HypothesisNotMetError(
            f"(1+1/4pi) mu/|xi|^3 = {(1 + 1 / (4 * math.pi)) * mu / xi_mod ** 3:.4f} >= 1"
        )
    unit = mu / xi_mod

    def f(rho):
        return det_dispersion(rho, xi_mod, mu, ell).real

    lo, hi = KAPPA_MINUS * unit, KAPPA_PLUS * unit
    flo, fhi = f(lo), f(hi)
    if not (flo < 0.0 < fhi):
        # finite-|xi| effect: look for a sign change inside the bracket,
        # then just below its lower endpoint
        grid = np.concatenate([
            np.geomspace(0.9 * lo, lo, 65)[:-1], np.linspace(lo, hi, 65)
        ])
        vals = np.array([f(r) for r in grid])
        idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        if idx.size == 0:
            raise NoRootInBracketError(
                f"no sign change of det on the admissible bracket at |xi| = {xi_mod}"
            )
        lo, hi = grid[idx[0]], grid[idx[0] + 1]
        flo, fhi = vals[idx[0]], vals[idx[0] + 1]
    iters = 0
    while iters < max_iter and (hi - lo) > rtol * hi:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            lo = hi = mid
            break
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
        iters += 1
    rho = 0.5 * (lo + hi)
    return _result_at_root(
        rho, xi_mod, mu, ell,
        kappa=None,
        bracket=(KAPPA_MINUS * unit, KAPPA_PLUS * unit),
        iterations=iters,
        method="bracket",
    )


def _kappa_objective(kappa: complex, xi_mod: float, mu: float, ell: float) -> complex:
    """det A / Gamma_23 as a function of kappa.

    The determinant is odd in a_3 (swapping a_3 <-> a_4 swaps columns 3 and 4
    together with their coefficients), so dividing by Gamma_23 ~ sqrt(1-kappa)
    removes the branch ambiguity of the square root and leaves a function
    analytic in kappa away from kappa = 1.
    """
    rho = 4.0 * math.pi ** 2 * kappa * xi_mod ** 2
    mat = build_matrix(rho, xi_mod, mu, ell)
    g23 = mat.entries[1, 2] / mat.entries[0, 2]
    if abs(g23) < 1e-300:
        raise DegenerateExponentError("kappa too close to 1")
    return mat.det / g23


def find_low_freq_root(
    xi_mod: float,
    slab: SlabParams,
    rtol: float = 1e-12,
    max_iter: int = 50,
    seed_radius: float = 0.5,
) -> DispersionResult:
    """Newton continuation in kappa, seeded at kappa_0 = mu(0) ell^3 / 3.

    mu(0) is the zero-frequency symbol value; it equals g except for symbols
    whose surface-tension part survives at xi = 0 (fractional r = 0), where
    sigma acts as additional effective gravity.  Returns
    rho = 4 pi^2 kappa |xi|^2.  kappa can be complex when mu(0) ell^3 / 3 > 1
    (the square root 1 - kappa leaves the real axis).  ``seed_radius`` is the
    largest |xi| for which the seed is trusted.
    """
    ell = slab.ell
    mu0 = slab.mu(0.0)
    if abs(mu0 - 3.0 / ell ** 3) <= 1e-12 * max(mu0, 1.0):
        raise DegenerateParameterError(
            "g = 3/ell^3 (zero-frequency weight) makes the seed kappa_0 = 1 degenerate")
    if xi_mod <= 0:
        raise ParameterError("xi_mod must be positive")
    if xi_mod > seed_radius:
        raise ContinuationFailedError(
            f"|xi| = {xi_mod} exceeds the trusted seed radius {seed_radius}"
        )
    mu = slab.mu(xi_mod)
    kappa0 = mu0 * ell ** 3 / 3.0
    kappa = complex(kappa0)
    h = 1e-7 * (1.0 + abs(kappa))
    iters = 0
    for iters in range(1, max_iter + 1):
        q = _kappa_objective(kappa, xi_mod, mu, ell)
        dq = (_kappa_objective(kappa + h, xi_mod, mu, ell)
              - _kappa_objective(kappa - h, xi_mod, mu, ell)) / (2.0 * h)
        if dq == 0 or not np.isfinite(dq):
            raise ContinuationFailedError("Newton derivative vanished")
        step = q / dq
        kappa -= step
        if not np.isfinite(kappa) or abs(kappa - kappa0) > 0.9 * max(1.0, abs(kappa0)):
            raise ContinuationFailedError(
                f"Newton left the continuation neighborhood at |xi| = {xi_mod}"
            )
        if abs(step) <= rtol * (1.0 + abs(kappa)):
            break
    else:
        raise ContinuationFailedError(f"Newton did not converge in {max_iter} iterations")
    rho = 4.0 * math.pi ** 2 * kappa * xi_mod ** 2
    return _result_at_root(
        rho, xi_mod, mu, ell,
        kappa=kappa,
        bracket=None,
        iterations=iters,
        method="low_freq",
        seed=kappa0,
    )


def find_scan_root(
    xi_mod: float,
    mu: float,
    ell: float,
    scan_points: int = 512,
    rtol: float = 1e-12,
) -> DispersionResult:
    """Fallback: sign-change search for a real root on a rho grid in
    (0, 4 pi^2 |xi|^2), then bisection.  Targets the slowest (first) root."""
    top = 4.0 * math.pi ** 2 * xi_mod ** 2
    grid = np.linspace(0.0, top, scan_points + 1)[1:-1]
    vals = np.array([det_dispersion(r, xi_mod, mu, ell).real for r in grid])
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if idx.size == 0:
        raise NoRootInBracketError(f"no real root found by scan at |xi| = {xi_mod}")
    lo, hi = grid[idx[0]], grid[idx[0] + 1]
    flo = vals[idx[0]]
    iters = 0
    while iters < 200 and (hi - lo) > rtol * hi:
        mid = 0.5 * (lo + hi)
        fm = det_dispersion(mid, xi_mod, mu, ell).real
        if fm == 0.0:
            lo = hi = mid
            break
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
        iters += 1
    rho = 0.5 * (lo + hi)
    return _result_at_root(
        rho, xi_mod, mu, ell,
        kappa=None,
        bracket=(float(grid[idx[0]]), float(grid[idx[0] + 1])),
        iterations=iters,
        method="scan",
    )


@dataclass
class ModeProfile:
    """Exact separable mode on a uniform y-grid, with attached residuals."""

    grid: np.ndarray
    v: np.ndarray          # vertical velocity profile
    w: np.ndarray          # longitudinal horizontal velocity profile
    p: np.ndarray          # pressure profile
    h: complex             # surface amplitude
    a: np.ndarray          # vertical exponents a_1..a_4
    coeffs: np.ndarray     # v_j in column-scaled form (v_j_phys = coeffs * exp(-log_scaling))
    log_scaling: np.ndarray
    rho: complex
    xi_mod: float
    mu: float
    ell: float
    residuals: dict = field(default_factory=dict)


def reconstruct_mode(
    result: DispersionResult, xi_mod: float, mu: float, ell: float, grid_size: int = 257
) -> ModeProfile:
    """Evaluate the mode profiles belonging to a converged root.

    All four exponential terms are evaluated in column-scaled form
    coeff_j * exp(a_j y - max(0, Re a_j) ell), which is bounded on [0, ell]
    even at large |xi|.
    """
    rho = result.rho
    k = xi_mod
    a = exponents(rho, k)
    log_scaling = np.maximum(0.0, a.real) * ell
    c = result.null_vector
    y = np.linspace(0.0, ell, grid_size)
    # basis terms and their y-derivatives, shape (4, len(y))
    ey = np.exp(np.outer(a, y) - log_scaling[:, None])
    v = c @ ey
    dv = (c * a) @ ey
    ddv = (c * a ** 2) @ ey
    # longitudinal w = sum_j (a_j / (2 pi |xi|)) v_j e^{a_j y}
    wc = c * a / (TWO_PI * k)
    w = wc @ ey
    dw = (wc * a) @ ey
    ddw = (wc * a ** 2) @ ey
    # p_j = -(4 pi^2 |xi|^2 - rho - a_j^2) v_j / a_j  (zero for j = 3, 4)
    pc = -(4.0 * math.pi ** 2 * k ** 2 - rho - a ** 2) * c / a
    p = pc @ ey
    dp = (pc * a) @ ey
    h = -v[-1] / rho
    scale = max(np.abs(v).max(), np.abs(w).max(), np.abs(p).max(), abs(h), 1e-300)
    res = {
        "bulk_div": float(np.abs(-TWO_PI * k * w + dv).max()) / scale,
        "bulk_w": float(np.abs(-rho * w + TWO_PI * k * p + 4 * math.pi ** 2 * k ** 2 * w - ddw).max()) / scale,
        "bulk_v": float(np.abs(-rho * v + dp + 4 * math.pi ** 2 * k ** 2 * v - ddv).max()) / scale,
        "bot_v": float(abs(v[0])) / scale,
        "bot_w": float(abs(w[0])) / scale,
        "top_shear": float(abs(TWO_PI * k * v[-1] + dw[-1])) / scale,
        "top_stress": float(abs(p[-1] - 2.0 * dv[-1] - mu * h)) / scale,
        "kinematic": float(abs(-rho * h - v[-1])) / scale,
    }
    return ModeProfile(
        grid=y, v=v, w=w, p=p, h=h, a=a, coeffs=c, log_scaling=log_scaling,
        rho=rho, xi_mod=k, mu=mu, ell=ell, residuals=res,
    )


def sweep_dispersion(
    slab: SlabParams,
    xi_list,
    crossover: float = 1.0,
    scan_points: int = 512,
    seed_radius: float = 0.5,
) -> list:
    """Per-frequency root find: bracket where the largeness hypothesis holds,
    Newton continuation below the crossover, real-axis scan in between.

    Returns a list of (xi_mod, DispersionResult | SlabDecayError); errors are
    recorded in-row and the sweep continues.
    """
    xi_list = list(xi_list)
    if not xi_list:
        raise ParameterError("xi_list must be nonempty")
    rows = []
    for xi in xi_list:
        k = float(xi)
        if k <= 0:
            rows.append((k, ParameterError("xi_mod must be positive")))
            continue
        mu = slab.mu(k)
        try:
            if largeness_ok(k, mu):
                rows.append((k, find_high_freq_root(k, mu, slab.ell)))
            elif k < crossover:
                rows.append((k, find_low_freq_root(k, slab, seed_radius=max(seed_radius, crossover))))
            else:
                rows.append((k, find_scan_root(k, mu, slab.ell, scan_points=scan_points)))
        except Exception as err:  # per-row errors recorded, sweep continues
            rows.append((k, err))
    return rows
