"""Generalized boundary-operator symbols mu(xi) and slab parameters.

The boundary condition at the free surface carries a Fourier multiplier
mu(xi) that generalizes gravity-plus-surface-tension.  Built-in families:

* ``fractional``       mu = g + sigma * (2 pi |xi|)^(2 r),   0 <= r <= 1
* ``log_corrected``    mu = g + 2 pi sigma |xi| / (log |xi|)^alpha      for |xi| >= e
* ``loglog_corrected`` mu = g + 2 pi sigma |xi| / (log log |xi|)^alpha  for |xi| >= e^e
* ``tabulated``        nearest-neighbor lookup in a user-supplied table

The corrected families are stitched to g + 2 pi sigma |xi| below the radius
where the correction factor equals 1 (|xi| = e resp. e^e), which keeps mu
continuous.  All built-in families are radial; anisotropy is only available
through tabulated symbols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InterpolationUnavailableError, ParameterError

FAMILIES = ("fractional", "log_corrected", "loglog_corrected", "tabulated")

_LOG_STITCH = math.e
_LOGLOG_STITCH = math.exp(math.e)


@dataclass(frozen=True)
class Symbol:
    """A boundary-operator multiplier mu(xi).

    Immutable after construction; safe to share across workers.
    """

    family: str = "fractional"
    g: float = 1.0
    sigma: float = 1.0
    r: float = 1.0
    alpha: float = 1.0
    table: tuple | None = None  # ((freq, value), ...); freq scalar |xi| or vector
    theta: float = 0.25

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown symbol family {self.family!r}")
        if self.g <= 0:
            raise ParameterError("g must be positive")
        if self.sigma < 0:
            raise ParameterError("sigma must be nonnegative")
        if self.family == "fractional" and not (0.0 <= self.r <= 1.0):
            raise ParameterError("fractional order r must lie in [0, 1]")
        if self.family in ("log_corrected", "loglog_corrected") and self.alpha <= 0:
            raise ParameterError("alpha must be positive")
        if self.theta <= 0:
            raise ParameterError("theta must be positive")
        if self.family == "tabulated":
            if not self.table:
                raise ParameterError("tabulated symbol needs a nonempty table")
            object.__setattr__(self, "table", tuple((_as_key(f), float(v)) for f, v in self.table))

    @property
    def radial(self) -> bool:
        if self.family != "tabulated":
            return True
        return all(np.isscalar(f) for f, _ in self.table)


def _as_key(freq):
    if np.isscalar(freq):
        return float(freq)
    return tuple(float(c) for c in np.asarray(freq, dtype=float))


def _xi_modulus(xi) -> float:
    xi = np.asarray(xi, dtype=float)
    if not np.all(np.isfinite(xi)):
        raise ParameterError("xi must be finite")
    return float(np.linalg.norm(xi)) if xi.ndim else abs(float(xi))


def eval_symbol(sym: Symbol, xi) -> float:
    """Evaluate mu(xi).  ``xi`` may be a scalar modulus or a frequency vector."""
    k = _xi_modulus(xi)
    if sym.family == "fractional":
        if k == 0.0:
            # (2 pi * 0)^(2r) is 0 for r > 0 and 1 for r = 0
            return sym.g + (sym.sigma if sym.r == 0.0 else 0.0)
        return sym.g + sym.sigma * (2.0 * math.pi * k) ** (2.0 * sym.r)
    if sym.family == "log_corrected":
        if k < _LOG_STITCH:
            return sym.g + 2.0 * math.pi * sym.sigma * k
        return sym.g + 2.0 * math.pi * sym.sigma * k / math.log(k) ** sym.alpha
    if sym.family == "loglog_corrected":
        if k < _LOGLOG_STITCH:
            return sym.g + 2.0 * math.pi * sym.sigma * k
        return sym.g + 2.0 * math.pi * sym.sigma * k / math.log(math.log(k)) ** sym.alpha
    return _eval_tabulated(sym, xi, k)


def _eval_tabulated(sym: Symbol, xi, k: float) -> float:
    scalar_query = np.isscalar(xi) or np.asarray(xi).ndim == 0
    if sym.radial:
        keys = np.array([f for f, _ in sym.table])
        vals = np.array([v for _, v in sym.table])
        lo, hi = keys.min(), keys.max()
        pad = 1e-9 * (1.0 + hi)
        if k < lo - pad or k > hi + pad:
            raise InterpolationUnavailableError(
                f"|xi| = {k} outside tabulated range [{lo}, {hi}]"
            )
        return float(vals[np.argmin(np.abs(keys - k))])
    if scalar_query:
        raise InterpolationUnavailableError("vector-frequency table queried with a scalar")
    q = np.asarray(xi, dtype=float)
    keys = np.array([f for f, _ in sym.table], dtype=float)
    if keys.shape[1] != q.size:
        raise InterpolationUnavailableError(
            f"query dimension {q.size} does not match table dimension {keys.shape[1]}"
        )
    d = np.linalg.norm(keys - q[None, :], axis=1)
    i = int(np.argmin(d))
    # nearest neighbor, but refuse queries far from every tabulated point
    spacing = np.median(np.sort(d)[: min(4, d.size)]) + 1e-12
    if d[i] > max(1.0, spacing) and d[i] > 1e-6 * (1.0 + k):
        raise InterpolationUnavailableError(f"query {q.tolist()} too far from table")
    return float(sym.table[i][1])


@dataclass(frozen=True)
class SlabParams:
    """Physical constants of the slab: depth ell, ambient dimension, symbol."""

    ell: float = 1.0
    dim: int = 3
    symbol: Symbol = field(default_factory=Symbol)

    def __post_init__(self):
        if self.ell <= 0:
            raise ParameterError("ell must be positive")
        if self.dim < 2:
            raise ParameterError("dim must be >= 2")

    @property
    def g(self) -> float:
        return self.symbol.g

    def mu(self, xi) -> float:
        return eval_symbol(self.symbol, xi)


@dataclass
class SymbolValidationReport:
    theta: float
    xi_max: float
    samples: int
    lower_violations: list
    upper_violations: list
    cubic_ratio_start: float
    cubic_ratio_end: float
    cubic_decay_observed: bool

    @property
    def passed(self) -> bool:
        return not self.lower_violations and not self.upper_violations


def validate_symbol(sym: Symbol, xi_max: float, samples: int) -> SymbolValidationReport:
    """Check theta <= mu(xi) <= theta^-1 (1+|xi|)^3 on a deterministic sample.

    Also reports whether mu(xi)/|xi|^3 is empirically decaying toward zero,
    which the high-frequency sharpness result requires.
    """
    if samples < 1:
        raise ParameterError("samples must be >= 1")
    if sym.family == "tabulated" and sym.radial:
        keys = np.array([f for f, _ in sym.table])
        moduli = keys[keys <= xi_max]
        if moduli.size == 0:
            moduli = keys[:1]
    else:
        lin = np.linspace(0.0, xi_max, max(2, samples // 2))
        geo = np.geomspace(max(xi_max * 1e-6, 1e-6), xi_max, samples - lin.size + 1) \
            if samples - lin.size + 1 >= 2 else np.array([xi_max])
        moduli = np.unique(np.concatenate([lin, geo]))
    theta = sym.theta
    lower, upper = [], []
    for k in moduli:
        try:
            m = eval_symbol(sym, float(k))
        except InterpolationUnavailableError:
            continue
        if m < theta:
            lower.append((float(k), m))
        if m > (1.0 + k) ** 3 / theta:
            upper.append((float(k), m))
    mid = moduli[moduli > 0]
    if mid.size >= 2:
        k0, k1 = float(mid[mid.size // 2]), float(mid[-1])
        r0 = eval_symbol(sym, k0) / k0 ** 3
        r1 = eval_symbol(sym, k1) / k1 ** 3
    else:
        k1 = float(max(moduli.max(), 1.0))
        r0 = r1 = eval_symbol(sym, k1) / k1 ** 3
    return SymbolValidationReport(
        theta=theta,
        xi_max=float(xi_max),
        samples=int(samples),
        lower_violations=lower,
        upper_violations=upper,
        cubic_ratio_start=r0,
        cubic_ratio_end=r1,
        cubic_decay_observed=bool(r1 < r0 or r1 < 1e-12),
    )


def load_symbol_table(path) -> tuple:
    """Load a tabulated symbol from CSV: (|xi|, mu) or (xi_1..xi_d, mu) columns."""
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    if data.shape[1] < 2:
        raise ParameterError("symbol table needs at least two columns")
    if data.shape[1] == 2:
        return tuple((float(row[0]), float(row[1])) for row in data)
    return tuple((tuple(row[:-1]), float(row[-1])) for row in data)
