"""Cauchy-Schwarz defect for lattice-valued semi-inner products.

For a semi-inner product T and vectors x, y the defect is

    D(x, y) = inf over lambda != 0 of |lambda|^-1 T(lambda*x - y, lambda*x - y),

a positive-cone element measuring how far the pair is from Cauchy-Schwarz
equality. Writing a = T(x,x), b = T(x,y), c = T(y,y), one-variable calculus
per coordinate and per sign of lambda gives the closed form

    D_j = 2*(sqrt(a_j*c_j) - |b_j|),

and with it the exact identity |T(x,y)| = a [*] c - D/2, of which the
Cauchy-Schwarz inequality |T(x,y)| <= T(x,x) [*] T(y,y) is the D >= 0
corollary, with equality iff D = 0.

defect_grid must stay independent of that derivation: it samples the
defining family by evaluating T directly on lambda*x - y over a signed
log-magnitude grid, using neither bilinear expansion nor calculus. The
grid minimum over-estimates the infimum, so grid >= closed always, and
the gap shrinks with grid resolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .lattice import (
    DEFAULT_ABS_TOL,
    DEFAULT_REL_TOL,
    as_lattice_vector,
)
from .means import box_times
from .sip import Sip, sip_eval

LAMBDA_LO = 1e-6
LAMBDA_HI = 1e6
LAMBDA_COUNT = 2001

# Normalized thresholds for the equality <-> zero-defect biconditional.
CONE_BAND = 1e-8
INEQ_FLOOR = 1e-10


@dataclass(frozen=True)
class LambdaGrid:
    """Strictly positive magnitudes; the effective grid is their +- closure."""

    magnitudes: np.ndarray

    def __post_init__(self):
        mags = as_lattice_vector(self.magnitudes)
        if np.min(mags) <= 0.0:
            raise ValueError("lambda magnitudes must be strictly positive")
        if not np.all(np.diff(mags) > 0.0):
            raise ValueError("lambda magnitudes must be strictly increasing")
        object.__setattr__(self, "magnitudes", mags)

    @classmethod
    def log_spaced(cls, lo: float = LAMBDA_LO, hi: float = LAMBDA_HI,
                   count: int = LAMBDA_COUNT) -> "LambdaGrid":
        if not (0.0 < lo < hi) or count < 2:
            raise ValueError("need 0 < lo < hi and count >= 2")
        return cls(np.logspace(np.log10(lo), np.log10(hi), count))

    @property
    def count(self) -> int:
        return int(self.magnitudes.size)

    @cached_property
    def signed(self) -> np.ndarray:
        return np.concatenate([-self.magnitudes[::-1], self.magnitudes])


@dataclass(frozen=True)
class DefectResult:
    closed: np.ndarray
    grid: np.ndarray
    gap: np.ndarray  # grid - closed, in F+ up to rounding


def _gram(T: Sip, x, y) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return sip_eval(T, x, x), sip_eval(T, x, y), sip_eval(T, y, y)


def defect_closed(T: Sip, x, y) -> np.ndarray:
    """Closed-form defect 2*(sqrt(T(x,x)*T(y,y)) - |T(x,y)|) componentwise.

    The factors under the root are clamped at 0 (they can round negative
    when a coordinate of T(x,x) or T(y,y) is a rounded zero), which keeps
    the root's domain safe and matches the clamping box_times applies. The
    result itself is not clamped: its membership in F+ is a theorem under
    the axioms, and a genuine negative value must surface as a violation,
    not be hidden.
    """
    a, b, c = _gram(T, x, y)
    return 2.0 * (np.sqrt(np.maximum(a, 0.0) * np.maximum(c, 0.0)) - np.abs(b))


def defect_grid(T: Sip, x, y, grid: LambdaGrid | None = None) -> np.ndarray:
    """Componentwise min of |lambda|^-1 T(lambda*x - y, lambda*x - y) over the grid.

    Evaluates T on the difference vectors directly, with no bilinear
    expansion, so this oracle shares nothing with the closed form beyond T
    itself. Over-estimates the true infimum by construction.
    """
    x = as_lattice_vector(x, T.domain_dim)
    y = as_lattice_vector(y, T.domain_dim)
    grid = grid or LambdaGrid.log_spaced()
    lam = grid.signed
    Z = lam[:, None] * x[None, :] - y[None, :]
    vals = T.eval_batch(Z, Z) / np.abs(lam)[:, None]
    return vals.min(axis=0)


def defect_with_oracle(T: Sip, x, y,
                       grid: LambdaGrid | None = None) -> DefectResult:
    closed = defect_closed(T, x, y)
    sampled = defect_grid(T, x, y, grid)
    return DefectResult(closed=closed, grid=sampled, gap=sampled - closed)


def cs_identity_residual(T: Sip, x, y,
                         floor: float = DEFAULT_ABS_TOL) -> np.ndarray:
    """Raw residual of |T(x,y)| = T(x,x) [*] T(y,y) - D(x,y)/2, componentwise."""
    a, b, c = _gram(T, x, y)
    # T(x,x), T(y,y) are in F+ up to rounding of PSD arithmetic; give the
    # geometric mean a scale-aware clamping floor rather than the bare
    # absolute one.
    cone_floor = DEFAULT_REL_TOL * float(np.max(np.abs(a)) + np.max(np.abs(c))) + floor
    bound = box_times(a, c, floor=cone_floor)
    return np.abs(b) - (bound - 0.5 * defect_closed(T, x, y))


@dataclass(frozen=True)
class CsCheck:
    inequality_ok: bool
    equality_holds: bool
    defect_zero: bool
    borderline: bool


def cs_check(T: Sip, x, y, band: float = CONE_BAND,
             floor: float = DEFAULT_ABS_TOL) -> CsCheck:
    """Inequality plus the equality <-> zero-defect biconditional.

    All quantities are normalized by max(sqrt(a*c), |b|) per coordinate, so
    the verdicts are scale free. equality_holds tests sqrt(a*c) - |b| and
    defect_zero tests D/2 against the same band; the two are equal by the
    closed form, so on non-borderline trials the biconditional is exact.
    Trials whose normalized gap lands in (band/8, 8*band) are flagged
    borderline instead of being forced to a verdict.
    """
    a, b, c = _gram(T, x, y)
    bound = np.sqrt(np.maximum(a, 0.0) * np.maximum(c, 0.0))
    scale = np.maximum(bound, np.abs(b)) + floor
    margin = (bound - np.abs(b)) / scale
    eq_gap = float(max(np.max(margin), 0.0))
    defect_n = float(max(np.max(0.5 * defect_closed(T, x, y) / scale), 0.0))
    worst = max(eq_gap, defect_n)
    return CsCheck(
        inequality_ok=bool(np.min(margin) >= -INEQ_FLOOR),
        equality_holds=eq_gap <= band,
        defect_zero=defect_n <= band,
        borderline=band / 8.0 < worst < 8.0 * band,
    )
