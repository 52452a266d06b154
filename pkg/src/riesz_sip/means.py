"""Geometric and square means on the positive cone of R^n.

Two binary means defined by variational formulas over the componentwise
lattice order:

    u [*] v = (1/2) inf { theta*u + v/theta : theta in (0, inf) }
    a [+] b = sup { cos(t)*a + sin(t)*b : t in [0, 2*pi] }

On R^n both have closed forms, sqrt(u*v) and sqrt(a^2 + b^2) componentwise.
The closed forms are the production path; the grid oracles realize the
defining inf/sup directly and are used to cross-check them. By construction
the theta oracle over-estimates the infimum and the angle oracle
under-estimates the supremum, so closed form and oracle always sandwich the
true value from opposite sides.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .lattice import (
    DEFAULT_ABS_TOL,
    NotInPositiveCone,
    as_lattice_vector,
    check_same_dim,
    in_positive_cone,
)

# Default grid resolutions. The theta range must be wide because the
# componentwise minimizer is sqrt(v_j/u_j), which spans the squared dynamic
# range of the inputs.
THETA_LO = 1e-8
THETA_HI = 1e8
THETA_COUNT = 10_000
ANGLE_COUNT = 4096


@dataclass(frozen=True)
class ThetaGrid:
    """Strictly positive, strictly increasing multiplier grid for the [*] infimum."""

    points: np.ndarray

    def __post_init__(self):
        pts = as_lattice_vector(self.points)
        if np.min(pts) <= 0.0:
            raise ValueError("theta grid points must be strictly positive")
        if not np.all(np.diff(pts) > 0.0):
            raise ValueError("theta grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def log_spaced(cls, lo: float = THETA_LO, hi: float = THETA_HI,
                   count: int = THETA_COUNT) -> "ThetaGrid":
        if not (0.0 < lo < hi) or count < 2:
            raise ValueError("need 0 < lo < hi and count >= 2")
        return cls(np.logspace(np.log10(lo), np.log10(hi), count))

    @property
    def lo(self) -> float:
        return float(self.points[0])

    @property
    def hi(self) -> float:
        return float(self.points[-1])

    @property
    def count(self) -> int:
        return int(self.points.size)

    def covers(self, values: np.ndarray) -> bool:
        """True iff every finite positive value lies inside [lo, hi].

        Used to flag oracle evaluations whose componentwise minimizer falls
        outside the grid, where the one-sided over-estimate is not tight.
        """
        v = np.asarray(values, dtype=np.float64)
        mask = np.isfinite(v) & (v > 0.0)
        if not np.any(mask):
            return True
        return bool(np.min(v[mask]) >= self.lo and np.max(v[mask]) <= self.hi)


@dataclass(frozen=True)
class AngleGrid:
    """Sorted angle grid on [0, 2*pi] for the [+] supremum.

    Invariant: covers both endpoints 0 and 2*pi. The uniform constructor
    has count divisible by 4, so the axis angles 0, pi/2, pi, 3*pi/2 are
    grid points exactly (spacing is pi over a power of two times an
    integer); this makes a [+] 0 = |a| exact rather than approximate.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = as_lattice_vector(self.points)
        if not np.all(np.diff(pts) > 0.0):
            raise ValueError("angle grid points must be strictly increasing")
        if pts[0] != 0.0 or abs(pts[-1] - 2.0 * np.pi) > 1e-15:
            raise ValueError("angle grid must cover the endpoints 0 and 2*pi")
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, count: int = ANGLE_COUNT) -> "AngleGrid":
        if count < 4:
            raise ValueError("need at least 4 angles")
        base = np.arange(count) * (2.0 * np.pi / count)
        axes = np.array([0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi, 2.0 * np.pi])
        return cls(np.unique(np.concatenate([base, axes])))

    @property
    def count(self) -> int:
        return int(self.points.size)

    @cached_property
    def _trig(self) -> tuple[np.ndarray, np.ndarray]:
        return np.cos(self.points), np.sin(self.points)


def _require_cone(name: str, a: np.ndarray, floor: float) -> np.ndarray:
    if not in_positive_cone(a, tol=floor):
        raise NotInPositiveCone(
            f"{name} requires arguments in F+: entry {np.min(a)} is below -{floor}")
    return np.maximum(a, 0.0)


def box_times(u, v, floor: float = DEFAULT_ABS_TOL) -> np.ndarray:
    """Geometric mean u [*] v = sqrt(u*v) componentwise.

    Arguments must lie in the positive cone; entries within the rounding
    floor are clamped to 0 first, so the product under the root is >= 0 and
    either argument being 0 in a slot gives 0 there.
    """
    u = as_lattice_vector(u)
    v = as_lattice_vector(v)
    check_same_dim(u, v)
    u = _require_cone("box_times", u, floor)
    v = _require_cone("box_times", v, floor)
    return np.sqrt(u * v)


def box_times_oracle(u, v, grid: ThetaGrid | None = None,
                     floor: float = DEFAULT_ABS_TOL) -> np.ndarray:
    """Grid realization of (1/2) inf_theta (theta*u + v/theta).

    Always an over-estimate of the true infimum: the min is taken over a
    finite sample of multipliers. No special casing of zero entries; when a
    componentwise minimizer sqrt(v_j/u_j) falls outside the grid range the
    over-estimate is not tight (ThetaGrid.covers flags that situation).
    """
    u = as_lattice_vector(u)
    v = as_lattice_vector(v)
    check_same_dim(u, v)
    u = _require_cone("box_times_oracle", u, floor)
    v = _require_cone("box_times_oracle", v, floor)
    grid = grid or ThetaGrid.log_spaced()
    th = grid.points
    vals = 0.5 * (th[:, None] * u[None, :] + (1.0 / th)[:, None] * v[None, :])
    return vals.min(axis=0)


def theta_minimizer(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Componentwise argmin sqrt(v/u) of theta -> (theta*u + v/theta)/2.

    Entries with u = 0 have no finite minimizer (inf), entries with v = 0
    minimize at 0; both are returned as-is for ThetaGrid.covers to ignore.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.sqrt(np.divide(v, u))


def box_plus(a, b) -> np.ndarray:
    """Square mean a [+] b = sqrt(a^2 + b^2) componentwise, any signs."""
    a = as_lattice_vector(a)
    b = as_lattice_vector(b)
    check_same_dim(a, b)
    return np.hypot(a, b)


def box_plus_oracle(a, b, grid: AngleGrid | None = None,
                    quarter: bool = False) -> np.ndarray:
    """Grid realization of sup_t (cos(t)*a + sin(t)*b).

    Always an under-estimate of the true supremum. With quarter=True only
    angles in [0, pi/2] are used, which is sufficient (and equal, up to the
    shared grid points) when both arguments lie in the positive cone.
    """
    a = as_lattice_vector(a)
    b = as_lattice_vector(b)
    check_same_dim(a, b)
    grid = grid or AngleGrid.uniform()
    cos_t, sin_t = grid._trig
    if quarter:
        keep = grid.points <= 0.5 * np.pi
        cos_t, sin_t = cos_t[keep], sin_t[keep]
    vals = cos_t[:, None] * a[None, :] + sin_t[:, None] * b[None, :]
    return vals.max(axis=0)
