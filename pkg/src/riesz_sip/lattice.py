"""Componentwise vector-lattice primitives on R^n.

The codomain of every semi-inner product in this package is R^n with the
componentwise order, which is an Archimedean f-algebra under componentwise
multiplication: it is semiprime (a*a = 0 forces a = 0) and square root
closed on the positive cone. Vectors are plain 1-d float64 numpy arrays;
these helpers validate shapes and keep the order-theoretic operations in
one place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Global tolerance policy: relative tolerance with an absolute floor,
# so comparisons stay meaningful near zero.
DEFAULT_REL_TOL = 1e-9
DEFAULT_ABS_TOL = 1e-12


class DimensionMismatch(ValueError):
    """Operands live in lattices of different dimension."""


class NotInPositiveCone(ValueError):
    """An operation required a vector in F+ but got a genuinely negative entry."""


def as_lattice_vector(values, dim: int | None = None) -> np.ndarray:
    """Coerce to a finite 1-d float64 array, optionally checking its dimension."""
    a = np.asarray(values, dtype=np.float64)
    if a.ndim != 1:
        raise DimensionMismatch(f"expected a 1-d vector, got shape {a.shape}")
    if a.size == 0:
        raise DimensionMismatch("lattice vectors must have dimension >= 1")
    if not np.all(np.isfinite(a)):
        raise ValueError("lattice vector entries must be finite")
    if dim is not None and a.size != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {a.size}")
    return a


def check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimension mismatch: {a.shape} vs {b.shape}")


def meet(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Lattice infimum a ^ b, componentwise minimum."""
    check_same_dim(a, b)
    return np.minimum(a, b)


def join(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Lattice supremum a v b, componentwise maximum."""
    check_same_dim(a, b)
    return np.maximum(a, b)


def abs_val(a: np.ndarray) -> np.ndarray:
    """|a| = a v (-a)."""
    return np.abs(a)


def in_positive_cone(a: np.ndarray, tol: float = 0.0) -> bool:
    """True iff every entry of a is >= -tol."""
    return bool(np.min(a) >= -tol)


def f_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """f-algebra multiplication, componentwise product."""
    check_same_dim(a, b)
    return a * b


def f_sqrt(a: np.ndarray, floor: float = DEFAULT_ABS_TOL) -> np.ndarray:
    """Square root within the positive cone.

    Entries in [-floor, 0) are treated as rounding noise and clamped to 0;
    anything below -floor is a genuine cone violation and is rejected.
    """
    if not in_positive_cone(a, tol=floor):
        raise NotInPositiveCone(f"entry {np.min(a)} is below the -{floor} floor")
    return np.sqrt(np.maximum(a, 0.0))


@dataclass(frozen=True)
class FAlgebraContext:
    """The ambient f-algebra R^dimension with componentwise multiplication.

    Multiplication is fixed; the context only pins the dimension so that
    callers constructing units and zeros cannot mix lattices by accident.
    """

    dimension: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be a positive integer")

    def zero(self) -> np.ndarray:
        return np.zeros(self.dimension)

    def one(self) -> np.ndarray:
        """The multiplicative unit, which is also a weak order unit."""
        return np.ones(self.dimension)

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return f_mul(as_lattice_vector(a, self.dimension),
                     as_lattice_vector(b, self.dimension))

    def sqrt(self, a: np.ndarray) -> np.ndarray:
        return f_sqrt(as_lattice_vector(a, self.dimension))


def rel_residual(lhs: np.ndarray, rhs: np.ndarray,
                 floor: float = DEFAULT_ABS_TOL) -> float:
    """Worst componentwise |lhs - rhs| / (max(|lhs|, |rhs|) + floor).

    Scale-aware residual used by every identity check: relative where the
    operands are large, absolute (against the floor) near zero.
    """
    check_same_dim(lhs, rhs)
    scale = np.maximum(np.abs(lhs), np.abs(rhs)) + floor
    return float(np.max(np.abs(lhs - rhs) / scale))


def cone_violation(a: np.ndarray, scale: np.ndarray | None = None,
                   floor: float = DEFAULT_ABS_TOL) -> float:
    """Worst normalized negative part of a, zero iff a is in F+ up to scale.

    scale defaults to |a| itself; passing the scale of the identity the
    vector came from keeps cone tests commensurate with residual tests.
    """
    if scale is None:
        scale = np.abs(a)
    neg = np.maximum(-a, 0.0)
    return float(np.max(neg / (np.asarray(scale) + floor)))
